//! The registered identity checks on the circle and on seeded random disc
//! states, followed by a refinement table.

use crestflow::initialdata::{disc_random, rotational_dilation};
use crestflow::spectral::Grid;
use crestflow::verify::{refinement, run_identity_suite};

fn main() -> crestflow::Result<()> {
    let g = Grid::with_offset(256, 0.5)?;
    let mut states = vec![("circle".to_string(), rotational_dilation(&g, 0.1))];
    for seed in 0..3 {
        states.push((format!("random {seed}"), disc_random(&g, seed)?));
    }
    for (name, s) in &states {
        println!("{name}");
        for r in run_identity_suite(s, name) {
            println!("  {:20} rel {:.2e} {}", r.name, r.rel_gap, if r.passed { "ok" } else { "FAIL" });
        }
    }
    println!("refinement (relative gap at n = 32, 64, 128)");
    let build = |g: &Grid| disc_random(g, 0).expect("seeded state");
    for row in refinement(&build, &[32, 64, 128], 0.5, 8.0, 1e-11)? {
        let gaps: Vec<String> = row.gaps.iter().map(|(_, v)| format!("{v:.1e}")).collect();
        println!("  {:20} {}  spectral: {}", row.name, gaps.join("  "), row.spectral);
    }
    Ok(())
}
