//! Two crests approaching at relative speed v = 2ε until the run loses
//! resolution, and the ε → 2ε comparison of the bracket ends.
//!
//! `cargo run --release --example pinch -- 2048` for the full grid.

use crestflow::initialdata::CrestSpec;
use crestflow::verify::{pinch_experiment, PinchConfig};

fn main() -> crestflow::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(512);
    let cfg = PinchConfig { n, ..Default::default() };
    let mut ends = Vec::new();
    for eps in [0.1, 0.2] {
        let r = pinch_experiment(&CrestSpec::new(0.3, eps), &cfg)?;
        println!("eps = {eps}: d0 = {:.6}, v = {}, E(0) = {:.6e}", r.d0, r.v, r.e0);
        for s in r.samples.iter().step_by(r.samples.len() / 8 + 1) {
            println!(
                "  t = {:7.3}  d = {:.6}  d0 - vt = {:.6}  B = {:.4e}",
                s.t,
                s.d,
                r.d0 - r.v * s.t,
                s.report.blowup_b
            );
        }
        println!(
            "  stop {} at t = {:.4} = {:.3} d/v; d deviation {:.2e}; B eventually increasing: {}",
            r.stop.as_str(),
            r.t_stop,
            r.t_stop / r.upper,
            r.d_deviation,
            r.b_eventually_increasing
        );
        println!("  bracket [{:.6e}, {:.6e}]", r.lower, r.upper);
        ends.push((r.lower, r.upper));
    }
    println!("ratios under eps -> 2 eps: lower {:.4}, upper {:.4}", ends[1].0 / ends[0].0, ends[1].1 / ends[0].1);
    Ok(())
}
