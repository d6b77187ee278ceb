//! Track the two crests of the pinch data for a short time: the trace of
//! 1/Z,α′ and Z_tt there, the crest velocity and the tangent near the crest.
//!
//! `cargo run --release --example crest_rigidity -- 2048` for the full grid.

use crestflow::initialdata::{disc_crest_pinch, CrestSpec};
use crestflow::spectral::Grid;
use crestflow::stepper::StepControl;
use crestflow::verify::rigidity_track;

fn main() -> crestflow::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(512);
    let g = Grid::with_offset(n, 0.5)?;
    let data = disc_crest_pinch(&g, &CrestSpec::new(0.3, 0.1))?;
    let ctrl = StepControl { cfl: 1.0, ..StepControl::new(0.5 * g.spacing(), 0.2) };
    let (trace, v, _) = rigidity_track(data.state, &ctrl, 0.05)?;
    for s in &trace.samples {
        let inner = s.angle.last().map_or(0.0, |a| a.1);
        println!(
            "t = {:.2}  |1/Z'| {:.3e} {:.3e}  |Z_tt| {:.3e} {:.3e}  Z_t(crest) {:.8}  |r - 1| {:.2e}  d {:.6}",
            s.t, s.inv[0], s.inv[1], s.ztt[0], s.ztt[1], s.zt_crest, inner, s.d
        );
    }
    println!("{v:#?}");
    Ok(())
}
