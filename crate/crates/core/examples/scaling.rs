//! Energy covariance under the dilation family on the line, at t = 0 and
//! between co-run trajectories.

use crestflow::initialdata::{line_wave, linear_wave_velocity};
use crestflow::scaling::{check_covariance, time_covariance, ScalingParams};
use crestflow::spectral::Grid;

fn main() -> crestflow::Result<()> {
    let g = Grid::with_offset(64, 0.5)?;
    let s = line_wave(&g, 1.0, 0.05, 2, linear_wave_velocity(1.0, 0.05, 2))?;
    for (num, den, sv) in [(2, 1, 0.5), (2, 1, 1.0), (1, 2, 0.0)] {
        let p = ScalingParams::new(num, den, sv)?;
        println!("lambda = {num}/{den}, s = {sv}, g_lambda = {}", p.gravity(1.0));
        for c in check_covariance(&s, &p)? {
            println!("  t = 0   {:8} relgap {:.2e}", c.name, c.relgap);
        }
        for c in time_covariance(&s, &p, 0.01, 0.5, 5)? {
            println!("  co-run  {:8} relgap {:.2e}", c.name, c.relgap);
        }
    }
    Ok(())
}
