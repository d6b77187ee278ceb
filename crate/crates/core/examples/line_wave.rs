//! A small gravity wave on the periodic line with g = 1, and the flat rest
//! state which must not move.

use crestflow::energies::energy_report;
use crestflow::initialdata::{line_rest, line_wave, linear_wave_velocity};
use crestflow::spectral::Grid;
use crestflow::stepper::{evolve, Cadence, StepControl};

fn main() -> crestflow::Result<()> {
    let g = Grid::with_offset(128, 0.5)?;
    let (a, k) = (0.05, 2);
    let s = line_wave(&g, 1.0, a, k, linear_wave_velocity(1.0, a, k))?;
    let ctrl = StepControl::new(0.01, 2.0);
    let out = evolve(s, &ctrl, Cadence::Time(0.5), &mut |x| {
        if let Ok(r) = energy_report(x.state) {
            println!(
                "t = {:.2}  E1 = {:.6e}  E = {:.6e}  Ecal_b = {:.6e}",
                x.state.t,
                r.e1,
                r.e,
                r.ecal_b.unwrap_or(f64::NAN)
            );
        }
        true
    })?;
    println!("stop: {}", out.stop.as_str());

    let rest = line_rest(&g, 1.0)?;
    let after = evolve(rest.clone(), &StepControl::new(0.05, 1.0), Cadence::Steps(1000), &mut |_| true)?;
    println!("rest state drift after t = 1: {:.2e}", (&after.state.z - &rest.z).max_abs());
    Ok(())
}
