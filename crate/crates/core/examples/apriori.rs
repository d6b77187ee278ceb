//! Fit the constant in dE_a/dt ≤ c·B·E_a along smooth runs, and check it is
//! stable when the grid and the step are refined.

use crestflow::initialdata::{line_wave, linear_wave_velocity, rotational_dilation};
use crestflow::spectral::Grid;
use crestflow::stepper::StepControl;
use crestflow::verify::{monitor_apriori, record_energies};

fn main() -> crestflow::Result<()> {
    for (n, dt) in [(64, 0.01), (128, 0.01), (64, 0.005)] {
        let g = Grid::with_offset(n, 0.5)?;
        let ctrl = StepControl { cfl: 1.0, ..StepControl::new(dt, 2.0) };
        let line = line_wave(&g, 1.0, 0.05, 2, linear_wave_velocity(1.0, 0.05, 2))?;
        let (traj, _) = record_energies(line, &ctrl, 0.05)?;
        let a = monitor_apriori(&traj)?;
        let (traj, _) = record_energies(rotational_dilation(&g, 0.1), &ctrl, 0.05)?;
        let b = monitor_apriori(&traj)?;
        println!(
            "n = {n:3} dt = {dt}: line c = {:.6e} (envelope {:.4}), circle c = {:.6e} (envelope {:.4})",
            a.fitted_c, a.envelope_ratio, b.fitted_c, b.envelope_ratio
        );
    }
    Ok(())
}
