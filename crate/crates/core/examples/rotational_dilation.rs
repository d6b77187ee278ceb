//! The unit circle with velocity Z_t = -ε e^{-iα′}: energies against their
//! closed forms, and a short run.

use std::f64::consts::PI;

use crestflow::energies::energy_report;
use crestflow::initialdata::rotational_dilation;
use crestflow::model::Derived;
use crestflow::spectral::Grid;
use crestflow::stepper::{evolve, Cadence, StepControl};

fn main() -> crestflow::Result<()> {
    let eps = 0.1;
    let g = Grid::with_offset(128, 0.5)?;
    let s = rotational_dilation(&g, eps);
    let d = Derived::compute(&s)?;
    println!(
        "A0 range [{:.3e}, {:.3e}], eps^2 = {:.3e}",
        d.a.min_re(),
        d.a.values().iter().map(|z| z.re).fold(0.0, f64::max),
        eps * eps
    );
    let r = energy_report(&s)?;
    println!("E1   {:.15e}  closed form {:.15e}", r.e1, 8.0 * PI * PI * eps * eps);
    println!("E2   {:.15e}  closed form {:.15e}", r.e2, 144.0 * PI * PI * eps.powi(4));
    println!("E3   {:.3e}", r.e3);
    println!("Ecal {:.15e}  closed form {:.15e}", r.ecal, 4.0 * PI * PI * eps * eps);
    println!("B    {:.15e}  closed form {:.15e}", r.blowup_b, eps * (1.0 + 4.0 * PI));

    let ctrl = StepControl::new(0.01, 1.0);
    evolve(s, &ctrl, Cadence::Time(0.25), &mut |x| {
        if let Ok(r) = energy_report(x.state) {
            println!("t = {:.2}  E = {:.6e}  B = {:.6e}", x.state.t, r.e, r.blowup_b);
        }
        true
    })?;
    Ok(())
}
