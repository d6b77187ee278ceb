//! Commutator brackets of order one to three, by Fourier multipliers and by
//! the alternating-point quadrature, on a smooth disc state.

use crestflow::initialdata::disc_random;
use crestflow::spectral::{bracket, BracketMethod, Convention, Grid};

fn main() -> crestflow::Result<()> {
    for n in [32, 64, 128] {
        let g = Grid::with_offset(n, 0.5)?;
        let s = disc_random(&g, 1)?;
        let (f1, f2, f3, h) = (s.zt(), s.q.clone(), s.ztbar.clone(), s.inv_zap());
        print!("n = {n:4}:");
        for order in 1..=3 {
            let fs = [&f1, &f2, &f3];
            let m = bracket(order, &fs[..order], &h, BracketMethod::Multiplier, Convention::Disc)?;
            let q = bracket(order, &fs[..order], &h, BracketMethod::Quadrature, Convention::Disc)?;
            print!("  order {order} gap {:.2e}", (&m - &q).max_abs() / m.max_abs().max(1e-300));
        }
        println!();
    }
    Ok(())
}
