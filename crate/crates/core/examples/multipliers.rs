//! Fourier multipliers on a 64-point grid: Hilbert transforms in both
//! conventions, |∂|, the projections, and the norms.

use crestflow::spectral::{apply, hhalf, hhalf_quadrature, l2, linf, Convention, Field, Grid, MultiplierKind};
use crestflow::C64;

fn main() -> crestflow::Result<()> {
    let g = Grid::with_offset(64, 0.5)?;
    let f = Field::from_modes(&g, &[(-3, C64::new(0.5, 0.0)), (0, C64::new(1.0, 0.0)), (2, C64::new(0.0, 0.25))])?;

    for conv in [Convention::Disc, Convention::Line] {
        let h = f.hilbert(conv);
        println!("{conv:?}: H e^(2ia) coefficient {:.3}, H e^(-3ia) coefficient {:.3}", h.coeff(2), h.coeff(-3));
        let twice = h.hilbert(conv);
        println!("  |H H f - (f - mean)|_inf = {:.2e}", (&twice - &f.add_const(-f.mean())).max_abs());
    }

    let absd = apply(MultiplierKind::AbsD, &f);
    println!("|d| f on mode -3: {:.3}", absd.coeff(-3));
    let holo = apply(MultiplierKind::ProjHolo(Convention::Disc), &f);
    let anti = apply(MultiplierKind::ProjAnti(Convention::Disc), &f);
    println!("P+ f + P- f - f: {:.2e}", (&(&holo + &anti) - &f).max_abs());

    println!("L2 {:.6}  Linf {:.6}", l2(&f), linf(&f));
    println!("H1/2 by multiplier {:.12}, by quadrature {:.12}", hhalf(&f), hhalf_quadrature(&f));
    Ok(())
}
