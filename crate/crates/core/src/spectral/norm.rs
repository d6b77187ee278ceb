use std::f64::consts::PI;

use super::Field;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormKind {
    L2,
    Linf,
    Hhalf,
    /// Sum of the L∞ and Ḣ½ norms.
    LinfCapHhalf,
}

pub fn norm(kind: NormKind, f: &Field) -> Result<f64> {
    f.check_finite("norm input")?;
    Ok(match kind {
        NormKind::L2 => l2(f),
        NormKind::Linf => linf(f),
        NormKind::Hhalf => hhalf(f),
        NormKind::LinfCapHhalf => linf(f) + hhalf(f),
    })
}

pub fn l2_sq(f: &Field) -> f64 {
    f.values().iter().map(|z| z.norm_sqr()).sum::<f64>() * f.grid().spacing()
}

pub fn l2(f: &Field) -> f64 {
    l2_sq(f).sqrt()
}

pub fn linf(f: &Field) -> f64 {
    f.max_abs()
}

/// 2π Σ |m| |f̂(m)|² over all stored modes.
pub fn hhalf_sq(f: &Field) -> f64 {
    let g = f.grid();
    f.coeffs().iter().enumerate().map(|(j, c)| g.mode(j).unsigned_abs() as f64 * c.norm_sqr()).sum::<f64>() * 2.0 * PI
}

pub fn hhalf(f: &Field) -> f64 {
    hhalf_sq(f).sqrt()
}

/// Ḣ½ seminorm squared from the double integral
/// (1/8π) ∬ |f(α) - f(β)|² / sin²((α-β)/2) dα dβ.
///
/// The inner integral uses only nodes at odd offsets from the target (weight
/// 2h), which never touches the diagonal and converges spectrally.
pub fn hhalf_quadrature_sq(f: &Field) -> f64 {
    let g = f.grid();
    let n = g.n();
    let h = g.spacing();
    let v = f.values();
    let nodes = g.nodes();
    let mut total = 0.0;
    for i in 0..n {
        let mut s = 0.0;
        for j in ((i + 1) % 2..n).step_by(2) {
            let x = 0.5 * (nodes[j] - nodes[i]);
            let d = (v[i] - v[j]).norm() / x.sin();
            s += d * d;
        }
        total += s * 2.0 * h;
    }
    total * h / (8.0 * PI)
}

pub fn hhalf_quadrature(f: &Field) -> f64 {
    hhalf_quadrature_sq(f).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use crate::C64;

    #[test]
    fn single_mode_values() {
        let g = Grid::new(64).unwrap();
        let f = Field::mode(&g, 2, C64::new(1.0, 0.0));
        assert!((hhalf(&f) - (4.0 * PI).sqrt()).abs() < 1e-12);
        let one = Field::constant(&g, C64::new(1.0, 0.0));
        assert!((l2(&one) - (2.0 * PI).sqrt()).abs() < 1e-13);
        assert_eq!(norm(NormKind::LinfCapHhalf, &one).unwrap(), 1.0);
    }

    #[test]
    fn quadrature_matches_multiplier() {
        let g = Grid::with_offset(256, 0.5).unwrap();
        let f = Field::from_fn(&g, |a| C64::from_polar(1.0, a) + C64::from_polar(0.3, 3.0 * a));
        let q = hhalf_quadrature(&f);
        let m = hhalf(&f);
        assert!((q - m).abs() / m < 1e-12, "{q} {m}");
    }
}
