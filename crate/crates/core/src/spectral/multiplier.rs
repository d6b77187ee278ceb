use num_complex::Complex64 as C64;

use super::Field;
use crate::error::Result;

/// Which boundary the Hilbert transform belongs to.
///
/// `Disc` has symbol sgn(m): traces of functions holomorphic in the unit disc
/// carry modes m >= 0. `Line` has symbol -sgn(m): periodic traces of functions
/// holomorphic in the lower half-plane carry modes m <= 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Convention {
    Disc,
    Line,
}

impl Convention {
    /// sgn of the Hilbert symbol on mode m, with the mean sent to 0.
    pub fn sign(self, m: i64) -> f64 {
        let s = m.signum() as f64;
        match self {
            Convention::Disc => s,
            Convention::Line => -s,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultiplierKind {
    /// `plus = false` is the mean-killing transform H̃, `plus = true` adds the
    /// average back (ℍ = H̃ + Av).
    Hilbert {
        conv: Convention,
        plus: bool,
    },
    AbsD,
    AbsDHalf,
    Deriv,
    /// (I + ℍ)/2: keeps the holomorphic modes and the mean.
    ProjHolo(Convention),
    /// (I - ℍ)/2: keeps the anti-holomorphic modes, drops the mean.
    ProjAnti(Convention),
}

impl MultiplierKind {
    pub const fn hilbert_disc() -> Self {
        MultiplierKind::Hilbert { conv: Convention::Disc, plus: false }
    }
    pub const fn hilbert_line() -> Self {
        MultiplierKind::Hilbert { conv: Convention::Line, plus: false }
    }

    pub fn symbol(self, m: i64) -> C64 {
        let re = |x: f64| C64::new(x, 0.0);
        match self {
            MultiplierKind::Hilbert { conv, plus } => re(conv.sign(m) + if plus && m == 0 { 1.0 } else { 0.0 }),
            MultiplierKind::AbsD => re(m.unsigned_abs() as f64),
            MultiplierKind::AbsDHalf => re((m.unsigned_abs() as f64).sqrt()),
            MultiplierKind::Deriv => C64::new(0.0, m as f64),
            MultiplierKind::ProjHolo(conv) => re(if m == 0 { 1.0 } else { 0.5 * (1.0 + conv.sign(m)) }),
            MultiplierKind::ProjAnti(conv) => re(if m == 0 { 0.0 } else { 0.5 * (1.0 - conv.sign(m)) }),
        }
    }
}

/// Apply a multiplier in coefficient space; modes above the cutoff are zeroed.
pub fn apply_multiplier(kind: MultiplierKind, f: &Field) -> Result<Field> {
    f.check_finite("multiplier input")?;
    Ok(apply(kind, f))
}

/// Unchecked form of [`apply_multiplier`].
pub fn apply(kind: MultiplierKind, f: &Field) -> Field {
    let grid = f.grid();
    let k = grid.cutoff() as i64;
    let c = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, &c)| {
            let m = grid.mode(j);
            if m.abs() <= k {
                c * kind.symbol(m)
            } else {
                C64::default()
            }
        })
        .collect();
    Field::from_coeffs(grid, c)
}

impl Field {
    /// Spectral derivative in the parameter.
    pub fn deriv(&self) -> Field {
        apply(MultiplierKind::Deriv, self)
    }

    /// Mean-killing Hilbert transform H̃ in the given convention.
    pub fn hilbert(&self, conv: Convention) -> Field {
        apply(MultiplierKind::Hilbert { conv, plus: false }, self)
    }

    /// ℍ = H̃ + Av.
    pub fn hilbert_plus(&self, conv: Convention) -> Field {
        apply(MultiplierKind::Hilbert { conv, plus: true }, self)
    }
}
