use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_complex::Complex64 as C64;

use super::Grid;
use crate::error::{Error, Result};

/// Complex samples on a [`Grid`] with a lazily computed coefficient view.
///
/// Coefficients use f̂(m) = (1/2π)∫ f e^{-imα} dα, so f(α) = Σ f̂(m) e^{imα}.
#[derive(Clone)]
pub struct Field {
    grid: Grid,
    values: Vec<C64>,
    coeffs: OnceLock<Vec<C64>>,
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Field").field("grid", &self.grid).field("max_abs", &self.max_abs()).finish()
    }
}

impl Field {
    pub fn from_values(grid: &Grid, values: Vec<C64>) -> Self {
        assert_eq!(values.len(), grid.n(), "sample count must equal grid size");
        Field { grid: grid.clone(), values, coeffs: OnceLock::new() }
    }

    pub fn from_real(grid: &Grid, values: Vec<f64>) -> Self {
        Self::from_values(grid, values.into_iter().map(|x| C64::new(x, 0.0)).collect())
    }

    /// Build from coefficients in FFT index order. The given coefficients are
    /// kept as the cached spectral view, so a save/load cycle through
    /// coefficients reproduces the samples bit for bit.
    pub fn from_coeffs(grid: &Grid, coeffs: Vec<C64>) -> Self {
        assert_eq!(coeffs.len(), grid.n(), "coefficient count must equal grid size");
        let values = grid.inverse(&coeffs);
        let cell = OnceLock::new();
        let _ = cell.set(coeffs);
        Field { grid: grid.clone(), values, coeffs: cell }
    }

    /// Build from a list of (mode, amplitude) pairs.
    pub fn from_modes(grid: &Grid, modes: &[(i64, C64)]) -> Result<Self> {
        let mut c = vec![C64::new(0.0, 0.0); grid.n()];
        for &(m, a) in modes {
            let j = grid
                .index_of(m)
                .ok_or_else(|| Error::InvalidInput(format!("mode {m} not representable on n={}", grid.n())))?;
            c[j] += a;
        }
        Ok(Self::from_coeffs(grid, c))
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> C64) -> Self {
        Self::from_values(grid, grid.nodes().iter().map(|&a| f(a)).collect())
    }

    pub fn constant(grid: &Grid, c: C64) -> Self {
        Self::from_values(grid, vec![c; grid.n()])
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::constant(grid, C64::new(0.0, 0.0))
    }

    /// e^{ikα} times `amp`.
    pub fn mode(grid: &Grid, k: i64, amp: C64) -> Self {
        Self::from_fn(grid, |a| amp * C64::from_polar(1.0, k as f64 * a))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    pub fn values(&self) -> &[C64] {
        &self.values
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn coeffs(&self) -> &[C64] {
        self.coeffs.get_or_init(|| self.grid.forward(&self.values))
    }

    pub fn coeff(&self, m: i64) -> C64 {
        self.grid.index_of(m).map(|j| self.coeffs()[j]).unwrap_or_default()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn check_finite(&self, what: &str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("{what} has non-finite samples")))
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().fold(0.0, |m, z| m.max(z.im.abs()))
    }

    pub fn min_re(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, z| m.min(z.re))
    }

    /// Average over the circle (the m = 0 coefficient).
    pub fn mean(&self) -> C64 {
        self.values.iter().sum::<C64>() / self.values.len() as f64
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Field {
        Field::from_values(&self.grid, self.values.iter().map(|&z| f(z)).collect())
    }

    pub fn zip_map(&self, other: &Field, f: impl Fn(C64, C64) -> C64) -> Field {
        assert!(self.grid.same_as(&other.grid), "grid mismatch");
        Field::from_values(&self.grid, self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect())
    }

    pub fn conj(&self) -> Field {
        self.map(|z| z.conj())
    }
    pub fn re(&self) -> Field {
        self.map(|z| C64::new(z.re, 0.0))
    }
    /// Imaginary part as a real-valued field.
    pub fn im(&self) -> Field {
        self.map(|z| C64::new(z.im, 0.0))
    }
    pub fn abs(&self) -> Field {
        self.map(|z| C64::new(z.norm(), 0.0))
    }
    pub fn recip(&self) -> Field {
        self.map(|z| z.inv())
    }
    pub fn sqrt_re(&self) -> Field {
        self.map(|z| C64::new(z.re.max(0.0).sqrt(), 0.0))
    }
    pub fn scale(&self, c: C64) -> Field {
        self.map(|z| z * c)
    }
    pub fn scale_re(&self, c: f64) -> Field {
        self.map(|z| z * c)
    }
    pub fn add_const(&self, c: C64) -> Field {
        self.map(|z| z + c)
    }

    /// Zero all modes above the grid cutoff.
    pub fn truncate(&self) -> Field {
        self.truncate_to(self.grid.cutoff())
    }

    pub fn truncate_to(&self, k: usize) -> Field {
        let k = k as i64;
        let c = self
            .coeffs()
            .iter()
            .enumerate()
            .map(|(j, &c)| if self.grid.mode(j).abs() <= k { c } else { C64::default() })
            .collect();
        Field::from_coeffs(&self.grid, c)
    }

    /// Truncate to the cutoff and zero coefficients below `eps` times the
    /// largest coefficient.
    pub fn dealias(&self, eps: f64) -> Field {
        let k = self.grid.cutoff() as i64;
        let cs = self.coeffs();
        let top = cs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        let floor = eps * top;
        let c = cs
            .iter()
            .enumerate()
            .map(|(j, &c)| if self.grid.mode(j).abs() <= k && c.norm() >= floor { c } else { C64::default() })
            .collect();
        Field::from_coeffs(&self.grid, c)
    }

    /// Fraction of spectral energy in modes with |m| > k.
    pub fn tail_fraction(&self, k: usize) -> f64 {
        let (mut hi, mut all) = (0.0, 0.0);
        for (j, c) in self.coeffs().iter().enumerate() {
            let e = c.norm_sqr();
            all += e;
            if self.grid.mode(j).unsigned_abs() as usize > k {
                hi += e;
            }
        }
        if all > 0.0 {
            hi / all
        } else {
            0.0
        }
    }

    /// Largest |m| with a coefficient above `tol` times the largest one.
    pub fn highest_mode(&self, tol: f64) -> usize {
        let cs = self.coeffs();
        let top = cs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        let mut k = 0;
        for (j, c) in cs.iter().enumerate() {
            if c.norm() > tol * top {
                k = k.max(self.grid.mode(j).unsigned_abs() as usize);
            }
        }
        k
    }

    /// Trigonometric interpolant evaluated at `alpha`.
    pub fn interpolate(&self, alpha: f64) -> C64 {
        let g = &self.grid;
        let n = g.n() as i64;
        let cs = self.coeffs();
        let w = C64::from_polar(1.0, alpha);
        // Horner in e^{iα} for m >= 0 and in e^{-iα} for m < 0
        let mut pos = C64::default();
        for m in (0..n / 2).rev() {
            pos = pos * w + cs[m as usize];
        }
        let mut neg = C64::default();
        for m in (1..=n / 2).rev() {
            neg = neg * w.conj() + cs[(n - m) as usize];
        }
        pos + neg * w.conj()
    }

    /// Zero-pad or truncate to a grid with `m` nodes (same offset, default
    /// cutoff). The flag is set when nonzero content had to be dropped.
    pub fn resample(&self, m: usize) -> Result<(Field, bool)> {
        let target = Grid::with_offset(m, self.grid.offset())?;
        self.resample_onto(&target)
    }

    pub fn resample_onto(&self, target: &Grid) -> Result<(Field, bool)> {
        let cs = self.coeffs();
        let top = cs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        let mut out = vec![C64::default(); target.n()];
        let mut lossy = false;
        for (j, &c) in cs.iter().enumerate() {
            match target.index_of(self.grid.mode(j)) {
                Some(i) => out[i] = c,
                None => lossy |= c.norm() > 1e-14 * top,
            }
        }
        Ok((Field::from_coeffs(target, out), lossy))
    }

    pub fn check_grid(&self, other: &Field) -> Result<()> {
        if self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)))
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr<&Field> for &Field {
            type Output = Field;
            fn $m(self, rhs: &Field) -> Field {
                self.zip_map(rhs, |a, b| a $op b)
            }
        }
        impl $tr<Field> for Field {
            type Output = Field;
            fn $m(self, rhs: Field) -> Field {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Field> for Field {
            type Output = Field;
            fn $m(self, rhs: &Field) -> Field {
                (&self).$m(rhs)
            }
        }
        impl $tr<Field> for &Field {
            type Output = Field;
            fn $m(self, rhs: Field) -> Field {
                self.$m(&rhs)
            }
        }
    };
}
binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for &Field {
    type Output = Field;
    fn neg(self) -> Field {
        self.map(|z| -z)
    }
}
impl Neg for Field {
    type Output = Field;
    fn neg(self) -> Field {
        -&self
    }
}
