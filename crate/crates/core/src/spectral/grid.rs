use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

struct Inner {
    n: usize,
    offset: f64,
    cutoff: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    /// e^{-i m 2π offset / n} in FFT index order
    phase: Vec<C64>,
    nodes: Vec<f64>,
}

/// Uniform periodic grid on [0, 2π) with nodes 2π(j + offset)/n.
///
/// Cheap to clone; FFT plans are shared.
#[derive(Clone)]
pub struct Grid(Arc<Inner>);

impl Grid {
    pub const MIN_N: usize = 8;

    pub fn new(n: usize) -> Result<Self> {
        Self::build(n, 0.0, n / 3)
    }

    pub fn with_offset(n: usize, offset: f64) -> Result<Self> {
        Self::build(n, offset, n / 3)
    }

    pub fn build(n: usize, offset: f64, cutoff: usize) -> Result<Self> {
        if n < Self::MIN_N || !n.is_power_of_two() {
            return Err(Error::InvalidInput(format!("grid size {n} must be a power of two >= {}", Self::MIN_N)));
        }
        if !(0.0..1.0).contains(&offset) {
            return Err(Error::InvalidInput(format!("grid offset {offset} not in [0,1)")));
        }
        if cutoff > n / 2 {
            return Err(Error::InvalidInput(format!("cutoff {cutoff} exceeds n/2 = {}", n / 2)));
        }
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let phase = (0..n)
            .map(|j| {
                let m = mode_of(j, n) as f64;
                C64::from_polar(1.0, -m * 2.0 * PI * offset / n as f64)
            })
            .collect();
        let nodes = (0..n).map(|j| 2.0 * PI * (j as f64 + offset) / n as f64).collect();
        Ok(Grid(Arc::new(Inner { n, offset, cutoff, fwd, inv, phase, nodes })))
    }

    /// Same node layout with a different retained band.
    pub fn with_cutoff(&self, cutoff: usize) -> Result<Self> {
        Self::build(self.n(), self.offset(), cutoff)
    }

    pub fn n(&self) -> usize {
        self.0.n
    }
    pub fn offset(&self) -> f64 {
        self.0.offset
    }
    pub fn cutoff(&self) -> usize {
        self.0.cutoff
    }
    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.0.n as f64
    }
    pub fn nodes(&self) -> &[f64] {
        &self.0.nodes
    }
    pub fn node(&self, j: usize) -> f64 {
        self.0.nodes[j]
    }

    /// Signed mode number stored at FFT index `j`.
    pub fn mode(&self, j: usize) -> i64 {
        mode_of(j, self.0.n)
    }

    /// FFT index holding mode `m`, if representable.
    pub fn index_of(&self, m: i64) -> Option<usize> {
        let n = self.0.n as i64;
        if m < -n / 2 || m >= n / 2 {
            return None;
        }
        Some(m.rem_euclid(n) as usize)
    }

    pub(crate) fn forward(&self, values: &[C64]) -> Vec<C64> {
        let mut buf = values.to_vec();
        self.0.fwd.process(&mut buf);
        let s = 1.0 / self.0.n as f64;
        for (c, p) in buf.iter_mut().zip(&self.0.phase) {
            *c = *c * *p * s;
        }
        buf
    }

    pub(crate) fn inverse(&self, coeffs: &[C64]) -> Vec<C64> {
        let mut buf: Vec<C64> = coeffs.iter().zip(&self.0.phase).map(|(c, p)| c * p.conj()).collect();
        self.0.inv.process(&mut buf);
        buf
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.n() == other.n() && self.offset() == other.offset() && self.cutoff() == other.cutoff())
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.n())
            .field("offset", &self.offset())
            .field("cutoff", &self.cutoff())
            .finish()
    }
}

fn mode_of(j: usize, n: usize) -> i64 {
    if j < n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}
