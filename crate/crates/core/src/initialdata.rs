//! Initial states: trivial and smooth blobs, the symmetric two-crest blob and
//! small gravity waves.
//!
//! All constructors build Z, q and Z̄t from exact Fourier coefficients, so the
//! states are holomorphic to round-off on the discrete level.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Mode, WaveState};
use crate::spectral::{apply, Convention, Field, Grid, MultiplierKind};

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Coefficients of 1/a(w) for a power series a with a[0] != 0, first `len` terms.
pub fn holo_reciprocal(a: &[C64], len: usize) -> Vec<C64> {
    let mut b = vec![C64::default(); len];
    if len == 0 {
        return b;
    }
    b[0] = a[0].inv();
    for k in 1..len {
        let mut s = C64::default();
        for j in 1..=k.min(a.len() - 1) {
            s += a[j] * b[k - j];
        }
        b[k] = -s * b[0];
    }
    b
}

/// Field with the given coefficients on modes 0, step, 2·step, ... up to the cutoff.
fn series_field(grid: &Grid, coeffs: &[C64], first: i64, step: i64) -> Field {
    let k = grid.cutoff() as i64;
    let mut c = vec![C64::default(); grid.n()];
    for (j, &v) in coeffs.iter().enumerate() {
        let m = first + step * j as i64;
        if m.abs() > k {
            break;
        }
        c[grid.index_of(m).unwrap()] = v;
    }
    Field::from_coeffs(grid, c)
}

/// Unit circle moving with constant velocity `c`.
pub fn disc_trivial(grid: &Grid, vel: C64) -> WaveState {
    WaveState::new(
        Mode::Disc,
        Field::mode(grid, 1, c(1.0)),
        Field::constant(grid, C64::new(0.0, -1.0)),
        Field::constant(grid, vel.conj()),
    )
    .expect("fields share a grid")
}

/// Z = R e^{iα′} + δ e^{imα′} with Z̄t built from `(mode, amplitude)` pairs and
/// projected onto the holomorphic modes.
pub fn disc_smooth(grid: &Grid, r: f64, delta: C64, m: i64, vel_modes: &[(i64, C64)]) -> Result<WaveState> {
    if !(r > 0.0) || m < 1 {
        return Err(Error::InvalidInput(format!("need R > 0 and m >= 1, got R = {r}, m = {m}")));
    }
    if m as f64 * delta.norm() >= r {
        return Err(Error::Univalence(format!("R = {r} <= m|delta| = {}", m as f64 * delta.norm())));
    }
    if m as usize > grid.cutoff() {
        return Err(Error::InvalidInput(format!("mode {m} above the cutoff")));
    }
    let z = Field::from_modes(grid, &[(1, c(r)), (m, delta)])?;
    // e^{iα}/Z,α′ = 1/(i (R + m δ w^{m-1})), w = e^{iα}
    let mut dz = vec![C64::default(); m as usize];
    dz[0] = c(r);
    dz[m as usize - 1] += delta * m as f64;
    let inv = holo_reciprocal(&dz, grid.cutoff() + 1);
    let q = series_field(grid, &inv, 0, 1).scale(C64::new(0.0, -1.0));
    let ztbar = apply(MultiplierKind::ProjHolo(Convention::Disc), &Field::from_modes(grid, vel_modes)?);
    WaveState::new(Mode::Disc, z, q, ztbar)
}

/// The rotating-dilating circle Z = e^{iα′}, Z̄t = -ε e^{iα′}.
pub fn rotational_dilation(grid: &Grid, eps: f64) -> WaveState {
    disc_smooth(grid, 1.0, C64::default(), 1, &[(1, c(-eps))]).expect("valid parameters")
}

/// A seeded smooth blob: a unit circle with a few small boundary modes and a
/// few holomorphic velocity modes.
pub fn disc_random(grid: &Grid, seed: u64) -> Result<WaveState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut amp = |s: f64| C64::new(rng.gen_range(-s..s), rng.gen_range(-s..s));
    let bumps: Vec<(i64, C64)> = (2..=4).map(|m| (m, amp(0.04 / m as f64))).collect();
    let vel: Vec<(i64, C64)> = (0..=3).map(|m| (m, amp(0.2 / (1.0 + m as f64)))).collect();
    let mut zmodes = vec![(1, c(1.0))];
    zmodes.extend(&bumps);
    let z = Field::from_modes(grid, &zmodes)?;
    // Z,α′ = i w (1 + Σ m δ_m w^{m-1})
    let mut dz = vec![c(1.0); 4];
    for &(m, d) in &bumps {
        dz[m as usize - 1] = d * m as f64;
    }
    let inv = holo_reciprocal(&dz, grid.cutoff() + 1);
    let q = series_field(grid, &inv, 0, 1).scale(C64::new(0.0, -1.0));
    let ztbar = Field::from_modes(grid, &vel)?;
    WaveState::new(Mode::Disc, z, q, ztbar)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrestSpec {
    /// corner angle is ν·π
    pub nu: f64,
    pub eps: f64,
    pub taylor_terms: usize,
}

impl CrestSpec {
    pub fn new(nu: f64, eps: f64) -> Self {
        CrestSpec { nu, eps, taylor_terms: 1 << 16 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu > 0.0 && self.nu < 0.5) {
            return Err(Error::InvalidInput(format!("nu = {} outside (0, 1/2)", self.nu)));
        }
        if !(self.eps >= 0.0 && self.eps.is_finite()) {
            return Err(Error::InvalidInput(format!("eps = {} must be >= 0", self.eps)));
        }
        if self.taylor_terms < 64 {
            return Err(Error::InvalidInput(format!("taylor_terms = {} below 64", self.taylor_terms)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct CrestData {
    pub state: WaveState,
    /// |Z(0) - Z(π)|
    pub d: f64,
    /// |Z_t(0) - Z_t(π)|
    pub v: f64,
}

/// Labels approaching the crest at 0: 0.5·2^{-k} while at least four nodes away.
pub fn crest_ladder(grid: &Grid) -> Vec<f64> {
    let floor = 4.0 * grid.spacing();
    (0..).map(|k| 0.5 * 0.5f64.powi(k)).take_while(|&a| a >= floor).collect()
}

/// Symmetric blob with two crests of angle νπ at α′ = 0 and π, from the map
/// Ψ_z′(z′) = (1 - z′²)^{ν-1}, moving with Z̄t = -ε e^{iα′}.
///
/// Labels are tracked at 0, π and along [`crest_ladder`].
pub fn disc_crest_pinch(grid: &Grid, spec: &CrestSpec) -> Result<CrestData> {
    spec.validate()?;
    if grid.offset() == 0.0 {
        return Err(Error::InvalidInput("crest data needs a grid offset so no node sits on a crest".into()));
    }
    let nu = spec.nu;
    let band = grid.cutoff();
    let nz = band.saturating_sub(1) / 2 + 1;
    let nq = band / 2 + 1;
    let need = nz.max(nq);

    // Ψ_z′ = Σ β_k z^{2k}, β_k = β_{k-1}(k - ν)/k
    // 1/Ψ_z′ = Σ γ_k z^{2k}, γ_k = γ_{k-1}(k - 2 + ν)/k
    let mut beta = vec![1.0; need];
    let mut gamma = vec![1.0; need];
    for k in 1..need {
        beta[k] = beta[k - 1] * (k as f64 - nu) / k as f64;
        gamma[k] = gamma[k - 1] * (k as f64 - 2.0 + nu) / k as f64;
    }
    let kept = spec.taylor_terms.min(need);
    let tail: f64 =
        (kept..nz).map(|k| beta[k] / (2 * k + 1) as f64).sum::<f64>() + (kept..nq).map(|k| gamma[k].abs()).sum::<f64>();
    if tail > 1e-10 {
        return Err(Error::SeriesTail(format!(
            "taylor_terms = {} leaves in-band tail {tail:.3e}; use at least {need}",
            spec.taylor_terms
        )));
    }
    let zc: Vec<C64> = (0..kept.min(nz)).map(|k| c(beta[k] / (2 * k + 1) as f64)).collect();
    let qc: Vec<C64> = (0..kept.min(nq)).map(|k| C64::new(0.0, -gamma[k])).collect();
    let z = series_field(grid, &zc, 1, 2);
    let q = series_field(grid, &qc, 0, 2);
    let ztbar = Field::mode(grid, 1, c(-spec.eps));
    let mut state = WaveState::new(Mode::Disc, z, q, ztbar)?;
    let mut alphas = vec![0.0, PI];
    alphas.extend(crest_ladder(grid));
    state.track(&alphas);
    let d = (state.labels[0].pos - state.labels[1].pos).norm();
    let v = 2.0 * spec.eps;
    Ok(CrestData { state, d, v })
}

/// Phase speed amplitude for a linear progressive wave: Z̄t = -i√(gk)·a e^{-ikα′}.
pub fn linear_wave_velocity(g: f64, a: f64, k: i64) -> C64 {
    C64::new(0.0, -(g * k as f64).sqrt() * a)
}

/// W = a e^{-ikα′}, Z̄t = u e^{-ikα′} on the periodic line with gravity g.
pub fn line_wave(grid: &Grid, g: f64, a: f64, k: i64, u: C64) -> Result<WaveState> {
    if k < 1 {
        return Err(Error::InvalidInput(format!("wavenumber {k} must be >= 1")));
    }
    if a.abs() * k as f64 >= 0.2 {
        return Err(Error::Univalence(format!("|a|·|k| = {} not below 0.2", a.abs() * k as f64)));
    }
    if k as usize > grid.cutoff() {
        return Err(Error::InvalidInput(format!("mode {k} above the cutoff")));
    }
    let w = Field::mode(grid, -k, c(a));
    // 1/(1 + W,α′) = Σ (ika)^j e^{-ijkα′}
    let r = C64::new(0.0, k as f64 * a);
    let pc: Vec<C64> = (0..=grid.cutoff() / k as usize).map(|j| r.powu(j as u32)).collect();
    let p = series_field(grid, &pc, 0, -k);
    let ztbar = Field::mode(grid, -k, u);
    WaveState::new(Mode::Line { g }, w, p, ztbar)
}

/// Flat surface at rest.
pub fn line_rest(grid: &Grid, g: f64) -> Result<WaveState> {
    WaveState::new(Mode::Line { g }, Field::zeros(grid), Field::constant(grid, c(1.0)), Field::zeros(grid))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_q(s: &WaveState, tol: f64) {
        // q must equal e^{iα′}/Z,α′ on a smooth state
        let want = match s.mode {
            Mode::Disc => Field::mode(s.grid(), 1, c(1.0)) * s.z.deriv().recip(),
            Mode::Line { .. } => s.z.deriv().add_const(c(1.0)).recip(),
        };
        assert!((&want - &s.q).max_abs() < tol, "{}", (&want - &s.q).max_abs());
    }

    #[test]
    fn smooth_blob_is_consistent() {
        let g = Grid::with_offset(128, 0.5).unwrap();
        let s = disc_smooth(&g, 1.0, c(0.05), 3, &[(1, c(0.1))]).unwrap();
        s.validate().unwrap();
        assert!(s.holo_residual() <= 1e-10);
        check_q(&s, 1e-13);
        assert!(disc_smooth(&g, 1.0, c(0.5), 3, &[]).is_err());
    }

    #[test]
    fn random_blob_and_line_wave() {
        let g = Grid::with_offset(128, 0.5).unwrap();
        for seed in 0..3 {
            let s = disc_random(&g, seed).unwrap();
            s.validate().unwrap();
            check_q(&s, 1e-13);
        }
        let w = line_wave(&g, 1.0, 0.05, 2, c(0.0)).unwrap();
        w.validate().unwrap();
        assert!(w.holo_residual() <= 1e-10);
        check_q(&w, 1e-13);
        assert!(line_wave(&g, 1.0, 0.15, 2, c(0.0)).is_err());
    }

    #[test]
    fn crest_data_shape() {
        let g = Grid::with_offset(256, 0.5).unwrap();
        let cd = disc_crest_pinch(&g, &CrestSpec::new(0.3, 0.1)).unwrap();
        let s = &cd.state;
        s.validate().unwrap();
        let zt = s.zt();
        assert!(zt.interpolate(0.0).re < 0.0 && zt.interpolate(PI).re > 0.0);
        // mirror symmetry Z(-α) = conj Z(α)
        for a in [0.3, 1.1, 2.5] {
            assert!((s.position_at(-a) - s.position_at(a).conj()).norm() < 1e-13);
        }
        assert!((cd.v - 0.2).abs() < 1e-15);
        let short = CrestSpec { taylor_terms: 64, ..CrestSpec::new(0.3, 0.1) };
        let g512 = Grid::with_offset(512, 0.5).unwrap();
        assert!(matches!(disc_crest_pinch(&g512, &short), Err(Error::SeriesTail(_))));
        assert!(disc_crest_pinch(&Grid::new(256).unwrap(), &CrestSpec::new(0.3, 0.1)).is_err());
    }
}
