//! The dilation family on the periodic line and its energy covariance.
//!
//! For λ > 0 and s:
//! Z_λ(α′) = λ⁻¹Z(λα′), (Z_t)_λ(α′) = λ^{s-1}Z_t(λα′), g_λ = λ^{2s-1}g,
//! and time runs as t_λ = λ^{-s}t.
//!
//! With λ = p/q the dilated state on a 2π cell is p copies of a physical cell,
//! and the original is q copies of one. Energies are compared per cell.

use crate::energies::{energy_report_with, EnergyReport};
use crate::error::{Error, Result};
use crate::model::{Mode, WaveState};
use crate::spectral::{Field, Grid};
use crate::stepper::{evolve, Cadence, StepControl};
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingParams {
    pub num: u32,
    pub den: u32,
    pub s: f64,
}

impl ScalingParams {
    pub fn new(num: u32, den: u32, s: f64) -> Result<Self> {
        if num == 0 || den == 0 || !num.is_power_of_two() || !den.is_power_of_two() {
            return Err(Error::InvalidInput(format!("lambda = {num}/{den} must be a ratio of powers of two")));
        }
        if !s.is_finite() {
            return Err(Error::InvalidInput(format!("s = {s}")));
        }
        let g = gcd(num, den);
        Ok(ScalingParams { num: num / g, den: den / g, s })
    }

    pub fn lambda(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn gravity(&self, g: f64) -> f64 {
        self.lambda().powf(2.0 * self.s - 1.0) * g
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Debug)]
pub struct Scaled {
    pub state: WaveState,
    pub g: f64,
    /// content dropped: a mode not divisible by the denominator, or above the new band
    pub lossy: bool,
}

fn dilate(f: &Field, target: &Grid, p: &ScalingParams, factor: f64) -> (Field, bool) {
    let src = f.grid();
    let cs = f.coeffs();
    let top = cs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    let mut out = vec![C64::default(); target.n()];
    let mut lossy = false;
    let (num, den) = (p.num as i64, p.den as i64);
    for (j, &c) in cs.iter().enumerate() {
        if c.norm() <= 1e-14 * top {
            continue;
        }
        let k = src.mode(j);
        let mapped = if k % den == 0 { Some(k / den * num) } else { None };
        match mapped.and_then(|m| if m.unsigned_abs() as usize <= target.cutoff() { target.index_of(m) } else { None })
        {
            Some(i) => out[i] = c * factor,
            None => lossy = true,
        }
    }
    (Field::from_coeffs(target, out), lossy)
}

/// Dilate a line state. The grid grows by λ so the band keeps its shape.
pub fn scale_state(state: &WaveState, p: &ScalingParams) -> Result<Scaled> {
    let g = match state.mode {
        Mode::Line { g } => g,
        Mode::Disc => return Err(Error::Unsupported("dilation of the disc breaks the closed curve".into())),
    };
    if p.num == p.den {
        return Ok(Scaled { state: state.clone(), g, lossy: false });
    }
    let n = state.grid().n() * p.num as usize / p.den as usize;
    let target = Grid::with_offset(n, state.grid().offset())?;
    let lam = p.lambda();
    let (w, l1) = dilate(&state.z, &target, p, 1.0 / lam);
    let (q, l2) = dilate(&state.q, &target, p, 1.0);
    let (zt, l3) = dilate(&state.ztbar, &target, p, lam.powf(p.s - 1.0));
    let g_l = p.gravity(g);
    let mut out = WaveState::new(Mode::Line { g: g_l }, w, q, zt)?;
    out.t = state.t / lam.powf(p.s);
    out.labels = state
        .labels
        .iter()
        .map(|l| crate::model::Label { alpha: l.alpha / lam, h: l.h / lam, pos: l.pos / lam })
        .collect();
    Ok(Scaled { state: out, g: g_l, lossy: l1 || l2 || l3 })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Covariance {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub relgap: f64,
}

fn relgap(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        0.0
    } else {
        d / a.abs().max(b.abs())
    }
}

/// Compare per-cell energies of the dilated state with λ^{power} times the
/// original ones.
pub fn compare(scaled: &EnergyReport, orig: &EnergyReport, p: &ScalingParams) -> Vec<Covariance> {
    let lam = p.lambda();
    let s = p.s;
    let mut rows = vec![
        ("E1", scaled.e1, orig.e1, 2.0 * s),
        ("E2", scaled.e2, orig.e2, 4.0 * s),
        ("E3", scaled.e3, orig.e3, 6.0 * s),
        ("Ea", scaled.ea, orig.ea, 2.0 * s),
        ("E", scaled.e, orig.e, 2.0 * s),
        ("Ecal", scaled.ecal, orig.ecal, 2.0 * s),
        ("blowup_B", scaled.blowup_b, orig.blowup_b, s),
    ];
    if let (Some(a), Some(b)) = (scaled.ecal_b, orig.ecal_b) {
        rows.push(("Ecal_b", a, b, 2.0 * s));
    }
    rows.into_iter()
        .map(|(name, lhs, o, pw)| {
            let rhs = lam.powf(pw) * o;
            Covariance { name, lhs, rhs, relgap: relgap(lhs, rhs) }
        })
        .collect()
}

/// Energy covariance at the state's own time.
pub fn check_covariance(state: &WaveState, p: &ScalingParams) -> Result<Vec<Covariance>> {
    let sc = scale_state(state, p)?;
    if sc.lossy {
        return Err(Error::Lossy(format!("lambda = {}/{} drops resolved modes", p.num, p.den)));
    }
    let a = energy_report_with(&sc.state, p.num as f64)?;
    let b = energy_report_with(state, p.den as f64)?;
    Ok(compare(&a, &b, p))
}

/// Run the original and the dilated state side by side (steps rescaled by
/// λ^{-s}) and compare energies at `samples` matched output times.
/// Returns the largest relgap per energy over the positive times.
pub fn time_covariance(
    state: &WaveState,
    p: &ScalingParams,
    dt: f64,
    t_final: f64,
    samples: usize,
) -> Result<Vec<Covariance>> {
    let sc = scale_state(state, p)?;
    if sc.lossy {
        return Err(Error::Lossy(format!("lambda = {}/{} drops resolved modes", p.num, p.den)));
    }
    let tf = lam_time(p);
    let run = |s: WaveState, dt: f64, t_final: f64, copies: f64| -> Result<Vec<EnergyReport>> {
        let ctrl = StepControl { cfl: 1.0, ..StepControl::new(dt, t_final) };
        let mut out = Vec::new();
        let mut err = None;
        evolve(
            s,
            &ctrl,
            Cadence::Time(t_final / samples as f64),
            &mut |x| match energy_report_with(x.state, copies) {
                Ok(r) => {
                    out.push(r);
                    true
                }
                Err(e) => {
                    err = Some(e);
                    false
                }
            },
        )?;
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    };
    let a = run(sc.state, dt * tf, t_final * tf, p.num as f64)?;
    let b = run(state.clone(), dt, t_final, p.den as f64)?;
    if a.len() != b.len() || a.len() < 2 {
        return Err(Error::InsufficientSamples { need: samples + 1, have: a.len().min(b.len()) });
    }
    let mut worst: Vec<Covariance> = Vec::new();
    for (x, y) in a.iter().zip(&b).skip(1) {
        for row in compare(x, y, p) {
            match worst.iter_mut().find(|w| w.name == row.name) {
                Some(w) if w.relgap >= row.relgap => {}
                Some(w) => *w = row,
                None => worst.push(row),
            }
        }
    }
    Ok(worst)
}

/// Time dilation factor λ^{-s}.
fn lam_time(p: &ScalingParams) -> f64 {
    p.lambda().powf(-p.s)
}
