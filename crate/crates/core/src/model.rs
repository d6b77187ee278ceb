//! Wave state, derived boundary quantities and the evolution right-hand side.
//!
//! Prognostic fields, with `inv = 1/Z,α′`:
//!
//! | mode | `z` | `q` | `ztbar` |
//! |---|---|---|---|
//! | `Disc` | Z (closed curve) | e^{iα′}/Z,α′ | Z̄t |
//! | `Line` | W with Z = α′ + W | 1/Z,α′ | Z̄t |
//!
//! `q` is evolved rather than re-diagnosed from Z: near a crest Z,α′ is not
//! resolved while q stays a bounded holomorphic trace.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{b1, l2, Convention, Field, Grid, MultiplierKind};

pub const DEFAULT_KRASNY_EPS: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Mode {
    Disc,
    Line { g: f64 },
}

impl Mode {
    pub fn convention(self) -> Convention {
        match self {
            Mode::Disc => Convention::Disc,
            Mode::Line { .. } => Convention::Line,
        }
    }
    pub fn gravity(self) -> f64 {
        match self {
            Mode::Disc => 0.0,
            Mode::Line { g } => g,
        }
    }
    pub fn is_disc(self) -> bool {
        matches!(self, Mode::Disc)
    }
}

/// A tracked particle label: `h` is its current parameter position and `pos`
/// its physical position Z(h).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Label {
    pub alpha: f64,
    pub h: f64,
    pub pos: C64,
}

#[derive(Clone, Debug)]
pub struct WaveState {
    pub t: f64,
    pub mode: Mode,
    pub z: Field,
    pub q: Field,
    pub ztbar: Field,
    pub labels: Vec<Label>,
}

impl WaveState {
    pub fn new(mode: Mode, z: Field, q: Field, ztbar: Field) -> Result<Self> {
        z.check_grid(&q)?;
        z.check_grid(&ztbar)?;
        if let Mode::Line { g } = mode {
            if !(g >= 0.0 && g.is_finite()) {
                return Err(Error::InvalidInput(format!("gravity {g} must be finite and >= 0")));
            }
        }
        Ok(WaveState { t: 0.0, mode, z, q, ztbar, labels: Vec::new() })
    }

    pub fn grid(&self) -> &Grid {
        self.z.grid()
    }

    /// Add labels at the given parameter values; positions are interpolated.
    pub fn track(&mut self, alphas: &[f64]) {
        for &a in alphas {
            let h = a.rem_euclid(std::f64::consts::TAU);
            let pos = self.position_at(h);
            self.labels.push(Label { alpha: a, h, pos });
        }
    }

    /// Z at parameter value `alpha` by trigonometric interpolation.
    pub fn position_at(&self, alpha: f64) -> C64 {
        match self.mode {
            Mode::Disc => self.z.interpolate(alpha),
            Mode::Line { .. } => self.z.interpolate(alpha) + alpha,
        }
    }

    pub fn zt(&self) -> Field {
        self.ztbar.conj()
    }

    /// 1/Z,α′ on the nodes.
    pub fn inv_zap(&self) -> Field {
        match self.mode {
            Mode::Disc => Field::mode(self.grid(), -1, C64::new(1.0, 0.0)) * &self.q,
            Mode::Line { .. } => self.q.clone(),
        }
    }

    /// ‖(I - ℍ)Z̄t‖₂ / max(1, ‖Z̄t‖₂).
    pub fn holo_residual(&self) -> f64 {
        let conv = self.mode.convention();
        let anti = crate::spectral::apply(MultiplierKind::ProjAnti(conv), &self.ztbar).scale_re(2.0);
        l2(&anti) / l2(&self.ztbar).max(1.0)
    }

    /// Av(e^{-iα′} Z,α′) for the disc, a proxy for the conformal normalization.
    /// Equals 1/q̂(0) because 1/q is the trace of a holomorphic function.
    pub fn conformal_phase(&self) -> Option<C64> {
        match self.mode {
            Mode::Disc => Some(self.q.coeff(0).inv()),
            Mode::Line { .. } => None,
        }
    }

    /// Checks the state invariants listed on [`WaveState`].
    pub fn validate(&self) -> Result<()> {
        for (f, name) in [(&self.z, "Z"), (&self.q, "q"), (&self.ztbar, "Ztbar")] {
            f.check_finite(name)?;
        }
        let r = self.holo_residual();
        if r > 1e-6 {
            return Err(Error::Consistency(format!("holomorphicity residual {r:.3e} above 1e-6")));
        }
        let inv = self.inv_zap();
        if let Some(node) = inv.values().iter().position(|z| z.norm() > 1e8) {
            return Err(Error::NearSingularNode { node });
        }
        match self.mode {
            Mode::Disc => {
                let w = winding_number(&self.z);
                if w != 1 {
                    return Err(Error::Consistency(format!("winding number {w}, expected 1")));
                }
            }
            Mode::Line { .. } => {
                let m = self.z.max_abs();
                if m >= std::f64::consts::PI {
                    return Err(Error::Consistency(format!("|W| reaches {m:.3}, not graph-like")));
                }
            }
        }
        Ok(())
    }
}

fn winding_number(z: &Field) -> i64 {
    let c = z.mean();
    let v = z.values();
    let mut total = 0.0;
    for j in 0..v.len() {
        let a = v[j] - c;
        let b = v[(j + 1) % v.len()] - c;
        total += (b / a).arg();
    }
    (total / std::f64::consts::TAU).round() as i64
}

/// Boundary quantities derived from one state.
#[derive(Clone, Debug)]
pub struct Derived {
    pub inv: Field,
    pub zap: Field,
    pub omega: Field,
    pub zt: Field,
    /// A₀ (disc) or A_g = g + A₀ (line), real and clamped at 0.
    pub a: Field,
    pub b: Field,
    pub bap: Field,
    /// D_α′Z̄t = Z̄t,α′/Z,α′
    pub dap_ztbar: Field,
    /// D_α′Z_t
    pub dap_zt: Field,
    pub zttbar: Field,
    /// D_t(1/Z,α′)
    pub dt_inv: Field,
    /// D_t of the stored density `q`
    pub dt_q: Field,
}

impl Derived {
    pub fn compute(s: &WaveState) -> Result<Self> {
        let inv = s.inv_zap();
        let zt = s.zt();
        let a = compute_a(s)?;
        let (b, bap) = compute_b(s);
        let zttbar = zttbar_from(s.mode, &a, &inv);
        let dap_ztbar = s.ztbar.deriv() * &inv;
        let dap_zt = zt.deriv() * &inv;
        let dt_inv = &inv * &(&bap - &dap_zt);
        let dt_q = match s.mode {
            Mode::Disc => &s.q * &(&bap - &dap_zt + b.scale(C64::new(0.0, 1.0))),
            Mode::Line { .. } => dt_inv.clone(),
        };
        let zap = inv.recip();
        let omega = inv.map(|z| z.conj() / z.norm());
        Ok(Derived { inv, zap, omega, zt, a, b, bap, dap_ztbar, dap_zt, zttbar, dt_inv, dt_q })
    }
}

/// Im [Z_t, H̃] Z̄t,α′ in the disc convention; this equals A₀ in both modes.
pub fn a_zero(zt: &Field, ztbar: &Field) -> Field {
    b1(zt, &ztbar.deriv()).im()
}

/// A₀ for the disc, A_g = g + A₀ for the line. Round-off negatives are
/// clamped to 0; values below -1e-8·(1 + ‖A₀‖∞) are an error.
pub fn compute_a(s: &WaveState) -> Result<Field> {
    let a0 = a_zero(&s.zt(), &s.ztbar);
    let top = a0.max_abs();
    let lo = a0.min_re();
    if lo < -1e-8 * (1.0 + top) {
        return Err(Error::Consistency(format!("A0 reaches {lo:.3e}")));
    }
    let a0 = a0.map(|z| C64::new(z.re.max(0.0), 0.0));
    Ok(a0.add_const(C64::new(s.mode.gravity(), 0.0)))
}

/// (b, b,α′). Disc: Re(I - H̃)((Z_t - Av Z_t)/Z,α′); line: Re(I - ℍ)(Z_t/Z,α′).
pub fn compute_b(s: &WaveState) -> (Field, Field) {
    let zt = s.zt();
    let inv = s.inv_zap();
    let f = match s.mode {
        Mode::Disc => zt.add_const(-zt.mean()) * &inv,
        Mode::Line { .. } => zt * &inv,
    };
    let b = (&f - &f.hilbert(s.mode.convention())).re();
    let bap = b.deriv().re();
    (b, bap)
}

fn zttbar_from(mode: Mode, a: &Field, inv: &Field) -> Field {
    let ia = (a * inv).scale(C64::new(0.0, 1.0));
    match mode {
        Mode::Disc => ia,
        Mode::Line { g } => (-ia).add_const(C64::new(0.0, g)),
    }
}

/// Disc: iA₀/Z,α′. Line: ig - iA_g/Z,α′.
pub fn compute_zttbar(s: &WaveState) -> Result<Field> {
    Ok(zttbar_from(s.mode, &compute_a(s)?, &s.inv_zap()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chain {
    /// D_t(1/Z,α′)
    InvZap,
    /// D_t ∂α′ q with q the stored density
    PapQ,
    /// D_t D_α′² Z̄t
    DapZtbar2,
}

/// Material derivatives via the commutator identities, no time differencing.
pub fn material_derivative_chain(s: &WaveState, d: &Derived, which: Chain) -> Field {
    match which {
        Chain::InvZap => d.dt_inv.clone(),
        Chain::PapQ => d.dt_q.deriv() - &d.bap * &s.q.deriv(),
        Chain::DapZtbar2 => {
            let dd = |f: &Field| &d.inv * &f.deriv();
            let d2 = dd(&d.dap_ztbar);
            let inner = dd(&d.zttbar) - &d.dap_zt * &d.dap_ztbar;
            dd(&inner) - &d.dap_zt * &d2
        }
    }
}

/// Time derivatives of the prognostic fields plus the fields needed to move
/// labels.
#[derive(Clone, Debug)]
pub struct Rhs {
    pub dz: Field,
    pub dq: Field,
    pub dztbar: Field,
    pub b: Field,
    pub zt: Field,
}

pub fn rhs(s: &WaveState) -> Result<Rhs> {
    rhs_with(s, DEFAULT_KRASNY_EPS)
}

pub fn rhs_with(s: &WaveState, eps: f64) -> Result<Rhs> {
    let inv = s.inv_zap();
    if let Some(node) = inv.values().iter().position(|z| !(z.norm() <= 1e8)) {
        return Err(Error::NearSingularNode { node });
    }
    let zt = s.zt();
    let a = compute_a(s)?;
    let (b, bap) = compute_b(s);
    let zttbar = zttbar_from(s.mode, &a, &inv);
    let dap_zt = zt.deriv() * &inv;
    let dztbar = zttbar - &b * &s.ztbar.deriv();
    let (dz, dq) = match s.mode {
        Mode::Disc => {
            let dz = &zt - &b * &s.z.deriv();
            let growth = &bap - &dap_zt + b.scale(C64::new(0.0, 1.0));
            (dz, &s.q * &growth - &b * &s.q.deriv())
        }
        Mode::Line { .. } => {
            let dz = &zt - &b * &s.z.deriv().add_const(C64::new(1.0, 0.0));
            (dz, &s.q * &(&bap - &dap_zt) - &b * &s.q.deriv())
        }
    };
    Ok(Rhs { dz: dz.dealias(eps), dq: dq.dealias(eps), dztbar: dztbar.dealias(eps), b, zt })
}
