//! Energy functionals, their boundary-trace counterparts and the blow-up
//! functional.
//!
//! With G = ‖Z̄t,α′‖² + g (line) or G = ‖Z̄t,α′‖² (disc) and D = (1/Z,α′)∂α′:
//!
//! ```text
//! line  E1 = G ‖∂ inv‖²
//! disc  E1 = G (‖∂ inv‖² + ‖inv‖²)
//!       E2 = G (‖D_t ∂q‖² + ‖√A inv ∂q‖²_{Ḣ½})
//!       E3 = G (‖D_t D² Z̄t‖² + ‖√A inv D² Z̄t‖²_{Ḣ½})
//!       Ea = (E1² + E2)^{1/2},  E = (E1³ + E2^{3/2} + E3)^{1/3}
//! ```
//!
//! where q is the stored density (1/Z,α′ on the line, e^{iα′}/Z,α′ on the disc).
//!
//! Every squared L² and Ḣ½ norm is divided by `copies`. A state that is the
//! `p`-fold repetition of a cell evaluated with `copies = p` reports the
//! per-cell value, which is what the dilation covariance compares.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{material_derivative_chain, Chain, Derived, Mode, WaveState};
use crate::spectral::{hhalf_sq, l2_sq, Field};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub t: f64,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub ea: f64,
    pub e: f64,
    pub ecal: f64,
    /// line mode only
    pub ecal_b: Option<f64>,
    pub blowup_b: f64,
    pub holo_residual: f64,
    /// first non-finite term, if any
    pub flag: Option<String>,
}

/// Root combinations (a² + b)^{1/2} and (a³ + b^{3/2} + c)^{1/3}.
pub fn combine(e1: f64, e2: f64, e3: f64) -> (f64, f64) {
    ((e1 * e1 + e2).sqrt(), (e1.powi(3) + e2.powf(1.5) + e3).cbrt())
}

struct Ctx<'a> {
    s: &'a WaveState,
    d: Derived,
    copies: f64,
    big_g: f64,
    sqrt_a_inv: Field,
    d2_ztbar: Field,
}

impl<'a> Ctx<'a> {
    fn new(s: &'a WaveState, copies: f64) -> Result<Self> {
        let d = Derived::compute(s)?;
        let zbar_ap = s.ztbar.deriv();
        let big_g = l2_sq(&zbar_ap) / copies + s.mode.gravity();
        let sqrt_a_inv = (d.a.sqrt_re() * &d.inv).truncate();
        let d2_ztbar = (&d.inv * &d.dap_ztbar.deriv()).truncate();
        Ok(Ctx { s, d, copies, big_g, sqrt_a_inv, d2_ztbar })
    }
    fn l2(&self, f: &Field) -> f64 {
        l2_sq(&f.truncate()) / self.copies
    }
    fn hh(&self, f: &Field) -> f64 {
        hhalf_sq(&f.truncate()) / self.copies
    }
    fn dd(&self, f: &Field) -> Field {
        (&self.d.inv * &f.deriv()).truncate()
    }
}

fn first_nonfinite(terms: &[(&str, f64)]) -> Option<String> {
    terms.iter().find(|(_, v)| !v.is_finite()).map(|(n, _)| n.to_string())
}

/// Energies of a single cell.
pub fn energy_report(s: &WaveState) -> Result<EnergyReport> {
    energy_report_with(s, 1.0)
}

pub fn energy_report_with(s: &WaveState, copies: f64) -> Result<EnergyReport> {
    let c = Ctx::new(s, copies)?;
    let d = &c.d;
    let g = c.big_g;
    let dq = s.q.deriv();
    let dinv = d.inv.deriv();

    let e1 = match s.mode {
        Mode::Disc => g * (c.l2(&dinv) + c.l2(&d.inv)),
        Mode::Line { .. } => g * c.l2(&dinv),
    };
    let dt_dq = material_derivative_chain(s, d, Chain::PapQ);
    let e2 = g * (c.l2(&dt_dq) + c.hh(&(&c.sqrt_a_inv * &dq)));
    let dt_d2 = material_derivative_chain(s, d, Chain::DapZtbar2);
    let e3 = g * (c.l2(&dt_d2) + c.hh(&(&c.sqrt_a_inv * &c.d2_ztbar)));
    let (ea, e) = combine(e1, e2, e3);
    let (ecal, ecal_b) = ecal_from(&c);
    let blowup_b = blowup_from(&c);
    let holo_residual = s.holo_residual();
    let mut terms = vec![("E1", e1), ("E2", e2), ("E3", e3), ("Ecal", ecal), ("blowup_B", blowup_b)];
    if let Some(v) = ecal_b {
        terms.push(("Ecal_b", v));
    }
    let flag = first_nonfinite(&terms);
    Ok(EnergyReport { t: s.t, e1, e2, e3, ea, e, ecal, ecal_b, blowup_b, holo_residual, flag })
}

fn ecal_from(c: &Ctx) -> (f64, Option<f64>) {
    let s = c.s;
    let d = &c.d;
    let g = c.big_g;
    let q = &s.q;
    let (c1, dq) = match s.mode {
        Mode::Disc => (g * (c.l2(&q.deriv()) + c.l2(&d.inv)), c.dd(q)),
        Mode::Line { .. } => (g * c.l2(&d.inv.deriv()), c.dd(&d.inv)),
    };
    let qq = match s.mode {
        Mode::Disc => q.clone(),
        Mode::Line { .. } => d.inv.clone(),
    };
    let c2 = g * c.l2(&c.d2_ztbar) + g * g * c.hh(&dq);
    let c3 = g.powi(3) * c.l2(&c.dd(&dq)) + g * g * c.hh(&(&qq * &c.d2_ztbar));
    let ecal = combine(c1, c2, c3).1;
    let ecal_b = match s.mode {
        Mode::Disc => None,
        Mode::Line { .. } => {
            let inv2 = (&d.inv * &d.inv).truncate();
            let dinv = d.inv.deriv();
            let zi2 = (s.ztbar.deriv() * &inv2).truncate().deriv();
            let b2 = g * (c.l2(&zi2) + c.hh(&(&c.sqrt_a_inv * &dinv)));
            let ai2 = (&d.a * &inv2 * &dinv).truncate().deriv();
            let b3 = g * (c.l2(&ai2) + c.hh(&(&c.sqrt_a_inv * &zi2)));
            Some(combine(c1, b2, b3).1)
        }
    };
    (ecal, ecal_b)
}

fn blowup_from(c: &Ctx) -> f64 {
    let d = &c.d;
    let dz = d.dap_ztbar.truncate();
    let lead = dz.max_abs() + (hhalf_sq(&dz) / c.copies).sqrt();
    let zap = (l2_sq(&c.s.ztbar.deriv()) / c.copies).sqrt();
    let dinv = (l2_sq(&d.inv.deriv()) / c.copies).sqrt();
    match c.s.mode {
        Mode::Disc => lead + zap * (dinv + (l2_sq(&d.inv) / c.copies).sqrt()),
        Mode::Line { g } => lead + (zap + g.sqrt()) * dinv,
    }
}

/// The blow-up functional: ‖D_α′Z̄t‖_{L∞∩Ḣ½} plus the lower order term of the mode.
pub fn blowup_functional(s: &WaveState) -> Result<f64> {
    blowup_functional_with(s, 1.0)
}

pub fn blowup_functional_with(s: &WaveState, copies: f64) -> Result<f64> {
    Ok(blowup_from(&Ctx::new(s, copies)?))
}

/// (𝓔, 𝓔_b): the boundary-trace energy and, on the line, its variant with
/// ∂α′(Z̄t,α′/Z,α′²) and ∂α′((A/Z,α′²)∂α′(1/Z,α′)).
pub fn ecal_report(s: &WaveState) -> Result<(f64, Option<f64>)> {
    Ok(ecal_from(&Ctx::new(s, 1.0)?))
}
