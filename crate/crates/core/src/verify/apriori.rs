//! Monitor for the differential inequality dE_a/dt ≤ c·B·E_a.

use serde::Serialize;

use crate::energies::{energy_report, EnergyReport};
use crate::error::{Error, Result};
use crate::model::WaveState;
use crate::stepper::{evolve, Cadence, Outcome, StepControl};

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AprioriReport {
    /// smallest c with dE_a/dt ≤ c·B·E_a at every interior sample
    pub fitted_c: f64,
    /// largest amount by which E_a decays faster than -c·B·E_a (0 if never)
    pub max_violation: f64,
    /// (t_start, t_end) of samples with a violation or non-finite data
    pub violations: Vec<(f64, f64)>,
    /// max over samples of E_a(t) / (E_a(0)·exp(∫c B))
    pub envelope_ratio: f64,
    pub samples: usize,
}

/// Fit c along a trajectory sampled at a uniform cadence.
pub fn monitor_apriori(traj: &[EnergyReport]) -> Result<AprioriReport> {
    if traj.len() < 3 {
        return Err(Error::InsufficientSamples { need: 3, have: traj.len() });
    }
    let dt0 = traj[1].t - traj[0].t;
    for w in traj.windows(2) {
        let dt = w[1].t - w[0].t;
        if !(dt > 0.0) || (dt - dt0).abs() > 1e-6 * dt0.abs().max(1e-300) {
            return Err(Error::InvalidInput(format!("non-uniform cadence at t = {}", w[0].t)));
        }
    }
    let n = traj.len();
    let mut ratio = vec![0.0; n];
    let mut bad = vec![false; n];
    for i in 1..n - 1 {
        let de = (traj[i + 1].ea - traj[i - 1].ea) / (traj[i + 1].t - traj[i - 1].t);
        let bound = traj[i].blowup_b * traj[i].ea;
        if !de.is_finite() || !bound.is_finite() {
            bad[i] = true;
            continue;
        }
        ratio[i] = if de <= 0.0 {
            if bound > 0.0 {
                de / bound
            } else {
                0.0
            }
        } else if bound > 0.0 {
            de / bound
        } else {
            f64::INFINITY
        };
    }
    let fitted_c = (1..n - 1).filter(|&i| !bad[i]).map(|i| ratio[i]).fold(0.0f64, f64::max);

    let mut max_violation = 0.0f64;
    let mut violations: Vec<(f64, f64)> = Vec::new();
    for i in 1..n - 1 {
        let over = -ratio[i] - fitted_c;
        let hit = bad[i] || over > 0.0;
        if over > 0.0 {
            max_violation = max_violation.max(over);
        }
        if hit {
            let (a, b) = (traj[i - 1].t, traj[i + 1].t);
            match violations.last_mut() {
                Some(last) if last.1 >= a => last.1 = b,
                _ => violations.push((a, b)),
            }
        }
    }

    let ea0 = traj[0].ea;
    let mut integral = 0.0;
    let mut envelope_ratio: f64 = if ea0 > 0.0 { 1.0 } else { 0.0 };
    for i in 1..n {
        let dt = traj[i].t - traj[i - 1].t;
        integral += 0.5 * dt * fitted_c * (traj[i].blowup_b + traj[i - 1].blowup_b);
        let env = ea0 * integral.exp();
        let r = if env > 0.0 {
            traj[i].ea / env
        } else if traj[i].ea == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        envelope_ratio = envelope_ratio.max(r);
    }
    Ok(AprioriReport { fitted_c, max_violation, violations, envelope_ratio, samples: n })
}

/// Run `state` and collect energy reports at every output time. A final
/// state off the cadence (early stop) is not recorded.
pub fn record_energies(state: WaveState, ctrl: &StepControl, interval: f64) -> Result<(Vec<EnergyReport>, Outcome)> {
    let mut out = Vec::new();
    let mut err = None;
    let outcome = evolve(state, ctrl, Cadence::Time(interval), &mut |x| {
        let k = x.state.t / interval;
        let repeat = out.last().is_some_and(|r: &EnergyReport| r.t == x.state.t);
        if x.stop.is_some() && (repeat || (k - k.round()).abs() > 1e-9) {
            return true;
        }
        match energy_report(x.state) {
            Ok(r) => {
                out.push(r);
                true
            }
            Err(e) => {
                err = Some(e);
                false
            }
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok((out, outcome)),
    }
}
