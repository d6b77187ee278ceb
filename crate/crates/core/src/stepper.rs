//! Classical RK4 with CFL-limited steps and Lagrangian label transport.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{rhs_with, Label, Rhs, WaveState, DEFAULT_KRASNY_EPS};
use crate::spectral::Field;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepControl {
    pub dt_init: f64,
    pub cfl: f64,
    pub dt_max: f64,
    pub dt_min: f64,
    pub t_final: f64,
    pub filter_eps: f64,
}

impl StepControl {
    pub fn new(dt: f64, t_final: f64) -> Self {
        StepControl { dt_init: dt, cfl: 0.5, dt_max: dt, dt_min: dt * 1e-6, t_final, filter_eps: DEFAULT_KRASNY_EPS }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.dt_min > 0.0
            && self.dt_min <= self.dt_init
            && self.dt_init <= self.dt_max
            && self.cfl > 0.0
            && self.cfl <= 1.0
            && self.t_final > 0.0
            && self.filter_eps >= 0.0
            && [self.dt_init, self.dt_max, self.t_final, self.filter_eps].iter().all(|x| x.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("step control out of range: {self:?}")))
        }
    }

    /// min(dt_max, cfl·Δα′/max(1, ‖b‖∞)).
    pub fn adaptive_dt(&self, h: f64, b_max: f64) -> f64 {
        self.dt_max.min(self.cfl * h / b_max.max(1.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    TFinal,
    ResolutionLost,
    Blowup,
    NearSingular,
    Observer,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::TFinal => "t_final",
            StopReason::ResolutionLost => "resolution_lost",
            StopReason::Blowup => "blowup",
            StopReason::NearSingular => "near_singular",
            StopReason::Observer => "observer",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cadence {
    Steps(usize),
    /// Observe at integer multiples of the interval; steps are shortened to
    /// land on them.
    Time(f64),
}

/// What an observer sees.
pub struct Sample<'a> {
    pub state: &'a WaveState,
    pub step: u64,
    pub dt: f64,
    /// set on the final sample of a run
    pub stop: Option<StopReason>,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub state: WaveState,
    pub stop: StopReason,
    pub steps: u64,
    pub last_dt: f64,
}

/// Spectral tail of Z̄t above half the cutoff.
pub fn resolution_tail(s: &WaveState) -> f64 {
    s.ztbar.tail_fraction(s.grid().cutoff() / 2)
}

pub const TAIL_LIMIT: f64 = 1e-4;

fn label_velocity(r: &Rhs, labels: &[Label]) -> Vec<(f64, C64)> {
    labels.iter().map(|l| (r.b.interpolate(l.h).re, r.zt.interpolate(l.h))).collect()
}

fn shifted(s: &WaveState, r: &Rhs, lv: &[(f64, C64)], c: f64) -> WaveState {
    let mut out = s.clone();
    out.z = &s.z + &r.dz.scale_re(c);
    out.q = &s.q + &r.dq.scale_re(c);
    out.ztbar = &s.ztbar + &r.dztbar.scale_re(c);
    for (l, (bh, v)) in out.labels.iter_mut().zip(lv) {
        l.h += c * bh;
        l.pos += v * c;
    }
    out
}

fn combine(a: &Field, k: [&Field; 4], dt: f64) -> Field {
    let sum = k[0] + &k[1].scale_re(2.0) + k[2].scale_re(2.0) + k[3];
    a + &sum.scale_re(dt / 6.0)
}

/// One RK4 step of the fields and the tracked labels.
pub fn rk4_step(s: &WaveState, dt: f64, eps: f64) -> Result<WaveState> {
    let k1 = rhs_with(s, eps)?;
    rk4_step_from(s, k1, dt, eps)
}

fn rk4_step_from(s: &WaveState, k1: Rhs, dt: f64, eps: f64) -> Result<WaveState> {
    if !(dt > 0.0) {
        return Err(Error::InvalidInput(format!("dt = {dt}")));
    }
    let l1 = label_velocity(&k1, &s.labels);
    let s2 = shifted(s, &k1, &l1, dt / 2.0);
    let k2 = rhs_with(&s2, eps)?;
    let l2 = label_velocity(&k2, &s2.labels);
    let s3 = shifted(s, &k2, &l2, dt / 2.0);
    let k3 = rhs_with(&s3, eps)?;
    let l3 = label_velocity(&k3, &s3.labels);
    let s4 = shifted(s, &k3, &l3, dt);
    let k4 = rhs_with(&s4, eps)?;
    let l4 = label_velocity(&k4, &s4.labels);

    let mut out = s.clone();
    out.t = s.t + dt;
    out.z = combine(&s.z, [&k1.dz, &k2.dz, &k3.dz, &k4.dz], dt).dealias(eps);
    out.q = combine(&s.q, [&k1.dq, &k2.dq, &k3.dq, &k4.dq], dt).dealias(eps);
    out.ztbar = combine(&s.ztbar, [&k1.dztbar, &k2.dztbar, &k3.dztbar, &k4.dztbar], dt).dealias(eps);
    for (i, l) in out.labels.iter_mut().enumerate() {
        let db = l1[i].0 + 2.0 * l2[i].0 + 2.0 * l3[i].0 + l4[i].0;
        let dp = l1[i].1 + l2[i].1 * 2.0 + l3[i].1 * 2.0 + l4[i].1;
        l.h = (l.h + dt / 6.0 * db).rem_euclid(TAU);
        l.pos += dp * (dt / 6.0);
    }
    if !(out.z.is_finite() && out.q.is_finite() && out.ztbar.is_finite()) {
        return Err(Error::BlowUp(format!("t = {}", out.t)));
    }
    Ok(out)
}

/// Move labels through a frozen drift `b` for time `dt` with RK4.
pub fn advance_labels(labels: &mut [Label], b: &Field, dt: f64) {
    let f = |h: f64| b.interpolate(h.rem_euclid(TAU)).re;
    for l in labels {
        let k1 = f(l.h);
        let k2 = f(l.h + dt / 2.0 * k1);
        let k3 = f(l.h + dt / 2.0 * k2);
        let k4 = f(l.h + dt * k3);
        l.h = (l.h + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)).rem_euclid(TAU);
    }
}

/// Where a run resumes: step count and the next time-cadence index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Resume {
    pub step: u64,
    pub next_output: u64,
}

/// Advance to `ctrl.t_final` or until a stop signal. The observer is called on
/// the initial state, at the cadence, and on the final state; returning
/// `false` stops the run.
pub fn evolve(
    state: WaveState,
    ctrl: &StepControl,
    cadence: Cadence,
    observer: &mut dyn FnMut(&Sample) -> bool,
) -> Result<Outcome> {
    evolve_from(state, ctrl, cadence, Resume::default(), observer)
}

pub fn evolve_from(
    mut state: WaveState,
    ctrl: &StepControl,
    cadence: Cadence,
    resume: Resume,
    observer: &mut dyn FnMut(&Sample) -> bool,
) -> Result<Outcome> {
    ctrl.validate()?;
    if let Cadence::Steps(0) = cadence {
        return Err(Error::InvalidInput("output cadence of 0 steps".into()));
    }
    if let Cadence::Time(dt) = cadence {
        if !(dt > 0.0) {
            return Err(Error::InvalidInput(format!("output interval {dt}")));
        }
    }
    let h = state.grid().spacing();
    let mut step = resume.step;
    let mut next_output = resume.next_output;
    let mut last_dt = 0.0;
    let t_eps = 1e-12 * ctrl.t_final;

    let mut observe = |state: &WaveState, step: u64, dt: f64, stop: Option<StopReason>| -> bool {
        observer(&Sample { state, step, dt, stop })
    };

    if step == 0 && next_output == 0 {
        if !observe(&state, 0, 0.0, None) {
            return Ok(Outcome { state, stop: StopReason::Observer, steps: 0, last_dt });
        }
        next_output = 1;
    }

    let stop = loop {
        if state.t >= ctrl.t_final - t_eps {
            break StopReason::TFinal;
        }
        let tail = resolution_tail(&state);
        if !tail.is_finite() {
            break StopReason::Blowup;
        }
        if tail > TAIL_LIMIT {
            break StopReason::ResolutionLost;
        }
        let k1 = match rhs_with(&state, ctrl.filter_eps) {
            Ok(k) => k,
            Err(Error::NearSingularNode { .. }) => break StopReason::NearSingular,
            Err(Error::Consistency(_)) | Err(Error::BlowUp(_)) => break StopReason::Blowup,
            Err(e) => return Err(e),
        };
        let b_max = k1.b.max_abs();
        if !b_max.is_finite() {
            break StopReason::Blowup;
        }
        let mut dt = if step == 0 { ctrl.dt_init.min(ctrl.adaptive_dt(h, b_max)) } else { ctrl.adaptive_dt(h, b_max) };
        if dt < ctrl.dt_min {
            break StopReason::NearSingular;
        }
        let mut target = ctrl.t_final;
        if let Cadence::Time(iv) = cadence {
            target = target.min(next_output as f64 * iv);
        }
        let mut landed = false;
        if state.t + dt >= target - t_eps {
            dt = target - state.t;
            landed = true;
        }
        state = match rk4_step_from(&state, k1, dt, ctrl.filter_eps) {
            Ok(s) => s,
            Err(Error::NearSingularNode { .. }) => break StopReason::NearSingular,
            Err(Error::Consistency(_)) | Err(Error::BlowUp(_)) => break StopReason::Blowup,
            Err(e) => return Err(e),
        };
        if landed {
            state.t = target;
        }
        step += 1;
        last_dt = dt;
        let due = match cadence {
            Cadence::Steps(k) => step % k as u64 == 0,
            Cadence::Time(iv) => landed && (state.t - next_output as f64 * iv).abs() <= t_eps,
        };
        let at_end = state.t >= ctrl.t_final - t_eps;
        if due {
            if let Cadence::Time(_) = cadence {
                next_output += 1;
            }
            if !at_end && !observe(&state, step, dt, None) {
                break StopReason::Observer;
            }
        }
    };
    observe(&state, step, last_dt, Some(stop));
    Ok(Outcome { state, stop, steps: step, last_dt })
}
