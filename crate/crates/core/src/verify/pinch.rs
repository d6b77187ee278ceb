//! Two crests driven toward each other: separation against the line d - vt,
//! growth of the blow-up functional, stop time and the bracket
//! [c/√Ẽ(0), d/v].

use serde::Serialize;

use crate::energies::{energy_report, EnergyReport};
use crate::error::{Error, Result};
use crate::initialdata::{disc_crest_pinch, CrestSpec};
use crate::spectral::Grid;
use crate::stepper::{evolve, Cadence, StepControl, StopReason};
use crate::verify::apriori::monitor_apriori;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PinchConfig {
    pub n: usize,
    pub offset: f64,
    /// run to this multiple of d/v
    pub horizon: f64,
    /// run length when ε = 0
    pub t_final_static: f64,
    /// output times over [0, d/v]
    pub outputs: usize,
    /// step as a fraction of the grid spacing at ε = 0.1
    pub dt_fraction: f64,
}

impl Default for PinchConfig {
    fn default() -> Self {
        PinchConfig { n: 2048, offset: 0.5, horizon: 1.2, t_final_static: 1.0, outputs: 200, dt_fraction: 0.5 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PinchSample {
    pub t: f64,
    /// last step taken
    pub dt: f64,
    /// separation of the tracked crest particles
    pub d: f64,
    /// separation of Z interpolated at the crest labels
    pub d_interp: f64,
    pub report: EnergyReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct PinchReport {
    pub nu: f64,
    pub eps: f64,
    pub n: usize,
    pub d0: f64,
    pub v: f64,
    pub samples: Vec<PinchSample>,
    /// largest |d(t) - (d0 - vt)| / d0 before the stop
    pub d_deviation: f64,
    /// d(t) never rises more than 1% of d0 above its running minimum
    pub d_nonincreasing: bool,
    /// B̃ nondecreasing over the last quarter of the samples and above B̃(0) at the end
    pub b_eventually_increasing: bool,
    pub t_stop: f64,
    pub stop: StopReason,
    pub fitted_c: f64,
    pub e0: f64,
    /// c/√Ẽ(0)
    pub lower: f64,
    /// d/v
    pub upper: f64,
}

/// Run the pinch family for `spec` on the configured grid.
pub fn pinch_experiment(spec: &CrestSpec, cfg: &PinchConfig) -> Result<PinchReport> {
    let grid = Grid::with_offset(cfg.n, cfg.offset)?;
    let data = disc_crest_pinch(&grid, spec)?;
    let (d0, v) = (data.d, data.v);
    let h = grid.spacing();
    let (t_final, dt, interval) = if v > 0.0 {
        let tv = d0 / v;
        (cfg.horizon * tv, cfg.dt_fraction * h * (0.2 / v), tv / cfg.outputs as f64)
    } else {
        (cfg.t_final_static, cfg.dt_fraction * h, cfg.t_final_static / cfg.outputs as f64)
    };
    if !(interval > 0.0) || cfg.outputs == 0 {
        return Err(Error::InvalidInput("pinch run needs at least one output".into()));
    }
    let ctrl = StepControl { cfl: 1.0, ..StepControl::new(dt, t_final) };
    let mut samples: Vec<PinchSample> = Vec::new();
    let mut err = None;
    let outcome = evolve(data.state, &ctrl, Cadence::Time(interval), &mut |x| {
        if x.stop.is_some() {
            return true;
        }
        let s = x.state;
        let d = (s.labels[0].pos - s.labels[1].pos).norm();
        let d_interp = (s.position_at(s.labels[0].h) - s.position_at(s.labels[1].h)).norm();
        match energy_report(s) {
            Ok(report) => {
                samples.push(PinchSample { t: s.t, dt: x.dt, d, d_interp, report });
                true
            }
            Err(e) => {
                err = Some(e);
                false
            }
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    let mut d_deviation = 0.0f64;
    let mut d_nonincreasing = true;
    let mut d_min = f64::INFINITY;
    for s in &samples {
        d_deviation = d_deviation.max((s.d - (d0 - v * s.t)).abs() / d0);
        if s.d > d_min + 0.01 * d0 {
            d_nonincreasing = false;
        }
        d_min = d_min.min(s.d);
    }
    let b: Vec<f64> = samples.iter().map(|s| s.report.blowup_b).collect();
    let tail = &b[b.len() - (b.len() / 4).max(2).min(b.len())..];
    let b_eventually_increasing = b.len() >= 2 && tail.windows(2).all(|w| w[1] >= w[0]) && b[b.len() - 1] > b[0];
    let reports: Vec<EnergyReport> = samples.iter().map(|s| s.report.clone()).collect();
    let fitted_c = monitor_apriori(&reports)?.fitted_c;
    let e0 = samples.first().map_or(0.0, |s| s.report.e);
    let lower = if e0 > 0.0 { fitted_c / e0.sqrt() } else { f64::INFINITY };
    let upper = if v > 0.0 { d0 / v } else { f64::INFINITY };
    Ok(PinchReport {
        nu: spec.nu,
        eps: spec.eps,
        n: cfg.n,
        d0,
        v,
        samples,
        d_deviation,
        d_nonincreasing,
        b_eventually_increasing,
        t_stop: outcome.state.t,
        stop: outcome.stop,
        fitted_c,
        e0,
        lower,
        upper,
    })
}
