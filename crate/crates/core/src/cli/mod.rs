//! Batch front end: `simulate`, `verify`, `scale-check` and `pinch`.
//!
//! Exit codes: 0 ok, 2 configuration error, 3 verification failure,
//! 4 numerical failure.

pub mod config;
pub mod output;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::energies::energy_report;
use crate::error::{Error, Result};
use crate::initialdata::disc_random;
use crate::scaling::{check_covariance, time_covariance, Covariance};
use crate::spectral::Grid;
use crate::stepper::{evolve_from, Cadence, Resume, StopReason};
use crate::verify::{
    monitor_apriori, pinch_experiment, record_energies, refinement, registered_tol, rigidity_track,
    run_identity_suite_with, AprioriReport, IdentityResult, PinchConfig, RefinementRow, RigidityVerdicts, SuiteOptions,
};

pub use config::{InitKind, RunConfig};
pub use output::{canonical, Checkpoint, Row, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

/// Covariance tolerance at a single time.
pub const SCALE_TOL: f64 = 1e-5;
/// Covariance tolerance between co-run trajectories.
pub const SCALE_TIME_TOL: f64 = 1e-3;

#[derive(Debug, Parser)]
#[command(name = "crestflow", version, about = "Free-surface Euler runs and checks in conformal boundary variables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// key = value configuration file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// output directory
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// seed for randomized states (overrides init.seed)
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// evolve the configured state, writing CSV and checkpoints
    Simulate,
    /// identity suite and the selected experiments
    Verify,
    /// energy covariance under dilation (line mode)
    ScaleCheck,
    /// two approaching crests
    Pinch,
}

/// Map an error to its exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config { .. }
        | Error::InvalidInput(_)
        | Error::Unsupported(_)
        | Error::Univalence(_)
        | Error::SeriesTail(_)
        | Error::Io(_)
        | Error::Json(_) => EXIT_CONFIG,
        Error::Lossy(_) | Error::InsufficientSamples { .. } => EXIT_VERIFY,
        _ => EXIT_NUMERIC,
    }
}

struct Ctx {
    cfg: RunConfig,
    out: PathBuf,
    seed: Option<u64>,
    quiet: bool,
}

impl Ctx {
    fn say(&self, msg: &str) {
        if !self.quiet {
            println!("{msg}");
        }
    }
    fn path(&self, suffix: &str) -> PathBuf {
        self.out.join(format!("{}{suffix}", self.cfg.output_path))
    }
}

/// Parse arguments, run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn dispatch(cli: &Cli) -> Result<i32> {
    let text = match &cli.config {
        Some(p) => {
            std::fs::read_to_string(p).map_err(|e| Error::Config { line: 0, msg: format!("{}: {e}", p.display()) })?
        }
        None => String::new(),
    };
    let mut cfg = RunConfig::parse(&text)?;
    if let Some(s) = cli.seed {
        cfg.init.seed = s;
    }
    std::fs::create_dir_all(&cli.out)?;
    let ctx = Ctx { cfg, out: cli.out.clone(), seed: cli.seed, quiet: cli.quiet };
    match cli.command {
        Command::Simulate => cmd_simulate(&ctx),
        Command::Verify => cmd_verify(&ctx),
        Command::ScaleCheck => cmd_scale_check(&ctx),
        Command::Pinch => cmd_pinch(&ctx),
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn cmd_simulate(ctx: &Ctx) -> Result<i32> {
    let cfg = &ctx.cfg;
    let (state, resume) = match &cfg.resume {
        Some(p) => Checkpoint::load(p)?.restore()?,
        None => (canonical(&cfg.initial_state(&cfg.grid()?)?), Resume::default()),
    };
    state.validate()?;
    let with_pinch = state.labels.len() >= 2 && cfg.init.kind == InitKind::Crest;
    let ctrl = cfg.step_control();
    let mut table = Table::new(with_pinch);
    let mut err = None;
    let every = cfg.output_every;
    let outcome = evolve_from(state, &ctrl, Cadence::Steps(every), resume, &mut |x| {
        if x.stop.is_some() && table.rows.last().is_some_and(|r| r.step == x.step) {
            table.rows.pop();
        }
        let report = match energy_report(x.state) {
            Ok(r) => r,
            Err(e) => {
                err = Some(e);
                return false;
            }
        };
        let d_pinch = with_pinch.then(|| (x.state.labels[0].pos - x.state.labels[1].pos).norm());
        table.rows.push(Row { step: x.step, dt: x.dt, report, d_pinch });
        if x.stop.is_none() && cfg.checkpoint_every > 0 && x.step > 0 && x.step % cfg.checkpoint_every as u64 == 0 {
            let cp = Checkpoint::capture(x.state, Resume { step: x.step, next_output: 0 }, x.dt);
            if let Err(e) = cp.save(&ctx.path(&format!("_step{:08}.json", x.step))) {
                err = Some(e);
                return false;
            }
        }
        true
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    table.stop = Some(outcome.stop);
    table.write(&ctx.path(".csv"))?;
    Checkpoint::capture(&outcome.state, Resume { step: outcome.steps, next_output: 0 }, outcome.last_dt)
        .save(&ctx.path("_final.json"))?;
    ctx.say(&format!(
        "simulate: t = {:.6} after {} steps, stop = {}",
        outcome.state.t,
        outcome.steps,
        outcome.stop.as_str()
    ));
    Ok(match outcome.stop {
        StopReason::Blowup | StopReason::NearSingular => EXIT_NUMERIC,
        _ => EXIT_OK,
    })
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    identities: Vec<IdentityResult>,
    refinement: Vec<RefinementRow>,
    apriori: Option<AprioriReport>,
    rigidity: Option<RigidityVerdicts>,
    passed: bool,
}

fn cmd_verify(ctx: &Ctx) -> Result<i32> {
    let cfg = &ctx.cfg;
    let grid = cfg.grid()?;
    let opts = SuiteOptions { corrupt_hilbert: cfg.suite.corrupt_hilbert };
    let seed0 = ctx.seed.unwrap_or(cfg.init.seed);
    let tol = registered_tol(cfg.n_grid, cfg.suite.tol);
    let mut report =
        VerifyReport { identities: Vec::new(), refinement: Vec::new(), apriori: None, rigidity: None, passed: true };
    if cfg.suite.identities {
        let s = cfg.initial_state(&grid)?;
        report.identities.extend(run_identity_suite_with(&s, &format!("{:?}", cfg.init.kind), opts, tol));
        if cfg.mode.is_disc() {
            for k in 0..cfg.suite.random_states as u64 {
                let s = disc_random(&grid, seed0 + k)?;
                report.identities.extend(run_identity_suite_with(&s, &format!("random seed {}", seed0 + k), opts, tol));
            }
        }
    }
    if cfg.suite.refinement && cfg.mode.is_disc() && !cfg.suite.corrupt_hilbert {
        let sizes: Vec<usize> = [cfg.n_grid / 4, cfg.n_grid / 2, cfg.n_grid].into_iter().filter(|&n| n >= 16).collect();
        if sizes.len() >= 2 {
            let build = |g: &Grid| disc_random(g, seed0).expect("seeded random state");
            report.refinement = refinement(&build, &sizes, cfg.grid_offset, 8.0, 1e-11)?;
        }
    }
    if cfg.suite.apriori {
        let s = cfg.initial_state(&grid)?;
        let interval = cfg.t_final / 20.0;
        let (traj, _) = record_energies(s, &cfg.step_control(), interval)?;
        report.apriori = Some(monitor_apriori(&traj)?);
    }
    if cfg.suite.rigidity {
        if cfg.init.kind != InitKind::Crest {
            return Err(Error::Config { line: 0, msg: "suite.rigidity needs init.kind = crest".into() });
        }
        let s = cfg.initial_state(&grid)?;
        let (_, v, _) = rigidity_track(s, &cfg.step_control(), cfg.t_final / 10.0)?;
        report.rigidity = Some(v);
    }
    let mut failed: Vec<String> = report
        .identities
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{} on {} (rel {:.3e} > {:.0e})", r.name, r.state, r.rel_gap, r.tol))
        .collect();
    failed.extend(
        report.refinement.iter().filter(|r| !r.spectral).map(|r| format!("{} refinement {:?}", r.name, r.gaps)),
    );
    if let Some(a) = &report.apriori {
        if !a.violations.is_empty() || !a.fitted_c.is_finite() || a.envelope_ratio > 1.01 {
            failed.push(format!("apriori {a:?}"));
        }
    }
    if let Some(v) = &report.rigidity {
        if !v.all() {
            failed.push(format!("rigidity {v:?}"));
        }
    }
    report.passed = failed.is_empty();
    write_json(&ctx.path("_verify.json"), &report)?;
    for f in &failed {
        ctx.say(&format!("FAIL {f}"));
    }
    ctx.say(&format!("verify: {} identity checks, {} failures", report.identities.len(), failed.len()));
    Ok(if report.passed { EXIT_OK } else { EXIT_VERIFY })
}

#[derive(Debug, Serialize)]
struct ScaleRow {
    num: u32,
    den: u32,
    s: f64,
    at_t0: Vec<(String, f64)>,
    co_run: Vec<(String, f64)>,
    lossy: bool,
    passed: bool,
}

fn cmd_scale_check(ctx: &Ctx) -> Result<i32> {
    let cfg = &ctx.cfg;
    if cfg.mode.is_disc() {
        return Err(Error::Unsupported("scale-check needs mode = line".into()));
    }
    let state = cfg.initial_state(&cfg.grid()?)?;
    let mut rows = Vec::new();
    let pairs = |v: Vec<Covariance>| v.into_iter().map(|c| (c.name.to_string(), c.relgap)).collect::<Vec<_>>();
    for p in &cfg.scale_list {
        let mut row = ScaleRow {
            num: p.num,
            den: p.den,
            s: p.s,
            at_t0: Vec::new(),
            co_run: Vec::new(),
            lossy: false,
            passed: false,
        };
        match check_covariance(&state, p) {
            Ok(v) => row.at_t0 = pairs(v),
            Err(Error::Lossy(_)) => row.lossy = true,
            Err(e) => return Err(e),
        }
        if !row.lossy && cfg.scale_t_final > 0.0 {
            row.co_run = pairs(time_covariance(&state, p, cfg.dt_init, cfg.scale_t_final, cfg.scale_samples)?);
        }
        row.passed = !row.lossy
            && row.at_t0.iter().all(|(_, g)| *g <= SCALE_TOL)
            && row.co_run.iter().all(|(_, g)| *g <= SCALE_TIME_TOL);
        ctx.say(&format!(
            "lambda = {}/{} s = {}: {}",
            p.num,
            p.den,
            p.s,
            if row.lossy {
                "lossy".to_string()
            } else if row.passed {
                "ok".to_string()
            } else {
                "FAIL".to_string()
            }
        ));
        rows.push(row);
    }
    write_json(&ctx.path("_scale.json"), &rows)?;
    Ok(if rows.iter().all(|r| r.passed) { EXIT_OK } else { EXIT_VERIFY })
}

fn cmd_pinch(ctx: &Ctx) -> Result<i32> {
    let cfg = &ctx.cfg;
    if !cfg.mode.is_disc() {
        return Err(Error::Unsupported("pinch needs mode = disc".into()));
    }
    let pc = PinchConfig {
        n: cfg.n_grid,
        offset: cfg.grid_offset,
        horizon: cfg.pinch_horizon,
        t_final_static: cfg.t_final,
        outputs: cfg.pinch_outputs,
        dt_fraction: cfg.pinch_dt_fraction,
    };
    let r = pinch_experiment(&cfg.crest_spec(), &pc)?;
    let mut table = Table::new(true);
    for (i, s) in r.samples.iter().enumerate() {
        table.rows.push(Row { step: i as u64, dt: s.dt, report: s.report.clone(), d_pinch: Some(s.d) });
    }
    table.stop = Some(r.stop);
    table.write(&ctx.path(".csv"))?;
    write_json(&ctx.path("_pinch.json"), &r)?;
    ctx.say(&format!(
        "pinch: d0 = {:.6}, v = {:.6}, stop = {} at t = {:.6} ({:.3} d/v), d deviation {:.3e}, bracket [{:.6e}, {:.6e}]",
        r.d0,
        r.v,
        r.stop.as_str(),
        r.t_stop,
        r.t_stop / r.upper,
        r.d_deviation,
        r.lower,
        r.upper
    ));
    Ok(EXIT_OK)
}
