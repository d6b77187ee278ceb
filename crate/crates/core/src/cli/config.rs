//! Flat `key = value` run configuration.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::initialdata::{
    disc_crest_pinch, disc_random, disc_smooth, disc_trivial, line_rest, line_wave, linear_wave_velocity,
    rotational_dilation, CrestSpec,
};
use crate::model::{Mode, WaveState, DEFAULT_KRASNY_EPS};
use crate::scaling::ScalingParams;
use crate::spectral::Grid;
use crate::stepper::StepControl;
use crate::C64;

pub const KNOWN_KEYS: &[&str] = &[
    "mode",
    "n_grid",
    "grid_offset",
    "dealias_fraction",
    "dt_init",
    "dt_max",
    "dt_min",
    "cfl",
    "t_final",
    "g",
    "krasny_eps",
    "init.kind",
    "init.eps",
    "init.nu",
    "init.seed",
    "init.taylor_terms",
    "init.vel_re",
    "init.vel_im",
    "init.radius",
    "init.delta_re",
    "init.delta_im",
    "init.m",
    "init.amplitude",
    "init.k",
    "init.u_re",
    "init.u_im",
    "output.path",
    "output.every",
    "checkpoint.every",
    "resume",
    "suite.identities",
    "suite.refinement",
    "suite.random_states",
    "suite.apriori",
    "suite.rigidity",
    "suite.corrupt_hilbert",
    "suite.tol",
    "scale.list",
    "scale.t_final",
    "scale.samples",
    "pinch.horizon",
    "pinch.outputs",
    "pinch.dt_fraction",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitKind {
    Trivial,
    Smooth,
    Rotational,
    Random,
    Crest,
    LineWave,
    LineRest,
}

impl FromStr for InitKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "trivial" => InitKind::Trivial,
            "smooth" => InitKind::Smooth,
            "rotational" => InitKind::Rotational,
            "random" => InitKind::Random,
            "crest" => InitKind::Crest,
            "line_wave" => InitKind::LineWave,
            "line_rest" => InitKind::LineRest,
            _ => return Err(format!("unknown init.kind '{s}'")),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InitParams {
    pub kind: InitKind,
    pub eps: f64,
    pub nu: f64,
    pub seed: u64,
    pub taylor_terms: usize,
    pub vel: C64,
    pub radius: f64,
    pub delta: C64,
    pub m: i64,
    pub amplitude: f64,
    pub k: i64,
    /// None: linear wave speed
    pub u: Option<C64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteFlags {
    pub identities: bool,
    pub refinement: bool,
    pub random_states: usize,
    pub apriori: bool,
    pub rigidity: bool,
    pub corrupt_hilbert: bool,
    pub tol: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub n_grid: usize,
    pub grid_offset: f64,
    pub dealias_fraction: f64,
    pub dt_init: f64,
    pub dt_max: f64,
    pub dt_min: f64,
    pub cfl: f64,
    pub t_final: f64,
    pub krasny_eps: f64,
    pub init: InitParams,
    pub output_path: String,
    /// steps between output rows
    pub output_every: usize,
    /// steps between checkpoints, 0 for the final one only
    pub checkpoint_every: usize,
    pub resume: Option<PathBuf>,
    pub suite: SuiteFlags,
    pub scale_list: Vec<ScalingParams>,
    pub scale_t_final: f64,
    pub scale_samples: usize,
    pub pinch_horizon: f64,
    pub pinch_outputs: usize,
    pub pinch_dt_fraction: f64,
}

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((k, v)) = body.split_once('=') else {
                return Err(Error::Config { line, msg: format!("expected 'key = value', got '{body}'") });
            };
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() {
                return Err(Error::Config { line, msg: "empty key".into() });
            }
            if !KNOWN_KEYS.contains(&k) {
                return Err(Error::Config { line, msg: format!("unknown key '{k}'") });
            }
            if let Some((first, _)) = map.insert(k.to_string(), (line, v.to_string())) {
                return Err(Error::Config { line, msg: format!("key '{k}' repeats line {first}") });
            }
        }
        Ok(Entries { map })
    }

    fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        match self.map.get(key) {
            None => Ok(default),
            Some((line, v)) => v.parse().map_err(|e| Error::Config { line: *line, msg: format!("{key} = '{v}': {e}") }),
        }
    }

    fn opt<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.map.get(key) {
            None => Ok(None),
            Some((line, v)) => {
                v.parse().map(Some).map_err(|e| Error::Config { line: *line, msg: format!("{key} = '{v}': {e}") })
            }
        }
    }

    fn line(&self, key: &str) -> usize {
        self.map.get(key).map_or(0, |(l, _)| *l)
    }

    fn check(&self, key: &str, ok: bool, msg: &str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::Config { line: self.line(key), msg: format!("{key}: {msg}") })
        }
    }
}

fn parse_scale_list(text: &str, line: usize) -> Result<Vec<ScalingParams>> {
    let bad = |msg: String| Error::Config { line, msg: format!("scale.list: {msg}") };
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (lam, s) = item.split_once(':').ok_or_else(|| bad(format!("'{item}' is not num/den:s")))?;
        let (num, den) = match lam.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (lam.trim(), "1"),
        };
        let num: u32 = num.parse().map_err(|e| bad(format!("'{item}': {e}")))?;
        let den: u32 = den.parse().map_err(|e| bad(format!("'{item}': {e}")))?;
        let s: f64 = s.trim().parse().map_err(|e| bad(format!("'{item}': {e}")))?;
        out.push(ScalingParams::new(num, den, s).map_err(|e| bad(e.to_string()))?);
    }
    if out.is_empty() {
        return Err(bad("empty".into()));
    }
    Ok(out)
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let e = Entries::parse(text)?;
        let mode_name: String = e.get("mode", "disc".to_string())?;
        let g: f64 = e.get("g", 1.0)?;
        let mode = match mode_name.as_str() {
            "disc" => {
                e.check("g", !e.map.contains_key("g") || g == 0.0, "the disc has no gravity")?;
                Mode::Disc
            }
            "line" => {
                e.check("g", g >= 0.0 && g.is_finite(), "must be finite and >= 0")?;
                Mode::Line { g }
            }
            other => {
                return Err(Error::Config { line: e.line("mode"), msg: format!("mode '{other}' is not disc or line") })
            }
        };
        let n_grid: usize = e.get("n_grid", 256)?;
        e.check("n_grid", n_grid >= 8, "at least 8")?;
        let grid_offset: f64 = e.get("grid_offset", 0.5)?;
        e.check("grid_offset", (0.0..1.0).contains(&grid_offset), "in [0, 1)")?;
        let dealias_fraction: f64 = e.get("dealias_fraction", 1.0 / 3.0)?;
        e.check("dealias_fraction", dealias_fraction > 0.0 && dealias_fraction <= 0.5, "in (0, 1/2]")?;
        let dt_init: f64 = e.get("dt_init", 1e-2)?;
        e.check("dt_init", dt_init > 0.0 && dt_init.is_finite(), "must be positive")?;
        let dt_max: f64 = e.get("dt_max", dt_init)?;
        e.check("dt_max", dt_max >= dt_init && dt_max.is_finite(), "must be >= dt_init")?;
        let dt_min: f64 = e.get("dt_min", dt_init * 1e-6)?;
        e.check("dt_min", dt_min > 0.0 && dt_min <= dt_init, "in (0, dt_init]")?;
        let cfl: f64 = e.get("cfl", 0.5)?;
        e.check("cfl", cfl > 0.0 && cfl <= 1.0, "in (0, 1]")?;
        let t_final: f64 = e.get("t_final", 1.0)?;
        e.check("t_final", t_final > 0.0 && t_final.is_finite(), "must be positive")?;
        let krasny_eps: f64 = e.get("krasny_eps", DEFAULT_KRASNY_EPS)?;
        e.check("krasny_eps", (0.0..1.0).contains(&krasny_eps), "in [0, 1)")?;

        let default_kind = if mode.is_disc() { InitKind::Rotational } else { InitKind::LineWave };
        let kind: InitKind = e.get("init.kind", default_kind)?;
        let disc_kind = matches!(
            kind,
            InitKind::Trivial | InitKind::Smooth | InitKind::Rotational | InitKind::Random | InitKind::Crest
        );
        e.check("init.kind", disc_kind == mode.is_disc(), &format!("{kind:?} does not belong to mode {mode_name}"))?;
        let u = match (e.opt::<f64>("init.u_re")?, e.opt::<f64>("init.u_im")?) {
            (None, None) => None,
            (a, b) => Some(C64::new(a.unwrap_or(0.0), b.unwrap_or(0.0))),
        };
        let init = InitParams {
            kind,
            eps: e.get("init.eps", 0.1)?,
            nu: e.get("init.nu", 0.3)?,
            seed: e.get("init.seed", 0)?,
            taylor_terms: e.get("init.taylor_terms", 1 << 16)?,
            vel: C64::new(e.get("init.vel_re", 0.0)?, e.get("init.vel_im", 0.0)?),
            radius: e.get("init.radius", 1.0)?,
            delta: C64::new(e.get("init.delta_re", 0.05)?, e.get("init.delta_im", 0.0)?),
            m: e.get("init.m", 3)?,
            amplitude: e.get("init.amplitude", 0.05)?,
            k: e.get("init.k", 2)?,
            u,
        };
        e.check("init.eps", init.eps.is_finite() && init.eps >= 0.0, "must be finite and >= 0")?;

        let output_every: usize = e.get("output.every", 10)?;
        e.check("output.every", output_every >= 1, "at least 1")?;
        let checkpoint_every: usize = e.get("checkpoint.every", 0)?;
        e.check("checkpoint.every", checkpoint_every % output_every == 0, "must be a multiple of output.every")?;
        let output_path: String = e.get("output.path", "run".to_string())?;
        e.check("output.path", !output_path.is_empty() && !output_path.contains(['/', '\\']), "a plain file stem")?;

        let suite = SuiteFlags {
            identities: e.get("suite.identities", true)?,
            refinement: e.get("suite.refinement", true)?,
            random_states: e.get("suite.random_states", 3)?,
            apriori: e.get("suite.apriori", false)?,
            rigidity: e.get("suite.rigidity", false)?,
            corrupt_hilbert: e.get("suite.corrupt_hilbert", false)?,
            tol: e.get("suite.tol", crate::verify::DEFAULT_TOL)?,
        };
        e.check("suite.tol", suite.tol > 0.0, "must be positive")?;
        let scale_list = match e.map.get("scale.list") {
            Some((line, v)) => parse_scale_list(v, *line)?,
            None => {
                vec![ScalingParams::new(2, 1, 0.5)?, ScalingParams::new(2, 1, 1.0)?, ScalingParams::new(1, 2, 0.0)?]
            }
        };
        let scale_t_final: f64 = e.get("scale.t_final", 0.0)?;
        e.check("scale.t_final", scale_t_final >= 0.0 && scale_t_final.is_finite(), "must be >= 0")?;
        let scale_samples: usize = e.get("scale.samples", 4)?;
        e.check("scale.samples", scale_samples >= 1, "at least 1")?;
        let pinch_horizon: f64 = e.get("pinch.horizon", 1.2)?;
        e.check("pinch.horizon", pinch_horizon > 0.0, "must be positive")?;
        let pinch_outputs: usize = e.get("pinch.outputs", 200)?;
        e.check("pinch.outputs", pinch_outputs >= 3, "at least 3")?;
        let pinch_dt_fraction: f64 = e.get("pinch.dt_fraction", 0.5)?;
        e.check("pinch.dt_fraction", pinch_dt_fraction > 0.0 && pinch_dt_fraction <= 1.0, "in (0, 1]")?;

        Ok(RunConfig {
            mode,
            n_grid,
            grid_offset,
            dealias_fraction,
            dt_init,
            dt_max,
            dt_min,
            cfl,
            t_final,
            krasny_eps,
            init,
            output_path,
            output_every,
            checkpoint_every,
            resume: e.opt::<String>("resume")?.map(PathBuf::from),
            suite,
            scale_list,
            scale_t_final,
            scale_samples,
            pinch_horizon,
            pinch_outputs,
            pinch_dt_fraction,
        })
    }

    pub fn grid(&self) -> Result<Grid> {
        let cutoff = (self.n_grid as f64 * self.dealias_fraction).floor() as usize;
        Grid::build(self.n_grid, self.grid_offset, cutoff)
    }

    pub fn step_control(&self) -> StepControl {
        StepControl {
            dt_init: self.dt_init,
            cfl: self.cfl,
            dt_max: self.dt_max,
            dt_min: self.dt_min,
            t_final: self.t_final,
            filter_eps: self.krasny_eps,
        }
    }

    pub fn crest_spec(&self) -> CrestSpec {
        CrestSpec { nu: self.init.nu, eps: self.init.eps, taylor_terms: self.init.taylor_terms }
    }

    /// Build the configured initial state on `grid`.
    pub fn initial_state(&self, grid: &Grid) -> Result<WaveState> {
        let p = &self.init;
        let g = self.mode.gravity();
        match p.kind {
            InitKind::Trivial => Ok(disc_trivial(grid, p.vel)),
            InitKind::Smooth => {
                let vel = [(0, p.vel), (1, C64::new(-p.eps, 0.0))];
                disc_smooth(grid, p.radius, p.delta, p.m, &vel)
            }
            InitKind::Rotational => Ok(rotational_dilation(grid, p.eps)),
            InitKind::Random => disc_random(grid, p.seed),
            InitKind::Crest => Ok(disc_crest_pinch(grid, &self.crest_spec())?.state),
            InitKind::LineWave => {
                let u = p.u.unwrap_or_else(|| linear_wave_velocity(g, p.amplitude, p.k));
                line_wave(grid, g, p.amplitude, p.k, u)
            }
            InitKind::LineRest => line_rest(grid, g),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_comments() {
        let c = RunConfig::parse("# nothing\n\nn_grid = 64 # inline\n").unwrap();
        assert_eq!(c.n_grid, 64);
        assert_eq!(c.mode, Mode::Disc);
        assert_eq!(c.init.kind, InitKind::Rotational);
        assert_eq!(c.grid().unwrap().cutoff(), 21);
    }

    #[test]
    fn unknown_key_names_line() {
        let err = RunConfig::parse("n_grid = 64\nspeed = 3\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn bad_values_name_line() {
        assert!(matches!(RunConfig::parse("cfl = 2").unwrap_err(), Error::Config { line: 1, .. }));
        assert!(matches!(RunConfig::parse("\nn_grid = many").unwrap_err(), Error::Config { line: 2, .. }));
        assert!(matches!(RunConfig::parse("mode = disc\ng = 1").unwrap_err(), Error::Config { line: 2, .. }));
        assert!(matches!(RunConfig::parse("n_grid = 8\nn_grid = 16").unwrap_err(), Error::Config { line: 2, .. }));
        assert!(matches!(
            RunConfig::parse("mode = line\ninit.kind = crest").unwrap_err(),
            Error::Config { line: 2, .. }
        ));
        assert!(matches!(RunConfig::parse("junk").unwrap_err(), Error::Config { line: 1, .. }));
    }

    #[test]
    fn scale_list_parses() {
        let c = RunConfig::parse("mode = line\nscale.list = 2/1:0.5, 1/2:0, 4:1").unwrap();
        assert_eq!(c.scale_list.len(), 3);
        assert_eq!(c.scale_list[2].num, 4);
        assert!(RunConfig::parse("scale.list = 3/1:1").is_err());
    }
}
