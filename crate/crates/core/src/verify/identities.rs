//! Registered identity checks: each identity is evaluated two ways on a state
//! and the gap recorded.

use serde::Serialize;

use crate::model::{a_zero, Derived, Mode, WaveState};
use crate::spectral::{
    b1, b2, bracket, hhalf_quadrature_sq, hhalf_sq, BracketMethod, Convention, Field, Grid, MultiplierKind,
};
use crate::stepper::rk4_step;
use crate::C64;

/// Gaps are divided by max(scale, this), scale being the largest sup norm
/// of the terms involved.
pub const SCALE_FLOOR: f64 = 1e-6;
pub const DEFAULT_TOL: f64 = 1e-8;
/// Grid size from which [`DEFAULT_TOL`] applies unrelaxed.
pub const FINE_N: usize = 256;
/// Guaranteed gap reduction per grid doubling on analytic states.
pub const REFINE_FACTOR: f64 = 8.0;

/// Tolerance registered for an n-point grid: `base` for n ≥ 256, relaxed by
/// the refinement factor for each halving below.
pub fn registered_tol(n: usize, base: f64) -> f64 {
    let mut tol = base;
    let mut m = n.max(1);
    while m < FINE_N {
        tol *= REFINE_FACTOR;
        m *= 2;
    }
    tol
}

/// Time step used by the identities that difference along the flow.
pub const FLOW_DELTA: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityResult {
    pub name: &'static str,
    pub max_abs_gap: f64,
    pub rel_gap: f64,
    pub tol: f64,
    pub passed: bool,
    pub n: usize,
    pub state: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SuiteOptions {
    /// Perturb the Hilbert symbol on |m| = 2 inside the suite (negative control).
    pub corrupt_hilbert: bool,
}

pub const IDENTITY_NAMES: [&str; 12] = [
    "hilbert_algebra",
    "a_quadrature",
    "a_nonnegative",
    "a_projection_form",
    "bap_formula",
    "real_imag_theta",
    "dt_inv_zap_flow",
    "dt_a_flow",
    "bracket_leibniz",
    "bracket_square",
    "hhalf_quadrature",
    "integral_transport",
];

struct Gap {
    abs: f64,
    scale: f64,
}

impl Gap {
    fn new() -> Self {
        Gap { abs: 0.0, scale: 0.0 }
    }
    fn fields(&mut self, a: &Field, b: &Field) {
        self.abs = self.abs.max((a - b).max_abs());
        self.scale = self.scale.max(a.max_abs()).max(b.max_abs());
    }
    fn scalars(&mut self, a: C64, b: C64) {
        self.abs = self.abs.max((a - b).norm());
        self.scale = self.scale.max(a.norm()).max(b.norm());
    }
    fn terms(&mut self, fs: &[&Field]) {
        for f in fs {
            self.scale = self.scale.max(f.max_abs());
        }
    }
    fn rel(&self) -> f64 {
        self.abs / self.scale.max(SCALE_FLOOR)
    }
}

struct Suite<'a> {
    s: &'a WaveState,
    d: Derived,
    opts: SuiteOptions,
    conv: Convention,
}

impl<'a> Suite<'a> {
    fn ht(&self, f: &Field, conv: Convention) -> Field {
        let h = f.hilbert(conv);
        if self.opts.corrupt_hilbert {
            let g = f.grid();
            let bump: Vec<C64> = f
                .coeffs()
                .iter()
                .enumerate()
                .map(|(j, &c)| if g.mode(j).abs() == 2 { c * 0.01 } else { C64::default() })
                .collect();
            h + Field::from_coeffs(g, bump)
        } else {
            h
        }
    }

    fn b1(&self, f: &Field, g: &Field) -> Field {
        if self.opts.corrupt_hilbert {
            let d = Convention::Disc;
            f * &self.ht(g, d) - self.ht(&(f * g), d)
        } else {
            b1(f, g)
        }
    }

    /// Bracket sign of the mode relative to the disc convention.
    fn sigma(&self) -> f64 {
        match self.conv {
            Convention::Disc => 1.0,
            Convention::Line => -1.0,
        }
    }

    fn hilbert_algebra(&self) -> Gap {
        let mut gap = Gap::new();
        let fields = [self.s.ztbar.clone(), (&self.d.zt * &self.d.inv).truncate(), self.s.q.clone()];
        for f in &fields {
            for conv in [Convention::Disc, Convention::Line] {
                let f = f.truncate();
                let twice = self.ht(&self.ht(&f, conv), conv);
                gap.fields(&twice, &f.add_const(-f.mean()));
                let abs_d = crate::spectral::apply(MultiplierKind::AbsD, &f);
                let alt = self.ht(&f.deriv(), conv).scale(C64::new(0.0, -conv.sign(1)));
                gap.fields(&abs_d, &alt);
                gap.fields(&self.ht(&f.re(), conv), &self.ht(&f, conv).im().scale(C64::new(0.0, 1.0)));
                gap.fields(&self.ht(&f.im().scale(C64::new(0.0, 1.0)), conv), &self.ht(&f, conv).re());
            }
        }
        gap
    }

    fn a_quadrature(&self) -> Gap {
        let mut gap = Gap::new();
        let zt = &self.d.zt;
        let comm = self.b1(zt, &self.s.ztbar.deriv()).im();
        let one = Field::constant(zt.grid(), C64::new(1.0, 0.0));
        let quad = bracket(2, &[zt, &self.s.ztbar], &one, BracketMethod::Quadrature, Convention::Disc)
            .expect("same grid")
            .scale(C64::new(0.0, -0.5));
        gap.fields(&comm, &quad);
        gap
    }

    fn a_nonnegative(&self) -> Gap {
        let a0 = a_zero(&self.d.zt, &self.s.ztbar);
        Gap { abs: (-a0.min_re()).max(0.0), scale: a0.max_abs() }
    }

    fn a_projection_form(&self) -> Gap {
        let mut gap = Gap::new();
        let p = &self.d.zt * &self.s.ztbar.deriv();
        let rp = p.re();
        let proj = (&rp + &self.ht(&rp, self.conv)).scale(C64::new(0.0, 1.0));
        let form = (proj - p.scale(C64::new(0.0, 1.0))).scale_re(self.sigma());
        let a0 = a_zero(&self.d.zt, &self.s.ztbar);
        gap.fields(&a0, &form);
        gap.scale = gap.scale.max(p.max_abs());
        gap
    }

    fn bap_formula(&self) -> Gap {
        let mut gap = Gap::new();
        let zt = &self.d.zt;
        let shift = match self.s.mode {
            Mode::Disc => zt.mean(),
            Mode::Line { .. } => C64::default(),
        };
        let f = zt.add_const(-shift) * &self.d.inv;
        let fp = &self.d.dap_zt + &(zt.add_const(-shift) * self.d.inv.deriv());
        let dim = f.im().deriv();
        let form = (&fp - &(&dim + &self.ht(&dim, self.conv)).scale(C64::new(0.0, 1.0))).truncate();
        gap.fields(&self.d.bap, &form);
        gap
    }

    fn real_imag_theta(&self) -> Gap {
        let mut gap = Gap::new();
        let prod = &self.d.omega * &self.d.inv.deriv();
        let rhs = self.d.inv.abs().deriv();
        gap.terms(&[&prod]);
        gap.fields(&prod.re(), &rhs);
        gap
    }

    /// Values of `probe` along the label flow at t + kδ, k = 0..4.
    fn flow_samples(&self, probe: &dyn Fn(&WaveState) -> Field) -> Option<Vec<Vec<C64>>> {
        let mut st = self.s.clone();
        st.labels.clear();
        let nodes: Vec<f64> = st.grid().nodes().iter().step_by((st.grid().n() / 32).max(1)).copied().collect();
        st.track(&nodes);
        let mut out = Vec::new();
        for k in 0..5 {
            if k > 0 {
                st = rk4_step(&st, FLOW_DELTA, 0.0).ok()?;
            }
            let f = probe(&st);
            out.push(st.labels.iter().map(|l| f.interpolate(l.h)).collect());
        }
        Some(out)
    }

    fn fd4(v: &[Vec<C64>], i: usize) -> C64 {
        (v[0][i] * -25.0 + v[1][i] * 48.0 - v[2][i] * 36.0 + v[3][i] * 16.0 - v[4][i] * 3.0) / (12.0 * FLOW_DELTA)
    }

    fn along_flow(&self, probe: &dyn Fn(&WaveState) -> Field, exact: &Field) -> Gap {
        let mut gap = Gap::new();
        let Some(v) = self.flow_samples(probe) else {
            return Gap { abs: f64::INFINITY, scale: 1.0 };
        };
        let step = (self.s.grid().n() / 32).max(1);
        gap.scale = v[0].iter().fold(0.0f64, |m, c| m.max(c.norm()));
        for i in 0..v[0].len() {
            let a = exact.values()[i * step];
            gap.scalars(Self::fd4(&v, i), a);
        }
        gap
    }

    fn dt_inv_zap_flow(&self) -> Gap {
        self.along_flow(&|s: &WaveState| s.inv_zap(), &self.d.dt_inv)
    }

    /// D_tA₀ = Im(b1(Z_tt, ∂Z̄t) + b1(Z_t, ∂Z̄tt) - [b, Z_t; ∂Z̄t]).
    fn dt_a_flow(&self) -> Gap {
        let zt = &self.d.zt;
        let zbp = self.s.ztbar.deriv();
        let ztt = self.d.zttbar.conj();
        let sum = self.b1(&ztt, &zbp) + self.b1(zt, &self.d.zttbar.deriv()) - b2(&self.d.b, zt, &zbp);
        self.along_flow(&|s: &WaveState| a_zero(&s.zt(), &s.ztbar), &sum.im())
    }

    fn bracket_leibniz(&self) -> Gap {
        let mut gap = Gap::new();
        let (h, f1, f2, g) = self.test_fields();
        let d = Convention::Disc;
        let q = |fs: &[&Field], g: &Field| bracket(fs.len(), fs, g, BracketMethod::Quadrature, d).expect("same grid");
        let lhs = &h * &self.b1(&f1, &g).deriv();
        let t = [self.b1(&(&h * &f1.deriv()), &g), self.b1(&f1, &(&h * &g).deriv()), q(&[&h, &f1], &g)];
        gap.terms(&[&t[0], &t[1], &t[2]]);
        gap.fields(&lhs, &(&t[0] + &t[1] - &t[2]));
        let lhs = &h * &b2(&f1, &f2, &g).deriv();
        let t = [
            b2(&(&h * &f1.deriv()), &f2, &g),
            b2(&f1, &(&h * &f2.deriv()), &g),
            b2(&f1, &f2, &(&h * &g).deriv()),
            q(&[&h, &f1, &f2], &g).scale_re(2.0),
        ];
        gap.terms(&[&t[0], &t[1], &t[2], &t[3]]);
        gap.fields(&lhs, &(&t[0] + &t[1] + &t[2] - &t[3]));
        gap
    }

    fn bracket_square(&self) -> Gap {
        let mut gap = Gap::new();
        let (_, f, _, g) = self.test_fields();
        let t1 = self.b1(&(&f * &f), &g.deriv());
        let t2 = self.b1(&f, &(&f * &g).deriv()).scale_re(2.0);
        gap.scale = t1.max_abs().max(t2.max_abs());
        let lhs = t1 - t2;
        let rhs = -bracket(2, &[&f, &f], &g, BracketMethod::Quadrature, Convention::Disc).expect("same grid");
        gap.fields(&lhs, &rhs);
        gap
    }

    fn test_fields(&self) -> (Field, Field, Field, Field) {
        (self.d.zt.clone(), self.s.q.clone(), self.s.ztbar.clone(), self.d.inv.clone())
    }

    fn hhalf_quadrature(&self) -> Gap {
        let mut gap = Gap::new();
        for f in [&self.s.ztbar, &self.s.q, &self.d.inv] {
            let f = f.truncate();
            gap.scalars(C64::new(hhalf_sq(&f), 0.0), C64::new(hhalf_quadrature_sq(&f), 0.0));
        }
        gap
    }

    fn integral_transport(&self) -> Gap {
        let mut gap = Gap::new();
        let mut st = self.s.clone();
        st.labels.clear();
        let integral = |s: &WaveState| s.inv_zap().mean() * std::f64::consts::TAU;
        let mut v = vec![vec![integral(&st)]];
        for _ in 0..4 {
            match rk4_step(&st, FLOW_DELTA, 0.0) {
                Ok(n) => st = n,
                Err(_) => return Gap { abs: f64::INFINITY, scale: 1.0 },
            }
            v.push(vec![integral(&st)]);
        }
        gap.scale = self.d.inv.max_abs() * std::f64::consts::TAU;
        let lhs = Self::fd4(&v, 0);
        let rhs = (&self.d.dt_inv + &(&self.d.bap * &self.d.inv)).mean() * std::f64::consts::TAU;
        gap.scalars(lhs, rhs);
        gap
    }
}

/// Evaluate all registered identities on `state` at the registered tolerance
/// for its grid.
pub fn run_identity_suite(state: &WaveState, descriptor: &str) -> Vec<IdentityResult> {
    let tol = registered_tol(state.grid().n(), DEFAULT_TOL);
    run_identity_suite_with(state, descriptor, SuiteOptions::default(), tol)
}

pub fn run_identity_suite_with(
    state: &WaveState,
    descriptor: &str,
    opts: SuiteOptions,
    tol: f64,
) -> Vec<IdentityResult> {
    let n = state.grid().n();
    let d = match Derived::compute(state) {
        Ok(d) => d,
        Err(e) => {
            return IDENTITY_NAMES
                .iter()
                .map(|&name| IdentityResult {
                    name,
                    max_abs_gap: f64::INFINITY,
                    rel_gap: f64::INFINITY,
                    tol,
                    passed: false,
                    n,
                    state: format!("{descriptor}: {e}"),
                })
                .collect()
        }
    };
    let suite = Suite { s: state, d, opts, conv: state.mode.convention() };
    let gaps = [
        suite.hilbert_algebra(),
        suite.a_quadrature(),
        suite.a_nonnegative(),
        suite.a_projection_form(),
        suite.bap_formula(),
        suite.real_imag_theta(),
        suite.dt_inv_zap_flow(),
        suite.dt_a_flow(),
        suite.bracket_leibniz(),
        suite.bracket_square(),
        suite.hhalf_quadrature(),
        suite.integral_transport(),
    ];
    IDENTITY_NAMES
        .iter()
        .zip(gaps)
        .map(|(&name, g)| {
            let rel = g.rel();
            IdentityResult {
                name,
                max_abs_gap: g.abs,
                rel_gap: rel,
                tol,
                passed: rel <= tol,
                n,
                state: descriptor.to_string(),
            }
        })
        .collect()
}

/// Per-identity gaps on a ladder of grids.
#[derive(Clone, Debug, Serialize)]
pub struct RefinementRow {
    pub name: &'static str,
    pub gaps: Vec<(usize, f64)>,
    /// every doubling shrinks the gap by at least `factor` or lands below `floor`
    pub spectral: bool,
}

/// Gap ratios under grid doubling. A doubling passes if the gap drops by
/// `factor` or the finer gap is already below `floor`.
pub fn refinement(
    build: &dyn Fn(&Grid) -> WaveState,
    sizes: &[usize],
    offset: f64,
    factor: f64,
    floor: f64,
) -> crate::Result<Vec<RefinementRow>> {
    let mut table: Vec<Vec<IdentityResult>> = Vec::new();
    for &n in sizes {
        let g = Grid::with_offset(n, offset)?;
        table.push(run_identity_suite(&build(&g), "refinement"));
    }
    Ok(IDENTITY_NAMES
        .iter()
        .enumerate()
        .map(|(i, &name)| {
            let gaps: Vec<(usize, f64)> = table.iter().map(|r| (r[i].n, r[i].rel_gap)).collect();
            let spectral = gaps.windows(2).all(|w| w[1].1 <= floor || w[1].1 * factor <= w[0].1);
            RefinementRow { name, gaps, spectral }
        })
        .collect())
}
