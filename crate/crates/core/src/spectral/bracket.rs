//! Commutator brackets [f; g], [f1, f2; g], [f1, f2, f3; g].
//!
//! Disc convention, with x = (β - α)/2:
//!
//! ```text
//! [f; g](α)          =  (1/2πi) ∫ (f(α) - f(β)) cot x g(β) dβ     = f H̃g - H̃(fg)
//! [f1, f2; g](α)     = -(1/4πi) ∫ Π (fk(α) - fk(β))/sin x g(β) dβ
//! [f1, f2, f3; g](α) =  (1/8πi) ∫ Π (fk(α) - fk(β))/sin x cos x g(β) dβ
//! ```
//!
//! The line convention flips the sign of every bracket.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::{Convention, Field};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketMethod {
    Multiplier,
    Quadrature,
}

pub fn bracket(order: usize, fs: &[&Field], g: &Field, method: BracketMethod, conv: Convention) -> Result<Field> {
    if !(1..=3).contains(&order) || fs.len() != order {
        return Err(Error::OrderMismatch { order, got: fs.len() });
    }
    for f in fs {
        f.check_grid(g)?;
        f.check_finite("bracket input")?;
    }
    g.check_finite("bracket input")?;
    let disc = match method {
        BracketMethod::Multiplier => match order {
            1 => b1(fs[0], g),
            2 => b2(fs[0], fs[1], g),
            _ => b3(fs[0], fs[1], fs[2], g),
        },
        BracketMethod::Quadrature => quadrature(fs, g),
    };
    Ok(match conv {
        Convention::Disc => disc,
        Convention::Line => -disc,
    })
}

/// f H̃g - H̃(fg), disc convention.
pub fn b1(f: &Field, g: &Field) -> Field {
    let d = Convention::Disc;
    f * &g.hilbert(d) - (f * g).hilbert(d)
}

pub fn b2(f1: &Field, f2: &Field, g: &Field) -> Field {
    b1(f1, &(f2 * g).deriv()) + b1(f2, &(f1 * g).deriv()) - b1(&(f1 * f2), &g.deriv())
}

pub fn b3(f1: &Field, f2: &Field, f3: &Field, g: &Field) -> Field {
    let gp = g.deriv();
    let sym = b2(f2, f3, &(f1.deriv() * g)) + b2(f1, f3, &(f2.deriv() * g)) + b2(f1, f2, &(f3.deriv() * g));
    let tail = f3 * &b2(f1, f2, &gp) - b2(f1, f2, &(f3 * &gp));
    (sym - tail).scale_re(0.5)
}

/// Alternating-point rule: target node i uses only nodes j with j - i odd,
/// weight 2h. The kernel singularity is never sampled.
fn quadrature(fs: &[&Field], g: &Field) -> Field {
    let grid = g.grid();
    let n = grid.n();
    let nodes = grid.nodes();
    let h = grid.spacing();
    let gv = g.values();
    let order = fs.len();
    let pre = match order {
        1 => C64::new(0.0, -1.0 / (2.0 * PI)),
        2 => C64::new(0.0, 1.0 / (4.0 * PI)),
        _ => C64::new(0.0, -1.0 / (8.0 * PI)),
    } * (2.0 * h);
    let out = (0..n)
        .map(|i| {
            let mut s = C64::default();
            for j in ((i + 1) % 2..n).step_by(2) {
                let x = 0.5 * (nodes[j] - nodes[i]);
                let (sn, cs) = x.sin_cos();
                let term = match order {
                    1 => (fs[0].values()[i] - fs[0].values()[j]) * (cs / sn),
                    2 => (fs[0].values()[i] - fs[0].values()[j]) * (fs[1].values()[i] - fs[1].values()[j]) / (sn * sn),
                    _ => {
                        (fs[0].values()[i] - fs[0].values()[j])
                            * (fs[1].values()[i] - fs[1].values()[j])
                            * (fs[2].values()[i] - fs[2].values()[j])
                            * (cs / (sn * sn * sn))
                    }
                };
                s += term * gv[j];
            }
            s * pre
        })
        .collect();
    Field::from_values(grid, out)
}
