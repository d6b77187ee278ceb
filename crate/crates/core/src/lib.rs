//! Pseudo-spectral simulation of two-dimensional free-surface Euler flow in
//! conformal boundary variables.
//!
//! Two settings are supported: a bounded blob parametrized by the unit circle
//! ([`model::Mode::Disc`], zero gravity) and a 2π-periodic surrogate of the
//! lower half-plane with gravity ([`model::Mode::Line`]). On top of the solver
//! sit the energy functionals ([`energies`]), the scaling family ([`scaling`]),
//! and a verification layer ([`verify`]) that checks identities, a-priori
//! inequalities, crest rigidity and the crest pinch scenario.
//!
//! The runnable programs under `examples/` are the intended entry points:
//!
//! | example | capability |
//! |---|---|
//! | `multipliers` | Hilbert transforms, `|d|`, projections, norms |
//! | `brackets` | commutator brackets by multiplier and by quadrature |
//! | `rotational_dilation` | the circle with strain velocity, closed forms |
//! | `line_wave` | gravity wave on the periodic surrogate |
//! | `scaling` | covariance of the energies under dilation |
//! | `identity_suite` | the registered identity checks |
//! | `apriori` | fitted constant of the energy inequality |
//! | `crest_rigidity` | crests advected with constant velocity |
//! | `pinch` | two crests approaching until resolution is lost |
//! | `checkpoint` | save, reload and resume a run |

pub mod cli;
pub mod energies;
pub mod error;
pub mod initialdata;
pub mod model;
pub mod scaling;
pub mod spectral;
pub mod stepper;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
