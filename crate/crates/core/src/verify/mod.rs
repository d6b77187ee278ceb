//! Numerical verification: identity suite, a priori envelope, crest rigidity
//! and the two-crest pinch experiment.

pub mod apriori;
pub mod identities;
pub mod pinch;
pub mod rigidity;

pub use apriori::{monitor_apriori, record_energies, AprioriReport};
pub use identities::{
    refinement, registered_tol, run_identity_suite, run_identity_suite_with, IdentityResult, RefinementRow,
    SuiteOptions, DEFAULT_TOL, IDENTITY_NAMES,
};
pub use pinch::{pinch_experiment, PinchConfig, PinchReport, PinchSample};
pub use rigidity::{rigidity_track, RigiditySample, RigidityTrace, RigidityVerdicts};
