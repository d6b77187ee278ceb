//! Periodic grids, fields, Fourier multipliers, brackets and norms.

mod bracket;
mod field;
mod grid;
mod multiplier;
mod norm;

pub use bracket::{b1, b2, b3, bracket, BracketMethod};
pub use field::Field;
pub use grid::Grid;
pub use multiplier::{apply, apply_multiplier, Convention, MultiplierKind};
pub use norm::{hhalf, hhalf_quadrature, hhalf_quadrature_sq, hhalf_sq, l2, l2_sq, linf, norm, NormKind};
