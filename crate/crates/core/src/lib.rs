//! Certified two-sided norm bounds, compactness certificates,
//! approximation-number upper bounds and Schatten-type norm estimates for
//! the weighted Laplace-type transform
//!
//! ```text
//! Lf(x) = ∫_0^∞ exp(-x y^λ) f(y) v(y) dy,   L : L^p(0,∞) -> L^q(0,∞),
//! ```
//!
//! together with an independent discretize-and-SVD oracle that validates
//! every implemented inequality on desk-scale fixtures.

pub mod criteria;
pub mod error;
pub mod kernel;
pub mod localnorm;
pub mod oracle;
pub mod params;
pub mod partition;
pub mod quad;
mod quantities;
pub mod report;
pub mod schatten;
pub mod weights;

pub use error::{Error, Result};
pub use params::{derived_params, Regime, SpaceParams};
pub use weights::{Piece, Weight};
