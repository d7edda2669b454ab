//! Exact computations around projective degrees of minimal orbits and the
//! additive-combinatorics consequences of their fixed-point formulas.
//!
//! - [`exact`]: big rationals, prime fields, sparse polynomials.
//! - [`roots`]: root data and closed-form degrees.
//! - [`symfun`]: Vandermonde and Schur evaluation, `mu(b)`, `K_b`, `L_w`, `R_w`, `Q`.
//! - [`bruhat`]: permutations and the Bruhat order.
//! - [`localization`]: fixed-point sums and identity verification.
//! - [`sumsets`]: restricted sumsets in `F_p` and theorem scanners.
//! - [`grasshopper`]: budget sequences, matchings, and path searches.

pub mod bruhat;
pub mod error;
pub mod exact;
pub mod grasshopper;
pub mod localization;
pub mod par;
pub mod roots;
pub mod sumsets;
pub mod symfun;

pub use error::{Error, Result};
pub use exact::{Field, FieldValue, Modulus, SparsePoly};
pub use par::Exec;
