//! Exact divisor-class computations on moduli spaces of stable curves.
//!
//! Every number in this crate is an exact rational. The modules are:
//!
//! - [`picard`]: divisor classes over the `λ, ψ_i, δ_0, δ_{i:S}` basis and
//!   their JSON interchange format.
//! - [`cones`]: F-curve inequalities, nef/ample checks and exact cone
//!   membership.
//! - [`slopes`]: the slope function, named classes on `M̄_g`, test-curve
//!   pairings and general-type certificates.
//! - [`syzygy`]: the `(s, i)` family of syzygy divisors and their virtual
//!   slopes.
//! - [`jacobian`]: intersection theory on `C × W^r_d(C)` and the test-curve
//!   solve that re-derives those slopes.
//! - [`pointed`]: classes and certificates on `M̄_{g,n}`.

pub mod cones;
pub mod error;
pub mod jacobian;
pub mod lp;
pub mod picard;
pub mod pointed;
pub mod rational;
pub mod slopes;
pub mod syzygy;

pub use error::{Error, Result};
pub use rational::Rational;
