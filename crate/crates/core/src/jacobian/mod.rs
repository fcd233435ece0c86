//! Intersection theory on `C × W^r_d(C)` for a general curve `C` of genus
//! `h = g - 1`, and the test-curve computation of the syzygy-divisor
//! coefficients.
//!
//! The cohomology classes used are `η` (pullback of the point class of `C`),
//! `θ` (pullback of the theta divisor), `γ` (the mixed class) and
//! `c_k = c_k(E^∨)` for the tautological kernel bundle on `W^r_d(C)`.

mod bundles;
mod harris_tu;
mod ring;
mod solve;

pub use bundles::{
    c1_expansions, c1_g0j_restricted, class_x, class_y, recursion_expansions, C1Expansion, TestLocus,
};
pub use harris_tu::{
    calibrate, determinant, elementary_product_expansion, eval_chern_product, harris_tu, lemma_check,
    vandermonde_closed_form, vandermonde_direct, ChernMonomial, Convention, IdentityCheck, LemmaCheck,
    CALIBRATED,
};
pub use ring::{Basis, JacobianElement, Sector};
pub use solve::{integrate, solve_coefficients, SolvedClass};

use crate::error::Result;
use crate::syzygy::{family, SyzygyFamily};

/// Parameters of one member of the family together with the genus `h` of
/// the curve `C`. `W^r_d(C)` has dimension `r` and `θ^h` integrates to `h!`
/// on `Pic^d(C)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EvalContext {
    pub s: i64,
    pub i: i64,
    pub r: i64,
    /// Genus of the family; the curve `C` has genus `g - 1`.
    pub g: i64,
    pub d: i64,
    pub h: i64,
}

impl EvalContext {
    pub fn new(s: i64, i: i64) -> Result<EvalContext> {
        Ok(Self::from_family(&family(s, i)?))
    }

    pub fn from_family(f: &SyzygyFamily) -> EvalContext {
        EvalContext { s: f.s, i: f.i, r: f.r, g: f.g, d: f.d, h: f.g - 1 }
    }

    /// `h + r - d`, which equals `s - 1` on the family.
    pub fn shift(&self) -> i64 {
        self.h + self.r - self.d
    }
}
