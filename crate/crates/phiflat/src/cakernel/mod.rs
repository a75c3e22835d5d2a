//! Exact arithmetic and Gröbner-basis engine over the rationals: the
//! computational substrate every other module calls.
//!
//! Coefficients are arbitrary-precision rationals throughout; there are no
//! modular shortcuts. The default monomial order is grevlex, with lex and
//! block orders available for elimination. All values are immutable after
//! construction and every operation is a deterministic pure function, so
//! concurrent use on distinct values is safe.

mod affine;
mod gb;
mod ideal;
mod module;
mod ops;
mod order;
mod poly;

pub use affine::AffineRing;
pub use ideal::{normal_form, Ideal};
pub use module::FreeSubmodule;
pub use ops::{
    colon_ideal, colon_submodule, division_with_quotients, intersect_submodules, module_kernel,
    radical_member, saturate_ideal, saturate_submodule, syzygies,
};
pub use order::MonomialOrder;
pub use poly::{rat_int, Poly, PolyRing, Rat, Term};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CaError {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("bad variable: {0}")]
    BadVariable(String),
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}
