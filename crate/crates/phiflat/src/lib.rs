//! Exact computational commutative algebra over the rationals.
//!
//! The crate is organized around a Gröbner-basis kernel ([`cakernel`]) and a
//! stack of constructions built on top of it:
//!
//! - [`phiring`] — rings equipped with a generating family of support ideals
//!   and the admissibility decision procedure,
//! - [`depth`] — torsion, purification, closure (ideal transform) and the
//!   1-deep / 2-deep decision for finitely presented modules,
//! - [`philocal`] — monomial-valuation models of local rings whose admissible
//!   ideals are invertible, with the flatness-transfer criterion,
//! - [`valuative`] — valuative points, basic opens and chart selection,
//! - [`blowup`] — Rees-algebra charts of admissible blow-ups and strict
//!   transforms of modules and algebras,
//! - [`flatten`] — Fitting-ideal flatness tests and the flattening driver
//!   emitting replayable certificates.
//!
//! All coefficients are exact arbitrary-precision rationals; every operation
//! is a deterministic pure function on immutable values.

pub mod blowup;
pub mod cakernel;
pub mod depth;
pub mod flatten;
pub mod philocal;
pub mod phiring;
pub mod valuative;

pub use cakernel::{AffineRing, Ideal, MonomialOrder, Poly, PolyRing};
