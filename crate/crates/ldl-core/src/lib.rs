//! Disjunctive sequent calculi, logical states, and finite algebraic
//! L-domains, with machinery to verify the representation theorems and the
//! categorical equivalence between consequence relations and monotone maps
//! at desk scale.
//!
//! The crate is organized around five subsystems:
//!
//! - [`formula`]: formula and sequent syntax, disjunctive bases, certified
//!   disjunction, parsing/printing, conjunction classes and flat forms.
//! - [`calculus`]: entailment backends (free over a basis, semantic over a
//!   finite L-domain), derivation checking, and bounded proof search.
//! - [`order`]: finite posets, L-domain recognition, minimal upper bounds,
//!   decomposable sets, monotone map enumeration, order isomorphism.
//! - [`states`]: logical states, state recognition and enumeration, the
//!   state poset.
//! - [`duality`]: the calculus-of-a-domain construction, the representation
//!   isomorphism, consequence relations, and the category/functor law
//!   checkers.
//!
//! [`fixtures`] holds the deterministic instance suite and [`suite`] the
//! acceptance criteria shared by the test harness and the CLI.

pub mod error;
pub mod formula;
pub mod calculus;
pub mod order;
pub mod states;
pub mod duality;
pub mod fixtures;
pub mod suite;

mod nf;

pub use error::{Error, Result};
