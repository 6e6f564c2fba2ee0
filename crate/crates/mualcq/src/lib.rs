//! A toolkit for the description logic mu-ALCQ: ALCQ extended with explicit
//! least and greatest fixpoint constructs.
//!
//! The crate provides
//! - surface syntax, ASTs, well-formedness analysis and PDL-style role
//!   desugaring ([`syntax`]),
//! - finite interpretations and the fixpoint-iterating extension function
//!   ([`models`]),
//! - bounded satisfiability and logical-implication search, with TBox
//!   reasoning internalized into a single concept ([`reasoning`]),
//! - translations into plain and deterministic modal mu-calculus ([`mucalc`]),
//! - seeded random generators for concepts, TBoxes and interpretations,
//!   shared by the property suites ([`generate`]).

pub mod generate;
pub mod models;
pub mod mucalc;
pub mod reasoning;
pub mod syntax;

pub use models::{ElemSet, Interpretation, Signature, Valuation};
pub use syntax::{Concept, Polarity, TBox};
