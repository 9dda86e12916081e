//! Mal'cev conditions from inequalities between relation terms.
//!
//! An inequality `p ≤ q` over meet, relational product and transitive
//! closure is turned into a set of term identities (a Mal'cev condition).
//! The crate also decides such inequalities on finite algebras and on the
//! varieties they generate, and searches for term witnesses.

pub mod decide;
pub mod error;
pub mod finalg;
pub mod malcevgen;
pub mod partition;
pub mod relterm;
pub mod termgraph;

pub use error::{Error, Result};
