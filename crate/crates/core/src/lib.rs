//! Finite trees and finitely presented infinite trees, with exact rooted
//! isomorphism and embedding decisions, twin checks and the generators for
//! several twin families.

pub mod checks;
pub mod construct;
pub mod decide;
pub mod dsl;
pub mod finite_tree;
pub mod matching;
pub mod multiplicity;
pub mod random;
pub mod report;
pub mod scheme;

pub use multiplicity::Multiplicity;
