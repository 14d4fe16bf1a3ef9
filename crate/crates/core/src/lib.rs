//! Symmetry-induced local search for typed first-order optimization models.
//!
//! The crate parses models written in a small first-order modeling language
//! (see [`parser`]), detects domain-element-swap symmetries of their
//! constraints ([`symmetry`]), drops those that leave the objective
//! unchanged, and turns the rest into a neighborhood ([`neighborhood`]) for
//! local search seeded by an exact backtracking solver ([`search`],
//! [`exact`]).
//!
//! ```no_run
//! use symloc::{parser, search, symmetry::Policy};
//!
//! let text = std::fs::read_to_string("data/tsp4.mop").unwrap();
//! let mop = parser::parse_model(&text).unwrap();
//! let result =
//!     search::run_pipeline(&mop, &search::SearchConfig::default(), Policy::Exhaustive).unwrap();
//! println!("best objective {}", result.search.best_objective);
//! ```

pub mod cli;
pub mod eval;
pub mod exact;
pub mod instances;
pub mod model;
pub mod neighborhood;
pub mod parser;
pub mod report;
pub mod search;
pub mod symmetry;
pub mod validate;

pub use model::{Assignment, Mop, Sense, SpaceSize, SymbolId, TypeId};

/// Errors shared by the evaluation and enumeration layers.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("arithmetic overflow during evaluation")]
    Overflow,
    #[error("value {value} is outside the domain of type `{ty}`")]
    OutOfDomain { ty: String, value: i64 },
    #[error("assignment space exceeds the bound of {bound}")]
    SpaceOverflow { bound: u128 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
