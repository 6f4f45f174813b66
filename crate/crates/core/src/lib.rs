//! Conjunctive query analysis and answer counting.
//!
//! * [`structure`] decides acyclicity and free-connexness, builds join trees,
//!   finds free paths and computes the quantified star size.
//! * [`engine`] counts answers, either by exhaustive enumeration or, for
//!   acyclic free-connex queries, in time near-linear in the database.
//! * [`reductions`] builds the instances that transfer hardness: dominating
//!   set to star-query counting, and star-query counting to any acyclic query
//!   that is not free-connex.

pub mod corpus;
pub mod engine;
pub mod error;
pub mod hypergraph;
mod parse;
pub mod query;
pub mod reductions;
pub mod structure;
pub mod verify;

pub use engine::{count, AnswerCount, Database, Engine, EngineChoice};
pub use error::{Error, Result};
pub use hypergraph::{hypergraph_of, Hypergraph};
pub use parse::parse_query;
pub use query::{Atom, Query, Variable};
pub use reductions::{EmbeddingInstance, Graph, StarInstance};
pub use structure::{analyze, AnalysisReport};
