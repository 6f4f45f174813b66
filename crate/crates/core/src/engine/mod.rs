//! Answer counting: a brute-force oracle for every query and a join-tree
//! engine for acyclic free-connex queries.
//!
//! The free-connex path runs in three stages: full semijoin reduction,
//! elimination of quantified variables, and a weighted count over the join
//! tree of what is left. Each stage is linear in the database up to hashing.

mod bound;
mod bruteforce;
mod database;
mod dp;
mod eliminate;
mod reduce;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;

pub use bound::{BoundQuery, Table, VarId};
pub use bruteforce::{answers_bound, answers_bruteforce};
pub use database::{Database, Relation, Sym, SymbolTable};
pub use dp::count_full_acyclic;
pub use eliminate::{eliminate_quantified, eliminate_quantified_with, EliminationStep};
pub use reduce::{full_reduce, semijoin_reduce};

use crate::error::{Error, Result};
use crate::query::Query;
use crate::structure::is_free_connex;

/// Which algorithm produced a count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Engine {
    #[serde(rename = "bruteforce")]
    Bruteforce,
    #[serde(rename = "freeconnex")]
    Freeconnex,
    #[serde(rename = "full_acyclic")]
    FullAcyclic,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Bruteforce => "bruteforce",
            Engine::Freeconnex => "freeconnex",
            Engine::FullAcyclic => "full_acyclic",
        })
    }
}

/// Engine requested by the caller.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EngineChoice {
    #[default]
    Auto,
    Bruteforce,
    Freeconnex,
}

impl FromStr for EngineChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "auto" => Ok(EngineChoice::Auto),
            "bruteforce" => Ok(EngineChoice::Bruteforce),
            "freeconnex" => Ok(EngineChoice::Freeconnex),
            _ => Err(format!("unknown engine `{s}`, expected auto, bruteforce or freeconnex")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnswerCount {
    #[serde(serialize_with = "decimal")]
    pub value: BigUint,
    pub engine: Engine,
}

fn decimal<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn count_bruteforce(q: &Query, db: &Database) -> Result<AnswerCount> {
    Ok(AnswerCount {
        value: answers_bruteforce(q, db)?.len().into(),
        engine: Engine::Bruteforce,
    })
}

/// Counts with the join-tree engine; `q` must be acyclic and free-connex.
pub fn count_freeconnex(q: &Query, db: &Database) -> Result<AnswerCount> {
    let inapplicable = |reason: &str| Error::EngineInapplicable {
        engine: "freeconnex",
        reason: reason.to_owned(),
    };
    match is_free_connex(q) {
        Err(Error::NotAcyclic) => return Err(inapplicable("query is cyclic")),
        Err(e) => return Err(e),
        Ok(false) => return Err(inapplicable("query is not free-connex")),
        Ok(true) => {}
    }
    let engine = if q.quantified_vars().is_empty() {
        Engine::FullAcyclic
    } else {
        Engine::Freeconnex
    };
    let mut bq = BoundQuery::bind(q, db)?;
    full_reduce(&mut bq)?;
    let full = eliminate_quantified(bq)?;
    Ok(AnswerCount {
        value: count_full_acyclic(&full)?,
        engine,
    })
}

/// Counts distinct answers. `Auto` uses the join-tree engine exactly when the
/// query is acyclic and free-connex.
pub fn count(q: &Query, db: &Database, choice: EngineChoice) -> Result<AnswerCount> {
    match choice {
        EngineChoice::Bruteforce => count_bruteforce(q, db),
        EngineChoice::Freeconnex => count_freeconnex(q, db),
        EngineChoice::Auto => match is_free_connex(q) {
            Ok(true) => count_freeconnex(q, db),
            _ => count_bruteforce(q, db),
        },
    }
}
