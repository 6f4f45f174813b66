//! Embedding the two-star query into an acyclic query that is not
//! free-connex.
//!
//! Along a free path `x1, z1, ..., zl, x2` of the target, the two end atoms
//! carry copies of the source relation `R`, atoms between consecutive
//! internal vertices carry the identity on the join column of `R`, and every
//! variable off the path is pinned to a fresh constant. Projecting the target's
//! answers to `(x1, x2)` is then a bijection onto the answers of `q*_2`.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::engine::{answers_bruteforce, Database, Relation, Sym};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::query::{Query, Variable};
use crate::structure::{find_free_path, gyo_is_acyclic, FreePath};

#[derive(Clone, Debug)]
pub struct EmbeddingInstance {
    pub target: Query,
    pub path: FreePath,
    pub database: Database,
    /// The constant every off-path variable is pinned to.
    pub constant: String,
}

/// Position of a variable on the free path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Role {
    Start,
    /// Internal vertex, 1-based.
    Inner(usize),
    End,
}

/// Picks `__d`, or `__d1`, `__d2`, ... if that already occurs in `taken`.
fn fresh_constant(taken: &HashSet<&str>) -> String {
    let mut candidate = "__d".to_owned();
    let mut i = 0;
    while taken.contains(candidate.as_str()) {
        i += 1;
        candidate = format!("__d{i}");
    }
    candidate
}

pub fn embed_star2(target: &Query, source: &Database) -> Result<EmbeddingInstance> {
    if !gyo_is_acyclic(&Hypergraph::of_query(target)) {
        return Err(Error::NotAcyclic);
    }
    let mut seen = BTreeSet::new();
    if let Some(a) = target.body.iter().find(|a| !seen.insert(&a.predicate)) {
        return Err(Error::TargetSelfJoin(a.predicate.clone()));
    }
    let path = find_free_path(target)?.ok_or(Error::TargetFreeConnex)?;
    let r = source.relation("R").ok_or_else(|| Error::MissingRelation("R".into()))?;
    if r.arity() != 2 {
        return Err(Error::NonBinarySource(r.arity()));
    }

    let name = |s: Sym| source.symbols.name(s);
    let taken: HashSet<&str> = r.symbols().map(name).collect();
    let constant = fresh_constant(&taken);
    let pairs: Vec<(&str, &str)> = r.rows().map(|t| (name(t[0]), name(t[1]))).collect();
    let firsts: BTreeSet<&str> = pairs.iter().map(|p| p.0).collect();
    let seconds: BTreeSet<&str> = pairs.iter().map(|p| p.1).collect();

    let ell = path.internal.len();
    let mut roles: HashMap<&Variable, Role> = HashMap::new();
    roles.insert(&path.endpoints.0, Role::Start);
    roles.insert(&path.endpoints.1, Role::End);
    for (i, z) in path.internal.iter().enumerate() {
        roles.insert(z, Role::Inner(i + 1));
    }

    let mut database = Database::new();
    let d = database.symbols.intern(&constant);
    for atom in &target.body {
        let on_path: BTreeSet<(Role, &Variable)> =
            atom.args.iter().filter_map(|v| roles.get(v).map(|&r| (r, v))).collect();
        // one assignment of the path variables per output row
        let assignments: Vec<Vec<(&Variable, &str)>> = match on_path.iter().collect::<Vec<_>>()[..] {
            [] => vec![Vec::new()],
            [&(Role::Start | Role::End, v)] => firsts.iter().map(|&x| vec![(v, x)]).collect(),
            [&(Role::Inner(_), v)] => seconds.iter().map(|&z| vec![(v, z)]).collect(),
            [&(Role::Start, x), &(Role::Inner(1), z)] => pairs.iter().map(|&(a, b)| vec![(x, a), (z, b)]).collect(),
            [&(Role::Inner(i), z), &(Role::End, x)] if i == ell => {
                pairs.iter().map(|&(a, b)| vec![(x, a), (z, b)]).collect()
            }
            [&(Role::Inner(i), z1), &(Role::Inner(j), z2)] if j == i + 1 => {
                seconds.iter().map(|&v| vec![(z1, v), (z2, v)]).collect()
            }
            _ => {
                return Err(Error::Internal(format!(
                    "atom {atom} meets the free path in a shape a chordless path cannot produce"
                )))
            }
        };
        let mut data = Vec::with_capacity(assignments.len() * atom.arity());
        for assignment in &assignments {
            for arg in &atom.args {
                let value = assignment.iter().find(|(v, _)| *v == arg).map(|(_, s)| *s);
                data.push(value.map_or(d, |s| database.symbols.intern(s)));
            }
        }
        let rel = if data.is_empty() {
            Relation::empty(atom.arity())
        } else {
            Relation::from_flat(atom.arity(), data)
        };
        database.set_relation(atom.predicate.clone(), rel);
    }
    Ok(EmbeddingInstance {
        target: target.clone(),
        path,
        database,
        constant,
    })
}

fn named(db: &Database, tuples: impl IntoIterator<Item = Vec<Sym>>) -> Vec<Vec<String>> {
    tuples
        .into_iter()
        .map(|t| t.iter().map(|&s| db.symbols.name(s).to_owned()).collect())
        .collect()
}

/// Checks by brute force that the target's answers on the constructed
/// database project bijectively onto the answers of `q*_2` on `source`.
pub fn verify_embedding(inst: &EmbeddingInstance, source: &Database) -> Result<bool> {
    let target_answers = named(&inst.database, answers_bruteforce(&inst.target, &inst.database)?);
    let star_answers: HashSet<Vec<String>> = named(source, answers_bruteforce(&Query::star(2), source)?)
        .into_iter()
        .collect();

    let position = |v: &Variable| inst.target.head.iter().position(|h| h == v);
    let (Some(i), Some(j)) = (position(&inst.path.endpoints.0), position(&inst.path.endpoints.1)) else {
        return Ok(false);
    };
    let projected: HashSet<Vec<String>> = target_answers
        .iter()
        .map(|t| vec![t[i].clone(), t[j].clone()])
        .collect();
    Ok(projected.len() == target_answers.len() && projected == star_answers)
}
