use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VarSet};
use crate::query::{Query, Variable};
use crate::structure::gyo::gyo_is_acyclic;

/// A chordless path `x1, z1, ..., zl, x2` with free endpoints that share no
/// edge and quantified internal vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreePath {
    pub endpoints: (Variable, Variable),
    pub internal: Vec<Variable>,
}

impl FreePath {
    /// Endpoints and internal vertices in path order.
    pub fn vertices(&self) -> Vec<Variable> {
        let mut out = Vec::with_capacity(self.internal.len() + 2);
        out.push(self.endpoints.0.clone());
        out.extend(self.internal.iter().cloned());
        out.push(self.endpoints.1.clone());
        out
    }
}

struct Search<'a> {
    adj: &'a BTreeMap<Variable, VarSet>,
    free: &'a VarSet,
}

impl Search<'_> {
    fn adjacent(&self, u: &Variable, v: &Variable) -> bool {
        self.adj[u].contains(v)
    }

    /// `v` is adjacent to the last vertex of `path` and to no earlier one.
    fn extends_chordless(&self, path: &[Variable], v: &Variable) -> bool {
        let (last, rest) = path.split_last().unwrap();
        self.adjacent(last, v) && !path.contains(v) && rest.iter().all(|u| !self.adjacent(u, v))
    }

    /// Depth-first search for a path with exactly `remaining` more internal
    /// vertices, visiting neighbors in sorted order so the first hit is the
    /// lexicographically smallest.
    fn extend(&self, path: &mut Vec<Variable>, remaining: usize) -> Option<Vec<Variable>> {
        let last = path.last().unwrap().clone();
        if remaining == 0 {
            for x2 in self.adj[&last].iter().filter(|v| self.free.contains(*v)) {
                if self.extends_chordless(path, x2) {
                    let mut found = path.clone();
                    found.push(x2.clone());
                    return Some(found);
                }
            }
            return None;
        }
        for z in self.adj[&last].iter().filter(|v| !self.free.contains(*v)) {
            if self.extends_chordless(path, z) {
                path.push(z.clone());
                if let Some(found) = self.extend(path, remaining - 1) {
                    return Some(found);
                }
                path.pop();
            }
        }
        None
    }
}

/// Shortest free path, ties broken by lexicographically smallest vertex
/// sequence. Exponential in the query size.
pub fn find_free_path(q: &Query) -> Result<Option<FreePath>> {
    let h = Hypergraph::of_query(q);
    if !gyo_is_acyclic(&h) {
        return Err(Error::NotAcyclic);
    }
    let adj = h.cooccurrence();
    let free = q.free_vars();
    let quantified = q.quantified_vars().len();
    let search = Search { adj: &adj, free: &free };
    for len in 1..=quantified {
        for x1 in &free {
            let mut path = vec![x1.clone()];
            if let Some(found) = search.extend(&mut path, len) {
                let (x2, rest) = found.split_last().unwrap();
                return Ok(Some(FreePath {
                    endpoints: (found[0].clone(), x2.clone()),
                    internal: rest[1..].to_vec(),
                }));
            }
        }
    }
    Ok(None)
}
