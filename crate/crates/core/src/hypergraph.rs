use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::query::{Query, Variable};

pub type VarSet = BTreeSet<Variable>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub vars: VarSet,
    /// Indices of the body atoms inducing this edge; empty for added edges.
    pub atoms: Vec<usize>,
}

/// Hypergraph with one edge per distinct atom variable set, edges kept in
/// lexicographic order of their (sorted) vertex sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    pub vertices: VarSet,
    pub edges: Vec<Edge>,
}

impl Hypergraph {
    /// Builds a hypergraph from tagged vertex sets, merging equal sets.
    /// Empty sets are dropped.
    pub fn from_edges(edges: impl IntoIterator<Item = (VarSet, Vec<usize>)>) -> Self {
        let mut merged: BTreeMap<VarSet, Vec<usize>> = BTreeMap::new();
        for (vars, atoms) in edges {
            if vars.is_empty() {
                continue;
            }
            merged.entry(vars).or_default().extend(atoms);
        }
        let vertices = merged.keys().flatten().cloned().collect();
        let edges = merged
            .into_iter()
            .map(|(vars, mut atoms)| {
                atoms.sort_unstable();
                Edge { vars, atoms }
            })
            .collect();
        Hypergraph { vertices, edges }
    }

    pub fn of_query(q: &Query) -> Self {
        Self::from_edges(q.body.iter().enumerate().map(|(i, a)| (a.var_set(), vec![i])))
    }

    /// This hypergraph with `extra` added as an untagged edge.
    pub fn with_extra_edge(&self, extra: VarSet) -> Self {
        Self::from_edges(
            self.edges
                .iter()
                .map(|e| (e.vars.clone(), e.atoms.clone()))
                .chain(std::iter::once((extra, Vec::new()))),
        )
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Co-occurrence (primal) graph: two vertices are adjacent iff they share
    /// an edge.
    pub fn cooccurrence(&self) -> BTreeMap<Variable, VarSet> {
        let mut adj: BTreeMap<Variable, VarSet> = self.vertices.iter().map(|v| (v.clone(), VarSet::new())).collect();
        for e in &self.edges {
            for u in &e.vars {
                for v in &e.vars {
                    if u != v {
                        adj.get_mut(u).unwrap().insert(v.clone());
                    }
                }
            }
        }
        adj
    }
}

pub fn hypergraph_of(q: &Query) -> Hypergraph {
    Hypergraph::of_query(q)
}

/// Formats a vertex set as `{a,b,c}`.
pub(crate) struct SetLabel<'a>(pub &'a VarSet);

impl fmt::Display for SetLabel<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}
