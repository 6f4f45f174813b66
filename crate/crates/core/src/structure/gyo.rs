//! GYO reduction and join tree construction.

use std::collections::BTreeMap;

use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, SetLabel, VarSet};
use crate::query::Variable;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GyoStep {
    /// Edge `edge` (index into the hypergraph's edges) is contained in `into`.
    Absorb { edge: usize, into: usize },
    /// `vertex` occurs only in `edge`.
    RemoveVertex { vertex: Variable, edge: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GyoTrace {
    pub acyclic: bool,
    pub steps: Vec<GyoStep>,
}

struct GyoState {
    current: Vec<Option<VarSet>>,
}

impl GyoState {
    fn alive(&self) -> usize {
        self.current.iter().flatten().count()
    }

    /// Applicable steps, absorptions first, each group in lexicographic order.
    fn applicable(&self) -> Vec<GyoStep> {
        let mut steps = Vec::new();
        for (i, ei) in self.current.iter().enumerate() {
            let Some(ei) = ei else { continue };
            for (j, ej) in self.current.iter().enumerate() {
                if let Some(ej) = ej {
                    if i != j && ei.is_subset(ej) {
                        steps.push(GyoStep::Absorb { edge: i, into: j });
                    }
                }
            }
        }
        let mut occurrences: BTreeMap<&Variable, Vec<usize>> = BTreeMap::new();
        for (i, e) in self.current.iter().enumerate() {
            for v in e.iter().flatten() {
                occurrences.entry(v).or_default().push(i);
            }
        }
        for (v, edges) in occurrences {
            if let [edge] = edges[..] {
                steps.push(GyoStep::RemoveVertex {
                    vertex: v.clone(),
                    edge,
                });
            }
        }
        steps
    }

    fn apply(&mut self, step: &GyoStep) {
        match step {
            GyoStep::Absorb { edge, .. } => self.current[*edge] = None,
            GyoStep::RemoveVertex { vertex, edge } => {
                self.current[*edge].as_mut().unwrap().remove(vertex);
            }
        }
    }
}

/// Runs GYO, letting `choose` pick which applicable step to take next.
///
/// Reduction stops once at most one edge is left (acyclic) or no step applies
/// (cyclic). Every choice policy yields the same verdict.
pub fn gyo_reduce_by(h: &Hypergraph, mut choose: impl FnMut(&[GyoStep]) -> usize) -> GyoTrace {
    let mut state = GyoState {
        current: h.edges.iter().map(|e| Some(e.vars.clone())).collect(),
    };
    let mut steps = Vec::new();
    while state.alive() > 1 {
        let candidates = state.applicable();
        if candidates.is_empty() {
            return GyoTrace { acyclic: false, steps };
        }
        let step = candidates[choose(&candidates)].clone();
        state.apply(&step);
        steps.push(step);
    }
    GyoTrace { acyclic: true, steps }
}

/// Deterministic GYO: absorb the lexicographically smallest contained edge
/// into its smallest witness; otherwise delete the smallest vertex that occurs
/// in a single edge.
pub fn gyo_trace(h: &Hypergraph) -> GyoTrace {
    gyo_reduce_by(h, |_| 0)
}

pub fn gyo_is_acyclic(h: &Hypergraph) -> bool {
    gyo_trace(h).acyclic
}

/// A rooted tree whose nodes are the edges of a hypergraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinTree {
    pub nodes: Vec<VarSet>,
    pub parent: Vec<Option<usize>>,
}

impl JoinTree {
    pub fn root(&self) -> Option<usize> {
        self.parent.iter().position(Option::is_none)
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut children = vec![Vec::new(); self.nodes.len()];
        for (i, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                children[*p].push(i);
            }
        }
        children
    }

    /// Nodes ordered so that every child precedes its parent.
    pub fn postorder(&self) -> Vec<usize> {
        let children = self.children();
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack: Vec<(usize, bool)> = self.root().map(|r| (r, false)).into_iter().collect();
        while let Some((n, expanded)) = stack.pop() {
            if expanded {
                order.push(n);
            } else {
                stack.push((n, true));
                stack.extend(children[n].iter().rev().map(|&c| (c, false)));
            }
        }
        order
    }

    /// Checks that the parent map is a single tree and that, for every
    /// vertex, the nodes containing it induce a connected subtree.
    pub fn satisfies_connectivity(&self) -> bool {
        let n = self.nodes.len();
        if n == 0 {
            return true;
        }
        if self.parent.iter().filter(|p| p.is_none()).count() != 1 || self.postorder().len() != n {
            return false;
        }
        // A set of nodes S is connected iff exactly one member of S has its
        // parent outside S.
        let vertices: VarSet = self.nodes.iter().flatten().cloned().collect();
        vertices.iter().all(|v| {
            let tops = (0..n)
                .filter(|&i| self.nodes[i].contains(v))
                .filter(|&i| match self.parent[i] {
                    Some(p) => !self.nodes[p].contains(v),
                    None => true,
                })
                .count();
            tops == 1
        })
    }
}

impl Serialize for JoinTree {
    /// Parent map from node label to parent label (`null` at the root).
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: BTreeMap<String, Option<String>> = self
            .nodes
            .iter()
            .zip(&self.parent)
            .map(|(node, p)| {
                (
                    SetLabel(node).to_string(),
                    p.map(|p| SetLabel(&self.nodes[p]).to_string()),
                )
            })
            .collect();
        let mut map = serializer.serialize_map(Some(entries.len()))?;
        for (k, v) in &entries {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// Replays the GYO trace, attaching each absorbed edge to the edge that
/// absorbed it.
pub fn build_join_tree(h: &Hypergraph) -> Result<JoinTree> {
    let trace = gyo_trace(h);
    if !trace.acyclic {
        return Err(Error::NotAcyclic);
    }
    let mut parent = vec![None; h.edges.len()];
    for step in &trace.steps {
        if let GyoStep::Absorb { edge, into } = step {
            parent[*edge] = Some(*into);
        }
    }
    Ok(JoinTree {
        nodes: h.edges.iter().map(|e| e.vars.clone()).collect(),
        parent,
    })
}
