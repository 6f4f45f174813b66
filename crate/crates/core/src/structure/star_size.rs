use std::collections::BTreeSet;

use crate::hypergraph::{Hypergraph, VarSet};
use crate::query::{Query, Variable};

/// Quantified star size.
///
/// For every connected component `C` of the co-occurrence graph restricted
/// to the quantified variables, take the free variables adjacent to `C`; two
/// of them conflict when they share an edge. The star size of `C` is the
/// largest conflict-free set, and the query's is the maximum over all
/// components, at least 1.
pub fn quantified_star_size(q: &Query) -> usize {
    let h = Hypergraph::of_query(q);
    let adj = h.cooccurrence();
    let free = q.free_vars();
    let quantified = q.quantified_vars();

    let mut best = 1;
    let mut seen = BTreeSet::new();
    for start in &quantified {
        if !seen.insert(start.clone()) {
            continue;
        }
        let mut component = vec![start.clone()];
        let mut frontier = vec![start.clone()];
        while let Some(v) = frontier.pop() {
            for w in &adj[&v] {
                if quantified.contains(w) && seen.insert(w.clone()) {
                    component.push(w.clone());
                    frontier.push(w.clone());
                }
            }
        }
        let attached: Vec<Variable> = component
            .iter()
            .flat_map(|z| adj[z].iter())
            .filter(|v| free.contains(*v))
            .cloned()
            .collect::<VarSet>()
            .into_iter()
            .collect();
        best = best.max(max_independent_set(&attached, |a, b| adj[a].contains(b)));
    }
    best
}

/// Exact maximum independent set by branching on the first vertex.
fn max_independent_set(vertices: &[Variable], conflict: impl Fn(&Variable, &Variable) -> bool + Copy) -> usize {
    let Some((first, rest)) = vertices.split_first() else {
        return 0;
    };
    let without = max_independent_set(rest, conflict);
    let compatible: Vec<Variable> = rest.iter().filter(|v| !conflict(first, v)).cloned().collect();
    let with = 1 + max_independent_set(&compatible, conflict);
    with.max(without)
}
