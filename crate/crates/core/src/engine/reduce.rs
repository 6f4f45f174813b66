//! Full semijoin reduction over a join tree.

use std::sync::Arc;

use crate::engine::bound::{BoundQuery, Table};
use crate::engine::database::{Database, Relation};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::query::Query;
use crate::structure::{build_join_tree, gyo_is_acyclic};

/// Makes the tables of an acyclic bound query globally consistent: every
/// remaining row extends to a satisfying assignment of all variables.
///
/// Tables with the same variable set are intersected first; then one
/// leaves-to-root and one root-to-leaves semijoin pass run over the join
/// tree.
pub fn full_reduce(bq: &mut BoundQuery) -> Result<()> {
    let h = bq.hypergraph();
    let tree = build_join_tree(&h)?;

    let unsatisfiable = bq.tables.iter().any(|t| t.rel.is_empty());
    if unsatisfiable {
        for t in &mut bq.tables {
            t.rel = Arc::new(Relation::empty(t.rel.arity()));
        }
        return Ok(());
    }

    let mut nodes: Vec<Table> = h
        .edges
        .iter()
        .map(|e| {
            let (first, rest) = e.atoms.split_first().expect("edge without atoms");
            rest.iter()
                .fold(bq.tables[*first].clone(), |acc, &a| acc.semijoin(&bq.tables[a]))
        })
        .collect();

    let order = tree.postorder();
    for &n in &order {
        if let Some(p) = tree.parent[n] {
            nodes[p] = nodes[p].semijoin(&nodes[n]);
        }
    }
    for &n in order.iter().rev() {
        if let Some(p) = tree.parent[n] {
            nodes[n] = nodes[n].semijoin(&nodes[p]);
        }
    }

    let emptied = nodes.iter().any(|t| t.rel.is_empty());
    for (e, node) in h.edges.iter().zip(&nodes) {
        for &a in &e.atoms {
            // atoms over the same variables may list them in another order
            if bq.tables[a].vars == node.vars {
                bq.tables[a].rel = node.rel.clone();
            } else {
                bq.tables[a] = bq.tables[a].semijoin(node);
            }
        }
    }
    // nullary tables are outside the join tree
    if emptied {
        for t in bq.tables.iter_mut().filter(|t| t.vars.is_empty()) {
            t.rel = Arc::new(Relation::empty(0));
        }
    }
    Ok(())
}

/// Binds `q` to `db` and fully reduces it. The result holds one table per
/// body atom, in body order.
pub fn semijoin_reduce(q: &Query, db: &Database) -> Result<BoundQuery> {
    if !gyo_is_acyclic(&Hypergraph::of_query(q)) {
        return Err(Error::NotAcyclic);
    }
    let mut bq = BoundQuery::bind(q, db)?;
    full_reduce(&mut bq)?;
    Ok(bq)
}
