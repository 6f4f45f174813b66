use num_bigint::BigUint;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::engine::bound::{BoundQuery, Key, Table};
use crate::engine::database::Sym;
use crate::error::{Error, Result};
use crate::structure::{build_join_tree, JoinTree};

/// Count arithmetic. Machine integers report overflow so the count can be
/// redone in a wider type.
trait Weight: Clone + Default {
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&mut self, other: &Self) -> Option<()>;
    fn mul(&mut self, other: &Self) -> Option<()>;
}

macro_rules! machine_weight {
    ($($t:ty),*) => {$(
        impl Weight for $t {
            fn one() -> Self {
                1
            }

            fn is_zero(&self) -> bool {
                *self == 0
            }

            fn add(&mut self, other: &Self) -> Option<()> {
                *self = self.checked_add(*other)?;
                Some(())
            }

            fn mul(&mut self, other: &Self) -> Option<()> {
                *self = self.checked_mul(*other)?;
                Some(())
            }
        }
    )*};
}

machine_weight!(u64, u128);

impl Weight for BigUint {
    fn one() -> Self {
        One::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add(&mut self, other: &Self) -> Option<()> {
        *self += other;
        Some(())
    }

    fn mul(&mut self, other: &Self) -> Option<()> {
        *self *= other;
        Some(())
    }
}

/// Number of satisfying assignments of an acyclic query without quantified
/// variables, by dynamic programming over its join tree.
///
/// Each row's weight is the product, over child nodes, of the summed weights
/// of the child rows that agree with it on the shared variables; the count is
/// the sum of the root weights. Rows without partners get weight zero, so no
/// prior semijoin reduction is needed.
pub fn count_full_acyclic(bq: &BoundQuery) -> Result<BigUint> {
    let quantified = bq.quantified();
    if !quantified.is_empty() {
        return Err(Error::HasQuantifiedVars(bq.var_names(&quantified)));
    }
    if bq.tables.iter().any(|t| t.vars.is_empty() && t.rel.is_empty()) {
        return Ok(BigUint::zero());
    }
    let full = BoundQuery {
        tables: bq.tables.iter().filter(|t| !t.vars.is_empty()).cloned().collect(),
        ..bq.clone()
    };
    if full.tables.is_empty() {
        return Ok(<BigUint as One>::one());
    }
    let h = full.hypergraph();
    let tree = build_join_tree(&h)?;
    // tables over the same variables are intersected into one node
    let nodes: Vec<Table> = h
        .edges
        .iter()
        .map(|e| {
            let (first, rest) = e.atoms.split_first().expect("edge without atoms");
            rest.iter()
                .fold(full.tables[*first].clone(), |acc, &a| acc.semijoin(&full.tables[a]))
        })
        .collect();
    // narrow weights keep the per-row arrays small; widen only on overflow
    if let Some(c) = weighted_count::<u64>(&nodes, &tree) {
        return Ok(c.into());
    }
    if let Some(c) = weighted_count::<u128>(&nodes, &tree) {
        return Ok(c.into());
    }
    Ok(weighted_count::<BigUint>(&nodes, &tree).expect("BigUint does not overflow"))
}

/// Summed child weights per join key. Single-column keys index a vector by
/// symbol id.
enum Message<W> {
    Dense(Vec<W>),
    Hashed(FxHashMap<Key, W>),
}

impl<W: Weight> Message<W> {
    fn collect(child: &Table, positions: &[usize], weights: &[W]) -> Option<Self> {
        let live = || child.rel.rows().zip(weights).filter(|(_, w)| !w.is_zero());
        if let [p] = *positions {
            let len = live().map(|(r, _)| r[p].0 as usize + 1).max().unwrap_or(0);
            let mut sums = vec![W::default(); len];
            for (row, w) in live() {
                sums[row[p].0 as usize].add(w)?;
            }
            Some(Message::Dense(sums))
        } else {
            let mut sums: FxHashMap<Key, W> = FxHashMap::default();
            for (row, w) in live() {
                sums.entry(Table::key(row, positions)).or_default().add(w)?;
            }
            Some(Message::Hashed(sums))
        }
    }

    /// The summed weight for `row`'s key, `None` if no child row matches.
    fn get(&self, row: &[Sym], positions: &[usize]) -> Option<&W> {
        match self {
            Message::Dense(sums) => sums.get(row[positions[0]].0 as usize).filter(|w| !w.is_zero()),
            Message::Hashed(sums) => sums.get(&Table::key(row, positions)),
        }
    }
}

/// `None` if `W` overflows.
fn weighted_count<W: Weight>(nodes: &[Table], tree: &JoinTree) -> Option<W> {
    let children = tree.children();
    let mut weights: Vec<Option<Vec<W>>> = vec![None; nodes.len()];
    for n in tree.postorder() {
        let node = &nodes[n];
        let mut w = vec![W::one(); node.rel.len()];
        for &c in &children[n] {
            let child = &nodes[c];
            let shared = child.shared_vars(node);
            let (cpos, npos) = (child.positions(&shared), node.positions(&shared));
            let child_weights = weights[c].take().expect("child visited first");
            let message = Message::collect(child, &cpos, &child_weights)?;
            for (wi, row) in w.iter_mut().zip(node.rel.rows()) {
                match message.get(row, &npos) {
                    Some(m) if !wi.is_zero() => wi.mul(m)?,
                    _ => *wi = W::default(),
                }
            }
        }
        weights[n] = Some(w);
    }
    let mut total = W::default();
    for w in weights[tree.root()?].as_ref()? {
        total.add(w)?;
    }
    Some(total)
}
