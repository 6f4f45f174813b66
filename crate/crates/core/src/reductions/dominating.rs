//! Dominating set to star-query counting.
//!
//! A `k'`-selection of vertices is split into `k` blocks of `k'/k` vertices,
//! each block packed into one symbol. The star relation pairs a packed block
//! `u` with a vertex `v` whenever no vertex of `u` equals or neighbours `v`.
//! An answer of `q*_k` is then a selection that leaves some vertex
//! undominated, so the number of dominating selections is `n^k'` minus the
//! answer count.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{Pow, Zero};

use crate::engine::{Database, Relation};
use crate::error::{Error, Result};
use crate::query::Query;
use crate::reductions::graph::Graph;

pub const PACK_SEPARATOR: char = '|';

#[derive(Clone, Debug)]
pub struct StarInstance {
    pub k: usize,
    pub k_prime: usize,
    /// Number of graph vertices.
    pub n: usize,
    pub query: Query,
    /// Holds the single binary relation `R`.
    pub database: Database,
    /// Packed symbol to the vertices it stands for, for every block.
    pub decoder: BTreeMap<String, Vec<String>>,
}

impl StarInstance {
    pub fn relation(&self) -> &Relation {
        self.database.relation("R").expect("star instance has R")
    }

    /// `n^(k'/k + 1)`.
    pub fn size_bound(&self) -> BigUint {
        BigUint::from(self.n).pow(self.k_prime / self.k + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DsDecision {
    pub has_ds: bool,
    /// Ordered selections of `k'` vertices (with repetition) that dominate.
    pub dominating_selections: BigUint,
}

/// Every sequence of `len` vertex indices, in lexicographic index order.
fn sequences(alphabet: &[usize], len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                alphabet.iter().map(move |&a| {
                    let mut s = prefix.clone();
                    s.push(a);
                    s
                })
            })
            .collect();
    }
    out
}

fn pack(g: &Graph, seq: &[usize]) -> String {
    seq.iter()
        .map(|&v| g.name(v))
        .collect::<Vec<_>>()
        .join(&PACK_SEPARATOR.to_string())
}

/// Builds the star-query instance for `k'`-dominating set on `g`.
pub fn ds_to_star_instance(g: &Graph, k: usize, k_prime: usize) -> Result<StarInstance> {
    if k < 2 {
        return Err(Error::StarArityTooSmall(k));
    }
    if k_prime < k || !k_prime.is_multiple_of(k) {
        return Err(Error::NotDivisible { k, k_prime });
    }
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let block = k_prime / k;
    let all: Vec<usize> = (0..n).collect();
    let decoder = sequences(&all, block)
        .into_iter()
        .map(|s| (pack(g, &s), s.iter().map(|&v| g.name(v).to_owned()).collect()))
        .collect();

    let mut database = Database::new();
    let mut data = Vec::new();
    for v in 0..n {
        let allowed: Vec<usize> = (0..n).filter(|&u| u != v && !g.adjacent(u, v)).collect();
        let vs = database.symbols.intern(g.name(v));
        for seq in sequences(&allowed, block) {
            data.push(database.symbols.intern(&pack(g, &seq)));
            data.push(vs);
        }
    }
    database.set_relation("R", Relation::from_flat(2, data));
    Ok(StarInstance {
        k,
        k_prime,
        n,
        query: Query::star(k),
        database,
        decoder,
    })
}

/// Turns the answer count of the star query into the dominating-set answer.
pub fn star_count_to_ds_decision(inst: &StarInstance, answer_count: &BigUint) -> Result<DsDecision> {
    let total = BigUint::from(inst.n).pow(inst.k_prime);
    if *answer_count > total {
        return Err(Error::CountOutOfRange {
            count: answer_count.to_string(),
            total: total.to_string(),
        });
    }
    let dominating_selections = total - answer_count;
    Ok(DsDecision {
        has_ds: !dominating_selections.is_zero(),
        dominating_selections,
    })
}

/// Enumerates all `n^k'` ordered selections and counts the dominating ones.
pub fn brute_force_dominating(g: &Graph, k_prime: usize) -> DsDecision {
    let n = g.vertex_count();
    let mut count = BigUint::zero();
    let mut selection = vec![0usize; k_prime];
    if n > 0 {
        loop {
            let dominated = (0..n).all(|v| selection.iter().any(|&s| s == v || g.adjacent(s, v)));
            if dominated {
                count += 1u32;
            }
            // next selection in mixed-radix order
            let mut i = 0;
            while i < k_prime && selection[i] == n - 1 {
                selection[i] = 0;
                i += 1;
            }
            if i == k_prime {
                break;
            }
            selection[i] += 1;
        }
    }
    DsDecision {
        has_ds: !count.is_zero(),
        dominating_selections: count,
    }
}
