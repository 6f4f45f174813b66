//! Queries bound to per-atom relations over distinct, sorted variables.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rustc_hash::FxHashSet;

use crate::engine::database::{Database, Relation, Sym};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VarSet};
use crate::query::{Atom, Query, Variable};

/// Index into [`BoundQuery::vars`].
pub type VarId = usize;

/// A relation whose columns are the distinct variables `vars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub name: String,
    pub vars: Vec<VarId>,
    pub rel: Arc<Relation>,
}

/// A row restricted to some columns. Up to two columns are packed into one
/// integer; all keys compared with each other have the same width.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Key {
    Packed(u64),
    Wide(Box<[Sym]>),
}

/// The keys of a relation's rows. Single-column keys go into a bitmap over
/// symbol ids, which stays cache-resident far longer than a hash set.
enum KeySet {
    Bitmap(Vec<u64>),
    Hashed(FxHashSet<Key>),
}

impl KeySet {
    fn of(rel: &Relation, positions: &[usize]) -> Self {
        match *positions {
            [p] => {
                let words = rel.rows().map(|r| r[p].0 as usize / 64 + 1).max().unwrap_or(0);
                let mut bits = vec![0u64; words];
                for r in rel.rows() {
                    let s = r[p].0 as usize;
                    bits[s / 64] |= 1 << (s % 64);
                }
                KeySet::Bitmap(bits)
            }
            _ => KeySet::Hashed(rel.rows().map(|r| Table::key(r, positions)).collect()),
        }
    }

    fn contains(&self, row: &[Sym], positions: &[usize]) -> bool {
        match self {
            KeySet::Bitmap(bits) => {
                let s = row[positions[0]].0 as usize;
                bits.get(s / 64).is_some_and(|w| w >> (s % 64) & 1 == 1)
            }
            KeySet::Hashed(set) => set.contains(&Table::key(row, positions)),
        }
    }
}

impl Table {
    pub(crate) fn positions(&self, vars: &[VarId]) -> Vec<usize> {
        vars.iter()
            .map(|v| self.vars.iter().position(|w| w == v).expect("variable not in table"))
            .collect()
    }

    pub fn shared_vars(&self, other: &Table) -> Vec<VarId> {
        self.vars.iter().copied().filter(|v| other.vars.contains(v)).collect()
    }

    pub(crate) fn key(row: &[Sym], positions: &[usize]) -> Key {
        match *positions {
            [] => Key::Packed(0),
            [a] => Key::Packed(u64::from(row[a].0)),
            [a, b] => Key::Packed(u64::from(row[a].0) << 32 | u64::from(row[b].0)),
            _ => Key::Wide(positions.iter().map(|&p| row[p]).collect()),
        }
    }

    /// Rows of `self` that agree with some row of `other` on the shared
    /// variables.
    pub fn semijoin(&self, other: &Table) -> Table {
        let shared = self.shared_vars(other);
        let (mine, theirs) = (self.positions(&shared), other.positions(&shared));
        let keys = KeySet::of(&other.rel, &theirs);
        // when nothing is removed the input is shared rather than copied
        let rel = if self.rel.rows().all(|r| keys.contains(r, &mine)) {
            self.rel.clone()
        } else {
            Arc::new(self.rel.filter(|r| keys.contains(r, &mine)))
        };
        Table {
            name: self.name.clone(),
            vars: self.vars.clone(),
            rel,
        }
    }

    /// Drops `var` from the columns, deduplicating rows.
    pub fn project_out(&self, var: VarId) -> Table {
        let keep: Vec<VarId> = self.vars.iter().copied().filter(|&v| v != var).collect();
        let rel = if keep.is_empty() {
            if self.rel.is_empty() {
                Relation::empty(0)
            } else {
                Relation::unit()
            }
        } else {
            let pos = self.positions(&keep);
            let mut data = Vec::with_capacity(self.rel.len() * keep.len());
            for row in self.rel.rows() {
                data.extend(pos.iter().map(|&p| row[p]));
            }
            // dropping the last column keeps lexicographic order
            if self.vars.last() == Some(&var) {
                Relation::from_sorted(keep.len(), data)
            } else {
                Relation::from_flat(keep.len(), data)
            }
        };
        Table {
            name: self.name.clone(),
            vars: keep,
            rel: Arc::new(rel),
        }
    }
}

/// A query whose atoms have been turned into tables: selections for repeated
/// variables are applied and the repeated columns dropped. Other relations are
/// shared with the database, not copied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundQuery {
    /// All variables of the original query, sorted.
    pub vars: Vec<Variable>,
    /// Free variable ids, sorted and distinct.
    pub free: Vec<VarId>,
    pub tables: Vec<Table>,
}

impl BoundQuery {
    pub fn bind(q: &Query, db: &Database) -> Result<Self> {
        let vars: Vec<Variable> = q.variables().into_iter().collect();
        let id: HashMap<&Variable, VarId> = vars.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut free: Vec<VarId> = q.head.iter().map(|v| id[v]).collect();
        free.sort_unstable();
        free.dedup();
        let tables = q
            .body
            .iter()
            .map(|atom| bind_atom(atom, db, &id))
            .collect::<Result<_>>()?;
        Ok(BoundQuery { vars, free, tables })
    }

    pub fn is_free(&self, v: VarId) -> bool {
        self.free.binary_search(&v).is_ok()
    }

    /// Quantified variables still occurring in some table.
    pub fn quantified(&self) -> Vec<VarId> {
        let mut q: Vec<VarId> = self
            .tables
            .iter()
            .flat_map(|t| t.vars.iter().copied())
            .filter(|&v| !self.is_free(v))
            .collect();
        q.sort_unstable();
        q.dedup();
        q
    }

    pub fn var_names(&self, ids: &[VarId]) -> Vec<String> {
        ids.iter().map(|&v| self.vars[v].to_string()).collect()
    }

    pub fn var_set(&self, t: &Table) -> VarSet {
        t.vars.iter().map(|&v| self.vars[v].clone()).collect()
    }

    /// Hypergraph of the non-nullary tables, edges tagged by table index.
    pub fn hypergraph(&self) -> Hypergraph {
        Hypergraph::from_edges(self.tables.iter().enumerate().map(|(i, t)| (self.var_set(t), vec![i])))
    }

    /// Renders the tables as a query plus database. Table names are kept
    /// unless they repeat, in which case the table index is appended.
    pub fn to_query_and_database(&self, db: &Database) -> (Query, Database) {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for t in &self.tables {
            *counts.entry(&t.name).or_default() += 1;
        }
        let mut out = Database::with_symbols(db.symbols.clone());
        let mut body = Vec::new();
        for (i, t) in self.tables.iter().enumerate() {
            let name = if counts[t.name.as_str()] > 1 {
                format!("{}_{i}", t.name)
            } else {
                t.name.clone()
            };
            body.push(Atom::new(name.clone(), t.vars.iter().map(|&v| self.vars[v].clone())));
            out.set_relation(name, t.rel.clone());
        }
        let q = Query {
            name: "Q".into(),
            head: self.free.iter().map(|&v| self.vars[v].clone()).collect(),
            body,
        };
        (q, out)
    }
}

pub(crate) fn lookup<'a>(atom: &Atom, db: &'a Database) -> Result<&'a Relation> {
    let rel = db
        .relation(&atom.predicate)
        .ok_or_else(|| Error::MissingRelation(atom.predicate.clone()))?;
    if rel.arity() != atom.arity() {
        return Err(Error::ArityMismatch {
            name: atom.predicate.clone(),
            expected: atom.arity(),
            found: rel.arity(),
        });
    }
    Ok(rel)
}

fn bind_atom(atom: &Atom, db: &Database, id: &HashMap<&Variable, VarId>) -> Result<Table> {
    let rel = lookup(atom, db)?;
    // first position of each distinct variable
    let mut vars: Vec<VarId> = Vec::with_capacity(atom.arity());
    let mut first: Vec<usize> = Vec::with_capacity(atom.arity());
    for (p, a) in atom.args.iter().enumerate() {
        if !vars.contains(&id[a]) {
            vars.push(id[a]);
            first.push(p);
        }
    }
    let rel = if first.len() == atom.arity() {
        db.shared_relation(&atom.predicate).expect("looked up")
    } else {
        // positions that must agree with an earlier one
        let equal: Vec<(usize, usize)> = atom
            .args
            .iter()
            .enumerate()
            .map(|(p, a)| (first[vars.iter().position(|&v| v == id[a]).unwrap()], p))
            .filter(|(f, p)| f != p)
            .collect();
        let mut data = Vec::new();
        for row in rel.rows() {
            if equal.iter().all(|&(f, p)| row[f] == row[p]) {
                data.extend(first.iter().map(|&p| row[p]));
            }
        }
        Arc::new(Relation::from_flat(vars.len(), data))
    };
    Ok(Table {
        name: atom.predicate.clone(),
        vars,
        rel,
    })
}
