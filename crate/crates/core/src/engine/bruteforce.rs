//! Exhaustive answer enumeration, used as the reference oracle.
//!
//! Variables are assigned one at a time over the active domain; an atom is
//! tested as soon as all of its variables are assigned, and a failing test
//! prunes the branch.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::engine::bound::BoundQuery;
use crate::engine::database::{Database, Relation, Sym};
use crate::error::Result;
use crate::query::Query;

struct Constraint<'a> {
    /// Variable slot per column (may repeat).
    args: Vec<usize>,
    rel: &'a Relation,
}

struct Enumerator<'a> {
    domain: Vec<Sym>,
    /// Constraints to test once slot `i` is assigned.
    checks: Vec<Vec<Constraint<'a>>>,
    head: Vec<usize>,
    assignment: Vec<Sym>,
    answers: HashSet<Vec<Sym>>,
}

impl Enumerator<'_> {
    fn run(&mut self, slot: usize) {
        if slot == self.assignment.len() {
            let tuple = self.head.iter().map(|&s| self.assignment[s]).collect();
            self.answers.insert(tuple);
            return;
        }
        let mut tuple = Vec::new();
        for i in 0..self.domain.len() {
            self.assignment[slot] = self.domain[i];
            let ok = self.checks[slot].iter().all(|c| {
                tuple.clear();
                tuple.extend(c.args.iter().map(|&s| self.assignment[s]));
                c.rel.contains(&tuple)
            });
            if ok {
                self.run(slot + 1);
            }
        }
    }
}

/// Distinct head tuples over all satisfying assignments. `atoms` holds the
/// variable ids of each atom's columns; `head` may repeat ids.
fn enumerate(atoms: Vec<(Vec<usize>, &Relation)>, head: &[usize]) -> HashSet<Vec<Sym>> {
    let domain: BTreeSet<Sym> = atoms.iter().flat_map(|(_, r)| r.symbols()).collect();
    // slots in order of first appearance
    let mut slot_of: HashMap<usize, usize> = HashMap::new();
    for (args, _) in &atoms {
        for &v in args {
            let next = slot_of.len();
            slot_of.entry(v).or_insert(next);
        }
    }
    let mut checks: Vec<Vec<Constraint>> = (0..slot_of.len()).map(|_| Vec::new()).collect();
    let mut nullary_ok = true;
    for (args, rel) in atoms {
        let args: Vec<usize> = args.iter().map(|v| slot_of[v]).collect();
        match args.iter().max() {
            Some(&last) => checks[last].push(Constraint { args, rel }),
            None => nullary_ok &= rel.contains(&[]),
        }
    }
    let mut e = Enumerator {
        domain: domain.into_iter().collect(),
        checks,
        head: head.iter().map(|v| slot_of[v]).collect(),
        assignment: vec![Sym(0); slot_of.len()],
        answers: HashSet::new(),
    };
    if nullary_ok {
        e.run(0);
    }
    e.answers
}

/// Answer tuples of `q` on `db`, in head order.
pub fn answers_bruteforce(q: &Query, db: &Database) -> Result<HashSet<Vec<Sym>>> {
    let vars: Vec<_> = q.variables().into_iter().collect();
    let id = |v| vars.binary_search(v).unwrap();
    let mut atoms = Vec::with_capacity(q.body.len());
    for atom in &q.body {
        let rel = super::bound::lookup(atom, db)?;
        atoms.push((atom.args.iter().map(id).collect(), rel));
    }
    let head: Vec<usize> = q.head.iter().map(id).collect();
    Ok(enumerate(atoms, &head))
}

/// Answer tuples of a bound query over its free variables (sorted by id).
pub fn answers_bound(bq: &BoundQuery) -> HashSet<Vec<Sym>> {
    let atoms = bq.tables.iter().map(|t| (t.vars.clone(), &*t.rel)).collect();
    enumerate(atoms, &bq.free)
}
