//! Deliberately naive evaluators and structural checks over strings,
//! sharing no code with the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use cqcount::{Database, Query};

/// Answers by backtracking over the active domain, variable by variable,
/// checking each atom once all its variables are assigned.
pub fn naive_answers(q: &Query, db: &Database) -> BTreeSet<Vec<String>> {
    let mut tables: BTreeMap<&str, HashSet<Vec<String>>> = BTreeMap::new();
    let mut domain = BTreeSet::new();
    for atom in &q.body {
        let rows = db.string_rows(&atom.predicate).unwrap_or_default();
        domain.extend(rows.iter().flatten().cloned());
        tables.insert(&atom.predicate, rows.into_iter().collect());
    }
    let domain: Vec<String> = domain.into_iter().collect();
    let vars: Vec<String> = q.variables().iter().map(|v| v.to_string()).collect();
    let index = |name: &str| vars.iter().position(|w| w == name).unwrap();
    // atoms to check once variable i is assigned
    let mut ready: Vec<Vec<(&str, Vec<usize>)>> = vec![Vec::new(); vars.len()];
    let mut out = BTreeSet::new();
    for atom in &q.body {
        let cols: Vec<usize> = atom.args.iter().map(|v| index(v.name())).collect();
        match cols.iter().max() {
            Some(&last) => ready[last].push((&atom.predicate, cols)),
            None if !tables[atom.predicate.as_str()].contains(&Vec::new()) => return out,
            None => {}
        }
    }
    let head: Vec<usize> = q.head.iter().map(|v| index(v.name())).collect();
    let mut assignment = vec![0usize; vars.len()];
    fn go(
        depth: usize,
        assignment: &mut Vec<usize>,
        domain: &[String],
        ready: &[Vec<(&str, Vec<usize>)>],
        tables: &BTreeMap<&str, HashSet<Vec<String>>>,
        head: &[usize],
        out: &mut BTreeSet<Vec<String>>,
    ) {
        if depth == assignment.len() {
            out.insert(head.iter().map(|&i| domain[assignment[i]].clone()).collect());
            return;
        }
        for value in 0..domain.len() {
            assignment[depth] = value;
            let ok = ready[depth].iter().all(|(name, cols)| {
                let tuple: Vec<String> = cols.iter().map(|&c| domain[assignment[c]].clone()).collect();
                tables[name].contains(&tuple)
            });
            if ok {
                go(depth + 1, assignment, domain, ready, tables, head, out);
            }
        }
    }
    go(0, &mut assignment, &domain, &ready, &tables, &head, &mut out);
    out
}

pub fn naive_count(q: &Query, db: &Database) -> u64 {
    naive_answers(q, db).len() as u64
}

/// Textbook GYO on string edges: drop vertices in one edge, drop edges
/// contained in another, until nothing changes.
pub fn gyo_acyclic(mut edges: Vec<BTreeSet<String>>) -> bool {
    loop {
        let mut changed = false;
        let all: Vec<String> = edges.iter().flatten().cloned().collect();
        for v in &all {
            if edges.iter().filter(|e| e.contains(v)).count() == 1 {
                for e in &mut edges {
                    changed |= e.remove(v);
                }
            }
        }
        edges.retain(|e| !e.is_empty());
        if let Some(i) = (0..edges.len()).find(|&i| (0..edges.len()).any(|j| i != j && edges[i].is_subset(&edges[j]))) {
            edges.remove(i);
            changed = true;
        }
        if edges.is_empty() {
            return true;
        }
        if !changed {
            return false;
        }
    }
}

pub fn atom_sets(q: &Query) -> Vec<BTreeSet<String>> {
    q.body
        .iter()
        .map(|a| a.args.iter().map(|v| v.to_string()).collect())
        .collect()
}

pub fn free_connex_by_definition(q: &Query) -> bool {
    let mut edges = atom_sets(q);
    edges.push(q.head.iter().map(|v| v.to_string()).collect());
    gyo_acyclic(edges)
}

fn adjacent(edges: &[BTreeSet<String>], a: &str, b: &str) -> bool {
    edges.iter().any(|e| e.contains(a) && e.contains(b))
}

/// Whether some chordless path joins two non-adjacent free variables
/// through quantified ones, by enumerating every simple path.
pub fn has_free_path_by_enumeration(q: &Query) -> bool {
    let edges = atom_sets(q);
    let free: BTreeSet<String> = q.head.iter().map(|v| v.to_string()).collect();
    let quantified: Vec<String> = edges
        .iter()
        .flatten()
        .filter(|v| !free.contains(*v))
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    fn extend(
        path: &mut Vec<String>,
        edges: &[BTreeSet<String>],
        quantified: &[String],
        free: &BTreeSet<String>,
    ) -> bool {
        let last = path.last().unwrap().clone();
        for x2 in free {
            if path.len() >= 2
                && adjacent(edges, &last, x2)
                && !adjacent(edges, &path[0], x2)
                && *x2 != path[0]
                && path[1..path.len() - 1].iter().all(|z| !adjacent(edges, z, x2))
            {
                return true;
            }
        }
        for z in quantified {
            if path.contains(z) || !adjacent(edges, &last, z) {
                continue;
            }
            if path[..path.len() - 1].iter().any(|p| adjacent(edges, p, z)) {
                continue;
            }
            path.push(z.clone());
            if extend(path, edges, quantified, free) {
                return true;
            }
            path.pop();
        }
        false
    }
    free.iter()
        .any(|x1| extend(&mut vec![x1.clone()], &edges, &quantified, &free))
}

/// Star size by trying every subset of free variables as the independent
/// set of some quantified component.
pub fn star_size_by_subsets(q: &Query) -> usize {
    let edges = atom_sets(q);
    let free: Vec<String> = q
        .head
        .iter()
        .map(|v| v.to_string())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let quantified: BTreeSet<String> = edges.iter().flatten().filter(|v| !free.contains(v)).cloned().collect();
    let mut best = 1;
    for start in &quantified {
        let mut comp = BTreeSet::from([start.clone()]);
        loop {
            let grown: BTreeSet<String> = quantified
                .iter()
                .filter(|z| comp.iter().any(|c| adjacent(&edges, c, z)))
                .cloned()
                .collect();
            let next: BTreeSet<String> = comp.union(&grown).cloned().collect();
            if next == comp {
                break;
            }
            comp = next;
        }
        for mask in 0u32..1 << free.len() {
            let chosen: Vec<&String> = (0..free.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| &free[i])
                .collect();
            let attached = chosen.iter().all(|x| comp.iter().any(|z| adjacent(&edges, z, x)));
            let independent = chosen
                .iter()
                .enumerate()
                .all(|(i, a)| chosen[i + 1..].iter().all(|b| !adjacent(&edges, a, b)));
            if attached && independent {
                best = best.max(chosen.len());
            }
        }
    }
    best
}
