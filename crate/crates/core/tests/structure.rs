mod common;

use common::{atom_sets, free_connex_by_definition, gyo_acyclic, has_free_path_by_enumeration, star_size_by_subsets};
use cqcount::corpus::{self, RandomShape};
use cqcount::engine::{eliminate_quantified, BoundQuery};
use cqcount::structure::{build_join_tree, find_free_path, is_free_connex, quantified_star_size};
use cqcount::{analyze, parse_query, Database, Hypergraph, Query};

fn eliminates(q: &Query) -> bool {
    // elimination is structural; an empty database binds every atom
    let mut db = Database::new();
    for atom in &q.body {
        db.insert_rows::<[&str; 0], &str>(&atom.predicate, atom.arity(), [])
            .unwrap();
    }
    eliminate_quantified(BoundQuery::bind(q, &db).unwrap()).is_ok()
}

#[test]
fn dichotomy_holds_on_every_small_acyclic_query() {
    let queries: Vec<Query> = corpus::exhaustive_queries(4, 3, 3)
        .into_iter()
        .filter(|q| gyo_acyclic(atom_sets(q)))
        .collect();
    assert!(queries.len() > 7000);
    for q in &queries {
        let fc = is_free_connex(q).unwrap();
        assert_eq!(fc, free_connex_by_definition(q), "{q}");
        assert_eq!(fc, !has_free_path_by_enumeration(q), "{q}");
        assert_eq!(fc, find_free_path(q).unwrap().is_none(), "{q}");
        assert_eq!(fc, quantified_star_size(q) == 1, "{q}");
        assert_eq!(fc, eliminates(q), "{q}");
    }
}

#[test]
fn star_size_matches_subset_enumeration() {
    for q in corpus::exhaustive_queries(4, 3, 3) {
        if !gyo_acyclic(atom_sets(&q)) {
            continue;
        }
        assert_eq!(quantified_star_size(&q), star_size_by_subsets(&q), "{q}");
    }
    let mut rng = corpus::rng(9);
    let shape = RandomShape {
        max_vars: 6,
        max_atoms: 5,
        ..RandomShape::default()
    };
    for _ in 0..300 {
        let q = corpus::random_query(&mut rng, shape);
        if gyo_acyclic(atom_sets(&q)) {
            assert_eq!(quantified_star_size(&q), star_size_by_subsets(&q), "{q}");
        }
    }
}

#[test]
fn acyclicity_agrees_with_textbook_gyo() {
    let mut rng = corpus::rng(4);
    let shape = RandomShape {
        max_vars: 6,
        max_atoms: 5,
        ..RandomShape::default()
    };
    let mut cyclic = 0;
    for _ in 0..2000 {
        let q = corpus::random_query(&mut rng, shape);
        let expected = gyo_acyclic(atom_sets(&q));
        cyclic += usize::from(!expected);
        assert_eq!(analyze(&q).acyclic, expected, "{q}");
        if let Ok(tree) = build_join_tree(&Hypergraph::of_query(&q)) {
            assert!(tree.satisfies_connectivity(), "{q}");
        }
    }
    assert!(cyclic > 0);
}

#[test]
fn star_queries_have_star_size_k() {
    for k in 1..=6 {
        let q = Query::star(k);
        assert_eq!(quantified_star_size(&q), k);
        assert_eq!(is_free_connex(&q).unwrap(), k == 1);
    }
}

#[test]
fn free_paths_are_chordless_and_well_formed() {
    let q = parse_query("Q(x, y, w) :- R(x, a), S(a, b, w), T(b, y).").unwrap();
    let path = find_free_path(&q).unwrap().expect("not free-connex");
    let vs = path.vertices();
    assert!(q.head.contains(&vs[0]) && q.head.contains(vs.last().unwrap()));
    assert!(path.internal.iter().all(|z| !q.head.contains(z)));
    let edges = atom_sets(&q);
    let adj = |a: &str, b: &str| edges.iter().any(|e| e.contains(a) && e.contains(b));
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            assert_eq!(adj(vs[i].name(), vs[j].name()), j == i + 1, "{vs:?}");
        }
    }
}

#[test]
fn cyclic_queries_are_reported_not_rejected() {
    let report = analyze(&parse_query("Q(x) :- R(x, y), S(y, z), T(z, x).").unwrap());
    assert!(!report.acyclic);
    assert_eq!(report.free_connex, None);
    assert_eq!(report.star_size, None);
}
