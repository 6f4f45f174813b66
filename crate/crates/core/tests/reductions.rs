mod common;

use std::collections::BTreeSet;

use common::{naive_answers, naive_count};
use cqcount::corpus;
use cqcount::reductions::{
    brute_force_dominating, ds_to_star_instance, embed_star2, star_count_to_ds_decision, verify_embedding,
};
use cqcount::verify::embedding_size_ok;
use cqcount::{count, Database, EngineChoice, Error, Graph, Query};
use num_bigint::BigUint;

/// Ordered selections of `k'` vertices whose closed neighbourhoods cover
/// the graph, counted by plain enumeration.
fn dominating_selections(g: &Graph, k_prime: usize) -> u64 {
    let n = g.vertex_count();
    let mut total = 0;
    for code in 0..n.pow(k_prime as u32) {
        let picks: Vec<usize> = (0..k_prime).map(|i| code / n.pow(i as u32) % n).collect();
        let covered = (0..n).all(|v| picks.iter().any(|&p| p == v || g.adjacent(p, v)));
        total += u64::from(covered);
    }
    total
}

#[test]
fn star_count_identity_on_small_graphs() {
    for g in corpus::all_graphs(4) {
        let n = g.vertex_count() as u64;
        for (k, kp) in [(2, 2), (2, 4), (3, 3)] {
            let inst = ds_to_star_instance(&g, k, kp).unwrap();
            let answers = naive_count(&inst.query, &inst.database);
            let dominating = dominating_selections(&g, kp);
            assert_eq!(answers, n.pow(kp as u32) - dominating, "{g}");
            let decision = star_count_to_ds_decision(&inst, &BigUint::from(answers)).unwrap();
            assert_eq!(decision, brute_force_dominating(&g, kp), "{g}");
            assert_eq!(decision.has_ds, dominating > 0);
            assert!(BigUint::from(inst.relation().len()) <= inst.size_bound(), "{g}");
        }
    }
}

#[test]
fn star_count_identity_on_random_graphs() {
    let mut rng = corpus::rng(17);
    for _ in 0..40 {
        let g = corpus::random_graph(&mut rng, 7);
        let inst = ds_to_star_instance(&g, 2, 4).unwrap();
        let answers = count(&inst.query, &inst.database, EngineChoice::Auto).unwrap().value;
        let expected = BigUint::from(g.vertex_count()).pow(4) - dominating_selections(&g, 4);
        assert_eq!(answers, expected, "{g}");
    }
}

#[test]
fn ds_reduction_rejects_bad_parameters() {
    let g = Graph::new(&["a", "b"], &[("a", "b")]).unwrap();
    assert!(matches!(ds_to_star_instance(&g, 2, 3), Err(Error::NotDivisible { .. })));
    assert!(ds_to_star_instance(&g, 1, 2).is_err());
    let inst = ds_to_star_instance(&g, 2, 2).unwrap();
    assert!(star_count_to_ds_decision(&inst, &BigUint::from(5u8)).is_err());
}

fn project(answers: &BTreeSet<Vec<String>>, q: &Query, path: &[&str]) -> Vec<Vec<String>> {
    let cols: Vec<usize> = [path[0], path[path.len() - 1]]
        .iter()
        .map(|v| q.head.iter().position(|h| h.name() == *v).unwrap())
        .collect();
    answers
        .iter()
        .map(|a| cols.iter().map(|&c| a[c].clone()).collect())
        .collect()
}

#[test]
fn embedding_is_a_bijection_onto_star_answers() {
    let mut rng = corpus::rng(29);
    for _ in 0..30 {
        let source = corpus::random_star_database(&mut rng, 40);
        let star: BTreeSet<Vec<String>> = naive_answers(&Query::star(2), &source);
        for target in corpus::embedding_targets() {
            let inst = embed_star2(&target, &source).unwrap();
            let answers = naive_answers(&target, &inst.database);
            let path: Vec<String> = inst.path.vertices().iter().map(|v| v.to_string()).collect();
            let path: Vec<&str> = path.iter().map(String::as_str).collect();
            let projected = project(&answers, &target, &path);
            assert_eq!(projected.len(), answers.len(), "{target}");
            assert_eq!(projected.iter().cloned().collect::<BTreeSet<_>>(), star, "{target}");
            assert!(
                projected.iter().collect::<BTreeSet<_>>().len() == projected.len(),
                "{target}: not injective"
            );
            assert!(verify_embedding(&inst, &source).unwrap(), "{target}");
            assert!(embedding_size_ok(&target, &source, &inst.database), "{target}");
        }
    }
}

#[test]
fn embedding_refuses_free_connex_targets() {
    let mut source = Database::new();
    source.insert_rows("R", 2, [["a", "b"]]).unwrap();
    let err = embed_star2(&Query::star(1), &source).unwrap_err();
    assert!(err.is_structural(), "{err}");
}
