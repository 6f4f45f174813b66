//! Acyclicity, free-connexness, free paths and quantified star size.

mod free_path;
mod gyo;
mod star_size;

use serde::Serialize;

pub use free_path::{find_free_path, FreePath};
pub use gyo::{build_join_tree, gyo_is_acyclic, gyo_reduce_by, gyo_trace, GyoStep, GyoTrace, JoinTree};
pub use star_size::quantified_star_size;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::query::Query;

/// Whether the hypergraph plus the free-variable set as one more edge is
/// still acyclic. Boolean queries count as free-connex.
pub fn is_free_connex(q: &Query) -> Result<bool> {
    let h = Hypergraph::of_query(q);
    if !gyo_is_acyclic(&h) {
        return Err(Error::NotAcyclic);
    }
    let free = q.free_vars();
    if free.is_empty() {
        return Ok(true);
    }
    Ok(gyo_is_acyclic(&h.with_extra_edge(free)))
}

/// Structural verdict for a query. Optional fields are present only for
/// acyclic queries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub acyclic: bool,
    pub free_connex: Option<bool>,
    pub star_size: Option<usize>,
    pub free_path: Option<FreePath>,
    pub join_tree: Option<JoinTree>,
    pub self_join_free: bool,
}

pub fn analyze(q: &Query) -> AnalysisReport {
    let h = Hypergraph::of_query(q);
    let self_join_free = q.is_self_join_free();
    let Ok(join_tree) = build_join_tree(&h) else {
        return AnalysisReport {
            acyclic: false,
            free_connex: None,
            star_size: None,
            free_path: None,
            join_tree: None,
            self_join_free,
        };
    };
    AnalysisReport {
        acyclic: true,
        free_connex: Some(is_free_connex(q).expect("acyclic")),
        star_size: Some(quantified_star_size(q)),
        free_path: find_free_path(q).expect("acyclic"),
        join_tree: Some(join_tree),
        self_join_free,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_query;

    #[test]
    fn free_connex_examples() {
        assert!(!is_free_connex(&Query::star(2)).unwrap());
        assert!(is_free_connex(&Query::star(1)).unwrap());
        assert!(is_free_connex(&parse_query("Q(x,y):-R(x,y).").unwrap()).unwrap());
        assert!(is_free_connex(&parse_query("B():-R(x,y),S(y,z).").unwrap()).unwrap());
        let cyclic = parse_query("B():-R(x,y),S(y,z),T(z,x).").unwrap();
        assert!(matches!(is_free_connex(&cyclic), Err(Error::NotAcyclic)));
    }

    #[test]
    fn analyze_star2() {
        let r = analyze(&Query::star(2));
        assert!(r.acyclic);
        assert_eq!(r.free_connex, Some(false));
        assert_eq!(r.star_size, Some(2));
        let path = r.free_path.unwrap();
        assert_eq!(path.endpoints, ("x1".into(), "x2".into()));
        assert_eq!(path.internal, vec!["z".into()]);
        assert!(!r.self_join_free);
    }

    #[test]
    fn analyze_star1_and_triangle() {
        let r = analyze(&Query::star(1));
        assert_eq!((r.free_connex, r.star_size, r.free_path), (Some(true), Some(1), None));
        let t = analyze(&parse_query("B():-R(x,y),S(y,z),T(z,x).").unwrap());
        assert!(!t.acyclic);
        assert_eq!(t.free_connex, None);
        assert_eq!(t.join_tree, None);
    }

    #[test]
    fn report_json_fields() {
        let v = serde_json::to_value(analyze(&Query::star(2))).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(
            keys,
            [
                "acyclic",
                "free_connex",
                "free_path",
                "join_tree",
                "self_join_free",
                "star_size"
            ]
        );
        assert_eq!(v["free_path"]["endpoints"], serde_json::json!(["x1", "x2"]));
        assert_eq!(v["free_path"]["internal"], serde_json::json!(["z"]));
        assert_eq!(v["star_size"], 2);
    }
}
