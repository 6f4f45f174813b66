//! Property suites that check every engine and construction against an
//! independent oracle. Reports are deterministic in the seed.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Pow;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::corpus::{self, CorpusRng, RandomShape};
use crate::engine::{
    answers_bound, count, count_bruteforce, count_freeconnex, eliminate_quantified, eliminate_quantified_with,
    full_reduce, BoundQuery, Database, Engine, EngineChoice, Sym,
};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::query::{Query, Variable};
use crate::reductions::{
    brute_force_dominating, ds_to_star_instance, embed_star2, star_count_to_ds_decision, verify_embedding, Graph,
    StarInstance,
};
use crate::structure::{
    build_join_tree, find_free_path, gyo_is_acyclic, gyo_reduce_by, is_free_connex, quantified_star_size, FreePath,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Engines,
    Reductions,
    Structure,
}

impl Suite {
    /// Random instances drawn when no size is given.
    pub fn default_size(self) -> usize {
        match self {
            Suite::Engines => 200,
            Suite::Reductions => 100,
            Suite::Structure => 200,
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "engines" => Ok(Suite::Engines),
            "reductions" => Ok(Suite::Reductions),
            "structure" => Ok(Suite::Structure),
            _ => Err(format!(
                "unknown suite `{s}`, expected engines, reductions or structure"
            )),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Engines => "engines",
            Suite::Reductions => "reductions",
            Suite::Structure => "structure",
        })
    }
}

/// Deliberate defects for checking that the suites catch them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Adds one to the star answer count before the dominating-set decision.
    DsOffByOne,
    /// Adds one to every join-tree engine count.
    EngineOffByOne,
}

impl FromStr for Fault {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ds-off-by-one" => Ok(Fault::DsOffByOne),
            "engine-off-by-one" => Ok(Fault::EngineOffByOne),
            _ => Err(format!("unknown fault `{s}`")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub checked: usize,
    pub failed: usize,
    /// The first failure, shrunk greedily where a shrinker exists.
    pub counterexample: Option<Value>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check {
            name,
            checked: 0,
            failed: 0,
            counterexample: None,
        }
    }

    fn record(&mut self, ok: bool, counterexample: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(counterexample());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub size: usize,
    pub passed: bool,
    pub checks: Vec<Check>,
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub suite: Suite,
    pub seed: u64,
    pub size: Option<usize>,
    pub fault: Option<Fault>,
}

impl VerifyConfig {
    pub fn new(suite: Suite, seed: u64) -> Self {
        VerifyConfig {
            suite,
            seed,
            size: None,
            fault: None,
        }
    }
}

pub fn run(config: VerifyConfig) -> SuiteReport {
    let size = config.size.unwrap_or(config.suite.default_size());
    let mut rng = corpus::rng(config.seed);
    let checks = match config.suite {
        Suite::Engines => engines(&mut rng, size, config.fault),
        Suite::Reductions => reductions(&mut rng, size, config.fault),
        Suite::Structure => structure(&mut rng, size),
    };
    SuiteReport {
        suite: config.suite,
        seed: config.seed,
        size,
        passed: checks.iter().all(Check::passed),
        checks,
    }
}

/// Replaces `item` by the first smaller candidate that still fails until no
/// candidate does.
fn shrink<T>(mut item: T, candidates: impl Fn(&T) -> Vec<T>, fails: impl Fn(&T) -> bool) -> T {
    'outer: loop {
        for c in candidates(&item) {
            if fails(&c) {
                item = c;
                continue 'outer;
            }
        }
        return item;
    }
}

fn database_json(db: &Database) -> Value {
    let rels: BTreeMap<&str, Vec<Vec<String>>> = db.relations().map(|(n, _)| (n, db.string_rows(n).unwrap())).collect();
    json!(rels)
}

/// Every database obtained by deleting one tuple.
fn smaller_databases(db: &Database) -> Vec<Database> {
    let mut out = Vec::new();
    for (name, rel) in db.relations() {
        for row in rel.rows() {
            let mut smaller = db.clone();
            smaller.set_relation(name, rel.filter(|r| r != row));
            out.push(smaller);
        }
    }
    out
}

fn graph_json(g: &Graph) -> Value {
    json!(g.to_string())
}

/// Every graph obtained by deleting one edge or one vertex.
fn smaller_graphs(g: &Graph) -> Vec<Graph> {
    let mut out = Vec::new();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    for skip in 0..edges.len() {
        let kept = edges.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &e)| e);
        out.push(Graph::from_indices(g.names().to_vec(), kept).unwrap());
    }
    if g.vertex_count() > 1 {
        for v in 0..g.vertex_count() {
            let reindex = |u: usize| if u > v { u - 1 } else { u };
            let names = g
                .names()
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != v)
                .map(|(_, s)| s.clone())
                .collect();
            let kept = edges
                .iter()
                .filter(|&&(a, b)| a != v && b != v)
                .map(|&(a, b)| (reindex(a), reindex(b)));
            out.push(Graph::from_indices(names, kept).unwrap());
        }
    }
    out
}

// ---------------------------------------------------------------- engines

fn freeconnex_count(q: &Query, db: &Database, fault: Option<Fault>) -> Result<BigUint> {
    let c = count_freeconnex(q, db)?.value;
    Ok(if fault == Some(Fault::EngineOffByOne) {
        c + 1u32
    } else {
        c
    })
}

fn engines_agree(q: &Query, db: &Database, fault: Option<Fault>) -> bool {
    match (freeconnex_count(q, db, fault), count_bruteforce(q, db)) {
        (Ok(a), Ok(b)) => a == b.value,
        _ => false,
    }
}

fn engine_counterexample(q: &Query, db: &Database, fault: Option<Fault>) -> Value {
    let db = shrink(db.clone(), smaller_databases, |d| !engines_agree(q, d, fault));
    json!({
        "query": q.to_string(),
        "database": database_json(&db),
        "freeconnex": freeconnex_count(q, &db, fault).map(|c| c.to_string()).unwrap_or_else(|e| e.to_string()),
        "bruteforce": count_bruteforce(q, &db).map(|c| c.value.to_string()).unwrap_or_else(|e| e.to_string()),
    })
}

/// Answers over the free variables, as (sorted variable id) tuples.
fn bound_answers(bq: &BoundQuery) -> HashSet<Vec<Sym>> {
    answers_bound(bq)
}

/// After a full reduction every tuple of every table extends to a full join
/// result, and the answers are unchanged.
fn semijoin_consistent(q: &Query, db: &Database) -> Result<bool> {
    let original = BoundQuery::bind(q, db)?;
    let mut reduced = original.clone();
    full_reduce(&mut reduced)?;
    if bound_answers(&original) != bound_answers(&reduced) {
        return Ok(false);
    }
    let mut full = reduced.clone();
    full.free = (0..full.vars.len()).collect();
    let joins = answers_bound(&full);
    for t in &reduced.tables {
        let projected: HashSet<Vec<Sym>> = joins.iter().map(|a| t.vars.iter().map(|&v| a[v]).collect()).collect();
        let table: HashSet<Vec<Sym>> = t.rel.rows().map(<[Sym]>::to_vec).collect();
        if projected != table {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every intermediate query of the elimination has the original answers.
fn elimination_preserves(q: &Query, db: &Database) -> Result<bool> {
    let mut bq = BoundQuery::bind(q, db)?;
    full_reduce(&mut bq)?;
    let expected = bound_answers(&bq);
    let mut ok = true;
    eliminate_quantified_with(bq, |_, current| ok &= bound_answers(current) == expected)?;
    Ok(ok)
}

fn engines(rng: &mut CorpusRng, size: usize, fault: Option<Fault>) -> Vec<Check> {
    let shape = RandomShape::default();
    let mut oracle = Check::new("oracle_equivalence");
    let mut dispatch = Check::new("auto_dispatch");
    let mut consistency = Check::new("semijoin_consistency");
    let mut elimination = Check::new("elimination_preserves_answers");

    let mut attempts = 0;
    while oracle.checked < size && attempts < 100 * size {
        attempts += 1;
        let q = corpus::random_query(rng, shape);
        let db = corpus::random_database(rng, &q, shape.max_tuples);
        let acyclic = gyo_is_acyclic(&Hypergraph::of_query(&q));
        let fc = is_free_connex(&q).unwrap_or(false);

        let auto = count(&q, &db, EngineChoice::Auto);
        let expected_engine = match (fc, q.quantified_vars().is_empty()) {
            (false, _) => Engine::Bruteforce,
            (true, true) => Engine::FullAcyclic,
            (true, false) => Engine::Freeconnex,
        };
        let forced = count_freeconnex(&q, &db);
        let dispatch_ok = matches!(&auto, Ok(c) if c.engine == expected_engine)
            && (fc || matches!(forced, Err(Error::EngineInapplicable { .. })));
        dispatch.record(dispatch_ok, || json!({ "query": q.to_string(), "free_connex": fc }));

        if acyclic {
            let ok = semijoin_consistent(&q, &db).unwrap_or(false);
            consistency.record(ok, || {
                let db = shrink(db.clone(), smaller_databases, |d| {
                    !semijoin_consistent(&q, d).unwrap_or(false)
                });
                json!({ "query": q.to_string(), "database": database_json(&db) })
            });
        }
        if fc {
            oracle.record(engines_agree(&q, &db, fault), || engine_counterexample(&q, &db, fault));
            let ok = elimination_preserves(&q, &db).unwrap_or(false);
            elimination.record(ok, || json!({ "query": q.to_string(), "database": database_json(&db) }));
        }
    }
    if oracle.checked < size {
        let generated = oracle.checked;
        oracle.record(false, || json!(format!("only {generated} free-connex pairs generated")));
    }

    let mut curated = Check::new("curated_corpus");
    for q in corpus::curated_queries() {
        for _ in 0..5 {
            let db = corpus::random_database(rng, &q, shape.max_tuples);
            let brute = count_bruteforce(&q, &db).map(|c| c.value);
            let auto = count(&q, &db, EngineChoice::Auto).map(|c| c.value);
            let mut ok = matches!((&brute, &auto), (Ok(a), Ok(b)) if a == b);
            if is_free_connex(&q).unwrap_or(false) {
                ok &= engines_agree(&q, &db, fault);
            }
            curated.record(ok, || json!({ "query": q.to_string(), "database": database_json(&db) }));
        }
    }
    vec![oracle, curated, dispatch, consistency, elimination]
}

// ------------------------------------------------------------- reductions

const DS_PARAMS: [(usize, usize); 2] = [(2, 2), (2, 4)];

fn vertex_index(g: &Graph) -> BTreeMap<&str, usize> {
    g.names().iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect()
}

/// Every `R` tuple `(u, v)` has no `u_i` equal or adjacent to `v`, and the
/// decoder is injective.
fn star_instance_well_formed(g: &Graph, inst: &StarInstance) -> bool {
    let index = vertex_index(g);
    let rows = inst.database.string_rows("R").unwrap_or_default();
    let tuples_ok = rows.iter().all(|row| {
        let v = index[row[1].as_str()];
        inst.decoder[&row[0]].iter().all(|u| {
            let u = index[u.as_str()];
            u != v && !g.adjacent(u, v)
        })
    });
    let decoded: BTreeSet<&Vec<String>> = inst.decoder.values().collect();
    tuples_ok && decoded.len() == inst.decoder.len()
}

/// The dominating-set answer derived by counting, with the fault applied.
fn ds_via_counting(g: &Graph, k: usize, k_prime: usize, fault: Option<Fault>) -> Result<(StarInstance, BigUint, bool)> {
    let inst = ds_to_star_instance(g, k, k_prime)?;
    let mut answers = count(&inst.query, &inst.database, EngineChoice::Auto)?.value;
    if fault == Some(Fault::DsOffByOne) {
        answers += 1u32;
    }
    let decision = star_count_to_ds_decision(&inst, &answers)?;
    Ok((inst, decision.dominating_selections, decision.has_ds))
}

fn ds_agrees(g: &Graph, k: usize, k_prime: usize, fault: Option<Fault>) -> bool {
    let oracle = brute_force_dominating(g, k_prime);
    match ds_via_counting(g, k, k_prime, fault) {
        Ok((_, selections, has_ds)) => selections == oracle.dominating_selections && has_ds == oracle.has_ds,
        Err(_) => false,
    }
}

fn ds_counterexample(g: &Graph, k: usize, k_prime: usize, fault: Option<Fault>) -> Value {
    let g = shrink(g.clone(), smaller_graphs, |h| !ds_agrees(h, k, k_prime, fault));
    let via_counting = match ds_via_counting(&g, k, k_prime, fault) {
        Ok((_, selections, _)) => selections.to_string(),
        Err(e) => e.to_string(),
    };
    json!({
        "graph": graph_json(&g),
        "k": k,
        "k_prime": k_prime,
        "dominating_selections_via_counting": via_counting,
        "dominating_selections_brute_force": brute_force_dominating(&g, k_prime).dominating_selections.to_string(),
    })
}

fn check_ds_graph(g: &Graph, fault: Option<Fault>, identity: &mut Check, shape: &mut Check) {
    for (k, k_prime) in DS_PARAMS {
        identity.record(ds_agrees(g, k, k_prime, fault), || {
            ds_counterexample(g, k, k_prime, fault)
        });
        let ok = match ds_to_star_instance(g, k, k_prime) {
            Ok(inst) => {
                BigUint::from(inst.relation().len()) <= inst.size_bound() && star_instance_well_formed(g, &inst)
            }
            Err(_) => false,
        };
        shape.record(ok, || json!({ "graph": graph_json(g), "k": k, "k_prime": k_prime }));
    }
}

/// Arity-weighted size of a database, and of a query as the sum of its atom
/// arities.
fn weighted_size(db: &Database) -> usize {
    db.size()
}

fn query_size(q: &Query) -> usize {
    q.body.iter().map(|a| a.arity()).sum()
}

/// Linear size bound on embedded databases: `||D'|| <= 4 ||D|| + 10 |q|`.
pub fn embedding_size_ok(target: &Query, source: &Database, embedded: &Database) -> bool {
    weighted_size(embedded) <= 4 * weighted_size(source) + 10 * query_size(target)
}

fn reductions(rng: &mut CorpusRng, size: usize, fault: Option<Fault>) -> Vec<Check> {
    let mut exhaustive = Check::new("ds_exhaustive_up_to_5_vertices");
    let mut exhaustive_shape = Check::new("ds_instance_shape_exhaustive");
    for g in corpus::all_graphs(5) {
        check_ds_graph(&g, fault, &mut exhaustive, &mut exhaustive_shape);
    }
    let mut random = Check::new("ds_random_up_to_7_vertices");
    let mut random_shape = Check::new("ds_instance_shape_random");
    for _ in 0..size {
        let g = corpus::random_graph(rng, 7);
        check_ds_graph(&g, fault, &mut random, &mut random_shape);
    }

    let mut embedding = Check::new("embedding_bijection");
    let mut embedding_size = Check::new("embedding_linear_size");
    let targets = corpus::embedding_targets();
    for _ in 0..size.max(50) {
        let source = corpus::random_star_database(rng, 100);
        for target in &targets {
            let inst = embed_star2(target, &source);
            let ok = inst
                .as_ref()
                .is_ok_and(|i| verify_embedding(i, &source).unwrap_or(false));
            embedding.record(ok, || {
                let source = shrink(source.clone(), smaller_databases, |s| {
                    !embed_star2(target, s).is_ok_and(|i| verify_embedding(&i, s).unwrap_or(false))
                });
                json!({ "target": target.to_string(), "source": database_json(&source) })
            });
            let ok = inst
                .as_ref()
                .is_ok_and(|i| embedding_size_ok(target, &source, &i.database));
            embedding_size.record(ok, || {
                json!({
                    "target": target.to_string(),
                    "source_size": weighted_size(&source),
                    "embedded_size": inst.as_ref().map(|i| weighted_size(&i.database)).ok(),
                })
            });
        }
    }
    vec![
        exhaustive,
        exhaustive_shape,
        random,
        random_shape,
        embedding,
        embedding_size,
    ]
}

// -------------------------------------------------------------- structure

/// One tuple per relation; enough to run elimination, which only looks at
/// the table schemas.
fn unit_database(q: &Query) -> Database {
    let mut db = Database::new();
    for (name, arity) in q.predicate_arities().expect("consistent arities") {
        db.insert_rows(name, arity, [vec!["a"; arity]]).unwrap();
    }
    db
}

fn eliminates(q: &Query) -> bool {
    BoundQuery::bind(q, &unit_database(q)).is_ok_and(|bq| eliminate_quantified(bq).is_ok())
}

/// Consecutive vertices adjacent, no chords, free endpoints, quantified
/// internal vertices.
fn free_path_valid(q: &Query, p: &FreePath) -> bool {
    let adj = Hypergraph::of_query(q).cooccurrence();
    let free = q.free_vars();
    let vs = p.vertices();
    let chordless = (0..vs.len()).all(|i| (i + 1..vs.len()).all(|j| adj[&vs[i]].contains(&vs[j]) == (j == i + 1)));
    let distinct = vs.iter().collect::<BTreeSet<_>>().len() == vs.len();
    chordless
        && distinct
        && !p.internal.is_empty()
        && free.contains(&p.endpoints.0)
        && free.contains(&p.endpoints.1)
        && p.internal.iter().all(|z| !free.contains(z))
}

/// Star size by enumerating subsets of free variables: the largest pairwise
/// non-adjacent set that is adjacent to one connected set of quantified
/// variables, at least 1.
fn star_size_by_subsets(q: &Query) -> usize {
    let adj = Hypergraph::of_query(q).cooccurrence();
    let free: Vec<Variable> = q.free_vars().into_iter().collect();
    let quantified: Vec<Variable> = q.quantified_vars().into_iter().collect();
    let connected = |zs: &[&Variable]| {
        let mut reached = vec![zs[0]];
        let mut i = 0;
        while i < reached.len() {
            for z in zs {
                if !reached.contains(z) && adj[reached[i]].contains(*z) {
                    reached.push(z);
                }
            }
            i += 1;
        }
        reached.len() == zs.len()
    };
    let mut best = 1;
    for fmask in 1u32..1 << free.len() {
        let xs: Vec<&Variable> = (0..free.len())
            .filter(|i| fmask >> i & 1 == 1)
            .map(|i| &free[i])
            .collect();
        if xs.len() <= best
            || xs
                .iter()
                .enumerate()
                .any(|(i, a)| xs[i + 1..].iter().any(|b| adj[*a].contains(*b)))
        {
            continue;
        }
        let witnessed = (1u32..1 << quantified.len()).any(|zmask| {
            let zs: Vec<&Variable> = (0..quantified.len())
                .filter(|i| zmask >> i & 1 == 1)
                .map(|i| &quantified[i])
                .collect();
            connected(&zs) && xs.iter().all(|x| zs.iter().any(|z| adj[*z].contains(*x)))
        });
        if witnessed {
            best = xs.len();
        }
    }
    best
}

fn structure(rng: &mut CorpusRng, size: usize) -> Vec<Check> {
    let mut dichotomy = Check::new("dichotomy_exhaustive");
    let mut paths = Check::new("free_path_valid");
    let mut star_oracle = Check::new("star_size_oracle");
    let mut join_trees = Check::new("join_tree_connectivity");
    for q in corpus::exhaustive_queries(4, 3, 3) {
        let h = Hypergraph::of_query(&q);
        let Ok(tree) = build_join_tree(&h) else {
            continue;
        };
        let ok = tree.satisfies_connectivity() && tree.nodes.len() == h.edges.len();
        join_trees.record(ok, || json!({ "query": q.to_string() }));

        let fc = is_free_connex(&q).expect("acyclic");
        let path = find_free_path(&q).expect("acyclic");
        let star = quantified_star_size(&q);
        let elim = eliminates(&q);
        let agree = fc == path.is_none() && fc == (star == 1) && fc == elim;
        dichotomy.record(agree, || {
            json!({
                "query": q.to_string(),
                "free_connex": fc,
                "free_path": path,
                "star_size": star,
                "eliminates": elim,
            })
        });
        if let Some(p) = &path {
            paths.record(
                free_path_valid(&q, p),
                || json!({ "query": q.to_string(), "free_path": p }),
            );
        }
        let brute = star_size_by_subsets(&q);
        star_oracle.record(
            brute == star,
            || json!({ "query": q.to_string(), "star_size": star, "by_subsets": brute }),
        );
    }

    let mut stars = Check::new("star_queries");
    for k in 1..=6 {
        let q = Query::star(k);
        let ok = quantified_star_size(&q) == k && is_free_connex(&q).ok() == Some(k == 1);
        stars.record(ok, || json!({ "k": k }));
    }

    let mut orders = Check::new("gyo_order_independence");
    let shape = RandomShape::default();
    for _ in 0..size {
        let q = corpus::random_query(rng, shape);
        let h = Hypergraph::of_query(&q);
        let expected = gyo_is_acyclic(&h);
        for _ in 0..4 {
            let trace = gyo_reduce_by(&h, |steps| rng.random_range(0..steps.len()));
            orders.record(trace.acyclic == expected, || json!({ "query": q.to_string() }));
        }
    }

    let mut power = Check::new("star_size_count_bound");
    // answers of q*_k on a one-vertex-per-leaf database: n^k with n leaves
    for k in 1..=4usize {
        let mut db = Database::new();
        let rows: Vec<[String; 2]> = (0..3).map(|i| [format!("v{i}"), "hub".to_owned()]).collect();
        db.insert_rows("R", 2, rows).unwrap();
        let c = count(&Query::star(k), &db, EngineChoice::Auto).map(|c| c.value);
        power.record(c.ok() == Some(BigUint::from(3u32).pow(k)), || json!({ "k": k }));
    }
    vec![dichotomy, paths, star_oracle, join_trees, stars, orders, power]
}
