//! Seeded and exhaustive corpora of queries, databases and graphs used by the
//! verification suites, the acceptance tests and the benchmarks.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{Database, Relation, Sym};
use crate::parse_query;
use crate::query::{Atom, Query, Variable};
use crate::reductions::Graph;

pub type CorpusRng = ChaCha8Rng;

pub fn rng(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

const VARS: [&str; 4] = ["x", "y", "z", "w"];
const PREDICATES: [&str; 4] = ["R", "S", "T", "U"];
const SYMBOLS: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

/// Bounds for [`random_query`] and [`random_database`].
#[derive(Clone, Copy, Debug)]
pub struct RandomShape {
    pub max_vars: usize,
    pub max_atoms: usize,
    pub max_arity: usize,
    pub max_tuples: usize,
}

impl Default for RandomShape {
    fn default() -> Self {
        RandomShape {
            max_vars: 4,
            max_atoms: 4,
            max_arity: 3,
            max_tuples: 30,
        }
    }
}

/// A random safe query. An argument repeats a variable of its atom with
/// probability about 3/20, and a later atom reuses an earlier predicate of
/// the same arity with probability 1/5.
pub fn random_query(rng: &mut CorpusRng, shape: RandomShape) -> Query {
    let n_vars = rng.random_range(1..=shape.max_vars.min(VARS.len()));
    let n_atoms = rng.random_range(1..=shape.max_atoms.min(PREDICATES.len()));
    let mut body: Vec<Atom> = Vec::with_capacity(n_atoms);
    for fresh in &PREDICATES[..n_atoms] {
        let arity = rng.random_range(1..=shape.max_arity);
        let mut args: Vec<&str> = Vec::with_capacity(arity);
        for _ in 0..arity {
            let unused: Vec<&str> = VARS[..n_vars].iter().copied().filter(|v| !args.contains(v)).collect();
            let v = match unused.choose(rng) {
                Some(&v) if !rng.random_bool(0.15) => v,
                _ => VARS[rng.random_range(0..n_vars)],
            };
            args.push(v);
        }
        let reusable: Vec<&Atom> = body.iter().filter(|a| a.arity() == arity).collect();
        let predicate = match reusable.choose(rng) {
            Some(a) if rng.random_bool(0.2) => a.predicate.clone(),
            _ => (*fresh).to_owned(),
        };
        body.push(Atom::new(predicate, args.into_iter().map(Variable::from)));
    }
    let mut head: Vec<Variable> = Query {
        name: "Q".into(),
        head: Vec::new(),
        body: body.clone(),
    }
    .variables()
    .into_iter()
    .filter(|_| rng.random_bool(0.5))
    .collect();
    head.shuffle(rng);
    Query::new("Q", head, body).expect("generated query is safe")
}

/// A random database for the predicates of `q`, over a pool of two to six
/// symbols.
pub fn random_database(rng: &mut CorpusRng, q: &Query, max_tuples: usize) -> Database {
    let pool = &SYMBOLS[..rng.random_range(2..=SYMBOLS.len())];
    let mut db = Database::new();
    for (name, arity) in q.predicate_arities().expect("consistent arities") {
        let len = rng.random_range(0..=max_tuples);
        let rows: Vec<Vec<&str>> = (0..len)
            .map(|_| (0..arity).map(|_| *pool.choose(rng).unwrap()).collect())
            .collect();
        db.insert_rows(name, arity, rows).expect("rows have the declared arity");
    }
    db
}

/// Every query whose body is a multiset of one to `max_atoms` atoms over
/// nonempty sets of at most `max_arity` of the first `n_vars` variables,
/// with every subset of the body variables as head. Atoms get distinct
/// predicates and list their variables in sorted order.
pub fn exhaustive_queries(n_vars: usize, max_atoms: usize, max_arity: usize) -> Vec<Query> {
    let vars = &VARS[..n_vars];
    let subsets: Vec<Vec<&str>> = (1u32..1 << n_vars)
        .filter(|m| m.count_ones() as usize <= max_arity)
        .map(|m| (0..n_vars).filter(|i| m >> i & 1 == 1).map(|i| vars[i]).collect())
        .collect();
    let mut bodies: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..subsets.len()).map(|i| vec![i]).collect();
    while let Some(b) = stack.pop() {
        if b.len() < max_atoms {
            let last = *b.last().unwrap();
            stack.extend((last..subsets.len()).map(|j| {
                let mut next = b.clone();
                next.push(j);
                next
            }));
        }
        bodies.push(b);
    }
    bodies.sort();

    let mut out = Vec::new();
    for b in bodies {
        let body: Vec<Atom> = b
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                Atom::new(
                    ((b'A' + i as u8) as char).to_string(),
                    subsets[s].iter().map(|&v| Variable::from(v)),
                )
            })
            .collect();
        let used: Vec<&str> = vars
            .iter()
            .copied()
            .filter(|v| b.iter().any(|&s| subsets[s].contains(v)))
            .collect();
        for m in 0u32..1 << used.len() {
            let head = (0..used.len())
                .filter(|i| m >> i & 1 == 1)
                .map(|i| Variable::from(used[i]));
            out.push(Query::new("Q", head.collect(), body.clone()).expect("head is a body subset"));
        }
    }
    out
}

/// Star queries, paths, full, Boolean, cyclic and self-join queries.
pub fn curated_queries() -> Vec<Query> {
    let mut out: Vec<Query> = (1..=4).map(Query::star).collect();
    for src in [
        "Q(x, w) :- R(x, y), S(y, z), T(z, w).",
        "Q(x, y) :- R(x, y), S(y, z), T(z, w).",
        "Q(x) :- R(x, y), S(y, z).",
        "Q(x, y, z) :- R(x, y), S(y, z).",
        "Q(x, y, z, w) :- R(x, y), S(y, z), T(z, w).",
        "Q(x, y, z) :- R(x, y, z), S(x), T(z, x).",
        "Q() :- R(x, y), S(y, z).",
        "Q() :- R(x, x).",
        "Q() :- R(x, y), S(y, z), T(z, x).",
        "Q(x, y, z) :- R(x, y), S(y, z), T(z, x).",
        "Q(x, z) :- R(x, y), R(y, z).",
        "Q(x, y) :- R(x, y), R(y, z).",
        "Q(x, y) :- R(x, y, z), S(z, w), T(w).",
    ] {
        out.push(parse_query(src).expect("curated query parses"));
    }
    out
}

/// Acyclic targets that are not free-connex, covering free paths with one to
/// three internal vertices, extra free and quantified variables off the
/// path, and unary atoms.
pub fn embedding_targets() -> Vec<Query> {
    [
        "Q(x1, x2) :- A(x1, z), B(z, x2).",
        "Q(x1, x2) :- A(x1, z), B(x2, z).",
        "Q(x1, x2, w) :- A(x1, z), B(z, x2), U(w).",
        "Q(x1, x2, x3) :- A(x1, z), B(x2, z), C(x3, z).",
        "Q(x1, x2, u) :- A(x1, z, v), B(z, x2), W(v, t), U(u), Z(z).",
        "Q(x1, x2) :- A(x1, z1), B(z1, z2), C(z2, x2).",
        "Q(x1, x2, y) :- A(x1, z1, y), B(z1, z2), C(z2, x2), V(x1).",
        "Q(x1, x2) :- A(x1, z1), B(z1, z2), C(z2, z3), D(z3, x2).",
    ]
    .into_iter()
    .map(|s| parse_query(s).expect("target parses"))
    .collect()
}

/// A database with one binary relation `R` of at most `max_tuples` distinct
/// tuples over a pool of 2 to 15 symbols.
pub fn random_star_database(rng: &mut CorpusRng, max_tuples: usize) -> Database {
    let pool = rng.random_range(2..=15usize);
    let len = rng.random_range(0..=max_tuples);
    let rows: Vec<[String; 2]> = (0..len)
        .map(|_| [0, 1].map(|_| format!("s{}", rng.random_range(0..pool))))
        .collect();
    let mut db = Database::new();
    db.insert_rows("R", 2, rows).expect("binary rows");
    db
}

fn vertex_names(n: usize) -> Vec<String> {
    (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

/// Every labelled simple graph on 1 to `max_n` vertices.
pub fn all_graphs(max_n: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        for mask in 0u64..1 << pairs.len() {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p);
            out.push(Graph::from_indices(vertex_names(n), edges).expect("valid graph"));
        }
    }
    out
}

/// A graph on 1 to `max_n` vertices with a random edge density.
pub fn random_graph(rng: &mut CorpusRng, max_n: usize) -> Graph {
    let n = rng.random_range(1..=max_n);
    let p: f64 = rng.random();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_indices(vertex_names(n), edges).expect("valid graph")
}

/// Free-connex query with quantified variables used for scaling measurements.
pub fn scaling_query() -> Query {
    parse_query("Q(x, y, u) :- R(x, y), S(y, u), T(u, z), U(z, w).").expect("scaling query parses")
}

/// A database for [`scaling_query`] with `m` tuples spread over its four
/// relations. Values are drawn from a domain of about `m / 8` symbols so
/// that joins stay selective but nonempty.
pub fn scaling_database(m: usize, seed: u64) -> Database {
    let mut rng = rng(seed);
    let domain = (m / 8).max(4);
    let mut db = Database::new();
    let syms: Vec<Sym> = (0..domain).map(|i| db.symbols.intern(&i.to_string())).collect();
    for (i, name) in ["R", "S", "T", "U"].into_iter().enumerate() {
        let len = m / 4 + usize::from(i < m % 4);
        let data: Vec<Sym> = (0..2 * len).map(|_| syms[rng.random_range(0..domain)]).collect();
        let rel = if data.is_empty() {
            Relation::empty(2)
        } else {
            Relation::from_flat(2, data)
        };
        db.set_relation(name, rel);
    }
    db
}
