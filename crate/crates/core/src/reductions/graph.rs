use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Simple undirected graph. Vertices keep their declaration order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    /// Edges as index pairs `(a, b)` with `a < b`.
    edges: BTreeSet<(usize, usize)>,
}

#[derive(Default)]
struct Builder {
    graph: Graph,
    index: HashMap<String, usize>,
}

impl Builder {
    fn vertex(&mut self, v: &str) -> std::result::Result<(), String> {
        if v.is_empty() || v.contains('|') || v.contains(char::is_whitespace) {
            return Err(format!("invalid vertex name `{v}`"));
        }
        if self.index.insert(v.to_owned(), self.graph.names.len()).is_some() {
            return Err(format!("vertex `{v}` declared twice"));
        }
        self.graph.names.push(v.to_owned());
        Ok(())
    }

    fn edge(&mut self, a: &str, b: &str) -> std::result::Result<(), String> {
        let lookup = |s: &str| {
            self.index
                .get(s)
                .copied()
                .ok_or_else(|| format!("edge endpoint `{s}` is not a vertex"))
        };
        let (i, j) = (lookup(a)?, lookup(b)?);
        if i == j {
            return Err(format!("self-loop on `{a}`"));
        }
        if !self.graph.edges.insert((i.min(j), i.max(j))) {
            return Err(format!("parallel edge `{a}`-`{b}`"));
        }
        Ok(())
    }
}

fn format_err(line: Option<usize>, message: impl Into<String>) -> Error {
    Error::GraphFormat {
        line,
        message: message.into(),
    }
}

impl Graph {
    /// Builds a graph, rejecting loops, parallel edges, unknown endpoints and
    /// vertex names containing `|` or whitespace.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let mut b = Builder::default();
        for v in vertices {
            b.vertex(v.as_ref()).map_err(|m| format_err(None, m))?;
        }
        for (x, y) in edges {
            b.edge(x.as_ref(), y.as_ref()).map_err(|m| format_err(None, m))?;
        }
        Ok(b.graph)
    }

    /// Graph on vertices `names` with edges given as index pairs.
    pub fn from_indices(names: Vec<String>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let pairs: Vec<(String, String)> = edges
            .into_iter()
            .map(|(a, b)| (names[a].clone(), names[b].clone()))
            .collect();
        Graph::new(&names, &pairs)
    }

    /// Parses `p ds <n> <m>`, then `v <name>` lines, then `e <a> <b>` lines.
    /// `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header = None;
        let mut b = Builder::default();
        for (i, raw) in text.lines().enumerate() {
            let at = Some(i + 1);
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let step = match fields.as_slice() {
                ["p", "ds", n, m] if header.is_none() => {
                    let count = |s: &str| {
                        s.parse::<usize>()
                            .map_err(|_| format_err(at, format!("invalid count `{s}`")))
                    };
                    header = Some((count(n)?, count(m)?));
                    Ok(())
                }
                ["p", ..] => Err("expected a single `p ds <n> <m>` header".to_owned()),
                _ if header.is_none() => Err("missing `p ds <n> <m>` header".to_owned()),
                ["v", _] if !b.graph.edges.is_empty() => Err("vertex declared after the first edge".to_owned()),
                ["v", name] => b.vertex(name),
                ["e", x, y] => b.edge(x, y),
                _ => Err(format!("unrecognised line `{line}`")),
            };
            step.map_err(|m| format_err(at, m))?;
        }
        let Some((n, m)) = header else {
            return Err(format_err(None, "missing `p ds <n> <m>` header"));
        };
        let g = b.graph;
        if g.names.len() != n || g.edges.len() != m {
            return Err(format_err(
                None,
                format!(
                    "header declares {n} vertices and {m} edges, found {} and {}",
                    g.names.len(),
                    g.edges.len()
                ),
            ));
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p ds {} {}", self.names.len(), self.edges.len())?;
        for v in &self.names {
            writeln!(f, "v {v}")?;
        }
        for &(a, b) in &self.edges {
            writeln!(f, "e {} {}", self.names[a], self.names[b])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_path_graph() {
        let g = Graph::parse("# P3\np ds 3 2\nv a\nv b\nv c\ne a b\ne b c # middle\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert!(g.adjacent(1, 0));
        assert!(!g.adjacent(0, 2));
        assert_eq!(Graph::parse(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn rejects_bad_graphs() {
        for bad in [
            "v a\n",
            "p ds 2 1\nv a\nv b\n",
            "p ds 1 1\nv a\ne a a\n",
            "p ds 2 2\nv a\nv b\ne a b\ne b a\n",
            "p ds 1 0\nv a|b\n",
            "p ds 2 1\nv a\ne a b\nv b\n",
            "p ds 1 0\nv a\nx\n",
        ] {
            assert!(matches!(Graph::parse(bad), Err(Error::GraphFormat { .. })), "{bad:?}");
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        match Graph::parse("p ds 2 1\nv a\nv b\ne a a\n") {
            Err(Error::GraphFormat { line, message }) => {
                assert_eq!(line, Some(4));
                assert!(message.contains("self-loop"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
