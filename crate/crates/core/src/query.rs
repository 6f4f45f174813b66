//! Conjunctive query syntax.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Variable(String);

impl Variable {
    pub fn new(name: impl Into<String>) -> Self {
        Variable(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Variable {
    fn from(s: &str) -> Self {
        Variable::new(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Variable>,
}

impl Atom {
    pub fn new<V: Into<Variable>>(predicate: impl Into<String>, args: impl IntoIterator<Item = V>) -> Self {
        Atom {
            predicate: predicate.into(),
            args: args.into_iter().map(Into::into).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn var_set(&self) -> BTreeSet<Variable> {
        self.args.iter().cloned().collect()
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.predicate)?;
        for (i, v) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// A conjunctive query `Name(head) :- body.`
///
/// Head variables are the free variables; every other body variable is
/// existentially quantified.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Query {
    pub name: String,
    pub head: Vec<Variable>,
    pub body: Vec<Atom>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryProperties {
    pub self_join_free: bool,
    pub free_vars: BTreeSet<Variable>,
    pub quantified_vars: BTreeSet<Variable>,
}

impl Query {
    /// Builds a query and checks that it is safe and has a nonempty body.
    pub fn new(name: impl Into<String>, head: Vec<Variable>, body: Vec<Atom>) -> Result<Self> {
        let q = Query {
            name: name.into(),
            head,
            body,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.body.is_empty() {
            return Err(Error::EmptyBody);
        }
        let vars = self.variables();
        if let Some(v) = self.head.iter().find(|v| !vars.contains(*v)) {
            return Err(Error::UnsafeHead(v.to_string()));
        }
        Ok(())
    }

    /// The star query `Q(x1..xk) :- R(x1, z), ..., R(xk, z).`
    pub fn star(k: usize) -> Query {
        let head: Vec<Variable> = (1..=k).map(|i| Variable::new(format!("x{i}"))).collect();
        let body = head
            .iter()
            .map(|x| Atom::new("R", [x.clone(), Variable::new("z")]))
            .collect();
        Query {
            name: "Q".into(),
            head,
            body,
        }
    }

    /// All body variables in sorted order.
    pub fn variables(&self) -> BTreeSet<Variable> {
        self.body.iter().flat_map(|a| a.args.iter().cloned()).collect()
    }

    pub fn free_vars(&self) -> BTreeSet<Variable> {
        self.head.iter().cloned().collect()
    }

    pub fn quantified_vars(&self) -> BTreeSet<Variable> {
        let free = self.free_vars();
        self.variables().into_iter().filter(|v| !free.contains(v)).collect()
    }

    pub fn is_self_join_free(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.body.iter().all(|a| seen.insert(a.predicate.as_str()))
    }

    /// Predicate name to arity, or the first predicate used with two arities.
    pub fn predicate_arities(&self) -> std::result::Result<BTreeMap<&str, usize>, &str> {
        let mut arities = BTreeMap::new();
        for a in &self.body {
            match arities.insert(a.predicate.as_str(), a.arity()) {
                Some(prev) if prev != a.arity() => return Err(a.predicate.as_str()),
                _ => {}
            }
        }
        Ok(arities)
    }

    pub fn properties(&self) -> QueryProperties {
        QueryProperties {
            self_join_free: self.is_self_join_free(),
            free_vars: self.free_vars(),
            quantified_vars: self.quantified_vars(),
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, v) in self.head.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(") :- ")?;
        for (i, a) in self.body.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(".")
    }
}
