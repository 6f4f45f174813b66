//! Hardness reductions as executable constructions, each with a brute-force
//! oracle to check it against.

mod dominating;
mod embed;
mod graph;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::engine::Database;
use crate::error::{Error, Result};
use crate::query::Query;

pub use dominating::{
    brute_force_dominating, ds_to_star_instance, star_count_to_ds_decision, DsDecision, StarInstance, PACK_SEPARATOR,
};
pub use embed::{embed_star2, verify_embedding, EmbeddingInstance};
pub use graph::Graph;

pub const QUERY_FILE: &str = "query.cq";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Describes a written instance. Fields that do not apply to a reduction are
/// `null`.
#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub kind: &'static str,
    pub k: Option<usize>,
    pub k_prime: Option<usize>,
    pub n: Option<usize>,
    pub decoder: Option<BTreeMap<String, Vec<String>>>,
    pub path: Option<Vec<String>>,
    pub constant: Option<String>,
    pub query: String,
    pub relations: BTreeMap<String, usize>,
}

fn write_instance(dir: &Path, query: &Query, db: &Database, manifest: &Manifest) -> Result<()> {
    let io = |path: PathBuf| move |source| Error::Io { path, source };
    fs::create_dir_all(dir).map_err(io(dir.to_owned()))?;
    let qpath = dir.join(QUERY_FILE);
    fs::write(&qpath, format!("{query}\n")).map_err(io(qpath))?;
    db.write_csv_dir(dir)?;
    let mpath = dir.join(MANIFEST_FILE);
    let json = serde_json::to_string_pretty(manifest).map_err(|e| Error::Internal(e.to_string()))?;
    fs::write(&mpath, json + "\n").map_err(io(mpath))
}

fn tuple_counts(db: &Database) -> BTreeMap<String, usize> {
    db.relations().map(|(n, r)| (n.to_owned(), r.len())).collect()
}

impl StarInstance {
    pub fn manifest(&self) -> Manifest {
        Manifest {
            kind: "ds",
            k: Some(self.k),
            k_prime: Some(self.k_prime),
            n: Some(self.n),
            decoder: Some(self.decoder.clone()),
            path: None,
            constant: None,
            query: self.query.to_string(),
            relations: tuple_counts(&self.database),
        }
    }

    /// Writes the query, `R.csv` and the manifest into `dir`.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<()> {
        write_instance(dir.as_ref(), &self.query, &self.database, &self.manifest())
    }
}

impl EmbeddingInstance {
    pub fn manifest(&self) -> Manifest {
        Manifest {
            kind: "embed",
            k: None,
            k_prime: None,
            n: None,
            decoder: None,
            path: Some(self.path.vertices().iter().map(|v| v.to_string()).collect()),
            constant: Some(self.constant.clone()),
            query: self.target.to_string(),
            relations: tuple_counts(&self.database),
        }
    }

    /// Writes the target query, one CSV per target atom and the manifest.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<()> {
        write_instance(dir.as_ref(), &self.target, &self.database, &self.manifest())
    }
}
