//! Relations over interned symbols and CSV directory loading.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Interned symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sym(pub u32);

#[derive(Clone, Debug, Default)]
pub struct SymbolTable {
    names: Vec<String>,
    index: HashMap<String, Sym>,
}

impl SymbolTable {
    pub fn intern(&mut self, name: &str) -> Sym {
        if let Some(&s) = self.index.get(name) {
            return s;
        }
        let s = Sym(u32::try_from(self.names.len()).expect("symbol table overflow"));
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), s);
        s
    }

    pub fn get(&self, name: &str) -> Option<Sym> {
        self.index.get(name).copied()
    }

    pub fn name(&self, s: Sym) -> &str {
        &self.names[s.0 as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// A finite set of equal-length tuples, stored row-major, sorted and
/// deduplicated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    arity: usize,
    len: usize,
    data: Vec<Sym>,
}

impl Relation {
    pub fn empty(arity: usize) -> Self {
        Relation {
            arity,
            len: 0,
            data: Vec::new(),
        }
    }

    /// The nullary relation holding the empty tuple.
    pub fn unit() -> Self {
        Relation {
            arity: 0,
            len: 1,
            data: Vec::new(),
        }
    }

    /// Builds a relation from row-major data, sorting and removing duplicates.
    pub fn from_flat(arity: usize, data: Vec<Sym>) -> Self {
        assert!(arity > 0, "nullary relations are built with `unit` or `empty`");
        assert_eq!(data.len() % arity, 0, "ragged row-major data");
        let n = data.len() / arity;
        if arity <= 2 {
            // rows packed into one integer each sort in the same order
            let pack = |r: &[Sym]| r.iter().fold(0u64, |acc, s| acc << 32 | u64::from(s.0));
            let mut packed: Vec<u64> = data.chunks_exact(arity).map(pack).collect();
            radsort::sort(&mut packed);
            packed.dedup();
            let mut sorted = Vec::with_capacity(packed.len() * arity);
            for p in &packed {
                if arity == 2 {
                    sorted.push(Sym((p >> 32) as u32));
                }
                sorted.push(Sym(*p as u32));
            }
            return Relation {
                arity,
                len: packed.len(),
                data: sorted,
            };
        }
        let row = |i: usize| &data[i * arity..(i + 1) * arity];
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_unstable_by(|&a, &b| row(a).cmp(row(b)));
        order.dedup_by(|a, b| row(*a) == row(*b));
        let mut sorted = Vec::with_capacity(order.len() * arity);
        for &i in &order {
            sorted.extend_from_slice(row(i));
        }
        Relation {
            arity,
            len: order.len(),
            data: sorted,
        }
    }

    /// Builds a relation from row-major data that is already sorted,
    /// dropping adjacent duplicates.
    pub(crate) fn from_sorted(arity: usize, mut data: Vec<Sym>) -> Self {
        assert!(arity > 0, "nullary relations are built with `unit` or `empty`");
        let n = data.len() / arity;
        let mut len = 0;
        for i in 0..n {
            let (done, rest) = data.split_at_mut(i * arity);
            let row = &rest[..arity];
            debug_assert!(
                len == 0 || &done[(len - 1) * arity..len * arity] <= row,
                "rows not sorted"
            );
            if len == 0 || &done[(len - 1) * arity..len * arity] != row {
                data.copy_within(i * arity..(i + 1) * arity, len * arity);
                len += 1;
            }
        }
        data.truncate(len * arity);
        Relation { arity, len, data }
    }

    /// Keeps the rows for which `keep` holds; order is preserved so no
    /// re-sorting is needed.
    pub fn filter(&self, mut keep: impl FnMut(&[Sym]) -> bool) -> Self {
        if self.arity == 0 {
            let len = if self.len == 1 && keep(&[]) { 1 } else { 0 };
            return Relation {
                len,
                ..Relation::empty(0)
            };
        }
        let mut data = Vec::new();
        for row in self.rows() {
            if keep(row) {
                data.extend_from_slice(row);
            }
        }
        Relation {
            arity: self.arity,
            len: data.len() / self.arity,
            data,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn row(&self, i: usize) -> &[Sym] {
        &self.data[i * self.arity..(i + 1) * self.arity]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[Sym]> + '_ {
        (0..self.len).map(move |i| self.row(i))
    }

    pub fn contains(&self, tuple: &[Sym]) -> bool {
        if tuple.len() != self.arity {
            return false;
        }
        if self.arity == 0 {
            return self.len == 1;
        }
        let (mut lo, mut hi) = (0, self.len);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.row(mid).cmp(tuple) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn symbols(&self) -> impl Iterator<Item = Sym> + '_ {
        self.data.iter().copied()
    }
}

/// Named relations over a shared symbol table.
#[derive(Clone, Debug, Default)]
pub struct Database {
    pub symbols: SymbolTable,
    relations: BTreeMap<String, Arc<Relation>>,
}

impl Database {
    pub fn new() -> Self {
        Self::default()
    }

    /// An empty database sharing an existing symbol table.
    pub fn with_symbols(symbols: SymbolTable) -> Self {
        Database {
            symbols,
            relations: BTreeMap::new(),
        }
    }

    /// Adds (or replaces) relation `name` from textual rows of length `arity`.
    pub fn insert_rows<R, S>(&mut self, name: &str, arity: usize, rows: impl IntoIterator<Item = R>) -> Result<()>
    where
        R: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut data = Vec::new();
        let mut len = 0;
        for row in rows {
            len += 1;
            let before = data.len();
            data.extend(row.into_iter().map(|s| self.symbols.intern(s.as_ref())));
            if data.len() - before != arity {
                return Err(Error::ArityMismatch {
                    name: name.to_owned(),
                    expected: arity,
                    found: data.len() - before,
                });
            }
        }
        let rel = match (arity, len) {
            (0, 0) => Relation::empty(0),
            (0, _) => Relation::unit(),
            _ => Relation::from_flat(arity, data),
        };
        self.set_relation(name, rel);
        Ok(())
    }

    pub fn set_relation(&mut self, name: impl Into<String>, rel: impl Into<Arc<Relation>>) {
        self.relations.insert(name.into(), rel.into());
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.get(name).map(|r| &**r)
    }

    /// The named relation as a shared handle, so binding a query does not
    /// copy it.
    pub fn shared_relation(&self, name: &str) -> Option<Arc<Relation>> {
        self.relations.get(name).cloned()
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, &Relation)> {
        self.relations.iter().map(|(k, v)| (k.as_str(), &**v))
    }

    pub fn relation_mut(&mut self, name: &str) -> Option<&mut Relation> {
        self.relations.get_mut(name).map(Arc::make_mut)
    }

    /// Total number of tuples.
    pub fn tuple_count(&self) -> usize {
        self.relations.values().map(|r| r.len()).sum()
    }

    /// Size `||D||`: tuples weighted by arity.
    pub fn size(&self) -> usize {
        self.relations.values().map(|r| r.len() * r.arity()).sum()
    }

    /// Rows of `name` rendered as strings, in lexicographic string order.
    pub fn string_rows(&self, name: &str) -> Option<Vec<Vec<String>>> {
        let rel = self.relations.get(name)?;
        let mut rows: Vec<Vec<String>> = rel
            .rows()
            .map(|r| r.iter().map(|&s| self.symbols.name(s).to_owned()).collect())
            .collect();
        rows.sort();
        Some(rows)
    }

    /// Symbols occurring in the named relations.
    pub fn active_domain<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> BTreeSet<Sym> {
        names
            .into_iter()
            .filter_map(|n| self.relation(n))
            .flat_map(Relation::symbols)
            .collect()
    }

    /// Loads `<predicate>.csv` files from a directory, or a single CSV file.
    /// Each file must have at least one row to fix its arity.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::load_with_arities(path, &BTreeMap::new())
    }

    /// Like [`Database::load`], but empty files for predicates listed in
    /// `arities` load as empty relations of that arity.
    pub fn load_with_arities(path: impl AsRef<Path>, arities: &BTreeMap<&str, usize>) -> Result<Self> {
        let path = path.as_ref();
        let io_err = |source| Error::Io {
            path: path.to_owned(),
            source,
        };
        let files: Vec<PathBuf> = if path.is_dir() {
            let mut files = Vec::new();
            for entry in fs::read_dir(path).map_err(io_err)? {
                let p = entry.map_err(io_err)?.path();
                if p.extension().is_some_and(|e| e == "csv") {
                    files.push(p);
                }
            }
            files.sort();
            files
        } else {
            vec![path.to_owned()]
        };
        let mut db = Database::new();
        for file in files {
            let name = file
                .file_stem()
                .and_then(|s| s.to_str())
                .ok_or_else(|| Error::Io {
                    path: file.clone(),
                    source: std::io::Error::other("relation file name is not valid UTF-8"),
                })?
                .to_owned();
            let rel = db.read_csv(&file, arities.get(name.as_str()).copied())?;
            db.set_relation(name, rel);
        }
        Ok(db)
    }

    fn read_csv(&mut self, path: &Path, arity_hint: Option<usize>) -> Result<Relation> {
        let csv_err = |source| Error::Csv {
            path: path.to_owned(),
            source,
        };
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_path(path)
            .map_err(csv_err)?;
        let mut arity = None;
        let mut data = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(csv_err)?;
            let expected = *arity.get_or_insert(record.len());
            if record.len() != expected {
                return Err(Error::RaggedRow {
                    path: path.to_owned(),
                    row: i + 1,
                    expected,
                    found: record.len(),
                });
            }
            data.extend(record.iter().map(|f| self.symbols.intern(f)));
        }
        match arity.or(arity_hint) {
            Some(0) | None => Err(Error::EmptyRelationFile(path.to_owned())),
            Some(a) => Ok(Relation::from_flat(a, data)),
        }
    }

    /// Writes every relation to `<dir>/<name>.csv`, rows in string order.
    pub fn write_csv_dir(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_owned(),
            source,
        })?;
        for name in self.relations.keys() {
            let path = dir.join(format!("{name}.csv"));
            let csv_err = |source| Error::Csv {
                path: path.clone(),
                source,
            };
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_path(&path)
                .map_err(csv_err)?;
            for row in self.string_rows(name).unwrap() {
                w.write_record(&row).map_err(csv_err)?;
            }
            w.flush().map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_flat_sorts_and_dedups() {
        let r = Relation::from_flat(2, [3, 1, 1, 2, 3, 1].map(Sym).to_vec());
        assert_eq!(r.len(), 2);
        assert_eq!(r.row(0), &[Sym(1), Sym(2)]);
        assert!(r.contains(&[Sym(3), Sym(1)]));
        assert!(!r.contains(&[Sym(1), Sym(3)]));
    }

    #[test]
    fn from_sorted_drops_adjacent_duplicates() {
        let r = Relation::from_sorted(1, [1, 1, 2, 5, 5, 5].map(Sym).to_vec());
        assert_eq!(r, Relation::from_flat(1, vec![Sym(5), Sym(2), Sym(1)]));
        let wide = Relation::from_sorted(2, [1, 2, 1, 2, 1, 3].map(Sym).to_vec());
        assert_eq!(wide.len(), 2);
    }

    #[test]
    fn nullary_relations() {
        assert!(Relation::unit().contains(&[]));
        assert!(!Relation::empty(0).contains(&[]));
        assert_eq!(Relation::unit().filter(|_| true).len(), 1);
        assert_eq!(Relation::unit().filter(|_| false).len(), 0);
    }

    #[test]
    fn load_dedups_and_infers_arity() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("R.csv"), "a,c\nc,a\na,c\n").unwrap();
        let db = Database::load(dir.path()).unwrap();
        let r = db.relation("R").unwrap();
        assert_eq!((r.arity(), r.len()), (2, 2));
        assert_eq!(db.string_rows("R").unwrap(), vec![vec!["a", "c"], vec!["c", "a"]]);
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("R.csv"), "a,b\na\n").unwrap();
        assert!(matches!(
            Database::load(dir.path()),
            Err(Error::RaggedRow {
                row: 2,
                expected: 2,
                found: 1,
                ..
            })
        ));
    }

    #[test]
    fn empty_file_names_the_file() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("S.csv"), "").unwrap();
        match Database::load(dir.path()) {
            Err(Error::EmptyRelationFile(p)) => assert!(p.ends_with("S.csv")),
            other => panic!("unexpected {other:?}"),
        }
        let hinted = Database::load_with_arities(dir.path(), &[("S", 3)].into()).unwrap();
        assert_eq!(hinted.relation("S").unwrap().arity(), 3);
    }

    #[test]
    fn single_file_and_write_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let mut db = Database::new();
        db.insert_rows("T", 3, [["x", "y, z", "w"], ["a", "b", "c"]]).unwrap();
        db.write_csv_dir(dir.path()).unwrap();
        let back = Database::load(dir.path().join("T.csv")).unwrap();
        assert_eq!(back.string_rows("T"), db.string_rows("T"));
    }
}
