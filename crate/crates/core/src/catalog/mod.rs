//! Bundled solution tables, intermediate families and expected invariants,
//! with loaders guarded by a SHA-256 manifest and the verification harness.

mod data;
mod expected;
mod verify;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::contraction::parse_pair;

pub use data::{parse_entries, BindingPattern, CatalogEntry, Source, Tag, TagRule};
pub use expected::{parse_expected, parse_relations, ExpectedRecord, Relation, Scope};
pub use verify::{
    generic_bindings, identify_contraction, match_fingerprint, pairwise_inequivalence, planted_controls, planted_copy,
    verify_catalog, verify_entry, verify_family, verify_relations, CatalogReport, CheckResult, EntryReport,
    FamilyReport, FieldDiff, PairwiseReport,
};

pub const DATA_ENV: &str = "LIECONTRACT_DATA";

pub const SOLUTIONS_FILE: &str = "solutions.txt";
pub const FAMILIES_FILE: &str = "families.txt";
pub const EXPECTED_FILE: &str = "expected.txt";
pub const RELATIONS_FILE: &str = "relations.txt";
pub const MANIFEST_FILE: &str = "MANIFEST.sha256";

const BUNDLED: [(&str, &str); 5] = [
    (SOLUTIONS_FILE, include_str!("../../data/solutions.txt")),
    (FAMILIES_FILE, include_str!("../../data/families.txt")),
    (EXPECTED_FILE, include_str!("../../data/expected.txt")),
    (RELATIONS_FILE, include_str!("../../data/relations.txt")),
    (MANIFEST_FILE, include_str!("../../data/MANIFEST.sha256")),
];

/// Pair sets whose H3 orbits give the non-equivalence systems S0..S3 used to
/// build the intermediate families.
pub const NONEQUIVALENCE_SEEDS: [&[&str]; 4] = [
    &["(01)(10)", "(22)(21)"],
    &["(01)(10)", "(10)(11)", "(01)(22)"],
    &["(01)(10)", "(10)(11)"],
    &["(01)(10)", "(02)(22)"],
];

pub fn nonequivalence_seed(k: usize) -> Vec<(usize, usize)> {
    NONEQUIVALENCE_SEEDS[k].iter().map(|p| parse_pair(3, p).expect("valid pair")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("{file}: checksum mismatch (expected {expected}, found {found})")]
    Checksum { file: String, expected: String, found: String },
    #[error("{file}: no manifest entry")]
    Unlisted { file: String },
    #[error("{file}, entry {entry}: {msg}")]
    Parse { file: String, entry: String, msg: String },
    #[error("{file}, entry {entry}: {msg}")]
    Validation { file: String, entry: String, msg: String },
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub solutions: Vec<CatalogEntry>,
    pub families: Vec<CatalogEntry>,
    pub expected: Vec<ExpectedRecord>,
    pub relations: Vec<Relation>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn check_manifest(manifest: &str, files: &[(&str, &str)]) -> Result<(), CatalogError> {
    let listed: BTreeMap<&str, &str> = manifest
        .lines()
        .filter_map(|l| {
            let mut it = l.split_whitespace();
            let hash = it.next()?;
            Some((it.next()?, hash))
        })
        .collect();
    for (name, text) in files {
        let expected = listed.get(name).ok_or_else(|| CatalogError::Unlisted { file: name.to_string() })?;
        let found = sha256_hex(text.as_bytes());
        if *expected != found {
            return Err(CatalogError::Checksum { file: name.to_string(), expected: expected.to_string(), found });
        }
    }
    Ok(())
}

impl Catalog {
    fn from_texts(texts: &[(&str, &str)], manifest: &str) -> Result<Catalog, CatalogError> {
        check_manifest(manifest, texts)?;
        let get = |name: &str| texts.iter().find(|(n, _)| *n == name).map(|(_, t)| *t).expect("file present");
        Ok(Catalog {
            solutions: parse_entries(SOLUTIONS_FILE, get(SOLUTIONS_FILE), false)?,
            families: parse_entries(FAMILIES_FILE, get(FAMILIES_FILE), true)?,
            expected: parse_expected(EXPECTED_FILE, get(EXPECTED_FILE))?,
            relations: parse_relations(RELATIONS_FILE, get(RELATIONS_FILE))?,
        })
    }

    /// The data compiled into the library.
    pub fn bundled() -> Result<Catalog, CatalogError> {
        Catalog::from_texts(&BUNDLED[..4], BUNDLED[4].1)
    }

    /// Loads the data files from a directory containing the manifest.
    pub fn load(dir: &Path) -> Result<Catalog, CatalogError> {
        let read = |name: &str| {
            let path = dir.join(name);
            std::fs::read_to_string(&path).map_err(|e| CatalogError::Io { path: path.display().to_string(), msg: e.to_string() })
        };
        let manifest = read(MANIFEST_FILE)?;
        let owned = [SOLUTIONS_FILE, FAMILIES_FILE, EXPECTED_FILE, RELATIONS_FILE]
            .iter()
            .map(|n| read(n).map(|t| (*n, t)))
            .collect::<Result<Vec<_>, _>>()?;
        let texts: Vec<(&str, &str)> = owned.iter().map(|(n, t)| (*n, t.as_str())).collect();
        Catalog::from_texts(&texts, &manifest)
    }

    /// The directory named by `LIECONTRACT_DATA`, or the bundled data.
    pub fn from_env() -> Result<Catalog, CatalogError> {
        match std::env::var_os(DATA_ENV) {
            Some(dir) => Catalog::load(&PathBuf::from(dir)),
            None => Catalog::bundled(),
        }
    }

    pub fn solution(&self, id: &str) -> Option<&CatalogEntry> {
        self.solutions.iter().find(|e| e.id == id)
    }

    pub fn family(&self, id: &str) -> Option<&CatalogEntry> {
        self.families.iter().find(|e| e.id == id)
    }

    /// Looks up a solution or family by id.
    pub fn entry(&self, id: &str) -> Option<&CatalogEntry> {
        self.solution(id).or_else(|| self.family(id))
    }

    /// Number of solutions per zero count.
    pub fn histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for e in &self.solutions {
            *h.entry(e.nu.expect("solutions carry nu")).or_insert(0) += 1;
        }
        h
    }

    /// Records for the algebra of one solution, at any binding.
    pub fn expected_for<'a>(&'a self, algebra: &'a str) -> impl Iterator<Item = &'a ExpectedRecord> + 'a {
        self.expected.iter().filter(move |r| r.algebra == algebra)
    }

    /// Dimension of a named algebra as recorded in the expected table.
    pub fn recorded_dim(&self, algebra: &str) -> Option<usize> {
        self.expected.iter().find(|r| r.algebra == algebra && r.scope == Scope::Algebra).map(|r| r.dim())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_rejects_edits() {
        let manifest = format!("{}  a.txt\n", sha256_hex(b"hello"));
        assert!(check_manifest(&manifest, &[("a.txt", "hello")]).is_ok());
        assert!(matches!(check_manifest(&manifest, &[("a.txt", "hellO")]), Err(CatalogError::Checksum { .. })));
        assert!(matches!(check_manifest(&manifest, &[("b.txt", "x")]), Err(CatalogError::Unlisted { .. })));
    }
}
