mod common;

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use common::*;
use liecontract::catalog::*;
use liecontract::contraction::{relevant_pairs, Context};
use liecontract::cyclo::Cyclo;

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

/// A private copy of the bundled data directory.
fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("liecontract-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    for f in [SOLUTIONS_FILE, FAMILIES_FILE, EXPECTED_FILE, RELATIONS_FILE, MANIFEST_FILE] {
        fs::copy(data_dir().join(f), dir.join(f)).unwrap();
    }
    dir
}

#[test]
fn bundled_contents() {
    let cat = catalog();
    assert_eq!(cat.solutions.len(), 188);
    assert_eq!(cat.families.len(), 20);
    assert_eq!(cat.relations.len(), 33);
    let ids: BTreeSet<&str> = cat.solutions.iter().chain(&cat.families).map(|e| e.id.as_str()).collect();
    assert_eq!(ids.len(), 208);
    let parametric = cat.solutions.iter().filter(|e| e.is_parametric()).count();
    assert_eq!(parametric, 13);
    assert!(cat.entry("fam_1").is_some() && cat.entry("eps_0_1").is_some() && cat.entry("eps_99_1").is_none());
}

#[test]
fn zero_counts_match_nu() {
    // ν counts relevant pairs whose entry vanishes.
    for e in &catalog().solutions {
        let m = instantiate(e, 0);
        let zeros = relevant_pairs(3).into_iter().filter(|&(i, j)| m.get(i, j).is_zero()).count();
        assert_eq!(Some(zeros), e.nu, "{}", e.id);
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(m.get(i, j), m.get(j, i), "{} is not symmetric", e.id);
            }
        }
    }
}

#[test]
fn histogram() {
    let h: Vec<(usize, usize)> = catalog().histogram().into_iter().collect();
    assert_eq!(
        h,
        [(0, 1), (9, 1), (12, 2), (15, 7), (16, 7), (17, 17), (18, 36), (19, 45), (20, 42), (21, 21), (22, 7), (23, 1), (24, 1)]
    );
}

#[test]
fn sha256_known_vectors() {
    assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

#[test]
fn manifest_lists_every_file() {
    let manifest = fs::read_to_string(data_dir().join(MANIFEST_FILE)).unwrap();
    for f in [SOLUTIONS_FILE, FAMILIES_FILE, EXPECTED_FILE, RELATIONS_FILE] {
        let hash = sha256_hex(&fs::read(data_dir().join(f)).unwrap());
        assert!(manifest.lines().any(|l| l.split_whitespace().eq([hash.as_str(), f])), "{f}");
    }
}

#[test]
fn loading_from_a_directory() {
    let dir = scratch("load");
    let cat = Catalog::load(&dir).unwrap();
    assert_eq!(cat.solutions, catalog().solutions);

    let path = dir.join(SOLUTIONS_FILE);
    let text = fs::read_to_string(&path).unwrap();
    fs::write(&path, text.replacen("nu=9", "nu=9 ", 1)).unwrap();
    assert!(matches!(Catalog::load(&dir), Err(CatalogError::Checksum { file, .. }) if file == SOLUTIONS_FILE));

    fs::write(&path, &text).unwrap();
    let manifest = fs::read_to_string(dir.join(MANIFEST_FILE)).unwrap();
    let trimmed: String = manifest.lines().filter(|l| !l.ends_with(RELATIONS_FILE)).map(|l| format!("{l}\n")).collect();
    fs::write(dir.join(MANIFEST_FILE), trimmed).unwrap();
    assert!(matches!(Catalog::load(&dir), Err(CatalogError::Unlisted { file }) if file == RELATIONS_FILE));

    fs::remove_file(dir.join(MANIFEST_FILE)).unwrap();
    assert!(matches!(Catalog::load(&dir), Err(CatalogError::Io { .. })));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn environment_override() {
    // The only test in this binary that touches the environment.
    let dir = scratch("env");
    std::env::set_var(DATA_ENV, &dir);
    assert_eq!(Catalog::from_env().unwrap().solutions.len(), 188);
    fs::write(dir.join(FAMILIES_FILE), "").unwrap();
    assert!(matches!(Catalog::from_env(), Err(CatalogError::Checksum { .. })));
    std::env::set_var(DATA_ENV, dir.join("missing"));
    assert!(matches!(Catalog::from_env(), Err(CatalogError::Io { .. })));
    std::env::remove_var(DATA_ENV);
    assert!(Catalog::from_env().is_ok());
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn malformed_entries_are_rejected() {
    let block = |header: &str| format!("{header}\n. . 1\n");
    let ok = "id=x\nnu=0\ntag=C\nparams=\n";
    assert!(parse_entries("t", &block(ok), false).is_err(), "wrong size");
    let rows = ". . . . . . . .\n".repeat(8);
    let whole = |header: &str| format!("{header}\n{rows}");
    let err = parse_entries("t", &whole("nu=24\ntag=C"), false).unwrap_err();
    assert!(err.to_string().contains("without id"));
    let twice = format!("{}\n\n{}", whole("id=a\nnu=24\ntag=C"), whole("id=a\nnu=24\ntag=C"));
    assert!(parse_entries("t", &twice, false).unwrap_err().to_string().contains("duplicate"));
    assert!(parse_entries("t", &whole("id=a\nnu=3\ntag=C"), false).is_err());
    assert!(parse_entries("t", &whole("id=a\nnu=24\ntag=Q"), false).is_err());
    assert!(parse_entries("t", &whole("id=a\nnu=24\ntag=mixed"), false).is_err());
    assert!(parse_entries("t", &whole("id=a\nsystems=0"), true).is_err(), "family without stage");
}

#[test]
fn tag_rules() {
    let cat = catalog();
    let rule = cat.solution("eps_16_1").unwrap().tag.clone().unwrap();
    assert_eq!(rule.resolve(&bindings(&[('a', 1)])), Some(Tag::C));
    assert_eq!(rule.resolve(&bindings(&[('a', 2)])), Some(Tag::D));
    assert_eq!(cat.solution("eps_9_1").unwrap().tag, Some(TagRule::Fixed(Tag::C)));
}

#[test]
fn generic_bindings_are_seeded_and_avoid_special_values() {
    let cat = catalog();
    let e = cat.solution("eps_16_1").unwrap();
    let a = generic_bindings(e, 11, 3);
    assert_eq!(a, generic_bindings(e, 11, 3));
    assert_ne!(a, generic_bindings(e, 12, 3));
    let special: Vec<Cyclo> = vec![int(0), int(1), int(-1)];
    for b in &a {
        assert_eq!(b.len(), e.matrix.params().len());
        assert!(b.values().all(|v| !special.contains(v)), "{b:?}");
    }
    assert!(generic_bindings(cat.solution("eps_9_1").unwrap(), 1, 2).iter().all(HashMap::is_empty));
}

#[test]
fn expected_records_parse() {
    let cat = catalog();
    assert!(!cat.expected.is_empty());
    let generic: HashMap<char, Cyclo> = "abcdef".chars().zip([2, 3, 5, 7, 11, 13]).map(|(c, v)| (c, int(v))).collect();
    for r in &cat.expected {
        let id = r.solution_id().unwrap();
        assert!(cat.solution(&id).is_some(), "{} has no solution", r.algebra);
        if let Some(alg) = r.algebra(&generic) {
            let alg = alg.unwrap();
            assert!(alg.is_lie(), "{}", r.algebra);
            assert_eq!(alg.dim(), r.dim(), "{}", r.algebra);
        }
        assert!(r.casimir_polys(&generic).is_ok(), "{}", r.algebra);
    }
    assert_eq!(cat.recorded_dim("L'21,9"), Some(4));
    assert!(parse_expected("t", "algebra=L1,1 ds=x").is_err());
}

#[test]
fn entry_reports_are_reproducible() {
    let cat = catalog();
    let ctx = Context::new();
    for id in ["eps_23_1", "eps_12_2", "eps_17_6"] {
        let e = cat.solution(id).unwrap();
        let a = verify_entry(e, &cat, &ctx, 5, &LIGHT);
        let b = verify_entry(e, &cat, &ctx, 5, &LIGHT);
        assert!(a.passed(), "{}", a.render(false));
        assert_eq!(a.render(false), b.render(false));
    }
}

#[test]
fn planted_copies_are_found() {
    let cat = catalog();
    let ctx = Context::new();
    let some: Vec<CatalogEntry> = cat.solutions.iter().step_by(17).cloned().collect();
    assert!(planted_controls(&some, &ctx, 3).iter().all(|c| c.passed));
    let rep = pairwise_inequivalence(&some, &ctx, 3);
    assert!(rep.equivalent_pairs.is_empty() && rep.errors.is_empty());
}

#[test]
fn relations_hold() {
    let cat = catalog();
    let checks = verify_relations(&cat, 7, &LIGHT);
    assert_eq!(checks.len(), 33);
    for c in &checks {
        assert!(c.passed, "{}: {}", c.name, c.detail);
    }
}
