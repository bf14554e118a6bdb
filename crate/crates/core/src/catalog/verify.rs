use std::collections::HashMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::contraction::{
    act_on_matrix, apply_normalization, build_nonequivalence_system, ones_matrix, satisfies_nonequivalence, Context, Continuity,
    Equivalence,
};
use crate::cyclo::{Cyclo, Rational};
use crate::identify::{
    decompose, derivation_algebra, fingerprint_with, nilradical, split_central, verify_casimir, Fingerprint,
    FingerprintOptions,
};
use crate::liecore::LieAlgebra;
use crate::linalg::Matrix;
use crate::symmetry::{enumerate_group, permutation_of};

use super::data::{CatalogEntry, Source, Tag, TagRule};
use super::expected::{ExpectedRecord, Relation, Scope};
use super::{nonequivalence_seed, Catalog};

/// Seeded nonzero rationals p/q with |p| ≤ 24, 1 ≤ q ≤ 9, avoiding ±1 and
/// every value named by a special binding of the entry's tag rule.
pub fn generic_bindings(entry: &CatalogEntry, seed: u64, count: usize) -> Vec<HashMap<char, Cyclo>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv(&entry.id));
    let avoid: Vec<Cyclo> = entry
        .tag
        .iter()
        .flat_map(TagRule::special_bindings)
        .flat_map(|(b, _)| b.into_values())
        .collect();
    (0..count)
        .map(|_| {
            entry
                .matrix
                .params()
                .iter()
                .map(|&p| loop {
                    let num: i64 = rng.gen_range(-24..=24);
                    let den: i64 = rng.gen_range(1..=9);
                    let q = Rational::new(num.into(), den.into());
                    let v = Cyclo::from_rational(3, q.clone());
                    let unit = q == Rational::from_integer(1.into()) || q == Rational::from_integer((-1).into());
                    if num != 0 && !unit && !avoid.contains(&v) {
                        break (p, v);
                    }
                })
                .collect()
        })
        .collect()
}

/// FNV-1a, used to derive per-entry streams from one seed.
fn fnv(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> CheckResult {
        CheckResult { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldDiff {
    pub field: &'static str,
    pub expected: String,
    pub found: String,
}

fn list(v: &[usize]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Field-by-field comparison; fields absent from the record are skipped.
/// Derivation-scope records are compared against the fingerprint of Der(L),
/// with the record's tower read as (dim Der, dim Der², ...).
pub fn match_fingerprint(fp: &Fingerprint, record: &ExpectedRecord) -> Vec<FieldDiff> {
    let mut diffs = Vec::new();
    let mut cmp = |field: &'static str, expected: String, found: String| {
        if expected != found {
            diffs.push(FieldDiff { field, expected, found });
        }
    };
    cmp("ds", list(&record.derived), list(&fp.derived_dims));
    cmp("lcs", list(&record.lower_central), list(&fp.lower_central_dims));
    cmp("ucs", list(&record.upper_central), list(&fp.upper_central_dims));
    if let Some(t) = record.tau_value() {
        cmp("tau", t.to_string(), fp.tau.to_string());
    }
    match record.scope {
        Scope::Algebra => {
            if let Some(d) = record.dim_der {
                cmp("der", d.to_string(), fp.dim_der.to_string());
            }
            if let Some(t) = &record.tower {
                cmp("tower", list(t), list(&fp.der_tower));
            }
        }
        Scope::Derivations => {
            if let Some(t) = &record.tower {
                let mut tower = vec![fp.dim];
                for &d in &fp.der_tower {
                    if d == *tower.last().expect("nonempty") {
                        break;
                    }
                    tower.push(d);
                }
                tower.truncate(t.len().max(1));
                cmp("tower", list(t), list(&tower));
            }
        }
    }
    diffs
}

fn render_diffs(d: &[FieldDiff]) -> String {
    d.iter().map(|x| format!("{} expected {} found {}", x.field, x.expected, x.found)).collect::<Vec<_>>().join("; ")
}

fn render_bindings(b: &HashMap<char, Cyclo>) -> String {
    let mut v: Vec<_> = b.iter().collect();
    v.sort_by_key(|(k, _)| **k);
    v.iter().map(|(k, x)| format!("{k}={x}")).collect::<Vec<_>>().join(",")
}

#[derive(Clone, Debug)]
pub struct EntryReport {
    pub id: String,
    pub checks: Vec<CheckResult>,
    pub continuity: Vec<(String, Continuity)>,
    pub central_dim: Option<usize>,
    pub parts: Vec<Fingerprint>,
    pub undetermined: bool,
    pub elapsed: Duration,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render(&self, timing: bool) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "entry {}", self.id);
        let _ = writeln!(s, "  status: {}", if self.passed() { "pass" } else { "FAIL" });
        if timing {
            let _ = writeln!(s, "  time: {:.3}s", self.elapsed.as_secs_f64());
        }
        for c in &self.checks {
            let _ = writeln!(s, "  {}: {}{}", c.name, if c.passed { "pass" } else { "FAIL" }, if c.detail.is_empty() { String::new() } else { format!(" ({})", c.detail) });
        }
        for (b, v) in &self.continuity {
            let witness = match v {
                Continuity::Continuous { weights } => format!("weights {weights:?}"),
                Continuity::Discrete { identity } => format!("violates {identity}"),
                Continuity::Unknown { reason } => reason.clone(),
            };
            let at = if b.is_empty() { String::new() } else { format!(" at {b}") };
            let _ = writeln!(s, "  verdict{at}: {} [{witness}]", v.tag());
        }
        if let Some(c) = self.central_dim {
            let _ = writeln!(s, "  central summand: {c}");
        }
        for (k, fp) in self.parts.iter().enumerate() {
            let _ = writeln!(s, "  part {}: {fp}", k + 1);
        }
        if self.undetermined {
            let _ = writeln!(s, "  decomposition: undetermined");
        }
        s
    }
}

/// The contracted algebra, its central split and the fingerprints of the
/// indecomposable parts of the core.
pub fn identify_contraction(eps: &Matrix, opts: &FingerprintOptions) -> (usize, Vec<(LieAlgebra, Fingerprint)>, bool) {
    let alg = LieAlgebra::pauli(3).expect("order 3").apply_contraction(eps).expect("8x8");
    let split = split_central(&alg);
    let dec = decompose(&split.core);
    let parts = dec
        .parts
        .into_iter()
        .filter(|p| p.dim() > 0)
        .map(|p| {
            let fp = fingerprint_with(&p, opts);
            (p, fp)
        })
        .collect();
    (split.abelian_dim, parts, dec.undetermined)
}

/// Solution check, continuity tag and fingerprint comparison for one entry.
pub fn verify_entry(
    entry: &CatalogEntry,
    catalog: &Catalog,
    ctx: &Context,
    seed: u64,
    opts: &FingerprintOptions,
) -> EntryReport {
    let start = Instant::now();
    let mut checks = Vec::new();
    let mut continuity = Vec::new();
    let instantiations: Vec<HashMap<char, Cyclo>> =
        if entry.is_parametric() { generic_bindings(entry, seed, 3) } else { vec![HashMap::new()] };
    let mut mats = Vec::new();
    let mut sol_ok = true;
    let mut sol_detail = format!("{} instantiation(s)", instantiations.len());
    for b in &instantiations {
        match entry.matrix.instantiate(b).map_err(|e| e.to_string()).and_then(|m| ctx.check(&m).map(|_| m).map_err(|e| e.to_string())) {
            Ok(m) => mats.push((b.clone(), m)),
            Err(e) => {
                sol_ok = false;
                sol_detail = format!("at {}: {e}", render_bindings(b));
            }
        }
    }
    checks.push(CheckResult::new("solution", sol_ok, sol_detail));

    if let Some(rule) = &entry.tag {
        let mut cases: Vec<(HashMap<char, Cyclo>, Option<Tag>, Option<Matrix>)> =
            mats.iter().map(|(b, m)| (b.clone(), rule.resolve(b), Some(m.clone()))).collect();
        for (b, t) in rule.special_bindings() {
            let m = entry.matrix.instantiate(&b).ok();
            cases.push((b, Some(t), m));
        }
        let mut ok = true;
        let mut detail = Vec::new();
        for (b, want, m) in cases {
            let Some(m) = m else {
                ok = false;
                detail.push(format!("cannot instantiate at {}", render_bindings(&b)));
                continue;
            };
            let verdict = match ctx.classify(&m) {
                Ok(v) => v,
                Err(e) => Continuity::Unknown { reason: e.to_string() },
            };
            let got = verdict.tag();
            let want = want.map_or("?", Tag::as_str);
            if got != want {
                ok = false;
                detail.push(format!("expected {want} found {got} at {}", render_bindings(&b)));
            }
            continuity.push((render_bindings(&b), verdict));
        }
        checks.push(CheckResult::new("continuity", ok, detail.join("; ")));
    }

    let mut central_dim = None;
    let mut parts = Vec::new();
    let mut undetermined = false;
    if let (Some((nu, i)), Some((generic, m))) = (entry.index(), mats.first()) {
        let (c, ps, und) = identify_contraction(m, opts);
        central_dim = Some(c);
        undetermined = und;
        let names = [format!("L{nu},{i}"), format!("L'{nu},{i}")];
        let verdict = continuity.first().map(|(_, v)| v.tag());
        for r in catalog.expected.iter().filter(|r| names.contains(&r.algebra)) {
            if let (None, Scope::Algebra, Some(want), Some(got)) = (&r.bind, r.scope, r.tag, verdict) {
                checks.push(CheckResult::new(
                    format!("tag vs {}", r.algebra),
                    want.as_str() == got,
                    if want.as_str() == got { String::new() } else { format!("expected {} found {got}", want.as_str()) },
                ));
            }
            checks.extend(record_checks(r, &ps, generic, catalog, opts));
        }
        parts = ps.into_iter().map(|(_, fp)| fp).collect();
    }
    EntryReport { id: entry.id.clone(), checks, continuity, central_dim, parts, undetermined, elapsed: start.elapsed() }
}

fn record_label(r: &ExpectedRecord) -> String {
    let mut s = r.algebra.clone();
    if let Some(b) = &r.bind {
        let b: Vec<String> = b.iter().map(|(k, x)| format!("{k}={x}")).collect();
        s = format!("{s}[{}]", b.join(","));
    }
    if r.scope == Scope::Derivations {
        s.push_str(" der");
    }
    s
}

/// Turns fingerprint differences into a check, accepting exactly the
/// differences the record declares as known conflicts.
fn settle(name: String, diffs: &[FieldDiff], r: &ExpectedRecord) -> CheckResult {
    let declared: Vec<&str> = r
        .conflicts
        .iter()
        .map(String::as_str)
        .filter(|c| ["ds", "lcs", "ucs", "tau", "der", "tower"].contains(c))
        .collect();
    let (known, other): (Vec<&FieldDiff>, Vec<&FieldDiff>) = diffs.iter().partition(|d| declared.contains(&d.field));
    if !other.is_empty() {
        let other: Vec<FieldDiff> = other.into_iter().cloned().collect();
        return CheckResult::new(name, false, render_diffs(&other));
    }
    if known.len() < declared.len() {
        return CheckResult::new(name, false, format!("declared conflict {} not reproduced", declared.join(",")));
    }
    let known: Vec<FieldDiff> = known.into_iter().cloned().collect();
    let detail = if known.is_empty() { String::new() } else { format!("known conflict: {}", render_diffs(&known)) };
    CheckResult::new(name, true, detail)
}

/// Checks one expected record against the computed core and against the
/// algebra given by its own brackets.
fn record_checks(
    r: &ExpectedRecord,
    computed: &[(LieAlgebra, Fingerprint)],
    generic: &HashMap<char, Cyclo>,
    catalog: &Catalog,
    opts: &FingerprintOptions,
) -> Vec<CheckResult> {
    let label = record_label(r);
    let mut out = Vec::new();
    let fp_of = |alg: &LieAlgebra| match r.scope {
        Scope::Algebra => fingerprint_with(alg, opts),
        Scope::Derivations => fingerprint_with(&derivation_algebra(alg).as_lie, opts),
    };
    if r.bind.is_none() {
        let name = format!("computed vs {label}");
        if computed.len() == 1 {
            let (alg, fp) = &computed[0];
            let diffs = match r.scope {
                Scope::Algebra => match_fingerprint(fp, r),
                Scope::Derivations => match_fingerprint(&fp_of(alg), r),
            };
            out.push(settle(name, &diffs, r));
            if let (Scope::Algebra, Some(want)) = (r.scope, r.nilradical_dim(|a| catalog.recorded_dim(a))) {
                let nil = nilradical(alg);
                let got = nil.space.dim();
                out.push(CheckResult::new(
                    format!("nilradical vs {label}"),
                    nil.verified && got == want,
                    format!("expected dim {want} found {got}{}", if nil.verified { "" } else { " (unverified)" }),
                ));
            }
        } else {
            out.push(CheckResult::new(name, false, format!("core splits into {} parts", computed.len())));
        }
    }
    let Some(alg) = r.algebra(generic) else { return out };
    let alg = match alg {
        Ok(a) => a,
        Err(e) => {
            out.push(CheckResult::new(format!("{label} brackets"), false, e.to_string()));
            return out;
        }
    };
    out.push(settle(format!("{label} brackets"), &match_fingerprint(&fp_of(&alg), r), r));
    if r.scope == Scope::Algebra && !r.casimirs.is_empty() {
        let name = format!("{label} casimirs");
        match r.casimir_polys(generic) {
            Err(e) => out.push(CheckResult::new(name, false, e.to_string())),
            Ok(polys) => {
                let mut bad = Vec::new();
                let mut known = Vec::new();
                for (k, f) in polys.iter().enumerate() {
                    let tag = format!("casimir{}", k + 1);
                    let holds = verify_casimir(&alg, f).is_ok();
                    match (holds, r.conflicts.contains(&tag)) {
                        (true, false) => {}
                        (false, true) => known.push(tag),
                        (false, false) => bad.push(format!("{tag} fails")),
                        (true, true) => bad.push(format!("declared conflict {tag} not reproduced")),
                    }
                }
                let detail = if bad.is_empty() && !known.is_empty() {
                    format!("known conflict: {} fails", known.join(","))
                } else {
                    bad.join("; ")
                };
                out.push(CheckResult::new(name, bad.is_empty(), detail));
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct FamilyReport {
    pub id: String,
    pub checks: Vec<CheckResult>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// A family solves the system and the non-equivalence systems it lists, at
/// generic instantiations.
pub fn verify_family(entry: &CatalogEntry, ctx: &Context, seed: u64) -> FamilyReport {
    let Source::Family { systems, .. } = &entry.source else {
        return FamilyReport { id: entry.id.clone(), checks: vec![CheckResult::new("source", false, "not a family")] };
    };
    let mut checks = Vec::new();
    let nes: Vec<(usize, Vec<Vec<(usize, usize)>>)> =
        systems.iter().map(|&k| (k, build_nonequivalence_system(&nonequivalence_seed(k)))).collect();
    for (t, b) in generic_bindings(entry, seed, 3).into_iter().enumerate() {
        let name = format!("instantiation {}", t + 1);
        match entry.matrix.instantiate(&b) {
            Err(e) => checks.push(CheckResult::new(name, false, e.to_string())),
            Ok(m) => {
                let mut fails: Vec<String> = Vec::new();
                if let Err(e) = ctx.check(&m) {
                    fails.push(e.to_string());
                }
                for (k, s) in &nes {
                    if !satisfies_nonequivalence(&m, s) {
                        fails.push(format!("violates S{k}"));
                    }
                }
                checks.push(CheckResult::new(name, fails.is_empty(), fails.join("; ")));
            }
        }
    }
    if entry.matrix.zero_count() == 0 {
        let ones: HashMap<char, Cyclo> = entry.matrix.params().iter().map(|&p| (p, Cyclo::one(3))).collect();
        let check = match entry.matrix.instantiate(&ones) {
            Err(e) => CheckResult::new("ones equivalent to all-ones", false, e.to_string()),
            Ok(m) => match ctx.equivalent(&m, &ones_matrix()) {
                Ok(Equivalence::Equivalent { element: g, .. }) => {
                    CheckResult::new("ones equivalent to all-ones", true, format!("element ({},{},{},{})", g.a, g.b, g.c, g.d))
                }
                Ok(Equivalence::NotEquivalent) => CheckResult::new("ones equivalent to all-ones", false, "not equivalent"),
                Err(e) => CheckResult::new("ones equivalent to all-ones", false, e.to_string()),
            },
        };
        checks.push(check);
    }
    FamilyReport { id: entry.id.clone(), checks }
}

#[derive(Clone, Debug, Default)]
pub struct PairwiseReport {
    pub pairs_checked: usize,
    /// Same-ν pairs found equivalent, with the group element (a, b, c, d).
    pub equivalent_pairs: Vec<(String, String, [u32; 4])>,
    pub errors: Vec<(String, String, String)>,
}

/// Runs `equivalent` over all same-ν pairs of solutions at generic bindings.
pub fn pairwise_inequivalence(entries: &[CatalogEntry], ctx: &Context, seed: u64) -> PairwiseReport {
    let inst: Vec<(String, usize, Matrix)> = entries
        .iter()
        .filter_map(|e| {
            let b = generic_bindings(e, seed, 1).pop().unwrap_or_default();
            let m = e.matrix.instantiate(&b).ok()?;
            Some((e.id.clone(), e.nu?, m))
        })
        .collect();
    let mut jobs = Vec::new();
    for a in 0..inst.len() {
        for b in a + 1..inst.len() {
            if inst[a].1 == inst[b].1 {
                jobs.push((a, b));
            }
        }
    }
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(a, b)| (a, b, ctx.equivalent(&inst[a].2, &inst[b].2)))
        .collect();
    let mut rep = PairwiseReport { pairs_checked: jobs.len(), ..Default::default() };
    for (a, b, r) in results {
        let (x, y) = (inst[a].0.clone(), inst[b].0.clone());
        match r {
            Ok(Equivalence::Equivalent { element: g, .. }) => rep.equivalent_pairs.push((x, y, [g.a, g.b, g.c, g.d])),
            Ok(Equivalence::NotEquivalent) => {}
            Err(e) => rep.errors.push((x, y, e.to_string())),
        }
    }
    rep
}

/// A random group element and random nonzero scalings applied to `m`.
pub fn planted_copy(m: &Matrix, rng: &mut impl Rng) -> Matrix {
    let group = enumerate_group(3, false);
    let g = group[rng.gen_range(0..group.len())];
    let moved = act_on_matrix(m, &permutation_of(&g));
    let a: Vec<Cyclo> = (0..8)
        .map(|_| loop {
            let c = Cyclo::new(3, vec![Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into()), Rational::from_integer(rng.gen_range(-3i64..=3).into())]).expect("order 3");
            if !c.is_zero() {
                break c;
            }
        })
        .collect();
    apply_normalization(&moved, &a)
}

/// Planted positive controls: each solution against a random group element
/// and random scalings of itself. The copy must solve the system and be
/// found equivalent.
pub fn planted_controls(entries: &[CatalogEntry], ctx: &Context, seed: u64) -> Vec<CheckResult> {
    entries
        .par_iter()
        .map(|e| {
            let name = format!("planted {}", e.id);
            let b = generic_bindings(e, seed, 1).pop().unwrap_or_default();
            let m = match e.matrix.instantiate(&b) {
                Ok(m) => m,
                Err(err) => return CheckResult::new(name, false, err.to_string()),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv(&e.id) ^ 0x5bd1_e995);
            let copy = planted_copy(&m, &mut rng);
            if let Err(err) = ctx.check(&copy) {
                return CheckResult::new(name, false, format!("copy is not a solution: {err}"));
            }
            match ctx.equivalent(&m, &copy) {
                Ok(Equivalence::Equivalent { element: g, .. }) => {
                    CheckResult::new(name, true, format!("element ({},{},{},{})", g.a, g.b, g.c, g.d))
                }
                Ok(Equivalence::NotEquivalent) => CheckResult::new(name, false, "not found equivalent"),
                Err(err) => CheckResult::new(name, false, err.to_string()),
            }
        })
        .collect()
}

/// Central dimension (zero for primed names) and part fingerprints, sorted.
type Signature = (usize, Vec<Fingerprint>);

fn signature(catalog: &Catalog, name: &str, bind: Option<&[(char, Cyclo)]>, seed: u64, opts: &FingerprintOptions) -> Result<Signature, String> {
    let primed = name.starts_with("L'");
    let id = name.trim_start_matches("L'").trim_start_matches('L');
    let (nu, i) = id.split_once(',').ok_or_else(|| format!("bad algebra name {name}"))?;
    let entry = catalog.solution(&format!("eps_{nu}_{i}")).ok_or_else(|| format!("no solution for {name}"))?;
    let mut b = generic_bindings(entry, seed, 1).pop().unwrap_or_default();
    let m = match bind {
        None => entry.matrix.instantiate(&b),
        Some(bind) => {
            b.extend(bind.iter().cloned());
            entry.matrix.instantiate_boundary(&b)
        }
    }
    .map_err(|e| format!("{name}: {e}"))?;
    let (c, parts, und) = identify_contraction(&m, opts);
    if und {
        return Err(format!("{name}: decomposition undetermined"));
    }
    let mut fps: Vec<Fingerprint> = parts.into_iter().map(|(_, fp)| fp).collect();
    fps.sort_by_key(|f| f.to_string());
    Ok((if primed { 0 } else { c }, fps))
}

/// Decomposition, isomorphism and boundary relations checked on fingerprints.
pub fn verify_relations(catalog: &Catalog, seed: u64, opts: &FingerprintOptions) -> Vec<CheckResult> {
    catalog
        .relations
        .par_iter()
        .map(|rel| {
            let name = rel.to_string();
            let sig = |n: &str, b: Option<&[(char, Cyclo)]>| signature(catalog, n, b, seed, opts);
            let result: Result<(), String> = (|| match rel {
                Relation::Decomposition { algebra, parts } => {
                    let (c, got) = sig(algebra, None)?;
                    let mut want = Vec::new();
                    for p in parts {
                        want.extend(sig(p, None)?.1);
                    }
                    want.sort_by_key(|f| f.to_string());
                    if c != 0 || got != want {
                        return Err(format!("found {} parts with central dim {c}", got.len()));
                    }
                    Ok(())
                }
                Relation::Isomorphism { members } => {
                    let first = sig(&members[0], None)?;
                    for m in &members[1..] {
                        if sig(m, None)? != first {
                            return Err(format!("{} and {m} differ", members[0]));
                        }
                    }
                    Ok(())
                }
                Relation::Extension { algebra, bind, target, target_bind } => {
                    let a = sig(algebra, Some(bind))?;
                    let tb = (!target_bind.is_empty()).then_some(target_bind.as_slice());
                    let t = sig(target, tb)?;
                    if a != t {
                        return Err("fingerprints differ".into());
                    }
                    Ok(())
                }
            })();
            match result {
                Ok(()) => CheckResult::new(name, true, ""),
                Err(e) => CheckResult::new(name, false, e),
            }
        })
        .collect()
}

/// Every check of the bundled catalog.
#[derive(Clone, Debug)]
pub struct CatalogReport {
    pub seed: u64,
    pub entries: Vec<EntryReport>,
    pub families: Vec<FamilyReport>,
    pub planted: Vec<CheckResult>,
    pub pairwise: PairwiseReport,
    pub relations: Vec<CheckResult>,
    pub histogram: std::collections::BTreeMap<usize, usize>,
}

pub fn verify_catalog(catalog: &Catalog, ctx: &Context, seed: u64, opts: &FingerprintOptions) -> CatalogReport {
    let mut entries: Vec<EntryReport> =
        catalog.solutions.par_iter().map(|e| verify_entry(e, catalog, ctx, seed, opts)).collect();
    entries.sort_by(|a, b| id_key(&a.id).cmp(&id_key(&b.id)));
    let families = catalog.families.par_iter().map(|f| verify_family(f, ctx, seed)).collect();
    CatalogReport {
        seed,
        entries,
        families,
        planted: planted_controls(&catalog.solutions, ctx, seed),
        pairwise: pairwise_inequivalence(&catalog.solutions, ctx, seed),
        relations: verify_relations(catalog, seed, opts),
        histogram: catalog.histogram(),
    }
}

/// Numeric sort key for ids such as `eps_17_6`.
fn id_key(id: &str) -> (String, Vec<usize>) {
    let nums = id.split('_').filter_map(|p| p.parse().ok()).collect();
    (id.split('_').next().unwrap_or("").to_string(), nums)
}

impl CatalogReport {
    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| !e.passed()).count()
            + self.families.iter().filter(|f| !f.passed()).count()
            + self.planted.iter().filter(|c| !c.passed).count()
            + self.pairwise.equivalent_pairs.len()
            + self.pairwise.errors.len()
            + self.relations.iter().filter(|c| !c.passed).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn summary(&self) -> String {
        let count = |v: &[CheckResult]| v.iter().filter(|c| c.passed).count();
        let mut s = String::new();
        let ok_entries = self.entries.iter().filter(|e| e.passed()).count();
        let ok_solution = self.entries.iter().filter(|e| e.check("solution").is_some_and(|c| c.passed)).count();
        let unknown = self
            .entries
            .iter()
            .flat_map(|e| &e.continuity)
            .filter(|(_, v)| matches!(v, Continuity::Unknown { .. }))
            .count();
        let _ = writeln!(s, "seed: {}", self.seed);
        let _ = writeln!(s, "solutions: {ok_solution}/{} pass check_solution", self.entries.len());
        let _ = writeln!(s, "entries: {ok_entries}/{} pass all checks", self.entries.len());
        let _ = writeln!(s, "unknown verdicts: {unknown}");
        let hist: Vec<String> = self.histogram.iter().map(|(nu, c)| format!("{nu}:{c}")).collect();
        let _ = writeln!(s, "nu histogram: {}", hist.join(" "));
        let central = self.entries.iter().filter(|e| e.central_dim.unwrap_or(0) > 0).count();
        let decomposable = self.entries.iter().filter(|e| e.parts.len() > 1).count();
        let _ = writeln!(s, "central summands: {central}");
        let _ = writeln!(s, "decomposable cores: {decomposable}");
        let ok_fam = self.families.iter().filter(|f| f.passed()).count();
        let _ = writeln!(s, "families: {ok_fam}/{} pass", self.families.len());
        let _ = writeln!(s, "planted controls: {}/{} found equivalent", count(&self.planted), self.planted.len());
        let _ = writeln!(
            s,
            "same-nu pairs: {} checked, {} equivalent, {} errors",
            self.pairwise.pairs_checked,
            self.pairwise.equivalent_pairs.len(),
            self.pairwise.errors.len()
        );
        let _ = writeln!(s, "relations: {}/{} hold", count(&self.relations), self.relations.len());
        let _ = writeln!(s, "result: {}", if self.passed() { "pass" } else { "FAIL" });
        s
    }

    /// Tree-text document with one record per entry in id order; byte-stable
    /// for a fixed seed unless timing is requested.
    pub fn render(&self, timing: bool) -> String {
        let mut s = String::new();
        let check_line = |s: &mut String, indent: &str, c: &CheckResult| {
            let detail = if c.detail.is_empty() { String::new() } else { format!(" ({})", c.detail) };
            let _ = writeln!(s, "{indent}{}: {}{detail}", c.name, if c.passed { "pass" } else { "FAIL" });
        };
        for e in &self.entries {
            s.push_str(&e.render(timing));
        }
        for f in &self.families {
            let _ = writeln!(s, "family {}", f.id);
            let _ = writeln!(s, "  status: {}", if f.passed() { "pass" } else { "FAIL" });
            for c in &f.checks {
                check_line(&mut s, "  ", c);
            }
        }
        let _ = writeln!(s, "planted");
        for c in &self.planted {
            check_line(&mut s, "  ", c);
        }
        let _ = writeln!(s, "pairwise");
        let _ = writeln!(s, "  pairs: {}", self.pairwise.pairs_checked);
        for (x, y, g) in &self.pairwise.equivalent_pairs {
            let _ = writeln!(s, "  equivalent: {x} {y} element ({},{},{},{})", g[0], g[1], g[2], g[3]);
        }
        for (x, y, e) in &self.pairwise.errors {
            let _ = writeln!(s, "  error: {x} {y} {e}");
        }
        let _ = writeln!(s, "relations");
        for c in &self.relations {
            check_line(&mut s, "  ", c);
        }
        let _ = writeln!(s, "summary");
        for line in self.summary().lines() {
            let _ = writeln!(s, "  {line}");
        }
        s
    }
}
