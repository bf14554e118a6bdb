mod common;

use std::collections::HashMap;

use common::*;
use liecontract::catalog::{identify_contraction, Catalog, ExpectedRecord, Scope};
use liecontract::contraction::{Context, Continuity};
use liecontract::cyclo::Cyclo;
use liecontract::identify::*;
use liecontract::liecore::LieAlgebra;
use liecontract::linalg::{unit_vector, Matrix};
use liecontract::poly::Poly;

fn cat() -> Catalog {
    Catalog::bundled().unwrap()
}

fn contracted_solution(id: &str) -> LieAlgebra {
    let c = cat();
    let e = c.solution(id).unwrap();
    contracted(&e.matrix.instantiate(&e.matrix.default_bindings()).unwrap())
}

fn record(name: &str) -> ExpectedRecord {
    cat().expected.into_iter().find(|r| r.algebra == name && r.scope == Scope::Algebra && r.bind.is_none()).unwrap()
}

fn record_algebra(name: &str) -> LieAlgebra {
    record(name).algebra(&HashMap::new()).unwrap().unwrap()
}

fn heisenberg() -> LieAlgebra {
    LieAlgebra::parse_brackets(3, 3, "[e1,e2] = e3", &HashMap::new()).unwrap()
}

const OPTS: FingerprintOptions = FingerprintOptions { tower_depth: 1, tower_max_dim: 40, seed: 0 };

#[test]
fn single_bracket_contraction() {
    let c = cat();
    let eps = c.solution("eps_23_1").unwrap().matrix.instantiate(&HashMap::new()).unwrap();
    let (central, parts, undetermined) = identify_contraction(&eps, &OPTS);
    assert!(!undetermined);
    assert_eq!(central, 5);
    assert_eq!(parts.len(), 1);
    let (core, fp) = &parts[0];
    assert_eq!(fp.dim, 3);
    assert_eq!(fp.derived_dims, vec![3, 1, 0]);
    assert_eq!(fp.lower_central_dims, vec![3, 1, 0]);
    assert_eq!(fp.upper_central_dims, vec![1, 3]);
    assert_eq!(fp.dim_der, 6);
    // A linear polynomial is invariant exactly when its vector is central.
    let z = center(core);
    assert_eq!(z.dim(), 1);
    let lin = z.basis()[0]
        .iter()
        .enumerate()
        .fold(Poly::zero(3), |acc, (k, c)| acc.add(&Poly::var(3, 3, k).scale(c)));
    assert!(verify_casimir(core, &lin).is_ok());
    let rec = record("L'23,1");
    let polys = rec.casimir_polys(&HashMap::new()).unwrap();
    assert!(verify_casimir(&record_algebra("L'23,1"), &polys[0]).is_ok());
    assert_eq!(fingerprint_with(&record_algebra("L'23,1"), &OPTS), *fp);
}

#[test]
fn nine_zero_solution_is_solvable() {
    let alg = contracted_solution("eps_9_1");
    let fp = fingerprint_with(&alg, &OPTS);
    assert_eq!(fp.dim, 8);
    assert!(fp.solvable && !fp.nilpotent);
    assert_eq!(fp.derived_dims, vec![8, 6, 3, 0]);
    assert_eq!(fp.lower_central_dims, vec![8, 6]);
    assert_eq!(fp.upper_central_dims, vec![0]);
    assert_eq!(fp.tau, 2);
    assert_eq!(fp.dim_der, 9);
    let c = cat();
    let ctx = Context::new();
    let e = c.solution("eps_9_1").unwrap().matrix.instantiate(&HashMap::new()).unwrap();
    assert!(matches!(ctx.classify(&e).unwrap(), Continuity::Continuous { .. }));
}

#[test]
fn trivial_contractions() {
    let zero = contracted_solution("eps_24_1");
    assert!(zero.is_abelian());
    let fp = fingerprint_with(&zero, &OPTS);
    assert_eq!((fp.dim_der, fp.tau, fp.center_dim), (64, 8, 8));

    let sl3 = contracted_solution("eps_0_1");
    assert_eq!(sl3, LieAlgebra::pauli(3).unwrap());
    assert!(is_semisimple(&sl3));
    assert_eq!(sl3.trace_form(None).rank(), 8);
    assert_eq!(formal_invariant_count(&sl3, 0), (2, 6));
    let fp = fingerprint_with(&sl3, &OPTS);
    assert!(fp.semisimple && !fp.solvable);
    assert_eq!(fp.dim_der, 8);
}

#[test]
fn decomposes_into_two_ideals() {
    let alg = contracted_solution("eps_18_32");
    let split = split_central(&alg);
    assert_eq!(split.abelian_dim, 0);
    let dec = decompose(&split.core);
    assert!(!dec.undetermined);
    assert_eq!(dec.parts.len(), 2);
    let target = fingerprint_with(&record_algebra("L'21,9"), &OPTS);
    for (part, basis) in dec.parts.iter().zip(&dec.bases) {
        assert_eq!(part.dim(), 4);
        assert_eq!(fingerprint_with(part, &OPTS), target);
        let ideal = liecontract::linalg::Subspace::from_vectors(3, 8, basis.clone());
        assert!(is_ideal(&split.core, &ideal));
    }
}

#[test]
fn splits_a_central_plane() {
    let alg = contracted_solution("eps_21_16");
    let split = split_central(&alg);
    assert_eq!(split.abelian_dim, 2);
    assert_eq!(split.core.dim(), 6);
    let fp = fingerprint_with(&split.core, &OPTS);
    assert!(fp.nilpotent);
    assert_eq!(fp.derived_dims, vec![6, 3, 0]);
    assert_eq!(fp.lower_central_dims, vec![6, 3, 0]);
    assert_eq!(fp.upper_central_dims, vec![3, 6]);
    assert_eq!(fp.dim_der, 18);
    assert_eq!(decompose(&split.core).parts.len(), 1);
}

#[test]
fn derivation_towers_separate_two_algebras() {
    let a = contracted_solution("eps_17_2");
    let b = contracted_solution("eps_19_22");
    assert_eq!(fingerprint_with(&a, &LIGHT).derived_dims, fingerprint_with(&b, &LIGHT).derived_dims);
    assert_eq!(der_tower(&a, 2), vec![17, 19]);
    assert_eq!(der_tower(&b, 2), vec![17, 19]);
    let da = derivation_algebra(&a);
    let db = derivation_algebra(&b);
    assert!(da.as_lie.is_lie() && db.as_lie.is_lie());
    assert_eq!(derived_series(&da.as_lie).dims(), vec![17, 15]);
    assert_eq!(derived_series(&db.as_lie).dims(), vec![17, 14, 8, 0]);
}

#[test]
fn derivations_match_definition() {
    let h = heisenberg();
    let der = derivation_algebra(&h);
    assert_eq!(der.dim(), 6);
    for d in &der.basis {
        assert!(is_derivation(&h, d));
    }
    // ad x is always a derivation; the identity is not unless the algebra is abelian.
    let sl3 = LieAlgebra::pauli(3).unwrap();
    for i in 0..8 {
        assert!(is_derivation(&sl3, &sl3.ad_basis(i)));
    }
    assert!(!is_derivation(&sl3, &Matrix::identity(3, 8)));
    assert_eq!(derivation_algebra(&sl3).dim(), 8);
    assert_eq!(derivation_algebra(&LieAlgebra::abelian(3, 3)).dim(), 9);
}

#[test]
fn series_of_small_algebras() {
    let h = heisenberg();
    assert_eq!(derived_series(&h).dims(), vec![3, 1, 0]);
    assert_eq!(lower_central_series(&h).dims(), vec![3, 1, 0]);
    assert_eq!(upper_central_series(&h).dims(), vec![1, 3]);
    assert!(is_nilpotent(&h) && is_solvable(&h));
    // Two-dimensional non-abelian: [e1,e2] = e2.
    let aff = LieAlgebra::parse_brackets(3, 2, "[e1,e2] = e2", &HashMap::new()).unwrap();
    assert_eq!(derived_series(&aff).dims(), vec![2, 1, 0]);
    assert_eq!(lower_central_series(&aff).dims(), vec![2, 1]);
    assert!(is_solvable(&aff) && !is_nilpotent(&aff));
    assert_eq!(nilradical(&aff).space.dim(), 1);
    assert_eq!(radical(&aff).dim(), 2);
    assert_eq!(radical(&LieAlgebra::pauli(3).unwrap()).dim(), 0);
}

#[test]
fn centroid_detects_decomposability() {
    let h = heisenberg();
    assert_eq!(centroid_semisimple_dim(&h), 1);
    let double = h.direct_sum(&h);
    assert_eq!(decompose(&double).parts.len(), 2);
    // Mixing the two copies hides the components from the bracket graph.
    let p = basis_change(6, &[0, 0, 0, 0, 0, 0], &[1], &[(0, 3, 1), (1, 4, 1), (2, 5, 1)]);
    let mixed = double.change_basis(&p).unwrap();
    assert!(centroid_semisimple_dim(&mixed) > 1);
}

#[test]
fn isomorphism_certificates() {
    let h = heisenberg();
    let p = basis_change(3, &[1, 0, 0], &[2, 1, 1], &[(0, 1, 1)]);
    let moved = h.change_basis(&p).unwrap();
    assert!(verify_isomorphism(&p, &moved, &h));
    assert_ne!(moved, h);
    assert!(!verify_isomorphism(&Matrix::identity(3, 3), &moved, &h));
    assert!(!verify_isomorphism(&basis_change(3, &[0], &[2, 1, 1], &[]), &h, &h));
    assert!(!verify_isomorphism(&Matrix::zeros(3, 3, 3), &h, &h));
}

fn term(dim: usize, mono: &[u32], c: &Cyclo) -> Poly {
    let mut p = Poly::constant(dim, c.clone());
    for (i, &e) in mono.iter().enumerate() {
        for _ in 0..e {
            p = p.mul(&Poly::var(3, dim, i));
        }
    }
    p
}

/// A copy of `f` with one term changed: a doubled coefficient when `f` has
/// several terms, otherwise a shift to a non-central variable.
fn mutate(alg: &LieAlgebra, f: &Poly) -> Poly {
    let dim = alg.dim();
    if f.terms().len() > 1 {
        let (mono, c) = f.terms().iter().next().unwrap();
        return f.add(&term(dim, mono, c));
    }
    let z = center(alg);
    let j = (0..dim).find(|&j| !z.contains(&unit_vector(3, dim, j))).unwrap();
    f.add(&Poly::var(3, dim, j))
}

#[test]
fn casimir_suite() {
    let names = [
        "L'23,1", "L'22,1", "L'21,2", "L'21,16", "L'20,39", "L'19,17", "L20,32", "L19,41", "L17,2", "L15,3",
    ];
    let rec = record("L'22,1");
    assert_eq!(rec.casimirs, vec!["e2", "e1^2-2e2e3"]);
    let rec = record("L'21,2");
    assert_eq!(rec.casimirs, vec!["e2", "e3", "e1^2+2e2e5-2e3e4"]);
    for name in names {
        let rec = record(name);
        let alg = record_algebra(name);
        assert!(alg.is_lie(), "{name}");
        let polys = rec.casimir_polys(&HashMap::new()).unwrap();
        assert!(!polys.is_empty(), "{name}");
        for (text, f) in rec.casimirs.iter().zip(&polys) {
            assert!(verify_casimir(&alg, f).is_ok(), "{name}: {text}");
        }
        let last = polys.iter().max_by_key(|p| p.degree()).unwrap();
        assert!(verify_casimir(&alg, &mutate(&alg, last)).is_err(), "{name}: mutation still invariant");
    }
}

#[test]
fn casimir_generators_act_as_derivations_of_polynomials() {
    // x̂_i(x_j) = Σ_k c_ij^k x_k, read directly from the brackets.
    let alg = record_algebra("L'21,2");
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            let got = apply_generator(&alg, i, &Poly::var(3, alg.dim(), j));
            let want = alg
                .bracket_basis(i, j)
                .iter()
                .enumerate()
                .fold(Poly::zero(alg.dim()), |acc, (k, c)| acc.add(&Poly::var(3, alg.dim(), k).scale(c)));
            assert_eq!(got, want);
        }
    }
}
