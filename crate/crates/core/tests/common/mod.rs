//! Oracles and property checks shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use liecontract::catalog::{generic_bindings, Catalog, CatalogEntry};
use liecontract::contraction::{act_on_matrix, apply_normalization, Context, ContractionMatrix};
use liecontract::cyclo::{rat, Cyclo};
use liecontract::identify::{fingerprint_with, FingerprintOptions};
use liecontract::liecore::{canonical_indices, LieAlgebra};
use liecontract::linalg::Matrix;
use liecontract::symmetry::{enumerate_group, permutation_of, SymmetryElement};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub fn c3(s: &str) -> Cyclo {
    Cyclo::parse(3, s).unwrap()
}

pub fn int(v: i64) -> Cyclo {
    Cyclo::from_int(3, v)
}

/// Floating-point image under ζₙ = exp(2πi/n); test-side only.
pub fn to_complex(c: &Cyclo) -> (f64, f64) {
    use num_traits::ToPrimitive;
    let n = c.order() as f64;
    c.coeffs().iter().enumerate().fold((0.0, 0.0), |(re, im), (k, q)| {
        let v = q.to_f64().unwrap();
        let t = 2.0 * std::f64::consts::PI * k as f64 / n;
        (re + v * t.cos(), im + v * t.sin())
    })
}

pub fn close(a: (f64, f64), b: (f64, f64)) -> bool {
    let scale = 1.0 + a.0.abs() + a.1.abs() + b.0.abs() + b.1.abs();
    (a.0 - b.0).abs() <= 1e-9 * scale && (a.1 - b.1).abs() <= 1e-9 * scale
}

/// Elements of Q(ζₙ) with coefficients p/q, p in [-9, 9], q in [1, 4].
pub fn cyclo(n: u32) -> impl Strategy<Value = Cyclo> {
    prop::collection::vec((-9i64..=9, 1i64..=4), (n - 1) as usize)
        .prop_map(move |cs| Cyclo::new(n, cs.into_iter().map(|(p, q)| rat(p, q)).collect()).unwrap())
}

pub fn nonzero_cyclo(n: u32) -> impl Strategy<Value = Cyclo> {
    cyclo(n).prop_filter("nonzero", |c| !c.is_zero())
}

pub fn catalog() -> Catalog {
    Catalog::bundled().expect("bundled catalog loads")
}

pub fn instantiate(e: &CatalogEntry, seed: u64) -> Matrix {
    let b = generic_bindings(e, seed, 1).pop().unwrap_or_default();
    e.matrix.instantiate(&b).expect("generic instantiation")
}

pub fn bindings(pairs: &[(char, i64)]) -> HashMap<char, Cyclo> {
    pairs.iter().map(|&(k, v)| (k, int(v))).collect()
}

/// (r, s)·A computed directly on residues.
pub fn act_on_residues(g: &SymmetryElement, (r, s): (u32, u32)) -> (u32, u32) {
    let n = g.n;
    ((r * g.a + s * g.c) % n, (r * g.b + s * g.d) % n)
}

pub fn residues() -> Vec<(u32, u32)> {
    canonical_indices(3).iter().map(|g| (g.r() as u32, g.s() as u32)).collect()
}

/// α_ij = a_i a_j / a_{i+j} on relevant positions, from residue arithmetic.
pub fn normalization_oracle(m: &Matrix, a: &[Cyclo]) -> Matrix {
    let idx = residues();
    let mut out = m.clone();
    for i in 0..8 {
        for j in 0..8 {
            if m.get(i, j).is_zero() {
                continue;
            }
            let sum = ((idx[i].0 + idx[j].0) % 3, (idx[i].1 + idx[j].1) % 3);
            let k = idx.iter().position(|&x| x == sum).expect("relevant pairs sum to a nonzero index");
            let alpha = &(&a[i] * &a[j]) * &a[k].inv().unwrap();
            out.set(i, j, m.get(i, j) * &alpha);
        }
    }
    out
}

// Property checks. Each returns Err with a description on failure so that it
// can be driven by proptest here and by the acceptance runner.

pub fn field_axioms(a: &Cyclo, b: &Cyclo, c: &Cyclo) -> Result<(), TestCaseError> {
    let n = a.order();
    prop_assert_eq!(&(a + b) + c, a + &(b + c));
    prop_assert_eq!(&(a * b) * c, a * &(b * c));
    prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
    prop_assert_eq!(a + b, b + a);
    prop_assert_eq!(a * b, b * a);
    prop_assert_eq!(a + &Cyclo::zero(n), a.clone());
    prop_assert_eq!(a * &Cyclo::one(n), a.clone());
    prop_assert!((a - a).is_zero());
    if !a.is_zero() {
        prop_assert!((a * &a.inv().unwrap()).is_one());
    }
    let (x, y) = (to_complex(a), to_complex(b));
    prop_assert!(close(to_complex(&(a * b)), (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0)));
    prop_assert!(close(to_complex(&(a + b)), (x.0 + y.0, x.1 + y.1)));
    Ok(())
}

pub fn random_element(rng_pick: usize) -> SymmetryElement {
    let g = enumerate_group(3, false);
    g[rng_pick % g.len()]
}

/// Acting by a group element keeps a solution a solution; the symbolic and
/// the concrete action agree.
pub fn stable_under_symmetry(ctx: &Context, cat: &Catalog, entry: usize, g: usize, seed: u64) -> Result<(), TestCaseError> {
    let e = &cat.solutions[entry % cat.solutions.len()];
    let b = generic_bindings(e, seed, 1).pop().unwrap_or_default();
    let m = e.matrix.instantiate(&b).unwrap();
    let perm = permutation_of(&random_element(g));
    let moved = act_on_matrix(&m, &perm);
    prop_assert!(ctx.check(&moved).is_ok(), "{} moved by {:?} is not a solution", e.id, perm.mapping());
    let symbolic: ContractionMatrix = e.matrix.act(&perm);
    prop_assert_eq!(symbolic.instantiate(&b).unwrap(), moved);
    Ok(())
}

/// Rescaling by a normalization matrix keeps a solution and is detected as
/// an equivalence.
pub fn stable_under_scaling(ctx: &Context, cat: &Catalog, entry: usize, a: &[Cyclo], seed: u64) -> Result<(), TestCaseError> {
    let e = &cat.solutions[entry % cat.solutions.len()];
    let m = instantiate(e, seed);
    let scaled = apply_normalization(&m, a);
    prop_assert_eq!(&scaled, &normalization_oracle(&m, a));
    prop_assert!(ctx.check(&scaled).is_ok(), "{} scaled is not a solution", e.id);
    prop_assert!(ctx.equivalent(&m, &scaled).unwrap().is_equivalent(), "{} scaled not equivalent", e.id);
    Ok(())
}

/// Product of a permutation, a diagonal scaling and a list of shears
/// e_j += c·e_i, given by the columns of the result. Always invertible.
pub fn basis_change(dim: usize, perm: &[usize], diag: &[i64], shears: &[(usize, usize, i64)]) -> Matrix {
    let mut p = Matrix::zeros(3, dim, dim);
    let mut order: Vec<usize> = (0..dim).collect();
    for (k, &r) in perm.iter().enumerate().take(dim) {
        order.swap(k, k + r % (dim - k));
    }
    for (j, &i) in order.iter().enumerate() {
        let d = diag[j % diag.len()];
        p.set(i, j, int(if d == 0 { 1 } else { d }));
    }
    for &(i, j, c) in shears {
        let (i, j) = (i % dim, j % dim);
        if i == j {
            continue;
        }
        // column j += c · column i
        for r in 0..dim {
            let v = p.get(r, j) + &(&int(c) * p.get(r, i));
            p.set(r, j, v);
        }
    }
    p
}

pub const LIGHT: FingerprintOptions = FingerprintOptions { tower_depth: 1, tower_max_dim: 40, seed: 0 };

/// The fingerprint does not depend on the basis.
pub fn basis_invariant(alg: &LieAlgebra, p: &Matrix) -> Result<(), TestCaseError> {
    let moved = alg.change_basis(p).unwrap();
    prop_assert!(moved.is_lie());
    prop_assert_eq!(fingerprint_with(alg, &LIGHT), fingerprint_with(&moved, &LIGHT));
    Ok(())
}

/// dim − τ is even and inner derivations fit inside Der.
pub fn parity_and_inner(alg: &LieAlgebra) -> Result<(), TestCaseError> {
    let fp = fingerprint_with(alg, &LIGHT);
    prop_assert_eq!((fp.dim - fp.tau) % 2, 0, "dim {} tau {}", fp.dim, fp.tau);
    prop_assert!(fp.dim_der >= fp.dim - fp.center_dim, "der {} dim {} center {}", fp.dim_der, fp.dim, fp.center_dim);
    Ok(())
}

pub fn contracted(m: &Matrix) -> LieAlgebra {
    LieAlgebra::pauli(3).unwrap().apply_contraction(m).unwrap()
}

// Matrix oracle for the Pauli basis: X_rs = P^r Q^s with P the cyclic shift
// and Q = diag(1, w, w^2), as complex 3x3 matrices.

pub type C64 = num_complex::Complex64;
pub type M3 = [[C64; 3]; 3];

pub fn cx(c: &Cyclo) -> C64 {
    let (re, im) = to_complex(c);
    C64::new(re, im)
}

pub fn cclose(a: C64, b: C64) -> bool {
    close((a.re, a.im), (b.re, b.im))
}

fn m3_mul(a: &M3, b: &M3) -> M3 {
    let mut out = [[C64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn pauli_matrix((r, s): (u32, u32)) -> M3 {
    let mut p = [[C64::new(0.0, 0.0); 3]; 3];
    let mut q = [[C64::new(0.0, 0.0); 3]; 3];
    for k in 0..3 {
        p[(k + 1) % 3][k] = C64::new(1.0, 0.0);
        q[k][k] = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 3.0);
    }
    let mut out = [[C64::new(0.0, 0.0); 3]; 3];
    for (k, row) in out.iter_mut().enumerate() {
        row[k] = C64::new(1.0, 0.0);
    }
    for _ in 0..r {
        out = m3_mul(&out, &p);
    }
    for _ in 0..s {
        out = m3_mul(&out, &q);
    }
    out
}

pub fn m3_commutator(a: &M3, b: &M3) -> M3 {
    let (x, y) = (m3_mul(a, b), m3_mul(b, a));
    let mut out = x;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = x[i][j] - y[i][j];
        }
    }
    out
}

/// The scalar c with m = c·target, assuming proportionality.
pub fn m3_ratio(m: &M3, target: &M3) -> C64 {
    for i in 0..3 {
        for j in 0..3 {
            if target[i][j].norm() > 0.5 {
                return m[i][j] / target[i][j];
            }
        }
    }
    unreachable!("Pauli matrices are monomial and nonzero")
}

pub fn m3_close(a: &M3, b: &M3) -> bool {
    (0..3).all(|i| (0..3).all(|j| cclose(a[i][j], b[i][j])))
}

/// [X_a, X_b] = c·X_{a+b}; returns c.
pub fn pauli_coefficient(a: (u32, u32), b: (u32, u32)) -> C64 {
    let sum = ((a.0 + b.0) % 3, (a.1 + b.1) % 3);
    let comm = m3_commutator(&pauli_matrix(a), &pauli_matrix(b));
    let c = m3_ratio(&comm, &pauli_matrix(sum));
    let mut scaled = pauli_matrix(sum);
    for row in scaled.iter_mut() {
        for x in row.iter_mut() {
            *x *= c;
        }
    }
    assert!(m3_close(&comm, &scaled), "commutator is not a multiple of X_{sum:?}");
    c
}
