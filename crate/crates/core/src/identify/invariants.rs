use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cyclo::{Cyclo, Rational};
use crate::liecore::LieAlgebra;
use crate::linalg::{axpy, zero_vector, Matrix};
use crate::poly::Poly;

/// Coordinates of the random evaluation points lie in [-RANGE, RANGE].
const RANGE: i64 = 1000;
const BATCH: usize = 3;

/// M(x)_{ij} = Σ_k c_ij^k x_k at a point.
fn bracket_matrix(alg: &LieAlgebra, x: &[Cyclo]) -> Matrix {
    let dim = alg.dim();
    let mut m = Matrix::zeros(alg.order(), dim, dim);
    for (i, j, c) in alg.constants().entries() {
        let v: Cyclo = c.iter().zip(x).fold(Cyclo::zero(alg.order()), |acc, (a, b)| acc + a * b);
        m.set(j, i, -&v);
        m.set(i, j, v);
    }
    m
}

fn batch_rank(alg: &LieAlgebra, rng: &mut ChaCha8Rng) -> usize {
    (0..BATCH)
        .map(|_| {
            let x: Vec<Cyclo> = (0..alg.dim())
                .map(|_| Cyclo::from_rational(alg.order(), Rational::from_integer(rng.gen_range(-RANGE..=RANGE).into())))
                .collect();
            bracket_matrix(alg, &x).rank()
        })
        .max()
        .unwrap_or(0)
}

/// (τ, generic rank): the rank of M(x) at random rational points, kept as
/// the maximum over one batch and confirmed by a batch from a second stream.
pub fn formal_invariant_count(alg: &LieAlgebra, seed: u64) -> (usize, usize) {
    if alg.dim() == 0 {
        return (0, 0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut confirm = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut rank = batch_rank(alg, &mut rng);
    loop {
        let r = batch_rank(alg, &mut confirm);
        if r <= rank {
            break;
        }
        rank = r;
    }
    (alg.dim() - rank, rank)
}

/// x̂_i F = Σ_{j,k} c_ij^k x_k ∂F/∂x_j.
pub fn apply_generator(alg: &LieAlgebra, i: usize, f: &Poly) -> Poly {
    let n = alg.order();
    let dim = alg.dim();
    let mut out = Poly::zero(dim);
    for j in 0..dim {
        let c = alg.bracket_basis(i, j);
        if c.iter().all(Cyclo::is_zero) {
            continue;
        }
        let df = f.derivative(j);
        if df.is_zero() {
            continue;
        }
        let mut lin = Poly::zero(dim);
        for (k, ck) in c.iter().enumerate() {
            if !ck.is_zero() {
                lin = lin.add(&Poly::var(n, dim, k).scale(ck));
            }
        }
        out = out.add(&lin.mul(&df));
    }
    out
}

/// Ok when every x̂_i annihilates F; otherwise the index of the first
/// generator that does not.
pub fn verify_casimir(alg: &LieAlgebra, f: &Poly) -> Result<(), usize> {
    assert_eq!(f.nvars(), alg.dim(), "polynomial variables must match the algebra dimension");
    match (0..alg.dim()).find(|&i| !apply_generator(alg, i, f).is_zero()) {
        Some(i) => Err(i),
        None => Ok(()),
    }
}

/// Whether `a` (column i = image of e_i) is an invertible homomorphism L1 → L2:
/// Σ_r x_ij^r A_kr = Σ_{μ,ν} A_μi A_νj y_μν^k.
pub fn verify_isomorphism(a: &Matrix, l1: &LieAlgebra, l2: &LieAlgebra) -> bool {
    let dim = l1.dim();
    if l2.dim() != dim || a.nrows() != dim || a.ncols() != dim || a.inverse().is_none() {
        return false;
    }
    let cols: Vec<Vec<Cyclo>> = (0..dim).map(|j| a.column(j)).collect();
    for i in 0..dim {
        for j in i + 1..dim {
            let mut lhs = zero_vector(l1.order(), dim);
            for (r, x) in l1.bracket_basis(i, j).iter().enumerate() {
                if !x.is_zero() {
                    axpy(&mut lhs, x, &cols[r]);
                }
            }
            let rhs = l2.bracket(&cols[i], &cols[j]).expect("dims");
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}
