use crate::liecore::LieAlgebra;
use crate::linalg::{Matrix, Subspace, Vector};

/// span{[a, b] : a ∈ A, b ∈ B}.
pub fn bracket_span(alg: &LieAlgebra, a: &Subspace, b: &Subspace) -> Subspace {
    let mut vs = Vec::with_capacity(a.dim() * b.dim());
    for u in a.basis() {
        for v in b.basis() {
            vs.push(alg.bracket(u, v).expect("vectors from the algebra"));
        }
    }
    Subspace::from_vectors(alg.order(), alg.dim(), vs)
}

/// ∩ᵢ ker(ad eᵢ).
pub fn center(alg: &LieAlgebra) -> Subspace {
    let dim = alg.dim();
    let rows: Vec<Vector> = (0..dim).flat_map(|j| alg.ad_basis(j).row_vectors()).collect();
    Subspace::from_vectors(alg.order(), dim, Matrix::from_rows(alg.order(), dim, &rows).kernel())
}

pub fn derived_algebra(alg: &LieAlgebra) -> Subspace {
    let full = Subspace::full(alg.order(), alg.dim());
    bracket_span(alg, &full, &full)
}

/// {x : [x, L] ⊆ S}.
pub fn centralizer_modulo(alg: &LieAlgebra, s: &Subspace) -> Subspace {
    let dim = alg.dim();
    let q = s.membership_conditions();
    if q.is_empty() {
        return Subspace::full(alg.order(), dim);
    }
    let qm = Matrix::from_rows(alg.order(), dim, &q);
    let rows: Vec<Vector> = (0..dim).flat_map(|j| qm.mul(&alg.ad_basis(j)).row_vectors()).collect();
    Subspace::from_vectors(alg.order(), dim, Matrix::from_rows(alg.order(), dim, &rows).kernel())
}

pub fn is_ideal(alg: &LieAlgebra, s: &Subspace) -> bool {
    let full = Subspace::full(alg.order(), alg.dim());
    s.contains_space(&bracket_span(alg, &full, s))
}

pub fn is_subalgebra(alg: &LieAlgebra, s: &Subspace) -> bool {
    s.contains_space(&bracket_span(alg, s, s))
}

/// A chain of subspaces with its dimension profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    pub terms: Vec<Subspace>,
}

impl Series {
    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(Subspace::dim).collect()
    }

    pub fn last(&self) -> &Subspace {
        self.terms.last().expect("series is never empty")
    }

    /// Iterates `next` from the given leading terms until the value repeats;
    /// the repeated term is not stored.
    fn iterate(mut terms: Vec<Subspace>, next: impl Fn(&Subspace) -> Subspace) -> Series {
        loop {
            let nx = next(terms.last().expect("nonempty"));
            if &nx == terms.last().expect("nonempty") {
                return Series { terms };
            }
            terms.push(nx);
        }
    }
}

/// L, [L,L], [D¹,D¹], ...
pub fn derived_series(alg: &LieAlgebra) -> Series {
    let full = Subspace::full(alg.order(), alg.dim());
    let d1 = derived_algebra(alg);
    Series::iterate(vec![full, d1], |s| bracket_span(alg, s, s))
}

/// L, [L,L], [L,C¹], ...
pub fn lower_central_series(alg: &LieAlgebra) -> Series {
    let full = Subspace::full(alg.order(), alg.dim());
    let d1 = derived_algebra(alg);
    Series::iterate(vec![full.clone(), d1], |s| bracket_span(alg, &full, s))
}

/// C(L), C²(L), ... via iterated quotient centers.
pub fn upper_central_series(alg: &LieAlgebra) -> Series {
    Series::iterate(vec![center(alg)], |s| centralizer_modulo(alg, s))
}

pub fn is_solvable(alg: &LieAlgebra) -> bool {
    derived_series(alg).last().dim() == 0
}

pub fn is_nilpotent(alg: &LieAlgebra) -> bool {
    lower_central_series(alg).last().dim() == 0
}

/// Lower central series of a subalgebra, computed inside the ambient algebra.
pub fn is_nilpotent_subalgebra(alg: &LieAlgebra, s: &Subspace) -> bool {
    let mut cur = s.clone();
    loop {
        let nx = bracket_span(alg, s, &cur);
        if nx.dim() == 0 {
            return true;
        }
        if nx == cur {
            return false;
        }
        cur = nx;
    }
}

/// Whether a matrix is nilpotent (M^dim = 0).
pub fn is_nilpotent_matrix(m: &Matrix) -> bool {
    let mut p = m.clone();
    for _ in 1..m.nrows().max(1) {
        if p.is_zero() {
            return true;
        }
        p = p.mul(m);
    }
    p.is_zero()
}

