use crate::cyclo::Cyclo;
use crate::liecore::{trace_of_product, Degree, LieAlgebra};
use crate::linalg::{is_zero_vector, sparse_kernel, unit_vector, Matrix, Subspace, Vector};

use super::series::{
    bracket_span, center, derived_algebra, is_ideal, is_nilpotent_matrix, is_nilpotent_subalgebra,
};

/// The grading labels when every structure constant is homogeneous.
pub fn homogeneous_grading(alg: &LieAlgebra) -> Option<&[Degree]> {
    let g = alg.grading()?;
    let ok = alg
        .constants()
        .entries()
        .all(|(i, j, c)| c.iter().enumerate().all(|(k, x)| x.is_zero() || g[k] == g[i].add(g[j])));
    ok.then_some(g)
}

/// Labels for a basis of unit vectors, when the algebra is graded.
fn unit_grading(alg: &LieAlgebra, basis: &[Vector]) -> Option<Vec<Degree>> {
    let g = homogeneous_grading(alg)?;
    basis
        .iter()
        .map(|v| {
            let mut nz = v.iter().enumerate().filter(|(_, x)| !x.is_zero());
            match (nz.next(), nz.next()) {
                (Some((i, x)), None) if x.is_one() => Some(g[i]),
                _ => None,
            }
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct CentralSplit {
    /// A complement to the split-off center, containing the derived algebra.
    pub core: LieAlgebra,
    pub core_basis: Vec<Vector>,
    /// Number of one-dimensional abelian summands removed.
    pub abelian_dim: usize,
    pub central_basis: Vec<Vector>,
}

/// L = Z ⊕ L̃ with Z central, Z ∩ D(L) = 0 and D(L) ⊆ L̃.
pub fn split_central(alg: &LieAlgebra) -> CentralSplit {
    let n = alg.order();
    let dim = alg.dim();
    let c = center(alg);
    let d = derived_algebra(alg);
    // Center vectors independent modulo D(L).
    let mut acc = d.clone();
    let mut central_basis = Vec::new();
    for v in c.basis() {
        if !acc.contains(v) {
            acc = acc.sum(&Subspace::from_vectors(n, dim, vec![v.clone()]));
            central_basis.push(v.clone());
        }
    }
    let mut core_basis: Vec<Vector> = d.basis().to_vec();
    core_basis.extend(acc.complement_units().into_iter().map(|i| unit_vector(n, dim, i)));
    core_basis.sort_by_key(|v| v.iter().position(|x| !x.is_zero()));
    let grading = unit_grading(alg, &core_basis);
    let core = alg.restrict(&core_basis, grading).expect("the complement contains D(L), so it is an ideal");
    CentralSplit { core, core_basis, abelian_dim: central_basis.len(), central_basis }
}

/// The centroid {φ : φ[x,y] = [x,φy]} as a list of matrices.
pub fn centroid(alg: &LieAlgebra) -> Vec<Matrix> {
    let n = alg.order();
    let dim = alg.dim();
    // Unknown φ_{km} at index k*dim + m.
    let mut rows = Vec::new();
    let ads: Vec<Matrix> = (0..dim).map(|i| alg.ad_basis(i)).collect();
    for i in 0..dim {
        for j in 0..dim {
            let c = alg.bracket_basis(i, j);
            for k in 0..dim {
                let mut row = Vec::new();
                for (m, cm) in c.iter().enumerate() {
                    if !cm.is_zero() {
                        row.push((k * dim + m, cm.clone()));
                    }
                }
                // [e_i, φ e_j]_k = Σ_m (ad e_i)_{km} φ_{mj}
                for m in 0..dim {
                    let a = ads[i].get(k, m);
                    if !a.is_zero() {
                        row.push((m * dim + j, -a));
                    }
                }
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    sparse_kernel(n, dim * dim, rows)
        .into_iter()
        .map(|v| Matrix::from_rows(n, dim, &v.chunks(dim).map(<[Cyclo]>::to_vec).collect::<Vec<_>>()))
        .collect()
}

/// dim Γ/rad Γ for the centroid Γ, with the radical taken as the kernel of
/// the trace form (φ, ψ) ↦ Tr(φψ).
pub fn centroid_semisimple_dim(alg: &LieAlgebra) -> usize {
    let g = centroid(alg);
    let k = g.len();
    let mut gram = Matrix::zeros(alg.order(), k, k);
    for a in 0..k {
        for b in a..k {
            let t = trace_of_product(&g[a], &g[b]);
            gram.set(a, b, t.clone());
            gram.set(b, a, t);
        }
    }
    gram.rank()
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub parts: Vec<LieAlgebra>,
    /// Basis of each part in the coordinates of the input algebra.
    pub bases: Vec<Vec<Vector>>,
    /// Set when some part is neither split further nor certified indecomposable.
    pub undetermined: bool,
}

/// Splits into ideals spanned by subsets of the current basis (the connected
/// components of the bracket graph), then certifies each part through its
/// centroid.
pub fn decompose(alg: &LieAlgebra) -> Decomposition {
    let n = alg.order();
    let dim = alg.dim();
    let mut parent: Vec<usize> = (0..dim).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for (i, j, c) in alg.constants().entries() {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        parent[a] = b;
        for (k, x) in c.iter().enumerate() {
            if !x.is_zero() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, k));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; dim];
    for i in 0..dim {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    let mut parts = Vec::new();
    let mut bases = Vec::new();
    let mut undetermined = false;
    for g in groups {
        let basis: Vec<Vector> = g.iter().map(|&i| unit_vector(n, dim, i)).collect();
        let grading = alg.grading().map(|lab| g.iter().map(|&i| lab[i]).collect());
        let part = alg.restrict(&basis, grading).expect("components are closed");
        if part.dim() > 1 && centroid_semisimple_dim(&part) > 1 {
            undetermined = true;
        }
        parts.push(part);
        bases.push(basis);
    }
    Decomposition { parts, bases, undetermined }
}

/// {x : Tr(ad x ad y) = 0 for all y ∈ D(L)}.
pub fn radical(alg: &LieAlgebra) -> Subspace {
    let d = derived_algebra(alg);
    if d.dim() == 0 {
        return Subspace::full(alg.order(), alg.dim());
    }
    let k = alg.trace_form(Some(&d));
    Subspace::from_vectors(alg.order(), alg.dim(), k.transpose().kernel())
}

pub fn is_semisimple(alg: &LieAlgebra) -> bool {
    alg.dim() > 0 && radical(alg).dim() == 0
}

#[derive(Clone, Debug)]
pub struct Nilradical {
    pub space: Subspace,
    /// Set when the computed space was confirmed to be a nilpotent ideal.
    pub verified: bool,
}

/// Span of the associative algebra generated by the given matrices, plus the identity.
fn associative_closure(n: u32, size: usize, gens: &[Matrix]) -> Vec<Matrix> {
    let mut span = Subspace::zero(n, size * size);
    let mut basis: Vec<Matrix> = Vec::new();
    let mut frontier: Vec<Matrix> = Vec::new();
    let push = |m: Matrix, span: &mut Subspace, basis: &mut Vec<Matrix>, frontier: &mut Vec<Matrix>| {
        let v = m.flatten();
        if !is_zero_vector(&span.reduce(&v)) {
            *span = span.sum(&Subspace::from_vectors(n, size * size, vec![v]));
            basis.push(m.clone());
            frontier.push(m);
        }
    };
    push(Matrix::identity(n, size), &mut span, &mut basis, &mut frontier);
    for g in gens {
        push(g.clone(), &mut span, &mut basis, &mut frontier);
    }
    while let Some(m) = frontier.pop() {
        for g in gens {
            push(m.mul(g), &mut span, &mut basis, &mut frontier);
        }
    }
    basis
}

/// Elements x of the radical R with Tr(ad x · b) = 0 for every b in the
/// unital associative algebra generated by ad(R); for x ∈ R this is exactly
/// the condition that ad x is nilpotent.
pub fn nilradical(alg: &LieAlgebra) -> Nilradical {
    let n = alg.order();
    let dim = alg.dim();
    let r = radical(alg);
    if r.dim() == 0 {
        return Nilradical { space: r, verified: true };
    }
    let ad_r: Vec<Matrix> = r.basis().iter().map(|v| alg.ad(v)).collect();
    let assoc = associative_closure(n, dim, &ad_r);
    // Unknown: coordinates y in the basis of R.
    let rows: Vec<Vector> = assoc.iter().map(|b| ad_r.iter().map(|a| trace_of_product(a, b)).collect()).collect();
    let coords = Matrix::from_rows(n, r.dim(), &rows).kernel();
    let vs: Vec<Vector> = coords
        .iter()
        .map(|y| {
            let mut v = vec![Cyclo::zero(n); dim];
            for (c, b) in y.iter().zip(r.basis()) {
                crate::linalg::axpy(&mut v, c, b);
            }
            v
        })
        .collect();
    let space = Subspace::from_vectors(n, dim, vs);
    let verified = is_ideal(alg, &space)
        && is_nilpotent_subalgebra(alg, &space)
        && space.basis().iter().all(|v| is_nilpotent_matrix(&alg.ad(v)))
        && bracket_span(alg, &Subspace::full(n, dim), &r).basis().iter().all(|v| space.contains(v));
    Nilradical { space, verified }
}
