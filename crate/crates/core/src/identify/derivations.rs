use std::collections::BTreeMap;

use crate::cyclo::Cyclo;
use crate::liecore::{Degree, LieAlgebra, StructureConstants};
use crate::linalg::{sparse_kernel, Frame, Matrix, Vector};

use super::structure::homogeneous_grading;

#[derive(Clone, Debug)]
pub struct DerivationAlgebra {
    /// Basis derivations; column i is d(e_i).
    pub basis: Vec<Matrix>,
    /// The commutator algebra in that basis, graded when the input was.
    pub as_lie: LieAlgebra,
}

impl DerivationAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Whether `d` satisfies d[x,y] = [dx,y] + [x,dy] on basis vectors.
pub fn is_derivation(alg: &LieAlgebra, d: &Matrix) -> bool {
    let dim = alg.dim();
    let cols: Vec<Vector> = (0..dim).map(|j| d.column(j)).collect();
    let basis = |i: usize| crate::linalg::unit_vector(alg.order(), dim, i);
    (0..dim).all(|i| {
        (i + 1..dim).all(|j| {
            let lhs = d.mul_vec(&alg.bracket_basis(i, j));
            let a = alg.bracket(&cols[i], &basis(j)).expect("dims");
            let b = alg.bracket(&basis(i), &cols[j]).expect("dims");
            lhs.iter().zip(a.iter().zip(&b)).all(|(l, (x, y))| *l == x + y)
        })
    })
}

/// Sparse view of c_{ij}^k: pair lists and, for fixed (j, k), the terms c_{mj}^k.
struct Tensor {
    pairs: Vec<(usize, usize, Vec<(usize, Cyclo)>)>,
    into: Vec<Vec<Vec<(usize, Cyclo)>>>,
}

impl Tensor {
    fn new(alg: &LieAlgebra) -> Tensor {
        let dim = alg.dim();
        let mut into = vec![vec![Vec::new(); dim]; dim];
        let mut pairs = Vec::new();
        for (i, j, c) in alg.constants().entries() {
            let nz: Vec<(usize, Cyclo)> = c.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (k, x.clone())).collect();
            for (k, x) in &nz {
                // c_{ij}^k and c_{ji}^k = -c_{ij}^k
                into[j][*k].push((i, x.clone()));
                into[i][*k].push((j, -x));
            }
            pairs.push((i, j, nz));
        }
        Tensor { pairs, into }
    }

    /// Leibniz equation for (i, j, k) over unknowns d_{ab} mapped by `var`:
    /// Σ_m c_ij^m d_km - Σ_m c_mj^k d_mi - Σ_m c_im^k d_mj.
    fn equation(&self, i: usize, j: usize, k: usize, cij: &[(usize, Cyclo)], var: &impl Fn(usize, usize) -> Option<usize>) -> Vec<(usize, Cyclo)> {
        let mut row = Vec::new();
        for (m, c) in cij {
            if let Some(v) = var(k, *m) {
                row.push((v, c.clone()));
            }
        }
        for (m, c) in &self.into[j][k] {
            if let Some(v) = var(*m, i) {
                row.push((v, -c));
            }
        }
        // c_{im}^k = -c_{mi}^k
        for (m, c) in &self.into[i][k] {
            if let Some(v) = var(*m, j) {
                row.push((v, c.clone()));
            }
        }
        row
    }
}

/// Solves the Leibniz system, blockwise by degree when the algebra is graded.
pub fn derivation_algebra(alg: &LieAlgebra) -> DerivationAlgebra {
    let (basis, labels) = derivations(alg);
    let as_lie = commutator_algebra(alg.order(), &basis, labels);
    DerivationAlgebra { basis, as_lie }
}

/// Basis derivations and, for graded input, their degrees.
fn derivations(alg: &LieAlgebra) -> (Vec<Matrix>, Option<Vec<Degree>>) {
    let n = alg.order();
    let dim = alg.dim();
    let t = Tensor::new(alg);
    let mut basis: Vec<Matrix> = Vec::new();
    let mut labels: Vec<Degree> = Vec::new();
    let grading = homogeneous_grading(alg).map(<[Degree]>::to_vec);
    let blocks: Vec<Option<Degree>> = match &grading {
        Some(g) => {
            let mut hs: Vec<Degree> = Vec::new();
            for a in g {
                for b in g {
                    let h = a.sub(*b);
                    if !hs.contains(&h) {
                        hs.push(h);
                    }
                }
            }
            hs.sort_by_key(|h| (h.r, h.s));
            hs.into_iter().map(Some).collect()
        }
        None => vec![None],
    };
    for h in blocks {
        // Unknowns d_{ab} (coefficient of e_a in d(e_b)) of degree h.
        let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for a in 0..dim {
            for b in 0..dim {
                let ok = match (&grading, h) {
                    (Some(g), Some(h)) => g[a] == g[b].add(h),
                    _ => true,
                };
                if ok {
                    let next = index.len();
                    index.insert((a, b), next);
                }
            }
        }
        if index.is_empty() {
            continue;
        }
        let var = |a: usize, b: usize| index.get(&(a, b)).copied();
        let mut rows: Vec<Vec<(usize, Cyclo)>> = Vec::new();
        let empty: Vec<(usize, Cyclo)> = Vec::new();
        let mut nz_pairs: BTreeMap<(usize, usize), &Vec<(usize, Cyclo)>> = BTreeMap::new();
        for (i, j, c) in &t.pairs {
            nz_pairs.insert((*i, *j), c);
        }
        for i in 0..dim {
            for j in i + 1..dim {
                let cij = nz_pairs.get(&(i, j)).copied().unwrap_or(&empty);
                for k in 0..dim {
                    if let (Some(g), Some(h)) = (&grading, h) {
                        if g[k] != g[i].add(g[j]).add(h) {
                            continue;
                        }
                    }
                    let row = t.equation(i, j, k, cij, &var);
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
        for v in sparse_kernel(n, index.len(), rows) {
            let mut m = Matrix::zeros(n, dim, dim);
            for (&(a, b), &u) in &index {
                if !v[u].is_zero() {
                    m.set(a, b, v[u].clone());
                }
            }
            basis.push(m);
            if let Some(h) = h {
                labels.push(h);
            }
        }
    }
    (basis, grading.is_some().then_some(labels))
}

/// The Lie algebra spanned by a closed family of matrices under the commutator.
fn commutator_algebra(n: u32, basis: &[Matrix], labels: Option<Vec<Degree>>) -> LieAlgebra {
    let k = basis.len();
    let size = basis.first().map_or(0, |m| m.nrows() * m.ncols());
    let mut sc = StructureConstants::new(n, k);
    // Homogeneous commutators land in the block of the summed degree.
    let mut frames: BTreeMap<Option<(u8, u8)>, (Vec<usize>, Frame)> = BTreeMap::new();
    let key = |i: usize| labels.as_ref().map(|l| (l[i].r, l[i].s));
    let mut members: BTreeMap<Option<(u8, u8)>, Vec<usize>> = BTreeMap::new();
    for i in 0..k {
        members.entry(key(i)).or_default().push(i);
    }
    for (kk, idx) in members {
        let fam: Vec<Vector> = idx.iter().map(|&i| basis[i].flatten()).collect();
        frames.insert(kk, (idx, Frame::new(n, size, &fam)));
    }
    for a in 0..k {
        for b in a + 1..k {
            let c = basis[a].mul(&basis[b]).sub(&basis[b].mul(&basis[a]));
            if c.is_zero() {
                continue;
            }
            let target = labels.as_ref().map(|l| {
                let d = l[a].add(l[b]);
                (d.r, d.s)
            });
            let (idx, frame) = frames.get(&target).expect("commutator of derivations is a derivation");
            let coords = frame.coordinates(&c.flatten()).expect("commutator of derivations is a derivation");
            let mut v = vec![Cyclo::zero(n); k];
            for (&i, x) in idx.iter().zip(coords) {
                v[i] = x;
            }
            sc.set(a, b, v).expect("length");
        }
    }
    LieAlgebra::new(sc, labels)
}

/// dim Der, dim Der(Der), ... stopping when the dimension repeats, at
/// `depth_cap` levels, or once an algebra larger than `max_dim` would have
/// to be differentiated.
pub fn der_tower_bounded(alg: &LieAlgebra, depth_cap: usize, max_dim: usize) -> Vec<usize> {
    assert!(depth_cap >= 1, "depth cap must be positive");
    let (mut basis, mut labels) = derivations(alg);
    let mut out = vec![basis.len()];
    while out.len() < depth_cap && basis.len() <= max_dim {
        let (next, next_labels) = derivations(&commutator_algebra(alg.order(), &basis, labels));
        if next.len() == basis.len() {
            break;
        }
        out.push(next.len());
        basis = next;
        labels = next_labels;
    }
    out
}

pub fn der_tower(alg: &LieAlgebra, depth_cap: usize) -> Vec<usize> {
    der_tower_bounded(alg, depth_cap, usize::MAX)
}
