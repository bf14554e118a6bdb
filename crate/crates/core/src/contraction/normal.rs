use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::cyclo::Cyclo;
use crate::lattice::{left_kernel, unimodular_generalized_inverse, IMatrix};
use crate::liecore::canonical_indices;
use crate::linalg::Matrix;
use crate::symmetry::{enumerate_group, permutation_of, IndexPermutation, SymmetryElement};

use super::{act_on_matrix, apply_normalization, relevant_pairs, ContractionError};

#[derive(Debug)]
struct SupportData {
    kernel: IMatrix,
    ginv: Option<IMatrix>,
}

/// The 24×8 exponent matrix B with rows e_i + e_j - e_{i+j}, its integer left
/// kernel, and per-support kernels cached on demand.
#[derive(Debug)]
pub struct ExponentLattice {
    pairs: Vec<(usize, usize)>,
    b: IMatrix,
    kernel: IMatrix,
    group: Vec<SymmetryElement>,
    perms: Vec<IndexPermutation>,
    /// For each permutation, the relevant-pair index that pair k is read from.
    pair_maps: Vec<Vec<usize>>,
    cache: Mutex<HashMap<u32, Arc<SupportData>>>,
}

impl Default for ExponentLattice {
    fn default() -> Self {
        Self::new()
    }
}

impl ExponentLattice {
    pub fn new() -> ExponentLattice {
        let idx = canonical_indices(3);
        let pairs = relevant_pairs(3);
        let b: IMatrix = pairs
            .iter()
            .map(|&(p, q)| {
                let s = idx[p].add(idx[q]).expect("relevant pair");
                let r = idx.iter().position(|&x| x == s).expect("index");
                let mut row = vec![0i64; idx.len()];
                row[p] += 1;
                row[q] += 1;
                row[r] -= 1;
                row
            })
            .collect();
        let kernel = left_kernel(&b, idx.len()).expect("small entries");
        let group = enumerate_group(3, false);
        let perms: Vec<IndexPermutation> = group.iter().map(permutation_of).collect();
        let pair_maps = perms
            .iter()
            .map(|perm| {
                pairs
                    .iter()
                    .map(|&pq| pairs.iter().position(|&x| x == perm.apply_pair(pq)).expect("relevant"))
                    .collect()
            })
            .collect();
        ExponentLattice { pairs, b, kernel, group, perms, pair_maps, cache: Mutex::new(HashMap::new()) }
    }

    pub fn matrix(&self) -> &IMatrix {
        &self.b
    }

    pub fn left_kernel_basis(&self) -> &IMatrix {
        &self.kernel
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn group(&self) -> &[SymmetryElement] {
        &self.group
    }

    pub fn permutations(&self) -> &[IndexPermutation] {
        &self.perms
    }

    /// Whether an exponent vector over the relevant pairs lies in the left kernel.
    pub fn in_left_kernel(&self, u: &[i64]) -> bool {
        (0..8).all(|j| u.iter().zip(&self.b).map(|(x, row)| x * row[j]).sum::<i64>() == 0)
    }

    /// Bitmask of relevant pairs with a nonzero entry.
    pub fn support_mask(&self, m: &Matrix) -> u32 {
        self.pairs
            .iter()
            .enumerate()
            .filter(|(_, &(p, q))| !m.get(p, q).is_zero())
            .fold(0, |acc, (k, _)| acc | (1 << k))
    }

    fn support_data(&self, mask: u32) -> Result<Arc<SupportData>, ContractionError> {
        if let Some(d) = self.cache.lock().expect("cache lock").get(&mask) {
            return Ok(d.clone());
        }
        let rows: IMatrix = (0..self.pairs.len()).filter(|k| mask >> k & 1 == 1).map(|k| self.b[k].clone()).collect();
        let data = if rows.is_empty() {
            SupportData { kernel: Vec::new(), ginv: Some(vec![Vec::new(); 8]) }
        } else {
            SupportData { kernel: left_kernel(&rows, 8)?, ginv: unimodular_generalized_inverse(&rows, 8)? }
        };
        let data = Arc::new(data);
        self.cache.lock().expect("cache lock").insert(mask, data.clone());
        Ok(data)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalizationVerdict {
    /// Every kernel relation holds, so some α maps x to y. The scalings a_k
    /// are included when they are reachable without taking roots.
    Compatible { scalings: Option<Vec<Cyclo>> },
    /// A left-kernel vector u (over all 24 relevant pairs) with Π (y/x)^u ≠ 1.
    Violated { kernel_vector: Vec<i64> },
}

/// Decides whether y = α∘x for a normalization matrix α.
pub fn normalization_between(
    lat: &ExponentLattice,
    x: &Matrix,
    y: &Matrix,
) -> Result<NormalizationVerdict, ContractionError> {
    let mask = lat.support_mask(x);
    if mask != lat.support_mask(y) {
        return Err(ContractionError::NotComparable);
    }
    let support: Vec<usize> = (0..lat.pairs.len()).filter(|k| mask >> k & 1 == 1).collect();
    let ratios: Vec<Cyclo> = support
        .iter()
        .map(|&k| {
            let (p, q) = lat.pairs[k];
            y.get(p, q) / x.get(p, q)
        })
        .collect();
    let data = lat.support_data(mask)?;
    for u in &data.kernel {
        let mut acc = Cyclo::one(3);
        for (r, &e) in ratios.iter().zip(u) {
            if e != 0 {
                acc = &acc * &r.pow(e).expect("nonzero ratio");
            }
        }
        if !acc.is_one() {
            let mut full = vec![0i64; lat.pairs.len()];
            for (&k, &e) in support.iter().zip(u) {
                full[k] = e;
            }
            return Ok(NormalizationVerdict::Violated { kernel_vector: full });
        }
    }
    let scalings = data.ginv.as_ref().map(|w| {
        (0..8)
            .map(|k| {
                let mut acc = Cyclo::one(3);
                for (r, &e) in ratios.iter().zip(&w[k]) {
                    if e != 0 {
                        acc = &acc * &r.pow(e).expect("nonzero ratio");
                    }
                }
                acc
            })
            .collect::<Vec<_>>()
    });
    if let Some(a) = &scalings {
        debug_assert_eq!(&apply_normalization(x, a), y);
    }
    Ok(NormalizationVerdict::Compatible { scalings })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent { element: SymmetryElement, scalings: Option<Vec<Cyclo>> },
    NotEquivalent,
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent { .. })
    }
}

/// Searches π in H3 with matching zero pattern and a normalization from x^π to y.
/// Both inputs are assumed to be solutions; see `Context::equivalent` for the
/// checked entry point.
pub fn equivalent(lat: &ExponentLattice, x: &Matrix, y: &Matrix) -> Result<Equivalence, ContractionError> {
    let mx = lat.support_mask(x);
    let my = lat.support_mask(y);
    if mx.count_ones() != my.count_ones() {
        return Ok(Equivalence::NotEquivalent);
    }
    for (g, (perm, map)) in lat.group.iter().zip(lat.perms.iter().zip(&lat.pair_maps)) {
        // (x^π) is nonzero at pair k iff x is nonzero at π(k).
        let permuted = map.iter().enumerate().filter(|(_, &src)| mx >> src & 1 == 1).fold(0u32, |acc, (k, _)| acc | (1 << k));
        if permuted != my {
            continue;
        }
        let xp = act_on_matrix(x, perm);
        if let NormalizationVerdict::Compatible { scalings } = normalization_between(lat, &xp, y)? {
            return Ok(Equivalence::Equivalent { element: *g, scalings });
        }
    }
    Ok(Equivalence::NotEquivalent)
}
