//! The symmetry group of the Pauli grading: 2×2 matrices over Zₙ with
//! determinant ±1, acting on grading indices by (i j) ↦ (i j)·A.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::contraction::relevant_pairs;
use crate::liecore::{canonical_indices, GradingIndex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error("pair {0:?} is not a relevant pair")]
    NotRelevant((usize, usize)),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SymmetryElement {
    pub n: u32,
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl SymmetryElement {
    pub fn new(n: u32, a: i64, b: i64, c: i64, d: i64) -> SymmetryElement {
        let m = |x: i64| x.rem_euclid(n as i64) as u32;
        SymmetryElement { n, a: m(a), b: m(b), c: m(c), d: m(d) }
    }

    pub fn identity(n: u32) -> SymmetryElement {
        SymmetryElement::new(n, 1, 0, 0, 1)
    }

    pub fn det(&self) -> u32 {
        let n = self.n as i64;
        (self.a as i64 * self.d as i64 - self.b as i64 * self.c as i64).rem_euclid(n) as u32
    }

    /// Matrix product self · other mod n.
    pub fn mul(&self, o: &SymmetryElement) -> SymmetryElement {
        let (a, b, c, d) = (self.a as i64, self.b as i64, self.c as i64, self.d as i64);
        let (e, f, g, h) = (o.a as i64, o.b as i64, o.c as i64, o.d as i64);
        SymmetryElement::new(self.n, a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    }

    /// The image (i j)·A of a grading index.
    pub fn apply(&self, g: GradingIndex) -> GradingIndex {
        let (i, j) = (g.r() as i64, g.s() as i64);
        GradingIndex::new(
            self.n,
            i * self.a as i64 + j * self.c as i64,
            i * self.b as i64 + j * self.d as i64,
        )
        .expect("invertible matrices fix only the zero index")
    }
}

/// All matrices with det ≡ ±1 (or +1 only), ordered lexicographically by (a,b,c,d).
pub fn enumerate_group(n: u32, det_plus_only: bool) -> Vec<SymmetryElement> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let g = SymmetryElement { n, a, b, c, d };
                    let det = g.det();
                    if det == 1 % n || (!det_plus_only && det == n - 1) {
                        out.push(g);
                    }
                }
            }
        }
    }
    out
}

/// A permutation of the canonical index positions 0..n²-1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IndexPermutation {
    mapping: Vec<usize>,
}

impl IndexPermutation {
    pub fn identity(len: usize) -> IndexPermutation {
        IndexPermutation { mapping: (0..len).collect() }
    }

    pub fn from_mapping(mapping: Vec<usize>) -> Option<IndexPermutation> {
        let mut seen = vec![false; mapping.len()];
        for &m in &mapping {
            if m >= seen.len() || std::mem::replace(&mut seen[m], true) {
                return None;
            }
        }
        Some(IndexPermutation { mapping })
    }

    pub fn apply(&self, i: usize) -> usize {
        self.mapping[i]
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    /// Applies `self` first and `next` afterwards.
    pub fn then(&self, next: &IndexPermutation) -> IndexPermutation {
        IndexPermutation { mapping: self.mapping.iter().map(|&i| next.mapping[i]).collect() }
    }

    pub fn inverse(&self) -> IndexPermutation {
        let mut inv = vec![0; self.mapping.len()];
        for (i, &m) in self.mapping.iter().enumerate() {
            inv[m] = i;
        }
        IndexPermutation { mapping: inv }
    }

    /// Image of an unordered pair, returned sorted.
    pub fn apply_pair(&self, (p, q): (usize, usize)) -> (usize, usize) {
        let (x, y) = (self.apply(p), self.apply(q));
        (x.min(y), x.max(y))
    }
}

/// π_A on canonical positions. With row vectors, π_{AB} is π_A followed by π_B.
pub fn permutation_of(g: &SymmetryElement) -> IndexPermutation {
    let idx = canonical_indices(g.n);
    let mapping = idx
        .iter()
        .map(|&x| {
            let y = g.apply(x);
            idx.iter().position(|&z| z == y).expect("index present")
        })
        .collect();
    IndexPermutation { mapping }
}

pub fn permutations(group: &[SymmetryElement]) -> Vec<IndexPermutation> {
    group.iter().map(permutation_of).collect()
}

/// Orbit of an unordered tuple of positions; each tuple is stored sorted.
pub fn orbit_of_tuple(t: &[usize], perms: &[IndexPermutation]) -> BTreeSet<Vec<usize>> {
    perms
        .iter()
        .map(|p| {
            let mut v: Vec<usize> = t.iter().map(|&i| p.apply(i)).collect();
            v.sort_unstable();
            v
        })
        .collect()
}

/// Orbit of an unordered tuple of pairs; pairs are sorted inside and the
/// tuple is sorted as a whole.
pub fn orbit_of_pair_tuple(t: &[(usize, usize)], perms: &[IndexPermutation]) -> BTreeSet<Vec<(usize, usize)>> {
    perms
        .iter()
        .map(|p| {
            let mut v: Vec<(usize, usize)> = t.iter().map(|&q| p.apply_pair(q)).collect();
            v.sort_unstable();
            v
        })
        .collect()
}

/// (ε^π)_{ij} = ε_{π(i)π(j)} on a square table.
pub fn act_on_table<T: Clone>(table: &[Vec<T>], perm: &IndexPermutation) -> Vec<Vec<T>> {
    let n = table.len();
    (0..n)
        .map(|i| (0..n).map(|j| table[perm.apply(i)][perm.apply(j)].clone()).collect())
        .collect()
}

/// Partition of the relevant pairs other than `k` under i ≡ j iff some π maps
/// the unordered pair {i, k} onto {j, k}. Classes are sorted by size
/// (descending), then by their first member.
pub fn pair_classes(
    n: u32,
    k: (usize, usize),
    perms: &[IndexPermutation],
) -> Result<Vec<Vec<(usize, usize)>>, SymmetryError> {
    let rel = relevant_pairs(n);
    let k = (k.0.min(k.1), k.0.max(k.1));
    if !rel.contains(&k) {
        return Err(SymmetryError::NotRelevant(k));
    }
    let mut assigned: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut classes = Vec::new();
    for &i in rel.iter().filter(|&&p| p != k) {
        if assigned.contains(&i) {
            continue;
        }
        let mut class = BTreeSet::new();
        for p in perms {
            let (a, b) = (p.apply_pair(i), p.apply_pair(k));
            if b == k {
                class.insert(a);
            } else if a == k {
                class.insert(b);
            }
        }
        class.remove(&k);
        assigned.extend(class.iter().copied());
        classes.push(class.into_iter().collect::<Vec<_>>());
    }
    classes.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_sizes() {
        assert_eq!(enumerate_group(3, false).len(), 48);
        assert_eq!(enumerate_group(3, true).len(), 24);
    }

    #[test]
    fn inverse_composes_to_identity() {
        for g in enumerate_group(3, false) {
            let p = permutation_of(&g);
            assert_eq!(p.then(&p.inverse()), IndexPermutation::identity(8));
        }
    }
}
