use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::cyclo::Cyclo;
use crate::liecore::{canonical_indices, GradingIndex};
use crate::linalg::Matrix;
use crate::symmetry::{enumerate_group, permutations, IndexPermutation};

use super::{pair_label, parse_pair, relevant_pairs, ContractionError};

/// One product term `coeff · ε_{p1} · ε_{p2}`; pairs are stored sorted.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Term {
    pub coeff: Cyclo,
    pub p1: (usize, usize),
    pub p2: (usize, usize),
}

/// The Jacobi condition of one index triple: Σ terms = 0.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ContractionEquation {
    pub n: u32,
    pub triple: [usize; 3],
    pub terms: Vec<Term>,
}

impl ContractionEquation {
    pub fn evaluate(&self, m: &Matrix) -> Cyclo {
        let mut acc = Cyclo::zero(self.n);
        for t in &self.terms {
            let x = m.get(t.p1.0, t.p1.1);
            let y = m.get(t.p2.0, t.p2.1);
            if !x.is_zero() && !y.is_zero() {
                acc += &(&(&t.coeff * x) * y);
            }
        }
        acc
    }

    /// The same equation scaled so that the first coefficient is one.
    pub fn normalized(&self) -> ContractionEquation {
        let inv = self.terms[0].coeff.inv().expect("nonzero coefficient");
        let terms = self.terms.iter().map(|t| Term { coeff: &t.coeff * &inv, ..t.clone() }).collect();
        ContractionEquation { terms, ..self.clone() }
    }

    /// Coefficients keyed by the (sorted) pair product they multiply.
    pub fn coefficient_map(&self) -> BTreeMap<((usize, usize), (usize, usize)), Cyclo> {
        self.terms.iter().map(|t| ((t.p1, t.p2), t.coeff.clone())).collect()
    }

    /// The equation with ε_p replaced by ε_{π(p)}.
    pub fn substitute(&self, perm: &IndexPermutation) -> ContractionEquation {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let (a, b) = (perm.apply_pair(t.p1), perm.apply_pair(t.p2));
                Term { coeff: t.coeff.clone(), p1: a.min(b), p2: a.max(b) }
            })
            .collect();
        let mut triple = self.triple.map(|i| perm.apply(i));
        triple.sort_unstable();
        ContractionEquation { n: self.n, triple, terms }
    }

    pub fn triple_label(&self) -> String {
        let idx = canonical_indices(self.n);
        self.triple.iter().map(|&i| idx[i].to_string()).collect()
    }
}

impl fmt::Display for ContractionEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({})*eps{}*eps{}", t.coeff, pair_label(self.n, t.p1), pair_label(self.n, t.p2))?;
        }
        f.write_str(" = 0")
    }
}

fn bracket_coefficient(n: u32, a: GradingIndex, b: GradingIndex) -> Cyclo {
    let w = |k: i64| Cyclo::root_power(n, k).expect("supported order");
    w(a.s() as i64 * b.r() as i64) - w(a.r() as i64 * b.s() as i64)
}

/// One equation per unordered triple of distinct indices that is not
/// identically satisfied. Terms with equal pair products are merged.
pub fn generate_system(n: u32) -> Result<Vec<ContractionEquation>, ContractionError> {
    if n != 3 && n != 5 {
        return Err(ContractionError::UnsupportedOrder(n));
    }
    let idx = canonical_indices(n);
    let pos = |g: GradingIndex| idx.iter().position(|&x| x == g).expect("index present");
    let sorted = |p: usize, q: usize| (p.min(q), p.max(q));
    let mut out = Vec::new();
    let len = idx.len();
    for i in 0..len {
        for j in i + 1..len {
            for k in j + 1..len {
                let mut acc: BTreeMap<((usize, usize), (usize, usize)), Cyclo> = BTreeMap::new();
                // [x, [y, z]] contributes ε_{yz} ε_{x, y+z} c(y,z) c(x, y+z).
                for (x, y, z) in [(i, j, k), (k, i, j), (j, k, i)] {
                    let Some(yz) = idx[y].add(idx[z]) else { continue };
                    let c = &bracket_coefficient(n, idx[y], idx[z]) * &bracket_coefficient(n, idx[x], yz);
                    if c.is_zero() {
                        continue;
                    }
                    let (a, b) = (sorted(y, z), sorted(x, pos(yz)));
                    let key = (a.min(b), a.max(b));
                    *acc.entry(key).or_insert_with(|| Cyclo::zero(n)) += &c;
                }
                let terms: Vec<Term> = acc
                    .into_iter()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|((p1, p2), coeff)| Term { coeff, p1, p2 })
                    .collect();
                if !terms.is_empty() {
                    out.push(ContractionEquation { n, triple: [i, j, k], terms });
                }
            }
        }
    }
    Ok(out)
}

/// Groups equation positions into orbits of their index triples under the
/// given permutations, in order of first appearance.
pub fn equation_orbits(system: &[ContractionEquation], perms: &[IndexPermutation]) -> Vec<Vec<usize>> {
    let position: BTreeMap<[usize; 3], usize> = system.iter().enumerate().map(|(k, e)| (e.triple, k)).collect();
    let mut seen = vec![false; system.len()];
    let mut out = Vec::new();
    for k in 0..system.len() {
        if seen[k] {
            continue;
        }
        let mut orbit = BTreeSet::new();
        for p in perms {
            let mut t = system[k].triple.map(|i| p.apply(i));
            t.sort_unstable();
            if let Some(&j) = position.get(&t) {
                orbit.insert(j);
            }
        }
        for &j in &orbit {
            seen[j] = true;
        }
        out.push(orbit.into_iter().collect());
    }
    out
}

/// Rank over the field of the given equations, each read as a coefficient
/// vector indexed by pair products.
pub fn relation_rank(equations: &[&ContractionEquation]) -> usize {
    let Some(first) = equations.first() else { return 0 };
    let n = first.n;
    let keys: BTreeSet<((usize, usize), (usize, usize))> =
        equations.iter().flat_map(|e| e.coefficient_map().into_keys()).collect();
    let keys: Vec<_> = keys.into_iter().collect();
    let rows: Vec<Vec<Cyclo>> = equations
        .iter()
        .map(|e| {
            let map = e.coefficient_map();
            keys.iter().map(|k| map.get(k).cloned().unwrap_or_else(|| Cyclo::zero(n))).collect()
        })
        .collect();
    Matrix::from_rows(n, keys.len(), &rows).rank()
}

/// The equations for the triples (01)(02)(10)·A, A in SL(2,Z3), grouped by the
/// cosets {A, XA, X²A} with X = (1 2; 0 1). Each group is returned as
/// positions into `system`.
pub fn coset_triples(system: &[ContractionEquation]) -> Vec<[usize; 3]> {
    let idx = canonical_indices(3);
    let rep = ["01", "02", "10"].map(|t| GradingIndex::parse(3, t).expect("valid index"));
    let position: BTreeMap<[usize; 3], usize> = system.iter().enumerate().map(|(k, e)| (e.triple, k)).collect();
    let find = |a: &crate::symmetry::SymmetryElement| {
        let mut t = rep.map(|g| idx.iter().position(|&x| x == a.apply(g)).expect("index present"));
        t.sort_unstable();
        position[&t]
    };
    let x = crate::symmetry::SymmetryElement::new(3, 1, 2, 0, 1);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for a in enumerate_group(3, true) {
        if seen.contains(&(a.a, a.b, a.c, a.d)) {
            continue;
        }
        let xa = x.mul(&a);
        let xxa = x.mul(&xa);
        for g in [&a, &xa, &xxa] {
            seen.insert((g.a, g.b, g.c, g.d));
        }
        out.push([find(&a), find(&xa), find(&xxa)]);
    }
    out
}

/// Ok when every equation vanishes; otherwise the first violated equation.
pub fn check_solution<'a>(m: &Matrix, system: &'a [ContractionEquation]) -> Result<(), &'a ContractionEquation> {
    match system.iter().find(|e| !e.evaluate(m).is_zero()) {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// A multiplicative relation Π ε^{u} = 1 over the relevant pairs; positive
/// exponents form the left side.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IdentityRelation {
    pub exponent: Vec<i64>,
    pub order: u32,
    pub orbit: usize,
}

impl IdentityRelation {
    fn from_sides(lhs: &[(usize, usize)], rhs: &[(usize, usize)], orbit: usize) -> IdentityRelation {
        let rel = relevant_pairs(3);
        let mut exponent = vec![0i64; rel.len()];
        for p in lhs {
            exponent[rel.iter().position(|q| q == p).expect("relevant")] += 1;
        }
        for p in rhs {
            exponent[rel.iter().position(|q| q == p).expect("relevant")] -= 1;
        }
        let order = lhs.len() as u32;
        let mut r = IdentityRelation { exponent, order, orbit };
        r.canonicalize();
        r
    }

    fn canonicalize(&mut self) {
        if self.exponent.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            for x in self.exponent.iter_mut() {
                *x = -*x;
            }
        }
    }

    fn side(&self, positive: bool) -> Vec<(usize, usize)> {
        let rel = relevant_pairs(3);
        let mut out = Vec::new();
        for (p, &e) in rel.iter().zip(&self.exponent) {
            let k = if positive { e } else { -e };
            for _ in 0..k.max(0) {
                out.push(*p);
            }
        }
        out
    }

    pub fn lhs(&self) -> Vec<(usize, usize)> {
        self.side(true)
    }

    pub fn rhs(&self) -> Vec<(usize, usize)> {
        self.side(false)
    }

    /// Whether the two sides agree on a concrete matrix.
    pub fn holds(&self, m: &Matrix) -> bool {
        let prod = |ps: Vec<(usize, usize)>| {
            ps.into_iter().fold(Cyclo::one(3), |acc, (p, q)| &acc * m.get(p, q))
        };
        prod(self.lhs()) == prod(self.rhs())
    }

    pub fn substitute(&self, perm: &IndexPermutation) -> IdentityRelation {
        let map = |ps: Vec<(usize, usize)>| ps.into_iter().map(|p| perm.apply_pair(p)).collect::<Vec<_>>();
        IdentityRelation::from_sides(&map(self.lhs()), &map(self.rhs()), self.orbit)
    }
}

impl fmt::Display for IdentityRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |ps: Vec<(usize, usize)>| {
            ps.into_iter().map(|p| format!("eps{}", pair_label(3, p))).collect::<Vec<_>>().join("*")
        };
        write!(f, "{} = {}", side(self.lhs()), side(self.rhs()))
    }
}

const REPRESENTATIVES: [&str; 5] = [
    "(01)(10) (02)(11) = (01)(20) (02)(21)",
    "(01)(10) (01)(11) (01)(12) = (01)(20) (01)(22) (01)(21)",
    "(01)(10) (01)(12) (02)(21) = (01)(22) (01)(21) (02)(12)",
    "(01)(10) (01)(11) (02)(21) = (01)(22) (01)(21) (02)(10)",
    "(01)(10) (01)(11) (02)(22) = (01)(20) (01)(22) (02)(10)",
];

/// The five orbit representatives of the second and third order identities.
pub fn identity_representatives() -> Vec<IdentityRelation> {
    REPRESENTATIVES
        .iter()
        .enumerate()
        .map(|(k, text)| {
            let (l, r) = text.split_once('=').expect("two sides");
            let side = |s: &str| s.split_whitespace().map(|p| parse_pair(3, p).expect("pair")).collect::<Vec<_>>();
            IdentityRelation::from_sides(&side(l), &side(r), k)
        })
        .collect()
}

/// All images of the representatives under SL(2, Z3), deduplicated, grouped
/// by orbit in representative order.
pub fn generate_identities() -> Vec<IdentityRelation> {
    let perms = permutations(&enumerate_group(3, true));
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut out = Vec::new();
    for rep in identity_representatives() {
        let mut orbit: BTreeSet<Vec<i64>> = BTreeSet::new();
        for p in &perms {
            orbit.insert(rep.substitute(p).exponent);
        }
        for e in orbit {
            if seen.insert(e.clone()) {
                out.push(IdentityRelation { exponent: e, order: rep.order, orbit: rep.orbit });
            }
        }
    }
    out
}

pub fn violated_identity<'a>(m: &Matrix, identities: &'a [IdentityRelation]) -> Option<&'a IdentityRelation> {
    identities.iter().find(|r| !r.holds(m))
}

/// The constraints Π_{k∈P} ε_{π(k)} = 0 over all π in H3, each given as its
/// sorted set of pairs.
pub fn build_nonequivalence_system(p: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    let perms = permutations(&enumerate_group(3, false));
    let set: BTreeSet<Vec<(usize, usize)>> = perms
        .iter()
        .map(|perm| {
            let mut v: Vec<(usize, usize)> = p.iter().map(|&q| perm.apply_pair(q)).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    set.into_iter().collect()
}

/// Whether every product constraint vanishes on `m`.
pub fn satisfies_nonequivalence(m: &Matrix, system: &[Vec<(usize, usize)>]) -> bool {
    system.iter().all(|c| c.iter().any(|&(p, q)| m.get(p, q).is_zero()))
}
