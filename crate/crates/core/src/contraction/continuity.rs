use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cyclo::{Cyclo, Rational};
use crate::linalg::Matrix;

use super::normal::{normalization_between, ExponentLattice, NormalizationVerdict};
use super::system::{violated_identity, IdentityRelation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Continuity {
    /// Integer weights n_i with n_i + n_j - n_{i+j} zero on the support and
    /// positive on relevant zeros.
    Continuous { weights: Vec<i64> },
    Discrete { identity: IdentityRelation },
    Unknown { reason: String },
}

impl Continuity {
    pub fn tag(&self) -> &'static str {
        match self {
            Continuity::Continuous { .. } => "C",
            Continuity::Discrete { .. } => "D",
            Continuity::Unknown { .. } => "?",
        }
    }
}

/// Classifies a solution; the caller is responsible for checking that `x`
/// solves the contraction system.
pub fn classify_continuity(lat: &ExponentLattice, identities: &[IdentityRelation], x: &Matrix) -> Continuity {
    if let Some(id) = violated_identity(x, identities) {
        return Continuity::Discrete { identity: id.clone() };
    }
    let mut pattern = Matrix::zeros(3, 8, 8);
    for &(p, q) in lat.pairs() {
        if !x.get(p, q).is_zero() {
            pattern.set(p, q, Cyclo::one(3));
            pattern.set(q, p, Cyclo::one(3));
        }
    }
    match normalization_between(lat, x, &pattern) {
        Ok(NormalizationVerdict::Compatible { .. }) => {}
        Ok(NormalizationVerdict::Violated { .. }) => {
            return Continuity::Unknown { reason: "not a rescaling of its zero pattern".into() };
        }
        Err(e) => return Continuity::Unknown { reason: e.to_string() },
    }
    let mask = lat.support_mask(x);
    match iw_weights(lat, mask) {
        Some(weights) => Continuity::Continuous { weights },
        None => Continuity::Unknown { reason: "no integer contraction weights".into() },
    }
}

/// Integer weights for the support `mask`, found by rational feasibility.
pub fn iw_weights(lat: &ExponentLattice, mask: u32) -> Option<Vec<i64>> {
    let b = lat.matrix();
    let to_q = |row: &Vec<i64>| row.iter().map(|&v| Rational::from_integer(v.into())).collect::<Vec<_>>();
    let eqs: Vec<Vec<Rational>> = (0..b.len()).filter(|k| mask >> k & 1 == 1).map(|k| to_q(&b[k])).collect();
    let ineqs: Vec<Vec<Rational>> = (0..b.len()).filter(|k| mask >> k & 1 == 0).map(|k| to_q(&b[k])).collect();
    // n = N f parametrizes the equality constraints.
    let basis = rational_kernel(&eqs, 8);
    let m = basis.len();
    let project = |row: &Vec<Rational>| -> Vec<Rational> {
        (0..m).map(|j| row.iter().zip(&basis[j]).map(|(a, v)| a * v).sum()).collect()
    };
    let system: Vec<Ineq> = ineqs.iter().map(|r| Ineq { a: project(r), b: Rational::one() }).collect();
    let f = fourier_motzkin(system, m)?;
    let mut n: Vec<Rational> = vec![Rational::zero(); 8];
    for (fj, v) in f.iter().zip(&basis) {
        for (ni, vi) in n.iter_mut().zip(v) {
            *ni += fj * vi;
        }
    }
    let denom = n.iter().fold(num_bigint::BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let weights: Vec<i64> = n.iter().map(|q| (q * Rational::from_integer(denom.clone())).to_integer().to_i64()).collect::<Option<_>>()?;
    // Confirm the integer solution exactly.
    for (k, row) in b.iter().enumerate() {
        let v: i64 = row.iter().zip(&weights).map(|(x, y)| x * y).sum();
        let ok = if mask >> k & 1 == 1 { v == 0 } else { v >= 1 };
        if !ok {
            return None;
        }
    }
    Some(weights)
}

fn rational_kernel(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut rows = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pr = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// a · x ≥ b
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Ineq {
    a: Vec<Rational>,
    b: Rational,
}

impl Ineq {
    /// Scales so the first nonzero coefficient has absolute value one.
    fn normalize(mut self) -> Ineq {
        if let Some(c) = self.a.iter().find(|x| !x.is_zero()).map(|x| x.abs()) {
            for x in self.a.iter_mut() {
                *x /= &c;
            }
            self.b /= &c;
        }
        self
    }
}

fn dedupe(mut v: Vec<Ineq>) -> Vec<Ineq> {
    v = v.into_iter().map(Ineq::normalize).collect();
    v.sort();
    // Same left side: keep the strongest bound.
    let mut out: Vec<Ineq> = Vec::new();
    for q in v {
        match out.last_mut() {
            Some(last) if last.a == q.a => {
                if q.b > last.b {
                    last.b = q.b;
                }
            }
            _ => out.push(q),
        }
    }
    out
}

/// Exact Fourier–Motzkin elimination; returns a feasible point or None.
fn fourier_motzkin(system: Vec<Ineq>, vars: usize) -> Option<Vec<Rational>> {
    let mut stages: Vec<Vec<Ineq>> = Vec::with_capacity(vars + 1);
    let mut cur = dedupe(system);
    for k in 0..vars {
        stages.push(cur.clone());
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for q in cur {
            if q.a[k].is_positive() {
                pos.push(q);
            } else if q.a[k].is_negative() {
                neg.push(q);
            } else {
                rest.push(q);
            }
        }
        for p in &pos {
            for n in &neg {
                // Combine so that variable k cancels.
                let (cp, cn) = (-n.a[k].clone(), p.a[k].clone());
                let a = p.a.iter().zip(&n.a).map(|(x, y)| x * &cp + y * &cn).collect();
                rest.push(Ineq { a, b: &p.b * &cp + &n.b * &cn });
            }
        }
        cur = dedupe(rest);
    }
    if cur.iter().any(|q| q.b.is_positive()) {
        return None;
    }
    let mut x = vec![Rational::zero(); vars];
    for k in (0..vars).rev() {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for q in &stages[k] {
            if q.a[k].is_zero() {
                continue;
            }
            let rest: Rational = (k + 1..vars).map(|j| &q.a[j] * &x[j]).sum();
            let bound = (&q.b - rest) / &q.a[k];
            if q.a[k].is_positive() {
                lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
            } else {
                hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
            }
        }
        x[k] = match (lo, hi) {
            (Some(l), _) => l,
            (None, Some(h)) => h,
            (None, None) => Rational::zero(),
        };
    }
    Some(x)
}
