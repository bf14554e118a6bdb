//! Lie algebras given by exact structure constants, and the Pauli-graded
//! sl(n) they are contracted from.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::cyclo::{is_supported_order, Cyclo};
use crate::linalg::{axpy, is_zero_vector, zero_vector, Frame, Matrix, Subspace, Vector};
use crate::poly::{coefficient_text, parse_basis_poly, ExprError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("cyclotomic order {0} is not supported")]
    UnsupportedOrder(u32),
    #[error("vector of length {got} given where length {expected} was required")]
    LengthMismatch { expected: usize, got: usize },
    #[error("a {rows}x{cols} matrix does not fit an algebra of dimension {dim}")]
    ShapeMismatch { rows: usize, cols: usize, dim: usize },
    #[error("basis matrix is singular")]
    Singular,
    #[error("subspace is not closed under the bracket")]
    NotClosed,
    #[error("bad bracket line {line:?}: {msg}")]
    Parse { line: String, msg: String },
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// An element of Zₙ × Zₙ; the zero element is allowed so that derivation
/// algebras can carry degree labels.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Degree {
    pub n: u8,
    pub r: u8,
    pub s: u8,
}

impl Degree {
    pub fn new(n: u32, r: i64, s: i64) -> Degree {
        let m = n as i64;
        Degree { n: n as u8, r: r.rem_euclid(m) as u8, s: s.rem_euclid(m) as u8 }
    }

    pub fn zero(n: u32) -> Degree {
        Degree::new(n, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.r == 0 && self.s == 0
    }

    pub fn add(self, o: Degree) -> Degree {
        Degree::new(self.n as u32, (self.r + o.r) as i64, (self.s + o.s) as i64)
    }

    pub fn sub(self, o: Degree) -> Degree {
        Degree::new(self.n as u32, self.r as i64 - o.r as i64, self.s as i64 - o.s as i64)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}{})", self.r, self.s)
    }
}

/// A nonzero grading index (r, s) of the Pauli grading.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GradingIndex(Degree);

impl GradingIndex {
    pub fn new(n: u32, r: i64, s: i64) -> Option<GradingIndex> {
        let d = Degree::new(n, r, s);
        (!d.is_zero()).then_some(GradingIndex(d))
    }

    pub fn r(&self) -> u8 {
        self.0.r
    }

    pub fn s(&self) -> u8 {
        self.0.s
    }

    pub fn order(&self) -> u32 {
        self.0.n as u32
    }

    pub fn degree(&self) -> Degree {
        self.0
    }

    /// The sum, or None when it vanishes.
    pub fn add(self, o: GradingIndex) -> Option<GradingIndex> {
        let d = self.0.add(o.0);
        (!d.is_zero()).then_some(GradingIndex(d))
    }

    /// Whether the bracket with `o` is nonzero, i.e. s r' - r s' is not 0 mod n.
    pub fn relevant_with(&self, o: &GradingIndex) -> bool {
        let n = self.order() as i64;
        (self.s() as i64 * o.r() as i64 - self.r() as i64 * o.s() as i64).rem_euclid(n) != 0
    }

    /// Parses "(rs)" or "rs" with single-digit residues.
    pub fn parse(n: u32, text: &str) -> Option<GradingIndex> {
        let t = text.trim().trim_start_matches('(').trim_end_matches(')');
        let mut it = t.chars();
        let r = it.next()?.to_digit(10)?;
        let s = it.next()?.to_digit(10)?;
        if it.next().is_some() || r >= n || s >= n {
            return None;
        }
        GradingIndex::new(n, r as i64, s as i64)
    }
}

impl fmt::Display for GradingIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The nonzero indices in canonical order: the lines through (0,1), (1,0),
/// (1,1), ..., (1,n-1), each listed by multiples 1..n-1. For n = 3 this is
/// (01) (02) (10) (20) (11) (22) (12) (21).
pub fn canonical_indices(n: u32) -> Vec<GradingIndex> {
    let mut dirs = vec![(0, 1), (1, 0)];
    dirs.extend((1..n as i64).map(|k| (1, k)));
    let mut out = Vec::new();
    for (r, s) in dirs {
        for m in 1..n as i64 {
            out.push(GradingIndex::new(n, r * m, s * m).expect("nonzero"));
        }
    }
    out
}

/// Structure constants c_{ij}^k stored for i < j only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    n: u32,
    dim: usize,
    table: BTreeMap<(usize, usize), Vector>,
}

impl StructureConstants {
    pub fn new(n: u32, dim: usize) -> StructureConstants {
        StructureConstants { n, dim, table: BTreeMap::new() }
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sets [e_i, e_j]; the pair is reordered with a sign flip when i > j.
    pub fn set(&mut self, i: usize, j: usize, v: Vector) -> Result<(), LieError> {
        if v.len() != self.dim {
            return Err(LieError::LengthMismatch { expected: self.dim, got: v.len() });
        }
        assert!(i != j && i < self.dim && j < self.dim, "bracket indices out of range");
        let (key, v) = if i < j { ((i, j), v) } else { ((j, i), v.into_iter().map(|x| -x).collect()) };
        if is_zero_vector(&v) {
            self.table.remove(&key);
        } else {
            self.table.insert(key, v);
        }
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&Vector> {
        self.table.get(&(i, j))
    }

    /// Nonzero entries (i, j, c_{ij}) with i < j.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Vector)> {
        self.table.iter().map(|(&(i, j), v)| (i, j, v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    constants: StructureConstants,
    grading: Option<Vec<Degree>>,
}

impl LieAlgebra {
    pub fn new(constants: StructureConstants, grading: Option<Vec<Degree>>) -> LieAlgebra {
        if let Some(g) = &grading {
            assert_eq!(g.len(), constants.dim, "one grading label per basis vector");
        }
        LieAlgebra { constants, grading }
    }

    pub fn abelian(n: u32, dim: usize) -> LieAlgebra {
        LieAlgebra::new(StructureConstants::new(n, dim), None)
    }

    /// The Pauli-graded sl(n): [X_rs, X_r's'] = (ω^{sr'} - ω^{rs'}) X_{r+r', s+s'}.
    pub fn pauli(n: u32) -> Result<LieAlgebra, LieError> {
        if !is_supported_order(n) || n < 3 {
            return Err(LieError::UnsupportedOrder(n));
        }
        let idx = canonical_indices(n);
        let dim = idx.len();
        let pos: HashMap<GradingIndex, usize> = idx.iter().enumerate().map(|(i, g)| (*g, i)).collect();
        let mut sc = StructureConstants::new(n, dim);
        for i in 0..dim {
            for j in i + 1..dim {
                let (a, b) = (idx[i], idx[j]);
                let Some(sum) = a.add(b) else { continue };
                let c = Cyclo::root_power(n, a.s() as i64 * b.r() as i64).expect("order")
                    - Cyclo::root_power(n, a.r() as i64 * b.s() as i64).expect("order");
                if c.is_zero() {
                    continue;
                }
                let mut v = zero_vector(n, dim);
                v[pos[&sum]] = c;
                sc.set(i, j, v)?;
            }
        }
        let grading = idx.iter().map(GradingIndex::degree).collect();
        Ok(LieAlgebra::new(sc, Some(grading)))
    }

    pub fn dim(&self) -> usize {
        self.constants.dim
    }

    pub fn order(&self) -> u32 {
        self.constants.n
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.constants
    }

    pub fn grading(&self) -> Option<&[Degree]> {
        self.grading.as_deref()
    }

    pub fn without_grading(mut self) -> LieAlgebra {
        self.grading = None;
        self
    }

    pub fn is_abelian(&self) -> bool {
        self.constants.table.is_empty()
    }

    /// [e_i, e_j] as a coefficient vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        let n = self.order();
        if i == j {
            return zero_vector(n, self.dim());
        }
        let (a, b, flip) = if i < j { (i, j, false) } else { (j, i, true) };
        match self.constants.get(a, b) {
            Some(v) if flip => v.iter().map(|x| -x).collect(),
            Some(v) => v.clone(),
            None => zero_vector(n, self.dim()),
        }
    }

    pub fn bracket(&self, x: &[Cyclo], y: &[Cyclo]) -> Result<Vector, LieError> {
        let dim = self.dim();
        for v in [x, y] {
            if v.len() != dim {
                return Err(LieError::LengthMismatch { expected: dim, got: v.len() });
            }
        }
        let mut out = zero_vector(self.order(), dim);
        for (i, j, c) in self.constants.entries() {
            // x_i y_j - x_j y_i
            let f = &(&x[i] * &y[j]) - &(&x[j] * &y[i]);
            axpy(&mut out, &f, c);
        }
        Ok(out)
    }

    /// The matrix of ad x; column j holds [x, e_j].
    pub fn ad(&self, x: &[Cyclo]) -> Matrix {
        let dim = self.dim();
        let mut m = Matrix::zeros(self.order(), dim, dim);
        for (i, j, c) in self.constants.entries() {
            // [x, e_j] gains x_i c_ij; [x, e_i] gains -x_j c_ij.
            for (k, ck) in c.iter().enumerate() {
                if ck.is_zero() {
                    continue;
                }
                if !x[i].is_zero() {
                    let t = m.get(k, j) + &(&x[i] * ck);
                    m.set(k, j, t);
                }
                if !x[j].is_zero() {
                    let t = m.get(k, i) - &(&x[j] * ck);
                    m.set(k, i, t);
                }
            }
        }
        m
    }

    pub fn ad_basis(&self, i: usize) -> Matrix {
        let mut x = zero_vector(self.order(), self.dim());
        x[i] = Cyclo::one(self.order());
        self.ad(&x)
    }

    /// Basis triples i < j < k where the Jacobi identity fails, with the defect.
    pub fn jacobi_defect(&self) -> Vec<(usize, usize, usize, Vector)> {
        let dim = self.dim();
        let ads: Vec<Matrix> = (0..dim).map(|i| self.ad_basis(i)).collect();
        let mut out = Vec::new();
        for i in 0..dim {
            for j in i + 1..dim {
                for k in j + 1..dim {
                    let mut d = ads[i].mul_vec(&self.bracket_basis(j, k));
                    for v in [ads[k].mul_vec(&self.bracket_basis(i, j)), ads[j].mul_vec(&self.bracket_basis(k, i))] {
                        for (a, b) in d.iter_mut().zip(&v) {
                            *a += b;
                        }
                    }
                    if !is_zero_vector(&d) {
                        out.push((i, j, k, d));
                    }
                }
            }
        }
        out
    }

    pub fn is_lie(&self) -> bool {
        self.jacobi_defect().is_empty()
    }

    /// Multiplies c_{ij} by eps[i][j]; Jacobi is not re-checked.
    pub fn apply_contraction(&self, eps: &Matrix) -> Result<LieAlgebra, LieError> {
        let dim = self.dim();
        if eps.nrows() != dim || eps.ncols() != dim {
            return Err(LieError::ShapeMismatch { rows: eps.nrows(), cols: eps.ncols(), dim });
        }
        let mut sc = StructureConstants::new(self.order(), dim);
        for (i, j, c) in self.constants.entries() {
            let e = eps.get(i, j);
            if !e.is_zero() {
                sc.set(i, j, c.iter().map(|x| x * e).collect())?;
            }
        }
        Ok(LieAlgebra::new(sc, self.grading.clone()))
    }

    /// K(u, v) = Tr(ad u ad v) on basis vectors, with columns taken from the
    /// given subspace when present.
    pub fn trace_form(&self, restrict_to: Option<&Subspace>) -> Matrix {
        let n = self.order();
        let dim = self.dim();
        let ads: Vec<Matrix> = (0..dim).map(|i| self.ad_basis(i)).collect();
        let cols: Vec<Matrix> = match restrict_to {
            Some(s) => s.basis().iter().map(|v| self.ad(v)).collect(),
            None => ads.clone(),
        };
        let mut k = Matrix::zeros(n, dim, cols.len());
        for (i, a) in ads.iter().enumerate() {
            for (j, b) in cols.iter().enumerate() {
                k.set(i, j, trace_of_product(a, b));
            }
        }
        k
    }

    /// The algebra in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &Matrix) -> Result<LieAlgebra, LieError> {
        let dim = self.dim();
        if p.nrows() != dim || p.ncols() != dim {
            return Err(LieError::ShapeMismatch { rows: p.nrows(), cols: p.ncols(), dim });
        }
        let inv = p.inverse().ok_or(LieError::Singular)?;
        let cols: Vec<Vector> = (0..dim).map(|j| p.column(j)).collect();
        let mut sc = StructureConstants::new(self.order(), dim);
        for a in 0..dim {
            for b in a + 1..dim {
                let v = self.bracket(&cols[a], &cols[b])?;
                sc.set(a, b, inv.mul_vec(&v))?;
            }
        }
        Ok(LieAlgebra::new(sc, None))
    }

    /// The subalgebra spanned by `basis`, expressed in that basis.
    pub fn restrict(&self, basis: &[Vector], grading: Option<Vec<Degree>>) -> Result<LieAlgebra, LieError> {
        let frame = Frame::new(self.order(), self.dim(), basis);
        let k = basis.len();
        let mut sc = StructureConstants::new(self.order(), k);
        for a in 0..k {
            for b in a + 1..k {
                let v = self.bracket(&basis[a], &basis[b])?;
                let c = frame.coordinates(&v).ok_or(LieError::NotClosed)?;
                sc.set(a, b, c)?;
            }
        }
        Ok(LieAlgebra::new(sc, grading))
    }

    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let (d1, d2) = (self.dim(), other.dim());
        let n = self.order();
        let mut sc = StructureConstants::new(n, d1 + d2);
        for (i, j, c) in self.constants.entries() {
            let mut v = c.clone();
            v.extend(zero_vector(n, d2));
            sc.set(i, j, v).expect("length");
        }
        for (i, j, c) in other.constants.entries() {
            let mut v = zero_vector(n, d1);
            v.extend(c.iter().cloned());
            sc.set(d1 + i, d1 + j, v).expect("length");
        }
        let grading = match (&self.grading, &other.grading) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        LieAlgebra::new(sc, grading)
    }

    /// One line per nonzero bracket, `[e1,e3] = (-1+w)*e5`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, j, c) in self.constants.entries() {
            out.push_str(&format!("[e{},e{}] = {}\n", i + 1, j + 1, render_vector(c)));
        }
        out
    }

    /// Parses bracket lines `[e_i,e_j] = <linear expression in e_k>`; other
    /// identifiers are taken from `values`. Lines may be separated by newlines
    /// or semicolons, and the `e` in the bracket is optional.
    pub fn parse_brackets(
        n: u32,
        dim: usize,
        text: &str,
        values: &HashMap<String, Cyclo>,
    ) -> Result<LieAlgebra, LieError> {
        let mut sc = StructureConstants::new(n, dim);
        for line in text.split(['\n', ';']).map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let bad = |msg: &str| LieError::Parse { line: line.to_string(), msg: msg.to_string() };
            let (lhs, rhs) = line.split_once('=').ok_or_else(|| bad("missing '='"))?;
            let inner = lhs.trim().strip_prefix('[').and_then(|s| s.strip_suffix(']')).ok_or_else(|| bad("expected [i,j]"))?;
            let (a, b) = inner.split_once(',').ok_or_else(|| bad("expected [i,j]"))?;
            let idx = |s: &str| -> Result<usize, LieError> {
                let t = s.trim().trim_start_matches('e');
                let k: usize = t.parse().map_err(|_| bad("bad basis index"))?;
                if k == 0 || k > dim {
                    return Err(bad("basis index out of range"));
                }
                Ok(k - 1)
            };
            let (i, j) = (idx(a)?, idx(b)?);
            if i == j {
                return Err(bad("bracket of an element with itself"));
            }
            let p = parse_basis_poly(n, dim, rhs, values)?;
            let (constant, lin) = p.linear_parts(n).ok_or_else(|| bad("right side is not linear"))?;
            if !constant.is_zero() {
                return Err(bad("right side has a constant term"));
            }
            sc.set(i, j, lin)?;
        }
        Ok(LieAlgebra::new(sc, None))
    }
}

pub fn trace_of_product(a: &Matrix, b: &Matrix) -> Cyclo {
    let mut acc = Cyclo::zero(a.order());
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            let x = a.get(i, k);
            let y = b.get(k, i);
            if !x.is_zero() && !y.is_zero() {
                acc += &(x * y);
            }
        }
    }
    acc
}

/// Renders Σ c_k e_k, e.g. `e2 - (1+w)*e7`.
pub fn render_vector(v: &[Cyclo]) -> String {
    let mut out = String::new();
    for (k, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (neg, body) = coefficient_text(c, false);
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !body.is_empty() {
            out.push_str(&body);
            out.push('*');
        }
        out.push_str(&format!("e{}", k + 1));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_for_three() {
        let names: Vec<String> = canonical_indices(3).iter().map(|g| g.to_string()).collect();
        assert_eq!(names, ["(01)", "(02)", "(10)", "(20)", "(11)", "(22)", "(12)", "(21)"]);
        assert_eq!(canonical_indices(5).len(), 24);
    }

    #[test]
    fn dump_roundtrip() {
        let sl3 = LieAlgebra::pauli(3).unwrap();
        let text = sl3.dump();
        let back = LieAlgebra::parse_brackets(3, 8, &text, &HashMap::new()).unwrap();
        assert_eq!(back.constants(), sl3.constants());
    }

    #[test]
    fn parse_rejects_nonlinear() {
        let r = LieAlgebra::parse_brackets(3, 3, "[e1,e2] = e3^2", &HashMap::new());
        assert!(matches!(r, Err(LieError::Parse { .. })));
    }
}
