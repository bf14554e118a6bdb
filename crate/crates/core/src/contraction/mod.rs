//! Contraction matrices of the Pauli grading, the quadratic contraction
//! system, higher-order identities, equivalence of solutions and the
//! continuous/discrete classification.

mod continuity;
mod normal;
mod system;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::cyclo::{Cyclo, Rational};
use crate::lattice::LatticeError;
use crate::liecore::canonical_indices;
use crate::linalg::Matrix;

pub use continuity::{classify_continuity, iw_weights, Continuity};
pub use normal::{equivalent, normalization_between, Equivalence, ExponentLattice, NormalizationVerdict};
pub use system::{
    build_nonequivalence_system, check_solution, coset_triples, equation_orbits, generate_identities, generate_system,
    identity_representatives, relation_rank, satisfies_nonequivalence, violated_identity, ContractionEquation,
    IdentityRelation, Term,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContractionError {
    #[error("row {row}, column {col}: {msg}")]
    Parse { row: usize, col: usize, msg: String },
    #[error("matrix is not symmetric at row {row}, column {col}")]
    Asymmetric { row: usize, col: usize },
    #[error("nonzero entry at irrelevant position row {row}, column {col}")]
    Irrelevant { row: usize, col: usize },
    #[error("parameter {0} is not bound")]
    MissingBinding(char),
    #[error("parameter {0} is bound to zero")]
    ZeroBinding(char),
    #[error("parameter {0} is not declared")]
    Undeclared(char),
    #[error("not a solution of the contraction system: {0}")]
    NotSolution(String),
    #[error("matrices have different supports and cannot be compared")]
    NotComparable,
    #[error("cyclotomic order {0} is not supported here")]
    UnsupportedOrder(u32),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Unordered pairs of canonical positions {p, q} with nonzero bracket, i.e.
/// s r' - r s' not 0 mod n, listed as (p, q) with p < q in lexicographic order.
pub fn relevant_pairs(n: u32) -> Vec<(usize, usize)> {
    let idx = canonical_indices(n);
    let mut out = Vec::new();
    for p in 0..idx.len() {
        for q in p + 1..idx.len() {
            if idx[p].relevant_with(&idx[q]) {
                out.push((p, q));
            }
        }
    }
    out
}

pub fn is_relevant(n: u32, p: usize, q: usize) -> bool {
    let idx = canonical_indices(n);
    p != q && idx[p].relevant_with(&idx[q])
}

/// Renders a position pair as `(01)(10)`.
pub fn pair_label(n: u32, (p, q): (usize, usize)) -> String {
    let idx = canonical_indices(n);
    format!("{}{}", idx[p], idx[q])
}

/// Parses `(01)(10)` into a sorted position pair.
pub fn parse_pair(n: u32, text: &str) -> Option<(usize, usize)> {
    let idx = canonical_indices(n);
    let t = text.trim();
    let close = t.find(')')?;
    let a = crate::liecore::GradingIndex::parse(n, &t[..=close])?;
    let b = crate::liecore::GradingIndex::parse(n, &t[close + 1..])?;
    let p = idx.iter().position(|&x| x == a)?;
    let q = idx.iter().position(|&x| x == b)?;
    Some((p.min(q), p.max(q)))
}

/// A signed integer multiple of a product of parameters a..f.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SymbolicMonomial {
    negative: bool,
    coeff: u64,
    params: Vec<char>,
}

impl SymbolicMonomial {
    pub fn zero() -> SymbolicMonomial {
        SymbolicMonomial { negative: false, coeff: 0, params: Vec::new() }
    }

    pub fn one() -> SymbolicMonomial {
        SymbolicMonomial { negative: false, coeff: 1, params: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff == 0
    }

    pub fn params(&self) -> &[char] {
        &self.params
    }

    pub fn parse(text: &str) -> Result<SymbolicMonomial, String> {
        if text == "." {
            return Ok(SymbolicMonomial::zero());
        }
        let (negative, rest) = match text.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, text),
        };
        let digits: String = rest.chars().take_while(char::is_ascii_digit).collect();
        let letters = &rest[digits.len()..];
        if letters.is_empty() && digits.is_empty() {
            return Err(format!("malformed entry {text:?}"));
        }
        let coeff = if digits.is_empty() { 1 } else { digits.parse().map_err(|_| format!("bad integer in {text:?}"))? };
        let mut params: Vec<char> = letters.chars().collect();
        if let Some(bad) = params.iter().find(|c| !('a'..='f').contains(*c)) {
            return Err(format!("unknown parameter {bad:?} in {text:?}"));
        }
        params.sort_unstable();
        if coeff == 0 {
            return Ok(SymbolicMonomial::zero());
        }
        Ok(SymbolicMonomial { negative, coeff, params })
    }

    pub fn eval(&self, n: u32, bindings: &HashMap<char, Cyclo>) -> Result<Cyclo, ContractionError> {
        if self.is_zero() {
            return Ok(Cyclo::zero(n));
        }
        let mut v = Cyclo::from_int(n, self.coeff as i64);
        for p in &self.params {
            let b = bindings.get(p).ok_or(ContractionError::MissingBinding(*p))?;
            v = &v * b;
        }
        Ok(if self.negative { -v } else { v })
    }
}

impl fmt::Display for SymbolicMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str(".");
        }
        if self.negative {
            f.write_str("-")?;
        }
        if self.coeff != 1 || self.params.is_empty() {
            write!(f, "{}", self.coeff)?;
        }
        for p in &self.params {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// A symmetric 8×8 table of monomials in the canonical index order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ContractionMatrix {
    entries: Vec<Vec<SymbolicMonomial>>,
    params: Vec<char>,
    side_condition: Option<String>,
}

pub const SIZE: usize = 8;

impl ContractionMatrix {
    /// Parses 8 rows of 8 whitespace-separated entries.
    pub fn parse(text: &str) -> Result<ContractionMatrix, ContractionError> {
        let rows: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        if rows.len() != SIZE {
            return Err(ContractionError::Parse { row: rows.len(), col: 0, msg: format!("expected {SIZE} rows, found {}", rows.len()) });
        }
        let mut entries = Vec::with_capacity(SIZE);
        for (r, line) in rows.iter().enumerate() {
            let cells: Vec<&str> = line.split_whitespace().collect();
            if cells.len() != SIZE {
                return Err(ContractionError::Parse { row: r + 1, col: cells.len(), msg: format!("expected {SIZE} entries") });
            }
            let row = cells
                .iter()
                .enumerate()
                .map(|(c, t)| SymbolicMonomial::parse(t).map_err(|msg| ContractionError::Parse { row: r + 1, col: c + 1, msg }))
                .collect::<Result<Vec<_>, _>>()?;
            entries.push(row);
        }
        ContractionMatrix::from_entries(entries)
    }

    pub fn from_entries(entries: Vec<Vec<SymbolicMonomial>>) -> Result<ContractionMatrix, ContractionError> {
        for i in 0..SIZE {
            for j in 0..SIZE {
                if entries[i][j] != entries[j][i] {
                    return Err(ContractionError::Asymmetric { row: i + 1, col: j + 1 });
                }
                if !entries[i][j].is_zero() && !is_relevant(3, i, j) {
                    return Err(ContractionError::Irrelevant { row: i + 1, col: j + 1 });
                }
            }
        }
        let params: BTreeSet<char> = entries.iter().flatten().flat_map(|m| m.params.iter().copied()).collect();
        Ok(ContractionMatrix { entries, params: params.into_iter().collect(), side_condition: None })
    }

    /// The all-ones matrix on relevant positions.
    pub fn all_ones() -> ContractionMatrix {
        let entries = (0..SIZE)
            .map(|i| {
                (0..SIZE)
                    .map(|j| if is_relevant(3, i, j) { SymbolicMonomial::one() } else { SymbolicMonomial::zero() })
                    .collect()
            })
            .collect();
        ContractionMatrix::from_entries(entries).expect("valid")
    }

    /// Declares the parameter list; every used parameter must be declared.
    pub fn with_params(mut self, declared: &[char]) -> Result<ContractionMatrix, ContractionError> {
        if let Some(p) = self.params.iter().find(|p| !declared.contains(p)) {
            return Err(ContractionError::Undeclared(*p));
        }
        self.params = declared.to_vec();
        Ok(self)
    }

    pub fn with_side_condition(mut self, note: Option<String>) -> ContractionMatrix {
        self.side_condition = note;
        self
    }

    pub fn params(&self) -> &[char] {
        &self.params
    }

    pub fn side_condition(&self) -> Option<&str> {
        self.side_condition.as_deref()
    }

    pub fn entry(&self, i: usize, j: usize) -> &SymbolicMonomial {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<SymbolicMonomial>] {
        &self.entries
    }

    /// Number of relevant pairs carrying a zero.
    pub fn zero_count(&self) -> usize {
        relevant_pairs(3).iter().filter(|&&(p, q)| self.entries[p][q].is_zero()).count()
    }

    /// Entrywise evaluation; every declared parameter must be bound to a nonzero value.
    pub fn instantiate(&self, bindings: &HashMap<char, Cyclo>) -> Result<Matrix, ContractionError> {
        for p in &self.params {
            match bindings.get(p) {
                None => return Err(ContractionError::MissingBinding(*p)),
                Some(v) if v.is_zero() => return Err(ContractionError::ZeroBinding(*p)),
                Some(_) => {}
            }
        }
        self.evaluate(bindings)
    }

    /// Instantiation that admits zero parameter values. The result must still
    /// solve the contraction system.
    pub fn instantiate_boundary(&self, bindings: &HashMap<char, Cyclo>) -> Result<Matrix, ContractionError> {
        let m = self.evaluate(bindings)?;
        if let Err(eq) = check_solution(&m, &generate_system(3)?) {
            return Err(ContractionError::NotSolution(eq.to_string()));
        }
        Ok(m)
    }

    fn evaluate(&self, bindings: &HashMap<char, Cyclo>) -> Result<Matrix, ContractionError> {
        let mut m = Matrix::zeros(3, SIZE, SIZE);
        for i in 0..SIZE {
            for j in 0..SIZE {
                m.set(i, j, self.entries[i][j].eval(3, bindings)?);
            }
        }
        Ok(m)
    }

    /// Binds parameters in declaration order to 2, 3, 5, 7, 11, 13.
    pub fn default_bindings(&self) -> HashMap<char, Cyclo> {
        const PRIMES: [i64; 6] = [2, 3, 5, 7, 11, 13];
        self.params.iter().zip(PRIMES).map(|(&p, v)| (p, Cyclo::from_int(3, v))).collect()
    }

    pub fn act(&self, perm: &crate::symmetry::IndexPermutation) -> ContractionMatrix {
        ContractionMatrix {
            entries: crate::symmetry::act_on_table(&self.entries, perm),
            params: self.params.clone(),
            side_condition: self.side_condition.clone(),
        }
    }
}

impl fmt::Display for ContractionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Applies (ε^π)_{ij} = ε_{π(i)π(j)} to a concrete matrix.
pub fn act_on_matrix(m: &Matrix, perm: &crate::symmetry::IndexPermutation) -> Matrix {
    let n = m.nrows();
    let mut out = Matrix::zeros(m.order(), n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, m.get(perm.apply(i), perm.apply(j)).clone());
        }
    }
    out
}

/// The concrete all-ones solution.
pub fn ones_matrix() -> Matrix {
    ContractionMatrix::all_ones().instantiate(&HashMap::new()).expect("no parameters")
}

/// Scales a concrete matrix entrywise by α_{ij} = a_i a_j / a_{i+j}.
pub fn apply_normalization(m: &Matrix, a: &[Cyclo]) -> Matrix {
    let idx = canonical_indices(3);
    let mut out = m.clone();
    for (p, q) in relevant_pairs(3) {
        let s = idx[p].add(idx[q]).expect("relevant pairs have nonzero sum");
        let r = idx.iter().position(|&x| x == s).expect("index present");
        let alpha = &(&a[p] * &a[q]) / &a[r];
        let v = m.get(p, q) * &alpha;
        out.set(p, q, v.clone());
        out.set(q, p, v);
    }
    out
}

/// Parses a key=value binding list such as `a=2/3,b=-1`.
pub fn parse_bindings(text: &str) -> Result<HashMap<char, Cyclo>, String> {
    let mut out = HashMap::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| format!("expected name=value in {part:?}"))?;
        let mut ks = k.trim().chars();
        let (Some(name), None) = (ks.next(), ks.next()) else {
            return Err(format!("parameter names are single letters: {k:?}"));
        };
        let value = match crate::cyclo::parse_rational(v) {
            Some(q) => Cyclo::from_rational(3, q),
            None => Cyclo::parse(3, v.trim()).map_err(|e| e.to_string())?,
        };
        out.insert(name, value);
    }
    Ok(out)
}

pub fn rational_binding(v: i64) -> Cyclo {
    Cyclo::from_rational(3, Rational::from_integer(v.into()))
}

/// The n = 3 contraction system, its identities and exponent lattice, built once.
#[derive(Debug)]
pub struct Context {
    system: Vec<ContractionEquation>,
    identities: Vec<IdentityRelation>,
    lattice: ExponentLattice,
}

impl Default for Context {
    fn default() -> Self {
        Self::new()
    }
}

impl Context {
    pub fn new() -> Context {
        Context {
            system: generate_system(3).expect("order 3 is supported"),
            identities: generate_identities(),
            lattice: ExponentLattice::new(),
        }
    }

    pub fn system(&self) -> &[ContractionEquation] {
        &self.system
    }

    pub fn identities(&self) -> &[IdentityRelation] {
        &self.identities
    }

    pub fn lattice(&self) -> &ExponentLattice {
        &self.lattice
    }

    pub fn check(&self, m: &Matrix) -> Result<(), ContractionError> {
        check_solution(m, &self.system).map_err(|eq| ContractionError::NotSolution(format!("{}: {eq}", eq.triple_label())))
    }

    /// Equivalence of two solutions; inputs that are not solutions are rejected.
    pub fn equivalent(&self, x: &Matrix, y: &Matrix) -> Result<Equivalence, ContractionError> {
        self.check(x)?;
        self.check(y)?;
        equivalent(&self.lattice, x, y)
    }

    pub fn classify(&self, x: &Matrix) -> Result<Continuity, ContractionError> {
        self.check(x)?;
        Ok(classify_continuity(&self.lattice, &self.identities, x))
    }
}
