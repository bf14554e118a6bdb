//! Exact linear algebra over Q(ζₙ): dense matrices, subspaces kept in reduced
//! row echelon form, and a sparse elimination used for large homogeneous
//! systems.


use crate::cyclo::Cyclo;

pub type Vector = Vec<Cyclo>;

pub fn zero_vector(n: u32, len: usize) -> Vector {
    vec![Cyclo::zero(n); len]
}

pub fn unit_vector(n: u32, len: usize, i: usize) -> Vector {
    let mut v = zero_vector(n, len);
    v[i] = Cyclo::one(n);
    v
}

pub fn is_zero_vector(v: &[Cyclo]) -> bool {
    v.iter().all(Cyclo::is_zero)
}

/// `acc += c * v`.
pub fn axpy(acc: &mut [Cyclo], c: &Cyclo, v: &[Cyclo]) {
    if c.is_zero() {
        return;
    }
    for (a, b) in acc.iter_mut().zip(v) {
        if !b.is_zero() {
            *a += &(c * b);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: u32,
    rows: usize,
    cols: usize,
    data: Vec<Cyclo>,
}

impl Matrix {
    pub fn zeros(n: u32, rows: usize, cols: usize) -> Matrix {
        Matrix { n, rows, cols, data: vec![Cyclo::zero(n); rows * cols] }
    }

    pub fn identity(n: u32, size: usize) -> Matrix {
        let mut m = Matrix::zeros(n, size, size);
        for i in 0..size {
            m.set(i, i, Cyclo::one(n));
        }
        m
    }

    pub fn from_rows(n: u32, cols: usize, rows: &[Vector]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().cloned());
        }
        Matrix { n, rows: rows.len(), cols, data }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(n: u32, rows: usize, cols: &[Vector]) -> Matrix {
        let mut m = Matrix::zeros(n, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclo {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cyclo) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Cyclo] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Cyclo::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.n, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Matrix::zeros(self.n, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Cyclo]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Cyclo::zero(self.n);
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { data, ..self.clone() }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { data, ..self.clone() }
    }

    pub fn scale(&self, c: &Cyclo) -> Matrix {
        let data = self.data.iter().map(|a| a * c).collect();
        Matrix { data, ..self.clone() }
    }

    pub fn trace(&self) -> Cyclo {
        let mut acc = Cyclo::zero(self.n);
        for i in 0..self.rows.min(self.cols) {
            acc += self.get(i, i);
        }
        acc
    }

    /// Flattens row-major into a single vector.
    pub fn flatten(&self) -> Vector {
        self.data.clone()
    }

    pub fn rank(&self) -> usize {
        rref(self.n, self.cols, self.row_vectors()).1.len()
    }

    /// Basis of the right null space `{x : M x = 0}`.
    pub fn kernel(&self) -> Vec<Vector> {
        let (rows, pivots) = rref(self.n, self.cols, self.row_vectors());
        kernel_from_rref(self.n, self.cols, &rows, &pivots)
    }

    /// Inverse of a square matrix, or None when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let size = self.rows;
        let aug: Vec<Vector> = (0..size)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend(unit_vector(self.n, size, i));
                r
            })
            .collect();
        let (rows, pivots) = rref(self.n, 2 * size, aug);
        if pivots.len() < size || pivots[size - 1] >= size {
            return None;
        }
        let inv: Vec<Vector> = rows.into_iter().map(|r| r[size..].to_vec()).collect();
        Some(Matrix::from_rows(self.n, size, &inv))
    }
}

/// Kernel of a sparse and highly redundant row system, in reduced echelon
/// form. A basis of the solutions of the rows seen so far is cut down by each
/// violated row, so a dependent row costs one dot product per basis vector.
pub fn sparse_kernel(n: u32, cols: usize, rows: impl IntoIterator<Item = Vec<(usize, Cyclo)>>) -> Vec<Vector> {
    let mut basis: Vec<Vector> = (0..cols).map(|i| unit_vector(n, cols, i)).collect();
    for row in rows {
        if basis.is_empty() {
            break;
        }
        let mut vals: Vec<Cyclo> = basis
            .iter()
            .map(|v| {
                let mut acc = Cyclo::zero(n);
                for (c, x) in &row {
                    if !v[*c].is_zero() {
                        acc += &(x * &v[*c]);
                    }
                }
                acc
            })
            .collect();
        // Eliminate with the sparsest violated vector to limit fill-in.
        let Some(p) = (0..basis.len())
            .filter(|&i| !vals[i].is_zero())
            .min_by_key(|&i| basis[i].iter().filter(|x| !x.is_zero()).count())
        else {
            continue;
        };
        let pivot = basis.remove(p);
        let pv = vals.remove(p).inv().expect("nonzero");
        for (v, x) in basis.iter_mut().zip(&vals) {
            if !x.is_zero() {
                let f = -&(x * &pv);
                axpy(v, &f, &pivot);
            }
        }
    }
    rref(n, cols, basis).0
}

/// Reduced row echelon form: returns nonzero rows and their pivot columns.
pub fn rref(_n: u32, cols: usize, mut rows: Vec<Vector>) -> (Vec<Vector>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = -&row[c];
                axpy(row, &f, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

fn kernel_from_rref(n: u32, cols: usize, rows: &[Vector], pivots: &[usize]) -> Vec<Vector> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = unit_vector(n, cols, f);
            for (row, &p) in rows.iter().zip(pivots) {
                if !row[f].is_zero() {
                    v[p] = -&row[f];
                }
            }
            v
        })
        .collect()
}

/// A linear subspace of Q(ζₙ)^m stored by its canonical RREF basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    n: u32,
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn from_vectors(n: u32, ambient: usize, vectors: Vec<Vector>) -> Subspace {
        let (basis, pivots) = rref(n, ambient, vectors);
        Subspace { n, ambient, basis, pivots }
    }

    pub fn zero(n: u32, ambient: usize) -> Subspace {
        Subspace { n, ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(n: u32, ambient: usize) -> Subspace {
        let basis = (0..ambient).map(|i| unit_vector(n, ambient, i)).collect();
        Subspace { n, ambient, basis, pivots: (0..ambient).collect() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The remainder of `v` after eliminating the pivot coordinates.
    pub fn reduce(&self, v: &[Cyclo]) -> Vector {
        let mut r = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if !r[p].is_zero() {
                let f = -&r[p];
                axpy(&mut r, &f, b);
            }
        }
        r
    }

    pub fn contains(&self, v: &[Cyclo]) -> bool {
        is_zero_vector(&self.reduce(v))
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Cyclo]) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::from_vectors(self.n, self.ambient, vs)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.n, self.ambient);
        }
        // Solve Σ a_i u_i - Σ b_j v_j = 0 and map the a-part back.
        let k = self.dim();
        let cols: Vec<Vector> = self
            .basis
            .iter()
            .cloned()
            .chain(other.basis.iter().map(|v| v.iter().map(|x| -x).collect()))
            .collect();
        let m = Matrix::from_columns(self.n, self.ambient, &cols);
        let vs = m
            .kernel()
            .into_iter()
            .map(|c| {
                let mut v = zero_vector(self.n, self.ambient);
                for (a, u) in c[..k].iter().zip(&self.basis) {
                    axpy(&mut v, a, u);
                }
                v
            })
            .collect();
        Subspace::from_vectors(self.n, self.ambient, vs)
    }

    /// Rows `Q` with `v ∈ self ⟺ Q v = 0`, one per non-pivot coordinate.
    pub fn membership_conditions(&self) -> Vec<Vector> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient)
            .filter(|&t| !is_pivot[t])
            .map(|t| {
                let mut q = unit_vector(self.n, self.ambient, t);
                for (b, &p) in self.basis.iter().zip(&self.pivots) {
                    if !b[t].is_zero() {
                        q[p] = -&b[t];
                    }
                }
                q
            })
            .collect()
    }

    /// Standard basis vectors completing this subspace to the whole space.
    pub fn complement_units(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&t| !is_pivot[t]).collect()
    }
}

/// Coordinates with respect to an arbitrary linearly independent family.
#[derive(Clone, Debug)]
pub struct Frame {
    len: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
    /// Row p of the echelon basis equals Σ_i transforms[p][i] * family[i].
    transforms: Vec<Vector>,
}

impl Frame {
    pub fn new(n: u32, ambient: usize, family: &[Vector]) -> Frame {
        let k = family.len();
        let aug: Vec<Vector> = family
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let mut r = v.clone();
                r.extend(unit_vector(n, k, i));
                r
            })
            .collect();
        let (rows, pivots) = rref(n, ambient, aug);
        let transforms = rows.iter().map(|r| r[ambient..].to_vec()).collect();
        let rows = rows.into_iter().map(|mut r| {
            r.truncate(ambient);
            r
        });
        let rows: Vec<Vector> = rows.collect();
        assert_eq!(rows.iter().filter(|r| !is_zero_vector(r)).count(), k, "family is dependent");
        Frame { len: k, rows, pivots, transforms }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Coordinates of `v` in the family, or None when `v` is outside its span.
    pub fn coordinates(&self, v: &[Cyclo]) -> Option<Vector> {
        let n = v.first().map(Cyclo::order)?;
        let mut r = v.to_vec();
        let mut out = zero_vector(n, self.len);
        for ((row, &p), t) in self.rows.iter().zip(&self.pivots).zip(&self.transforms) {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            axpy(&mut out, &f, t);
            axpy(&mut r, &(-&f), row);
        }
        is_zero_vector(&r).then_some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Cyclo {
        Cyclo::parse(3, s).unwrap()
    }

    #[test]
    fn rank_and_kernel_of_small_matrix() {
        let m = Matrix::from_rows(3, 3, &[vec![c("1"), c("w"), c("0")], vec![c("w"), c("-1-w"), c("0")]]);
        // Second row is w times the first.
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(is_zero_vector(&m.mul_vec(v)));
        }
    }

    #[test]
    fn sparse_matches_dense() {
        let rows = vec![
            vec![c("1"), c("2"), c("0"), c("w")],
            vec![c("0"), c("1"), c("1"), c("0")],
            vec![c("1"), c("3"), c("1"), c("w")],
        ];
        let m = Matrix::from_rows(3, 4, &rows);
        let sparse = sparse_kernel(3, 4, rows.iter().map(|r| r.iter().cloned().enumerate().collect::<Vec<_>>()));
        let a = Subspace::from_vectors(3, 4, sparse);
        let b = Subspace::from_vectors(3, 4, m.kernel());
        assert_eq!(a, b);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_rows(3, 2, &[vec![c("1"), c("w")], vec![c("2"), c("1")]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3, 2));
        let s = Matrix::from_rows(3, 2, &[vec![c("1"), c("w")], vec![c("w"), c("-1-w")]]);
        assert!(s.inverse().is_none());
    }
}
