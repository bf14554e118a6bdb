//! Integer matrix reductions: Hermite normal form with transform, integer
//! left kernels and Smith normal form. Arithmetic is checked `i64`.

use thiserror::Error;

pub type IMatrix = Vec<Vec<i64>>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("integer overflow during lattice reduction")]
    Overflow,
}

type LResult<T> = Result<T, LatticeError>;

fn identity(size: usize) -> IMatrix {
    (0..size).map(|i| (0..size).map(|j| i64::from(i == j)).collect()).collect()
}

/// `row[dst] -= q * row[src]` on a row-major matrix.
fn row_axpy(m: &mut IMatrix, dst: usize, src: usize, q: i64) -> LResult<()> {
    if q == 0 {
        return Ok(());
    }
    for j in 0..m[dst].len() {
        let t = q.checked_mul(m[src][j]).ok_or(LatticeError::Overflow)?;
        m[dst][j] = m[dst][j].checked_sub(t).ok_or(LatticeError::Overflow)?;
    }
    Ok(())
}

fn col_axpy(m: &mut IMatrix, dst: usize, src: usize, q: i64) -> LResult<()> {
    if q == 0 {
        return Ok(());
    }
    for row in m.iter_mut() {
        let t = q.checked_mul(row[src]).ok_or(LatticeError::Overflow)?;
        row[dst] = row[dst].checked_sub(t).ok_or(LatticeError::Overflow)?;
    }
    Ok(())
}

fn negate_row(m: &mut IMatrix, i: usize) {
    for x in m[i].iter_mut() {
        *x = -*x;
    }
}

fn swap_cols(m: &mut IMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Row-style Hermite normal form. Returns `(H, U)` with `U * A = H`, `U`
/// unimodular and the nonzero rows of `H` on top.
pub fn hermite(a: &IMatrix, cols: usize) -> LResult<(IMatrix, IMatrix)> {
    let rows = a.len();
    let mut h = a.clone();
    let mut u = identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let Some(p) = (r..rows)
                .filter(|&i| h[i][c] != 0)
                .min_by_key(|&i| h[i][c].unsigned_abs())
            else {
                break;
            };
            h.swap(r, p);
            u.swap(r, p);
            let mut clean = true;
            for i in r + 1..rows {
                if h[i][c] != 0 {
                    let q = h[i][c].div_euclid(h[r][c]);
                    row_axpy(&mut h, i, r, q)?;
                    row_axpy(&mut u, i, r, q)?;
                    if h[i][c] != 0 {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if h[r][c] == 0 {
            continue;
        }
        if h[r][c] < 0 {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        for i in 0..r {
            let q = h[i][c].div_euclid(h[r][c]);
            row_axpy(&mut h, i, r, q)?;
            row_axpy(&mut u, i, r, q)?;
        }
        r += 1;
    }
    Ok((h, u))
}

/// A basis of the integer left kernel `{u ∈ Z^rows : u A = 0}`.
pub fn left_kernel(a: &IMatrix, cols: usize) -> LResult<IMatrix> {
    let (h, u) = hermite(a, cols)?;
    Ok(h.iter()
        .zip(u)
        .filter(|(row, _)| row.iter().all(|&x| x == 0))
        .map(|(_, urow)| urow)
        .collect())
}

/// Smith normal form `U * A * V = D` with nonnegative diagonal entries each
/// dividing the next.
pub struct Smith {
    pub u: IMatrix,
    pub d: IMatrix,
    pub v: IMatrix,
}

impl Smith {
    pub fn invariant_factors(&self) -> Vec<i64> {
        (0..self.d.len().min(self.d.first().map_or(0, Vec::len)))
            .map(|i| self.d[i][i])
            .filter(|&x| x != 0)
            .collect()
    }
}

pub fn smith(a: &IMatrix, cols: usize) -> LResult<Smith> {
    let rows = a.len();
    let mut d = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| d[i][j] != 0)
            .min_by_key(|&(i, j)| d[i][j].unsigned_abs())
        else {
            break;
        };
        d.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);
        let mut done = true;
        for i in t + 1..rows {
            let q = d[i][t].div_euclid(d[t][t]);
            row_axpy(&mut d, i, t, q)?;
            row_axpy(&mut u, i, t, q)?;
            done &= d[i][t] == 0;
        }
        for j in t + 1..cols {
            let q = d[t][j].div_euclid(d[t][t]);
            col_axpy(&mut d, j, t, q)?;
            col_axpy(&mut v, j, t, q)?;
            done &= d[t][j] == 0;
        }
        if !done {
            continue;
        }
        let p = d[t][t];
        if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| d[i][j] % p != 0)) {
            // Fold the offending row in and pivot again.
            row_axpy(&mut d, t, i, -1)?;
            row_axpy(&mut u, t, i, -1)?;
            continue;
        }
        if p < 0 {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
        t += 1;
    }
    Ok(Smith { u, d, v })
}

/// An integer matrix `W` with `A W A = A`, available when every nonzero
/// invariant factor of `A` equals one.
pub fn unimodular_generalized_inverse(a: &IMatrix, cols: usize) -> LResult<Option<IMatrix>> {
    let s = smith(a, cols)?;
    if s.invariant_factors().iter().any(|&f| f != 1) {
        return Ok(None);
    }
    let rows = a.len();
    let rank = s.invariant_factors().len();
    // W = V D⁺ U where D⁺ keeps the leading rank-by-rank identity.
    let mut w = vec![vec![0i64; rows]; cols];
    for (i, wrow) in w.iter_mut().enumerate() {
        for (j, slot) in wrow.iter_mut().enumerate() {
            let mut acc: i64 = 0;
            for k in 0..rank {
                let t = s.v[i][k].checked_mul(s.u[k][j]).ok_or(LatticeError::Overflow)?;
                acc = acc.checked_add(t).ok_or(LatticeError::Overflow)?;
            }
            *slot = acc;
        }
    }
    Ok(Some(w))
}

pub fn imul(a: &IMatrix, b: &IMatrix, inner: usize, cols: usize) -> IMatrix {
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect())
        .collect()
}
