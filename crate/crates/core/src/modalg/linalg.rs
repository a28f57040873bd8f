//! Dense linear algebra over 𝔽_p for graded pieces.

use std::collections::BTreeMap;

use crate::arith::field;

/// Row-major dense matrix with entries reduced mod `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    pub p: u32,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<u32>>,
}

impl DenseMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        DenseMatrix { p, rows, cols, data: vec![vec![0; cols]; rows] }
    }

    pub fn from_columns(p: u32, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = DenseMatrix::zeros(p, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, &v) in c.iter().enumerate() {
                m.data[i][j] = v % p;
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i][j] = v % self.p;
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.data[i][c] != 0) else { continue };
            self.data.swap(r, pr);
            let inv = field::inv(self.data[r][c], p);
            for v in self.data[r].iter_mut() {
                *v = field::mul(*v, inv, p);
            }
            let pivot_row = self.data[r].clone();
            for i in 0..self.rows {
                if i != r && self.data[i][c] != 0 {
                    let f = self.data[i][c];
                    let row = &mut self.data[i];
                    for (j, &pv) in pivot_row.iter().enumerate().skip(c) {
                        if pv != 0 {
                            row[j] = field::sub(row[j], field::mul(f, pv, p), p);
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// A basis of `{x : A x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<u32>> {
        let p = self.p;
        let mut m = self.clone();
        let pivots = m.rref();
        let mut out = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut x = vec![0; self.cols];
            x[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = field::neg(m.data[r][free], p);
            }
            out.push(x);
        }
        out
    }

    /// Some `x` with `A x = b`, if one exists.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        let p = self.p;
        let mut aug = DenseMatrix::zeros(p, self.rows, self.cols + 1);
        for i in 0..self.rows {
            aug.data[i][..self.cols].copy_from_slice(&self.data[i]);
            aug.data[i][self.cols] = b[i] % p;
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.data[r][self.cols];
        }
        Some(x)
    }

    pub fn mul_vec(&self, x: &[u32]) -> Vec<u32> {
        let p = self.p;
        self.data
            .iter()
            .map(|row| row.iter().zip(x).fold(0, |acc, (&a, &b)| field::add(acc, field::mul(a, b, p), p)))
            .collect()
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        let p = self.p;
        let mut out = DenseMatrix::zeros(p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i][k];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.data[k][j];
                    if b != 0 {
                        out.data[i][j] = field::add(out.data[i][j], field::mul(a, b, p), p);
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(|&v| v == 0))
    }
}

/// A sparse row: `(column, nonzero value)` sorted by column.
pub type SparseRow = Vec<(usize, u32)>;

/// Some `x` with `Σ_c row[c]·x_c = rhs` for every equation, if one exists.
///
/// Rows are reduced against pivots on their leading column only, so each
/// stored pivot row has its pivot as least column; back substitution then
/// runs over pivots in decreasing column order.
pub fn solve_sparse(p: u32, ncols: usize, equations: Vec<(SparseRow, u32)>) -> Option<Vec<u32>> {
    let mut pivots: BTreeMap<usize, (SparseRow, u32)> = BTreeMap::new();
    for (mut row, mut rhs) in equations {
        rhs %= p;
        loop {
            let Some(&(lead, val)) = row.first() else {
                if rhs != 0 {
                    return None;
                }
                break;
            };
            match pivots.get(&lead) {
                Some((prow, prhs)) => {
                    // row -= val · prow (prow is monic)
                    let f = val;
                    row = axpy(p, &row, prow, field::neg(f, p));
                    rhs = field::sub(rhs, field::mul(f, *prhs, p), p);
                }
                None => {
                    let inv = field::inv(val, p);
                    let monic: SparseRow = row.iter().map(|&(c, v)| (c, field::mul(v, inv, p))).collect();
                    pivots.insert(lead, (monic, field::mul(rhs, inv, p)));
                    break;
                }
            }
        }
    }
    let mut x = vec![0u32; ncols];
    for (&col, (row, rhs)) in pivots.iter().rev() {
        let mut v = *rhs;
        for &(c, a) in &row[1..] {
            v = field::sub(v, field::mul(a, x[c], p), p);
        }
        x[col] = v;
    }
    Some(x)
}

/// `a + f·b` for sparse rows.
fn axpy(p: u32, a: &[(usize, u32)], b: &[(usize, u32)], f: u32) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map_or(usize::MAX, |t| t.0);
        let cb = b.get(j).map_or(usize::MAX, |t| t.0);
        let (c, v) = if ca < cb {
            i += 1;
            (ca, a[i - 1].1)
        } else if cb < ca {
            j += 1;
            (cb, field::mul(f, b[j - 1].1, p))
        } else {
            i += 1;
            j += 1;
            (ca, field::add(a[i - 1].1, field::mul(f, b[j - 1].1, p), p))
        };
        if v != 0 {
            out.push((c, v));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_nullspace() {
        let m = DenseMatrix::from_columns(5, 2, &[vec![1, 2], vec![2, 4], vec![0, 1]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(|&v| v == 0));
    }

    #[test]
    fn solve_consistent_and_not() {
        let m = DenseMatrix::from_columns(3, 2, &[vec![1, 1], vec![1, 1]]);
        assert!(m.solve(&[1, 2]).is_none());
        let x = m.solve(&[2, 2]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![2, 2]);
    }

    #[test]
    fn sparse_solver_matches_dense() {
        let m = DenseMatrix::from_columns(7, 3, &[vec![1, 2, 0], vec![0, 3, 1], vec![4, 0, 5]]);
        let b = vec![1, 2, 3];
        let eqs: Vec<(SparseRow, u32)> = (0..3)
            .map(|r| ((0..3).filter(|&c| m.data[r][c] != 0).map(|c| (c, m.data[r][c])).collect(), b[r]))
            .collect();
        let x = solve_sparse(7, 3, eqs).unwrap();
        assert_eq!(m.mul_vec(&x), b);
        let bad = vec![(vec![(0, 1), (1, 1)], 1), (vec![(0, 2), (1, 2)], 3)];
        assert!(solve_sparse(7, 2, bad).is_none());
    }
}
