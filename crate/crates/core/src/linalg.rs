//! Dense exact linear algebra over a field.
//!
//! Everything here is elimination-based and exact: results are re-checkable
//! with exact equality, never a tolerance. Matrices are desk-scale (at most a
//! few hundred rows), so no sparsity or pivoting heuristics are attempted.

use crate::rat::{rat_int, Field, Fp, Rat};
use crate::Error;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

/// Matrix over the exact rationals, the workhorse type of the crate.
pub type RatMatrix = Matrix<Rat>;
pub type FpMatrix = Matrix<Fp>;

impl<T: Field> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols { self.get(i, j).clone() } else { other.get(i, j - self.cols).clone() }
        })
    }

    /// Vertical concatenation [self; other].
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        Matrix::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows { self.get(i, j).clone() } else { other.get(i - self.rows, j).clone() }
        })
    }

    /// Matrix product self * other (composition when matrices are linear maps
    /// acting on column vectors).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch in matrix product: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let zero = self
            .entries
            .first()
            .or(other.entries.first())
            .map(|e| e.zero_like());
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = zero.clone().unwrap_or_else(T::static_zero);
            for k in 0..self.cols {
                acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
            }
            acc
        })
    }

    pub fn sub_matrix(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub(other.get(i, j)))
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                let tmp = m.get(row, j).clone();
                m.set(row, j, m.get(pr, j).clone());
                m.set(pr, j, tmp);
            }
            let inv = m.get(row, col).inv();
            for j in 0..m.cols {
                let v = m.get(row, j).mul(&inv);
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r != row && !m.get(r, col).is_zero() {
                    let factor = m.get(r, col).clone();
                    for j in 0..m.cols {
                        let v = m.get(r, j).sub(&factor.mul(m.get(row, j)));
                        m.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns spanning the kernel (null space), as a matrix with
    /// `cols - rank` independent columns.
    pub fn kernel_basis(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let zero_proto = self.proto_zero();
        let one_proto = zero_proto.one_like();
        let mut basis = Matrix::from_fn(self.cols, free.len(), |_, _| zero_proto.clone());
        for (k, &fc) in free.iter().enumerate() {
            basis.set(fc, k, one_proto.clone());
            for (prow, &pc) in pivots.iter().enumerate() {
                basis.set(pc, k, r.get(prow, fc).neg());
            }
        }
        basis
    }

    /// Independent columns spanning the column space.
    pub fn image_basis(&self) -> Self {
        let (_, col_pivots) = self.rref();
        let zero_proto = self.proto_zero();
        Matrix::from_fn(self.rows, col_pivots.len(), |i, j| {
            if self.entries.is_empty() { zero_proto.clone() } else { self.get(i, col_pivots[j]).clone() }
        })
    }

    /// Solves A X = B for X (any solution), or fails when inconsistent.
    pub fn solve(&self, b: &Self) -> Result<Self, Error> {
        assert_eq!(self.rows, b.rows);
        let aug = self.hstack(b);
        let (r, pivots) = aug.rref();
        // consistency: no pivot in the B block
        if pivots.iter().any(|&p| p >= self.cols) {
            return Err(Error::InconsistentSystem);
        }
        let zero_proto = self.proto_zero();
        let mut x = Matrix::from_fn(self.cols, b.cols, |_, _| zero_proto.clone());
        for (prow, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, r.get(prow, self.cols + j).clone());
            }
        }
        Ok(x)
    }

    /// Intersection of column spans; each input matrix has the same row count.
    pub fn subspace_intersection(spaces: &[Self]) -> Self {
        assert!(!spaces.is_empty());
        let mut acc = spaces[0].image_basis();
        for s in &spaces[1..] {
            assert_eq!(acc.rows, s.rows);
            if acc.cols == 0 {
                return acc;
            }
            let neg = Matrix::from_fn(s.rows, s.cols, |i, j| s.get(i, j).neg());
            let combined = acc.hstack(&neg);
            let ker = combined.kernel_basis();
            // top `acc.cols` rows of each kernel vector give coefficients in acc
            let coeff = Matrix::from_fn(acc.cols, ker.cols, |i, j| ker.get(i, j).clone());
            acc = acc.mul(&coeff).image_basis();
        }
        acc
    }

    fn proto_zero(&self) -> T {
        self.entries
            .first()
            .map(|e| e.zero_like())
            .unwrap_or_else(T::static_zero)
    }
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| Rat::from_integer(0.into()))
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { rat_int(1) } else { rat_int(0) })
    }

    pub fn scalar(rows: usize, cols: usize, v: Rat) -> Self {
        Matrix::from_fn(rows, cols, |i, j| if i == j { v.clone() } else { rat_int(0) })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| rat_int(v)).collect()).collect())
    }

    /// Surjection k^dim -> k^(dim - k) whose kernel is exactly the span of
    /// `subspace` (a dim x k matrix of independent columns).
    pub fn quotient_map(dim: usize, subspace: &RatMatrix) -> RatMatrix {
        assert_eq!(subspace.rows, dim);
        let basis = subspace.image_basis();
        let k = basis.cols;
        // complete to a basis of k^dim with unit vectors
        let mut full = basis.clone();
        for e in 0..dim {
            if full.cols == dim {
                break;
            }
            let unit = RatMatrix::from_fn(dim, 1, |i, _| if i == e { rat_int(1) } else { rat_int(0) });
            let cand = full.hstack(&unit);
            if cand.rank() == cand.cols {
                full = cand;
            }
        }
        assert_eq!(full.cols, dim, "failed to complete basis");
        let inv = full
            .solve(&RatMatrix::identity(dim))
            .expect("square full-rank matrix inverts");
        // last dim-k rows of the inverse kill exactly span(subspace)
        Matrix::from_fn(dim - k, dim, |i, j| inv.get(k + i, j).clone())
    }

    /// Reduces all entries mod p. Fails if a denominator is divisible by p.
    pub fn to_fp(&self, p: u64) -> Result<FpMatrix, Error> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(Fp::from_rat(e, p)?);
        }
        Ok(Matrix { rows: self.rows, cols: self.cols, entries })
    }

    /// Rank computed over F_p after entry-wise reduction. For a random prime
    /// this equals the rational rank except on a measure-zero set of bad
    /// primes; the test corpus pins equality.
    pub fn rank_fp(&self, p: u64) -> Result<usize, Error> {
        Ok(self.to_fp(p)?.rank())
    }
}
