//! Dense matrices over the exact scalars.
//!
//! Determinants and adjugates use Laplace expansion organised as a
//! dynamic program over column subsets, which is fraction-free and never
//! pivots on a symbolic zero. The sizes here are small (at most `2n x 2n`
//! with `n <= 6`), so the `O(m^2 * 2^m)` minor table is cheap.

use alloc::vec;
use alloc::vec::Vec;

use crate::expr::{Expr, ExprError, RationalExpr, Scalar};

/// Row-major dense matrix with entries in a common ring and a shared
/// lattice size.
#[derive(Clone, PartialEq)]
pub struct Matrix<T: Scalar> {
    n: usize,
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn from_fn(n: usize, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let entry = f(r, c);
                assert_eq!(entry.lattice_size(), n, "entry lattice size mismatch");
                data.push(entry);
            }
        }
        Matrix { n, rows, cols, data }
    }

    pub fn zeros(n: usize, rows: usize, cols: usize) -> Self {
        Matrix::from_fn(n, rows, cols, |_, _| T::zero(n))
    }

    pub fn identity(n: usize, dim: usize) -> Self {
        Matrix::from_fn(n, dim, dim, |r, c| if r == c { T::one(n) } else { T::zero(n) })
    }

    pub fn lattice_size(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        assert_eq!(v.lattice_size(), self.n, "entry lattice size mismatch");
        self.data[r * self.cols + c] = v;
    }

    pub fn map<U: Scalar>(&self, mut f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix::from_fn(self.n, self.rows, self.cols, |r, c| f(self.at(r, c)))
    }

    pub fn transpose(&self) -> Matrix<T> {
        Matrix::from_fn(self.n, self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn add(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.n, self.rows, self.cols, |r, c| {
            self.at(r, c).clone() + other.at(r, c).clone()
        })
    }

    pub fn sub(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.n, self.rows, self.cols, |r, c| {
            self.at(r, c).clone() - other.at(r, c).clone()
        })
    }

    pub fn neg(&self) -> Matrix<T> {
        self.map(|v| -v.clone())
    }

    pub fn scale(&self, s: &T) -> Matrix<T> {
        self.map(|v| v.clone() * s.clone())
    }

    pub fn mul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        Matrix::from_fn(self.n, self.rows, other.cols, |r, c| {
            let mut acc = T::zero(self.n);
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                acc = acc + a.clone() * other.at(k, c).clone();
            }
            acc
        })
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = T::zero(self.n);
                for k in 0..self.cols {
                    let a = self.at(r, k);
                    if a.is_zero() || v[k].is_zero() {
                        continue;
                    }
                    acc = acc + a.clone() * v[k].clone();
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Exact antisymmetry: `m[r][c] = -m[c][r]` for all entries.
    pub fn is_antisymmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for r in 0..self.rows {
            for c in r..self.cols {
                let sum = self.at(r, c).clone() + self.at(c, r).clone();
                if !sum.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Determinant of the square submatrix formed by `rows` (in order) and
    /// the full column set, via the subset dynamic program.
    fn det_of_rows(&self, rows: &[usize]) -> T {
        let m = rows.len();
        debug_assert_eq!(m, self.cols);
        if m == 0 {
            return T::one(self.n);
        }
        // dp[s] = det of first popcount(s) rows restricted to column set s
        let mut dp: Vec<Option<T>> = vec![None; 1usize << m];
        dp[0] = Some(T::one(self.n));
        let mut order: Vec<usize> = (0..1usize << m).collect();
        order.sort_by_key(|s| s.count_ones());
        for s in order.into_iter().skip(1) {
            let used = s.count_ones() as usize;
            let r = rows[used - 1];
            let row_parity = (used - 1) % 2;
            let mut acc = T::zero(self.n);
            let mut pos = 0;
            for c in 0..m {
                if s & (1 << c) == 0 {
                    continue;
                }
                let a = self.at(r, c);
                if !a.is_zero() {
                    let sub = dp[s & !(1 << c)].as_ref().expect("filled by subset order");
                    let contrib = a.clone() * sub.clone();
                    acc = if (row_parity + pos) % 2 == 0 {
                        acc + contrib
                    } else {
                        acc - contrib
                    };
                }
                pos += 1;
            }
            dp[s] = Some(acc);
        }
        dp[(1 << m) - 1].take().expect("full subset computed")
    }

    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant requires a square matrix");
        let rows: Vec<usize> = (0..self.rows).collect();
        self.det_of_rows(&rows)
    }

    /// All first minors `M[i][j]` (determinant with row `i` and column `j`
    /// removed). One subset sweep per removed row.
    fn first_minors(&self) -> Matrix<T> {
        let m = self.rows;
        assert_eq!(m, self.cols);
        assert!(m >= 1);
        let mut minors = Matrix::zeros(self.n, m, m);
        for i in 0..m {
            let rows: Vec<usize> = (0..m).filter(|&r| r != i).collect();
            // dp over subsets of all m columns, using m-1 rows; the minor
            // M[i][j] is the state with column j excluded
            let mut dp: Vec<Option<T>> = vec![None; 1usize << m];
            dp[0] = Some(T::one(self.n));
            let mut order: Vec<usize> = (0..1usize << m).collect();
            order.sort_by_key(|s| s.count_ones());
            for s in order.into_iter().skip(1) {
                let used = s.count_ones() as usize;
                if used > m - 1 {
                    continue;
                }
                let r = rows[used - 1];
                let row_parity = (used - 1) % 2;
                let mut acc = T::zero(self.n);
                let mut pos = 0;
                for c in 0..m {
                    if s & (1 << c) == 0 {
                        continue;
                    }
                    let a = self.at(r, c);
                    if !a.is_zero() {
                        let sub = dp[s & !(1 << c)].as_ref().expect("filled by subset order");
                        let contrib = a.clone() * sub.clone();
                        acc = if (row_parity + pos) % 2 == 0 {
                            acc + contrib
                        } else {
                            acc - contrib
                        };
                    }
                    pos += 1;
                }
                dp[s] = Some(acc);
            }
            let full = (1usize << m) - 1;
            for j in 0..m {
                let minor = dp[full & !(1 << j)]
                    .as_ref()
                    .expect("subset of size m-1 computed")
                    .clone();
                minors.set(i, j, minor);
            }
        }
        minors
    }

    pub fn to_rational(&self) -> Matrix<RationalExpr>
    where
        T: Into<RationalExpr>,
    {
        self.map(|v| v.clone().into())
    }
}

impl Matrix<RationalExpr> {
    /// Inverse by adjugate over determinant; errors on a symbolically
    /// singular matrix.
    pub fn inverse(&self) -> Result<Matrix<RationalExpr>, ExprError> {
        assert_eq!(self.rows, self.cols, "inverse requires a square matrix");
        let det = self.det();
        if Scalar::is_zero(&det) {
            return Err(ExprError::ZeroDenominator);
        }
        let det_inv = det.inverse()?;
        let minors = self.first_minors();
        // adj[j][i] = (-1)^{i+j} M[i][j]
        Ok(Matrix::from_fn(self.n, self.rows, self.cols, |j, i| {
            let m = minors.at(i, j).clone();
            let signed = if (i + j) % 2 == 0 { m } else { -m };
            signed * det_inv.clone()
        }))
    }
}

impl Matrix<Expr> {
    /// Inverse in the fraction field.
    pub fn inverse(&self) -> Result<Matrix<RationalExpr>, ExprError> {
        self.map(|e| RationalExpr::from(e.clone())).inverse()
    }
}

impl<T: Scalar> core::fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        writeln!(f, "Matrix[{}x{}](", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{Expr, RationalExpr};

    fn as_rat(n: usize, s: &str) -> RationalExpr {
        RationalExpr::parse(n, s).unwrap()
    }

    #[test]
    fn det_matches_cofactor_small() {
        let n = 2;
        let m = Matrix::from_fn(n, 2, 2, |r, c| {
            Expr::parse(n, ["x3", "E1", "1", "x4"][r * 2 + c]).unwrap()
        });
        let det = m.det();
        assert_eq!(det, Expr::parse(n, "x3*x4 - E1").unwrap());
    }

    #[test]
    fn det_of_singular_matrix_is_zero() {
        let n = 2;
        let m = Matrix::from_fn(n, 3, 3, |r, _| Expr::integer(n, r as i64 + 1));
        assert!(m.det().is_zero());
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let n = 2;
        let entries = [
            "x3", "0", "0", "E1", //
            "0", "x4", "-E1", "0", //
            "0", "-1", "x3", "0", //
            "1", "0", "0", "x4",
        ];
        let m = Matrix::from_fn(n, 4, 4, |r, c| as_rat(n, entries[r * 4 + c]));
        let inv = m.inverse().unwrap();
        let prod = m.mul(&inv);
        assert_eq!(prod, Matrix::identity(n, 4));
        let prod2 = inv.mul(&m);
        assert_eq!(prod2, Matrix::identity(n, 4));
    }

    #[test]
    fn singular_inverse_rejected() {
        let n = 2;
        let m: Matrix<RationalExpr> = Matrix::from_fn(n, 2, 2, |_, _| as_rat(n, "x3"));
        assert!(m.inverse().is_err());
    }

    #[test]
    fn identity_block_symplectic_inverse() {
        let n = 2;
        // [[0, I],[-I, 0]]^{-1} = [[0, -I],[I, 0]]
        let sigma = Matrix::from_fn(n, 4, 4, |r, c| {
            let v = if c == r + 2 {
                1
            } else if r == c + 2 {
                -1
            } else {
                0
            };
            RationalExpr::from(Expr::integer(n, v))
        });
        let inv = sigma.inverse().unwrap();
        assert_eq!(inv, sigma.neg());
    }

    #[test]
    fn larger_integer_determinant() {
        // 5x5 integer matrix with known determinant (companion-style)
        let n = 2;
        let a = [
            [2, 0, 0, 0, 1],
            [0, 1, 0, 3, 0],
            [0, 0, 4, 0, 0],
            [0, 5, 0, 1, 0],
            [1, 0, 0, 0, 2],
        ];
        let m = Matrix::from_fn(n, 5, 5, |r, c| Expr::integer(n, a[r][c]));
        // det = det([[2,1],[1,2]]) * det([[1,3],[5,1]]) * 4 = 3 * (-14) * 4
        assert_eq!(m.det(), Expr::integer(n, -168));
    }
}
