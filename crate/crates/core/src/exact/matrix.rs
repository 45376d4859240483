//! Dense matrices over the rationals.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{self, Rational};
use crate::error::{Error, Result};

/// Row-major rational matrix. Entries are always canonical rationals, so
/// derived equality and hashing are sound.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    #[serde(with = "rational::serde_vec_str")]
    entries: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("empty {rows}x{cols} matrix")));
        }
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Matrix { rows, cols, entries })
    }

    /// Panics on a bad entry count; meant for literals.
    pub fn from_ints(rows: usize, cols: usize, entries: &[i64]) -> Self {
        Self::new(rows, cols, entries.iter().map(|&v| rational::int(v)).collect())
            .expect("literal matrix shape")
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Rational::one();
        }
        Matrix { rows: n, cols: n, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn product(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rational::zero();
                for l in 0..self.cols {
                    let a = self.get(i, l);
                    if a.is_zero() {
                        continue;
                    }
                    acc += a * other.get(l, j);
                }
                entries.push(acc);
            }
        }
        Ok(Matrix { rows: self.rows, cols: other.cols, entries })
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|v| v * c).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&-Rational::one())
    }

    pub fn transpose(&self) -> Matrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, entries }
    }

    /// Row echelon form by Gaussian elimination; returns
    /// the reduced matrix, the rank, and the determinant factor picked up by
    /// row swaps and pivots (meaningful only for square input).
    fn eliminate(&self) -> (Vec<Vec<Rational>>, usize, Rational) {
        let mut m: Vec<Vec<Rational>> = self.entries.chunks(self.cols).map(<[_]>::to_vec).collect();
        let mut rank = 0;
        let mut det = Rational::one();
        for col in 0..self.cols {
            let Some(pivot) = (rank..self.rows).find(|&r| !m[r][col].is_zero()) else {
                det = Rational::zero();
                continue;
            };
            if pivot != rank {
                m.swap(pivot, rank);
                det = -det;
            }
            let p = m[rank][col].clone();
            det *= &p;
            for r in (rank + 1)..self.rows {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] / &p;
                let (top, bottom) = m.split_at_mut(r);
                for (x, pivot) in bottom[0][col..].iter_mut().zip(&top[rank][col..]) {
                    *x -= &factor * pivot;
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        (m, rank, det)
    }

    pub fn rank(&self) -> usize {
        self.eliminate().1
    }

    pub fn det(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::Shape(format!("determinant of {}x{}", self.rows, self.cols)));
        }
        let (_, rank, det) = self.eliminate();
        Ok(if rank < self.rows { Rational::zero() } else { det })
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Shape(format!("inverse of {}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut a: Vec<Vec<Rational>> = self.entries.chunks(n).map(<[_]>::to_vec).collect();
        let mut inv: Vec<Vec<Rational>> = Matrix::identity(n).entries.chunks(n).map(<[_]>::to_vec).collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::Singular)?;
            a.swap(pivot, col);
            inv.swap(pivot, col);
            let p = a[col][col].clone();
            for c in 0..n {
                a[col][c] /= &p;
                inv[col][c] /= &p;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].clone();
                for c in 0..n {
                    let da = &factor * &a[col][c];
                    a[r][c] -= da;
                    let di = &factor * &inv[col][c];
                    inv[r][c] -= di;
                }
            }
        }
        Ok(Matrix { rows: n, cols: n, entries: inv.into_iter().flatten().collect() })
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(self.rows)
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|v| v.is_integer())
    }

    /// Multiplies by -1 if needed so the first nonzero entry in row-major
    /// order is positive. Canonical representative modulo {I, -I}.
    pub fn sign_normalized(self) -> Matrix {
        match self.entries.iter().find(|v| !v.is_zero()) {
            Some(v) if v.is_negative() => self.neg(),
            _ => self,
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| rational::render(self.get(i, j))).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{frac, int};

    fn q(rows: &[&[(i64, i64)]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&(n, d)| frac(n, d)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let m = Matrix::from_ints(2, 3, &[1, -2, 3, 0, 5, 7]);
        assert_eq!(Matrix::identity(2).product(&m).unwrap(), m);
        assert_eq!(m.product(&Matrix::identity(3)).unwrap(), m);
    }

    #[test]
    fn axb_spot_product() {
        // i(2,1) * j(1)
        let a = q(&[&[(2, 1), (1, 1)], &[(0, 1), (1, 2)]]);
        let b = Matrix::from_ints(2, 2, &[1, 0, 1, 1]);
        let expected = q(&[&[(3, 1), (1, 1)], &[(1, 2), (1, 2)]]);
        assert_eq!(a.product(&b).unwrap(), expected);
    }

    #[test]
    fn shape_mismatch() {
        let a = Matrix::from_ints(2, 3, &[1; 6]);
        assert!(matches!(a.product(&a), Err(Error::Shape(_))));
        assert!(Matrix::new(2, 2, vec![int(1)]).is_err());
    }

    #[test]
    fn unipotent_inverse() {
        let a = Matrix::from_ints(2, 2, &[1, 2, 0, 1]);
        assert_eq!(a.inverse().unwrap(), Matrix::from_ints(2, 2, &[1, -2, 0, 1]));
        assert!(Matrix::identity(3).inverse().unwrap().is_identity());
    }

    #[test]
    fn singular_inverse() {
        let a = Matrix::from_ints(2, 2, &[1, 2, 2, 4]);
        assert_eq!(a.inverse(), Err(Error::Singular));
        assert_eq!(a.det().unwrap(), int(0));
        assert_eq!(a.rank(), 1);
    }

    #[test]
    fn det_with_swaps() {
        let a = Matrix::from_ints(3, 3, &[0, 1, 0, 1, 0, 0, 0, 0, 5]);
        assert_eq!(a.det().unwrap(), int(-5));
        let b = q(&[&[(1, 2), (3, 1)], &[(1, 3), (4, 1)]]);
        assert_eq!(b.det().unwrap(), frac(1, 1));
    }

    #[test]
    fn sign_normalization() {
        let m = Matrix::from_ints(2, 2, &[0, -1, 1, 0]).sign_normalized();
        assert_eq!(m, Matrix::from_ints(2, 2, &[0, 1, -1, 0]));
        let m2 = m.clone().sign_normalized();
        assert_eq!(m, m2);
    }
}
