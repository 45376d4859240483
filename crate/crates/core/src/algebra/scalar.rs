//! Gaussian rationals `a + bi` and small exact matrices over them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Complex, DMatrix};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::rational::{render, serde_str, sqrt_exact, to_f64};
use crate::exact::Rational;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct Scalar {
    #[serde(with = "serde_str")]
    pub re: Rational,
    #[serde(with = "serde_str")]
    pub im: Rational,
}

impl Scalar {
    pub fn new(re: Rational, im: Rational) -> Self {
        Scalar { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Scalar { re, im: Rational::zero() }
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|z|²`, always rational.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// `|z|` when it is rational.
    pub fn abs_exact(&self) -> Option<Rational> {
        sqrt_exact(&self.norm_sqr())
    }

    pub fn abs_f64(&self) -> f64 {
        self.to_complex().norm()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn to_complex(&self) -> Complex<f64> {
        Complex::new(to_f64(&self.re), to_f64(&self.im))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Scalar { re: &self.re * q, im: &self.im * q }
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::real(Rational::one())
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        &self + &o
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        Scalar {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            f.write_str(&render(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}i", render(&self.im))
        } else {
            write!(f, "{}+{}i", render(&self.re), render(&self.im))
        }
    }
}

/// Dense row-major matrix of Gaussian rationals. Zero-sized shapes are
/// allowed, since fibers of a representation may be empty.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScalarMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ScalarMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ScalarMatrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    /// `None` on a shape mismatch.
    pub fn product(&self, o: &ScalarMatrix) -> Option<ScalarMatrix> {
        if self.cols != o.rows {
            return None;
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = &out.data[i * o.cols + j] + &(a * o.get(l, j));
                    out.data[i * o.cols + j] = v;
                }
            }
        }
        Some(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ScalarMatrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn is_unitary(&self) -> bool {
        self.rows == self.cols && self.adjoint().product(self).is_some_and(|p| p == Self::identity(self.rows))
    }

    pub fn to_complex(&self) -> DMatrix<Complex<f64>> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_complex())
    }
}

impl fmt::Display for ScalarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{frac, int};

    fn z(a: i64, b: i64) -> Scalar {
        Scalar::new(int(a), int(b))
    }

    #[test]
    fn gaussian_arithmetic() {
        assert_eq!(&z(1, 2) * &z(3, -1), z(5, 5));
        assert_eq!(z(3, 4).abs_exact(), Some(int(5)));
        assert_eq!(z(1, 1).abs_exact(), None);
        assert_eq!(z(2, -7).conj().conj(), z(2, -7));
        assert_eq!(Scalar::new(frac(1, 2), int(0)).to_string(), "1/2");
    }

    #[test]
    fn rotation_by_i_is_unitary() {
        let mut m = ScalarMatrix::zeros(2, 2);
        m.set(0, 1, z(0, 1));
        m.set(1, 0, z(1, 0));
        assert!(m.is_unitary());
        m.set(1, 0, z(2, 0));
        assert!(!m.is_unitary());
    }

    #[test]
    fn empty_shapes_multiply() {
        let a = ScalarMatrix::zeros(2, 0);
        let b = ScalarMatrix::zeros(0, 3);
        assert_eq!(a.product(&b).unwrap(), ScalarMatrix::zeros(2, 3));
        assert!(b.product(&a).is_none());
    }
}
