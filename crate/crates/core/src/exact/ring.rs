//! Finite unital rings `Z/n` and `M_2(Z/n)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Residues stored as least non-negative representatives, row-major for
/// the matrix ring.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct RingElem(pub Vec<u64>);

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct FiniteRing {
    modulus: u64,
    /// 1 for `Z/n`, 2 for `M_2(Z/n)`.
    dim: usize,
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

impl FiniteRing {
    pub fn new(modulus: u64, dim: usize) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::Domain(format!("modulus {modulus} < 2")));
        }
        if !(1..=2).contains(&dim) {
            return Err(Error::Domain(format!("matrix ring of size {dim} unsupported")));
        }
        if modulus.checked_pow(4).is_none() || modulus > 1 << 16 {
            return Err(Error::Domain(format!("modulus {modulus} too large")));
        }
        Ok(FiniteRing { modulus, dim })
    }

    pub fn integers_mod(n: u64) -> Result<Self> {
        Self::new(n, 1)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn len(&self) -> usize {
        self.dim * self.dim
    }

    pub fn name(&self) -> String {
        match self.dim {
            1 => format!("Z/{}", self.modulus),
            _ => format!("M_{}(Z/{})", self.dim, self.modulus),
        }
    }

    pub fn contains(&self, a: &RingElem) -> bool {
        a.0.len() == self.len() && a.0.iter().all(|&v| v < self.modulus)
    }

    pub fn elem(&self, values: &[i64]) -> RingElem {
        let n = self.modulus as i64;
        RingElem(values.iter().map(|v| v.rem_euclid(n) as u64).collect())
    }

    pub fn zero(&self) -> RingElem {
        RingElem(vec![0; self.len()])
    }

    pub fn one(&self) -> RingElem {
        match self.dim {
            1 => RingElem(vec![1]),
            _ => RingElem(vec![1, 0, 0, 1]),
        }
    }

    /// Scalar `c` (times the identity for matrices).
    pub fn scalar(&self, c: i64) -> RingElem {
        let c = c.rem_euclid(self.modulus as i64) as u64;
        match self.dim {
            1 => RingElem(vec![c]),
            _ => RingElem(vec![c, 0, 0, c]),
        }
    }

    pub fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        RingElem(a.0.iter().zip(&b.0).map(|(x, y)| (x + y) % self.modulus).collect())
    }

    pub fn neg(&self, a: &RingElem) -> RingElem {
        RingElem(a.0.iter().map(|x| (self.modulus - x) % self.modulus).collect())
    }

    pub fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let n = self.modulus;
        match self.dim {
            1 => RingElem(vec![a.0[0] * b.0[0] % n]),
            _ => {
                let (x, y) = (&a.0, &b.0);
                RingElem(vec![
                    (x[0] * y[0] + x[1] * y[2]) % n,
                    (x[0] * y[1] + x[1] * y[3]) % n,
                    (x[2] * y[0] + x[3] * y[2]) % n,
                    (x[2] * y[1] + x[3] * y[3]) % n,
                ])
            }
        }
    }

    fn det(&self, a: &RingElem) -> u64 {
        let n = self.modulus;
        match self.dim {
            1 => a.0[0],
            _ => (a.0[0] * a.0[3] % n + n - a.0[1] * a.0[2] % n) % n,
        }
    }

    fn inv_scalar(&self, v: u64) -> Option<u64> {
        let (g, x, _) = egcd(v as i128, self.modulus as i128);
        (g == 1).then(|| x.rem_euclid(self.modulus as i128) as u64)
    }

    pub fn is_unit(&self, a: &RingElem) -> bool {
        self.inv_scalar(self.det(a)).is_some()
    }

    /// Multiplicative inverse; for matrices via the adjugate.
    pub fn inv(&self, a: &RingElem) -> Option<RingElem> {
        let d = self.inv_scalar(self.det(a))?;
        let n = self.modulus;
        Some(match self.dim {
            1 => RingElem(vec![d]),
            _ => {
                let x = &a.0;
                RingElem(vec![
                    x[3] * d % n,
                    (n - x[1]) % n * d % n,
                    (n - x[2]) % n * d % n,
                    x[0] * d % n,
                ])
            }
        })
    }

    /// All ring elements in lexicographic order of residues.
    pub fn elements(&self) -> Vec<RingElem> {
        let len = self.len();
        let total = (self.modulus as usize).pow(len as u32);
        (0..total)
            .map(|mut idx| {
                let mut v = vec![0u64; len];
                for slot in v.iter_mut().rev() {
                    *slot = (idx % self.modulus as usize) as u64;
                    idx /= self.modulus as usize;
                }
                RingElem(v)
            })
            .collect()
    }

    pub fn units(&self) -> Vec<RingElem> {
        self.elements().into_iter().filter(|a| self.is_unit(a)).collect()
    }

    pub fn render(&self, a: &RingElem) -> String {
        match self.dim {
            1 => a.0[0].to_string(),
            _ => format!("[{}, {}; {}, {}]", a.0[0], a.0[1], a.0[2], a.0[3]),
        }
    }
}
