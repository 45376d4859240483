//! Finite groups given by explicit multiplication tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A multiplication table on `0..order`.
///
/// Construction checks only the shape and that every element has a right
/// inverse with respect to `identity`; the group axioms themselves are left
/// to [`crate::exact::verify_group_axioms`] so corrupted tables can be
/// loaded and reported on.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CayleyTable {
    name: String,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

/// JSON input format for finite groups.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableSpec {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub identity: usize,
    pub table: Vec<Vec<usize>>,
}

impl CayleyTable {
    pub fn new(name: impl Into<String>, table: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Validation("empty multiplication table".into()));
        }
        if identity >= n {
            return Err(Error::Validation(format!("identity {identity} out of range")));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Validation(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= n) {
                return Err(Error::Validation(format!("entry {bad} in row {i} out of range")));
            }
        }
        let inverse = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| table[x][y] == identity)
                    .ok_or_else(|| Error::Validation(format!("element {x} has no right inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CayleyTable { name: name.into(), table, identity, inverse })
    }

    pub fn from_spec(spec: TableSpec) -> Result<Self> {
        Self::new(spec.name.unwrap_or_else(|| "table".into()), spec.table, spec.identity)
    }

    pub fn to_spec(&self) -> TableSpec {
        TableSpec { name: Some(self.name.clone()), identity: self.identity, table: self.table.clone() }
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::new(format!("Z/{n}"), table, 0).expect("cyclic table")
    }

    /// Symmetric group on `n` letters, permutations in lexicographic order,
    /// composed right-to-left: `(p*q)(i) = p(q(i))`.
    pub fn symmetric(n: usize) -> Self {
        let perms = permutations(n);
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("closed");
        let table = perms
            .iter()
            .map(|p| perms.iter().map(|q| index(&q.iter().map(|&i| p[i]).collect())).collect())
            .collect();
        Self::new(format!("S{n}"), table, 0).expect("symmetric table")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn contains(&self, a: usize) -> bool {
        a < self.order()
    }

    /// Swaps two entries of the table; used by fault-injection self tests.
    pub fn corrupted(&self, (r1, c1): (usize, usize), (r2, c2): (usize, usize)) -> Result<Self> {
        let mut table = self.table.clone();
        let tmp = table[r1][c1];
        table[r1][c1] = table[r2][c2];
        table[r2][c2] = tmp;
        Self::new(format!("{}-corrupted", self.name), table, self.identity)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_basics() {
        let s3 = CayleyTable::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.identity(), 0);
        let nonabelian = (0..6).any(|a| (0..6).any(|b| s3.mul(a, b) != s3.mul(b, a)));
        assert!(nonabelian);
        for a in 0..6 {
            assert_eq!(s3.mul(a, s3.inv(a)), 0);
        }
    }

    #[test]
    fn rejects_malformed() {
        assert!(CayleyTable::new("x", vec![], 0).is_err());
        assert!(CayleyTable::new("x", vec![vec![0, 1], vec![1]], 0).is_err());
        assert!(CayleyTable::new("x", vec![vec![0, 2], vec![1, 0]], 0).is_err());
        // element 1 never reaches the identity
        assert!(CayleyTable::new("x", vec![vec![0, 1], vec![1, 1]], 0).is_err());
    }

    #[test]
    fn spec_round_trip() {
        let z5 = CayleyTable::cyclic(5);
        let json = serde_json::to_string(&z5.to_spec()).unwrap();
        let back = CayleyTable::from_spec(serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, z5);
    }
}
