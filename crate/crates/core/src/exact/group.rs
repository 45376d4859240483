//! Ambient groups and their elements.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use super::ring::{FiniteRing, RingElem};
use super::table::CayleyTable;
use crate::error::{Error, Result};
use crate::report::VerificationReport;

/// Canonical payload of a group element. Equality of payloads is equality
/// in the group, so every constructor must hand back canonical forms.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupElement {
    /// Index into a multiplication table.
    Index(usize),
    /// Exact rational matrix; sign-normalized in quotient groups.
    Matrix(Matrix),
    /// Unit of a finite ring, e.g. an element of `GL_2(Z/n)`.
    Unit(RingElem),
    /// `(a, x)` in the affine group `A* x A` of a finite ring.
    Affine { unit: RingElem, shift: RingElem },
    /// `(h, k)` in a semidirect product of two tables.
    Pair(usize, usize),
}

impl GroupElement {
    pub fn as_matrix(&self) -> Option<&Matrix> {
        match self {
            GroupElement::Matrix(m) => Some(m),
            _ => None,
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Index(i) => write!(f, "#{i}"),
            GroupElement::Matrix(m) => write!(f, "{m}"),
            GroupElement::Unit(r) => write!(f, "{:?}", r.0),
            GroupElement::Affine { unit, shift } => write!(f, "({:?}, {:?})", unit.0, shift.0),
            GroupElement::Pair(h, k) => write!(f, "({h}, {k})"),
        }
    }
}

/// `H ⋉_φ K` for finite tables, with `(h,k)(g,l) = (hg, k φ_h(l))`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SemidirectTables {
    pub h: CayleyTable,
    pub k: CayleyTable,
    /// `action[h][k] = φ_h(k)`.
    pub action: Vec<Vec<usize>>,
}

impl SemidirectTables {
    pub fn new(h: CayleyTable, k: CayleyTable, action: Vec<Vec<usize>>) -> Result<Self> {
        if action.len() != h.order() || action.iter().any(|row| row.len() != k.order()) {
            return Err(Error::Validation("action table shape does not match |H| x |K|".into()));
        }
        if action.iter().flatten().any(|&v| v >= k.order()) {
            return Err(Error::Validation("action table entry out of range".into()));
        }
        Ok(SemidirectTables { h, k, action })
    }

    pub fn phi(&self, h: usize, k: usize) -> usize {
        self.action[h][k]
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    FiniteTable,
    MatrixOverRationals,
    MatrixOverZn,
    SemidirectProduct,
    QuotientByCenter,
}

/// The group every construction runs inside.
#[derive(Clone, Debug)]
pub enum AmbientGroup {
    Table(Arc<CayleyTable>),
    /// `GL_n(Q)`, or `SL_n(Q)` when `special`.
    RationalMatrix { n: usize, special: bool },
    /// `SL_2(Q) / {I, -I}`, elements sign-normalized.
    ProjectiveSl2,
    /// The unit group of a finite ring (`(Z/n)*` or `GL_2(Z/n)`).
    UnitGroup(FiniteRing),
    /// `A* x A` with `(a,x)(b,y) = (ab, x + ay)`.
    Affine(FiniteRing),
    Semidirect(Arc<SemidirectTables>),
}

impl AmbientGroup {
    pub fn kind(&self) -> GroupKind {
        match self {
            AmbientGroup::Table(_) => GroupKind::FiniteTable,
            AmbientGroup::RationalMatrix { .. } => GroupKind::MatrixOverRationals,
            AmbientGroup::ProjectiveSl2 => GroupKind::QuotientByCenter,
            AmbientGroup::UnitGroup(_) => GroupKind::MatrixOverZn,
            AmbientGroup::Affine(_) | AmbientGroup::Semidirect(_) => GroupKind::SemidirectProduct,
        }
    }

    pub fn name(&self) -> String {
        match self {
            AmbientGroup::Table(t) => t.name().to_string(),
            AmbientGroup::RationalMatrix { n, special: true } => format!("SL_{n}(Q)"),
            AmbientGroup::RationalMatrix { n, special: false } => format!("GL_{n}(Q)"),
            AmbientGroup::ProjectiveSl2 => "PSL_2(Q)".into(),
            AmbientGroup::UnitGroup(r) => format!("({})*", r.name()),
            AmbientGroup::Affine(r) => format!("({0})* x {0}", r.name()),
            AmbientGroup::Semidirect(s) => format!("{} ⋉ {}", s.h.name(), s.k.name()),
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            AmbientGroup::Table(t) => GroupElement::Index(t.identity()),
            AmbientGroup::RationalMatrix { n, .. } => GroupElement::Matrix(Matrix::identity(*n)),
            AmbientGroup::ProjectiveSl2 => GroupElement::Matrix(Matrix::identity(2)),
            AmbientGroup::UnitGroup(r) => GroupElement::Unit(r.one()),
            AmbientGroup::Affine(r) => GroupElement::Affine { unit: r.one(), shift: r.zero() },
            AmbientGroup::Semidirect(s) => GroupElement::Pair(s.h.identity(), s.k.identity()),
        }
    }

    /// Membership test on payloads: shape, range, invertibility and the
    /// canonical-form requirement of quotient groups.
    pub fn contains(&self, a: &GroupElement) -> bool {
        match (self, a) {
            (AmbientGroup::Table(t), GroupElement::Index(i)) => t.contains(*i),
            (AmbientGroup::RationalMatrix { n, special }, GroupElement::Matrix(m)) => {
                m.rows() == *n
                    && m.cols() == *n
                    && m.det().is_ok_and(|d| if *special { d.is_one() } else { !d.is_zero() })
            }
            (AmbientGroup::ProjectiveSl2, GroupElement::Matrix(m)) => {
                m.rows() == 2
                    && m.cols() == 2
                    && m.det().is_ok_and(|d| d.is_one())
                    && m.entries().iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_positive())
            }
            (AmbientGroup::UnitGroup(r), GroupElement::Unit(u)) => r.contains(u) && r.is_unit(u),
            (AmbientGroup::Affine(r), GroupElement::Affine { unit, shift }) => {
                r.contains(unit) && r.is_unit(unit) && r.contains(shift)
            }
            (AmbientGroup::Semidirect(s), GroupElement::Pair(h, k)) => s.h.contains(*h) && s.k.contains(*k),
            _ => false,
        }
    }

    /// Brings a payload into canonical form. Only the quotient group has
    /// non-canonical representatives.
    pub fn canonicalize(&self, a: GroupElement) -> GroupElement {
        match (self, a) {
            (AmbientGroup::ProjectiveSl2, GroupElement::Matrix(m)) => GroupElement::Matrix(m.sign_normalized()),
            (_, a) => a,
        }
    }

    fn ensure(&self, a: &GroupElement) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::Ownership { group: self.name(), detail: a.to_string() })
        }
    }

    /// Group product. Callers guarantee membership; payloads of the wrong
    /// variant panic. Use [`AmbientGroup::checked_op`] at trust boundaries.
    pub fn op(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        use GroupElement as E;
        match (self, a, b) {
            (AmbientGroup::Table(t), E::Index(x), E::Index(y)) => E::Index(t.mul(*x, *y)),
            (AmbientGroup::RationalMatrix { .. }, E::Matrix(x), E::Matrix(y)) => {
                E::Matrix(x.product(y).expect("square matrices of equal size"))
            }
            (AmbientGroup::ProjectiveSl2, E::Matrix(x), E::Matrix(y)) => {
                E::Matrix(x.product(y).expect("2x2 matrices").sign_normalized())
            }
            (AmbientGroup::UnitGroup(r), E::Unit(x), E::Unit(y)) => E::Unit(r.mul(x, y)),
            (AmbientGroup::Affine(r), E::Affine { unit: a, shift: x }, E::Affine { unit: b, shift: y }) => E::Affine {
                unit: r.mul(a, b),
                shift: r.add(x, &r.mul(a, y)),
            },
            (AmbientGroup::Semidirect(s), E::Pair(h, k), E::Pair(g, l)) => {
                E::Pair(s.h.mul(*h, *g), s.k.mul(*k, s.phi(*h, *l)))
            }
            _ => panic!("payload {a} / {b} does not belong to {}", self.name()),
        }
    }

    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        use GroupElement as E;
        match (self, a) {
            (AmbientGroup::Table(t), E::Index(x)) => E::Index(t.inv(*x)),
            (AmbientGroup::RationalMatrix { .. }, E::Matrix(x)) => E::Matrix(x.inverse().expect("invertible")),
            (AmbientGroup::ProjectiveSl2, E::Matrix(x)) => {
                E::Matrix(x.inverse().expect("invertible").sign_normalized())
            }
            (AmbientGroup::UnitGroup(r), E::Unit(x)) => E::Unit(r.inv(x).expect("unit")),
            (AmbientGroup::Affine(r), E::Affine { unit, shift }) => {
                let ai = r.inv(unit).expect("unit");
                let shift = r.neg(&r.mul(&ai, shift));
                E::Affine { unit: ai, shift }
            }
            (AmbientGroup::Semidirect(s), E::Pair(h, k)) => {
                let hi = s.h.inv(*h);
                E::Pair(hi, s.phi(hi, s.k.inv(*k)))
            }
            _ => panic!("payload {a} does not belong to {}", self.name()),
        }
    }

    pub fn checked_op(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.ensure(a)?;
        self.ensure(b)?;
        Ok(self.op(a, b))
    }

    pub fn checked_inv(&self, a: &GroupElement) -> Result<GroupElement> {
        self.ensure(a)?;
        Ok(self.inv(a))
    }

    /// `a^-1 b`, the workhorse of brute-force factorization.
    pub fn left_divide(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.op(&self.inv(a), b)
    }

    pub fn is_identity(&self, a: &GroupElement) -> bool {
        *a == self.identity()
    }

    pub fn is_finite(&self) -> bool {
        self.enumerate().is_some()
    }

    /// Every element, for finite groups.
    pub fn enumerate(&self) -> Option<Vec<GroupElement>> {
        match self {
            AmbientGroup::Table(t) => Some((0..t.order()).map(GroupElement::Index).collect()),
            AmbientGroup::UnitGroup(r) => Some(r.units().into_iter().map(GroupElement::Unit).collect()),
            AmbientGroup::Affine(r) => {
                let units = r.units();
                let all = r.elements();
                Some(
                    units
                        .iter()
                        .flat_map(|u| all.iter().map(move |x| GroupElement::Affine { unit: u.clone(), shift: x.clone() }))
                        .collect(),
                )
            }
            AmbientGroup::Semidirect(s) => Some(
                (0..s.h.order())
                    .flat_map(|h| (0..s.k.order()).map(move |k| GroupElement::Pair(h, k)))
                    .collect(),
            ),
            AmbientGroup::RationalMatrix { .. } | AmbientGroup::ProjectiveSl2 => None,
        }
    }
}

/// Checks associativity, two-sided identity and two-sided inverses on the
/// given elements, and closure when `elements` is the whole group.
pub fn verify_group_axioms(group: &AmbientGroup, elements: &[GroupElement], closed: bool) -> VerificationReport {
    use rayon::prelude::*;
    let e = group.identity();
    let set: std::collections::HashSet<&GroupElement> = elements.iter().collect();
    let per_a = |a: &GroupElement| {
        let mut r = VerificationReport::new(format!("group axioms of {}", group.name()));
        r.check_mut("membership").record(group.contains(a), || format!("{a} not a valid payload"));
        r.check_mut("left-identity").record(group.op(&e, a) == *a, || format!("e*{a} != {a}"));
        r.check_mut("right-identity").record(group.op(a, &e) == *a, || format!("{a}*e != {a}"));
        let ai = group.inv(a);
        r.check_mut("inverses").record(group.op(a, &ai) == e && group.op(&ai, a) == e, || {
            format!("{a} * {ai} or {ai} * {a} is not e")
        });
        for b in elements {
            let ab = group.op(a, b);
            if closed {
                r.check_mut("closure").record(set.contains(&ab), || format!("{a}*{b} = {ab} escapes"));
            }
            for c in elements {
                let lhs = group.op(&ab, c);
                let rhs = group.op(a, &group.op(b, c));
                r.check_mut("associativity").record(lhs == rhs, || format!("({a}*{b})*{c} = {lhs} but {a}*({b}*{c}) = {rhs}"));
            }
        }
        r
    };
    elements
        .par_iter()
        .map(per_a)
        .reduce(|| VerificationReport::new(format!("group axioms of {}", group.name())), VerificationReport::merge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::frac;

    #[test]
    fn finite_groups_satisfy_axioms() {
        let groups = vec![
            AmbientGroup::Table(Arc::new(CayleyTable::cyclic(5))),
            AmbientGroup::Table(Arc::new(CayleyTable::symmetric(3))),
            AmbientGroup::UnitGroup(FiniteRing::new(2, 2).unwrap()),
            AmbientGroup::Affine(FiniteRing::integers_mod(5).unwrap()),
        ];
        for g in groups {
            let all = g.enumerate().unwrap();
            let report = verify_group_axioms(&g, &all, true);
            assert!(report.passed(), "{report}");
            assert!(report.check("associativity").unwrap().tested > 0);
        }
    }

    #[test]
    fn semidirect_product_rule() {
        let h = CayleyTable::cyclic(2);
        let k = CayleyTable::cyclic(3);
        // inversion action: phi_1(k) = -k
        let action = vec![vec![0, 1, 2], vec![0, 2, 1]];
        let s = AmbientGroup::Semidirect(Arc::new(SemidirectTables::new(h, k, action).unwrap()));
        // (1,1)(0,1) = (1, 1 + phi_1(1)) = (1, 1 + 2) = (1, 0)
        assert_eq!(s.op(&GroupElement::Pair(1, 1), &GroupElement::Pair(0, 1)), GroupElement::Pair(1, 0));
        let all = s.enumerate().unwrap();
        assert_eq!(all.len(), 6);
        assert!(verify_group_axioms(&s, &all, true).passed());
    }

    #[test]
    fn affine_product_rule() {
        let z7 = FiniteRing::integers_mod(7).unwrap();
        let g = AmbientGroup::Affine(z7);
        let a = GroupElement::Affine { unit: z7.elem(&[3]), shift: z7.elem(&[2]) };
        let b = GroupElement::Affine { unit: z7.elem(&[2]), shift: z7.elem(&[5]) };
        // (3,2)(2,5) = (6, 2 + 15) = (6, 3)
        assert_eq!(g.op(&a, &b), GroupElement::Affine { unit: z7.elem(&[6]), shift: z7.elem(&[3]) });
    }

    #[test]
    fn foreign_elements_are_rejected() {
        let g = AmbientGroup::Table(Arc::new(CayleyTable::cyclic(3)));
        let err = g.checked_op(&GroupElement::Index(1), &GroupElement::Index(7)).unwrap_err();
        assert!(matches!(err, Error::Ownership { .. }));
        let sl = AmbientGroup::RationalMatrix { n: 2, special: true };
        let m = GroupElement::Matrix(Matrix::from_ints(2, 2, &[2, 0, 0, 1]));
        assert!(sl.checked_inv(&m).is_err());
        assert!(sl.checked_op(&GroupElement::Index(0), &GroupElement::Index(0)).is_err());
    }

    #[test]
    fn psl2_canonical_forms() {
        let g = AmbientGroup::ProjectiveSl2;
        let minus = GroupElement::Matrix(Matrix::from_ints(2, 2, &[-1, 0, 0, -1]));
        let canon = g.canonicalize(minus.clone());
        assert!(g.is_identity(&canon));
        assert_eq!(g.canonicalize(canon.clone()), canon);
        assert!(!g.contains(&minus));
        let a = GroupElement::Matrix(
            Matrix::from_rows(vec![vec![frac(0, 1), frac(-1, 1)], vec![frac(1, 1), frac(0, 1)]]).unwrap(),
        );
        let a = g.canonicalize(a);
        // order 2 in PSL_2
        assert!(g.is_identity(&g.op(&a, &a)));
    }

    #[test]
    fn corrupted_table_is_caught() {
        let s3 = CayleyTable::symmetric(3);
        let bad = s3.corrupted((1, 2), (1, 3)).unwrap();
        let g = AmbientGroup::Table(Arc::new(bad));
        let report = verify_group_axioms(&g, &g.enumerate().unwrap(), true);
        assert!(!report.passed());
        assert!(report.check("associativity").unwrap().first_counterexample.is_some());
    }
}
