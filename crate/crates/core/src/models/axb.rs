//! The `ax+b` group `i(a,b) = [[a,b],[0,1/a]]`, `a > 0`, and
//! `j(x) = [[1,0],[x,1]]` inside `PSL_2(Q)`.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{random_positive_rational, random_rational, ClaimedActions, ExampleInstance, Params};
use crate::exact::rational::{frac, int};
use crate::exact::{AmbientGroup, GroupElement, Matrix, Rational};
use crate::pair::{AdmissiblePair, FactorFn, Factorizer, Predicate, Subgroup};
use crate::report::VerificationReport;

/// `i(a, b)`; `a` must be positive.
pub fn h_elem(a: Rational, b: Rational) -> GroupElement {
    let d = a.recip();
    GroupElement::Matrix(Matrix::new(2, 2, vec![a, b, Rational::zero(), d]).expect("2x2").sign_normalized())
}

/// `j(x)`.
pub fn k_elem(x: Rational) -> GroupElement {
    GroupElement::Matrix(Matrix::new(2, 2, vec![Rational::one(), Rational::zero(), x, Rational::one()]).expect("2x2"))
}

fn entries(g: &GroupElement) -> Option<&[Rational]> {
    g.as_matrix().filter(|m| m.rows() == 2 && m.cols() == 2).map(Matrix::entries)
}

fn ab(h: &GroupElement) -> Option<(Rational, Rational)> {
    let e = entries(h)?;
    Some((e[0].clone(), e[1].clone()))
}

fn x_of(k: &GroupElement) -> Option<Rational> {
    entries(k).map(|e| e[2].clone())
}

pub fn axb() -> ExampleInstance {
    let q = |n, d| frac(n, d);
    let hs: Vec<GroupElement> = [q(1, 2), q(1, 1), q(2, 1), q(3, 1)]
        .into_iter()
        .flat_map(|a| [q(-1, 1), q(0, 1), q(1, 2), q(1, 1)].into_iter().map(move |b| h_elem(a.clone(), b)))
        .collect();
    let ks: Vec<GroupElement> = [q(-2, 1), q(-1, 1), q(-1, 2), q(0, 1), q(1, 2), q(1, 1), q(2, 1)]
        .into_iter()
        .map(k_elem)
        .collect();

    // [[p,q],[r,s]] = j(r/p)·i(σp, σq) with σ = sign(p), up to ±I
    let factor: FactorFn = Arc::new(|g| {
        let e = entries(g)?;
        if e[0].is_zero() {
            return None;
        }
        let sigma = if e[0].is_positive() { int(1) } else { int(-1) };
        let h = h_elem(&sigma * &e[0], &sigma * &e[1]);
        Some((k_elem(&e[2] / &e[0]), h))
    });
    // canonical forms make these exact: H is upper triangular, K lower unipotent
    let h_pred: Predicate = Arc::new(|g| entries(g).is_some_and(|e| e[2].is_zero() && e[0].is_positive()));
    let k_pred: Predicate = Arc::new(|g| entries(g).is_some_and(|e| e[0].is_one() && e[1].is_zero() && e[3].is_one()));
    let pair = AdmissiblePair::new(
        "ax+b in PSL2(Q)",
        AmbientGroup::ProjectiveSl2,
        Subgroup::new("H", h_pred, hs, false),
        Subgroup::new("K", k_pred, ks, false),
        Factorizer::ClosedForm(factor),
        false,
    );
    let claims = ClaimedActions {
        domain: Arc::new(|h, k| match (ab(h), x_of(k)) {
            (Some((a, b)), Some(x)) => !(a + b * x).is_zero(),
            _ => false,
        }),
        right: Arc::new(|h, k| {
            let ((a, b), x) = (ab(h)?, x_of(k)?);
            let s = &a + &b * &x;
            (!s.is_zero()).then(|| k_elem(&x / (&a * &s)))
        }),
        left: Arc::new(|h, k| {
            let ((a, b), x) = (ab(h)?, x_of(k)?);
            let s = &a + &b * &x;
            if s.is_positive() {
                Some(h_elem(s, b))
            } else if s.is_negative() {
                Some(h_elem(-s, -b))
            } else {
                None
            }
        }),
        domain_text: "a + bx ≠ 0",
        right_text: "(a,b) ▷ x = x/(a(a+bx))",
        left_text: "(a,b) ◁ x = (a+bx, b) if a+bx > 0, (−a−bx, −b) if a+bx < 0",
    };
    let sampler = Arc::new(|rng: &mut ChaCha8Rng| {
        let a = random_positive_rational(rng, 5, 3);
        let b = random_rational(rng, 5, 3);
        // about a third of the draws sit on the negative branch
        let x = if rng.gen_bool(0.35) && !b.is_zero() {
            -(&a / &b) - random_positive_rational(rng, 3, 2) * b.signum()
        } else {
            random_rational(rng, 5, 3)
        };
        (h_elem(a, b), k_elem(x))
    });
    ExampleInstance::new("axb-psl2", Params::new(), pair, claims)
        .with_sampler(sampler)
        .with_extra("spot-checks", Arc::new(spot_checks))
        .with_extra("branch-coverage", Arc::new(branch_coverage))
}

fn spot_checks(inst: &ExampleInstance) -> crate::error::Result<VerificationReport> {
    let p = &inst.pair;
    let g = p.ambient();
    let mut r = VerificationReport::new("ax+b spot checks");
    let (h, k) = (h_elem(int(2), int(1)), k_elem(int(1)));
    let prod = g.op(&h, &k);
    let expected = GroupElement::Matrix(Matrix::new(2, 2, vec![int(3), int(1), frac(1, 2), frac(1, 2)]).expect("2x2"));
    r.check_mut("product").record(prod == expected, || format!("i(2,1)j(1) = {prod}"));
    let other = g.op(&k_elem(frac(1, 6)), &h_elem(int(3), int(1)));
    r.check_mut("two-factorizations").record(other == expected, || format!("j(1/6)i(3,1) = {other}"));
    let a = p.actions(&h, &k)?;
    r.check_mut("right").record(a.as_ref().map(|a| &a.right) == Some(&k_elem(frac(1, 6))), || format!("{a:?}"));
    r.check_mut("left").record(a.as_ref().map(|a| &a.left) == Some(&h_elem(int(3), int(1))), || format!("{a:?}"));
    let neg = p.act_left(&h_elem(int(1), int(1)), &k_elem(int(-2)))?;
    r.check_mut("negative-branch").record(neg == h_elem(int(1), int(-1)), || format!("(1,1) ◁ −2 = {neg}"));
    let undefined = p.in_omega(&h_elem(int(1), int(1)), &k_elem(int(-1)))?;
    r.check_mut("a+bx=0-outside").record(!undefined, || "(1,1), x = −1 lies in Ω".into());
    let fixed = p.act_right(&h_elem(int(1), int(0)), &k_elem(frac(3, 7)))?;
    r.check_mut("(1,0)-fixes").record(fixed == k_elem(frac(3, 7)), || format!("(1,0) ▷ 3/7 = {fixed}"));
    Ok(r)
}

/// Both sign branches of the left action occur among the samples.
fn branch_coverage(inst: &ExampleInstance) -> crate::error::Result<VerificationReport> {
    let mut r = VerificationReport::new("sign branches sampled");
    let (mut pos, mut neg) = (0, 0);
    for (h, k) in inst.sample_points(1000, 0) {
        let ((a, b), x) = (ab(&h).expect("H"), x_of(&k).expect("K"));
        let s = a + b * x;
        if s.is_positive() {
            pos += 1;
        } else if s.is_negative() {
            neg += 1;
        }
    }
    r.check_mut("positive-branch").record(pos >= 100, || format!("only {pos} samples"));
    r.check_mut("negative-branch").record(neg >= 100, || format!("only {neg} samples"));
    Ok(r)
}
