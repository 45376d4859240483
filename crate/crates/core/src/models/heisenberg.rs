//! `SL_2(Q)` and the two-parameter subgroup
//! `K(x,y) = [[1,0,−x],[−x,1,−y+x²/2],[0,0,1]]` inside `SL_3(Q)`.

use std::sync::Arc;

use num_traits::{One, Zero};
use rand_chacha::ChaCha8Rng;

use super::{params_of, random_nonzero_rational, random_rational, ClaimedActions, ExampleInstance};
use crate::error::{Error, Result};
use crate::exact::rational::{frac, int};
use crate::exact::{AmbientGroup, GroupElement, Matrix, Rational};
use crate::pair::{AdmissiblePair, FactorFn, Factorizer, Predicate, Subgroup};
use crate::report::{Finding, VerificationReport};

fn half() -> Rational {
    frac(1, 2)
}

/// `[[a,b,0],[c,d,0],[0,0,1]]`.
pub fn heisenberg_h(a: Rational, b: Rational, c: Rational, d: Rational) -> GroupElement {
    let (z, o) = (Rational::zero(), Rational::one());
    GroupElement::Matrix(
        Matrix::new(3, 3, vec![a, b, z.clone(), c, d, z.clone(), z.clone(), z, o]).expect("3x3"),
    )
}

pub fn heisenberg_k(x: Rational, y: Rational) -> GroupElement {
    let (z, o) = (Rational::zero(), Rational::one());
    let v = -y + &x * &x * half();
    GroupElement::Matrix(
        Matrix::new(3, 3, vec![o.clone(), z.clone(), -x.clone(), -x, o.clone(), v, z.clone(), z, o]).expect("3x3"),
    )
}

fn entries(g: &GroupElement) -> Option<&[Rational]> {
    g.as_matrix().filter(|m| m.rows() == 3 && m.cols() == 3).map(Matrix::entries)
}

/// `(a, b, c, d)` of an `H` element.
fn block(h: &GroupElement) -> Option<[Rational; 4]> {
    let e = entries(h)?;
    Some([e[0].clone(), e[1].clone(), e[3].clone(), e[4].clone()])
}

/// `(x, y)` of a `K` element.
fn coords(k: &GroupElement) -> Option<(Rational, Rational)> {
    let e = entries(k)?;
    let x = -e[2].clone();
    let y = &x * &x * half() - &e[5];
    Some((x, y))
}

fn last_row_affine(e: &[Rational]) -> bool {
    e[6].is_zero() && e[7].is_zero() && e[8].is_one()
}

fn is_h(g: &GroupElement) -> bool {
    entries(g).is_some_and(|e| last_row_affine(e) && e[2].is_zero() && e[5].is_zero() && (&e[0] * &e[4] - &e[1] * &e[3]).is_one())
}

fn is_k(g: &GroupElement) -> bool {
    coords(g).is_some_and(|(x, y)| *g == heisenberg_k(x, y))
}

fn random_sl2(rng: &mut ChaCha8Rng) -> GroupElement {
    let a = random_nonzero_rational(rng, 4, 3);
    let b = random_rational(rng, 4, 3);
    let c = random_rational(rng, 4, 3);
    let d = (Rational::one() + &b * &c) / &a;
    heisenberg_h(a, b, c, d)
}

/// `r` bounds the integer part of the `K` window.
pub fn sl2_heisenberg(r: i64) -> Result<ExampleInstance> {
    if !(1..=3).contains(&r) {
        return Err(Error::Domain("window radius r must be 1, 2 or 3".into()));
    }
    let q = |n: i64, d: i64| frac(n, d);
    let hs: Vec<GroupElement> = [
        [q(1, 1), q(0, 1), q(0, 1), q(1, 1)],
        [q(1, 1), q(1, 1), q(0, 1), q(1, 1)],
        [q(1, 1), q(0, 1), q(1, 1), q(1, 1)],
        [q(1, 1), q(-1, 1), q(0, 1), q(1, 1)],
        [q(0, 1), q(-1, 1), q(1, 1), q(0, 1)],
        [q(2, 1), q(0, 1), q(0, 1), q(1, 2)],
        [q(2, 1), q(1, 1), q(1, 1), q(1, 1)],
        [q(1, 1), q(1, 2), q(0, 1), q(1, 1)],
        [q(1, 1), q(0, 1), q(-1, 2), q(1, 1)],
        [q(2, 1), q(3, 1), q(1, 1), q(2, 1)],
        [q(1, 3), q(1, 1), q(0, 1), q(3, 1)],
        [q(-1, 1), q(2, 1), q(0, 1), q(-1, 1)],
    ]
    .into_iter()
    .map(|[a, b, c, d]| heisenberg_h(a, b, c, d))
    .collect();
    let mut coords_window: Vec<Rational> = (-r..=r).map(int).collect();
    coords_window.extend([q(1, 2), q(-1, 2)]);
    let ks: Vec<GroupElement> = coords_window
        .iter()
        .flat_map(|x| [int(0), int(1), q(-1, 2)].into_iter().map(move |y| heisenberg_k(x.clone(), y)))
        .collect();

    // g = K(x', y')·H(a', b', c', d') read off the entries of g
    let factor: FactorFn = Arc::new(|g| {
        let e = entries(g)?;
        if !last_row_affine(e) {
            return None;
        }
        let x = -e[2].clone();
        let y = &x * &x * half() - &e[5];
        let h = heisenberg_h(e[0].clone(), e[1].clone(), &e[3] + &x * &e[0], &e[4] + &x * &e[1]);
        Some((heisenberg_k(x, y), h))
    });
    let h_pred: Predicate = Arc::new(is_h);
    let k_pred: Predicate = Arc::new(is_k);
    let pair = AdmissiblePair::new(
        "SL2 x Q^2 in SL3(Q)",
        AmbientGroup::RationalMatrix { n: 3, special: true },
        Subgroup::new("H", h_pred, hs, false),
        Subgroup::new("K", k_pred, ks, false),
        Factorizer::ClosedForm(factor),
        false,
    );

    // The formulas exactly as printed.
    let claims = ClaimedActions {
        domain: Arc::new(|_, _| true),
        right: Arc::new(|h, k| {
            let [a, b, c, d] = block(h)?;
            let (x, y) = coords(k)?;
            let x2 = &x * &x;
            let first = &a * &x + &b * &y - &x2 * half();
            let inner = &a * &x + &b * (&y - &x2 * half());
            let second = &c * &x + &d * &y - &d * half() * &x2 + half() * &inner * &inner;
            Some(heisenberg_k(first, second))
        }),
        left: Arc::new(|h, k| {
            let [a, b, c, d] = block(h)?;
            let (x, y) = coords(k)?;
            let x2 = &x * &x;
            let s = &a * &x + &b * &y - &b * half() * &x2;
            let t = &a * &x + &b * (&y - &x2 * half());
            let a1 = &a - &b * &x;
            Some(heisenberg_h(a1.clone(), b.clone(), &c - &d * &x + &a1 * &s, &d + &b * &t))
        }),
        domain_text: "actions defined everywhere",
        right_text: "A ▷ (x,y) = (ax + by − x²/2, cx + dy − (d/2)x² + (ax + b(y − x²/2))²/2)",
        left_text: "A ◁ (x,y) = [[a − bx, b], [c − dx + (a − bx)(ax + by − (b/2)x²), d + b(ax + b(y − x²/2))]]",
    };
    let sampler = Arc::new(|rng: &mut ChaCha8Rng| {
        let h = random_sl2(rng);
        let k = heisenberg_k(random_rational(rng, 4, 3), random_rational(rng, 4, 3));
        (h, k)
    });
    Ok(ExampleInstance::new("sl2-heisenberg", params_of(&[("r", r.to_string())]), pair, claims)
        .with_sampler(sampler)
        .with_discrepancy(super::CLAIM_RIGHT)
        .with_extra("kh-is-everything", Arc::new(kh_is_everything))
        .with_extra("corrected-right", Arc::new(corrected_right)))
}

/// Every element of the ambient affine subgroup factors as `kh`.
fn kh_is_everything(inst: &ExampleInstance) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("KH covers the affine subgroup");
    let mut agree = 0;
    for (i, (h, k)) in inst.sample_points(400, 11).into_iter().enumerate() {
        // h·k and k·h both lie in G; so do shifted products
        let g = inst.pair.ambient().op(&h, &k);
        let g = inst.pair.ambient().op(&k, &g);
        let found = inst.pair.factor_kh(&g)?.is_some();
        r.check_mut("factors").record(found, || format!("sample {i}: {g} not in KH"));
        agree += u64::from(found);
    }
    r.findings.push(Finding {
        id: "kh-closed".into(),
        statement: "every sampled element of the affine subgroup factors as kh, so KH is the whole subgroup on the rational model".into(),
        agreeing: agree,
        disagreeing: 0,
        minimal_counterexample: None,
    });
    Ok(r)
}

/// The first component with `(b/2)x²` in place of `x²/2` agrees everywhere.
fn corrected_right(inst: &ExampleInstance) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("right action with (b/2)x²");
    let mut pts = inst.window_points();
    pts.extend(inst.sample_points(300, 5));
    for (h, k) in pts {
        let ([a, b, c, d], (x, y)) = (block(&h).expect("H"), coords(&k).expect("K"));
        let x2 = &x * &x;
        let first = &a * &x + &b * &y - &b * half() * &x2;
        let second = &c * &x + &d * &y - &d * half() * &x2 + half() * &first * &first;
        let want = heisenberg_k(first, second);
        let got = inst.pair.act_right(&h, &k)?;
        r.check_mut("agrees").record(got == want, || format!("{h} ▷ {k} = {got}, corrected formula {want}"));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{verify_example, ExamplePlan, CLAIM_RIGHT};

    #[test]
    fn identity_fixes_k() {
        let inst = sl2_heisenberg(1).unwrap();
        let p = &inst.pair;
        let e = p.identity();
        let k = heisenberg_k(int(2), frac(1, 3));
        assert_eq!(p.act_right(&e, &k).unwrap(), k);
        assert_eq!(p.act_left(&e, &k).unwrap(), e);
    }

    #[test]
    fn lower_unipotent_at_origin() {
        let inst = sl2_heisenberg(1).unwrap();
        let h = heisenberg_h(int(1), int(0), int(5), int(1));
        let k = heisenberg_k(int(0), int(0));
        let a = inst.pair.actions(&h, &k).unwrap().unwrap();
        assert_eq!(a.right, k);
        assert_eq!(a.left, h);
        assert_eq!((inst.claims.left)(&h, &k), Some(h.clone()));
    }

    #[test]
    fn printed_first_component_is_off_at_identity() {
        let inst = sl2_heisenberg(1).unwrap();
        let e = inst.pair.identity();
        let k = heisenberg_k(int(1), int(0));
        // e ▷ k must be k, the printed formula gives (1/2, ...)
        assert_ne!((inst.claims.right)(&e, &k), Some(k.clone()));
        assert_eq!(inst.pair.act_right(&e, &k).unwrap(), k);
    }

    #[test]
    fn verification_reports_the_discrepancy_only() {
        let inst = sl2_heisenberg(1).unwrap();
        let r = verify_example(&inst, &ExamplePlan { samples: 200, ..Default::default() });
        assert!(r.passed(), "{r}");
        let f = r.findings.iter().find(|f| f.id == format!("claims/{CLAIM_RIGHT}")).unwrap();
        assert!(f.disagreeing > 0 && f.agreeing > 0);
        assert!(f.minimal_counterexample.is_some());
        assert_eq!(r.check("claims/claimed-left").unwrap().failed, 0);
        assert!(r.check("claims/claimed-left").unwrap().tested > 200);
    }
}
