//! The free group on `[[1,2],[0,1]]` and `[[1,0],[2,1]]` inside `SL_3(Z)`
//! with `K = {B_x}`, `B_x = I + x·E₂₃`.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{domain_error, params_of, ClaimedActions, ExampleInstance};
use crate::error::{Error, Result};
use crate::exact::rational::int;
use crate::exact::{AmbientGroup, GroupElement, Matrix, Rational};
use crate::pair::{AdmissiblePair, FactorFn, Factorizer, Predicate, Subgroup};
use crate::report::{Finding, VerificationReport};

pub fn sanov_k(x: i64) -> GroupElement {
    GroupElement::Matrix(Matrix::from_ints(3, 3, &[1, 0, 0, 0, 1, x, 0, 0, 1]))
}

fn k_rational(x: Rational) -> GroupElement {
    let mut m = Matrix::identity(3);
    m.set(1, 2, x);
    GroupElement::Matrix(m)
}

fn embed(m: &Matrix) -> Matrix {
    let mut out = Matrix::identity(3);
    for i in 0..2 {
        for j in 0..2 {
            out.set(i, j, m.get(i, j).clone());
        }
    }
    out
}

fn generators() -> [Matrix; 4] {
    let a = embed(&Matrix::from_ints(2, 2, &[1, 2, 0, 1]));
    let b = embed(&Matrix::from_ints(2, 2, &[1, 0, 2, 1]));
    let (ai, bi) = (a.inverse().expect("unimodular"), b.inverse().expect("unimodular"));
    [a, ai, b, bi]
}

/// Reduced words of length at most `l`, breadth first. Two words landing
/// on the same matrix would contradict freeness, so that aborts.
pub fn sanov_ball(l: usize) -> Result<Vec<GroupElement>> {
    let gens = generators();
    // letter i and i ^ 1 are mutually inverse
    let mut seen: HashMap<Matrix, String> = HashMap::new();
    seen.insert(Matrix::identity(3), String::new());
    let names = ["a", "A", "b", "B"];
    let mut frontier: Vec<(Matrix, usize, String)> = (0..4).map(|i| (gens[i].clone(), i, names[i].to_string())).collect();
    let mut out = vec![Matrix::identity(3)];
    for depth in 1..=l {
        let mut next = Vec::new();
        for (m, last, word) in frontier {
            if let Some(prev) = seen.insert(m.clone(), word.clone()) {
                return Err(Error::Validation(format!("words {prev:?} and {word:?} give the same matrix; freeness violated")));
            }
            out.push(m.clone());
            if depth == l {
                continue;
            }
            for i in (0..4).filter(|&i| i != last ^ 1) {
                next.push((m.product(&gens[i]).expect("3x3"), i, format!("{word}{}", names[i])));
            }
        }
        frontier = next;
    }
    Ok(out.into_iter().map(GroupElement::Matrix).collect())
}

/// `[[4n₁+1, 2n₂, 0], [2n₃, 4n₄+1, 0], [0, 0, 1]]` with integer `n` and
/// determinant 1.
fn sanov_shape(m: &Matrix) -> bool {
    let e = m.entries();
    let ints = e.iter().all(Rational::is_integer);
    let mod_is = |q: &Rational, m: i64, r: i64| q.to_integer().mod_floor(&BigInt::from(m)) == BigInt::from(r);
    m.rows() == 3
        && m.cols() == 3
        && ints
        && e[2].is_zero()
        && e[5].is_zero()
        && e[6].is_zero()
        && e[7].is_zero()
        && e[8].is_one()
        && mod_is(&e[0], 4, 1)
        && mod_is(&e[1], 2, 0)
        && mod_is(&e[3], 2, 0)
        && mod_is(&e[4], 4, 1)
        && (&e[0] * &e[4] - &e[1] * &e[3]).is_one()
}

/// `(n₁, n₂, n₃, n₄)` of a Sanov-shaped matrix.
fn n_of(h: &GroupElement) -> Option<[Rational; 4]> {
    let e = h.as_matrix()?.entries();
    let two = int(2);
    let four = int(4);
    Some([(&e[0] - int(1)) / &four, &e[1] / &two, &e[3] / &two, (&e[4] - int(1)) / four])
}

fn x_of(k: &GroupElement) -> Option<Rational> {
    k.as_matrix().map(|m| m.get(1, 2).clone())
}

fn is_k(g: &GroupElement) -> bool {
    g.as_matrix().is_some_and(|m| {
        let x = m.get(1, 2).clone();
        x.is_integer() && *g == k_rational(x)
    })
}

pub fn sanov(l: i64, m: i64) -> Result<ExampleInstance> {
    if l < 1 || m < 1 {
        return Err(domain_error("Sanov window needs L >= 1 and M >= 1"));
    }
    if l > 8 {
        return Err(Error::Coverage(format!("ball of radius {l} is too large")));
    }
    let hs = sanov_ball(l as usize)?;
    let ks: Vec<GroupElement> = (-m..=m).map(sanov_k).collect();

    // g = B_y · A with y = g₂₃ and A = B_{−y} g of Sanov shape
    let factor: FactorFn = Arc::new(|g| {
        let gm = g.as_matrix()?;
        let y = gm.get(1, 2).clone();
        if !y.is_integer() {
            return None;
        }
        let a = k_rational(-y.clone()).as_matrix()?.product(gm).ok()?;
        sanov_shape(&a).then(|| (k_rational(y), GroupElement::Matrix(a)))
    });
    let h_pred: Predicate = Arc::new(|g| g.as_matrix().is_some_and(sanov_shape));
    let k_pred: Predicate = Arc::new(is_k);
    let pair = AdmissiblePair::new(
        "Sanov F2 x Z in SL3(Z)",
        AmbientGroup::RationalMatrix { n: 3, special: true },
        Subgroup::new("H", h_pred, hs.clone(), false),
        Subgroup::new("K", k_pred, ks, false),
        Factorizer::ClosedForm(factor),
        true,
    );
    let claims = ClaimedActions {
        domain: Arc::new(|h, k| match (n_of(h), x_of(k)) {
            (Some(n), Some(x)) => (&n[1] * x).is_zero(),
            _ => false,
        }),
        right: Arc::new(|h, k| {
            let (n, x) = (n_of(h)?, x_of(k)?);
            Some(k_rational((int(4) * &n[3] + int(1)) * x))
        }),
        left: Arc::new(|h, _| Some(h.clone())),
        domain_text: "n₂x = 0",
        right_text: "A_n ▷ B_x = B_{(4n₄+1)x}",
        left_text: "A_n ◁ B_x = A_n",
    };
    let bound = m;
    let ball = Arc::new(hs);
    let sampler = Arc::new(move |rng: &mut ChaCha8Rng| {
        // half the draws use x = 0, which is always in Ω
        let h = ball[rng.gen_range(0..ball.len())].clone();
        let x = if rng.gen_bool(0.5) { 0 } else { rng.gen_range(-bound..=bound) };
        (h, sanov_k(x))
    });
    Ok(ExampleInstance::new("sanov", params_of(&[("L", l.to_string()), ("M", m.to_string())]), pair, claims)
        .with_sampler(sampler)
        .with_extra("ball", Arc::new(move |inst| ball_check(inst, l as u32)))
        .with_extra("domain-dichotomy", Arc::new(domain_dichotomy))
        .with_extra("trivial-on-full-domain", Arc::new(trivial_on_full_domain)))
}

/// Ball size `2·3^L − 1` and Sanov's congruences on every element.
fn ball_check(inst: &ExampleInstance, l: u32) -> Result<VerificationReport> {
    let hs = inst.pair.h().elements();
    let mut r = VerificationReport::new("word-length ball");
    let expected = 2 * 3usize.pow(l) - 1;
    r.check_mut("ball-size").record(hs.len() == expected, || format!("{} elements, expected {expected}", hs.len()));
    for h in hs {
        let ok = h.as_matrix().is_some_and(sanov_shape);
        r.check_mut("congruences").record(ok, || format!("{h} violates the congruences"));
    }
    Ok(r)
}

/// `D_{A_n}` is the whole `K` window when `n₂ = 0` and `{B₀}` otherwise.
fn domain_dichotomy(inst: &ExampleInstance) -> Result<VerificationReport> {
    let p = &inst.pair;
    let ks = p.k().elements();
    let mut r = VerificationReport::new("domains of the partial maps");
    for h in p.h().elements() {
        let dom = crate::groupoid::partial_domain(p, h, ks)?;
        let n2_zero = n_of(h).is_some_and(|n| n[1].is_zero());
        let ok = if n2_zero { dom.len() == ks.len() } else { dom == vec![sanov_k(0)] };
        r.check_mut("dichotomy").record(ok, || format!("D_h has {} elements for h = {h}", dom.len()));
    }
    Ok(r)
}

/// `n₂ = 0` with determinant 1 forces `(4n₁+1)(4n₄+1) = 1`, hence
/// `n₁ = n₄ = 0`, so `▷` is the identity wherever `x ≠ 0` is allowed.
fn trivial_on_full_domain(inst: &ExampleInstance) -> Result<VerificationReport> {
    let p = &inst.pair;
    let mut r = VerificationReport::new("action on full domains");
    let (mut agree, mut disagree, mut first) = (0, 0, None);
    for h in p.h().elements() {
        let n = n_of(h).expect("matrix");
        if !n[1].is_zero() {
            continue;
        }
        if n[0].is_zero() && n[3].is_zero() {
            agree += 1;
        } else {
            disagree += 1;
            first.get_or_insert_with(|| h.to_string());
        }
        for k in p.k().elements() {
            let right = p.act_right(h, k)?;
            r.check_mut("fixes-k").record(right == *k, || format!("{h} ▷ {k} = {right}"));
        }
    }
    r.findings.push(Finding {
        id: "n2-zero-forces-identity-diagonal".into(),
        statement: "within H, n₂ = 0 forces n₁ = n₄ = 0, so B_{(4n₄+1)x} = B_x wherever x ≠ 0 is allowed".into(),
        agreeing: agree,
        disagreeing: disagree,
        minimal_counterexample: first,
    });
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{verify_example, ExamplePlan};

    #[test]
    fn ball_sizes() {
        assert_eq!(sanov_ball(1).unwrap().len(), 5);
        assert_eq!(sanov_ball(3).unwrap().len(), 53);
    }

    #[test]
    fn generator_with_nonzero_x_is_outside() {
        let inst = sanov(2, 3).unwrap();
        let a = GroupElement::Matrix(embed(&Matrix::from_ints(2, 2, &[1, 2, 0, 1])));
        assert!(!inst.pair.in_omega(&a, &sanov_k(3)).unwrap());
        assert!(inst.pair.in_omega(&a, &sanov_k(0)).unwrap());
    }

    #[test]
    fn bad_parameters() {
        assert!(matches!(sanov(0, 3), Err(Error::Domain(_))));
        assert!(matches!(sanov(2, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn non_member_is_rejected() {
        let m = Matrix::from_ints(3, 3, &[1, 1, 0, 0, 1, 0, 0, 0, 1]);
        assert!(!sanov_shape(&m));
    }

    #[test]
    fn full_verification_small() {
        let inst = sanov(2, 3).unwrap();
        let r = verify_example(&inst, &ExamplePlan { samples: 200, ..Default::default() });
        assert!(r.passed(), "{r}");
        let f = r.findings.iter().find(|f| f.id.ends_with("n2-zero-forces-identity-diagonal")).unwrap();
        assert_eq!(f.disagreeing, 0);
        assert!(f.agreeing > 0);
    }
}
