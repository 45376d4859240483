//! `SL_2(Q)` and the positive scalars inside `GL_2(Q)`; both actions are
//! trivial and both groupoids are products.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rand_chacha::ChaCha8Rng;

use super::semidirect::product_relation;
use super::{random_nonzero_rational, random_positive_rational, random_rational, ClaimedActions, ExampleInstance, Params};
use crate::exact::rational::{frac, int, sqrt_exact};
use crate::exact::{AmbientGroup, GroupElement, Matrix, Rational};
use crate::groupoid::{enumerate_fragment, verify_groupoid_axioms, Structure, WindowSpec};
use crate::pair::{AdmissiblePair, FactorFn, Factorizer, Predicate, Subgroup};
use crate::report::VerificationReport;

fn mat(a: Rational, b: Rational, c: Rational, d: Rational) -> GroupElement {
    GroupElement::Matrix(Matrix::new(2, 2, vec![a, b, c, d]).expect("2x2"))
}

fn scalar(x: Rational) -> GroupElement {
    mat(x.clone(), Rational::zero(), Rational::zero(), x)
}

/// The cyclic subgroup of order 6 generated by `[[0,−1],[1,1]]`.
fn hexagonal() -> Vec<GroupElement> {
    let gen = Matrix::from_ints(2, 2, &[0, -1, 1, 1]);
    let mut out = vec![Matrix::identity(2)];
    loop {
        let next = out.last().expect("nonempty").product(&gen).expect("2x2");
        if next.is_identity() {
            break;
        }
        out.push(next);
    }
    out.into_iter().map(GroupElement::Matrix).collect()
}

pub fn gl2_scalars() -> ExampleInstance {
    let mut hs = hexagonal();
    hs.push(mat(int(1), int(1), int(0), int(1)));
    hs.push(mat(int(2), int(0), int(0), frac(1, 2)));
    hs.push(mat(int(1), int(0), frac(-1, 3), int(1)));
    let ks: Vec<GroupElement> = [int(1), int(2), frac(1, 2), int(3), frac(2, 3)].into_iter().map(scalar).collect();

    // g = (xI)(g/x) with x = √det g, when det g is a positive square
    let factor: FactorFn = Arc::new(|g| {
        let m = g.as_matrix()?;
        let det = m.det().ok()?;
        if !det.is_positive() {
            return None;
        }
        let x = sqrt_exact(&det)?;
        Some((scalar(x.clone()), GroupElement::Matrix(m.scale(&x.recip()))))
    });
    let h_pred: Predicate = Arc::new(|g| g.as_matrix().is_some_and(|m| m.det().is_ok_and(|d| d.is_one())));
    let k_pred: Predicate = Arc::new(|g| {
        g.as_matrix().is_some_and(|m| {
            let e = m.entries();
            e.len() == 4 && e[1].is_zero() && e[2].is_zero() && e[0] == e[3] && e[0].is_positive()
        })
    });
    let pair = AdmissiblePair::new(
        "SL2(Q) x scalars in GL2(Q)",
        AmbientGroup::RationalMatrix { n: 2, special: false },
        Subgroup::new("H", h_pred, hs, false),
        Subgroup::new("K", k_pred, ks, false),
        Factorizer::ClosedForm(factor),
        false,
    );
    let claims = ClaimedActions {
        domain: Arc::new(|_, _| true),
        right: Arc::new(|_, k| Some(k.clone())),
        left: Arc::new(|h, _| Some(h.clone())),
        domain_text: "HK = KH",
        right_text: "A ▷ xI = xI",
        left_text: "A ◁ xI = A",
    };
    let sampler = Arc::new(|rng: &mut ChaCha8Rng| {
        let a = random_nonzero_rational(rng, 4, 3);
        let b = random_rational(rng, 4, 3);
        let c = random_rational(rng, 4, 3);
        let d = (Rational::one() + &b * &c) / &a;
        (mat(a, b, c, d), scalar(random_positive_rational(rng, 5, 4)))
    });
    ExampleInstance::new("gl2-scalars", Params::new(), pair, claims)
        .with_sampler(sampler)
        .with_extra("products", Arc::new(products))
        .with_extra("finite-subwindow", Arc::new(finite_subwindow))
}

fn products(inst: &ExampleInstance) -> crate::error::Result<VerificationReport> {
    let g = product_relation(&inst.pair, Structure::G)?;
    let hat = product_relation(&inst.pair, Structure::GHat)?;
    Ok(VerificationReport::new("both structures are products").absorb_prefixed("G", g).absorb_prefixed("Ghat", hat))
}

/// The order-6 subgroup with `K = {I}` is a closed finite fragment for both
/// structures; its axioms must pass with no skips.
fn finite_subwindow(inst: &ExampleInstance) -> crate::error::Result<VerificationReport> {
    let pair = inst.pair.with_windows(hexagonal(), vec![inst.pair.identity()]);
    let mut r = VerificationReport::new("closed sub-window");
    for s in [Structure::G, Structure::GHat] {
        let frag = enumerate_fragment(&pair, s, &WindowSpec::of_pair(&pair))?;
        r.check_mut("closed").record(frag.is_closed(), || format!("{s} sub-window not closed"));
        let ax = verify_groupoid_axioms(&frag);
        r.check_mut("no-skips").record(ax.skipped() == 0, || format!("{} skips", ax.skipped()));
        r = r.absorb_prefixed(&s.to_string(), ax).absorb_prefixed(&format!("{s}-product"), product_relation(&pair, s)?);
    }
    Ok(r)
}
