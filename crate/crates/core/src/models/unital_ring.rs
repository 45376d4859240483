//! The affine group `A* × A` of a finite unital ring with
//! `H = {(a, a−1)}` and `K = {(b, 0)}`.

use std::sync::Arc;

use super::{params_of, ClaimedActions, ExampleInstance};
use crate::error::Result;
use crate::exact::{AmbientGroup, FiniteRing, GroupElement, RingElem};
use crate::pair::{AdmissiblePair, FactorFn, Factorizer, Subgroup};
use crate::report::VerificationReport;

fn affine(unit: RingElem, shift: RingElem) -> GroupElement {
    GroupElement::Affine { unit, shift }
}

/// `A = Z/n` for `dim = 1`, `M_2(Z/n)` for `dim = 2`.
pub fn unital_ring(n: u64, dim: usize) -> Result<ExampleInstance> {
    let ring = FiniteRing::new(n, dim)?;
    let one = ring.one();
    let zero = ring.zero();
    let units = ring.units();
    let hs: Vec<_> = units.iter().map(|a| affine(a.clone(), ring.sub(a, &one))).collect();
    let ks: Vec<_> = units.iter().map(|b| affine(b.clone(), zero.clone())).collect();

    // (c, y) = (c−y, 0)(t, t−1) with t = (c−y)⁻¹c, when c − y is a unit.
    let factor: FactorFn = Arc::new(move |g| {
        let GroupElement::Affine { unit: c, shift: y } = g else { return None };
        let k = ring.sub(c, y);
        let t = ring.mul(&ring.inv(&k)?, c);
        let h = affine(t.clone(), ring.sub(&t, &ring.one()));
        Some((affine(k, ring.zero()), h))
    });
    let pair = AdmissiblePair::new(
        format!("{} affine", ring.name()),
        AmbientGroup::Affine(ring),
        Subgroup::finite("H", hs),
        Subgroup::finite("K", ks),
        Factorizer::Hybrid(factor),
        true,
    );

    // x = a(b−1)+1 evaluated straight from the printed formulas
    let x_of = move |h: &GroupElement, k: &GroupElement| -> Option<(RingElem, RingElem, RingElem)> {
        let (GroupElement::Affine { unit: a, .. }, GroupElement::Affine { unit: b, .. }) = (h, k) else { return None };
        let x = ring.add(&ring.mul(a, &ring.sub(b, &ring.one())), &ring.one());
        Some((a.clone(), b.clone(), x))
    };
    let (xd, xr, xl) = (x_of, x_of, x_of);
    let claims = ClaimedActions {
        domain: Arc::new(move |h, k| xd(h, k).is_some_and(|(_, _, x)| ring.is_unit(&x))),
        right: Arc::new(move |h, k| {
            let (_, _, x) = xr(h, k)?;
            ring.is_unit(&x).then(|| affine(x, ring.zero()))
        }),
        left: Arc::new(move |h, k| {
            let (a, b, x) = xl(h, k)?;
            let t = ring.mul(&ring.inv(&x)?, &ring.mul(&a, &b));
            Some(affine(t.clone(), ring.sub(&t, &ring.one())))
        }),
        domain_text: "a(b−1)+1 ∈ A*",
        right_text: "(a,a−1) ▷ (b,0) = (a(b−1)+1, 0)",
        left_text: "(a,a−1) ◁ (b,0) = (x⁻¹ab, x⁻¹ab − 1), x = a(b−1)+1",
    };
    let params = params_of(&[("n", n.to_string()), ("dim", dim.to_string())]);
    Ok(ExampleInstance::new("unital-ring", params, pair, claims).with_extra("omega-count", Arc::new(move |inst| omega_count(inst, ring))))
}

/// |Ω| from the factorizer against a direct count of unit pairs `(a, b)`
/// with `a(b−1)+1` invertible.
fn omega_count(inst: &ExampleInstance, ring: FiniteRing) -> Result<VerificationReport> {
    let units = ring.units();
    let direct = units
        .iter()
        .flat_map(|a| units.iter().map(move |b| (a, b)))
        .filter(|(a, b)| ring.is_unit(&ring.add(&ring.mul(a, &ring.sub(b, &ring.one())), &ring.one())))
        .count();
    let omega = inst.pair.omega_window()?.len();
    let mut r = VerificationReport::new("|Ω| double count");
    r.check_mut("omega-count").record(omega == direct, || format!("|Ω| = {omega}, direct count {direct}"));
    Ok(r)
}
