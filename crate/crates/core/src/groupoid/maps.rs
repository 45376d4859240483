//! Checks on γ and on the partial bijections `θ_h = h ▷ ·`.

use std::collections::HashSet;

use rayon::prelude::*;

use super::{gamma, Composite, Fragment, GroupoidElement, Structure};
use crate::error::Error;
use crate::exact::GroupElement;
use crate::pair::AdmissiblePair;
use crate::report::VerificationReport;

/// γ is an involutive automorphism of `𝒢`: `γ² = id`, γ preserves
/// composability and products, and `(h ▷ k)⁻¹ = (h ◁ k) ▷ k⁻¹`.
/// The fragment must carry the `𝒢` structure.
pub fn verify_gamma(frag: &Fragment) -> VerificationReport {
    let subject = format!("gamma on {}", frag.pair().name());
    let empty = || VerificationReport::new(subject.clone());
    if frag.structure() != Structure::G {
        let mut r = empty();
        r.check_mut("structure").fail(|| "gamma is checked on the G structure".into());
        return r;
    }
    let pair = frag.pair();
    let g = pair.ambient();
    let dg = frag.groupoid();
    let n = frag.len();
    let images: Vec<Result<GroupoidElement, Error>> = (0..n).map(|i| gamma(pair, frag.element(i))).collect();
    let report = (0..n)
        .into_par_iter()
        .fold(empty, |mut r, a| {
            let x = frag.element(a);
            let ga = match &images[a] {
                Ok(v) => v,
                Err(e) => {
                    r.check_mut("gamma-defined").fail(|| format!("γ({x}): {e}"));
                    return r;
                }
            };
            r.check_mut("gamma-defined").pass();
            match gamma(pair, ga) {
                Ok(back) => r.check_mut("involution").record(back == *x, || format!("γ²({x}) = {back}")),
                Err(e) if e.is_coverage() => r.check_mut("involution").skip(),
                Err(e) => r.check_mut("involution").fail(|| format!("γ(γ({x})): {e}")),
            }
            // (h ▷ k)⁻¹ = (h ◁ k) ▷ k⁻¹
            let lhs = g.inv(frag.right_action(a));
            match pair.act_right(frag.left_action(a), &g.inv(&x.k)) {
                Ok(rhs) => r
                    .check_mut("inverse-action")
                    .record(lhs == rhs, || format!("at {x}: (h▷k)⁻¹ = {lhs}, (h◁k)▷k⁻¹ = {rhs}")),
                Err(e) if e.is_coverage() => r.check_mut("inverse-action").skip(),
                Err(e) => r.check_mut("inverse-action").fail(|| format!("at {x}: {e}")),
            }
            for &b in frag.composable_with(a) {
                let y = frag.element(b);
                let Ok(gb) = &images[b] else { continue };
                let xy = match frag.compose(a, b) {
                    Composite::Inside(i) => frag.element(i).clone(),
                    Composite::Outside(p) => p,
                    Composite::NotComposable => continue,
                };
                match (dg.compose(ga, gb), gamma(pair, &xy)) {
                    (Ok(Some(prod)), Ok(gxy)) => r
                        .check_mut("homomorphism")
                        .record(prod == gxy, || format!("γ({x}{y}) = {gxy} but γ({x})γ({y}) = {prod}")),
                    (Ok(None), _) => r
                        .check_mut("homomorphism")
                        .fail(|| format!("γ({x}), γ({y}) not composable although {x}, {y} are")),
                    _ => r.check_mut("homomorphism").skip(),
                }
            }
            r
        })
        .reduce(empty, VerificationReport::merge);
    let mut seeded = empty();
    for id in ["gamma-defined", "involution", "inverse-action", "homomorphism"] {
        seeded.check_mut(id);
    }
    seeded.merge(report)
}

/// Partial-map laws over windows: `θ_h` is injective on `D_h`,
/// `θ_{h⁻¹} ∘ θ_h = id` there, and `θ_g ∘ θ_h ⊆ θ_{gh}`.
pub fn verify_partial_maps(pair: &AdmissiblePair, hs: &[GroupElement], ks: &[GroupElement]) -> VerificationReport {
    let subject = format!("partial maps of {}", pair.name());
    let empty = || VerificationReport::new(subject.clone());
    let g = pair.ambient();
    let report = hs
        .par_iter()
        .fold(empty, |mut r, h| {
            let mut images = HashSet::new();
            let mut domain = 0usize;
            for k in ks {
                let Ok(Some(act)) = pair.actions(h, k) else { continue };
                domain += 1;
                images.insert(act.right.clone());
                match pair.act_right(&g.inv(h), &act.right) {
                    Ok(back) => r
                        .check_mut("inverse-map")
                        .record(back == *k, || format!("θ_h⁻¹(θ_h({k})) = {back} for h = {h}")),
                    Err(e) if e.is_coverage() => r.check_mut("inverse-map").skip(),
                    Err(e) => r.check_mut("inverse-map").fail(|| format!("θ_h⁻¹ undefined at θ_h({k}), h = {h}: {e}")),
                }
                for g2 in hs {
                    // θ_g(θ_h(k)) defined ⟹ θ_gh(k) defined and equal
                    let Ok(Some(outer)) = pair.actions(g2, &act.right) else { continue };
                    match pair.actions(&g.op(g2, h), k) {
                        Ok(Some(direct)) => r.check_mut("containment").record(direct.right == outer.right, || {
                            format!("θ_g θ_h({k}) = {} but θ_gh({k}) = {} for g = {g2}, h = {h}", outer.right, direct.right)
                        }),
                        Ok(None) => r
                            .check_mut("containment")
                            .fail(|| format!("θ_g θ_h({k}) defined but θ_gh({k}) not, g = {g2}, h = {h}")),
                        Err(_) => r.check_mut("containment").skip(),
                    }
                }
            }
            r.check_mut("injective")
                .record(images.len() == domain, || format!("θ_h not injective on its domain for h = {h}"));
            r
        })
        .reduce(empty, VerificationReport::merge);
    let mut seeded = empty();
    for id in ["injective", "inverse-map", "containment"] {
        seeded.check_mut(id);
    }
    seeded.merge(report)
}
