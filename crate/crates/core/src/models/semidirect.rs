//! `H ⋉_φ K` with `H`, `K` embedded as `(h, e)` and `(e, k)`.

use std::sync::Arc;

use super::{params_of, ClaimedActions, ExampleInstance};
use crate::error::{Error, Result};
use crate::exact::{AmbientGroup, CayleyTable, GroupElement, SemidirectTables};
use crate::groupoid::{enumerate_fragment, Structure, WindowSpec};
use crate::pair::{AdmissiblePair, FactorFn, Factorizer, Subgroup};
use crate::report::VerificationReport;

/// How a generator of `Z/h` acts on `Z/k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CyclicAction {
    Trivial,
    Inversion,
    /// Multiplication by `m`.
    Power(usize),
}

impl CyclicAction {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "trivial" => Ok(CyclicAction::Trivial),
            "inversion" => Ok(CyclicAction::Inversion),
            _ => s
                .strip_prefix("power:")
                .and_then(|m| m.parse().ok())
                .map(CyclicAction::Power)
                .ok_or_else(|| Error::Parse(format!("unknown action {s:?} (trivial, inversion, power:m)"))),
        }
    }

    fn multiplier(self, k: usize) -> usize {
        match self {
            CyclicAction::Trivial => 1,
            CyclicAction::Inversion => k - 1,
            CyclicAction::Power(m) => m % k,
        }
    }

    fn label(self) -> String {
        match self {
            CyclicAction::Trivial => "trivial".into(),
            CyclicAction::Inversion => "inversion".into(),
            CyclicAction::Power(m) => format!("power:{m}"),
        }
    }
}

pub fn semidirect_cyclic(h: usize, k: usize, action: CyclicAction) -> Result<ExampleInstance> {
    if h == 0 || k == 0 {
        return Err(Error::Domain("cyclic orders must be positive".into()));
    }
    let m = action.multiplier(k);
    // φ_g(x) = m^g x
    let table = (0..h)
        .map(|g| {
            let mg = (0..g).fold(1 % k, |acc, _| acc * m % k);
            (0..k).map(|x| x * mg % k).collect()
        })
        .collect();
    let params = params_of(&[("h", h.to_string()), ("k", k.to_string()), ("action", action.label())]);
    semidirect(CayleyTable::cyclic(h), CayleyTable::cyclic(k), table, params)
}

/// Checks that `φ` is a homomorphism `H → Aut(K)`.
fn validate_action(s: &SemidirectTables) -> Result<()> {
    let (h, k) = (&s.h, &s.k);
    for a in 0..h.order() {
        let mut seen = vec![false; k.order()];
        for x in 0..k.order() {
            seen[s.phi(a, x)] = true;
            for y in 0..k.order() {
                if s.phi(a, k.mul(x, y)) != k.mul(s.phi(a, x), s.phi(a, y)) {
                    return Err(Error::Validation(format!("φ_{a} is not multiplicative at ({x}, {y})")));
                }
            }
            for b in 0..h.order() {
                if s.phi(h.mul(a, b), x) != s.phi(a, s.phi(b, x)) {
                    return Err(Error::Validation(format!("φ is not a homomorphism at h = {a}, g = {b}, k = {x}")));
                }
            }
        }
        if seen.contains(&false) {
            return Err(Error::Validation(format!("φ_{a} is not a bijection")));
        }
    }
    if (0..k.order()).any(|x| s.phi(h.identity(), x) != x) {
        return Err(Error::Validation("φ_e is not the identity".into()));
    }
    Ok(())
}

pub fn semidirect(h: CayleyTable, k: CayleyTable, action: Vec<Vec<usize>>, params: super::Params) -> Result<ExampleInstance> {
    let tables = SemidirectTables::new(h, k, action)?;
    validate_action(&tables)?;
    let (eh, ek) = (tables.h.identity(), tables.k.identity());
    let hs: Vec<_> = (0..tables.h.order()).map(|a| GroupElement::Pair(a, ek)).collect();
    let ks: Vec<_> = (0..tables.k.order()).map(|x| GroupElement::Pair(eh, x)).collect();
    let tables = Arc::new(tables);
    let factor: FactorFn = Arc::new(move |g| match g {
        GroupElement::Pair(a, c) => Some((GroupElement::Pair(eh, *c), GroupElement::Pair(*a, ek))),
        _ => None,
    });
    let pair = AdmissiblePair::new(
        format!("{} ⋉ {}", tables.h.name(), tables.k.name()),
        AmbientGroup::Semidirect(tables.clone()),
        Subgroup::finite("H", hs),
        Subgroup::finite("K", ks),
        Factorizer::Hybrid(factor),
        true,
    );
    let phi = tables.clone();
    let claims = ClaimedActions {
        domain: Arc::new(|_, _| true),
        right: Arc::new(move |h, k| match (h, k) {
            (GroupElement::Pair(a, _), GroupElement::Pair(_, x)) => Some(GroupElement::Pair(eh, phi.phi(*a, *x))),
            _ => None,
        }),
        left: Arc::new(|h, _| Some(h.clone())),
        domain_text: "HK = KH = G",
        right_text: "h ▷ k = φ_h(k)",
        left_text: "h ◁ k = h",
    };
    Ok(ExampleInstance::new("semidirect", params, pair, claims)
        .with_extra("left-action-trivial", Arc::new(left_action_trivial))
        .with_extra("hat-is-product", Arc::new(hat_is_product)))
}

/// `h ◁ k` is constant in `k`.
fn left_action_trivial(inst: &ExampleInstance) -> Result<VerificationReport> {
    let p = &inst.pair;
    let mut r = VerificationReport::new("left action is trivial");
    for h in p.h().elements() {
        for k in p.k().elements() {
            let left = p.act_left(h, k)?;
            r.check_mut("constant-in-k").record(left == *h, || format!("{h} ◁ {k} = {left}"));
        }
    }
    Ok(r)
}

/// Under `𝒢̂`, `(h₁,k₁)` and `(h₂,k₂)` compose iff `h₂ = h₁`, with
/// product `(h₁, k₁k₂)`: the product groupoid `H × K`.
fn hat_is_product(inst: &ExampleInstance) -> Result<VerificationReport> {
    product_relation(&inst.pair, Structure::GHat)
}

/// Compares composability and products with those of a product groupoid:
/// `H` as a space and `K` as a group under `𝒢̂`, and the other way round
/// under `𝒢`.
pub(super) fn product_relation(pair: &AdmissiblePair, structure: Structure) -> Result<VerificationReport> {
    let frag = enumerate_fragment(pair, structure, &WindowSpec::of_pair(pair))?;
    let dg = frag.groupoid();
    let g = pair.ambient();
    let mut r = VerificationReport::new(format!("{structure} is a product groupoid"));
    for x in frag.elements() {
        for y in frag.elements() {
            let (expect_ok, expect) = match structure {
                Structure::GHat => (x.h == y.h, (x.h.clone(), g.op(&x.k, &y.k))),
                Structure::G => (x.k == y.k, (g.op(&x.h, &y.h), x.k.clone())),
            };
            let got = dg.compose(x, y)?;
            r.check_mut("product-composability")
                .record(got.is_some() == expect_ok, || format!("{x}, {y}: composable = {}", got.is_some()));
            if let Some(p) = got {
                r.check_mut("product-multiplication")
                    .record((p.h.clone(), p.k.clone()) == expect, || format!("{x}{y} = {p}"));
            }
        }
    }
    Ok(r)
}
