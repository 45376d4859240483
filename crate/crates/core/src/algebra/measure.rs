//! Atomic measures on the unit space and the modular function
//! `Δ(x) = μ(r(x)) / μ(s(x))`.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use super::norm::require_closed;
use crate::error::{Error, Result};
use crate::exact::rational::{frac, render};
use crate::exact::Rational;
use crate::groupoid::{Composite, Fragment, GroupoidElement};
use crate::report::VerificationReport;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnitMeasure {
    units: Vec<GroupoidElement>,
    weights: Vec<Rational>,
    index: HashMap<GroupoidElement, usize>,
}

impl UnitMeasure {
    /// Weights for listed units; unlisted units of the fragment get 0.
    pub fn from_weights(frag: &Fragment, weights: impl IntoIterator<Item = (GroupoidElement, Rational)>) -> Result<Self> {
        let units: Vec<GroupoidElement> = frag.units().iter().map(|&u| frag.element(u).clone()).collect();
        let index: HashMap<_, _> = units.iter().cloned().enumerate().map(|(i, u)| (u, i)).collect();
        let mut w = vec![Rational::zero(); units.len()];
        for (u, q) in weights {
            let i = *index.get(&u).ok_or_else(|| Error::Domain(format!("{u} is not a unit of the fragment")))?;
            if q.is_negative() {
                return Err(Error::Domain(format!("negative weight {} at {u}", render(&q))));
            }
            w[i] = q;
        }
        Ok(UnitMeasure { units, weights: w, index })
    }

    pub fn uniform(frag: &Fragment) -> Self {
        let n = frag.units().len() as i64;
        let w = frac(1, n.max(1));
        let units = frag.units().iter().map(|&u| (frag.element(u).clone(), w.clone())).collect::<Vec<_>>();
        Self::from_weights(frag, units).expect("units of the fragment")
    }

    /// Uniform weights rescaled so the identity unit has mass one.
    pub fn normalized_at_identity(frag: &Fragment) -> Result<Self> {
        let e = identity_unit(frag);
        let mut mu = Self::uniform(frag);
        let at_e = mu.weight(&e).filter(|q| !q.is_zero()).ok_or_else(|| Error::Coverage(format!("identity unit {e} not in the fragment")))?;
        for w in &mut mu.weights {
            *w = &*w / &at_e;
        }
        Ok(mu)
    }

    pub fn units(&self) -> &[GroupoidElement] {
        &self.units
    }

    pub fn weight(&self, u: &GroupoidElement) -> Option<Rational> {
        self.index.get(u).map(|&i| self.weights[i].clone())
    }

    pub fn weights(&self) -> impl Iterator<Item = (&GroupoidElement, &Rational)> {
        self.units.iter().zip(&self.weights)
    }

    pub fn full_support(&self) -> bool {
        self.weights.iter().all(Signed::is_positive)
    }

    /// On atomic measures, quasi-invariance means each orbit is either
    /// entirely null or entirely charged.
    pub fn is_quasi_invariant(&self, frag: &Fragment) -> bool {
        frag.orbits().iter().all(|orbit| {
            let charged = orbit.iter().filter(|u| self.weight(u).is_some_and(|q| q.is_positive())).count();
            charged == 0 || charged == orbit.len()
        })
    }

    fn positive_weight(&self, u: &GroupoidElement) -> Result<Rational> {
        self.weight(u)
            .filter(Signed::is_positive)
            .ok_or_else(|| Error::Support(u.to_string()))
    }
}

/// `(e, e)`, the unit shared by both structures.
pub(crate) fn identity_unit(frag: &Fragment) -> GroupoidElement {
    let e = frag.pair().identity();
    GroupoidElement::new(e.clone(), e)
}

/// `Δ` on every arrow, in fragment order.
pub fn modular_function(frag: &Fragment, mu: &UnitMeasure) -> Result<Vec<Rational>> {
    require_closed(frag)?;
    (0..frag.len())
        .map(|i| Ok(mu.positive_weight(frag.range(i))? / mu.positive_weight(frag.source(i))?))
        .collect()
}

/// Full support, `μ({e}) = 1` when asked, `Δ` multiplicative on every
/// composable pair and `≡ 1` on every isotropy group.
pub fn verify_measure(frag: &Fragment, mu: &UnitMeasure, identity_normalized: bool) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(format!("unit measure on {} ({})", frag.pair().name(), frag.structure()));
    r.check_mut("full-support").record(mu.full_support(), || {
        let zero = mu.weights().find(|(_, w)| !w.is_positive()).map(|(u, _)| u.to_string());
        format!("zero weight at {}", zero.unwrap_or_default())
    });
    r.check_mut("quasi-invariant").record(mu.is_quasi_invariant(frag), || "an orbit is partly null".into());
    if identity_normalized {
        let e = identity_unit(frag);
        let w = mu.weight(&e);
        r.check_mut("identity-mass-one").record(w.as_ref().is_some_and(One::is_one), || format!("μ({e}) = {w:?}"));
    }
    let delta = modular_function(frag, mu)?;
    for a in 0..frag.len() {
        for &b in frag.composable_with(a) {
            match frag.compose(a, b) {
                Composite::Inside(ab) => {
                    let ok = delta[ab] == &delta[a] * &delta[b];
                    r.check_mut("multiplicative").record(ok, || format!("Δ({} · {}) ≠ Δ·Δ", frag.element(a), frag.element(b)));
                }
                _ => r.check_mut("multiplicative").skip(),
            }
        }
        if frag.range(a) == frag.source(a) {
            r.check_mut("trivial-on-isotropy")
                .record(delta[a].is_one(), || format!("Δ({}) = {}", frag.element(a), render(&delta[a])));
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;
    use crate::groupoid::{enumerate_fragment, Structure, WindowSpec};
    use crate::models::{semidirect_cyclic, unital_ring, CyclicAction};

    fn z5() -> Fragment {
        let inst = unital_ring(5, 1).unwrap();
        enumerate_fragment(&inst.pair, Structure::G, &WindowSpec::of_pair(&inst.pair)).unwrap()
    }

    #[test]
    fn uniform_gives_trivial_modular_function() {
        let frag = z5();
        let d = modular_function(&frag, &UnitMeasure::uniform(&frag)).unwrap();
        assert!(d.iter().all(One::is_one));
    }

    #[test]
    fn normalized_measure_passes() {
        let frag = z5();
        let mu = UnitMeasure::normalized_at_identity(&frag).unwrap();
        let r = verify_measure(&frag, &mu, true).unwrap();
        assert!(r.passed(), "{r}");
        assert!(r.check("trivial-on-isotropy").unwrap().tested > 0);
    }

    #[test]
    fn two_units_with_weights_one_and_two() {
        // Z/2 inverting Z/3: units 0, 1, 2 in K, orbits {0} and {1, 2}
        let inst = semidirect_cyclic(2, 3, CyclicAction::Inversion).unwrap();
        let frag = enumerate_fragment(&inst.pair, Structure::G, &WindowSpec::of_pair(&inst.pair)).unwrap();
        let units: Vec<GroupoidElement> = frag.units().iter().map(|&u| frag.element(u).clone()).collect();
        let weights = units.iter().enumerate().map(|(i, u)| (u.clone(), int(i as i64 % 2 + 1)));
        let mu = UnitMeasure::from_weights(&frag, weights).unwrap();
        let d = modular_function(&frag, &mu).unwrap();
        let moving: Vec<&Rational> = (0..frag.len()).filter(|&i| frag.range(i) != frag.source(i)).map(|i| &d[i]).collect();
        assert!(!moving.is_empty());
        assert!(moving.iter().all(|q| **q == int(2) || **q == frac(1, 2)));
        let r = verify_measure(&frag, &mu, false).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn zero_weight_is_a_support_error() {
        let frag = z5();
        let u = frag.element(frag.units()[0]).clone();
        let mu = UnitMeasure::from_weights(&frag, [(u, int(1))]).unwrap();
        assert!(!mu.full_support());
        assert!(matches!(modular_function(&frag, &mu), Err(Error::Support(_))));
    }
}
