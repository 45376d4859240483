//! Explicitly enumerated pieces of a double groupoid.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{DoubleGroupoid, GroupoidElement, Structure};
use crate::error::{Error, Result};
use crate::exact::GroupElement;
use crate::pair::AdmissiblePair;
use crate::report::VerificationReport;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Closure {
    /// Products, inverses and units all stay inside: a finite groupoid.
    Closed,
    /// Some composite, inverse or unit exits the enumerated set.
    Window,
}

/// `H`- and `K`-windows whose product set is filtered down to Ω.
#[derive(Clone, Debug)]
pub struct WindowSpec {
    pub hs: Vec<GroupElement>,
    pub ks: Vec<GroupElement>,
}

impl WindowSpec {
    pub fn of_pair(pair: &AdmissiblePair) -> Self {
        WindowSpec { hs: pair.h().elements().to_vec(), ks: pair.k().elements().to_vec() }
    }
}

/// Result of composing two fragment elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Composite {
    NotComposable,
    Inside(usize),
    /// Composable, but the product is not in the fragment.
    Outside(GroupoidElement),
}

/// An explicitly listed set of arrows with cached structure maps.
///
/// Indices refer to `elements()`. The local actions of every element are
/// computed once at enumeration time.
#[derive(Clone, Debug)]
pub struct Fragment {
    pair: AdmissiblePair,
    structure: Structure,
    elements: Vec<GroupoidElement>,
    index: HashMap<GroupoidElement, usize>,
    right: Vec<GroupElement>,
    left: Vec<GroupElement>,
    range: Vec<GroupoidElement>,
    source: Vec<GroupoidElement>,
    inverse: Vec<GroupoidElement>,
    /// Arrows grouped by range unit, keyed by the unit value.
    by_range: HashMap<GroupoidElement, Vec<usize>>,
    by_source: HashMap<GroupoidElement, Vec<usize>>,
    units: Vec<usize>,
    closure: Closure,
}

/// Lists every `(h, k)` of the window lying in Ω and computes whether
/// the result is closed.
pub fn enumerate_fragment(pair: &AdmissiblePair, structure: Structure, window: &WindowSpec) -> Result<Fragment> {
    if window.hs.is_empty() || window.ks.is_empty() {
        return Err(Error::Domain("empty window".into()));
    }
    let candidates: Vec<(GroupElement, GroupElement)> = window
        .hs
        .iter()
        .flat_map(|h| window.ks.iter().map(move |k| (h.clone(), k.clone())))
        .collect();
    let elements: Vec<GroupoidElement> = candidates
        .into_par_iter()
        .map(|(h, k)| Ok(pair.in_omega(&h, &k)?.then(|| GroupoidElement::new(h, k))))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Fragment::from_elements(pair.clone(), structure, elements)
}

impl Fragment {
    /// Builds a fragment from arrows already known to lie in Ω (checked).
    pub fn from_elements(pair: AdmissiblePair, structure: Structure, elements: Vec<GroupoidElement>) -> Result<Fragment> {
        if elements.is_empty() {
            return Err(Error::Domain("fragment has no elements".into()));
        }
        let mut index = HashMap::with_capacity(elements.len());
        for (i, a) in elements.iter().enumerate() {
            if index.insert(a.clone(), i).is_some() {
                return Err(Error::Validation(format!("duplicate arrow {a}")));
            }
        }
        let actions: Vec<_> = elements
            .par_iter()
            .map(|a| {
                pair.actions(&a.h, &a.k)?
                    .ok_or_else(|| Error::OutOfDomain { h: a.h.to_string(), k: a.k.to_string() })
            })
            .collect::<Result<Vec<_>>>()?;
        let g = pair.ambient();
        let dg = DoubleGroupoid::new(&pair, structure);
        let mut range = Vec::with_capacity(elements.len());
        let mut source = Vec::with_capacity(elements.len());
        let mut inverse = Vec::with_capacity(elements.len());
        for (a, act) in elements.iter().zip(&actions) {
            match structure {
                Structure::G => {
                    range.push(dg.unit(act.right.clone()));
                    source.push(dg.unit(a.k.clone()));
                    inverse.push(GroupoidElement::new(g.inv(&a.h), act.right.clone()));
                }
                Structure::GHat => {
                    range.push(dg.unit(a.h.clone()));
                    source.push(dg.unit(act.left.clone()));
                    inverse.push(GroupoidElement::new(act.left.clone(), g.inv(&a.k)));
                }
            }
        }
        let mut by_range: HashMap<GroupoidElement, Vec<usize>> = HashMap::new();
        let mut by_source: HashMap<GroupoidElement, Vec<usize>> = HashMap::new();
        for i in 0..elements.len() {
            by_range.entry(range[i].clone()).or_default().push(i);
            by_source.entry(source[i].clone()).or_default().push(i);
        }
        let units = (0..elements.len()).filter(|&i| dg.is_unit(&elements[i])).collect();
        let (right, left) = actions.into_iter().map(|a| (a.right, a.left)).unzip();
        let mut frag = Fragment {
            pair,
            structure,
            elements,
            index,
            right,
            left,
            range,
            source,
            inverse,
            by_range,
            by_source,
            units,
            closure: Closure::Window,
        };
        frag.closure = frag.compute_closure();
        Ok(frag)
    }

    fn compute_closure(&self) -> Closure {
        let n = self.len();
        let structural = (0..n).all(|i| {
            self.contains(&self.range[i]) && self.contains(&self.source[i]) && self.contains(&self.inverse[i])
        });
        if !structural {
            return Closure::Window;
        }
        let products_inside = (0..n).into_par_iter().all(|a| {
            self.composable_with(a).iter().all(|&b| matches!(self.compose(a, b), Composite::Inside(_)))
        });
        if products_inside {
            Closure::Closed
        } else {
            Closure::Window
        }
    }

    pub fn pair(&self) -> &AdmissiblePair {
        &self.pair
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    pub fn groupoid(&self) -> DoubleGroupoid<'_> {
        DoubleGroupoid::new(&self.pair, self.structure)
    }

    pub fn closure(&self) -> Closure {
        self.closure
    }

    pub fn is_closed(&self) -> bool {
        self.closure == Closure::Closed
    }

    pub fn is_etale(&self) -> bool {
        self.pair.is_etale()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GroupoidElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &GroupoidElement {
        &self.elements[i]
    }

    pub fn index_of(&self, a: &GroupoidElement) -> Option<usize> {
        self.index.get(a).copied()
    }

    pub fn contains(&self, a: &GroupoidElement) -> bool {
        self.index.contains_key(a)
    }

    /// `h ▷ k` of element `i`.
    pub fn right_action(&self, i: usize) -> &GroupElement {
        &self.right[i]
    }

    /// `h ◁ k` of element `i`.
    pub fn left_action(&self, i: usize) -> &GroupElement {
        &self.left[i]
    }

    pub fn range(&self, i: usize) -> &GroupoidElement {
        &self.range[i]
    }

    pub fn source(&self, i: usize) -> &GroupoidElement {
        &self.source[i]
    }

    pub fn range_index(&self, i: usize) -> Option<usize> {
        self.index_of(&self.range[i])
    }

    pub fn source_index(&self, i: usize) -> Option<usize> {
        self.index_of(&self.source[i])
    }

    pub fn inverse(&self, i: usize) -> &GroupoidElement {
        &self.inverse[i]
    }

    pub fn inverse_index(&self, i: usize) -> Option<usize> {
        self.index_of(&self.inverse[i])
    }

    /// Indices of the unit arrows in the fragment.
    pub fn units(&self) -> &[usize] {
        &self.units
    }

    pub fn is_unit(&self, i: usize) -> bool {
        self.groupoid().is_unit(&self.elements[i])
    }

    /// `𝒢^u ∩ fragment`.
    pub fn range_fiber(&self, u: &GroupoidElement) -> &[usize] {
        self.by_range.get(u).map_or(&[], Vec::as_slice)
    }

    /// `𝒢_u ∩ fragment`.
    pub fn source_fiber(&self, u: &GroupoidElement) -> &[usize] {
        self.by_source.get(u).map_or(&[], Vec::as_slice)
    }

    /// The `b` with `s(a) = r(b)`.
    pub fn composable_with(&self, a: usize) -> &[usize] {
        self.range_fiber(&self.source[a])
    }

    /// Structural composability test straight from the defining formulas.
    pub fn composable_by_rule(&self, a: usize, b: usize) -> bool {
        match self.structure {
            Structure::G => self.elements[a].k == self.right[b],
            Structure::GHat => self.elements[b].h == self.left[a],
        }
    }

    pub fn compose(&self, a: usize, b: usize) -> Composite {
        if !self.composable_by_rule(a, b) {
            return Composite::NotComposable;
        }
        let g = self.pair.ambient();
        let (x, y) = (&self.elements[a], &self.elements[b]);
        let product = match self.structure {
            Structure::G => GroupoidElement::new(g.op(&x.h, &y.h), y.k.clone()),
            Structure::GHat => GroupoidElement::new(x.h.clone(), g.op(&x.k, &y.k)),
        };
        match self.index_of(&product) {
            Some(i) => Composite::Inside(i),
            None => Composite::Outside(product),
        }
    }

    /// Sub-fragment on the given arrows (recomputes closure).
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> Result<Fragment> {
        let elements = (0..self.len()).filter(|&i| keep(i)).map(|i| self.elements[i].clone()).collect();
        Fragment::from_elements(self.pair.clone(), self.structure, elements)
    }
}

/// Groupoid axioms over the fragment: composability agrees with
/// `s(a) = r(b)`, associativity, `r(x) = xx⁻¹`, `s(x) = x⁻¹x`, unit and
/// inverse laws. Composites that leave a window are computed at the pair
/// level where possible and skipped otherwise.
pub fn verify_groupoid_axioms(frag: &Fragment) -> VerificationReport {
    let subject = format!("groupoid axioms of {} ({}, {:?})", frag.pair().name(), frag.structure(), frag.closure());
    let dg = frag.groupoid();
    let empty = || VerificationReport::new(subject.clone());
    let compose_any = |x: &GroupoidElement, y: &GroupoidElement| dg.compose(x, y);
    let n = frag.len();
    let report = (0..n)
        .into_par_iter()
        .fold(empty, |mut r, a| {
            let x = frag.element(a);
            // composability rule vs source/range matching, against every b
            for b in 0..n {
                let by_units = frag.source(a) == frag.range(b);
                r.check_mut("composability-rule").record(frag.composable_by_rule(a, b) == by_units, || {
                    format!("{x} and {}: rule says {}, units say {by_units}", frag.element(b), !by_units)
                });
            }
            let r_unit = frag.range(a);
            let s_unit = frag.source(a);
            r.check_mut("units-are-units")
                .record(dg.is_unit(r_unit) && dg.is_unit(s_unit), || format!("r or s of {x} is not a unit"));
            match (compose_any(r_unit, x), compose_any(x, s_unit)) {
                (Ok(Some(left)), Ok(Some(right))) => r
                    .check_mut("unit-laws")
                    .record(left == *x && right == *x, || format!("r(x)x = {left}, xs(x) = {right} for x = {x}")),
                (Ok(_), Ok(_)) => r.check_mut("unit-laws").fail(|| format!("{x} not composable with its units")),
                _ => r.check_mut("unit-laws").skip(),
            }
            let inv = frag.inverse(a);
            match (compose_any(x, inv), compose_any(inv, x), dg.invert(inv)) {
                (Ok(Some(xx)), Ok(Some(ix)), Ok(back)) => {
                    r.check_mut("range-law").record(xx == *r_unit, || format!("xx⁻¹ = {xx} but r(x) = {r_unit} for x = {x}"));
                    r.check_mut("source-law").record(ix == *s_unit, || format!("x⁻¹x = {ix} but s(x) = {s_unit} for x = {x}"));
                    r.check_mut("double-inverse").record(back == *x, || format!("(x⁻¹)⁻¹ = {back} for x = {x}"));
                }
                (Ok(_), Ok(_), Ok(_)) => r.check_mut("range-law").fail(|| format!("{x} not composable with its inverse")),
                _ => {
                    r.check_mut("range-law").skip();
                    r.check_mut("source-law").skip();
                    r.check_mut("double-inverse").skip();
                }
            }
            let in_fragment = frag.contains(inv) && frag.contains(r_unit) && frag.contains(s_unit);
            if frag.is_closed() || in_fragment {
                r.check_mut("structure-closure")
                    .record(in_fragment, || format!("inverse or units of {x} leave the fragment"));
            } else {
                r.check_mut("structure-closure").skip();
            }
            for &b in frag.composable_with(a) {
                let y = frag.element(b);
                let ab = match frag.compose(a, b) {
                    Composite::Inside(i) => {
                        r.check_mut("product-closure").pass();
                        frag.element(i).clone()
                    }
                    Composite::Outside(p) => {
                        if frag.is_closed() {
                            r.check_mut("product-closure").fail(|| format!("{x}{y} = {p} leaves a closed fragment"));
                        } else {
                            r.check_mut("product-closure").skip();
                        }
                        p
                    }
                    Composite::NotComposable => {
                        r.check_mut("product-closure").fail(|| format!("{x}, {y} share a unit but do not compose"));
                        continue;
                    }
                };
                for &c in frag.composable_with(b) {
                    let z = frag.element(c);
                    let bc = match frag.compose(b, c) {
                        Composite::Inside(i) => frag.element(i).clone(),
                        Composite::Outside(p) => p,
                        Composite::NotComposable => {
                            r.check_mut("associativity").fail(|| format!("{y}, {z} share a unit but do not compose"));
                            continue;
                        }
                    };
                    match (compose_any(&ab, z), compose_any(x, &bc)) {
                        (Ok(Some(l)), Ok(Some(rr))) => r
                            .check_mut("associativity")
                            .record(l == rr, || format!("({x}{y}){z} = {l} but {x}({y}{z}) = {rr}")),
                        (Ok(_), Ok(_)) => r
                            .check_mut("associativity")
                            .fail(|| format!("({x}{y}){z} or {x}({y}{z}) undefined")),
                        _ => r.check_mut("associativity").skip(),
                    }
                }
            }
            r
        })
        .reduce(empty, VerificationReport::merge);
    let mut seeded = VerificationReport::new(subject.clone());
    for id in [
        "composability-rule",
        "units-are-units",
        "unit-laws",
        "range-law",
        "source-law",
        "double-inverse",
        "structure-closure",
        "product-closure",
        "associativity",
    ] {
        seeded.check_mut(id);
    }
    seeded.merge(report)
}
