//! Finitely supported functions on a fragment and the *-algebra
//! operations on them.

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::scalar::Scalar;
use crate::error::{Error, Result};
use crate::exact::rational::{frac, serde_str, to_f64};
use crate::exact::{GroupElement, Rational};
use crate::groupoid::{Composite, Fragment, GroupoidElement};

/// Identifies a fragment by its arrows; elements of different fragments
/// never mix.
pub fn fragment_id(frag: &Fragment) -> String {
    let mut hasher = DefaultHasher::new();
    frag.structure().hash(&mut hasher);
    frag.elements().hash(&mut hasher);
    format!("{}/{}/{:016x}", frag.pair().name(), frag.structure(), hasher.finish())
}

/// Every algebra operation needs a discrete acting group.
pub(crate) fn require_etale(frag: &Fragment) -> Result<()> {
    if frag.is_etale() {
        Ok(())
    } else {
        Err(Error::Capability(format!("{} is not étale; convolution is not a finite sum", frag.pair().name())))
    }
}

/// A function on the arrows of one fragment, keyed by arrow index.
/// Zero values are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConvolutionElement {
    fragment: String,
    values: BTreeMap<usize, Scalar>,
}

impl ConvolutionElement {
    pub fn zero(frag: &Fragment) -> Self {
        ConvolutionElement { fragment: fragment_id(frag), values: BTreeMap::new() }
    }

    /// Drops zeros; fails on indices outside the fragment.
    pub fn from_values(frag: &Fragment, values: impl IntoIterator<Item = (usize, Scalar)>) -> Result<Self> {
        let mut f = Self::zero(frag);
        for (i, v) in values {
            if i >= frag.len() {
                return Err(Error::Domain(format!("arrow index {i} outside a fragment of {} arrows", frag.len())));
            }
            f.add_at(i, v);
        }
        Ok(f)
    }

    pub fn delta(frag: &Fragment, i: usize) -> Result<Self> {
        Self::from_values(frag, [(i, Scalar::real(frac(1, 1)))])
    }

    /// Sum of the unit point masses, the identity of a closed fragment.
    pub fn unit_indicator(frag: &Fragment) -> Self {
        let one = Scalar::real(frac(1, 1));
        Self::from_values(frag, frag.units().iter().map(|&u| (u, one.clone()))).expect("unit indices are in range")
    }

    pub fn fragment_id(&self) -> &str {
        &self.fragment
    }

    pub fn get(&self, i: usize) -> Scalar {
        self.values.get(&i).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, &Scalar)> + '_ {
        self.values.iter().map(|(&i, v)| (i, v))
    }

    pub fn support_len(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.values.values().all(Scalar::is_real)
    }

    fn add_at(&mut self, i: usize, v: Scalar) {
        let sum = &self.get(i) + &v;
        if sum.is_zero() {
            self.values.remove(&i);
        } else {
            self.values.insert(i, sum);
        }
    }

    fn same_fragment(&self, o: &ConvolutionElement) -> Result<()> {
        if self.fragment == o.fragment {
            Ok(())
        } else {
            Err(Error::Domain(format!("elements of different fragments: {} and {}", self.fragment, o.fragment)))
        }
    }

    pub fn add(&self, o: &ConvolutionElement) -> Result<ConvolutionElement> {
        self.same_fragment(o)?;
        let mut out = self.clone();
        for (i, v) in o.support() {
            out.add_at(i, v.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> ConvolutionElement {
        let mut out = ConvolutionElement { fragment: self.fragment.clone(), values: BTreeMap::new() };
        for (i, v) in self.support() {
            out.add_at(i, v * c);
        }
        out
    }

    /// Pointwise product with a function of the arrows.
    pub fn multiply_pointwise(&self, m: impl Fn(usize) -> Scalar) -> ConvolutionElement {
        let mut out = ConvolutionElement { fragment: self.fragment.clone(), values: BTreeMap::new() };
        for (i, v) in self.support() {
            out.add_at(i, v * &m(i));
        }
        out
    }

    pub fn check_fragment(&self, frag: &Fragment) -> Result<()> {
        let id = fragment_id(frag);
        if self.fragment == id {
            Ok(())
        } else {
            Err(Error::Domain(format!("element belongs to {}, not {id}", self.fragment)))
        }
    }
}

/// `f ∗ g(x) = Σ_{y ∈ 𝒢_{s(x)}} f(xy⁻¹) g(y)`, evaluated as the sum of
/// `f(a)g(b)` over composable pairs of the supports with `ab = x`.
pub fn convolve(frag: &Fragment, f: &ConvolutionElement, g: &ConvolutionElement) -> Result<ConvolutionElement> {
    require_etale(frag)?;
    f.check_fragment(frag)?;
    g.check_fragment(frag)?;
    let mut out = ConvolutionElement::zero(frag);
    for (a, fa) in f.support() {
        for &b in frag.composable_with(a) {
            let gb = g.get(b);
            if gb.is_zero() {
                continue;
            }
            match frag.compose(a, b) {
                Composite::Inside(ab) => out.add_at(ab, fa * &gb),
                Composite::Outside(p) => {
                    return Err(Error::Coverage(format!(
                        "{} · {} = {p} leaves the fragment",
                        frag.element(a),
                        frag.element(b)
                    )))
                }
                Composite::NotComposable => {
                    return Err(Error::Validation(format!(
                        "{} and {} share a unit but fail the composability rule",
                        frag.element(a),
                        frag.element(b)
                    )))
                }
            }
        }
    }
    Ok(out)
}

/// `f*(x) = conj(f(x⁻¹))`.
pub fn involution(frag: &Fragment, f: &ConvolutionElement) -> Result<ConvolutionElement> {
    f.check_fragment(frag)?;
    let mut out = ConvolutionElement::zero(frag);
    for (i, v) in f.support() {
        let j = frag
            .inverse_index(i)
            .ok_or_else(|| Error::Coverage(format!("inverse of {} leaves the fragment", frag.element(i))))?;
        out.add_at(j, v.conj());
    }
    Ok(out)
}

/// The I-norm. `exact` is present when every `|f(x)|` is rational.
#[derive(Clone, PartialEq, Debug)]
pub struct INorm {
    pub exact: Option<Rational>,
    pub value: f64,
}

/// `max(sup_u Σ_{𝒢_u} |f|, sup_u Σ_{𝒢^u} |f|)`.
pub fn i_norm(frag: &Fragment, f: &ConvolutionElement) -> Result<INorm> {
    f.check_fragment(frag)?;
    let mut by_source: BTreeMap<String, (Option<Rational>, f64)> = BTreeMap::new();
    let mut by_range: BTreeMap<String, (Option<Rational>, f64)> = BTreeMap::new();
    for (i, v) in f.support() {
        let abs = v.abs_exact();
        let absf = v.abs_f64();
        for (map, u) in [(&mut by_source, frag.source(i)), (&mut by_range, frag.range(i))] {
            let slot = map.entry(u.to_string()).or_insert((Some(Rational::zero()), 0.0));
            slot.0 = match (slot.0.take(), &abs) {
                (Some(s), Some(a)) => Some(s + a),
                _ => None,
            };
            slot.1 += absf;
        }
    }
    let sums: Vec<&(Option<Rational>, f64)> = by_source.values().chain(by_range.values()).collect();
    let exact = sums
        .iter()
        .try_fold(Rational::zero(), |m, (s, _)| s.as_ref().map(|s| if *s > m { s.clone() } else { m }));
    let value = match &exact {
        Some(q) => to_f64(q),
        None => sums.iter().map(|s| s.1).fold(0.0, f64::max),
    };
    Ok(INorm { exact, value })
}

/// Random element with about `density` of the arrows in its support and
/// small Gaussian-rational values (purely real when `complex` is false).
pub fn random_element(frag: &Fragment, rng: &mut ChaCha8Rng, density: f64, complex: bool) -> ConvolutionElement {
    let pick = |rng: &mut ChaCha8Rng| frac(rng.gen_range(-6..=6), rng.gen_range(1..=4));
    let mut values = Vec::new();
    for i in 0..frag.len() {
        if rng.gen_bool(density) {
            let re = pick(rng);
            let im = if complex { pick(rng) } else { Rational::zero() };
            values.push((i, Scalar::new(re, im)));
        }
    }
    ConvolutionElement::from_values(frag, values).expect("indices in range")
}

/// One entry of the JSON form.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ElementEntry {
    pub h: GroupElement,
    pub k: GroupElement,
    #[serde(with = "serde_str")]
    pub re: Rational,
    #[serde(with = "serde_str")]
    pub im: Rational,
}

impl ConvolutionElement {
    pub fn to_entries(&self, frag: &Fragment) -> Vec<ElementEntry> {
        self.support()
            .map(|(i, v)| {
                let a = frag.element(i);
                ElementEntry { h: a.h.clone(), k: a.k.clone(), re: v.re.clone(), im: v.im.clone() }
            })
            .collect()
    }

    /// Arrows missing from the fragment are an error; repeated arrows add.
    pub fn from_entries(frag: &Fragment, entries: &[ElementEntry]) -> Result<Self> {
        let values = entries
            .iter()
            .map(|e| {
                let a = GroupoidElement::new(e.h.clone(), e.k.clone());
                let i = frag.index_of(&a).ok_or_else(|| Error::Domain(format!("{a} is not an arrow of the fragment")))?;
                Ok((i, Scalar::new(e.re.clone(), e.im.clone())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_values(frag, values)
    }
}
