//! Finite unitary representations of a fragment and their integrated
//! forms.

use std::collections::{HashMap, HashSet};

use nalgebra::{Complex, DMatrix};
use num_traits::{One, Zero};

use super::element::ConvolutionElement;
use super::measure::{modular_function, UnitMeasure};
use super::norm::{operator_norm, require_closed, NormValue};
use super::scalar::{Scalar, ScalarMatrix};
use crate::error::{Error, Result};
use crate::exact::rational::to_f64;
use crate::groupoid::{Composite, Fragment, GroupoidElement};
use crate::report::VerificationReport;

/// A Hilbert bundle over the units with a unitary `π(x) : ℋ(s(x)) → ℋ(r(x))`
/// for every arrow.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct FiniteRepresentation {
    fibers: HashMap<GroupoidElement, usize>,
    maps: HashMap<GroupoidElement, ScalarMatrix>,
}

impl FiniteRepresentation {
    /// The representation of the empty groupoid.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn fiber_dim(&self, u: &GroupoidElement) -> Option<usize> {
        self.fibers.get(u).copied()
    }

    pub fn map(&self, x: &GroupoidElement) -> Option<&ScalarMatrix> {
        self.maps.get(x)
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    fn map_or_err(&self, x: &GroupoidElement) -> Result<&ScalarMatrix> {
        self.maps.get(x).ok_or_else(|| Error::Representation(format!("no operator for {x}")))
    }

    /// The arrows of `sub` only, with their fibers.
    pub fn restrict(&self, sub: &Fragment) -> Result<FiniteRepresentation> {
        let mut out = FiniteRepresentation::empty();
        for (i, x) in sub.elements().iter().enumerate() {
            out.maps.insert(x.clone(), self.map_or_err(x)?.clone());
            for u in [sub.range(i), sub.source(i)] {
                let d = self.fiber_dim(u).ok_or_else(|| Error::Representation(format!("no fiber at {u}")))?;
                out.fibers.insert(u.clone(), d);
            }
        }
        Ok(out)
    }
}

/// `π(x) = 1` on one-dimensional fibers.
pub fn trivial_rep(frag: &Fragment) -> FiniteRepresentation {
    let mut rep = FiniteRepresentation::empty();
    for (i, x) in frag.elements().iter().enumerate() {
        rep.fibers.insert(frag.range(i).clone(), 1);
        rep.fibers.insert(frag.source(i).clone(), 1);
        rep.maps.insert(x.clone(), ScalarMatrix::identity(1));
    }
    rep
}

/// `λ(x)ξ(y) = ξ(x⁻¹y)` on `ℓ²(𝒢^u)`: the permutation sending `δ_z` to
/// `δ_{xz}`. Bases follow [`Fragment::range_fiber`].
pub fn regular_rep(frag: &Fragment) -> Result<FiniteRepresentation> {
    require_closed(frag)?;
    let mut rep = FiniteRepresentation::empty();
    for (i, x) in frag.elements().iter().enumerate() {
        let (target, domain) = (frag.range_fiber(frag.range(i)), frag.range_fiber(frag.source(i)));
        let mut m = ScalarMatrix::zeros(target.len(), domain.len());
        for (j, &z) in domain.iter().enumerate() {
            let Composite::Inside(xz) = frag.compose(i, z) else {
                return Err(Error::Coverage(format!("{x} · {} is not in the fragment", frag.element(z))));
            };
            let row = target
                .iter()
                .position(|&t| t == xz)
                .ok_or_else(|| Error::Validation(format!("{} not in the range fiber of {x}", frag.element(xz))))?;
            m.set(row, j, Scalar::one());
        }
        rep.fibers.insert(frag.range(i).clone(), target.len());
        rep.fibers.insert(frag.source(i).clone(), domain.len());
        rep.maps.insert(x.clone(), m);
    }
    Ok(rep)
}

/// Glues `π` on `𝒢(X)` and `ρ` on `𝒢(X^c)` into one representation of the
/// fragment. `X` must be invariant so that every arrow lies in one of the
/// two reductions.
pub fn lift_representation(
    frag: &Fragment,
    x_units: &[GroupoidElement],
    pi: &FiniteRepresentation,
    rho: &FiniteRepresentation,
) -> Result<FiniteRepresentation> {
    let inv = frag.is_invariant(x_units)?;
    if !inv.invariant() {
        return Err(Error::NotInvariant(inv.witness.unwrap_or_else(|| "product-set criterion fails".into())));
    }
    let inside: HashSet<&GroupoidElement> = x_units.iter().collect();
    let mut out = FiniteRepresentation::empty();
    for (i, x) in frag.elements().iter().enumerate() {
        let part = if inside.contains(frag.source(i)) { pi } else { rho };
        out.maps.insert(x.clone(), part.map_or_err(x)?.clone());
        for u in [frag.range(i), frag.source(i)] {
            let d = part.fiber_dim(u).ok_or_else(|| Error::Representation(format!("no fiber at {u}")))?;
            out.fibers.insert(u.clone(), d);
        }
    }
    Ok(out)
}

/// Shapes, unitarity, `π(x⁻¹) = π(x)*` and `π(xy) = π(x)π(y)`, exactly.
pub fn verify_representation(frag: &Fragment, rep: &FiniteRepresentation) -> VerificationReport {
    let mut r = VerificationReport::new(format!("representation of {} ({})", frag.pair().name(), frag.structure()));
    for (i, x) in frag.elements().iter().enumerate() {
        let Some(m) = rep.map(x) else {
            r.check_mut("defined").fail(|| format!("no operator for {x}"));
            continue;
        };
        let shape = (rep.fiber_dim(frag.range(i)), rep.fiber_dim(frag.source(i)));
        r.check_mut("shape")
            .record(shape == (Some(m.rows()), Some(m.cols())), || format!("π({x}) is {}×{}, fibers {shape:?}", m.rows(), m.cols()));
        r.check_mut("unitary").record(m.is_unitary(), || format!("π({x}) = {m}"));
        match rep.map(frag.inverse(i)) {
            Some(mi) => r.check_mut("inverse-is-adjoint").record(*mi == m.adjoint(), || format!("π({x}⁻¹) ≠ π({x})*")),
            None => r.check_mut("inverse-is-adjoint").skip(),
        }
        for &j in frag.composable_with(i) {
            let y = frag.element(j);
            let Composite::Inside(xy) = frag.compose(i, j) else {
                r.check_mut("multiplicative").skip();
                continue;
            };
            let lhs = rep.map(frag.element(xy));
            let rhs = rep.map(y).and_then(|my| m.product(my));
            r.check_mut("multiplicative")
                .record(lhs.is_some() && lhs == rhs.as_ref(), || format!("π({x} · {y}) ≠ π({x})π({y})"));
        }
    }
    r
}

/// `π_μ(f)` on `⊕_u ℋ(u)` with inner product `Σ_u μ(u)⟨ξ(u), η(u)⟩`:
/// block `(r(x), s(x))` collects `f(x) Δ(x)^{-1/2} π(x)`.
#[derive(Clone, Debug)]
pub struct IntegratedForm {
    /// The operator in the weighted coordinates.
    pub matrix: DMatrix<Complex<f64>>,
    /// `μ(u)` repeated over the coordinates of `ℋ(u)`.
    pub weights: Vec<f64>,
}

impl IntegratedForm {
    /// The same operator in an orthonormal basis: `W^{1/2} A W^{-1/2}`.
    pub fn orthonormal(&self) -> DMatrix<Complex<f64>> {
        let w = &self.weights;
        DMatrix::from_fn(self.matrix.nrows(), self.matrix.ncols(), |i, j| self.matrix[(i, j)] * (w[i] / w[j]).sqrt())
    }

    /// Adjoint for the weighted inner product: `W^{-1} A* W`.
    pub fn adjoint(&self) -> IntegratedForm {
        let w = &self.weights;
        let a = self.matrix.adjoint();
        let matrix = DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * (w[j] / w[i]));
        IntegratedForm { matrix, weights: w.clone() }
    }

    pub fn compose(&self, o: &IntegratedForm) -> IntegratedForm {
        IntegratedForm { matrix: &self.matrix * &o.matrix, weights: self.weights.clone() }
    }

    pub fn norm(&self) -> NormValue {
        operator_norm(&self.orthonormal())
    }

    /// Largest entrywise difference.
    pub fn distance(&self, o: &IntegratedForm) -> f64 {
        (&self.matrix - &o.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub fn integrated_form(
    frag: &Fragment,
    rep: &FiniteRepresentation,
    mu: &UnitMeasure,
    f: &ConvolutionElement,
) -> Result<IntegratedForm> {
    f.check_fragment(frag)?;
    let delta = modular_function(frag, mu)?;
    let mut offsets = HashMap::new();
    let mut weights = Vec::new();
    for (u, w) in mu.weights() {
        let d = rep.fiber_dim(u).ok_or_else(|| Error::Representation(format!("no fiber at unit {u}")))?;
        offsets.insert(u.clone(), weights.len());
        weights.extend(std::iter::repeat_n(to_f64(w), d));
    }
    let n = weights.len();
    let mut matrix = DMatrix::from_element(n, n, Complex::zero());
    for (i, v) in f.support() {
        let x = frag.element(i);
        let m = rep.map_or_err(x)?;
        let (ro, so) = (offsets[frag.range(i)], offsets[frag.source(i)]);
        if rep.fiber_dim(frag.range(i)) != Some(m.rows()) || rep.fiber_dim(frag.source(i)) != Some(m.cols()) {
            return Err(Error::Representation(format!("π({x}) has the wrong shape for its fibers")));
        }
        let c = v.to_complex() / to_f64(&delta[i]).sqrt();
        for a in 0..m.rows() {
            for b in 0..m.cols() {
                let e = m.get(a, b);
                if !e.is_zero() {
                    matrix[(ro + a, so + b)] += c * e.to_complex();
                }
            }
        }
    }
    Ok(IntegratedForm { matrix, weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::element::{convolve, involution, random_element};
    use crate::algebra::measure::identity_unit;
    use crate::algebra::norm::reduced_norm;
    use crate::exact::rational::int;
    use crate::groupoid::{enumerate_fragment, Structure, WindowSpec};
    use crate::models::{semidirect_cyclic, unital_ring, CyclicAction};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z5(s: Structure) -> Fragment {
        let inst = unital_ring(5, 1).unwrap();
        enumerate_fragment(&inst.pair, s, &WindowSpec::of_pair(&inst.pair)).unwrap()
    }

    fn skewed(frag: &Fragment) -> UnitMeasure {
        let w = frag.units().iter().enumerate().map(|(i, &u)| (frag.element(u).clone(), int(i as i64 + 1)));
        UnitMeasure::from_weights(frag, w).unwrap()
    }

    #[test]
    fn regular_and_trivial_are_representations() {
        for s in [Structure::G, Structure::GHat] {
            let frag = z5(s);
            for rep in [regular_rep(&frag).unwrap(), trivial_rep(&frag)] {
                let r = verify_representation(&frag, &rep);
                assert!(r.passed(), "{r}");
                assert!(r.check("multiplicative").unwrap().tested > 0);
            }
        }
    }

    #[test]
    fn integrated_form_is_a_star_homomorphism() {
        let frag = z5(Structure::G);
        let lambda = regular_rep(&frag).unwrap();
        let mu = skewed(&frag);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..40 {
            let f = random_element(&frag, &mut rng, 0.5, true);
            let g = random_element(&frag, &mut rng, 0.5, true);
            let (pf, pg) = (integrated_form(&frag, &lambda, &mu, &f).unwrap(), integrated_form(&frag, &lambda, &mu, &g).unwrap());
            let pfg = integrated_form(&frag, &lambda, &mu, &convolve(&frag, &f, &g).unwrap()).unwrap();
            assert!(pfg.distance(&pf.compose(&pg)) < 1e-9);
            let pstar = integrated_form(&frag, &lambda, &mu, &involution(&frag, &f).unwrap()).unwrap();
            assert!(pstar.distance(&pf.adjoint()) < 1e-9);
            // two routes to the reduced norm
            let (a, b) = (pf.norm().value, reduced_norm(&frag, &f).unwrap().value);
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn unit_indicator_integrates_to_identity() {
        let frag = z5(Structure::GHat);
        let lambda = regular_rep(&frag).unwrap();
        let p = integrated_form(&frag, &lambda, &skewed(&frag), &ConvolutionElement::unit_indicator(&frag)).unwrap();
        let n = p.matrix.nrows();
        assert!((&p.matrix - DMatrix::<Complex<f64>>::identity(n, n)).norm() < 1e-12);
    }

    #[test]
    fn lifting_over_the_identity() {
        let frag = z5(Structure::G);
        let e = identity_unit(&frag);
        let x = vec![e.clone()];
        let inner = frag.restrict(|i| *frag.source(i) == e).unwrap();
        let outer = frag.restrict(|i| *frag.source(i) != e).unwrap();
        let (pi, rho) = (trivial_rep(&inner), regular_rep(&outer).unwrap());
        let sigma = lift_representation(&frag, &x, &pi, &rho).unwrap();
        assert!(verify_representation(&frag, &sigma).passed());
        assert_eq!(sigma.restrict(&inner).unwrap(), pi);
        assert_eq!(sigma.restrict(&outer).unwrap(), rho);
        // the two extreme choices of X
        let all: Vec<GroupoidElement> = frag.unit_space();
        let lambda = regular_rep(&frag).unwrap();
        assert_eq!(lift_representation(&frag, &all, &lambda, &FiniteRepresentation::empty()).unwrap(), lambda);
        assert_eq!(lift_representation(&frag, &[], &FiniteRepresentation::empty(), &lambda).unwrap(), lambda);
    }

    #[test]
    fn lifting_over_a_non_invariant_set_fails() {
        let inst = semidirect_cyclic(2, 3, CyclicAction::Inversion).unwrap();
        let frag = enumerate_fragment(&inst.pair, Structure::G, &WindowSpec::of_pair(&inst.pair)).unwrap();
        let moving = (0..frag.len()).find(|&i| frag.range(i) != frag.source(i)).unwrap();
        let x = vec![frag.source(moving).clone()];
        let t = trivial_rep(&frag);
        assert!(matches!(lift_representation(&frag, &x, &t, &t), Err(Error::NotInvariant(_))));
    }
}
