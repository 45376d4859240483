//! The group algebra of the isotropy at the identity unit and the
//! restriction map `ψ(f) = f|_{𝒢(e)}`.
//!
//! Under `𝒢` the isotropy at `e` is `{(h, e)}`, a copy of `H`; under `𝒢̂` it
//! is `{(e, k)}`, a copy of `K`.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::element::{convolve, involution, random_element, ConvolutionElement};
use super::measure::identity_unit;
use super::norm::{operator_norm, reduced_norm, require_closed, NormValue};
use super::scalar::{Scalar, ScalarMatrix};
use crate::error::{Error, Result};
use crate::exact::rational::int;
use crate::exact::{AmbientGroup, GroupElement, Matrix};
use crate::groupoid::{Fragment, Structure};
use crate::report::VerificationReport;

/// `ℂΓ` for a finite subgroup `Γ` of an ambient group.
#[derive(Clone, Debug)]
pub struct GroupAlgebra {
    ambient: AmbientGroup,
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
}

/// An element of a [`GroupAlgebra`], keyed by group-element index.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GroupAlgebraElement {
    values: BTreeMap<usize, Scalar>,
}

impl GroupAlgebraElement {
    pub fn get(&self, i: usize) -> Scalar {
        self.values.get(&i).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, &Scalar)> + '_ {
        self.values.iter().map(|(&i, v)| (i, v))
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    fn add_at(&mut self, i: usize, v: Scalar) {
        let sum = &self.get(i) + &v;
        if sum.is_zero() {
            self.values.remove(&i);
        } else {
            self.values.insert(i, sum);
        }
    }
}

impl GroupAlgebra {
    /// Fails unless `elements` is closed under products and inverses.
    pub fn new(ambient: AmbientGroup, elements: Vec<GroupElement>) -> Result<Self> {
        let index: HashMap<_, _> = elements.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        let alg = GroupAlgebra { ambient, elements, index };
        for a in &alg.elements {
            alg.locate(&alg.ambient.inv(a))?;
            for b in &alg.elements {
                alg.locate(&alg.ambient.op(a, b))?;
            }
        }
        Ok(alg)
    }

    fn locate(&self, g: &GroupElement) -> Result<usize> {
        self.index.get(g).copied().ok_or_else(|| Error::Coverage(format!("{g} is outside the finite subgroup")))
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, values: impl IntoIterator<Item = (usize, Scalar)>) -> GroupAlgebraElement {
        let mut a = GroupAlgebraElement::default();
        for (i, v) in values {
            assert!(i < self.dim(), "group element index out of range");
            a.add_at(i, v);
        }
        a
    }

    pub fn delta(&self, i: usize) -> GroupAlgebraElement {
        self.element([(i, Scalar::real(int(1)))])
    }

    /// `(a ∗ b)(g) = Σ_{xy = g} a(x) b(y)`.
    pub fn convolve(&self, a: &GroupAlgebraElement, b: &GroupAlgebraElement) -> GroupAlgebraElement {
        let mut out = GroupAlgebraElement::default();
        for (x, ax) in a.support() {
            for (y, by) in b.support() {
                let xy = self.index[&self.ambient.op(&self.elements[x], &self.elements[y])];
                out.add_at(xy, ax * by);
            }
        }
        out
    }

    /// `a*(g) = conj(a(g⁻¹))`.
    pub fn involution(&self, a: &GroupAlgebraElement) -> GroupAlgebraElement {
        let mut out = GroupAlgebraElement::default();
        for (x, v) in a.support() {
            out.add_at(self.index[&self.ambient.inv(&self.elements[x])], v.conj());
        }
        out
    }

    pub fn l1_norm(&self, a: &GroupAlgebraElement) -> f64 {
        a.support().map(|(_, v)| v.abs_f64()).sum()
    }

    /// Left regular representation: entry `[g, y] = a(g y⁻¹)`.
    pub fn regular_matrix(&self, a: &GroupAlgebraElement) -> ScalarMatrix {
        let n = self.dim();
        let mut m = ScalarMatrix::zeros(n, n);
        for (y, gy) in self.elements.iter().enumerate() {
            let yinv = self.ambient.inv(gy);
            for (g, gg) in self.elements.iter().enumerate() {
                m.set(g, y, a.get(self.index[&self.ambient.op(gg, &yinv)]));
            }
        }
        m
    }

    pub fn reduced_norm(&self, a: &GroupAlgebraElement) -> NormValue {
        operator_norm(&self.regular_matrix(a).to_complex())
    }
}

/// The isotropy group at `(e, e)` and the arrow index of each of its
/// elements, in the order used by the returned algebra.
pub fn isotropy_algebra(frag: &Fragment) -> Result<(GroupAlgebra, Vec<usize>)> {
    let e = identity_unit(frag);
    if !frag.contains(&e) {
        return Err(Error::Coverage(format!("identity unit {e} is not in the fragment")));
    }
    let arrows = frag.isotropy(&e)?;
    let labels = arrows
        .iter()
        .map(|&i| match frag.structure() {
            Structure::G => frag.element(i).h.clone(),
            Structure::GHat => frag.element(i).k.clone(),
        })
        .collect();
    Ok((GroupAlgebra::new(frag.pair().ambient().clone(), labels)?, arrows))
}

/// `ψ(f) = f|_{𝒢(e)}`.
pub fn restrict_to_h(frag: &Fragment, f: &ConvolutionElement) -> Result<(GroupAlgebra, GroupAlgebraElement)> {
    f.check_fragment(frag)?;
    let (alg, arrows) = isotropy_algebra(frag)?;
    let image = alg.element(arrows.iter().enumerate().map(|(j, &i)| (j, f.get(i))));
    Ok((alg, image))
}

/// `ψ` is a *-homomorphism onto `ℂ𝒢(e)`, its kernel is spanned by the
/// point masses off `𝒢(e)`, rank plus nullity is the fragment size, and
/// `‖ψ(f)‖_r ≤ ‖f‖_r`.
pub fn exactness_check(frag: &Fragment, samples: usize, seed: u64) -> Result<VerificationReport> {
    require_closed(frag)?;
    let mut r = VerificationReport::new(format!("restriction to the identity isotropy, {} ({})", frag.pair().name(), frag.structure()));
    let e = identity_unit(frag);
    let inv = frag.is_invariant(std::slice::from_ref(&e))?;
    r.check_mut("identity-invariant").record(inv.invariant(), || inv.witness.clone().unwrap_or_default());
    let (alg, arrows) = isotropy_algebra(frag)?;
    let psi = |f: &ConvolutionElement| alg.element(arrows.iter().enumerate().map(|(j, &i)| (j, f.get(i))));

    // ψ as an exact 0/1 matrix, |𝒢(e)| × |fragment|
    let n = frag.len();
    let mut m = Matrix::from_ints(alg.dim(), n, &vec![0; alg.dim() * n]);
    for (j, &i) in arrows.iter().enumerate() {
        m.set(j, i, int(1));
    }
    let rank = m.rank();
    let nullity = n - rank;
    let off = n - arrows.len();
    r.check_mut("surjective").record(rank == alg.dim(), || format!("rank {rank}, group algebra dimension {}", alg.dim()));
    r.check_mut("kernel-dimension").record(nullity == off, || format!("nullity {nullity}, {off} arrows off the isotropy"));
    r.check_mut("rank-plus-nullity").record(rank + nullity == n, || format!("{rank} + {nullity} ≠ {n}"));
    for i in 0..n {
        let image = psi(&ConvolutionElement::delta(frag, i)?);
        let on = arrows.contains(&i);
        r.check_mut("kernel-is-off-isotropy")
            .record(image.is_zero() != on, || format!("ψ(δ_{}) = {image:?}", frag.element(i)));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let f = random_element(frag, &mut rng, 0.5, true);
        let g = random_element(frag, &mut rng, 0.5, true);
        let fg = convolve(frag, &f, &g)?;
        let (pf, pg) = (psi(&f), psi(&g));
        r.check_mut("multiplicative").record(psi(&fg) == alg.convolve(&pf, &pg), || format!("ψ(f∗g) ≠ ψ(f)∗ψ(g) for f = {f:?}"));
        r.check_mut("star-preserving")
            .record(psi(&involution(frag, &f)?) == alg.involution(&pf), || format!("ψ(f*) ≠ ψ(f)* for f = {f:?}"));
        let (small, big) = (alg.reduced_norm(&pf), reduced_norm(frag, &f)?);
        let slack = 1e-9 + small.certified_radius + big.certified_radius;
        r.check_mut("norm-decreasing").record(small.value <= big.value + slack, || format!("‖ψ(f)‖ = {} > ‖f‖ = {}", small.value, big.value));
    }
    Ok(r)
}
