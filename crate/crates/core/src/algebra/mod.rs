//! The convolution *-algebra of an étale fragment.
//!
//! Everything is exact over Gaussian rationals except operator norms,
//! which go through [`norm::operator_norm`] with a certified radius.

mod element;
mod ideal;
mod measure;
mod norm;
mod representation;
mod restriction;
mod scalar;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use element::{convolve, fragment_id, i_norm, involution, random_element, ConvolutionElement, ElementEntry, INorm};
pub use ideal::{ideal_membership, verify_ideal_laws, Certificate, IdealSpec, LpSum, Membership};
pub use measure::{modular_function, verify_measure, UnitMeasure};
pub use norm::{operator_norm, reduced_norm, regular_matrix, NormValue};
pub use representation::{
    integrated_form, lift_representation, regular_rep, trivial_rep, verify_representation, FiniteRepresentation, IntegratedForm,
};
pub use restriction::{exactness_check, isotropy_algebra, restrict_to_h, GroupAlgebra, GroupAlgebraElement};
pub use scalar::{Scalar, ScalarMatrix};

use crate::error::Result;
use crate::exact::rational::int;
use crate::groupoid::{Fragment, GroupoidElement};
use crate::report::VerificationReport;

/// Relative tolerance on the float side of every norm comparison.
pub const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug)]
pub struct AlgebraPlan {
    pub seed: u64,
    /// Random triples `(f, g, h)`.
    pub samples: usize,
    /// Expected fraction of arrows in a random support.
    pub density: f64,
}

impl Default for AlgebraPlan {
    fn default() -> Self {
        AlgebraPlan { seed: 0, samples: 1000, density: 0.4 }
    }
}

/// A full-support measure with distinct weights `1, 2, 3, …`, so that
/// the modular function is not identically one.
pub fn skewed_measure(frag: &Fragment) -> UnitMeasure {
    let w = frag.units().iter().enumerate().map(|(i, &u)| (frag.element(u).clone(), int(i as i64 + 1)));
    UnitMeasure::from_weights(frag, w).expect("units of the fragment")
}

/// Trivial on `𝒢(e)` and regular on the rest, glued over the invariant
/// unit `e`. Falls back to the regular representation when `𝒢(e)` is
/// the whole fragment.
pub fn lifted_test_rep(frag: &Fragment) -> Result<FiniteRepresentation> {
    let e = measure::identity_unit(frag);
    let inner = frag.restrict(|i| *frag.source(i) == e)?;
    if inner.len() == frag.len() {
        return Ok(trivial_rep(frag));
    }
    let outer = frag.restrict(|i| *frag.source(i) != e)?;
    lift_representation(frag, &[e], &trivial_rep(&inner), &regular_rep(&outer)?)
}

fn within(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= NORM_TOLERANCE * scale.max(1.0)
}

/// Every algebra law on random elements of a closed étale fragment.
pub fn verify_algebra(frag: &Fragment, plan: &AlgebraPlan) -> Result<VerificationReport> {
    norm::require_closed(frag)?;
    let lambda = regular_rep(frag)?;
    let sigma = lifted_test_rep(frag)?;
    let trivial = trivial_rep(frag);
    let mu = skewed_measure(frag);
    let unit = ConvolutionElement::unit_indicator(frag);

    let mut head = VerificationReport::new(format!("convolution algebra of {} ({}), seed {}", frag.pair().name(), frag.structure(), plan.seed));
    for (name, rep) in [("regular", &lambda), ("lifted", &sigma), ("trivial", &trivial)] {
        head = head.absorb_prefixed(&format!("rep-{name}"), verify_representation(frag, rep));
    }
    let one = reduced_norm(frag, &unit)?;
    head.check_mut("unit-has-norm-one").record(within(one.value, 1.0, 1.0), || format!("‖1‖_r = {}", one.value));

    let per_sample = (0..plan.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
            rng.set_stream(i as u64 + 1);
            sample_laws(frag, plan.density, &mut rng, &lambda, &sigma, &trivial, &mu)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut r = per_sample.into_iter().fold(head, VerificationReport::merge);

    let normalized = UnitMeasure::normalized_at_identity(frag)?;
    r = r
        .absorb_prefixed("measure-normalized", verify_measure(frag, &normalized, true)?)
        .absorb_prefixed("measure-skewed", verify_measure(frag, &mu, false)?)
        .absorb_prefixed("restriction", exactness_check(frag, plan.samples.min(200), plan.seed)?);
    for spec in [IdealSpec::AllFunctions, IdealSpec::FinitelySupported, IdealSpec::PSummable(2)] {
        r = r.absorb_prefixed("ideal", verify_ideal_laws(frag, spec, &normalized, plan.samples.min(50), plan.seed)?);
    }
    Ok(r)
}

fn sample_laws(
    frag: &Fragment,
    density: f64,
    rng: &mut ChaCha8Rng,
    lambda: &FiniteRepresentation,
    sigma: &FiniteRepresentation,
    trivial: &FiniteRepresentation,
    mu: &UnitMeasure,
) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("");
    let f = random_element(frag, rng, density, true);
    let g = random_element(frag, rng, density, true);
    let h = random_element(frag, rng, density, true);
    let show = |x: &ConvolutionElement| format!("{:?}", x.to_entries(frag));

    let fg = convolve(frag, &f, &g)?;
    let assoc = convolve(frag, &fg, &h)? == convolve(frag, &f, &convolve(frag, &g, &h)?)?;
    r.check_mut("associative").record(assoc, || format!("f = {}, g = {}, h = {}", show(&f), show(&g), show(&h)));
    let fs = involution(frag, &f)?;
    r.check_mut("involutive").record(involution(frag, &fs)? == f, || show(&f));
    let anti = involution(frag, &fg)? == convolve(frag, &involution(frag, &g)?, &fs)?;
    r.check_mut("anti-multiplicative").record(anti, || format!("f = {}, g = {}", show(&f), show(&g)));

    let (nf, ng, nfg) = (i_norm(frag, &f)?, i_norm(frag, &g)?, i_norm(frag, &fg)?);
    let sub = match (&nf.exact, &ng.exact, &nfg.exact) {
        (Some(a), Some(b), Some(c)) => *c <= a * b,
        _ => nfg.value <= nf.value * ng.value * (1.0 + NORM_TOLERANCE),
    };
    r.check_mut("i-norm-submultiplicative").record(sub, || format!("‖fg‖_I = {} > {} · {}", nfg.value, nf.value, ng.value));
    let nfs = i_norm(frag, &fs)?;
    let star_ok = match (&nfs.exact, &nf.exact) {
        (Some(a), Some(b)) => a == b,
        (None, None) => within(nfs.value, nf.value, nf.value),
        _ => false,
    };
    r.check_mut("i-norm-star-invariant").record(star_ok, || format!("‖f*‖_I = {:?}, ‖f‖_I = {:?}", nfs, nf));

    let red = reduced_norm(frag, &f)?;
    let slack = NORM_TOLERANCE * nf.value.max(1.0) + red.certified_radius;
    r.check_mut("reduced-below-i-norm").record(red.value <= nf.value + slack, || format!("‖f‖_r = {} > ‖f‖_I = {}", red.value, nf.value));
    let sq = reduced_norm(frag, &convolve(frag, &fs, &f)?)?;
    let target = red.value * red.value;
    r.check_mut("c-star-identity").record((sq.value - target).abs() <= NORM_TOLERANCE * target.max(f64::MIN_POSITIVE) || sq.value == target, || {
        format!("‖f*f‖_r = {}, ‖f‖_r² = {target}", sq.value)
    });

    let (pf, pg) = (integrated_form(frag, lambda, mu, &f)?, integrated_form(frag, lambda, mu, &g)?);
    let scale = pf.matrix.norm() * pg.matrix.norm();
    let pfg = integrated_form(frag, lambda, mu, &fg)?;
    r.check_mut("integrated-multiplicative")
        .record(pfg.distance(&pf.compose(&pg)) <= NORM_TOLERANCE * scale.max(1.0), || format!("f = {}, g = {}", show(&f), show(&g)));
    let pfs = integrated_form(frag, lambda, mu, &fs)?;
    r.check_mut("integrated-star").record(pfs.distance(&pf.adjoint()) <= NORM_TOLERANCE * pf.matrix.norm().max(1.0), || show(&f));
    let via_lambda = pf.norm();
    r.check_mut("integrated-regular-equals-reduced")
        .record(within(via_lambda.value, red.value, red.value), || format!("‖λ_μ(f)‖ = {}, ‖f‖_r = {}", via_lambda.value, red.value));
    for (name, rep) in [("lifted", sigma), ("trivial", trivial)] {
        let n = integrated_form(frag, rep, mu, &f)?.norm();
        r.check_mut(&format!("weak-containment-{name}"))
            .record(n.value <= red.value + NORM_TOLERANCE * red.value.max(1.0) + n.certified_radius + red.certified_radius, || {
                format!("‖π_μ(f)‖ = {} > ‖f‖_r = {}", n.value, red.value)
            });
    }
    Ok(r)
}

/// Units of a fragment as arrows, in fragment order.
pub fn unit_arrows(frag: &Fragment) -> Vec<GroupoidElement> {
    frag.units().iter().map(|&u| frag.element(u).clone()).collect()
}
