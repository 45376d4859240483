//! Membership in the ideal of functions whose restriction to `𝒢(e)` lies
//! in a given ideal `D` of bounded functions on `H` and whose remainder is
//! square-summable against `ν_μ`.
//!
//! Finitely supported inputs make every clause a finite sum, so the
//! predicate is decided outright and the sums are returned as a
//! certificate.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::element::{random_element, ConvolutionElement};
use super::measure::UnitMeasure;
use super::restriction::isotropy_algebra;
use super::scalar::Scalar;
use crate::error::{Error, Result};
use crate::exact::rational::{frac, render, to_f64};
use crate::exact::Rational;
use crate::groupoid::Fragment;
use crate::report::VerificationReport;

/// The ideal `D` of `ℓ∞(H)`; each choice contains the finitely supported
/// functions.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdealSpec {
    AllFunctions,
    FinitelySupported,
    PSummable(u32),
}

impl IdealSpec {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "all-functions" => Ok(IdealSpec::AllFunctions),
            "finitely-supported" => Ok(IdealSpec::FinitelySupported),
            _ => match s.strip_prefix("p-summable:").map(str::parse::<u32>) {
                Some(Ok(p)) if p >= 1 => Ok(IdealSpec::PSummable(p)),
                _ => Err(Error::Parse(format!("unknown ideal {s:?}"))),
            },
        }
    }

    /// Decides membership of a finitely supported function on `H`.
    fn admits(&self, lp: &LpSum) -> bool {
        match self {
            IdealSpec::AllFunctions | IdealSpec::FinitelySupported => true,
            IdealSpec::PSummable(_) => lp.value.is_finite(),
        }
    }
}

/// `Σ_h |f(h)|^p`, exact when `p` is even or every value has rational
/// modulus.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct LpSum {
    pub p: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub value: f64,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub ideal: IdealSpec,
    /// Arrows of `f` inside and outside `𝒢(e)`.
    #[serde(rename = "isotropy-support")]
    pub isotropy_support: usize,
    #[serde(rename = "off-isotropy-support")]
    pub off_support: usize,
    #[serde(rename = "isotropy-lp")]
    pub isotropy_lp: Option<LpSum>,
    /// `Σ_{x ∉ 𝒢(e)} |f(x)|² μ(r(x))`, exact.
    #[serde(rename = "off-isotropy-l2")]
    pub off_l2: String,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Membership {
    pub member: bool,
    pub certificate: Certificate,
}

fn pow_rational(q: &Rational, n: u32) -> Rational {
    (0..n).fold(Rational::one(), |acc, _| acc * q)
}

fn lp_sum<'a>(p: u32, values: impl Iterator<Item = &'a Scalar>) -> LpSum {
    let mut exact = Some(Rational::zero());
    let mut value = 0.0;
    for v in values {
        let term = if p.is_multiple_of(2) { Some(pow_rational(&v.norm_sqr(), p / 2)) } else { v.abs_exact().map(|a| pow_rational(&a, p)) };
        exact = match (exact, term) {
            (Some(s), Some(t)) => Some(s + t),
            _ => None,
        };
        value += v.abs_f64().powi(p as i32);
    }
    if let Some(q) = &exact {
        value = to_f64(q);
    }
    LpSum { p, exact: exact.as_ref().map(render), value }
}

pub fn ideal_membership(frag: &Fragment, f: &ConvolutionElement, spec: IdealSpec, mu: &UnitMeasure) -> Result<Membership> {
    f.check_fragment(frag)?;
    let (_, arrows) = isotropy_algebra(frag)?;
    let on: Vec<&Scalar> = f.support().filter(|(i, _)| arrows.contains(i)).map(|(_, v)| v).collect();
    let mut off_l2 = Rational::zero();
    let mut off_support = 0;
    for (i, v) in f.support().filter(|(i, _)| !arrows.contains(i)) {
        let w = mu.weight(frag.range(i)).ok_or_else(|| Error::Domain(format!("no weight at {}", frag.range(i))))?;
        off_l2 += v.norm_sqr() * w;
        off_support += 1;
    }
    let p = match spec {
        IdealSpec::PSummable(p) => p,
        _ => 1,
    };
    let lp = lp_sum(p, on.iter().copied());
    let member = spec.admits(&lp);
    Ok(Membership {
        member,
        certificate: Certificate {
            ideal: spec,
            isotropy_support: on.len(),
            off_support,
            isotropy_lp: matches!(spec, IdealSpec::PSummable(_)).then_some(lp),
            off_l2: render(&off_l2),
        },
    })
}

/// Closure under sums and under pointwise products with bounded
/// multipliers, on random samples.
pub fn verify_ideal_laws(frag: &Fragment, spec: IdealSpec, mu: &UnitMeasure, samples: usize, seed: u64) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(format!("ideal laws for {spec:?}"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let f = random_element(frag, &mut rng, 0.5, true);
        let g = random_element(frag, &mut rng, 0.5, true);
        let member = |x: &ConvolutionElement| ideal_membership(frag, x, spec, mu).map(|m| m.member);
        r.check_mut("contains-finitely-supported").record(member(&f)?, || format!("{f:?} rejected"));
        r.check_mut("closed-under-sums").record(member(&f.add(&g)?)?, || format!("{f:?} + {g:?} rejected"));
        let mult: Vec<Scalar> = (0..frag.len()).map(|_| Scalar::new(frac(rng.gen_range(-9..=9), 7), frac(rng.gen_range(-9..=9), 7))).collect();
        let absorbed = f.multiply_pointwise(|i| mult[i].clone());
        r.check_mut("absorbs-bounded").record(member(&absorbed)?, || format!("{absorbed:?} rejected"));
    }
    Ok(r)
}
