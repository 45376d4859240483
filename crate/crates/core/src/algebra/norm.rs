//! Operator norms. The only floating-point code in the crate: eigenvalues
//! of `M*M` with a residual certificate.

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::element::{require_etale, ConvolutionElement};
use super::scalar::ScalarMatrix;
use crate::error::{Error, Result};
use crate::groupoid::{Composite, Fragment};

/// A norm with a radius such that the true value lies in
/// `[value − certified_radius, value + certified_radius]`.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct NormValue {
    pub value: f64,
    #[serde(rename = "certified-radius")]
    pub certified_radius: f64,
}

impl NormValue {
    pub const ZERO: NormValue = NormValue { value: 0.0, certified_radius: 0.0 };

    fn max(self, o: NormValue) -> NormValue {
        NormValue { value: self.value.max(o.value), certified_radius: self.certified_radius.max(o.certified_radius) }
    }
}

/// `‖m‖ = √λ_max(m*m)`.
///
/// The top eigenpair of the Hermitian `m*m` has residual `r`; some
/// eigenvalue lies within `r` of the computed one, and forming `m*m` in
/// floats adds at most `n·ε·‖m‖_F²`.
pub fn operator_norm(m: &DMatrix<Complex<f64>>) -> NormValue {
    if m.is_empty() {
        return NormValue::ZERO;
    }
    let gram = m.adjoint() * m;
    let eig = SymmetricEigen::new(gram.clone());
    let (top, lambda) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, l)| if l > best.1 { (i, l) } else { best });
    let v = eig.eigenvectors.column(top);
    let residual = (&gram * v - v * Complex::new(lambda, 0.0)).norm() / v.norm();
    let rounding = (gram.nrows() as f64) * f64::EPSILON * m.norm_squared() * 4.0;
    let rho = residual + rounding;
    let lambda = lambda.max(0.0);
    let value = lambda.sqrt();
    let radius = ((lambda + rho).sqrt() - value).max(value - (lambda - rho).max(0.0).sqrt());
    NormValue { value, certified_radius: radius }
}

/// `Λ_u(f)` on `ℓ²(𝒢_u)`: entry `[x, y] = f(xy⁻¹)`, rows and columns in
/// the order of [`Fragment::source_fiber`].
pub fn regular_matrix(frag: &Fragment, f: &ConvolutionElement, u: usize) -> Result<ScalarMatrix> {
    let fiber = frag.source_fiber(frag.element(u));
    let mut m = ScalarMatrix::zeros(fiber.len(), fiber.len());
    for (j, &y) in fiber.iter().enumerate() {
        let yinv = frag
            .inverse_index(y)
            .ok_or_else(|| Error::Coverage(format!("inverse of {} leaves the fragment", frag.element(y))))?;
        for (i, &x) in fiber.iter().enumerate() {
            match frag.compose(x, yinv) {
                Composite::Inside(xy) => m.set(i, j, f.get(xy)),
                Composite::Outside(p) => return Err(Error::Coverage(format!("{p} leaves the fragment"))),
                Composite::NotComposable => {
                    return Err(Error::Validation(format!("{} and its fiber mate {} do not compose", frag.element(x), frag.element(yinv))))
                }
            }
        }
    }
    Ok(m)
}

pub(crate) fn require_closed(frag: &Fragment) -> Result<()> {
    require_etale(frag)?;
    if frag.is_closed() {
        Ok(())
    } else {
        Err(Error::Coverage(format!("{} fragment of {} is a window, not closed", frag.structure(), frag.pair().name())))
    }
}

/// `max_u ‖Λ_u(f)‖` over the units of a closed fragment.
pub fn reduced_norm(frag: &Fragment, f: &ConvolutionElement) -> Result<NormValue> {
    require_closed(frag)?;
    f.check_fragment(frag)?;
    let norms = frag
        .units()
        .par_iter()
        .map(|&u| regular_matrix(frag, f, u).map(|m| operator_norm(&m.to_complex())))
        .collect::<Result<Vec<_>>>()?;
    Ok(norms.into_iter().fold(NormValue::ZERO, NormValue::max))
}
