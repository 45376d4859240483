//! The two groupoid structures on Ω.
//!
//! `𝒢` (structure [`Structure::G`]): `(h₁, h₂ ▷ k₂)·(h₂, k₂) = (h₁h₂, k₂)`,
//! `(h,k)⁻¹ = (h⁻¹, h ▷ k)`, `r(h,k) = (e, h ▷ k)`, `s(h,k) = (e, k)`;
//! units are identified with `K`.
//!
//! `𝒢̂` (structure [`Structure::GHat`]): `(h₁,k₁)·(h₁ ◁ k₁, k₂) = (h₁, k₁k₂)`,
//! `(h,k)⁻¹ = (h ◁ k, k⁻¹)`, `r(h,k) = (h, e)`, `s(h,k) = (h ◁ k, e)`;
//! units are identified with `H`.

mod export;
mod fragment;
mod invariance;
mod maps;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::GroupElement;
use crate::pair::{Actions, AdmissiblePair};

pub use export::{to_dot, ComposablePair, FragmentRecord};
pub use fragment::{enumerate_fragment, verify_groupoid_axioms, Closure, Composite, Fragment, WindowSpec};
pub use invariance::{InvarianceReport, OrbitSummary};
pub use maps::{verify_gamma, verify_partial_maps};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Structure {
    #[serde(rename = "G")]
    G,
    #[serde(rename = "Ghat")]
    GHat,
}

impl Structure {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "g" => Ok(Structure::G),
            "ghat" | "g-hat" | "hat" => Ok(Structure::GHat),
            _ => Err(Error::Parse(format!("unknown groupoid structure {s:?} (expected G or Ghat)"))),
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Structure::G => "G",
            Structure::GHat => "Ghat",
        })
    }
}

/// A pair `(h, k) ∈ Ω`. Units are the elements `(e, k)` under `𝒢` and
/// `(h, e)` under `𝒢̂`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct GroupoidElement {
    pub h: GroupElement,
    pub k: GroupElement,
}

impl GroupoidElement {
    pub fn new(h: GroupElement, k: GroupElement) -> Self {
        GroupoidElement { h, k }
    }
}

impl fmt::Display for GroupoidElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.h, self.k)
    }
}

/// One of the two groupoid structures over an admissible pair.
#[derive(Clone, Copy, Debug)]
pub struct DoubleGroupoid<'a> {
    pub pair: &'a AdmissiblePair,
    pub structure: Structure,
}

impl<'a> DoubleGroupoid<'a> {
    pub fn new(pair: &'a AdmissiblePair, structure: Structure) -> Self {
        DoubleGroupoid { pair, structure }
    }

    /// Validates `(h, k) ∈ Ω`.
    pub fn element(&self, h: GroupElement, k: GroupElement) -> Result<GroupoidElement> {
        if self.pair.in_omega(&h, &k)? {
            Ok(GroupoidElement { h, k })
        } else {
            Err(Error::OutOfDomain { h: h.to_string(), k: k.to_string() })
        }
    }

    fn actions(&self, a: &GroupoidElement) -> Result<Actions> {
        self.pair
            .actions(&a.h, &a.k)?
            .ok_or_else(|| Error::OutOfDomain { h: a.h.to_string(), k: a.k.to_string() })
    }

    /// The unit corresponding to a `K` element (for `𝒢`) or an `H`
    /// element (for `𝒢̂`).
    pub fn unit(&self, param: GroupElement) -> GroupoidElement {
        let e = self.pair.identity();
        match self.structure {
            Structure::G => GroupoidElement { h: e, k: param },
            Structure::GHat => GroupoidElement { h: param, k: e },
        }
    }

    /// Inverse of [`DoubleGroupoid::unit`].
    pub fn unit_param<'b>(&self, u: &'b GroupoidElement) -> &'b GroupElement {
        match self.structure {
            Structure::G => &u.k,
            Structure::GHat => &u.h,
        }
    }

    pub fn is_unit(&self, a: &GroupoidElement) -> bool {
        let g = self.pair.ambient();
        match self.structure {
            Structure::G => g.is_identity(&a.h),
            Structure::GHat => g.is_identity(&a.k),
        }
    }

    pub fn range(&self, a: &GroupoidElement) -> Result<GroupoidElement> {
        Ok(match self.structure {
            Structure::G => self.unit(self.actions(a)?.right),
            Structure::GHat => self.unit(a.h.clone()),
        })
    }

    pub fn source(&self, a: &GroupoidElement) -> Result<GroupoidElement> {
        Ok(match self.structure {
            Structure::G => self.unit(a.k.clone()),
            Structure::GHat => self.unit(self.actions(a)?.left),
        })
    }

    pub fn invert(&self, a: &GroupoidElement) -> Result<GroupoidElement> {
        let g = self.pair.ambient();
        let act = self.actions(a)?;
        Ok(match self.structure {
            Structure::G => GroupoidElement { h: g.inv(&a.h), k: act.right },
            Structure::GHat => GroupoidElement { h: act.left, k: g.inv(&a.k) },
        })
    }

    /// `ab` when composable, `None` otherwise.
    pub fn compose(&self, a: &GroupoidElement, b: &GroupoidElement) -> Result<Option<GroupoidElement>> {
        let g = self.pair.ambient();
        Ok(match self.structure {
            Structure::G => {
                let right = self.actions(b)?.right;
                (a.k == right).then(|| GroupoidElement { h: g.op(&a.h, &b.h), k: b.k.clone() })
            }
            Structure::GHat => {
                let left = self.actions(a)?.left;
                (b.h == left).then(|| GroupoidElement { h: a.h.clone(), k: g.op(&a.k, &b.k) })
            }
        })
    }
}

/// `γ(h, k) = (h ◁ k, k⁻¹)`, an automorphism of `𝒢`.
pub fn gamma(pair: &AdmissiblePair, a: &GroupoidElement) -> Result<GroupoidElement> {
    let left = pair.act_left(&a.h, &a.k)?;
    Ok(GroupoidElement { h: left, k: pair.ambient().inv(&a.k) })
}

/// `D_h ∩ window = {k ∈ window : hk ∈ KH}`.
pub fn partial_domain(pair: &AdmissiblePair, h: &GroupElement, window: &[GroupElement]) -> Result<Vec<GroupElement>> {
    let mut out = Vec::new();
    for k in window {
        if pair.in_omega(h, k)? {
            out.push(k.clone());
        }
    }
    Ok(out)
}

/// `θ_h(k) = h ▷ k`, defined on `D_h`.
pub fn partial_map(pair: &AdmissiblePair, h: &GroupElement, k: &GroupElement) -> Result<GroupElement> {
    pair.act_right(h, k)
}
