//! Admissible pairs `(H, K)`, KH-factorization and the local actions.
//!
//! For `(h, k)` with `hk ∈ KH` the factorization `hk = k'h'` is unique,
//! and we write `h ▷ k = k'` (left local action of `H` on `K`) and
//! `h ◁ k = h'` (right local action of `K` on `H`).

mod identities;

use std::collections::HashSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::exact::{AmbientGroup, GroupElement};
use crate::report::VerificationReport;

pub use identities::{verify_identities, SamplePlan, TripleMode};

pub type Predicate = Arc<dyn Fn(&GroupElement) -> bool + Send + Sync>;

/// Returns `(k, h)` with `kh = g`, or `None` when `g ∉ KH`.
pub type FactorFn = Arc<dyn Fn(&GroupElement) -> Option<(GroupElement, GroupElement)> + Send + Sync>;

/// A subgroup given by a decidable membership predicate together with an
/// explicit list of elements: the whole subgroup when `complete`, a
/// window into it otherwise.
#[derive(Clone)]
pub struct Subgroup {
    name: String,
    membership: Predicate,
    elements: Vec<GroupElement>,
    complete: bool,
}

impl Subgroup {
    pub fn new(name: impl Into<String>, membership: Predicate, window: Vec<GroupElement>, complete: bool) -> Self {
        Subgroup { name: name.into(), membership, elements: window, complete }
    }

    /// A finite subgroup whose membership is decided by its element list.
    pub fn finite(name: impl Into<String>, elements: Vec<GroupElement>) -> Self {
        let set: HashSet<GroupElement> = elements.iter().cloned().collect();
        let membership: Predicate = Arc::new(move |g| set.contains(g));
        Subgroup { name: name.into(), membership, elements, complete: true }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        (self.membership)(g)
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn with_window(&self, window: Vec<GroupElement>) -> Subgroup {
        Subgroup { elements: window, complete: false, ..self.clone() }
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup")
            .field("name", &self.name)
            .field("elements", &self.elements.len())
            .field("complete", &self.complete)
            .finish()
    }
}

/// Decision procedure for `g ∈ KH` together with its witnesses.
#[derive(Clone)]
pub enum Factorizer {
    /// A per-example formula; every witness it returns is re-checked by
    /// exact multiplication.
    ClosedForm(FactorFn),
    /// Enumerates `K` (which must be complete) and tests `k⁻¹g ∈ H`.
    BruteForce,
    /// Closed form, cross-checked against brute force on every query.
    Hybrid(FactorFn),
}

impl Factorizer {
    pub fn kind(&self) -> &'static str {
        match self {
            Factorizer::ClosedForm(_) => "closed-form",
            Factorizer::BruteForce => "brute-force",
            Factorizer::Hybrid(_) => "hybrid",
        }
    }
}

/// A point `(h, k)` of `H × K`.
type Point = (GroupElement, GroupElement);

#[derive(Clone)]
pub struct AdmissiblePair {
    name: String,
    ambient: AmbientGroup,
    h: Subgroup,
    k: Subgroup,
    factorizer: Factorizer,
    etale: bool,
    omega: Arc<OnceLock<Option<Vec<Point>>>>,
}

impl fmt::Debug for AdmissiblePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AdmissiblePair")
            .field("name", &self.name)
            .field("ambient", &self.ambient.name())
            .field("h", &self.h)
            .field("k", &self.k)
            .field("factorizer", &self.factorizer.kind())
            .field("etale", &self.etale)
            .finish()
    }
}

/// The unique factorization `hk = k'h'`, i.e. `(h ▷ k, h ◁ k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Actions {
    pub right: GroupElement,
    pub left: GroupElement,
}

impl AdmissiblePair {
    /// `etale` records whether `H` is discrete; the convolution algebra is
    /// only available on étale pairs.
    pub fn new(
        name: impl Into<String>,
        ambient: AmbientGroup,
        h: Subgroup,
        k: Subgroup,
        factorizer: Factorizer,
        etale: bool,
    ) -> Self {
        AdmissiblePair { name: name.into(), ambient, h, k, factorizer, etale, omega: Arc::default() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient(&self) -> &AmbientGroup {
        &self.ambient
    }

    pub fn h(&self) -> &Subgroup {
        &self.h
    }

    pub fn k(&self) -> &Subgroup {
        &self.k
    }

    pub fn factorizer(&self) -> &Factorizer {
        &self.factorizer
    }

    pub fn is_etale(&self) -> bool {
        self.etale
    }

    pub fn identity(&self) -> GroupElement {
        self.ambient.identity()
    }

    pub fn is_finite(&self) -> bool {
        self.h.is_complete() && self.k.is_complete()
    }

    /// Same pair with different enumerated windows; membership and
    /// factorization are unchanged.
    pub fn with_windows(&self, h: Vec<GroupElement>, k: Vec<GroupElement>) -> AdmissiblePair {
        AdmissiblePair {
            h: self.h.with_window(h),
            k: self.k.with_window(k),
            omega: Arc::default(),
            ..self.clone()
        }
    }

    /// Every `(k, h)` in the enumerated `K` with `kh = g`.
    pub fn brute_force_witnesses(&self, g: &GroupElement) -> Vec<(GroupElement, GroupElement)> {
        self.k
            .elements()
            .iter()
            .filter_map(|k| {
                let h = self.ambient.left_divide(k, g);
                self.h.contains(&h).then(|| (k.clone(), h))
            })
            .collect()
    }

    fn brute_force(&self, g: &GroupElement) -> Result<Option<(GroupElement, GroupElement)>> {
        if !self.k.is_complete() {
            return Err(Error::Capability(format!(
                "brute-force factorization needs a complete enumeration of {}",
                self.k.name()
            )));
        }
        let mut w = self.brute_force_witnesses(g);
        if w.len() > 1 {
            return Err(Error::Validation(format!(
                "{g} has {} distinct KH factorizations; H ∩ K is not trivial",
                w.len()
            )));
        }
        Ok(w.pop())
    }

    fn closed_form(&self, f: &FactorFn, g: &GroupElement) -> Result<Option<(GroupElement, GroupElement)>> {
        match f(g) {
            None => Ok(None),
            Some((k, h)) => {
                if !self.k.contains(&k) || !self.h.contains(&h) || self.ambient.op(&k, &h) != *g {
                    return Err(Error::Validation(format!(
                        "closed-form factorizer returned ({k}, {h}) which is not a KH witness for {g}"
                    )));
                }
                Ok(Some((k, h)))
            }
        }
    }

    /// `g = kh` with `k ∈ K`, `h ∈ H`, or `None` when `g ∉ KH`.
    pub fn factor_kh(&self, g: &GroupElement) -> Result<Option<(GroupElement, GroupElement)>> {
        match &self.factorizer {
            Factorizer::ClosedForm(f) => self.closed_form(f, g),
            Factorizer::BruteForce => self.brute_force(g),
            Factorizer::Hybrid(f) => {
                let claimed = self.closed_form(f, g)?;
                let truth = self.brute_force(g)?;
                if claimed != truth {
                    return Err(Error::Validation(format!(
                        "closed-form and brute-force factorizations of {g} disagree"
                    )));
                }
                Ok(truth)
            }
        }
    }

    /// Checks the closed-form factorizer against brute force over the
    /// enumerated `K` window. Sound in both directions: a window witness
    /// must equal the closed form, and a closed-form witness whose `k`
    /// lies in the window must be found by the sweep.
    pub fn cross_check(&self, g: &GroupElement) -> Result<bool> {
        let claimed = self.factor_kh(g)?;
        let found = self.brute_force_witnesses(g);
        if found.len() > 1 {
            return Ok(false);
        }
        Ok(match (claimed, found.first()) {
            (Some(c), Some(f)) => c == *f,
            (None, Some(_)) => false,
            (Some((k, _)), None) => !self.k.elements().contains(&k),
            (None, None) => true,
        })
    }

    fn ensure_h(&self, h: &GroupElement) -> Result<()> {
        if self.ambient.contains(h) && self.h.contains(h) {
            Ok(())
        } else {
            Err(Error::Domain(format!("{h} is not in {}", self.h.name())))
        }
    }

    fn ensure_k(&self, k: &GroupElement) -> Result<()> {
        if self.ambient.contains(k) && self.k.contains(k) {
            Ok(())
        } else {
            Err(Error::Domain(format!("{k} is not in {}", self.k.name())))
        }
    }

    /// `(h ▷ k, h ◁ k)` when `hk ∈ KH`.
    pub fn actions(&self, h: &GroupElement, k: &GroupElement) -> Result<Option<Actions>> {
        self.ensure_h(h)?;
        self.ensure_k(k)?;
        Ok(self.factor_kh(&self.ambient.op(h, k))?.map(|(right, left)| Actions { right, left }))
    }

    /// `(h, k) ∈ Ω`, i.e. `hk ∈ KH`.
    pub fn in_omega(&self, h: &GroupElement, k: &GroupElement) -> Result<bool> {
        Ok(self.actions(h, k)?.is_some())
    }

    fn defined(&self, h: &GroupElement, k: &GroupElement) -> Result<Actions> {
        self.actions(h, k)?
            .ok_or_else(|| Error::OutOfDomain { h: h.to_string(), k: k.to_string() })
    }

    /// `h ▷ k ∈ K`.
    pub fn act_right(&self, h: &GroupElement, k: &GroupElement) -> Result<GroupElement> {
        Ok(self.defined(h, k)?.right)
    }

    /// `h ◁ k ∈ H`.
    pub fn act_left(&self, h: &GroupElement, k: &GroupElement) -> Result<GroupElement> {
        Ok(self.defined(h, k)?.left)
    }

    /// Ω over the enumerated windows. Cached when the pair is finite.
    pub fn omega_window(&self) -> Result<Vec<(GroupElement, GroupElement)>> {
        if self.is_finite() {
            if let Some(Some(cached)) = self.omega.get() {
                return Ok(cached.clone());
            }
        }
        let mut out = Vec::new();
        for h in self.h.elements() {
            for k in self.k.elements() {
                if self.in_omega(h, k)? {
                    out.push((h.clone(), k.clone()));
                }
            }
        }
        if self.is_finite() {
            let _ = self.omega.set(Some(out.clone()));
        }
        Ok(out)
    }

    /// Structural sanity of the pair on its enumerated elements: subgroup
    /// closure, `H ∩ K = {e}`, and uniqueness of every brute-force
    /// factorization of products `hk`.
    pub fn verify_admissibility(&self) -> VerificationReport {
        let g = &self.ambient;
        let e = g.identity();
        let mut r = VerificationReport::new(format!("admissibility of {}", self.name));
        r.check_mut("identity-in-subgroups")
            .record(self.h.contains(&e) && self.k.contains(&e), || "e missing from H or K".into());
        for (label, sub) in [("H", &self.h), ("K", &self.k)] {
            for a in sub.elements() {
                r.check_mut("subgroup-membership")
                    .record(g.contains(a) && sub.contains(a), || format!("{label} window element {a} fails membership"));
                r.check_mut("subgroup-inverse")
                    .record(sub.contains(&g.inv(a)), || format!("inverse of {a} leaves {label}"));
                for b in sub.elements() {
                    let ab = g.op(a, b);
                    r.check_mut("subgroup-product")
                        .record(sub.contains(&ab), || format!("{a}*{b} leaves {label}"));
                }
            }
        }
        for h in self.h.elements() {
            if self.k.contains(h) {
                r.check_mut("trivial-intersection").record(g.is_identity(h), || format!("{h} lies in H ∩ K"));
            } else {
                r.check_mut("trivial-intersection").pass();
            }
            for k in self.k.elements() {
                let w = self.brute_force_witnesses(&g.op(h, k));
                let c = r.check_mut("factorization-uniqueness");
                if w.len() <= 1 {
                    c.pass()
                } else {
                    c.fail(|| format!("{h}{k} has {} factorizations", w.len()))
                }
            }
        }
        r
    }
}
