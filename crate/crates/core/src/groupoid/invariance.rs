//! Isotropy, invariant unit sets and orbit structure of a fragment.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;

use super::{Fragment, GroupoidElement, Structure};
use crate::error::{Error, Result};
use crate::exact::GroupElement;
use crate::report::VerificationReport;

/// Outcome of [`Fragment::is_invariant`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    /// `s(x) ∈ A ⟺ r(x) ∈ A` for every arrow of the fragment.
    pub pointwise: bool,
    /// The three product sets coincide.
    pub criterion: bool,
    /// Sizes of the three product sets, in the order they are written.
    pub set_sizes: [usize; 3],
    /// An arrow with exactly one end in `A`, if any.
    pub witness: Option<String>,
}

impl InvarianceReport {
    pub fn invariant(&self) -> bool {
        self.pointwise
    }

    pub fn agrees(&self) -> bool {
        self.pointwise == self.criterion
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitSummary {
    /// Unit parameters, one list per orbit, in first-seen order.
    pub orbits: Vec<Vec<String>>,
    /// Every isotropy group is trivial.
    pub principal: bool,
    /// A single orbit.
    pub minimal: bool,
    /// Units with trivial isotropy are dense; on a finite unit space this
    /// means all of them.
    pub topologically_principal: bool,
}

impl Fragment {
    fn require_unit(&self, u: &GroupoidElement) -> Result<()> {
        if self.groupoid().is_unit(u) {
            Ok(())
        } else {
            Err(Error::Domain(format!("{u} is not a unit")))
        }
    }

    /// `𝒢(u) = 𝒢_u ∩ 𝒢^u` within the fragment.
    pub fn isotropy(&self, u: &GroupoidElement) -> Result<Vec<usize>> {
        self.require_unit(u)?;
        Ok(self.range_fiber(u).iter().copied().filter(|&i| self.source(i) == u).collect())
    }

    /// Units occurring as a range or source of some arrow, in index order.
    pub fn unit_space(&self) -> Vec<GroupoidElement> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for i in 0..self.len() {
            for u in [self.range(i), self.source(i)] {
                if seen.insert(u.clone()) {
                    out.push(u.clone());
                }
            }
        }
        out
    }

    /// Tests whether the unit set `a` is invariant, both pointwise and via
    /// the product-set criterion: with `A ⊆ K` under `𝒢`,
    /// `HA ∩ KH = HA ∩ AH = HK ∩ AH`; with `A ⊆ H` under `𝒢̂`,
    /// `AK ∩ KH = AK ∩ KA = HK ∩ KA`. Products are formed from the
    /// fragment's arrows and decided with the factorization oracle.
    pub fn is_invariant(&self, a: &[GroupoidElement]) -> Result<InvarianceReport> {
        for u in a {
            self.require_unit(u)?;
        }
        let dg = self.groupoid();
        let params: HashSet<&GroupElement> = a.iter().map(|u| dg.unit_param(u)).collect();
        let in_a = |u: &GroupoidElement| a.contains(u);

        let witness = (0..self.len())
            .find(|&i| in_a(self.source(i)) != in_a(self.range(i)))
            .map(|i| format!("{} has source {} and range {}", self.element(i), self.source(i), self.range(i)));

        let pair = self.pair();
        let g = pair.ambient();
        let mut sets: [BTreeSet<String>; 3] = Default::default();
        for x in self.elements() {
            let hk = g.op(&x.h, &x.k);
            // Membership of hk in AH (or KA) is read off a fresh
            // factorization hk = k'h', not off the cached actions.
            let (k1, h1) = pair
                .factor_kh(&hk)?
                .ok_or_else(|| Error::Validation(format!("arrow {x} has hk outside KH")))?;
            let (start, finish) = match self.structure() {
                Structure::G => (params.contains(&x.k), params.contains(&k1)),
                Structure::GHat => (params.contains(&x.h), params.contains(&h1)),
            };
            let key = hk.to_string();
            if start {
                sets[0].insert(key.clone());
            }
            if start && finish {
                sets[1].insert(key.clone());
            }
            if finish {
                sets[2].insert(key);
            }
        }
        let criterion = sets[0] == sets[1] && sets[1] == sets[2];
        Ok(InvarianceReport {
            pointwise: witness.is_none(),
            criterion,
            set_sizes: [sets[0].len(), sets[1].len(), sets[2].len()],
            witness,
        })
    }

    /// Orbits of the unit space under `r(x) ~ s(x)`.
    pub fn orbits(&self) -> Vec<Vec<GroupoidElement>> {
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let units = self.unit_space();
        let pos: HashMap<&GroupoidElement, usize> = units.iter().enumerate().map(|(i, u)| (u, i)).collect();
        let mut parent: Vec<usize> = (0..units.len()).collect();
        for i in 0..self.len() {
            let a = find(&mut parent, pos[self.range(i)]);
            let b = find(&mut parent, pos[self.source(i)]);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: Vec<Vec<GroupoidElement>> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for (i, u) in units.iter().enumerate() {
            let root = find(&mut parent, i);
            let s = *slot.entry(root).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[s].push(u.clone());
        }
        groups
    }

    pub fn orbit_summary(&self) -> Result<OrbitSummary> {
        let dg = self.groupoid();
        let orbits = self.orbits();
        let units = self.unit_space();
        let mut trivial = 0;
        for u in &units {
            if self.isotropy(u)?.len() <= 1 {
                trivial += 1;
            }
        }
        Ok(OrbitSummary {
            orbits: orbits
                .iter()
                .map(|o| o.iter().map(|u| dg.unit_param(u).to_string()).collect())
                .collect(),
            principal: trivial == units.len(),
            minimal: orbits.len() == 1,
            topologically_principal: trivial == units.len(),
        })
    }

    /// `h ↦ (h, e)` is a group isomorphism from `H` onto `𝒢(e)`: checks
    /// it is onto the isotropy at `e`, injective and multiplicative, over
    /// the `H` elements present in the fragment. Meaningful under `𝒢`.
    pub fn verify_isotropy_at_identity(&self) -> VerificationReport {
        let mut r = VerificationReport::new(format!("isotropy at e of {} ({})", self.pair().name(), self.structure()));
        let dg = self.groupoid();
        let pair = self.pair();
        let g = pair.ambient();
        let e = pair.identity();
        let iso = match self.isotropy(&dg.unit(e.clone())) {
            Ok(v) => v,
            Err(err) => {
                r.check_mut("isotropy-onto").fail(|| err.to_string());
                return r;
            }
        };
        let hs: Vec<GroupElement> =
            self.elements().iter().filter(|x| g.is_identity(&x.k)).map(|x| x.h.clone()).collect();
        let image: HashSet<GroupoidElement> = hs.iter().map(|h| GroupoidElement::new(h.clone(), e.clone())).collect();
        let iso_set: HashSet<GroupoidElement> = iso.iter().map(|&i| self.element(i).clone()).collect();
        r.check_mut("isotropy-onto").record(image == iso_set, || {
            format!("{} elements (h, e) but isotropy at e has {}", image.len(), iso_set.len())
        });
        r.check_mut("isotropy-injective").record(image.len() == hs.len(), || "h ↦ (h, e) not injective".into());
        for h1 in &hs {
            for h2 in &hs {
                let a = GroupoidElement::new(h1.clone(), e.clone());
                let b = GroupoidElement::new(h2.clone(), e.clone());
                let want = GroupoidElement::new(g.op(h1, h2), e.clone());
                match dg.compose(&a, &b) {
                    Ok(Some(p)) => r
                        .check_mut("isotropy-multiplicative")
                        .record(p == want, || format!("({h1}, e)({h2}, e) = {p}, expected {want}")),
                    Ok(None) => r
                        .check_mut("isotropy-multiplicative")
                        .fail(|| format!("({h1}, e) and ({h2}, e) do not compose")),
                    Err(_) => r.check_mut("isotropy-multiplicative").skip(),
                }
            }
        }
        r
    }
}
