//! Verification of the local-action compatibility identities.
//!
//! For `h₁, h₂ ∈ H` and `k ∈ K` with `h₂k ∈ KH`:
//!   `h₁(h₂ ▷ k) ∈ KH ⟺ (h₁h₂)k ∈ KH`, and then
//!   (eq1) `h₁ ▷ (h₂ ▷ k) = (h₁h₂) ▷ k`,
//!   (eq2) `(h₁h₂) ◁ k = (h₁ ◁ (h₂ ▷ k))(h₂ ◁ k)`.
//! For `h ∈ H` and `k₁, k₂ ∈ K` with `hk₁ ∈ KH`:
//!   `(h ◁ k₁)k₂ ∈ KH ⟺ h(k₁k₂) ∈ KH`, and then
//!   (eq3) `(h ◁ k₁) ◁ k₂ = h ◁ (k₁k₂)`,
//!   (eq4) `h ▷ (k₁k₂) = (h ▷ k₁)((h ◁ k₁) ▷ k₂)`.
//! (eq5) `e ▷ k = k`, `h ▷ e = e`, `e ◁ k = e`, `h ◁ e = h`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Actions, AdmissiblePair};
use crate::error::Error;
use crate::exact::GroupElement;
use crate::report::VerificationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TripleMode {
    Exhaustive,
    /// `count` triples of each shape drawn uniformly with replacement.
    Random { count: usize, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct SamplePlan {
    pub hs: Vec<GroupElement>,
    pub ks: Vec<GroupElement>,
    pub mode: TripleMode,
}

impl SamplePlan {
    /// Every triple over the pair's enumerated windows.
    pub fn exhaustive(pair: &AdmissiblePair) -> Self {
        SamplePlan { hs: pair.h().elements().to_vec(), ks: pair.k().elements().to_vec(), mode: TripleMode::Exhaustive }
    }

    pub fn random(pair: &AdmissiblePair, count: usize, seed: u64) -> Self {
        SamplePlan {
            hs: pair.h().elements().to_vec(),
            ks: pair.k().elements().to_vec(),
            mode: TripleMode::Random { count, seed },
        }
    }

    fn h_triples(&self) -> Vec<(usize, usize, usize)> {
        self.triples(self.hs.len(), self.hs.len(), self.ks.len(), 0)
    }

    fn k_triples(&self) -> Vec<(usize, usize, usize)> {
        self.triples(self.hs.len(), self.ks.len(), self.ks.len(), 1)
    }

    fn triples(&self, a: usize, b: usize, c: usize, stream: u64) -> Vec<(usize, usize, usize)> {
        if a == 0 || b == 0 || c == 0 {
            return Vec::new();
        }
        match self.mode {
            TripleMode::Exhaustive => (0..a)
                .flat_map(|i| (0..b).flat_map(move |j| (0..c).map(move |l| (i, j, l))))
                .collect(),
            TripleMode::Random { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(stream);
                (0..count).map(|_| (rng.gen_range(0..a), rng.gen_range(0..b), rng.gen_range(0..c))).collect()
            }
        }
    }
}

/// Outcome of one action lookup: defined, undefined, or undecidable in
/// the current window (coverage/capability), which is counted as a skip.
enum Lookup {
    Defined(Actions),
    Undefined,
    Unknown,
}

fn lookup(pair: &AdmissiblePair, h: &GroupElement, k: &GroupElement, report: &mut VerificationReport) -> Lookup {
    match pair.actions(h, k) {
        Ok(Some(a)) => Lookup::Defined(a),
        Ok(None) => Lookup::Undefined,
        Err(e) if e.is_coverage() => Lookup::Unknown,
        Err(e) => {
            report.check_mut("oracle-errors").fail(|| format!("({h}, {k}): {e}"));
            Lookup::Unknown
        }
    }
}

fn is_defined(l: &Lookup) -> Option<bool> {
    match l {
        Lookup::Defined(_) => Some(true),
        Lookup::Undefined => Some(false),
        Lookup::Unknown => None,
    }
}

fn h_triple(pair: &AdmissiblePair, h1: &GroupElement, h2: &GroupElement, k: &GroupElement, r: &mut VerificationReport) {
    let g = pair.ambient();
    let Lookup::Defined(inner) = lookup(pair, h2, k, r) else {
        for id in ["eq1-2-definedness", "eq1", "eq2"] {
            r.check_mut(id).skip();
        }
        return;
    };
    let h1h2 = g.op(h1, h2);
    let via_action = lookup(pair, h1, &inner.right, r);
    let via_product = lookup(pair, &h1h2, k, r);
    match (is_defined(&via_action), is_defined(&via_product)) {
        (Some(a), Some(b)) => r.check_mut("eq1-2-definedness").record(a == b, || {
            format!("h1={h1}, h2={h2}, k={k}: h1(h2▷k) ∈ KH is {a} but (h1h2)k ∈ KH is {b}")
        }),
        _ => r.check_mut("eq1-2-definedness").skip(),
    }
    match (via_action, via_product) {
        (Lookup::Defined(outer), Lookup::Defined(direct)) => {
            r.check_mut("eq1").record(outer.right == direct.right, || {
                format!("h1={h1}, h2={h2}, k={k}: h1▷(h2▷k)={} but (h1h2)▷k={}", outer.right, direct.right)
            });
            let rhs = g.op(&outer.left, &inner.left);
            r.check_mut("eq2").record(direct.left == rhs, || {
                format!("h1={h1}, h2={h2}, k={k}: (h1h2)◁k={} but (h1◁(h2▷k))(h2◁k)={rhs}", direct.left)
            });
        }
        _ => {
            r.check_mut("eq1").skip();
            r.check_mut("eq2").skip();
        }
    }
}

fn k_triple(pair: &AdmissiblePair, h: &GroupElement, k1: &GroupElement, k2: &GroupElement, r: &mut VerificationReport) {
    let g = pair.ambient();
    let Lookup::Defined(first) = lookup(pair, h, k1, r) else {
        for id in ["eq3-4-definedness", "eq3", "eq4"] {
            r.check_mut(id).skip();
        }
        return;
    };
    let k1k2 = g.op(k1, k2);
    let chained = lookup(pair, &first.left, k2, r);
    let direct = lookup(pair, h, &k1k2, r);
    match (is_defined(&chained), is_defined(&direct)) {
        (Some(a), Some(b)) => r.check_mut("eq3-4-definedness").record(a == b, || {
            format!("h={h}, k1={k1}, k2={k2}: (h◁k1)k2 ∈ KH is {a} but h(k1k2) ∈ KH is {b}")
        }),
        _ => r.check_mut("eq3-4-definedness").skip(),
    }
    match (chained, direct) {
        (Lookup::Defined(second), Lookup::Defined(direct)) => {
            r.check_mut("eq3").record(second.left == direct.left, || {
                format!("h={h}, k1={k1}, k2={k2}: (h◁k1)◁k2={} but h◁(k1k2)={}", second.left, direct.left)
            });
            let rhs = g.op(&first.right, &second.right);
            r.check_mut("eq4").record(direct.right == rhs, || {
                format!("h={h}, k1={k1}, k2={k2}: h▷(k1k2)={} but (h▷k1)((h◁k1)▷k2)={rhs}", direct.right)
            });
        }
        _ => {
            r.check_mut("eq3").skip();
            r.check_mut("eq4").skip();
        }
    }
}

fn unit_laws(pair: &AdmissiblePair, h: &GroupElement, k: &GroupElement, r: &mut VerificationReport) {
    let g = pair.ambient();
    let e = g.identity();
    let check = |r: &mut VerificationReport, res: Result<GroupElement, Error>, want: &GroupElement, what: &str| match res {
        Ok(v) => r.check_mut("eq5").record(v == *want, || format!("{what} gave {v}, expected {want}")),
        Err(err) if err.is_coverage() => r.check_mut("eq5").skip(),
        Err(err) => r.check_mut("eq5").fail(|| format!("{what}: {err}")),
    };
    check(r, pair.act_right(&e, k), k, &format!("e▷{k}"));
    check(r, pair.act_right(h, &e), &e, &format!("{h}▷e"));
    check(r, pair.act_left(&e, k), &e, &format!("e◁{k}"));
    check(r, pair.act_left(h, &e), h, &format!("{h}◁e"));
    match lookup(pair, h, k, r) {
        Lookup::Defined(a) => {
            let hk = g.op(h, k);
            let kh = g.op(&a.right, &a.left);
            r.check_mut("factorization").record(hk == kh, || format!("h={h}, k={k}: hk={hk} but (h▷k)(h◁k)={kh}"));
        }
        Lookup::Undefined => {}
        Lookup::Unknown => r.check_mut("factorization").skip(),
    }
}

/// Runs every identity over the plan's triples. Precondition failures and
/// window misses are skips, never passes.
pub fn verify_identities(pair: &AdmissiblePair, plan: &SamplePlan) -> VerificationReport {
    let subject = format!("local-action identities of {}", pair.name());
    let empty = || VerificationReport::new(subject.clone());
    let seed_ids = |mut r: VerificationReport| {
        for id in ["eq1-2-definedness", "eq1", "eq2", "eq3-4-definedness", "eq3", "eq4", "eq5", "factorization"] {
            r.check_mut(id);
        }
        r
    };
    let hs = &plan.hs;
    let ks = &plan.ks;
    let by_h = plan
        .h_triples()
        .into_par_iter()
        .fold(empty, |mut r, (i, j, l)| {
            h_triple(pair, &hs[i], &hs[j], &ks[l], &mut r);
            r
        })
        .reduce(empty, VerificationReport::merge);
    let by_k = plan
        .k_triples()
        .into_par_iter()
        .fold(empty, |mut r, (i, j, l)| {
            k_triple(pair, &hs[i], &ks[j], &ks[l], &mut r);
            r
        })
        .reduce(empty, VerificationReport::merge);
    let pairs: Vec<(usize, usize)> = match plan.mode {
        TripleMode::Exhaustive => (0..hs.len()).flat_map(|i| (0..ks.len()).map(move |j| (i, j))).collect(),
        TripleMode::Random { count, seed } if !hs.is_empty() && !ks.is_empty() => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(2);
            (0..count).map(|_| (rng.gen_range(0..hs.len()), rng.gen_range(0..ks.len()))).collect()
        }
        TripleMode::Random { .. } => Vec::new(),
    };
    let units = pairs
        .into_par_iter()
        .fold(empty, |mut r, (i, j)| {
            unit_laws(pair, &hs[i], &ks[j], &mut r);
            r
        })
        .reduce(empty, VerificationReport::merge);
    seed_ids(empty()).merge(by_h).merge(by_k).merge(units)
}
