//! Degenerate pairs with trivial `K`, where `𝒢` is the group `H`, and
//! pairs read from an explicit multiplication table.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{ClaimedActions, ExampleInstance, Params};
use crate::error::{Error, Result};
use crate::exact::{AmbientGroup, CayleyTable, GroupElement};
use crate::pair::{AdmissiblePair, Factorizer, Subgroup};

/// `z<n>` for cyclic, `s<n>` for symmetric groups.
pub fn named_group(name: &str) -> Result<CayleyTable> {
    let bad = || Error::Parse(format!("unknown group {name:?} (zN or sN)"));
    let (kind, n) = name.split_at(1.min(name.len()));
    let n: usize = n.parse().map_err(|_| bad())?;
    match kind {
        "z" | "Z" if (1..=64).contains(&n) => Ok(CayleyTable::cyclic(n)),
        "s" | "S" if (1..=5).contains(&n) => Ok(CayleyTable::symmetric(n)),
        _ => Err(bad()),
    }
}

/// Swaps two off-identity entries of the first non-identity row, which
/// breaks the group axioms while keeping every row a permutation.
pub fn inject_fault(t: &CayleyTable) -> Result<CayleyTable> {
    if t.order() < 3 {
        return Err(Error::Domain("need at least three elements to corrupt a table".into()));
    }
    let row = (0..t.order()).find(|&r| r != t.identity()).expect("order >= 3");
    let cols: Vec<usize> = (0..t.order()).filter(|&c| c != t.identity()).take(2).collect();
    t.corrupted((row, cols[0]), (row, cols[1]))
}

fn trivial_claims() -> ClaimedActions {
    ClaimedActions {
        domain: Arc::new(|_, _| true),
        right: Arc::new(|_, k| Some(k.clone())),
        left: Arc::new(|h, _| Some(h.clone())),
        domain_text: "Ω = H × {e}",
        right_text: "h ▷ e = e",
        left_text: "h ◁ e = h",
    }
}

/// `H` = the whole table, `K = {e}`.
pub fn group_case(table: CayleyTable, params: Params) -> ExampleInstance {
    let name = table.name().to_string();
    let e = GroupElement::Index(table.identity());
    let hs = (0..table.order()).map(GroupElement::Index).collect();
    let pair = AdmissiblePair::new(
        format!("{name} with trivial K"),
        AmbientGroup::Table(Arc::new(table)),
        Subgroup::finite("H", hs),
        Subgroup::finite("K", vec![e]),
        Factorizer::BruteForce,
        true,
    );
    ExampleInstance::new("group-case", params, pair, trivial_claims())
}

/// A finite group with designated subgroups, as read from JSON. Omitting
/// `h` takes the whole group, omitting `k` takes `{identity}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairTableSpec {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub identity: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default)]
    pub h: Option<Vec<usize>>,
    #[serde(default)]
    pub k: Option<Vec<usize>>,
}

/// Brute-force pair over a table. No published formulas exist, so the
/// claims are that every product factors, which the verifier will refute
/// with counterexamples when it does not.
pub fn table_pair(spec: PairTableSpec, fault: bool) -> Result<ExampleInstance> {
    let mut table = CayleyTable::new(spec.name.clone().unwrap_or_else(|| "table".into()), spec.table, spec.identity)?;
    if fault {
        table = inject_fault(&table)?;
    }
    let order = table.order();
    let hs = spec.h.unwrap_or_else(|| (0..order).collect());
    let ks = spec.k.unwrap_or_else(|| vec![table.identity()]);
    if let Some(&bad) = hs.iter().chain(&ks).find(|&&i| i >= order) {
        return Err(Error::Validation(format!("subgroup index {bad} out of range")));
    }
    let trivial_k = ks.len() == 1;
    let pair = AdmissiblePair::new(
        table.name().to_string(),
        AmbientGroup::Table(Arc::new(table)),
        Subgroup::finite("H", hs.into_iter().map(GroupElement::Index).collect()),
        Subgroup::finite("K", ks.into_iter().map(GroupElement::Index).collect()),
        Factorizer::BruteForce,
        true,
    );
    let mut claims = trivial_claims();
    if !trivial_k {
        // Without published formulas the oracle is compared with itself.
        let (pr, pl, pd) = (pair.clone(), pair.clone(), pair.clone());
        claims = ClaimedActions {
            domain: Arc::new(move |h, k| pd.in_omega(h, k).unwrap_or(false)),
            right: Arc::new(move |h, k| pr.act_right(h, k).ok()),
            left: Arc::new(move |h, k| pl.act_left(h, k).ok()),
            domain_text: "brute force",
            right_text: "brute force",
            left_text: "brute force",
        };
    }
    let mut params = Params::new();
    params.insert("fault".into(), fault.to_string());
    Ok(ExampleInstance::new("table", params, pair, claims))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{verify_example, ExamplePlan};

    #[test]
    fn group_case_passes() {
        for g in ["z2", "z5", "s3"] {
            let inst = group_case(named_group(g).unwrap(), Params::new());
            let r = verify_example(&inst, &ExamplePlan::default());
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn injected_fault_is_caught() {
        let inst = group_case(inject_fault(&named_group("s3").unwrap()).unwrap(), Params::new());
        let r = verify_example(&inst, &ExamplePlan::default());
        assert!(!r.passed());
        let c = r.checks.iter().find(|c| c.id.starts_with("group/") && c.failed > 0).unwrap();
        assert!(c.first_counterexample.is_some());
    }

    #[test]
    fn table_spec_round_trip_and_pair() {
        let s3 = CayleyTable::symmetric(3);
        let spec = s3.to_spec();
        let json = serde_json::json!({"table": spec.table, "identity": spec.identity, "h": [0, 1], "k": [0, 3, 4]});
        let ps: PairTableSpec = serde_json::from_value(json).unwrap();
        let inst = table_pair(ps, false).unwrap();
        let r = verify_example(&inst, &ExamplePlan::default());
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn bad_names() {
        assert!(named_group("q3").is_err());
        assert!(named_group("s9").is_err());
        assert!(named_group("").is_err());
    }
}
