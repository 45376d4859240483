//! JSON and DOT views of a fragment.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Closure, Composite, Fragment, GroupoidElement, Structure};
use crate::error::{Error, Result};
use crate::pair::AdmissiblePair;

/// `left · right`; `product` indexes `elements` and is `None` when the
/// composite leaves the fragment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComposablePair {
    pub left: usize,
    pub right: usize,
    pub product: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentRecord {
    pub pair: String,
    pub structure: Structure,
    pub closure: Closure,
    pub elements: Vec<GroupoidElement>,
    pub composable: Vec<ComposablePair>,
}

impl Fragment {
    pub fn to_record(&self) -> FragmentRecord {
        let mut composable = Vec::new();
        for a in 0..self.len() {
            for &b in self.composable_with(a) {
                let product = match self.compose(a, b) {
                    Composite::Inside(i) => Some(i),
                    _ => None,
                };
                composable.push(ComposablePair { left: a, right: b, product });
            }
        }
        FragmentRecord {
            pair: self.pair().name().to_string(),
            structure: self.structure(),
            closure: self.closure(),
            elements: self.elements().to_vec(),
            composable,
        }
    }

    /// Rebuilds a fragment from its record, recomputing every structure
    /// map and rejecting records that disagree with the recomputation.
    pub fn from_record(pair: &AdmissiblePair, record: &FragmentRecord) -> Result<Fragment> {
        if record.pair != pair.name() {
            return Err(Error::Validation(format!("record is for {}, not {}", record.pair, pair.name())));
        }
        let frag = Fragment::from_elements(pair.clone(), record.structure, record.elements.clone())?;
        let rebuilt = frag.to_record();
        if rebuilt != *record {
            return Err(Error::Validation("record disagrees with the recomputed fragment".into()));
        }
        Ok(frag)
    }
}

/// Units as nodes, one edge `s(x) → r(x)` per arrow labelled `(h, k)`.
pub fn to_dot(frag: &Fragment) -> String {
    let dg = frag.groupoid();
    let units = frag.unit_space();
    let ids: HashMap<&GroupoidElement, usize> = units.iter().enumerate().map(|(i, u)| (u, i)).collect();
    let mut out = String::new();
    let _ = writeln!(out, "digraph {:?} {{", format!("{} {}", frag.pair().name(), frag.structure()));
    for (i, u) in units.iter().enumerate() {
        let _ = writeln!(out, "  u{i} [label={:?}];", dg.unit_param(u).to_string());
    }
    for i in 0..frag.len() {
        let _ = writeln!(
            out,
            "  u{} -> u{} [label={:?}];",
            ids[frag.source(i)],
            ids[frag.range(i)],
            frag.element(i).to_string()
        );
    }
    out.push_str("}\n");
    out
}
