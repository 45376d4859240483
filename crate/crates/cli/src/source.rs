//! Turning command-line arguments into instances and fragments, and
//! writing results out.

use std::fs;
use std::path::{Path, PathBuf};

use dgl_core::groupoid::{enumerate_fragment, Fragment, FragmentRecord, Structure, WindowSpec};
use dgl_core::models::{build, table_pair, ExampleInstance, PairTableSpec, Params};
use serde::de::DeserializeOwned;

use crate::{Fail, SourceArgs};

pub fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T, Fail> {
    let text = fs::read_to_string(path).map_err(|e| Fail::usage(format!("cannot read {what} {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Fail::usage(format!("malformed {what} {}: {e}", path.display())))
}

pub fn load_instance(src: &SourceArgs) -> Result<ExampleInstance, Fail> {
    let mut params = Params::new();
    for (k, v) in &src.params {
        if params.insert(k.clone(), v.clone()).is_some() {
            return Err(Fail::usage(format!("parameter {k} given twice")));
        }
    }
    match (&src.example, &src.table) {
        (Some(_), Some(_)) => Err(Fail::usage("give either --example or --table, not both")),
        (None, Some(path)) => {
            if !params.is_empty() {
                return Err(Fail::usage("--param does not apply to --table"));
            }
            let spec: PairTableSpec = read_json(path, "table")?;
            table_pair(spec, src.inject_fault).map_err(|e| Fail::from_core(e, 2))
        }
        (Some(name), None) => {
            if src.inject_fault {
                if name != "group-case" {
                    return Err(Fail::usage("--inject-fault needs a multiplication table: use --example group-case or --table"));
                }
                params.insert("fault".into(), "true".into());
            }
            build(name, &params).map_err(|e| Fail::from_core(e, 2))
        }
        (None, None) => Err(Fail::usage("one of --example or --table is required")),
    }
}

/// Enumerates the window of `inst`, or re-imports a fragment written by
/// `export`.
pub fn load_fragment(inst: &ExampleInstance, structure: Structure, file: Option<&PathBuf>) -> Result<Fragment, Fail> {
    match file {
        Some(path) => {
            let record: FragmentRecord = read_json(path, "fragment")?;
            Fragment::from_record(&inst.pair, &record).map_err(|e| Fail::from_core(e, 2))
        }
        None => enumerate_fragment(&inst.pair, structure, &WindowSpec::of_pair(&inst.pair)).map_err(|e| Fail::from_core(e, 1)),
    }
}

/// Writes `text` to the output file, or stdout.
pub fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), Fail> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Fail::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}
