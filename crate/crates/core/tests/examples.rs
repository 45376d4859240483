//! Every catalog example through the consolidated verifier.

use dgl_core::models::{build, catalog, verify_example, ExamplePlan, Params};

#[test]
fn every_catalog_example_verifies() {
    let plan = ExamplePlan { seed: 3, samples: 300, triples: 1500, exhaustive_limit: 50_000 };
    for info in catalog() {
        let inst = build(info.name, &Params::new()).unwrap();
        let r = verify_example(&inst, &plan);
        assert!(r.passed(), "{}: {r}", info.name);
        assert!(r.tested() > 0, "{}", info.name);
        // documented disagreements with published formulas surface as findings
        for d in &inst.known_discrepancies {
            assert!(r.findings.iter().any(|f| f.id.ends_with(d)), "{}: finding {d} missing", info.name);
        }
    }
}

#[test]
fn faulted_group_case_fails() {
    let mut p = Params::new();
    p.insert("group".into(), "s3".into());
    p.insert("fault".into(), "true".into());
    let r = verify_example(&build("group-case", &p).unwrap(), &ExamplePlan::default());
    assert!(!r.passed());
    assert!(r.checks.iter().any(|c| c.failed > 0 && c.first_counterexample.is_some()));
}
