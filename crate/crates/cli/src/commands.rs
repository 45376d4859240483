use std::fmt::Write as _;

use dgl_core::algebra::{
    convolve, exactness_check, i_norm, involution, random_element, reduced_norm, verify_algebra, AlgebraPlan, ConvolutionElement, ElementEntry,
    NORM_TOLERANCE,
};
use dgl_core::exact::GroupElement;
use dgl_core::groupoid::{to_dot, verify_gamma, verify_groupoid_axioms, FragmentRecord, GroupoidElement, Structure};
use dgl_core::models::{catalog, render_params, verify_example, ExampleInstance, ExamplePlan, Params};
use dgl_core::pair::{verify_identities, SamplePlan};
use dgl_core::{Error, VerificationReport};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::source::{emit, load_fragment, load_instance, read_json, to_json};
use crate::{BuildArgs, ExportArgs, Fail, Format, NormArgs, Suite, VerifyArgs};

/// Exhaustive identity sweeps above this many triples fall back to sampling.
const EXHAUSTIVE_LIMIT: usize = 100_000;

fn describe(inst: &ExampleInstance) -> String {
    let p = render_params(&inst.params);
    if p.is_empty() {
        inst.name.clone()
    } else {
        format!("{} {p}", inst.name)
    }
}

fn fixed(x: f64) -> String {
    format!("{x:.12}")
}

fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

#[derive(Serialize)]
struct ExampleRow {
    name: &'static str,
    params: &'static str,
    summary: &'static str,
}

pub fn list_examples(format: Format) -> Result<u8, Fail> {
    let rows: Vec<ExampleRow> = catalog().into_iter().map(|e| ExampleRow { name: e.name, params: e.params, summary: e.summary }).collect();
    let text = match format {
        Format::Json => to_json(&rows),
        Format::Text => {
            let mut s = String::new();
            for r in &rows {
                let _ = writeln!(s, "{:<18} {:<42} {}", r.name, r.params, r.summary);
            }
            s
        }
        Format::Dot => return Err(Fail::usage("list-examples writes json or text")),
    };
    emit(&text, None)?;
    Ok(0)
}

#[derive(Serialize)]
struct BuildArtifact<'a> {
    example: &'a str,
    params: &'a Params,
    pair: &'a str,
    #[serde(rename = "h-window")]
    h_window: &'a [GroupElement],
    #[serde(rename = "k-window")]
    k_window: &'a [GroupElement],
    /// Ω inside the windows; the arrows of either structure.
    omega: &'a [GroupoidElement],
    fragment: FragmentRecord,
}

pub fn build(a: &BuildArgs) -> Result<u8, Fail> {
    let inst = load_instance(&a.source)?;
    let frag = load_fragment(&inst, a.structure, None)?;
    if frag.len() > a.cap {
        return Err(Fail { code: 3, message: format!("fragment has {} arrows, over the cap of {}", frag.len(), a.cap) });
    }
    let pair = &inst.pair;
    let text = match a.out.format {
        Format::Json => to_json(&BuildArtifact {
            example: &inst.name,
            params: &inst.params,
            pair: pair.name(),
            h_window: pair.h().elements(),
            k_window: pair.k().elements(),
            omega: frag.elements(),
            fragment: frag.to_record(),
        }),
        Format::Dot => to_dot(&frag),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "{}", describe(&inst));
            let _ = writeln!(s, "H window {}, K window {}", pair.h().elements().len(), pair.k().elements().len());
            let _ = writeln!(s, "|Ω ∩ window| = {}", frag.len());
            let _ = writeln!(s, "{} fragment: {:?}, {} units", frag.structure(), frag.closure(), frag.units().len());
            s
        }
    };
    emit(&text, a.out.output.as_ref())?;
    Ok(0)
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    command: &'static str,
    example: &'a str,
    params: &'a Params,
    seed: u64,
    samples: usize,
    suites: Vec<String>,
    passed: bool,
    /// Explicitly requested checks that cannot be decided on this window.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    undecided: Vec<String>,
    report: &'a VerificationReport,
}

struct Run<'a> {
    inst: &'a ExampleInstance,
    seed: u64,
    samples: usize,
    report: VerificationReport,
    undecided: Vec<String>,
    /// Under `all`, undecidable checks are counted as skipped.
    lenient: bool,
}

impl Run<'_> {
    fn absorb(&mut self, prefix: &str, r: VerificationReport) {
        let report = std::mem::take(&mut self.report);
        self.report = report.absorb_prefixed(prefix, r);
    }

    fn error(&mut self, id: &str, e: Error) {
        if e.is_coverage() {
            self.report.check_mut(id).skip();
            if !self.lenient {
                self.undecided.push(format!("{id}: {e}"));
            }
        } else {
            self.report.check_mut(id).fail(|| e.to_string());
        }
    }

    fn suite(&mut self, suite: Suite) {
        let pair = &self.inst.pair;
        match suite {
            Suite::All => {
                for s in [Suite::Example, Suite::Exactness, Suite::Algebra] {
                    self.suite(s);
                }
            }
            Suite::Identities => {
                let (nh, nk) = (pair.h().elements().len(), pair.k().elements().len());
                let plan = if nh * nh * nk + nh * nk * nk <= EXHAUSTIVE_LIMIT {
                    SamplePlan::exhaustive(pair)
                } else {
                    SamplePlan::random(pair, self.samples, self.seed)
                };
                self.absorb("identities", verify_identities(pair, &plan));
            }
            Suite::Axioms => {
                for s in [Structure::G, Structure::GHat] {
                    let prefix = format!("axioms-{s}");
                    match load_fragment(self.inst, s, None) {
                        Ok(frag) => {
                            self.absorb(&prefix, verify_groupoid_axioms(&frag));
                            if s == Structure::G {
                                self.absorb("gamma", verify_gamma(&frag));
                            }
                        }
                        Err(f) => self.report.check_mut(&prefix).fail(|| f.message),
                    }
                }
            }
            Suite::Example => {
                let plan = ExamplePlan { seed: self.seed, samples: self.samples, ..ExamplePlan::default() };
                self.absorb("example", verify_example(self.inst, &plan));
            }
            Suite::Exactness => match load_fragment(self.inst, Structure::G, None) {
                Ok(frag) => match exactness_check(&frag, self.samples.min(200), self.seed) {
                    Ok(r) => self.absorb("exactness", r),
                    Err(e) => self.error("exactness", e),
                },
                Err(f) => self.report.check_mut("exactness").fail(|| f.message),
            },
            Suite::Algebra => {
                for s in [Structure::G, Structure::GHat] {
                    let prefix = format!("algebra-{s}");
                    match load_fragment(self.inst, s, None) {
                        Ok(frag) => match verify_algebra(&frag, &AlgebraPlan { seed: self.seed, samples: self.samples, ..AlgebraPlan::default() }) {
                            Ok(r) => self.absorb(&prefix, r),
                            Err(e) => self.error(&prefix, e),
                        },
                        Err(f) => self.report.check_mut(&prefix).fail(|| f.message),
                    }
                }
            }
        }
    }
}

pub fn verify(a: &VerifyArgs) -> Result<u8, Fail> {
    let inst = load_instance(&a.source)?;
    let lenient = a.suites.contains(&Suite::All);
    let mut run = Run {
        inst: &inst,
        seed: a.seed,
        samples: a.samples,
        report: VerificationReport::new(format!("{} (seed {})", describe(&inst), a.seed)),
        undecided: Vec::new(),
        lenient,
    };
    let mut suites = a.suites.clone();
    suites.dedup();
    if lenient {
        suites = vec![Suite::All];
    }
    for &s in &suites {
        run.suite(s);
    }
    let Run { report, undecided, .. } = run;
    let names: Vec<String> = suites.iter().map(|s| format!("{s:?}").to_lowercase()).collect();
    let text = match a.out.format {
        Format::Json => to_json(&VerifyOutput {
            command: "verify",
            example: &inst.name,
            params: &inst.params,
            seed: a.seed,
            samples: a.samples,
            suites: names,
            passed: report.passed(),
            undecided: undecided.clone(),
            report: &report,
        }),
        Format::Text => {
            let mut s = format!("dgl verify: {}\nseed {}, samples {}, suites {}\n", describe(&inst), a.seed, a.samples, names.join(","));
            let _ = write!(s, "{report}");
            for u in &undecided {
                let _ = writeln!(s, "undecided: {u}");
            }
            let _ = writeln!(s, "{}: {} tested, {} skipped, {} failed", if report.passed() { "PASS" } else { "FAIL" }, report.tested(), report.skipped(), report.failures());
            s
        }
        Format::Dot => return Err(Fail::usage("verify writes json or text")),
    };
    emit(&text, a.out.output.as_ref())?;
    if !report.passed() {
        if let Some(c) = report.checks.iter().find(|c| c.failed > 0) {
            eprintln!("dgl: {} failed, first counterexample: {}", c.id, c.first_counterexample.as_deref().unwrap_or("-"));
        }
        Ok(1)
    } else if !undecided.is_empty() {
        eprintln!("dgl: {}", undecided.join("; "));
        Ok(3)
    } else {
        Ok(0)
    }
}

#[derive(Serialize)]
#[serde(rename_all = "kebab-case")]
struct NormOutput<'a> {
    command: &'static str,
    example: &'a str,
    params: &'a Params,
    structure: Structure,
    seed: u64,
    element: String,
    support: usize,
    i_norm: INormOut,
    reduced_norm: ReducedOut,
    c_star_residual: String,
    reduced_below_i_norm: bool,
    /// The element itself, so random draws can be replayed with `--element`.
    entries: Vec<ElementEntry>,
}

#[derive(Serialize)]
struct INormOut {
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<String>,
    value: String,
}

#[derive(Serialize)]
#[serde(rename_all = "kebab-case")]
struct ReducedOut {
    value: String,
    certified_radius: String,
}

pub fn norm(a: &NormArgs) -> Result<u8, Fail> {
    let inst = load_instance(&a.source)?;
    let frag = load_fragment(&inst, a.structure, a.fragment.as_ref())?;
    let (f, label) = match (&a.element, a.random) {
        (Some(path), _) => {
            let entries: Vec<ElementEntry> = read_json(path, "element")?;
            (ConvolutionElement::from_entries(&frag, &entries).map_err(|e| Fail::from_core(e, 2))?, path.display().to_string())
        }
        (None, true) => (random_element(&frag, &mut ChaCha8Rng::seed_from_u64(a.seed), 0.4, true), "random".to_string()),
        (None, false) => (ConvolutionElement::unit_indicator(&frag), "unit-indicator".to_string()),
    };
    let core = |e| Fail::from_core(e, 1);
    let ni = i_norm(&frag, &f).map_err(core)?;
    let nr = reduced_norm(&frag, &f).map_err(core)?;
    let ff = convolve(&frag, &involution(&frag, &f).map_err(core)?, &f).map_err(core)?;
    let residual = (reduced_norm(&frag, &ff).map_err(core)?.value - nr.value * nr.value).abs();
    let below = nr.value <= ni.value + NORM_TOLERANCE * ni.value.max(1.0) + nr.certified_radius;
    let c_star_ok = residual <= NORM_TOLERANCE * (nr.value * nr.value).max(1.0);

    let out = NormOutput {
        command: "norm",
        example: &inst.name,
        params: &inst.params,
        structure: frag.structure(),
        seed: a.seed,
        element: label,
        support: f.support_len(),
        i_norm: INormOut { exact: ni.exact.as_ref().map(|q| q.to_string()), value: fixed(ni.value) },
        reduced_norm: ReducedOut { value: fixed(nr.value), certified_radius: sci(nr.certified_radius) },
        c_star_residual: sci(residual),
        reduced_below_i_norm: below,
        entries: f.to_entries(&frag),
    };
    let text = match a.out.format {
        Format::Json => to_json(&out),
        Format::Text => {
            let mut s = format!("dgl norm: {} ({}), seed {}\n", describe(&inst), out.structure, a.seed);
            let _ = writeln!(s, "element      {} ({} arrows in support)", out.element, out.support);
            let _ = writeln!(s, "I-norm       {}{}", out.i_norm.value, out.i_norm.exact.as_ref().map(|q| format!(" = {q}")).unwrap_or_default());
            let _ = writeln!(s, "reduced norm {} ± {}", out.reduced_norm.value, out.reduced_norm.certified_radius);
            let _ = writeln!(s, "‖f*f‖ − ‖f‖² {}", out.c_star_residual);
            let _ = writeln!(s, "‖f‖_r ≤ ‖f‖_I: {below}");
            s
        }
        Format::Dot => return Err(Fail::usage("norm writes json or text")),
    };
    emit(&text, a.out.output.as_ref())?;
    Ok(if below && c_star_ok { 0 } else { 1 })
}

pub fn export(a: &ExportArgs) -> Result<u8, Fail> {
    let inst = load_instance(&a.source)?;
    let frag = load_fragment(&inst, a.structure, a.fragment.as_ref())?;
    if frag.len() > a.cap {
        return Err(Fail { code: 3, message: format!("fragment has {} arrows, over the cap of {}", frag.len(), a.cap) });
    }
    let text = match a.out.format {
        Format::Json => to_json(&frag.to_record()),
        Format::Dot => to_dot(&frag),
        Format::Text => return Err(Fail::usage("export writes json or dot")),
    };
    emit(&text, a.out.output.as_ref())?;
    Ok(0)
}
