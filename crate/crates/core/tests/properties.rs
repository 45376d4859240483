//! Structural invariants as properties over randomly chosen models and
//! elements.

use dgl_core::algebra::{
    convolve, i_norm, involution, modular_function, reduced_norm, restrict_to_h, ConvolutionElement, Scalar, UnitMeasure,
};
use dgl_core::exact::rational::{frac, int};
use dgl_core::groupoid::{enumerate_fragment, gamma, verify_gamma, verify_groupoid_axioms, Composite, Fragment, GroupoidElement, Structure, WindowSpec};
use dgl_core::models::{axb, axb_h, axb_k, sanov, semidirect_cyclic, unital_ring, CyclicAction, ExampleInstance};
use dgl_core::pair::{verify_identities, SamplePlan};
use num_traits::One;
use proptest::prelude::*;

fn fragment(inst: &ExampleInstance, s: Structure) -> Fragment {
    enumerate_fragment(&inst.pair, s, &WindowSpec::of_pair(&inst.pair)).unwrap()
}

fn structure() -> impl Strategy<Value = Structure> {
    prop_oneof![Just(Structure::G), Just(Structure::GHat)]
}

/// A closed finite model: unital ring over Z/n or a cyclic semidirect.
fn finite_model() -> impl Strategy<Value = ExampleInstance> {
    prop_oneof![
        (2u64..=7).prop_map(|n| unital_ring(n, 1).unwrap()),
        (2usize..=4, 2usize..=7, 0usize..3).prop_filter_map("action must be a homomorphism", |(h, k, a)| {
            let action = [CyclicAction::Trivial, CyclicAction::Inversion, CyclicAction::Power(2)][a];
            semidirect_cyclic(h, k, action).ok()
        }),
    ]
}

fn element(frag: &Fragment, raw: &[(i8, i8, u8)]) -> ConvolutionElement {
    let values = raw
        .iter()
        .enumerate()
        .filter(|(_, (re, im, _))| *re != 0 || *im != 0)
        .map(|(i, &(re, im, d))| (i % frag.len(), Scalar::new(frac(re as i64, d as i64 + 1), frac(im as i64, d as i64 + 1))));
    ConvolutionElement::from_values(frag, values).unwrap()
}

fn raw_values() -> impl Strategy<Value = Vec<(i8, i8, u8)>> {
    prop::collection::vec((-5i8..=5, -5i8..=5, 0u8..3), 0..16)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn identities_hold_on_finite_models(inst in finite_model()) {
        let r = verify_identities(&inst.pair, &SamplePlan::exhaustive(&inst.pair));
        prop_assert!(r.passed(), "{}", r);
    }

    #[test]
    fn both_structures_are_groupoids(inst in finite_model(), s in structure()) {
        let frag = fragment(&inst, s);
        prop_assert!(frag.is_closed());
        let r = verify_groupoid_axioms(&frag);
        prop_assert!(r.passed(), "{}", r);
        prop_assert_eq!(r.skipped(), 0);
    }

    #[test]
    fn gamma_is_an_involutive_homomorphism(inst in finite_model()) {
        let frag = fragment(&inst, Structure::G);
        let r = verify_gamma(&frag);
        prop_assert!(r.passed(), "{}", r);
    }

    #[test]
    fn invariance_criterion_matches_pointwise(inst in finite_model(), s in structure(), mask in any::<u32>()) {
        let frag = fragment(&inst, s);
        let units = frag.unit_space();
        let a: Vec<GroupoidElement> = units.iter().enumerate().filter(|(i, _)| mask >> (i % 32) & 1 == 1).map(|(_, u)| u.clone()).collect();
        let rep = frag.is_invariant(&a).unwrap();
        prop_assert!(rep.agrees(), "{:?}", rep);
        // a union of orbits is always invariant
        let orbits = frag.orbits();
        let union: Vec<GroupoidElement> = orbits.iter().enumerate().filter(|(i, _)| mask >> (i % 32) & 1 == 1).flat_map(|(_, o)| o.clone()).collect();
        prop_assert!(frag.is_invariant(&union).unwrap().invariant());
    }

    #[test]
    fn identity_unit_is_invariant(inst in finite_model(), s in structure()) {
        let frag = fragment(&inst, s);
        let e = inst.pair.identity();
        let rep = frag.is_invariant(&[GroupoidElement::new(e.clone(), e)]).unwrap();
        prop_assert!(rep.invariant() && rep.agrees());
    }

    #[test]
    fn convolution_laws(inst in finite_model(), s in structure(), a in raw_values(), b in raw_values(), c in raw_values()) {
        let frag = fragment(&inst, s);
        let (f, g, h) = (element(&frag, &a), element(&frag, &b), element(&frag, &c));
        let fg = convolve(&frag, &f, &g).unwrap();
        prop_assert_eq!(convolve(&frag, &fg, &h).unwrap(), convolve(&frag, &f, &convolve(&frag, &g, &h).unwrap()).unwrap());
        let (fs, gs) = (involution(&frag, &f).unwrap(), involution(&frag, &g).unwrap());
        prop_assert_eq!(involution(&frag, &fs).unwrap(), f.clone());
        prop_assert_eq!(involution(&frag, &fg).unwrap(), convolve(&frag, &gs, &fs).unwrap());
    }

    #[test]
    fn norm_inequalities(inst in finite_model(), s in structure(), a in raw_values(), b in raw_values()) {
        let frag = fragment(&inst, s);
        let (f, g) = (element(&frag, &a), element(&frag, &b));
        let (nf, ng) = (i_norm(&frag, &f).unwrap(), i_norm(&frag, &g).unwrap());
        let nfg = i_norm(&frag, &convolve(&frag, &f, &g).unwrap()).unwrap();
        prop_assert!(nfg.value <= nf.value * ng.value * (1.0 + 1e-9) + 1e-12);
        let r = reduced_norm(&frag, &f).unwrap();
        prop_assert!(r.value <= nf.value + 1e-9 * nf.value.max(1.0));
        let ff = convolve(&frag, &involution(&frag, &f).unwrap(), &f).unwrap();
        let r2 = reduced_norm(&frag, &ff).unwrap().value;
        prop_assert!((r2 - r.value * r.value).abs() <= 1e-9 * (r.value * r.value).max(1e-300));
    }

    #[test]
    fn restriction_is_a_star_homomorphism(inst in finite_model(), a in raw_values(), b in raw_values()) {
        let frag = fragment(&inst, Structure::G);
        let (f, g) = (element(&frag, &a), element(&frag, &b));
        let (alg, pf) = restrict_to_h(&frag, &f).unwrap();
        let (_, pg) = restrict_to_h(&frag, &g).unwrap();
        let (_, pfg) = restrict_to_h(&frag, &convolve(&frag, &f, &g).unwrap()).unwrap();
        prop_assert_eq!(pfg, alg.convolve(&pf, &pg));
        let (_, pfs) = restrict_to_h(&frag, &involution(&frag, &f).unwrap()).unwrap();
        prop_assert_eq!(pfs, alg.involution(&pf));
    }

    #[test]
    fn modular_function_is_multiplicative(inst in finite_model(), s in structure(), w in prop::collection::vec(1i64..20, 1..16)) {
        let frag = fragment(&inst, s);
        let weights = frag.units().iter().enumerate().map(|(i, &u)| (frag.element(u).clone(), int(w[i % w.len()])));
        let mu = UnitMeasure::from_weights(&frag, weights).unwrap();
        let d = modular_function(&frag, &mu).unwrap();
        for x in 0..frag.len() {
            if frag.range(x) == frag.source(x) {
                prop_assert!(d[x].is_one());
            }
            for &y in frag.composable_with(x) {
                if let Composite::Inside(xy) = frag.compose(x, y) {
                    prop_assert_eq!(&d[xy], &(&d[x] * &d[y]));
                }
            }
        }
    }
}

fn small_rational() -> impl Strategy<Value = (i64, i64)> {
    (-40i64..=40, 1i64..=12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// `(h ▷ k)(h ◁ k) = hk` on random rational points of the ax+b model.
    #[test]
    fn axb_factorization(a in (1i64..=40, 1i64..=12), b in small_rational(), x in small_rational()) {
        let inst = axb();
        let (h, k) = (axb_h(frac(a.0, a.1), frac(b.0, b.1)), axb_k(frac(x.0, x.1)));
        let g = inst.pair.ambient();
        match inst.pair.actions(&h, &k).unwrap() {
            Some(act) => prop_assert_eq!(g.op(&act.right, &act.left), g.op(&h, &k)),
            // outside Ω exactly when a + bx = 0
            None => prop_assert_eq!(frac(a.0, a.1) + frac(b.0, b.1) * frac(x.0, x.1), int(0)),
        }
    }

    /// γ maps Ω into Ω and squares to the identity on ax+b points.
    #[test]
    fn axb_gamma_involution(a in (1i64..=40, 1i64..=12), b in small_rational(), x in small_rational()) {
        let inst = axb();
        let (h, k) = (axb_h(frac(a.0, a.1), frac(b.0, b.1)), axb_k(frac(x.0, x.1)));
        prop_assume!(inst.pair.in_omega(&h, &k).unwrap());
        let p = GroupoidElement::new(h, k);
        let once = gamma(&inst.pair, &p).unwrap();
        prop_assert_eq!(gamma(&inst.pair, &once).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Sanov: `(A, B_x) ∈ Ω ⟺ n₂x = 0`, and then `A ▷ B_x = B_{(4n₄+1)x}`.
    #[test]
    fn sanov_domain_and_action(i in 0usize..53, x in -9i64..=9) {
        let inst = sanov(3, 9).unwrap();
        let h = inst.pair.h().elements()[i].clone();
        let k = dgl_core::models::sanov_k(x);
        let (claimed_in, actual_in) = ((inst.claims.domain)(&h, &k), inst.pair.in_omega(&h, &k).unwrap());
        prop_assert_eq!(claimed_in, actual_in);
        if actual_in {
            prop_assert_eq!((inst.claims.right)(&h, &k), Some(inst.pair.act_right(&h, &k).unwrap()));
        }
    }
}
