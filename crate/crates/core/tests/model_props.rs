use std::collections::{BTreeMap, BTreeSet};

use ordlab::corpus;
use ordlab::model::{
    self, eval_term, gamma_diagram, gen, is_isomorphism, equality_pair, restrict_isomorphism,
    satisfies_qf, sigma1_check_formulas, sigma1_check_iso, sigma1_counterexample, Assignment,
    Atomic, Direction, Id, Structure, Term,
};
use proptest::prelude::*;
use rand::Rng;

fn vars() -> Vec<String> {
    ["u", "v", "w"].iter().map(|s| s.to_string()).collect()
}

fn relabelled(seed: u64) -> (Structure, Structure, BTreeMap<Id, Id>, rand_chacha::ChaCha8Rng) {
    let mut rng = corpus::rng(seed);
    let eq = rng.gen_bool(0.5);
    let sig = gen::signature(&mut rng, eq);
    let size = rng.gen_range(1..=4);
    let extra = rng.gen_range(0..=2);
    let s1 = gen::structure(&mut rng, &sig, size, extra);
    let (s2, h) = gen::relabel(&mut rng, &s1, 50);
    (s1, s2, h, rng)
}

fn image(a: &Assignment, h: &BTreeMap<Id, Id>) -> Assignment {
    a.iter().map(|(k, v)| (k.clone(), h[v])).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn isomorphisms_transfer_quantifier_free_truth(seed in any::<u64>(), size in 1usize..10) {
        let (s1, s2, h, mut rng) = relabelled(seed);
        prop_assert!(is_isomorphism(&h, &s1, &s2));
        let f = gen::qf_formula(&mut rng, &s1, &vars(), size);
        let a = gen::assignment(&mut rng, &s1, &vars());
        prop_assert_eq!(satisfies_qf(&s1, &f, &a), satisfies_qf(&s2, &f, &image(&a, &h)), "{}", f);
    }

    #[test]
    fn terms_commute_with_isomorphisms(seed in any::<u64>()) {
        let (s1, s2, h, mut rng) = relabelled(seed);
        let a = gen::assignment(&mut rng, &s1, &vars());
        let ha = image(&a, &h);
        for f in &s1.signature.functions {
            for args in model::tuples(&s1.carrier_vec(), f.arity) {
                let t = Term::App(f.name.clone(), args.iter().map(|x| Atomic::Param(*x)).collect());
                let ht = Term::App(f.name.clone(), args.iter().map(|x| Atomic::Param(h[x])).collect());
                let (v1, in1) = eval_term(&s1, &t, &a).unwrap();
                let (v2, in2) = eval_term(&s2, &ht, &ha).unwrap();
                prop_assert_eq!(in1, in2);
                if in1 {
                    prop_assert_eq!(h[&v1], v2);
                }
            }
        }
        for v in vars() {
            let (x, inside) = eval_term(&s2, &Term::var(&v), &ha).unwrap();
            prop_assert!(inside);
            prop_assert_eq!(x, h[&a[&v]]);
        }
    }

    #[test]
    fn restrictions_stay_isomorphisms(seed in any::<u64>(), mask in any::<u8>()) {
        let (s1, s2, h, _) = relabelled(seed);
        let subset: BTreeSet<Id> = s1.carrier.iter().copied().filter(|x| mask >> (x % 8) & 1 == 1).collect();
        let r = restrict_isomorphism(&h, &subset, &s1, &s2).unwrap();
        prop_assert_eq!(r.len(), subset.len());
    }

    #[test]
    fn iso_and_formula_oracles_agree(seed in any::<u64>()) {
        let mut rng = corpus::rng(seed);
        let (a, b) = gen::substructure_pair(&mut rng, true, 4);
        let (a, b) = if rng.gen_bool(0.1) { (b.clone(), b) } else { (a, b) };
        let bound = b.carrier.len() * b.signature.max_arity() * 4;
        let iso = sigma1_check_iso(&a, &b).unwrap();
        prop_assert_eq!(iso, sigma1_check_formulas(&a, &b, bound).unwrap(), "A={} B={}", a.to_json(), b.to_json());
        if a == b {
            prop_assert!(iso);
        }
    }

    #[test]
    fn iso_implies_agreement_without_equality(seed in any::<u64>()) {
        let mut rng = corpus::rng(seed);
        let (a, b) = gen::substructure_pair(&mut rng, false, 4);
        if sigma1_check_iso(&a, &b).unwrap() {
            prop_assert!(sigma1_check_formulas(&a, &b, 8).unwrap());
        }
    }

    #[test]
    fn counterexamples_separate(seed in any::<u64>()) {
        let mut rng = corpus::rng(seed);
        let eq = rng.gen_bool(0.5);
        let (a, b) = gen::substructure_pair(&mut rng, eq, 4);
        if let Some(c) = sigma1_counterexample(&a, &b, 8).unwrap() {
            let empty = Assignment::new();
            let in_a = model::satisfies(&a, &c.formula, &empty).unwrap();
            let in_b = model::satisfies(&b, &c.formula, &empty).unwrap();
            prop_assert_eq!(c.direction == Direction::TrueInBOnly, in_b && !in_a);
            prop_assert!(in_a != in_b);
        }
    }

    #[test]
    fn structures_satisfy_their_diagrams(seed in any::<u64>(), mask in any::<u8>()) {
        let mut rng = corpus::rng(seed);
        let eq = rng.gen_bool(0.5);
        let (a, b) = gen::substructure_pair(&mut rng, eq, 4);
        let y: BTreeSet<Id> = b.carrier.difference(&a.carrier).copied().filter(|x| mask >> (x % 8) & 1 == 1).collect();
        let d = gamma_diagram(&a.carrier, &y, &b);
        prop_assert!(satisfies_qf(&b, &d, &Assignment::new()).unwrap());
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let (s1, s2, _, _) = relabelled(seed);
        for s in [s1, s2] {
            prop_assert_eq!(Structure::from_json(&s.to_json()).unwrap(), s);
        }
    }
}

#[test]
fn equality_changes_the_verdict() {
    let (a, b) = equality_pair(true);
    assert!(!sigma1_check_iso(&a, &b).unwrap());
    let c = sigma1_counterexample(&a, &b, 16).unwrap().unwrap();
    assert_eq!(c.direction, Direction::TrueInBOnly);
    assert_eq!(c.formula.to_string(), "exists x0. (x0 != #0)");

    let (a, b) = equality_pair(false);
    assert!(!sigma1_check_iso(&a, &b).unwrap());
    assert!(sigma1_check_formulas(&a, &b, 6).unwrap());
    assert!(sigma1_check_iso(&b, &b).unwrap());
}

#[test]
fn diagram_detects_a_changed_fact() {
    let (_, b) = equality_pair(true);
    let d = gamma_diagram(&[0].into(), &[1].into(), &b);
    assert_eq!(d.size(), 5);
    let mut c = b.clone();
    c.relations.get_mut("~").unwrap().remove(&vec![0, 1]);
    assert!(satisfies_qf(&b, &d, &Assignment::new()).unwrap());
    assert!(!satisfies_qf(&c, &d, &Assignment::new()).unwrap());
}

#[test]
fn restriction_of_a_non_isomorphism_fails() {
    let (a, b) = equality_pair(true);
    let collapse: BTreeMap<Id, Id> = [(0, 0), (1, 0)].into();
    assert!(restrict_isomorphism(&collapse, &[0, 1].into(), &b, &a).is_err());
    assert!(restrict_isomorphism(&collapse, &[0].into(), &b, &a).is_ok());
    assert!(restrict_isomorphism(&collapse, &[2].into(), &b, &a).is_err());
}
