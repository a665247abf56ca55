//! Random structures and formulas for property tests.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use super::formula::{Assignment, Atomic, Formula, Term};
use super::{tuples, Id, Signature, Structure, SymbolSpec};

pub fn signature<R: Rng>(rng: &mut R, equality: bool) -> Signature {
    let mut relations = vec![SymbolSpec {
        name: "R".into(),
        arity: rng.gen_range(1..=2),
    }];
    if rng.gen_bool(0.5) {
        relations.push(SymbolSpec {
            name: "P".into(),
            arity: 1,
        });
    }
    let functions = if rng.gen_bool(0.6) {
        vec![SymbolSpec {
            name: "f".into(),
            arity: 1,
        }]
    } else {
        Vec::new()
    };
    let constants = if rng.gen_bool(0.4) {
        vec!["c".to_string()]
    } else {
        Vec::new()
    };
    Signature {
        relations,
        functions,
        constants,
        equality,
    }
}

/// A structure on carrier `0..size` with up to `extra` ids outside it.
pub fn structure<R: Rng>(rng: &mut R, sig: &Signature, size: usize, extra: usize) -> Structure {
    let carrier: Vec<Id> = (0..size as Id).collect();
    let universe: Vec<Id> = (0..(size + extra) as Id).collect();
    let mut relations = BTreeMap::new();
    for r in &sig.relations {
        let rows: BTreeSet<Vec<Id>> = tuples(&carrier, r.arity)
            .into_iter()
            .filter(|_| rng.gen_bool(0.4))
            .collect();
        relations.insert(r.name.clone(), rows);
    }
    let mut functions = BTreeMap::new();
    for f in &sig.functions {
        let g = tuples(&carrier, f.arity)
            .into_iter()
            .map(|t| (t, *universe.choose(rng).unwrap()))
            .collect();
        functions.insert(f.name.clone(), g);
    }
    let mut constants = BTreeMap::new();
    if size > 0 {
        for c in &sig.constants {
            constants.insert(c.clone(), rng.gen_range(0..size as Id));
        }
    }
    Structure {
        signature: sig.clone(),
        carrier: carrier.into_iter().collect(),
        universe: universe.into_iter().collect(),
        relations,
        functions,
        constants,
    }
}

/// `(A, B)` with `A` the substructure of `B` induced on a random subset
/// that keeps the constants.
pub fn substructure_pair<R: Rng>(
    rng: &mut R,
    equality: bool,
    max_carrier: usize,
) -> (Structure, Structure) {
    let sig = signature(rng, equality);
    let size = rng.gen_range(1..=max_carrier);
    let extra = rng.gen_range(0..=2);
    let b = structure(rng, &sig, size, extra);
    let mut subset: BTreeSet<Id> = b.carrier.iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
    subset.extend(b.constants.values().copied());
    if subset.is_empty() {
        subset.insert(0);
    }
    (b.induced(&subset), b)
}

/// Renames every universe element through a random injection into `offset..`.
pub fn relabel<R: Rng>(rng: &mut R, s: &Structure, offset: Id) -> (Structure, BTreeMap<Id, Id>) {
    let ids: Vec<Id> = s.universe.iter().copied().collect();
    let mut targets: Vec<Id> = (0..ids.len() as Id).map(|i| offset + 2 * i).collect();
    targets.shuffle(rng);
    let h: BTreeMap<Id, Id> = ids.iter().copied().zip(targets).collect();
    let map = |t: &Vec<Id>| t.iter().map(|x| h[x]).collect::<Vec<_>>();
    let out = Structure {
        signature: s.signature.clone(),
        carrier: s.carrier.iter().map(|x| h[x]).collect(),
        universe: s.universe.iter().map(|x| h[x]).collect(),
        relations: s
            .relations
            .iter()
            .map(|(k, rows)| (k.clone(), rows.iter().map(map).collect()))
            .collect(),
        functions: s
            .functions
            .iter()
            .map(|(k, g)| (k.clone(), g.iter().map(|(a, v)| (map(a), h[v])).collect()))
            .collect(),
        constants: s.constants.iter().map(|(k, v)| (k.clone(), h[v])).collect(),
    };
    let on_carrier = s.carrier.iter().map(|x| (*x, h[x])).collect();
    (out, on_carrier)
}

fn atomic<R: Rng>(rng: &mut R, vars: &[String], consts: &[String]) -> Atomic {
    if !consts.is_empty() && rng.gen_bool(0.2) {
        return Atomic::Const(consts.choose(rng).unwrap().clone());
    }
    Atomic::Var(vars.choose(rng).unwrap().clone())
}

fn term<R: Rng>(rng: &mut R, sig: &Signature, vars: &[String], consts: &[String]) -> Term {
    if !sig.functions.is_empty() && rng.gen_bool(0.4) {
        let f = sig.functions.choose(rng).unwrap();
        let args = (0..f.arity).map(|_| atomic(rng, vars, consts)).collect();
        return Term::App(f.name.clone(), args);
    }
    Term::Atomic(atomic(rng, vars, consts))
}

/// A random quantifier-free formula with at most `size` atoms over `vars`.
///
/// Constants are used only when `s` interprets them.
pub fn qf_formula<R: Rng>(rng: &mut R, s: &Structure, vars: &[String], size: usize) -> Formula {
    let sig = &s.signature;
    let consts: Vec<String> = s.constants.keys().cloned().collect();
    if size <= 1 || rng.gen_bool(0.3) {
        if sig.equality && rng.gen_bool(0.3) {
            let a = Term::Atomic(atomic(rng, vars, &consts));
            return Formula::Eq(a, term(rng, sig, vars, &consts));
        }
        let r = sig.relations.choose(rng).unwrap();
        let args = (0..r.arity).map(|_| term(rng, sig, vars, &consts)).collect();
        return Formula::Rel(r.name.clone(), args);
    }
    let left = rng.gen_range(1..size);
    let a = qf_formula(rng, s, vars, left);
    let b = qf_formula(rng, s, vars, size - left);
    match rng.gen_range(0..4) {
        0 => Formula::And(vec![a, b]),
        1 => Formula::Or(vec![a, b]),
        2 => Formula::Implies(Box::new(a), Box::new(b)),
        _ => Formula::negate(Formula::And(vec![a, b])),
    }
}

pub fn assignment<R: Rng>(rng: &mut R, s: &Structure, vars: &[String]) -> Assignment {
    let carrier = s.carrier_vec();
    vars.iter()
        .map(|v| (v.clone(), *carrier.choose(rng).unwrap()))
        .collect()
}
