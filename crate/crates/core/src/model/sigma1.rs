//! Deciding `A <_{Sigma_1} B` for finite structures, once through finite
//! isomorphisms and once through existential formulas.

use std::collections::{BTreeMap, BTreeSet};

use super::formula::{Atomic, Formula, Term};
use super::{is_isomorphism, tuples, Id, ModelError, Structure};

const MAX_ISO_CARRIER: usize = 10;
const MAX_LITERALS: usize = 1 << 16;
const COVER_NODES: usize = 200_000;

fn subsets(xs: &[Id]) -> Vec<BTreeSet<Id>> {
    (0u32..(1 << xs.len()))
        .map(|mask| {
            xs.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, x)| *x)
                .collect()
        })
        .collect()
}

// ordered selections of k distinct elements
fn injections(pool: &[Id], k: usize) -> Vec<Vec<Id>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, x) in pool.iter().enumerate() {
        let mut rest = pool.to_vec();
        rest.remove(i);
        for mut tail in injections(&rest, k - 1) {
            tail.insert(0, *x);
            out.push(tail);
        }
    }
    out
}

/// For all `X` inside `A` and `Y` inside `B \ A`, looks for `Y'` inside `A` and an
/// isomorphism `X + Y -> X + Y'` fixing `X`.
pub fn sigma1_check_iso(a: &Structure, b: &Structure) -> Result<bool, ModelError> {
    a.check_substructure_of(b)?;
    if b.carrier.len() > MAX_ISO_CARRIER {
        return Err(ModelError::TooLarge(format!(
            "carrier above {MAX_ISO_CARRIER} elements"
        )));
    }
    let av = a.carrier_vec();
    let rest: Vec<Id> = b.carrier.difference(&a.carrier).copied().collect();
    for x in subsets(&av) {
        let free: Vec<Id> = av.iter().filter(|e| !x.contains(e)).copied().collect();
        for y in subsets(&rest) {
            let yv: Vec<Id> = y.iter().copied().collect();
            let src_set: BTreeSet<Id> = x.union(&y).copied().collect();
            let src = b.induced(&src_set);
            let found = injections(&free, yv.len()).into_iter().any(|img| {
                let mut h: BTreeMap<Id, Id> = x.iter().map(|e| (*e, *e)).collect();
                h.extend(yv.iter().copied().zip(img.iter().copied()));
                let dst_set: BTreeSet<Id> = h.values().copied().collect();
                is_isomorphism(&h, &src, &a.induced(&dst_set))
            });
            if !found {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Which side satisfies the separating sentence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    TrueInBOnly,
    TrueInAOnly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    /// `exists x. C(x, params)` with `C` a conjunction of literals.
    pub formula: Formula,
    pub direction: Direction,
}

/// Whether `A` and `B` agree on every existential sentence with parameters
/// from `A` whose matrix has at most `bound` literal occurrences.
pub fn sigma1_check_formulas(a: &Structure, b: &Structure, bound: usize) -> Result<bool, ModelError> {
    Ok(sigma1_counterexample(a, b, bound)?.is_none())
}

/// Searches existential conjunctions of at most `bound` literals.
///
/// Putting a matrix in disjunctive normal form does not increase the number
/// of literal occurrences in any disjunct, and the existential block
/// distributes over disjunction, so conjunctions suffice. A witness tuple has
/// at most `|B|` distinct entries, so at most `|B|` variables are needed.
pub fn sigma1_counterexample(
    a: &Structure,
    b: &Structure,
    bound: usize,
) -> Result<Option<Counterexample>, ModelError> {
    a.check_substructure_of(b)?;
    for n in 0..=b.carrier.len() {
        if let Some(c) = search_arity(a, b, n, bound)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Bits {
        let mut b = Bits::new(n);
        for i in 0..n {
            b.set(i);
        }
        b
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn complement(&self, n: usize) -> Bits {
        let mut out = Bits::new(n);
        for i in 0..n {
            if !self.get(i) {
                out.set(i);
            }
        }
        out
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }

    fn minus(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(x, y)| x & !y).collect())
    }

    fn count_and(&self, other: &Bits) -> u32 {
        self.0.iter().zip(&other.0).map(|(x, y)| (x & y).count_ones()).sum()
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(x, y)| x & !y == 0)
    }
}

fn literal_atoms(s: &Structure, n: usize) -> Vec<Formula> {
    let sig = &s.signature;
    let mut atomics: Vec<Atomic> = (0..n).map(|i| Atomic::Var(format!("x{i}"))).collect();
    atomics.extend(s.constants.keys().map(|c| Atomic::Const(c.clone())));
    atomics.extend(s.carrier.iter().map(|x| Atomic::Param(*x)));
    let mut terms: Vec<Term> = atomics.iter().cloned().map(Term::Atomic).collect();
    for f in &sig.functions {
        for args in index_tuples(atomics.len(), f.arity) {
            terms.push(Term::App(
                f.name.clone(),
                args.iter().map(|i| atomics[*i].clone()).collect(),
            ));
        }
    }
    let mut out = Vec::new();
    for r in &sig.relations {
        for args in index_tuples(terms.len(), r.arity) {
            out.push(Formula::Rel(
                r.name.clone(),
                args.iter().map(|i| terms[*i].clone()).collect(),
            ));
        }
    }
    if sig.equality {
        for (i, a) in atomics.iter().enumerate() {
            for t in terms.iter().skip(i + 1) {
                out.push(Formula::Eq(Term::Atomic(a.clone()), t.clone()));
            }
        }
    }
    out
}

fn index_tuples(k: usize, n: usize) -> Vec<Vec<usize>> {
    let idx: Vec<Id> = (0..k as Id).collect();
    tuples(&idx, n)
        .into_iter()
        .map(|t| t.into_iter().map(|x| x as usize).collect())
        .collect()
}

fn truth_table(s: &Structure, atom: &Formula, rows: &[Vec<Id>]) -> Result<Bits, ModelError> {
    let mut bits = Bits::new(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let asg = row
            .iter()
            .enumerate()
            .map(|(k, v)| (format!("x{k}"), *v))
            .collect();
        if super::satisfies_qf(s, atom, &asg)? {
            bits.set(i);
        }
    }
    Ok(bits)
}

fn search_arity(
    a: &Structure,
    b: &Structure,
    n: usize,
    bound: usize,
) -> Result<Option<Counterexample>, ModelError> {
    let atoms = literal_atoms(a, n);
    if 2 * atoms.len() > MAX_LITERALS {
        return Err(ModelError::TooLarge(format!("{} literals", 2 * atoms.len())));
    }
    let rows_a = tuples(&a.carrier_vec(), n);
    let rows_b = tuples(&b.carrier_vec(), n);
    let mut lits = Vec::with_capacity(2 * atoms.len());
    let mut ta = Vec::with_capacity(2 * atoms.len());
    let mut tb = Vec::with_capacity(2 * atoms.len());
    for atom in atoms {
        let xa = truth_table(a, &atom, &rows_a)?;
        let xb = truth_table(b, &atom, &rows_b)?;
        ta.push(xa.complement(rows_a.len()));
        tb.push(xb.complement(rows_b.len()));
        ta.push(xa);
        tb.push(xb);
        lits.push(Formula::negate(atom.clone()));
        lits.push(atom);
    }
    let vars: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let build = |chosen: Vec<usize>, direction| Counterexample {
        formula: Formula::exists(&vars, Formula::And(chosen.into_iter().map(|i| lits[i].clone()).collect())),
        direction,
    };
    for (truth_here, truth_there, rows_here, rows_there, dir) in [
        (&tb, &ta, &rows_b, &rows_a, Direction::TrueInBOnly),
        (&ta, &tb, &rows_a, &rows_b, Direction::TrueInAOnly),
    ] {
        for e in 0..rows_here.len() {
            let kills: Vec<(usize, Bits)> = (0..lits.len())
                .filter(|l| truth_here[*l].get(e))
                .map(|l| (l, truth_there[l].complement(rows_there.len())))
                .collect();
            if let Some(chosen) = min_cover(kills, rows_there.len(), bound)? {
                return Ok(Some(build(chosen, dir)));
            }
        }
    }
    Ok(None)
}

// a set of at most `bound` literals whose kill sets cover every tuple
fn min_cover(
    kills: Vec<(usize, Bits)>,
    universe: usize,
    bound: usize,
) -> Result<Option<Vec<usize>>, ModelError> {
    let all = Bits::full(universe);
    let mut union = Bits::new(universe);
    for (_, k) in &kills {
        for (w, x) in union.0.iter_mut().zip(&k.0) {
            *w |= x;
        }
    }
    if !all.minus(&union).is_empty() {
        return Ok(None);
    }
    let mut sets: Vec<(usize, Bits)> = Vec::new();
    for (l, k) in kills {
        if k.is_empty() || sets.iter().any(|(_, s)| k.subset_of(s)) {
            continue;
        }
        sets.retain(|(_, s)| !s.subset_of(&k));
        sets.push((l, k));
    }
    let mut nodes = 0;
    let mut chosen = Vec::new();
    if cover_dfs(&sets, all, bound, &mut chosen, &mut nodes)? {
        Ok(Some(chosen))
    } else {
        Ok(None)
    }
}

fn cover_dfs(
    sets: &[(usize, Bits)],
    open: Bits,
    left: usize,
    chosen: &mut Vec<usize>,
    nodes: &mut usize,
) -> Result<bool, ModelError> {
    let Some(u) = open.first() else {
        return Ok(true);
    };
    if left == 0 {
        return Ok(false);
    }
    *nodes += 1;
    if *nodes > COVER_NODES {
        return Err(ModelError::TooLarge("literal cover search".into()));
    }
    let best = sets.iter().map(|(_, s)| s.count_and(&open)).max().unwrap_or(0);
    let need = open.0.iter().map(|w| w.count_ones()).sum::<u32>().div_ceil(best.max(1));
    if need as usize > left {
        return Ok(false);
    }
    let mut options: Vec<&(usize, Bits)> = sets.iter().filter(|(_, s)| s.get(u)).collect();
    options.sort_by_key(|(_, s)| std::cmp::Reverse(s.count_and(&open)));
    for (l, s) in options {
        chosen.push(*l);
        if cover_dfs(sets, open.minus(s), left - 1, chosen, nodes)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

/// The diagram of `X + Y` in `b` with the elements as parameters: relation
/// facts, and with equality also function graph facts and distinctness.
pub fn gamma_diagram(x: &BTreeSet<Id>, y: &BTreeSet<Id>, b: &Structure) -> Formula {
    let q: Vec<Id> = x.union(y).copied().collect();
    let sig = &b.signature;
    let mut lits = Vec::new();
    for r in &sig.relations {
        for t in tuples(&q, r.arity) {
            let holds = b.relations.get(&r.name).is_some_and(|rows| rows.contains(&t));
            let atom = Formula::Rel(r.name.clone(), t.iter().map(|e| Term::param(*e)).collect());
            lits.push(if holds { atom } else { Formula::negate(atom) });
        }
    }
    for f in sig.functions.iter().filter(|_| sig.equality) {
        for t in tuples(&q, f.arity) {
            let v = b.functions[&f.name][&t];
            let app = Term::App(f.name.clone(), t.iter().map(|e| Atomic::Param(*e)).collect());
            for p in &q {
                let atom = Formula::Eq(app.clone(), Term::param(*p));
                lits.push(if *p == v { atom } else { Formula::negate(atom) });
            }
        }
    }
    if sig.equality {
        for (i, p) in q.iter().enumerate() {
            for r in &q[i + 1..] {
                lits.push(Formula::negate(Formula::Eq(Term::param(*p), Term::param(*r))));
            }
        }
    }
    Formula::And(lits)
}

/// Restricts an isomorphism to `subset` and re-verifies it on the induced
/// substructures.
pub fn restrict_isomorphism(
    h: &BTreeMap<Id, Id>,
    subset: &BTreeSet<Id>,
    s1: &Structure,
    s2: &Structure,
) -> Result<BTreeMap<Id, Id>, ModelError> {
    let mut r = BTreeMap::new();
    for x in subset {
        let y = h.get(x).ok_or(ModelError::Restriction)?;
        r.insert(*x, *y);
    }
    let image: BTreeSet<Id> = r.values().copied().collect();
    if is_isomorphism(&r, &s1.induced(subset), &s2.induced(&image)) {
        Ok(r)
    } else {
        Err(ModelError::Restriction)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{equality_pair, satisfies};
    use super::*;

    #[test]
    fn equality_pair_verdicts() {
        let (a, b) = equality_pair(true);
        assert!(!sigma1_check_iso(&a, &b).unwrap());
        let c = sigma1_counterexample(&a, &b, 6).unwrap().unwrap();
        assert_eq!(c.direction, Direction::TrueInBOnly);
        assert_eq!(c.formula.to_string(), "exists x0. (x0 != #0)");
        assert!(satisfies(&b, &c.formula, &Default::default()).unwrap());
        assert!(!satisfies(&a, &c.formula, &Default::default()).unwrap());

        let (a, b) = equality_pair(false);
        assert!(!sigma1_check_iso(&a, &b).unwrap());
        assert!(sigma1_check_formulas(&a, &b, 6).unwrap());
        assert!(sigma1_check_iso(&b, &b).unwrap());
        assert!(sigma1_check_formulas(&b, &b, 6).unwrap());
    }

    #[test]
    fn diagrams() {
        let (a, b) = equality_pair(true);
        let g = gamma_diagram(&[0].into(), &BTreeSet::new(), &a);
        assert_eq!(g.to_string(), "(~(#0,#0))");
        assert_eq!(gamma_diagram(&BTreeSet::new(), &BTreeSet::new(), &a), Formula::And(vec![]));
        let g = gamma_diagram(&[0].into(), &[1].into(), &b).to_string();
        for part in ["~(#0,#1)", "~(#1,#0)", "~(#1,#1)", "#0 != #1"] {
            assert!(g.contains(part), "{g}");
        }
    }

    #[test]
    fn restrictions() {
        let (_, b) = equality_pair(true);
        let swap: BTreeMap<Id, Id> = [(0, 1), (1, 0)].into();
        let r = restrict_isomorphism(&swap, &[1].into(), &b, &b).unwrap();
        assert_eq!(r, [(1, 0)].into());
        assert!(restrict_isomorphism(&swap, &BTreeSet::new(), &b, &b).unwrap().is_empty());
    }
}
