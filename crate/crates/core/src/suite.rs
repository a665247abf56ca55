//! Property suites over seeded corpora.
//!
//! Each suite returns a [`SuiteReport`]. [`Scale::full`] matches the
//! acceptance sizes and [`Scale::reduced`] is what `selftest` runs.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::corpus;
use crate::model::{self, gen};
use crate::ordinal::{Kind, Ordinal};
use crate::patterns::{self, EmbedError, SearchOptions};
use crate::reach::{self, ClassDescriptor, ReachError, SupBelow};

const MAX_REPORTED: usize = 12;

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub checked: usize,
    pub failed: usize,
    /// Embedding searches that ran out of budget.
    pub inconclusive: usize,
    pub failures: Vec<String>,
    pub millis: u128,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn fail(&mut self, msg: String) {
        self.failed += 1;
        if self.failures.len() < MAX_REPORTED {
            self.failures.push(msg);
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Scale {
    pub corpus: usize,
    pub hierarchy_pairs: usize,
    pub probes: usize,
    pub embed_pairs: usize,
    pub embed_sets: usize,
    pub refute_pairs: usize,
    pub club_probes: usize,
    pub reach_principals: usize,
    pub transfer_draws: usize,
    pub sigma_instances: usize,
    pub search: SearchOptions,
}

impl Scale {
    pub fn full() -> Self {
        Scale {
            corpus: 500,
            hierarchy_pairs: 300,
            probes: 50,
            embed_pairs: 200,
            embed_sets: 20,
            refute_pairs: 200,
            club_probes: 1000,
            reach_principals: 100,
            transfer_draws: 1000,
            sigma_instances: 200,
            search: SearchOptions::default(),
        }
    }

    pub fn reduced() -> Self {
        Scale {
            corpus: 120,
            hierarchy_pairs: 40,
            probes: 20,
            embed_pairs: 30,
            embed_sets: 5,
            refute_pairs: 40,
            club_probes: 200,
            reach_principals: 30,
            transfer_draws: 200,
            sigma_instances: 40,
            search: SearchOptions::default(),
        }
    }
}

fn timed(name: &str, f: impl FnOnce(&mut SuiteReport)) -> SuiteReport {
    let start = Instant::now();
    let mut r = SuiteReport::new(name);
    f(&mut r);
    r.millis = start.elapsed().as_millis();
    r
}

/// Offsets `s < alpha` worth probing: small values, fundamental sequence
/// points, critical points of the Veblen indices of `alpha`, corpus members.
pub fn offsets<R: Rng>(rng: &mut R, alpha: &Ordinal, pool: &[Ordinal]) -> Vec<Ordinal> {
    let mut out: Vec<Ordinal> = [0, 1, 2, 3, 5].into_iter().map(Ordinal::nat).collect();
    out.push(Ordinal::omega());
    out.push(Ordinal::omega().succ());
    if alpha.is_limit() {
        for k in [0, 1, 2, 4] {
            if let Ok(x) = alpha.fund_seq(k) {
                out.push(x);
            }
        }
    }
    if let Some(level) = alpha.veblen_level().and_then(Ordinal::as_nat) {
        for m in 0..=level {
            if let Some(mu) = Ordinal::phi_inverse(&Ordinal::nat(m), alpha) {
                if let Ok(nu) = mu.nu() {
                    if let Kind::Successor(p) = nu.classify() {
                        out.push(p);
                    }
                    out.push(nu.succ());
                    out.push(nu);
                }
            }
        }
    }
    for _ in 0..3 {
        if let Some(x) = corpus::pick_below(rng, pool, alpha) {
            out.push(x);
        }
    }
    out.retain(|x| x < alpha);
    out.sort();
    out.dedup();
    out
}

/// A random `t = alpha*n + s` in `[alpha, alpha*w)`.
pub fn sample_t<R: Rng>(rng: &mut R, alpha: &Ordinal, pool: &[Ordinal]) -> Ordinal {
    let n = rng.gen_range(1..=4);
    let s = offsets(rng, alpha, pool).choose(rng).cloned().unwrap_or_default();
    alpha.nat_mul(n).add(&s)
}

/// 1. `alpha <=_1 alpha+1` exactly for principals in `Lim P`.
pub fn characterization(seed: u64, scale: &Scale) -> SuiteReport {
    timed("characterization", |r| {
        for a in corpus::ordinals(seed, scale.corpus) {
            if !a.is_additive_principal() {
                continue;
            }
            match reach::le1_interval(&a, &a.succ()) {
                Ok(ans) => r.check(ans.verdict == a.is_lim_p(), || {
                    format!("{a}: engine {} vs Lim P {}", ans.verdict, a.is_lim_p())
                }),
                Err(e) => r.fail(format!("{a}: {e}")),
            }
        }
    })
}

fn probes<R: Rng>(
    rng: &mut R,
    alpha: &Ordinal,
    desc: &ClassDescriptor,
    pool: &[Ordinal],
    count: usize,
) -> Vec<Ordinal> {
    let mut cands = vec![alpha.clone()];
    cands.extend(offsets(rng, alpha, pool));
    let classes = [
        desc.clone(),
        ClassDescriptor::principals(),
        ClassDescriptor::lim_principals(),
        ClassDescriptor::new(desc.level.clone(), Ordinal::zero(), Ordinal::zero()),
        ClassDescriptor::new(desc.level.clone(), desc.div_exp.succ(), desc.lower_bound.clone()),
    ];
    for _ in 0..count {
        let from = corpus::pick_below(rng, pool, alpha).unwrap_or_default();
        let c = classes.choose(rng).unwrap();
        cands.push(c.next_above(&from));
    }
    cands.retain(|x| x <= alpha);
    (0..count).map(|_| cands.choose(rng).unwrap().clone()).collect()
}

/// 2. Closed-form descriptors agree with one unfolding of the recursion.
pub fn hierarchy(seed: u64, scale: &Scale) -> SuiteReport {
    timed("hierarchy", |r| {
        let mut rng = corpus::rng(seed ^ 2);
        let pool = corpus::ordinals(seed, scale.corpus);
        let alphas = corpus::principals(seed, scale.corpus / 2);
        for _ in 0..scale.hierarchy_pairs {
            let a = alphas.choose(&mut rng).unwrap();
            let t = sample_t(&mut rng, a, &pool);
            let (desc, expr) = match (reach::descriptor_for(a, &t), reach::unfold_once(a, &t)) {
                (Ok(d), Ok(e)) => (d, e),
                (Err(e), _) | (_, Err(e)) => {
                    r.fail(format!("({a}, {t}): {e}"));
                    continue;
                }
            };
            for g in probes(&mut rng, a, &desc, &pool, scale.probes) {
                let want = g <= *a && desc.member(&g);
                match expr.member(&g) {
                    Ok(got) => r.check(got == want, || {
                        format!("({a}, {t}) at {g}: {desc} says {want}, {expr} says {got}")
                    }),
                    Err(e) => r.fail(format!("({a}, {t}) at {g}: {e}")),
                }
            }
        }
    })
}

/// 3. `alpha <=_1 t+1` exactly when the associated class is cofinal in `alpha`.
pub fn cofinality(seed: u64, scale: &Scale) -> SuiteReport {
    timed("cofinality", |r| {
        let mut rng = corpus::rng(seed ^ 3);
        let pool = corpus::ordinals(seed, scale.corpus);
        for a in corpus::principals(seed, scale.corpus / 2) {
            let mut ts = vec![a.clone()];
            ts.extend((0..4).map(|_| sample_t(&mut rng, &a, &pool)));
            for t in ts {
                let res = reach::le1_interval(&a, &t.succ())
                    .and_then(|ans| Ok((ans.verdict, reach::prop_class(&a, &t)?)));
                match res {
                    Ok((v, class)) => {
                        let cof = class.sup_below(&a) == SupBelow::Cofinal;
                        r.check(v == cof, || format!("({a}, {t}): engine {v}, {class} cofinal {cof}"));
                    }
                    Err(e) => r.fail(format!("({a}, {t}): {e}")),
                }
            }
        }
    })
}

fn positive_targets<R: Rng>(rng: &mut R, a: &Ordinal, pool: &[Ordinal]) -> Vec<Ordinal> {
    let Ok((m, at_cap)) = reach::m_local(a) else {
        return Vec::new();
    };
    let top = if at_cap { a.mul_omega() } else { m.clone() };
    let mut out = vec![top];
    let mut offs = offsets(rng, a, pool);
    offs.push(Ordinal::zero());
    for _ in 0..6 {
        let n = rng.gen_range(1..=4);
        out.push(a.nat_mul(n).add(offs.choose(rng).unwrap()));
    }
    out.retain(|b| b > a && (at_cap || *b <= m));
    out
}

fn sample_z<R: Rng>(rng: &mut R, a: &Ordinal, b: &Ordinal, pool: &[Ordinal]) -> Vec<Ordinal> {
    let offs = offsets(rng, a, pool);
    let size = rng.gen_range(1..=6);
    let mut z = BTreeSet::new();
    let hi = match b.classify() {
        Kind::Successor(p) => p,
        _ => a.clone(),
    };
    z.insert(if rng.gen_bool(0.5) { hi } else { a.clone() });
    while z.len() < size {
        let x = match rng.gen_range(0..4) {
            0 => offs.choose(rng).unwrap().clone(),
            1 => corpus::pick_below(rng, pool, a).unwrap_or_default(),
            _ => a.nat_mul(rng.gen_range(1..=4)).add(offs.choose(rng).unwrap()),
        };
        if x < *b {
            z.insert(x);
        } else if z.len() + 1 >= size {
            break;
        }
    }
    z.into_iter().collect()
}

/// 5. Engine-positive pairs admit verified embeddings of sampled finite sets.
pub fn embedding(seed: u64, scale: &Scale) -> SuiteReport {
    timed("embedding", |r| {
        let mut rng = corpus::rng(seed ^ 5);
        let pool = corpus::ordinals(seed, scale.corpus);
        let alphas: Vec<Ordinal> = corpus::principals(seed, scale.corpus)
            .into_iter()
            .filter(Ordinal::is_lim_p)
            .collect();
        let mut pairs = Vec::new();
        for _ in 0..scale.embed_pairs * 20 {
            if pairs.len() == scale.embed_pairs {
                break;
            }
            let a = alphas.choose(&mut rng).unwrap();
            if let Some(b) = positive_targets(&mut rng, a, &pool).choose(&mut rng) {
                pairs.push((a.clone(), b.clone()));
            }
        }
        for (a, b) in pairs {
            match reach::lt1(&a, &b) {
                Ok(true) => {}
                other => {
                    r.fail(format!("({a}, {b}): expected a positive pair, got {other:?}"));
                    continue;
                }
            }
            for _ in 0..scale.embed_sets {
                let config = (0..50).find_map(|_| {
                    patterns::build_config(&sample_z(&mut rng, &a, &b, &pool)).ok()
                });
                let Some(config) = config else {
                    r.fail(format!("({a}, {b}): no decidable set sampled"));
                    continue;
                };
                match patterns::find_embedding(&config, &a, scale.search) {
                    Ok(emb) => {
                        let ok = patterns::verify_embedding(&config, &a, &emb.images)
                            && restriction_verifies(&mut rng, &config, &a, &emb.images);
                        r.check(ok, || format!("({a}, {b}) Z={:?}: bad embedding", config.elements));
                    }
                    Err(EmbedError::NotFound) => {
                        r.checked += 1;
                        r.inconclusive += 1;
                    }
                    Err(e) => r.fail(format!("({a}, {b}) Z={:?}: {e}", config.elements)),
                }
            }
        }
    })
}

fn restriction_verifies<R: Rng>(
    rng: &mut R,
    config: &patterns::FiniteConfig,
    a: &Ordinal,
    images: &[Ordinal],
) -> bool {
    let keep: Vec<usize> = (0..config.len()).filter(|_| rng.gen_bool(0.6)).collect();
    let sub: Vec<Ordinal> = keep.iter().map(|&i| config.elements[i].clone()).collect();
    let img: Vec<Ordinal> = keep.iter().map(|&i| images[i].clone()).collect();
    match patterns::build_config(&sub) {
        Ok(c) => patterns::verify_embedding(&c, a, &img),
        Err(_) => false,
    }
}

fn negative_target<R: Rng>(rng: &mut R, a: &Ordinal, pool: &[Ordinal]) -> Option<Ordinal> {
    if !a.is_additive_principal() {
        let mut extra = corpus::pick_below(rng, pool, &a.mul_omega()).unwrap_or_default();
        if extra.is_zero() {
            extra = Ordinal::one();
        }
        return Some(a.add(&extra));
    }
    let (m, at_cap) = reach::m_local(a).ok()?;
    if at_cap {
        return None;
    }
    let cap = a.mul_omega();
    let mut offs = offsets(rng, a, pool);
    offs.push(Ordinal::zero());
    let mut cands = vec![cap.clone(), m.succ()];
    for _ in 0..6 {
        let n = rng.gen_range(1..=6);
        cands.push(a.nat_mul(n).add(offs.choose(rng).unwrap()));
    }
    cands.retain(|b| *b > m && *b <= cap);
    cands.choose(rng).cloned()
}

/// 6. Engine-negative pairs come with accepted certificates.
pub fn refutation(seed: u64, scale: &Scale) -> SuiteReport {
    timed("refutation", |r| {
        let mut rng = corpus::rng(seed ^ 6);
        let pool = corpus::ordinals(seed, scale.corpus);
        let mut done = 0;
        for _ in 0..scale.refute_pairs * 20 {
            if done == scale.refute_pairs {
                break;
            }
            let a = pool.choose(&mut rng).unwrap();
            let Some(b) = negative_target(&mut rng, a, &pool) else {
                continue;
            };
            match reach::lt1(a, &b) {
                Ok(false) => {}
                Ok(true) => {
                    r.fail(format!("({a}, {b}): sampled as negative but engine says true"));
                    continue;
                }
                Err(_) => continue,
            }
            done += 1;
            match patterns::refute(a, &b) {
                Ok(Some(cert)) => {
                    let ok = patterns::verify_certificate(&cert, a, &b) == Ok(true);
                    r.check(ok, || format!("({a}, {b}): certificate rejected: {cert:?}"));
                }
                Ok(None) => r.fail(format!("({a}, {b}): no certificate")),
                Err(e) => r.fail(format!("({a}, {b}): {e}")),
            }
        }
        if done < scale.refute_pairs {
            r.fail(format!("only {done} negative pairs sampled"));
        }
    })
}

fn suite_descriptors<R: Rng>(rng: &mut R, seed: u64, scale: &Scale) -> Vec<ClassDescriptor> {
    let pool = corpus::ordinals(seed, scale.corpus);
    let o = |s: &str| s.parse::<Ordinal>().unwrap();
    let mut out = vec![
        ClassDescriptor::principals(),
        ClassDescriptor::lim_principals(),
        ClassDescriptor::new(Ordinal::omega(), Ordinal::zero(), Ordinal::zero()),
        ClassDescriptor::new(o("1"), o("0"), o("0")),
        ClassDescriptor::new(o("1"), o("w"), o("w^w")),
        ClassDescriptor::new(o("2"), o("3"), o("e(0)")),
    ];
    for a in corpus::principals(seed, 40) {
        let t = sample_t(rng, &a, &pool);
        out.extend(reach::descriptor_for(&a, &t));
        out.extend(reach::prop_class(&a, &t));
    }
    out.sort_by_key(|d| d.to_string());
    out.dedup();
    out
}

/// 7. Descriptors are closed and unbounded.
pub fn club(seed: u64, scale: &Scale) -> SuiteReport {
    timed("club", |r| {
        let mut rng = corpus::rng(seed ^ 7);
        let descs = suite_descriptors(&mut rng, seed, scale);
        let pool = corpus::ordinals(seed, scale.corpus);
        for _ in 0..scale.club_probes {
            let d = descs.choose(&mut rng).unwrap();
            let xi = pool.choose(&mut rng).unwrap();
            let g = d.next_above(xi);
            let minimal = match d.sup_below(&g) {
                SupBelow::Empty => true,
                SupBelow::Max(x) => x <= *xi,
                SupBelow::Cofinal => false,
            };
            r.check(g > *xi && d.member(&g) && minimal, || {
                format!("{d}: next_above({xi}) = {g}")
            });
            let lim = ClassDescriptor::new(d.level.clone(), d.div_exp.succ(), d.lower_bound.clone());
            let beta = lim.next_above(xi);
            r.check(d.sup_below(&beta) == SupBelow::Cofinal && d.member(&beta), || {
                format!("{d}: not closed at {beta}")
            });
            let ok = match d.sup_below(xi) {
                SupBelow::Cofinal => d.member(xi) && d.next_above(&xi.fund_seq(3).unwrap_or_default()) < *xi,
                SupBelow::Max(x) => x < *xi && d.member(&x) && d.next_above(&x) >= *xi,
                SupBelow::Empty => d.next_above(&Ordinal::zero()) >= *xi,
            };
            r.check(ok, || format!("{d}: sup_below({xi}) inconsistent"));
        }
    })
}

/// Whether `gamma <=_1 gamma*n + s + 1` for every `n <= 6` and every finite
/// `s <= 10` below `gamma`, with the first failing pair otherwise.
pub fn full_reach_probe(gamma: &Ordinal) -> Result<Option<(u64, u64)>, ReachError> {
    for n in 1..=6 {
        for s in 0..=10 {
            let s_ord = Ordinal::nat(s);
            if s_ord >= *gamma {
                break;
            }
            if !reach::d_predicate(gamma, n, &s_ord)?.verdict {
                return Ok(Some((n, s)));
            }
        }
    }
    Ok(None)
}

/// 8. `gamma <=_1 gamma*w` exactly when every probed `d_predicate` holds.
pub fn full_reach(seed: u64, scale: &Scale) -> SuiteReport {
    timed("full-reach", |r| {
        for g in corpus::principals(seed, scale.reach_principals) {
            let res = reach::le1_interval(&g, &g.mul_omega())
                .and_then(|ans| Ok((ans.verdict, full_reach_probe(&g)?)));
            match res {
                Ok((v, witness)) => r.check(v == witness.is_none(), || {
                    format!("{g}: engine {v}, probe {witness:?}")
                }),
                Err(e) => r.fail(format!("{g}: {e}")),
            }
        }
    })
}

/// 9. Isomorphism transfer, the two Sigma_1 checks, and the equality pair.
pub fn model_theory(seed: u64, scale: &Scale) -> SuiteReport {
    timed("model-theory", |r| {
        let mut rng = corpus::rng(seed ^ 9);
        let vars: Vec<String> = ["u", "v", "w"].iter().map(|s| s.to_string()).collect();
        for _ in 0..scale.transfer_draws {
            let eq = rng.gen_bool(0.5);
            let sig = gen::signature(&mut rng, eq);
            let size = rng.gen_range(1..=4);
            let extra = rng.gen_range(0..=2);
            let s1 = gen::structure(&mut rng, &sig, size, extra);
            let (s2, h) = gen::relabel(&mut rng, &s1, 100);
            let size = rng.gen_range(1..=8);
            let f = gen::qf_formula(&mut rng, &s1, &vars, size);
            let a = gen::assignment(&mut rng, &s1, &vars);
            let ha = a.iter().map(|(k, v)| (k.clone(), h[v])).collect();
            let iso = model::is_isomorphism(&h, &s1, &s2);
            let same = model::satisfies_qf(&s1, &f, &a).ok() == model::satisfies_qf(&s2, &f, &ha).ok();
            r.check(iso && same, || format!("transfer failed for {f}"));
        }
        for i in 0..scale.sigma_instances {
            let (a, b) = gen::substructure_pair(&mut rng, true, 4);
            let (a, b) = if i % 10 == 0 { (b.clone(), b) } else { (a, b) };
            let bound = b.carrier.len() * b.signature.max_arity().max(1) * 4;
            match (model::sigma1_check_iso(&a, &b), model::sigma1_check_formulas(&a, &b, bound)) {
                (Ok(x), Ok(y)) => r.check(x == y, || {
                    format!("iso {x} formulas {y} on A={} B={}", a.to_json(), b.to_json())
                }),
                (Err(e), _) | (_, Err(e)) => r.fail(e.to_string()),
            }
        }
        let (a, b) = model::equality_pair(true);
        let (a0, b0) = model::equality_pair(false);
        let fixture = model::sigma1_check_iso(&a, &b) == Ok(false)
            && model::sigma1_check_formulas(&a, &b, 6) == Ok(false)
            && model::sigma1_check_formulas(&a0, &b0, 6) == Ok(true)
            && model::sigma1_check_iso(&a0, &b0) == Ok(false);
        r.check(fixture, || "equality pair fixture".into());
    })
}

/// The number represented by `(a, b, c)` as `w^2*a + w*b + c`.
fn tuple_ordinal(t: (u64, u64, u64)) -> Ordinal {
    let w = Ordinal::omega();
    let w2 = Ordinal::omega_pow(&Ordinal::nat(2));
    w2.nat_mul(t.0).add(&w.nat_mul(t.1)).add(&Ordinal::nat(t.2))
}

fn tuple_add(x: (u64, u64, u64), y: (u64, u64, u64)) -> (u64, u64, u64) {
    if y.0 > 0 {
        (x.0 + y.0, y.1, y.2)
    } else if y.1 > 0 {
        (x.0, x.1 + y.1, y.2)
    } else {
        (x.0, x.1, x.2 + y.2)
    }
}

/// 10. Comparison, addition and left subtraction below `w^3` against tuples.
pub fn arithmetic() -> SuiteReport {
    timed("arithmetic", |r| {
        let tuples: Vec<(u64, u64, u64)> = (0..=5)
            .flat_map(|a| (0..=5).flat_map(move |b| (0..=5).map(move |c| (a, b, c))))
            .collect();
        let ords: Vec<Ordinal> = tuples.iter().map(|t| tuple_ordinal(*t)).collect();
        for (i, x) in tuples.iter().enumerate() {
            for (j, y) in tuples.iter().enumerate() {
                let (ox, oy) = (&ords[i], &ords[j]);
                let sum = ox.add(oy);
                let sub = ox.left_sub(oy);
                let want_sub = tuples
                    .iter()
                    .zip(&ords)
                    .find(|(z, _)| tuple_add(*x, **z) == *y)
                    .map(|(_, o)| o.clone());
                let ok = ox.cmp(oy) == x.cmp(y)
                    && sum == tuple_ordinal(tuple_add(*x, *y))
                    && (want_sub.is_none() || sub == want_sub)
                    && (x > y) == sub.is_none();
                r.check(ok, || format!("{ox} vs {oy}"));
            }
        }
    })
}

/// Runs every suite.
pub fn run_all(seed: u64, scale: &Scale) -> Vec<SuiteReport> {
    vec![
        characterization(seed, scale),
        hierarchy(seed, scale),
        cofinality(seed, scale),
        embedding(seed, scale),
        refutation(seed, scale),
        club(seed, scale),
        full_reach(seed, scale),
        model_theory(seed, scale),
        arithmetic(),
    ]
}
