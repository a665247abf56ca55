//! Finite `(<, +, <_1)` configurations, embeddings witnessing `a <_1 b`,
//! and certificates refuting it.

mod certificate;

use serde::Serialize;
use thiserror::Error;

use crate::covering;
use crate::ordinal::{Ordinal, PrincipalBelow};
use crate::reach::{self, ClassDescriptor, ReachError};

pub use certificate::{refute, verify_certificate, CertError, Certificate};

/// A finite set of ordinals with its addition and `<_1` tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteConfig {
    pub elements: Vec<Ordinal>,
    /// `add_table[i][j]` is the index of `elements[i] + elements[j]`, if present.
    pub add_table: Vec<Vec<Option<usize>>>,
    pub lt1_table: Vec<Vec<bool>>,
}

impl FiniteConfig {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn same_shape(&self, other: &FiniteConfig) -> bool {
        self.add_table == other.add_table && self.lt1_table == other.lt1_table
    }
}

/// Builds the configuration of `z` (sorted, duplicates removed).
pub fn build_config(z: &[Ordinal]) -> Result<FiniteConfig, ReachError> {
    let mut elements = z.to_vec();
    elements.sort();
    elements.dedup();
    let n = elements.len();
    let mut add_table = vec![vec![None; n]; n];
    let mut lt1_table = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            let sum = elements[i].add(&elements[j]);
            add_table[i][j] = elements.binary_search(&sum).ok();
            if i < j {
                lt1_table[i][j] = reach::lt1(&elements[i], &elements[j])?;
            }
        }
    }
    Ok(FiniteConfig {
        elements,
        add_table,
        lt1_table,
    })
}

/// How an embedding was found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Method {
    Identity,
    /// Restriction of `g(0, alpha, delta)`.
    Covering { delta: Ordinal },
    Search { nodes: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Embedding {
    pub domain: Vec<Ordinal>,
    pub images: Vec<Ordinal>,
    #[serde(flatten)]
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    /// Search budget exhausted. Not a proof that no embedding exists.
    #[error("no embedding found within budget")]
    NotFound,
    #[error(transparent)]
    Reach(#[from] ReachError),
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Candidate images per element.
    pub pool: usize,
    /// Backtracking nodes.
    pub nodes: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            pool: 64,
            nodes: 10_000,
        }
    }
}

/// Checks that `images` is an isomorphic copy of `config` inside `alpha`
/// fixing every element below `alpha`.
pub fn verify_embedding(config: &FiniteConfig, alpha: &Ordinal, images: &[Ordinal]) -> bool {
    if images.len() != config.len() {
        return false;
    }
    if images.iter().any(|y| y >= alpha) || images.windows(2).any(|w| w[0] >= w[1]) {
        return false;
    }
    let fixes = config
        .elements
        .iter()
        .zip(images)
        .all(|(x, y)| x >= alpha || x == y);
    if !fixes {
        return false;
    }
    match build_config(images) {
        Ok(img) => config.same_shape(&img),
        Err(_) => false,
    }
}

/// Searches for an embedding of `config` into `alpha`.
pub fn find_embedding(
    config: &FiniteConfig,
    alpha: &Ordinal,
    opts: SearchOptions,
) -> Result<Embedding, EmbedError> {
    let z = &config.elements;
    let done = |images: Vec<Ordinal>, method| Embedding {
        domain: z.clone(),
        images,
        method,
    };
    if z.iter().all(|x| x < alpha) {
        return Ok(done(z.clone(), Method::Identity));
    }
    let deltas = covering_deltas(config, alpha)?;
    for delta in deltas.iter().take(4) {
        if let Some(images) = covering_images(z, alpha, delta) {
            if verify_embedding(config, alpha, &images) {
                return Ok(done(
                    images,
                    Method::Covering {
                        delta: delta.clone(),
                    },
                ));
            }
        }
    }
    let pools = candidate_pools(config, alpha, &deltas, opts.pool);
    let mut search = Search {
        config,
        pools: &pools,
        budget: opts.nodes,
        nodes: 0,
        images: Vec::new(),
    };
    if search.extend() && verify_embedding(config, alpha, &search.images) {
        let nodes = search.nodes;
        return Ok(done(search.images, Method::Search { nodes }));
    }
    Err(EmbedError::NotFound)
}

fn covering_images(z: &[Ordinal], alpha: &Ordinal, delta: &Ordinal) -> Option<Vec<Ordinal>> {
    z.iter()
        .map(|x| {
            if x < alpha {
                Some(x.clone())
            } else {
                covering::g0_apply(alpha, delta, x).ok()
            }
        })
        .collect()
}

// lower bound for delta: elements below alpha, traces, and reaches that stop below alpha
fn delta_floor(z: &[Ordinal], alpha: &Ordinal) -> Result<Ordinal, ReachError> {
    let mut lo = Ordinal::zero();
    for x in z {
        let cand = if x < alpha {
            if x.is_additive_principal() {
                let (m, at_cap) = reach::m_local(x)?;
                if !at_cap && m < *alpha && m > lo {
                    lo = m;
                }
            }
            x.clone()
        } else {
            covering::decompose(alpha, x)?.1
        };
        if cand > lo {
            lo = cand;
        }
    }
    Ok(lo)
}

// principals below alpha suitable as covering targets, best first
fn covering_deltas(config: &FiniteConfig, alpha: &Ordinal) -> Result<Vec<Ordinal>, ReachError> {
    let z = &config.elements;
    if !alpha.is_additive_principal() || *z.last().unwrap() >= alpha.mul_omega() {
        return Ok(Vec::new());
    }
    let lo = delta_floor(z, alpha)?;
    let top = z.last().unwrap();
    let mut classes = vec![reach::prop_class(alpha, top)?];
    classes.push(ClassDescriptor::principals());
    let mut out = Vec::new();
    for class in classes {
        let mut d = class.next_above(&lo);
        for _ in 0..4 {
            if d >= *alpha {
                break;
            }
            out.push(d.clone());
            d = class.next_above(&d);
        }
    }
    Ok(out)
}

fn candidate_pools(
    config: &FiniteConfig,
    alpha: &Ordinal,
    deltas: &[Ordinal],
    pool: usize,
) -> Vec<Vec<Ordinal>> {
    let z = &config.elements;
    let low: Vec<Ordinal> = z.iter().filter(|x| *x < alpha).cloned().collect();
    let mut extra: Vec<Ordinal> = deltas.to_vec();
    let mut p = low.last().cloned().unwrap_or_else(Ordinal::zero);
    let principals = ClassDescriptor::principals();
    while extra.len() < pool {
        p = principals.next_above(&p);
        if p >= *alpha {
            break;
        }
        extra.push(p.clone());
    }
    for a in &low {
        for b in &low {
            let s = a.add(b);
            if s < *alpha {
                extra.push(s);
            }
        }
    }
    z.iter()
        .map(|x| {
            if x < alpha {
                return vec![x.clone()];
            }
            let mut c: Vec<Ordinal> = Vec::new();
            if alpha.is_additive_principal() && *x < alpha.mul_omega() {
                for d in deltas.iter().chain(extra.iter()) {
                    if d.is_additive_principal() {
                        if let Ok(y) = covering::g0_apply(alpha, d, x) {
                            c.push(y);
                        }
                    }
                }
            }
            c.extend(extra.iter().cloned());
            c.retain(|y| y < alpha);
            c.sort();
            c.dedup();
            c.truncate(pool);
            c
        })
        .collect()
}

struct Search<'a> {
    config: &'a FiniteConfig,
    pools: &'a [Vec<Ordinal>],
    budget: usize,
    nodes: usize,
    images: Vec<Ordinal>,
}

impl Search<'_> {
    fn extend(&mut self) -> bool {
        let i = self.images.len();
        if i == self.config.len() {
            return true;
        }
        for y in &self.pools[i] {
            if self.nodes >= self.budget {
                return false;
            }
            self.nodes += 1;
            if self.images.last().is_some_and(|prev| prev >= y) {
                continue;
            }
            self.images.push(y.clone());
            if self.consistent(i) && self.extend() {
                return true;
            }
            self.images.pop();
        }
        false
    }

    // checks the facts involving the newest image against the assigned prefix
    fn consistent(&self, i: usize) -> bool {
        let c = self.config;
        for j in 0..=i {
            for (a, b) in [(i, j), (j, i)] {
                let sum = self.images[a].add(&self.images[b]);
                match c.add_table[a][b] {
                    Some(k) if k <= i => {
                        if self.images[k] != sum {
                            return false;
                        }
                    }
                    Some(_) => {}
                    None => {
                        if self.images.contains(&sum) {
                            return false;
                        }
                    }
                }
            }
            if j < i {
                match reach::lt1(&self.images[j], &self.images[i]) {
                    Ok(v) if v == c.lt1_table[j][i] => {}
                    _ => return false,
                }
            }
        }
        true
    }
}

/// Witness for `alpha <^0 t` on the finite set `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lt0Witness {
    pub delta: Ordinal,
    pub domain: Vec<Ordinal>,
    pub images: Vec<Ordinal>,
}

/// Finds `delta < alpha` whose covering map restricted to `b` is a
/// `(<, <_1, +)`-isomorphism, when the engine says `alpha <_1 t`.
pub fn lt0_check(
    alpha: &Ordinal,
    t: &Ordinal,
    b: &[Ordinal],
) -> Result<Option<Lt0Witness>, ReachError> {
    if t <= alpha || !reach::le1_interval(alpha, t)?.verdict {
        return Ok(None);
    }
    if b.iter().any(|x| x >= t) {
        return Err(ReachError::Precondition(format!("B must lie below {t}")));
    }
    let config = build_config(b)?;
    let z = &config.elements;
    let lo = delta_floor(z, alpha)?;
    let class = match z.last() {
        Some(top) if top >= alpha => reach::prop_class(alpha, top)?,
        _ => ClassDescriptor::principals(),
    };
    let delta = class.next_above(&lo);
    if delta >= *alpha {
        return Ok(None);
    }
    let Some(images) = covering_images(z, alpha, &delta) else {
        return Ok(None);
    };
    if !verify_embedding(&config, alpha, &images) {
        return Ok(None);
    }
    Ok(Some(Lt0Witness {
        delta,
        domain: z.clone(),
        images,
    }))
}

/// Largest additively principal ordinal below `alpha`, if any, for callers
/// that need the witness `M` of a non-cofinal principal part.
pub(crate) fn principal_gap(alpha: &Ordinal) -> Option<Ordinal> {
    match alpha.max_principal_below() {
        PrincipalBelow::Max(m) => Some(m),
        PrincipalBelow::Empty => Some(Ordinal::one()),
        PrincipalBelow::Cofinal => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn os(v: &[&str]) -> Vec<Ordinal> {
        v.iter().map(|s| o(s)).collect()
    }

    #[test]
    fn configs() {
        let c = build_config(&os(&["w+1", "1", "w"])).unwrap();
        assert_eq!(c.elements, os(&["1", "w", "w+1"]));
        assert_eq!(c.add_table[0][1], Some(1));
        assert_eq!(c.add_table[1][0], Some(2));
        assert!(c.lt1_table.iter().flatten().all(|x| !x));
        let c = build_config(&os(&["w^w", "w^w+1"])).unwrap();
        assert!(c.lt1_table[0][1]);
        assert!(build_config(&[]).unwrap().is_empty());
    }

    #[test]
    fn embeddings() {
        let c = build_config(&os(&["5", "w^w", "w^w*2+5"])).unwrap();
        let e = find_embedding(&c, &o("w^w"), SearchOptions::default()).unwrap();
        assert_eq!(e.images[0], o("5"));
        assert!(verify_embedding(&c, &o("w^w"), &e.images));
        let c = build_config(&os(&["3", "w"])).unwrap();
        let e = find_embedding(&c, &o("w^2"), SearchOptions::default()).unwrap();
        assert_eq!(e.method, Method::Identity);
        let c = build_config(&os(&["w^2", "w", "w^2+w"])).unwrap();
        assert_eq!(
            find_embedding(&c, &o("w^2+w"), SearchOptions::default()),
            Err(EmbedError::NotFound)
        );
    }

    #[test]
    fn uniform_witnesses() {
        let a = o("w^w");
        let w = lt0_check(&a, &o("w^w+1"), &os(&["5", "w^w"])).unwrap().unwrap();
        assert_eq!(w.images[0], o("5"));
        assert!(w.delta.is_additive_principal() && w.delta > o("5"));
        assert_eq!(w.images[1], w.delta);
        let w = lt0_check(&a, &o("w^w+1"), &os(&["5"])).unwrap().unwrap();
        assert_eq!(w.images, os(&["5"]));
        assert_eq!(lt0_check(&o("w"), &o("w+1"), &os(&["w"])).unwrap(), None);
    }
}
