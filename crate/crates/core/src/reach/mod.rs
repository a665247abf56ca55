//! Decision procedures for `a <=_1 b` on `[a, a*w]` for additively principal `a`.
//!
//! Every verdict reduces to membership in a [`ClassDescriptor`]:
//! `a <=_1 a*n + s + 1` holds exactly when `a` lies in `C(n-1, s+1, s)`.

mod descriptor;
mod unfold;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;
use thiserror::Error;

use crate::covering::{self, CoveringError};
use crate::ordinal::{Kind, Ordinal};

pub use descriptor::{ClassDescriptor, SupBelow};
pub use unfold::{unfold_once, Family, SetExpr, UnfoldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReachError {
    #[error("{0} is not additively principal")]
    NotPrincipal(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The query leaves the interval `[a, a*w]` this engine decides.
    #[error("out of scope: {0}")]
    Scope(String),
    #[error(transparent)]
    Covering(#[from] CoveringError),
    #[error("trace exceeded {MAX_TRACE} steps")]
    TraceOverflow,
}

pub const MAX_TRACE: usize = 64;

/// One rule firing in a derivation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Step {
    /// `a <=_1 a`.
    Reflexive,
    /// Target `a*n + s + 1`.
    SuccessorTarget { n: u64, s: Ordinal },
    /// Target `a*n + s` with `s` a limit, decided by continuity.
    LimitOffset { n: u64, s: Ordinal },
    /// Target `a*n`, `n >= 2`, decided by continuity.
    LimitMultiple { n: u64 },
    /// Target `a*w`.
    FullInterval,
    /// `k` applications of `A(l+1) = Lim A(l)` starting from `from`.
    LimChain { from: Ordinal, k: u64 },
    /// `A(a) = Lim P`.
    Base,
    /// The limit rule, intersecting over the traces below the target.
    Family { n: u64, s: Ordinal },
    Descriptor { class: ClassDescriptor },
    Membership {
        index: Option<Ordinal>,
        above_lower: bool,
        div_exp: Ordinal,
        verdict: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReachAnswer {
    pub verdict: bool,
    pub trace: Vec<Step>,
}

impl ReachAnswer {
    /// Recomputes the verdict from the recorded steps alone.
    pub fn replay(&self) -> Option<bool> {
        match self.trace.last()? {
            Step::Reflexive => Some(true),
            Step::Membership {
                index,
                above_lower,
                div_exp,
                ..
            } => Some(match index {
                None => false,
                Some(mu) => {
                    *above_lower
                        && (div_exp.is_zero() || (!mu.is_zero() && mu.nu().ok()? >= *div_exp))
                }
            }),
            _ => None,
        }
    }
}

fn require_principal(a: &Ordinal) -> Result<(), ReachError> {
    if a.is_additive_principal() {
        Ok(())
    } else {
        Err(ReachError::NotPrincipal(a.to_string()))
    }
}

fn decide(desc: ClassDescriptor, x: &Ordinal, mut trace: Vec<Step>) -> ReachAnswer {
    let index = Ordinal::phi_inverse(&desc.level, x);
    let above_lower = *x > desc.lower_bound;
    let verdict = desc.member(x);
    trace.push(Step::Membership {
        index,
        above_lower,
        div_exp: desc.div_exp.clone(),
        verdict,
    });
    trace.insert(trace.len() - 1, Step::Descriptor { class: desc });
    ReachAnswer { verdict, trace }
}

fn memo() -> &'static Mutex<HashMap<String, ReachAnswer>> {
    static MEMO: OnceLock<Mutex<HashMap<String, ReachAnswer>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

const MEMO_LIMIT: usize = 1 << 16;

// the unfolding of A(b*n+s) down to a base or limit case
fn unfolding(n: u64, s: &Ordinal, beta: &Ordinal) -> Vec<Step> {
    let mut k = 0u64;
    let mut root = s.clone();
    let mut tail = Vec::new();
    while let Kind::Successor(p) = root.classify() {
        k += 1;
        root = p;
        if k as usize > MAX_TRACE {
            break;
        }
    }
    if k > 0 {
        tail.push(Step::LimChain {
            from: beta.nat_mul(n).add(&root),
            k,
        });
    }
    if n == 1 && root.is_zero() {
        tail.push(Step::Base);
    } else {
        tail.push(Step::Family { n, s: root });
    }
    tail
}

/// Decides `beta <=_1 beta*n + s + 1`.
pub fn d_predicate(beta: &Ordinal, n: u64, s: &Ordinal) -> Result<ReachAnswer, ReachError> {
    require_principal(beta)?;
    if n == 0 {
        return Err(ReachError::Precondition("n must be positive".into()));
    }
    if s >= beta {
        return Err(ReachError::Precondition(format!("{s} >= {beta}")));
    }
    let key = format!("{beta}|{n}|{s}");
    if let Some(hit) = memo().lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    // A(b*n+s+1) = Lim A(b*n+s), so the successor step is the first link
    let mut trace = vec![Step::SuccessorTarget { n, s: s.clone() }];
    let mut chain = unfolding(n, &s.succ(), beta);
    trace.append(&mut chain);
    let desc = descriptor_parts(n, s);
    let ans = decide(desc, beta, trace);
    if ans.trace.len() > MAX_TRACE {
        return Err(ReachError::TraceOverflow);
    }
    let mut table = memo().lock().unwrap();
    if table.len() >= MEMO_LIMIT {
        table.clear();
    }
    table.insert(key, ans.clone());
    Ok(ans)
}

fn descriptor_parts(n: u64, s: &Ordinal) -> ClassDescriptor {
    ClassDescriptor::new(Ordinal::nat(n - 1), s.succ(), s.clone())
}

/// Decides `alpha <=_1 beta` for `alpha <= beta <= alpha*w`.
pub fn le1_interval(alpha: &Ordinal, beta: &Ordinal) -> Result<ReachAnswer, ReachError> {
    require_principal(alpha)?;
    let cap = alpha.mul_omega();
    if beta < alpha || *beta > cap {
        return Err(ReachError::Scope(format!(
            "{beta} is outside [{alpha}, {cap}]"
        )));
    }
    if beta == alpha {
        return Ok(ReachAnswer {
            verdict: true,
            trace: vec![Step::Reflexive],
        });
    }
    if *beta == cap {
        let desc = ClassDescriptor::new(Ordinal::omega(), Ordinal::zero(), Ordinal::zero());
        return Ok(decide(desc, alpha, vec![Step::FullInterval]));
    }
    let (n, s) = covering::decompose(alpha, beta)?;
    match s.classify() {
        Kind::Successor(p) => d_predicate(alpha, n, &p),
        Kind::Zero => {
            let desc = ClassDescriptor::new(Ordinal::nat(n - 1), Ordinal::zero(), Ordinal::zero());
            Ok(decide(desc, alpha, vec![Step::LimitMultiple { n }]))
        }
        Kind::Limit => {
            let desc = ClassDescriptor::new(Ordinal::nat(n - 1), s.clone(), Ordinal::zero());
            Ok(decide(desc, alpha, vec![Step::LimitOffset { n, s }]))
        }
    }
}

/// Largest `b` in `[alpha, alpha*w]` with `alpha <=_1 b`, and whether it is `alpha*w`.
pub fn m_local(alpha: &Ordinal) -> Result<(Ordinal, bool), ReachError> {
    require_principal(alpha)?;
    let p = alpha.as_principal().unwrap();
    let Some(level) = p.level().as_nat() else {
        return Ok((alpha.mul_omega(), true));
    };
    let base = alpha.nat_mul(level + 1);
    if p.index().is_zero() {
        Ok((base, false))
    } else {
        Ok((base.add(&p.index().nu().unwrap()), false))
    }
}

/// The class of `b <= alpha` with `b <=_1 g(0,alpha,b)(t) + 1`.
pub fn descriptor_for(alpha: &Ordinal, t: &Ordinal) -> Result<ClassDescriptor, ReachError> {
    let (n, s) = covering::decompose(alpha, t)?;
    Ok(descriptor_parts(n, &s))
}

/// The class `{b in P : s < b, b <=_1 b*n + s}` for `t = alpha*n + s`.
///
/// `alpha <=_1 t + 1` holds exactly when this class is cofinal in `alpha`.
pub fn prop_class(alpha: &Ordinal, t: &Ordinal) -> Result<ClassDescriptor, ReachError> {
    let (n, s) = covering::decompose(alpha, t)?;
    let lower = if n == 1 && s.is_zero() {
        Ordinal::one()
    } else {
        s.clone()
    };
    Ok(ClassDescriptor::new(Ordinal::nat(n - 1), s, lower))
}

/// Decides `a <_1 b` for arbitrary `a < b`, failing when `b` lies beyond
/// `a*w` and `a` reaches all of `[a, a*w]`.
pub fn lt1(a: &Ordinal, b: &Ordinal) -> Result<bool, ReachError> {
    if a >= b || !a.is_additive_principal() {
        return Ok(false);
    }
    if *b <= a.mul_omega() {
        return Ok(le1_interval(a, b)?.verdict);
    }
    let (_, at_cap) = m_local(a)?;
    if at_cap {
        Err(ReachError::Scope(format!(
            "{a} <_1 {b}: {a} reaches {}",
            a.mul_omega()
        )))
    } else {
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn spot_values() {
        assert!(d_predicate(&o("w^w"), 1, &o("0")).unwrap().verdict);
        assert!(!d_predicate(&o("w^w"), 1, &o("1")).unwrap().verdict);
        assert!(le1_interval(&o("e(0)"), &o("e(0)*2")).unwrap().verdict);
        assert!(!le1_interval(&o("e(0)"), &o("e(0)*2+1")).unwrap().verdict);
        assert!(!le1_interval(&o("w"), &o("w+1")).unwrap().verdict);
        let gw = o("phi(w,0)");
        assert!(le1_interval(&gw, &gw.mul_omega()).unwrap().verdict);
        assert_eq!(m_local(&o("w^w")).unwrap(), (o("w^w+1"), false));
        assert_eq!(m_local(&o("w^w^2")).unwrap(), (o("w^w^2+2"), false));
        assert_eq!(m_local(&o("e(0)")).unwrap(), (o("e(0)*2"), false));
        assert!(matches!(le1_interval(&o("w"), &o("w^2+1")), Err(ReachError::Scope(_))));
    }

    #[test]
    fn descriptors() {
        let c = |m: &str, r: &str, b: &str| ClassDescriptor::new(o(m), o(r), o(b));
        assert_eq!(descriptor_for(&o("w^w"), &o("w^w")).unwrap(), c("0", "1", "0"));
        assert_eq!(descriptor_for(&o("w^w"), &o("w^w+1")).unwrap(), c("0", "2", "1"));
        assert_eq!(descriptor_for(&o("e(1)"), &o("e(1)*2")).unwrap(), c("1", "1", "0"));
    }

    #[test]
    fn traces_replay() {
        for (a, b) in [("w^w", "w^w+1"), ("e(0)", "e(0)*2+1"), ("e(0)", "e(0)*2"), ("w^w", "w^w")] {
            let ans = le1_interval(&o(a), &o(b)).unwrap();
            assert_eq!(ans.replay(), Some(ans.verdict));
        }
    }

    #[test]
    fn strict_reach() {
        assert!(lt1(&o("w^w"), &o("w^w+1")).unwrap());
        assert!(!lt1(&o("w^w"), &o("w^w+2")).unwrap());
        assert!(!lt1(&o("w^w+1"), &o("w^w+2")).unwrap());
        assert!(!lt1(&o("w^w"), &o("e(0)")).unwrap());
        assert!(lt1(&o("phi(w,0)"), &o("phi(w,0)").mul_omega().succ()).is_err());
    }
}
