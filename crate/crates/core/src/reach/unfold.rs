//! One literal step of the recursion defining `A(t)`, with recursive
//! occurrences replaced by [`descriptor_for`] on smaller parameters.

use std::fmt;

use thiserror::Error;

use super::{descriptor_for, ClassDescriptor, ReachError, SupBelow};
use crate::covering;
use crate::ordinal::{Kind, Ordinal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnfoldError {
    #[error(transparent)]
    Reach(#[from] ReachError),
    /// Direct evaluation of a family disagreed with its closed form.
    #[error("family {family} disagrees with {closed} at {probe}")]
    Mismatch {
        family: String,
        closed: String,
        probe: String,
    },
    #[error("unsupported set expression {0}")]
    Unsupported(String),
}

/// `{r in P : s < r <= alpha, r in A(q) for every q in (alpha, t) with T(0,alpha,q) & alpha < r}`
/// for a limit `t = alpha*n + s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    pub alpha: Ordinal,
    pub t: Ordinal,
    pub n: u64,
    pub s: Ordinal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetExpr {
    Class(ClassDescriptor),
    Lim(Box<SetExpr>),
    /// `inner` intersected with `bound + 1`.
    Capped { inner: Box<SetExpr>, bound: Ordinal },
    Family(Family),
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetExpr::Class(d) => write!(f, "{d}"),
            SetExpr::Lim(e) => write!(f, "Lim({e})"),
            SetExpr::Capped { inner, bound } => write!(f, "{inner} & ({bound}+1)"),
            SetExpr::Family(fam) => write!(f, "{fam}"),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{r in P : {} < r, r in A(q) for q in ({}, {})}}",
            self.s, self.alpha, self.t
        )
    }
}

/// The right-hand side of the recursion for `A(t)`.
pub fn unfold_once(alpha: &Ordinal, t: &Ordinal) -> Result<SetExpr, ReachError> {
    let (n, s) = covering::decompose(alpha, t)?;
    let inner = if n == 1 && s.is_zero() {
        SetExpr::Class(ClassDescriptor::principals())
    } else {
        match t.classify() {
            Kind::Successor(l) => SetExpr::Class(descriptor_for(alpha, &l)?),
            _ => SetExpr::Family(Family {
                alpha: alpha.clone(),
                t: t.clone(),
                n,
                s,
            }),
        }
    };
    Ok(SetExpr::Capped {
        inner: Box::new(SetExpr::Lim(Box::new(inner))),
        bound: alpha.clone(),
    })
}

impl Family {
    /// Membership by checking every relevant `A(q)` directly.
    ///
    /// For each multiple `m` the offsets probed are small ones, points of the
    /// fundamental sequence of the bound, its predecessor, and the least offset
    /// at which `r` can leave `A(alpha*m + s')`.
    pub fn contains(&self, r: &Ordinal) -> Result<bool, ReachError> {
        if !r.is_additive_principal() || *r <= self.s || *r > self.alpha {
            return Ok(false);
        }
        for m in 1..=self.n {
            let bound = if m < self.n || self.s > *r {
                r.clone()
            } else {
                self.s.clone()
            };
            for off in offsets(m, &bound, r) {
                let q = self.alpha.nat_mul(m).add(&off);
                if q <= self.alpha || q >= self.t {
                    continue;
                }
                let traces = covering::t_set(&self.alpha, &q)?;
                if !traces.iter().filter(|x| **x < self.alpha).all(|x| x < r) {
                    continue;
                }
                if !descriptor_for(&self.alpha, &q)?.member(r) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Closed form of the family.
    ///
    /// The intersection over offsets below `s` at multiple `n` takes the
    /// supremum `s` of the divisibility exponents; the intersection over all
    /// offsets below `r` at multiple `n-1` raises the level to `n-1`.
    pub fn closed_form(&self) -> ClassDescriptor {
        ClassDescriptor::new(Ordinal::nat(self.n - 1), self.s.clone(), self.s.clone())
    }
}

fn offsets(m: u64, bound: &Ordinal, r: &Ordinal) -> Vec<Ordinal> {
    let mut out: Vec<Ordinal> = (0..4).map(Ordinal::nat).collect();
    match bound.classify() {
        Kind::Successor(p) => out.push(p),
        Kind::Limit => out.extend((0..4).map(|k| bound.fund_seq(k).unwrap())),
        Kind::Zero => {}
    }
    if let Some(mu) = Ordinal::phi_inverse(&Ordinal::nat(m - 1), r) {
        if let Ok(v) = mu.nu() {
            out.push(v.clone());
            out.push(v.succ());
        }
    }
    out.retain(|x| x < bound);
    out.sort();
    out.dedup();
    out
}

impl SetExpr {
    pub fn member(&self, g: &Ordinal) -> Result<bool, UnfoldError> {
        match self {
            SetExpr::Class(d) => Ok(d.member(g)),
            SetExpr::Family(f) => Ok(f.contains(g)?),
            SetExpr::Capped { inner, bound } => Ok(g <= bound && inner.member(g)?),
            SetExpr::Lim(inner) => lim_member(inner, g),
        }
    }
}

fn lim_member(inner: &SetExpr, g: &Ordinal) -> Result<bool, UnfoldError> {
    match inner {
        SetExpr::Class(d) => Ok(d.sup_below(g) == SupBelow::Cofinal),
        SetExpr::Family(f) => {
            let closed = f.closed_form();
            for p in family_probes(&closed, g) {
                if p > f.alpha {
                    continue;
                }
                if f.contains(&p)? != closed.member(&p) {
                    return Err(UnfoldError::Mismatch {
                        family: f.to_string(),
                        closed: closed.to_string(),
                        probe: p.to_string(),
                    });
                }
            }
            Ok(closed.sup_below(g) == SupBelow::Cofinal)
        }
        SetExpr::Capped { inner, bound } => Ok(g <= bound && lim_member(inner, g)?),
        SetExpr::Lim(_) => Err(UnfoldError::Unsupported(format!("Lim({inner})"))),
    }
}

// ordinals near `g` where the closed form changes its verdict
fn family_probes(closed: &ClassDescriptor, g: &Ordinal) -> Vec<Ordinal> {
    let mut out = vec![g.clone()];
    if let SupBelow::Max(x) = closed.sup_below(g) {
        out.push(x);
    }
    if g.is_limit() {
        for k in 0..3 {
            let x = g.fund_seq(k).unwrap();
            out.push(closed.next_above(&x));
            if let SupBelow::Max(y) = closed.sup_below(&x) {
                out.push(y);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn unfold_shapes() {
        let a = o("w^w");
        assert_eq!(
            unfold_once(&a, &a).unwrap().to_string(),
            "Lim(C(0,0,1)) & (w^w+1)"
        );
        assert_eq!(
            unfold_once(&a, &o("w^w+1")).unwrap().to_string(),
            "Lim(C(0,1,0)) & (w^w+1)"
        );
        let e = unfold_once(&o("e(1)"), &o("e(1)*2")).unwrap();
        assert!(matches!(&e, SetExpr::Capped { inner, .. } if matches!(&**inner, SetExpr::Lim(f) if matches!(&**f, SetExpr::Family(_)))));
    }

    #[test]
    fn family_matches_closed_form() {
        let a = o("phi(3,w)");
        for t in ["phi(3,w)*2", "phi(3,w)*3", "phi(3,w)+w", "phi(3,w)*2+w^w", "phi(3,w)*2+e(0)"] {
            let Ok(SetExpr::Capped { inner, .. }) = unfold_once(&a, &o(t)) else {
                panic!()
            };
            let SetExpr::Lim(f) = *inner else { panic!() };
            let SetExpr::Family(f) = *f else { panic!() };
            let closed = f.closed_form();
            for r in ["w^w", "e(0)", "e(w)", "e(e(0))", "phi(2,0)", "phi(2,w)", "phi(2,1)", "phi(3,0)", "w^(e(0)*2)"] {
                assert_eq!(f.contains(&o(r)).unwrap(), closed.member(&o(r)), "{t} {r}");
            }
        }
    }
}
