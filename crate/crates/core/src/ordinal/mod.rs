//! Ordinals below Gamma_0 in binary Veblen normal form.
//!
//! An [`Ordinal`] is a finite sum of principal terms `phi(a,b)*c` with
//! strictly decreasing principals. Natural numbers are `phi(0,0)*n`.

mod parse;
mod print;
mod veblen;

use std::cmp::Ordering;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use parse::ParseError;

/// Errors from partial ordinal operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    /// `nu` is undefined at zero.
    #[error("valuation of zero is undefined")]
    ZeroValuation,
    /// The operation needs a limit ordinal.
    #[error("{0} is not a limit ordinal")]
    NotLimit(String),
}

/// A principal term `phi(level, index)` in normal form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VeblenTerm {
    level: Ordinal,
    index: Ordinal,
}

impl VeblenTerm {
    pub fn level(&self) -> &Ordinal {
        &self.level
    }

    pub fn index(&self) -> &Ordinal {
        &self.index
    }

    fn is_one(&self) -> bool {
        self.level.is_zero() && self.index.is_zero()
    }

    /// Exponent `e` with `self = w^e`.
    pub fn log(&self) -> Ordinal {
        if self.level.is_zero() {
            self.index.clone()
        } else {
            Ordinal::from_term(self.clone(), 1)
        }
    }
}

impl Ord for VeblenTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.level.cmp(&other.level) {
            Ordering::Equal => self.index.cmp(&other.index),
            Ordering::Less => cmp_with_principal(&self.index, other),
            Ordering::Greater => cmp_with_principal(&other.index, self).reverse(),
        }
    }
}

impl PartialOrd for VeblenTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// compares an arbitrary ordinal with a single principal term
fn cmp_with_principal(x: &Ordinal, q: &VeblenTerm) -> Ordering {
    let Some(lead) = x.terms.first() else {
        return Ordering::Less;
    };
    match lead.principal.cmp(q) {
        Ordering::Equal if x.terms.len() == 1 && lead.coeff == 1 => Ordering::Equal,
        Ordering::Equal => Ordering::Greater,
        other => other,
    }
}

/// One summand `principal * coeff`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Term {
    principal: VeblenTerm,
    coeff: u64,
}

impl Term {
    pub fn principal(&self) -> &VeblenTerm {
        &self.principal
    }

    pub fn coeff(&self) -> u64 {
        self.coeff
    }
}

/// An ordinal below Gamma_0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ordinal {
    terms: Arc<[Term]>,
}

/// Shape of an ordinal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kind {
    Zero,
    /// Successor, carrying the predecessor.
    Successor(Ordinal),
    Limit,
}

/// Result of asking for the largest additive principal below an ordinal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrincipalBelow {
    Max(Ordinal),
    /// Additive principals are cofinal below the argument.
    Cofinal,
    Empty,
}

impl Ordinal {
    fn from_vec(terms: Vec<Term>) -> Ordinal {
        Ordinal { terms: terms.into() }
    }

    fn from_term(principal: VeblenTerm, coeff: u64) -> Ordinal {
        Ordinal::from_vec(vec![Term { principal, coeff }])
    }

    pub fn zero() -> Ordinal {
        Ordinal::from_vec(Vec::new())
    }

    pub fn one() -> Ordinal {
        Ordinal::nat(1)
    }

    /// `w`.
    pub fn omega() -> Ordinal {
        Ordinal::phi(&Ordinal::zero(), &Ordinal::one())
    }

    pub fn nat(n: u64) -> Ordinal {
        if n == 0 {
            return Ordinal::zero();
        }
        let one = VeblenTerm {
            level: Ordinal::zero(),
            index: Ordinal::zero(),
        };
        Ordinal::from_term(one, n)
    }

    /// `phi(a,b)`, collapsing `b` when it is already a fixed point of `phi_a`.
    pub fn phi(a: &Ordinal, b: &Ordinal) -> Ordinal {
        if let Some(q) = b.as_principal() {
            if q.level > *a {
                return b.clone();
            }
        }
        Ordinal::from_term(
            VeblenTerm {
                level: a.clone(),
                index: b.clone(),
            },
            1,
        )
    }

    /// `e(b) = phi(1,b)`.
    pub fn epsilon(b: &Ordinal) -> Ordinal {
        Ordinal::phi(&Ordinal::one(), b)
    }

    /// `w^x`.
    pub fn omega_pow(x: &Ordinal) -> Ordinal {
        Ordinal::phi(&Ordinal::zero(), x)
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_nat(&self) -> Option<u64> {
        match &*self.terms {
            [] => Some(0),
            [t] if t.principal.is_one() => Some(t.coeff),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_nat().is_some()
    }

    /// The principal term if `self` is a single `phi(a,b)` with coefficient 1.
    pub fn as_principal(&self) -> Option<&VeblenTerm> {
        match &*self.terms {
            [t] if t.coeff == 1 => Some(&t.principal),
            _ => None,
        }
    }

    /// Additively principal and greater than 1.
    pub fn is_additive_principal(&self) -> bool {
        self.as_principal().is_some_and(|p| !p.is_one())
    }

    /// Leading principal term.
    pub fn leading(&self) -> Option<&VeblenTerm> {
        self.terms.first().map(|t| &t.principal)
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::one())
    }

    pub fn classify(&self) -> Kind {
        match self.terms.last() {
            None => Kind::Zero,
            Some(t) if t.principal.is_one() => {
                let mut v = self.terms.to_vec();
                let last = v.last_mut().unwrap();
                if last.coeff == 1 {
                    v.pop();
                } else {
                    last.coeff -= 1;
                }
                Kind::Successor(Ordinal::from_vec(v))
            }
            Some(_) => Kind::Limit,
        }
    }

    pub fn is_limit(&self) -> bool {
        self.classify() == Kind::Limit
    }

    /// Ordinal sum `self + y`.
    ///
    /// Panics if a coefficient overflows `u64`; see [`Ordinal::checked_add`].
    pub fn add(&self, y: &Ordinal) -> Ordinal {
        self.checked_add(y).expect("ordinal coefficient overflow")
    }

    pub fn checked_add(&self, y: &Ordinal) -> Option<Ordinal> {
        let Some(head) = y.terms.first() else {
            return Some(self.clone());
        };
        let mut out: Vec<Term> = Vec::with_capacity(self.terms.len() + y.terms.len());
        let mut merged = false;
        for t in self.terms.iter() {
            match t.principal.cmp(&head.principal) {
                Ordering::Greater => out.push(t.clone()),
                Ordering::Equal => {
                    out.push(Term {
                        principal: t.principal.clone(),
                        coeff: t.coeff.checked_add(head.coeff)?,
                    });
                    merged = true;
                    break;
                }
                Ordering::Less => break,
            }
        }
        let rest = if merged { &y.terms[1..] } else { &y.terms[..] };
        out.extend(rest.iter().cloned());
        Some(Ordinal::from_vec(out))
    }

    /// Left subtraction: the unique `s` with `self + s = y`, or `None` when `self > y`.
    pub fn left_sub(&self, y: &Ordinal) -> Option<Ordinal> {
        if self > y {
            return None;
        }
        let i = self
            .terms
            .iter()
            .zip(y.terms.iter())
            .position(|(a, b)| a != b);
        let Some(i) = i else {
            return Some(Ordinal::from_vec(y.terms[self.terms.len()..].to_vec()));
        };
        let (a, b) = (&self.terms[i], &y.terms[i]);
        let mut rest = Vec::new();
        if a.principal == b.principal {
            rest.push(Term {
                principal: b.principal.clone(),
                coeff: b.coeff - a.coeff,
            });
            rest.extend(y.terms[i + 1..].iter().cloned());
        } else {
            rest.extend(y.terms[i..].iter().cloned());
        }
        Some(Ordinal::from_vec(rest))
    }

    /// `self * n` for a natural number `n`.
    pub fn nat_mul(&self, n: u64) -> Ordinal {
        self.checked_nat_mul(n).expect("ordinal coefficient overflow")
    }

    pub fn checked_nat_mul(&self, n: u64) -> Option<Ordinal> {
        if n == 0 || self.is_zero() {
            return Some(Ordinal::zero());
        }
        let mut v = self.terms.to_vec();
        v[0].coeff = v[0].coeff.checked_mul(n)?;
        Some(Ordinal::from_vec(v))
    }

    /// `self * w`.
    pub fn mul_omega(&self) -> Ordinal {
        match self.leading() {
            None => Ordinal::zero(),
            Some(p) => Ordinal::omega_pow(&p.log().succ()),
        }
    }

    /// Least exponent of the Cantor normal form.
    pub fn nu(&self) -> Result<Ordinal, OrdinalError> {
        self.terms
            .last()
            .map(|t| t.principal.log())
            .ok_or(OrdinalError::ZeroValuation)
    }

    /// `w^g` with `g` a limit.
    pub fn is_lim_p(&self) -> bool {
        self.is_additive_principal() && self.as_principal().unwrap().log().is_limit()
    }

    /// Largest additive principal strictly below `self`.
    pub fn max_principal_below(&self) -> PrincipalBelow {
        let Some(lead) = self.terms.first() else {
            return PrincipalBelow::Empty;
        };
        if self.as_principal().is_none() {
            if lead.principal.is_one() {
                return PrincipalBelow::Empty;
            }
            return PrincipalBelow::Max(Ordinal::from_term(lead.principal.clone(), 1));
        }
        match lead.principal.log().classify() {
            Kind::Zero => PrincipalBelow::Empty,
            Kind::Successor(e) if e.is_zero() => PrincipalBelow::Empty,
            Kind::Successor(e) => PrincipalBelow::Max(Ordinal::omega_pow(&e)),
            Kind::Limit => PrincipalBelow::Cofinal,
        }
    }

    /// Least epsilon number strictly above `self`.
    pub fn next_epsilon(&self) -> Ordinal {
        let idx = veblen::max_index_le(&Ordinal::one(), self)
            .map(|m| m.succ())
            .unwrap_or_else(Ordinal::zero);
        Ordinal::epsilon(&idx)
    }

    /// `self = head + p` where `p` is the last principal summand (one copy).
    pub fn split_last(&self) -> Option<(Ordinal, Ordinal)> {
        let last = self.terms.last()?;
        let mut v = self.terms.to_vec();
        let l = v.last_mut().unwrap();
        if l.coeff == 1 {
            v.pop();
        } else {
            l.coeff -= 1;
        }
        Some((
            Ordinal::from_vec(v),
            Ordinal::from_term(last.principal.clone(), 1),
        ))
    }

    /// The `k`-th element of the fundamental sequence of a limit ordinal.
    ///
    /// Conventions: `w[k] = k+1`, `(w^(b+1))[k] = w^b*(k+1)`,
    /// `phi(a+1,0)[0] = w` with `phi(a+1,0)[k+1] = phi(a, phi(a+1,0)[k])`.
    pub fn fund_seq(&self, k: u64) -> Result<Ordinal, OrdinalError> {
        if !self.is_limit() {
            return Err(OrdinalError::NotLimit(self.to_string()));
        }
        let (head, last) = self.split_last().unwrap();
        let p = last.as_principal().unwrap();
        Ok(head.add(&principal_fund(p, k)))
    }

    pub fn phi_inverse(m: &Ordinal, x: &Ordinal) -> Option<Ordinal> {
        veblen::phi_inverse(m, x)
    }

    pub fn max_index_le(m: &Ordinal, x: &Ordinal) -> Option<Ordinal> {
        veblen::max_index_le(m, x)
    }

    pub fn min_index_ge(m: &Ordinal, x: &Ordinal) -> Ordinal {
        veblen::min_index_ge(m, x)
    }

    /// Veblen level of the leading principal.
    pub fn veblen_level(&self) -> Option<&Ordinal> {
        self.leading().map(|p| &p.level)
    }
}

fn principal_fund(p: &VeblenTerm, k: u64) -> Ordinal {
    let (a, b) = (&p.level, &p.index);
    if let Kind::Limit = b.classify() {
        return Ordinal::phi(a, &b.fund_seq(k).unwrap());
    }
    let pred = match b.classify() {
        Kind::Successor(pr) => Some(pr),
        _ => None,
    };
    if a.is_zero() {
        // b is a successor here, b = 0 would be the finite 1
        let e = pred.expect("w^0 is not a limit");
        return Ordinal::omega_pow(&e).nat_mul(k + 1);
    }
    match a.classify() {
        Kind::Successor(a0) => {
            let mut x = match &pred {
                None => Ordinal::omega(),
                Some(b0) => Ordinal::phi(a, b0).succ(),
            };
            for _ in 0..k {
                x = Ordinal::phi(&a0, &x);
            }
            x
        }
        _ => {
            let ak = a.fund_seq(k).unwrap();
            match &pred {
                None => Ordinal::phi(&ak, &Ordinal::zero()),
                Some(b0) => Ordinal::phi(&ak, &Ordinal::phi(a, b0).succ()),
            }
        }
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            let c = a.principal.cmp(&b.principal).then(a.coeff.cmp(&b.coeff));
            if c != Ordering::Equal {
                return c;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Default for Ordinal {
    fn default() -> Self {
        Ordinal::zero()
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::nat(n)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn absorption() {
        assert_eq!(o("1").add(&o("w")), o("w"));
        assert_eq!(o("w").add(&o("1")), o("w+1"));
        assert_eq!(o("w*2+3").add(&o("w^2")), o("w^2"));
        assert_eq!(o("w^2+w").add(&o("w*3+1")), o("w^2+w*4+1"));
    }

    #[test]
    fn subtraction_examples() {
        assert_eq!(o("w").left_sub(&o("w^2")), Some(o("w^2")));
        assert_eq!(o("w^2").left_sub(&o("w")), None);
        assert_eq!(o("w*2+1").left_sub(&o("w*3")), Some(o("w")));
    }

    #[test]
    fn valuations() {
        assert_eq!(o("w^3+w").nu().unwrap(), o("1"));
        assert_eq!(o("e(0)").nu().unwrap(), o("e(0)"));
        assert_eq!(o("0").nu(), Err(OrdinalError::ZeroValuation));
        assert_eq!(o("5").nu().unwrap(), o("0"));
    }

    #[test]
    fn fixed_points_collapse() {
        assert_eq!(o("w^e(0)"), o("e(0)"));
        assert_eq!(o("e(phi(2,0))"), o("phi(2,0)"));
        assert!(o("w^(e(0)+1)") > o("e(0)"));
        assert!(o("phi(2,0)") > o("e(e(e(0)))"));
        assert!(o("phi(w,0)") > o("phi(5,w^w)"));
    }

    #[test]
    fn principal_below() {
        assert_eq!(o("w").max_principal_below(), PrincipalBelow::Empty);
        assert_eq!(o("w^2").max_principal_below(), PrincipalBelow::Max(o("w")));
        assert_eq!(o("w^w").max_principal_below(), PrincipalBelow::Cofinal);
        assert_eq!(o("w*2").max_principal_below(), PrincipalBelow::Max(o("w")));
        assert_eq!(o("7").max_principal_below(), PrincipalBelow::Empty);
    }

    #[test]
    fn epsilons() {
        assert_eq!(o("w^w").next_epsilon(), o("e(0)"));
        assert_eq!(o("e(0)").next_epsilon(), o("e(1)"));
        assert_eq!(o("phi(2,0)+1").next_epsilon(), o("e(phi(2,0)+1)"));
    }

    #[test]
    fn sequences() {
        assert_eq!(o("w").fund_seq(4).unwrap(), o("5"));
        assert_eq!(o("e(0)").fund_seq(2).unwrap(), o("w^w^w"));
        assert_eq!(o("w^w").fund_seq(2).unwrap(), o("w^3"));
        assert!(o("7").fund_seq(1).is_err());
    }
}
