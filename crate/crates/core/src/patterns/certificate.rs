use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::principal_gap;
use crate::covering;
use crate::ordinal::Ordinal;
use crate::reach::{self, ReachError, SupBelow};

/// A finite set `Z` below `beta` with no isomorphic copy inside `alpha`
/// fixing `Z & alpha`, together with the reason.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Certificate {
    /// `head + tail = alpha` with both below `alpha`; the image of `alpha`
    /// would be `head + tail = alpha` again.
    SumWitness {
        head: Ordinal,
        tail: Ordinal,
        z: Vec<Ordinal>,
    },
    /// `alpha` is finite and smaller than `|Z|`.
    CardinalityWitness { z: Vec<Ordinal> },
    /// `m + p = p` forces the image of `p` to be at least `m*w >= alpha`.
    MaxPrincipalWitness { m: Ordinal, p: Ordinal, z: Vec<Ordinal> },
    /// `alpha <_1 t` with `t = alpha*n + s` the full reach of `alpha`; the image
    /// of `alpha` would have to lie in the class `{d in P : s < d <=_1 d*n+s}`
    /// above `bound`, and that class has no members in `(bound, alpha)`.
    ReachMarker {
        t: Ordinal,
        n: u64,
        s: Ordinal,
        bound: Option<Ordinal>,
        z: Vec<Ordinal>,
    },
}

impl Certificate {
    pub fn z(&self) -> &[Ordinal] {
        match self {
            Certificate::SumWitness { z, .. }
            | Certificate::CardinalityWitness { z }
            | Certificate::MaxPrincipalWitness { z, .. }
            | Certificate::ReachMarker { z, .. } => z,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error(transparent)]
    Reach(#[from] ReachError),
    #[error("malformed certificate: {0}")]
    Malformed(String),
}

fn sorted(mut v: Vec<Ordinal>) -> Vec<Ordinal> {
    v.sort();
    v.dedup();
    v
}

fn marker_set(alpha: &Ordinal, t: &Ordinal, n: u64, s: &Ordinal, bound: &Option<Ordinal>) -> Vec<Ordinal> {
    let mut z: Vec<Ordinal> = (1..=n).map(|k| alpha.nat_mul(k)).collect();
    z.push(t.clone());
    if !s.is_zero() {
        z.push(s.clone());
    }
    if let Some(b) = bound {
        z.push(b.clone());
    }
    sorted(z)
}

/// A certificate that `alpha` is not `<_1 beta`, or `None` when the engine
/// says `alpha <_1 beta`.
pub fn refute(alpha: &Ordinal, beta: &Ordinal) -> Result<Option<Certificate>, CertError> {
    if alpha >= beta {
        return Err(CertError::Malformed(format!("{alpha} >= {beta}")));
    }
    if reach::lt1(alpha, beta)? {
        return Ok(None);
    }
    if let Some(k) = alpha.as_nat().filter(|k| *k <= 1) {
        let z = (0..=k).map(Ordinal::nat).collect();
        return Ok(Some(Certificate::CardinalityWitness { z }));
    }
    if !alpha.is_additive_principal() {
        let (head, tail) = alpha.split_last().unwrap();
        let z = sorted(vec![head.clone(), tail.clone(), alpha.clone()]);
        return Ok(Some(Certificate::SumWitness { head, tail, z }));
    }
    if let Some(m) = principal_gap(alpha) {
        let z = vec![m.clone(), alpha.clone()];
        return Ok(Some(Certificate::MaxPrincipalWitness {
            m,
            p: alpha.clone(),
            z,
        }));
    }
    let (t, at_cap) = reach::m_local(alpha)?;
    if at_cap {
        return Err(ReachError::Scope(format!("{alpha} reaches {t}")).into());
    }
    let (n, s) = covering::decompose(alpha, &t).map_err(ReachError::from)?;
    let bound = match reach::prop_class(alpha, &t)?.sup_below(alpha) {
        SupBelow::Empty => None,
        SupBelow::Max(x) => Some(x),
        SupBelow::Cofinal => {
            return Err(CertError::Malformed(format!("{alpha} reaches past {t}")));
        }
    };
    let z = marker_set(alpha, &t, n, &s, &bound);
    Ok(Some(Certificate::ReachMarker { t, n, s, bound, z }))
}

/// Replays the certificate's argument symbolically.
pub fn verify_certificate(
    cert: &Certificate,
    alpha: &Ordinal,
    beta: &Ordinal,
) -> Result<bool, CertError> {
    if alpha >= beta || cert.z().iter().any(|x| x >= beta) {
        return Ok(false);
    }
    if cert.z().windows(2).any(|w| w[0] >= w[1]) {
        return Ok(false);
    }
    Ok(match cert {
        Certificate::CardinalityWitness { z } => {
            alpha.as_nat().is_some_and(|k| (z.len() as u64) > k)
        }
        Certificate::SumWitness { head, tail, z } => {
            head < alpha
                && tail < alpha
                && !head.is_zero()
                && !tail.is_zero()
                && head.add(tail) == *alpha
                && *z == sorted(vec![head.clone(), tail.clone(), alpha.clone()])
        }
        Certificate::MaxPrincipalWitness { m, p, z } => {
            m < alpha
                && p >= alpha
                && m.add(p) == *p
                && m.mul_omega() >= *alpha
                && *z == sorted(vec![m.clone(), p.clone()])
        }
        Certificate::ReachMarker { t, n, s, bound, z } => {
            if !alpha.is_additive_principal() || t <= alpha {
                return Ok(false);
            }
            let (m, at_cap) = reach::m_local(alpha)?;
            if at_cap || m != *t || !reach::le1_interval(alpha, t)?.verdict {
                return Ok(false);
            }
            if covering::decompose(alpha, t).map_err(ReachError::from)? != (*n, s.clone()) {
                return Ok(false);
            }
            let sup = reach::prop_class(alpha, t)?.sup_below(alpha);
            let bound_ok = match (&sup, bound) {
                (SupBelow::Empty, None) => true,
                (SupBelow::Max(x), Some(b)) => x == b,
                _ => false,
            };
            bound_ok && *z == marker_set(alpha, t, *n, s, bound)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn documented_schemas() {
        let a = o("w^2+w");
        let b = o("w^2+w+5");
        let c = refute(&a, &b).unwrap().unwrap();
        assert_eq!(c.z(), &[o("w"), o("w^2"), o("w^2+w")]);
        assert!(verify_certificate(&c, &a, &b).unwrap());

        let a = o("w^(w+1)");
        let b = a.succ();
        let c = refute(&a, &b).unwrap().unwrap();
        assert!(matches!(&c, Certificate::MaxPrincipalWitness { m, .. } if *m == o("w^w")));
        assert!(verify_certificate(&c, &a, &b).unwrap());

        let a = o("w^w");
        let b = o("w^w+2");
        let c = refute(&a, &b).unwrap().unwrap();
        assert!(matches!(&c, Certificate::ReachMarker { bound: None, .. }));
        assert!(verify_certificate(&c, &a, &b).unwrap());

        assert_eq!(refute(&a, &a.succ()).unwrap(), None);
    }

    #[test]
    fn tampered() {
        let a = o("w^2+w");
        let b = o("w^2+w+5");
        let bad = Certificate::SumWitness {
            head: o("w^2"),
            tail: o("w*2"),
            z: vec![o("w*2"), o("w^2"), o("w^2+w")],
        };
        assert!(!verify_certificate(&bad, &a, &b).unwrap());
        let c = refute(&o("1"), &o("5")).unwrap().unwrap();
        assert!(verify_certificate(&c, &o("1"), &o("5")).unwrap());
        assert!(!verify_certificate(&c, &o("2"), &o("5")).unwrap());
    }
}
