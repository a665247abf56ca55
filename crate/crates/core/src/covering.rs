//! Covering maps `g(0, a, c)` and trace sets `T(0, a, t)` on `[a, a*w)`.

use thiserror::Error;

use crate::ordinal::Ordinal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoveringError {
    #[error("{0} is not additively principal")]
    NotPrincipal(String),
    /// The argument lies outside `[a, a*w)`.
    #[error("{t} is outside [{a}, {a}*w)")]
    Range { a: String, t: String },
    #[error("{x} is outside the domain of g(0,{a},{c})")]
    OutOfDomain { a: String, c: String, x: String },
}

fn require_principal(a: &Ordinal) -> Result<(), CoveringError> {
    if a.is_additive_principal() {
        Ok(())
    } else {
        Err(CoveringError::NotPrincipal(a.to_string()))
    }
}

/// Writes `t = a*n + s` with `n >= 1` and `s < a`.
pub fn decompose(a: &Ordinal, t: &Ordinal) -> Result<(u64, Ordinal), CoveringError> {
    require_principal(a)?;
    let p = a.as_principal().unwrap();
    let range = || CoveringError::Range {
        a: a.to_string(),
        t: t.to_string(),
    };
    let lead = t.terms().first().ok_or_else(range)?;
    if lead.principal() != p {
        return Err(range());
    }
    let n = lead.coeff();
    let s = a.nat_mul(n).left_sub(t).expect("a*n <= t");
    Ok((n, s))
}

/// `T(0, a, t)`: `{t}` below `a`, `{t, s}` for `t = a*n + s`.
pub fn t_set(a: &Ordinal, t: &Ordinal) -> Result<Vec<Ordinal>, CoveringError> {
    require_principal(a)?;
    if t < a {
        return Ok(vec![t.clone()]);
    }
    let (_, s) = decompose(a, t)?;
    Ok(vec![t.clone(), s])
}

/// Whether `t` is in the domain of `g(0, a, c)`.
pub fn in_domain(a: &Ordinal, c: &Ordinal, t: &Ordinal) -> Result<bool, CoveringError> {
    require_principal(c)?;
    let ts = t_set(a, t)?;
    Ok(ts.iter().filter(|x| *x < a).all(|x| x < c))
}

/// Applies `g(0, a, c)`: fixes `x < min(a, c)` and sends `a*n + l` to `c*n + l` for `l < c`.
///
/// The inverse map is `g(0, c, a)`.
pub fn g0_apply(a: &Ordinal, c: &Ordinal, x: &Ordinal) -> Result<Ordinal, CoveringError> {
    require_principal(a)?;
    require_principal(c)?;
    let out = || CoveringError::OutOfDomain {
        a: a.to_string(),
        c: c.to_string(),
        x: x.to_string(),
    };
    if x < a {
        return if x < c { Ok(x.clone()) } else { Err(out()) };
    }
    let (n, l) = decompose(a, x)?;
    if l < *c {
        Ok(c.nat_mul(n).add(&l))
    } else {
        Err(out())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn decomposition() {
        assert_eq!(decompose(&o("w^w"), &o("w^w*3+w^2")).unwrap(), (3, o("w^2")));
        assert!(decompose(&o("w^w"), &o("w^5")).is_err());
        assert!(decompose(&o("w^w"), &o("w^(w+1)")).is_err());
        assert!(decompose(&o("w+1"), &o("w*2")).is_err());
    }

    #[test]
    fn traces() {
        assert_eq!(t_set(&o("w^w"), &o("w^w*2+w^3")).unwrap(), vec![o("w^w*2+w^3"), o("w^3")]);
        assert_eq!(t_set(&o("w^w"), &o("w^3")).unwrap(), vec![o("w^3")]);
    }

    #[test]
    fn maps() {
        let a = o("w^w");
        let c = o("w^4");
        assert_eq!(g0_apply(&a, &c, &o("w^w*2+w^3")).unwrap(), o("w^4*2+w^3"));
        assert_eq!(g0_apply(&a, &c, &o("w^3")).unwrap(), o("w^3"));
        assert!(g0_apply(&a, &c, &o("w^w+w^5")).is_err());
        assert!(g0_apply(&c, &a, &o("w^5")).is_err());
        assert_eq!(g0_apply(&c, &a, &o("w^4*2+w^3")).unwrap(), o("w^w*2+w^3"));
        assert!(in_domain(&a, &c, &o("w^w+w^3")).unwrap());
        assert!(!in_domain(&a, &c, &o("w^w+w^4")).unwrap());
    }
}
