use std::cmp::Ordering;

use super::Ordinal;

/// `mu` with `x = phi(m, mu)`, if `x` lies in the image of `phi_m`.
pub(super) fn phi_inverse(m: &Ordinal, x: &Ordinal) -> Option<Ordinal> {
    let p = x.as_principal()?;
    match p.level.cmp(m) {
        Ordering::Equal => Some(p.index.clone()),
        Ordering::Greater => Some(x.clone()),
        Ordering::Less => None,
    }
}

/// Largest `mu` with `phi(m, mu) <= x`.
pub(super) fn max_index_le(m: &Ordinal, x: &Ordinal) -> Option<Ordinal> {
    let p = x.leading()?;
    match p.level.cmp(m) {
        Ordering::Equal => Some(p.index.clone()),
        Ordering::Greater => Some(Ordinal::from_term(p.clone(), 1)),
        Ordering::Less => max_index_le(m, &p.index),
    }
}

/// Least `mu` with `phi(m, mu) >= x`.
pub(super) fn min_index_ge(m: &Ordinal, x: &Ordinal) -> Ordinal {
    let above = |y: &Ordinal| {
        max_index_le(m, y)
            .map(|mu| mu.succ())
            .unwrap_or_else(Ordinal::zero)
    };
    match x.as_principal() {
        None if x.is_zero() => Ordinal::zero(),
        None => above(&Ordinal::from_term(x.leading().unwrap().clone(), 1)),
        Some(p) => match p.level.cmp(m) {
            Ordering::Equal => p.index.clone(),
            Ordering::Greater => x.clone(),
            Ordering::Less => above(&p.index),
        },
    }
}
