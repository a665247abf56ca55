use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ordinal::{Kind, Ordinal};

/// The class `C(m, r, b)`: ordinals `g > b` in the image of `phi_m` whose
/// index `mu` satisfies `mu > 0` and `w^r | mu` when `r > 0`.
///
/// `r = 0` places no condition on the index, so `C(m, 0, b)` is the whole
/// image of `phi_m` above `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassDescriptor {
    pub level: Ordinal,
    pub div_exp: Ordinal,
    pub lower_bound: Ordinal,
}

/// Outcome of [`ClassDescriptor::sup_below`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SupBelow {
    Empty,
    Max(Ordinal),
    /// Members are cofinal in the argument.
    Cofinal,
}

impl ClassDescriptor {
    pub fn new(level: Ordinal, div_exp: Ordinal, lower_bound: Ordinal) -> Self {
        ClassDescriptor {
            level,
            div_exp,
            lower_bound,
        }
    }

    /// Additive principals `w^g`, `g >= 1`.
    pub fn principals() -> Self {
        ClassDescriptor::new(Ordinal::zero(), Ordinal::zero(), Ordinal::one())
    }

    /// `Lim P`, the principals `w^g` with `g` a limit.
    pub fn lim_principals() -> Self {
        ClassDescriptor::new(Ordinal::zero(), Ordinal::one(), Ordinal::zero())
    }

    fn index_ok(&self, mu: &Ordinal) -> bool {
        self.div_exp.is_zero() || (!mu.is_zero() && mu.nu().unwrap() >= self.div_exp)
    }

    pub fn member(&self, g: &Ordinal) -> bool {
        if *g <= self.lower_bound {
            return false;
        }
        match Ordinal::phi_inverse(&self.level, g) {
            Some(mu) => self.index_ok(&mu),
            None => false,
        }
    }

    // least index >= mu satisfying the divisibility condition
    fn round_up(&self, mu: Ordinal) -> Ordinal {
        if self.index_ok(&mu) {
            return mu;
        }
        multiple_part(&mu, &self.div_exp).add(&Ordinal::omega_pow(&self.div_exp))
    }

    /// Least member strictly above `xi`.
    pub fn next_above(&self, xi: &Ordinal) -> Ordinal {
        let lo = if *xi > self.lower_bound {
            xi
        } else {
            &self.lower_bound
        };
        let mu = Ordinal::max_index_le(&self.level, lo)
            .map(|m| m.succ())
            .unwrap_or_else(Ordinal::zero);
        Ordinal::phi(&self.level, &self.round_up(mu))
    }

    /// Supremum of the members below `beta`.
    pub fn sup_below(&self, beta: &Ordinal) -> SupBelow {
        if *beta <= self.lower_bound {
            return SupBelow::Empty;
        }
        let lambda = Ordinal::min_index_ge(&self.level, beta);
        let top = if self.div_exp.is_zero() {
            match lambda.classify() {
                Kind::Zero => return SupBelow::Empty,
                Kind::Successor(p) => p,
                Kind::Limit => return SupBelow::Cofinal,
            }
        } else {
            let h = multiple_part(&lambda, &self.div_exp);
            if h != lambda {
                h
            } else if lambda.is_zero() {
                return SupBelow::Empty;
            } else if lambda.nu().unwrap() > self.div_exp {
                return SupBelow::Cofinal;
            } else {
                lambda.split_last().unwrap().0
            }
        };
        if !self.index_ok(&top) {
            return SupBelow::Empty;
        }
        let g = Ordinal::phi(&self.level, &top);
        if g > self.lower_bound {
            SupBelow::Max(g)
        } else {
            SupBelow::Empty
        }
    }
}

// the summands of `mu` with exponent >= r
fn multiple_part(mu: &Ordinal, r: &Ordinal) -> Ordinal {
    let mut acc = Ordinal::zero();
    for t in mu.terms() {
        let e = t.principal().log();
        if e < *r {
            break;
        }
        acc = acc.add(&Ordinal::omega_pow(&e).nat_mul(t.coeff()));
    }
    acc
}

impl fmt::Display for ClassDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C({},{},{})", self.level, self.div_exp, self.lower_bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn c(m: &str, r: &str, b: &str) -> ClassDescriptor {
        ClassDescriptor::new(o(m), o(r), o(b))
    }

    #[test]
    fn membership() {
        let lim = ClassDescriptor::lim_principals();
        assert!(lim.member(&o("w^w")));
        assert!(!lim.member(&o("w^5")));
        assert!(!c("1", "1", "0").member(&o("e(0)")));
        assert!(c("1", "1", "0").member(&o("e(w)")));
        assert!(ClassDescriptor::principals().member(&o("w")));
        assert!(!ClassDescriptor::principals().member(&o("1")));
        assert!(c("0", "1", "0").member(&o("e(0)")));
    }

    #[test]
    fn next_members() {
        assert_eq!(ClassDescriptor::lim_principals().next_above(&o("w^w")), o("w^(w*2)"));
        assert_eq!(c("1", "1", "0").next_above(&o("0")), o("e(w)"));
        assert_eq!(c("0", "1", "5").next_above(&o("0")), o("w^w"));
        assert_eq!(c("0", "2", "0").next_above(&o("w^w")), o("w^w^2"));
        assert_eq!(c("2", "0", "0").next_above(&o("e(5)")), o("phi(2,0)"));
        assert_eq!(c("1", "0", "0").next_above(&o("phi(2,0)")), o("e(phi(2,0)+1)"));
    }

    #[test]
    fn sups() {
        assert_eq!(ClassDescriptor::lim_principals().sup_below(&o("w^w")), SupBelow::Empty);
        assert_eq!(ClassDescriptor::principals().sup_below(&o("w^w")), SupBelow::Cofinal);
        assert_eq!(c("1", "1", "0").sup_below(&o("e(w+1)")), SupBelow::Max(o("e(w)")));
        assert_eq!(c("1", "1", "0").sup_below(&o("e(w*2)")), SupBelow::Max(o("e(w)")));
        assert_eq!(c("1", "1", "0").sup_below(&o("e(w^2)")), SupBelow::Cofinal);
        assert_eq!(ClassDescriptor::principals().sup_below(&o("w^3+1")), SupBelow::Max(o("w^3")));
        assert_eq!(ClassDescriptor::principals().sup_below(&o("w")), SupBelow::Empty);
    }
}
