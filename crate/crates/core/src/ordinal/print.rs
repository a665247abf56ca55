use std::fmt;

use super::{Ordinal, VeblenTerm};

impl fmt::Display for VeblenTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.level.is_zero() {
            match self.index.as_nat() {
                Some(0) => write!(f, "1"),
                Some(1) => write!(f, "w"),
                _ if is_factor(&self.index) => write!(f, "w^{}", self.index),
                _ => write!(f, "w^({})", self.index),
            }
        } else if self.level.as_nat() == Some(1) {
            write!(f, "e({})", self.index)
        } else {
            write!(f, "phi({},{})", self.level, self.index)
        }
    }
}

fn is_factor(x: &Ordinal) -> bool {
    x.is_finite() || x.as_principal().is_some()
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if t.principal.is_one() {
                write!(f, "{}", t.coeff)?;
            } else if t.coeff == 1 {
                write!(f, "{}", t.principal)?;
            } else {
                write!(f, "{}*{}", t.principal, t.coeff)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::super::Ordinal;

    #[test]
    fn canonical_forms() {
        for s in [
            "0", "7", "w", "w*5+3", "w^2", "w^w", "w^(w+1)", "w^(e(0)+1)", "e(0)", "e(w)",
            "phi(2,0)", "phi(w,e(0)+1)*3+w^w^w+2", "w^w^2*3",
        ] {
            let x: Ordinal = s.parse().unwrap();
            assert_eq!(x.to_string(), s);
        }
    }
}
