use std::collections::BTreeMap;
use std::fmt;

use super::{Id, ModelError, Structure};

pub type Assignment = BTreeMap<String, Id>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atomic {
    Var(String),
    Const(String),
    /// A named element used as a parameter.
    Param(Id),
}

/// Flat terms: function symbols take atomic arguments only.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Atomic(Atomic),
    App(String, Vec<Atomic>),
}

impl Term {
    pub fn var(v: &str) -> Term {
        Term::Atomic(Atomic::Var(v.into()))
    }

    pub fn param(x: Id) -> Term {
        Term::Atomic(Atomic::Param(x))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Term::Atomic(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    Rel(String, Vec<Term>),
    /// `t1 = t2`; at least one side must be atomic.
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn eq(t1: Term, t2: Term) -> Result<Formula, ModelError> {
        if t1.is_atomic() || t2.is_atomic() {
            Ok(Formula::Eq(t1, t2))
        } else {
            Err(ModelError::NotFlat)
        }
    }

    pub fn negate(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn exists(vars: &[String], mut f: Formula) -> Formula {
        for v in vars.iter().rev() {
            f = Formula::Exists(v.clone(), Box::new(f));
        }
        f
    }

    /// Number of atomic formula occurrences.
    pub fn size(&self) -> usize {
        match self {
            Formula::True => 0,
            Formula::Rel(..) | Formula::Eq(..) => 1,
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => f.size(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::size).sum(),
            Formula::Implies(a, b) => a.size() + b.size(),
        }
    }
}

fn eval_atomic(s: &Structure, t: &Atomic, a: &Assignment) -> Result<Id, ModelError> {
    match t {
        Atomic::Var(v) => a.get(v).copied().ok_or_else(|| ModelError::Unbound(v.clone())),
        Atomic::Const(c) => {
            if !s.signature.constants.contains(c) {
                return Err(ModelError::UnknownSymbol(c.clone()));
            }
            s.constants
                .get(c)
                .copied()
                .ok_or_else(|| ModelError::Uninterpreted(c.clone()))
        }
        Atomic::Param(x) => Ok(*x),
    }
}

/// Value of `t` in the universe, and whether it lies in the carrier.
pub fn eval_term(s: &Structure, t: &Term, a: &Assignment) -> Result<(Id, bool), ModelError> {
    let v = match t {
        Term::Atomic(x) => eval_atomic(s, x, a)?,
        Term::App(f, args) => {
            if s.signature.function_arity(f) != Some(args.len()) {
                return Err(ModelError::UnknownSymbol(f.clone()));
            }
            let mut vals = Vec::with_capacity(args.len());
            for x in args {
                let v = eval_atomic(s, x, a)?;
                if !s.carrier.contains(&v) {
                    return Err(ModelError::OutsideCarrier(v, f.clone()));
                }
                vals.push(v);
            }
            s.functions
                .get(f)
                .and_then(|g| g.get(&vals))
                .copied()
                .ok_or_else(|| ModelError::Invalid(format!("{f} undefined at {vals:?}")))?
        }
    };
    Ok((v, s.carrier.contains(&v)))
}

/// Satisfaction of a quantifier-free formula.
pub fn satisfies_qf(s: &Structure, f: &Formula, a: &Assignment) -> Result<bool, ModelError> {
    eval(s, f, a, false)
}

/// Satisfaction with quantifiers ranging over the carrier.
pub fn satisfies(s: &Structure, f: &Formula, a: &Assignment) -> Result<bool, ModelError> {
    eval(s, f, a, true)
}

fn eval(s: &Structure, f: &Formula, a: &Assignment, quant: bool) -> Result<bool, ModelError> {
    Ok(match f {
        Formula::True => true,
        Formula::Rel(r, ts) => {
            if s.signature.relation_arity(r) != Some(ts.len()) {
                return Err(ModelError::UnknownSymbol(r.clone()));
            }
            let mut vals = Vec::with_capacity(ts.len());
            let mut inside = true;
            for t in ts {
                let (v, c) = eval_term(s, t, a)?;
                inside &= c;
                vals.push(v);
            }
            inside && s.relations.get(r).is_some_and(|rows| rows.contains(&vals))
        }
        Formula::Eq(t1, t2) => {
            if !t1.is_atomic() && !t2.is_atomic() {
                return Err(ModelError::NotFlat);
            }
            eval_term(s, t1, a)?.0 == eval_term(s, t2, a)?.0
        }
        Formula::Not(g) => !eval(s, g, a, quant)?,
        Formula::And(gs) => {
            for g in gs {
                if !eval(s, g, a, quant)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(gs) => {
            for g in gs {
                if eval(s, g, a, quant)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Implies(p, q) => !eval(s, p, a, quant)? || eval(s, q, a, quant)?,
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            if !quant {
                return Err(ModelError::Quantified);
            }
            let want = matches!(f, Formula::Exists(..));
            let mut b = a.clone();
            for x in &s.carrier {
                b.insert(v.clone(), *x);
                if eval(s, g, &b, quant)? == want {
                    return Ok(want);
                }
            }
            !want
        }
    })
}

impl fmt::Display for Atomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atomic::Var(v) => write!(f, "{v}"),
            Atomic::Const(c) => write!(f, "{c}"),
            Atomic::Param(x) => write!(f, "#{x}"),
        }
    }
}

fn join<T: fmt::Display>(xs: &[T], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Atomic(x) => write!(f, "{x}"),
            Term::App(g, args) => write!(f, "{g}({})", join(args, ",")),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::Rel(r, ts) => write!(f, "{r}({})", join(ts, ",")),
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Not(g) => match &**g {
                Formula::Eq(a, b) => write!(f, "{a} != {b}"),
                _ => write!(f, "!{g}"),
            },
            Formula::And(gs) if gs.is_empty() => write!(f, "true"),
            Formula::Or(gs) if gs.is_empty() => write!(f, "false"),
            Formula::And(gs) => write!(f, "({})", join(gs, " & ")),
            Formula::Or(gs) => write!(f, "({})", join(gs, " | ")),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Exists(v, g) => write!(f, "exists {v}. {g}"),
            Formula::Forall(v, g) => write!(f, "forall {v}. {g}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{equality_pair, Signature, SymbolSpec};
    use super::*;

    fn one_point() -> Structure {
        let sig = Signature {
            relations: vec![],
            functions: vec![SymbolSpec {
                name: "f".into(),
                arity: 1,
            }],
            constants: vec!["c".into()],
            equality: true,
        };
        Structure {
            signature: sig,
            carrier: [3].into(),
            universe: [3, 9].into(),
            relations: Default::default(),
            functions: [("f".to_string(), [(vec![3], 9)].into())].into(),
            constants: [("c".to_string(), 3)].into(),
        }
    }

    #[test]
    fn quasi_evaluation() {
        let s = one_point();
        s.validate().unwrap();
        let a: Assignment = [("w".to_string(), 3)].into();
        assert_eq!(eval_term(&s, &Term::var("w"), &a).unwrap(), (3, true));
        let fw = Term::App("f".into(), vec![Atomic::Var("w".into())]);
        assert_eq!(eval_term(&s, &fw, &a).unwrap(), (9, false));
        let c = Term::Atomic(Atomic::Const("c".into()));
        assert_eq!(eval_term(&s, &c, &a).unwrap(), (3, true));
        assert!(!satisfies_qf(&s, &Formula::eq(fw, c).unwrap(), &a).unwrap());
        assert!(eval_term(&s, &Term::var("v"), &a).is_err());
    }

    #[test]
    fn equality_pair_atoms() {
        let (a, _) = equality_pair(true);
        let asg: Assignment = [("w".to_string(), 0)].into();
        let r = Formula::Rel("~".into(), vec![Term::var("w"), Term::var("w")]);
        assert!(satisfies_qf(&a, &r, &asg).unwrap());
        let ne = Formula::negate(Formula::eq(Term::var("w"), Term::var("w")).unwrap());
        assert!(!satisfies_qf(&a, &ne, &asg).unwrap());
        let ex = Formula::Exists("w".into(), Box::new(r));
        assert!(satisfies_qf(&a, &ex, &asg).is_err());
        assert!(satisfies(&a, &ex, &Assignment::new()).unwrap());
    }
}
