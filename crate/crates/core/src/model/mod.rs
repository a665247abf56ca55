//! Finite non-closed structures: function values may leave the carrier.

mod bridge;
mod formula;
pub mod gen;
mod sigma1;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bridge::config_structure;
pub use formula::{eval_term, satisfies, satisfies_qf, Assignment, Atomic, Formula, Term};
pub use sigma1::{
    gamma_diagram, restrict_isomorphism, sigma1_check_formulas, sigma1_check_iso,
    sigma1_counterexample, Counterexample, Direction,
};

pub type Id = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error("json: {0}")]
    Json(String),
    #[error("unbound variable {0}")]
    Unbound(String),
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error("constant {0} is not interpreted")]
    Uninterpreted(String),
    #[error("argument {0} of {1} lies outside the carrier")]
    OutsideCarrier(Id, String),
    #[error("formula is not quantifier free")]
    Quantified,
    #[error("equality needs an atomic side")]
    NotFlat,
    #[error("not a substructure: {0}")]
    NotSubstructure(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("restriction is not an isomorphism")]
    Restriction,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolSpec {
    pub name: String,
    pub arity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Signature {
    #[serde(default)]
    pub relations: Vec<SymbolSpec>,
    #[serde(default)]
    pub functions: Vec<SymbolSpec>,
    #[serde(default)]
    pub constants: Vec<String>,
    #[serde(default)]
    pub equality: bool,
}

impl Signature {
    pub fn relation_arity(&self, name: &str) -> Option<usize> {
        self.relations.iter().find(|r| r.name == name).map(|r| r.arity)
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.iter().find(|r| r.name == name).map(|r| r.arity)
    }

    pub fn max_arity(&self) -> usize {
        self.relations
            .iter()
            .chain(self.functions.iter())
            .map(|s| s.arity)
            .max()
            .unwrap_or(1)
    }
}

/// A finite structure whose functions are total on carrier tuples but may
/// take values anywhere in the universe. Constants may be absent in
/// induced substructures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    pub signature: Signature,
    pub carrier: BTreeSet<Id>,
    pub universe: BTreeSet<Id>,
    pub relations: BTreeMap<String, BTreeSet<Vec<Id>>>,
    pub functions: BTreeMap<String, BTreeMap<Vec<Id>, Id>>,
    pub constants: BTreeMap<String, Id>,
}

const MAX_CARRIER: usize = 64;
const MAX_TUPLES: u64 = 1 << 16;

/// Every tuple of length `n` over `xs`, lexicographically.
pub fn tuples(xs: &[Id], n: usize) -> Vec<Vec<Id>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * xs.len());
        for t in &out {
            for x in xs {
                let mut u = t.clone();
                u.push(*x);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

impl Structure {
    pub fn carrier_vec(&self) -> Vec<Id> {
        self.carrier.iter().copied().collect()
    }

    /// Checks the structural invariants.
    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |m: String| Err(ModelError::Invalid(m));
        let sig = &self.signature;
        if self.carrier.len() > MAX_CARRIER {
            return bad(format!("carrier larger than {MAX_CARRIER}"));
        }
        if !self.carrier.is_subset(&self.universe) {
            return bad("carrier is not contained in the universe".into());
        }
        let mut names = BTreeSet::new();
        for s in sig.relations.iter().chain(sig.functions.iter()) {
            if s.arity == 0 {
                return bad(format!("symbol {} has arity 0", s.name));
            }
            if !names.insert(s.name.clone()) {
                return bad(format!("symbol {} declared twice", s.name));
            }
        }
        for c in &sig.constants {
            if !names.insert(c.clone()) {
                return bad(format!("symbol {c} declared twice"));
            }
        }
        for (name, rows) in &self.relations {
            let Some(k) = sig.relation_arity(name) else {
                return bad(format!("undeclared relation {name}"));
            };
            for row in rows {
                if row.len() != k || row.iter().any(|x| !self.carrier.contains(x)) {
                    return bad(format!("bad tuple {row:?} in {name}"));
                }
            }
        }
        for (name, graph) in &self.functions {
            let Some(k) = sig.function_arity(name) else {
                return bad(format!("undeclared function {name}"));
            };
            for (args, v) in graph {
                if args.len() != k
                    || args.iter().any(|x| !self.carrier.contains(x))
                    || !self.universe.contains(v)
                {
                    return bad(format!("bad entry {args:?} -> {v} in {name}"));
                }
            }
            let need = (self.carrier.len() as u64).checked_pow(k as u32);
            if need.is_none_or(|n| n > MAX_TUPLES) {
                return bad(format!("function {name} has too many argument tuples"));
            }
            if graph.len() as u64 != need.unwrap() {
                return bad(format!("function {name} is not total on the carrier"));
            }
        }
        for f in &sig.functions {
            if !self.functions.contains_key(&f.name) && !self.carrier.is_empty() {
                return bad(format!("function {} has no graph", f.name));
            }
        }
        for (c, v) in &self.constants {
            if !sig.constants.contains(c) {
                return bad(format!("undeclared constant {c}"));
            }
            if !self.carrier.contains(v) {
                return bad(format!("constant {c} lies outside the carrier"));
            }
        }
        Ok(())
    }

    /// The substructure induced on `subset` (constants outside it are dropped).
    pub fn induced(&self, subset: &BTreeSet<Id>) -> Structure {
        let inside = |t: &Vec<Id>| t.iter().all(|x| subset.contains(x));
        Structure {
            signature: self.signature.clone(),
            carrier: subset.clone(),
            universe: self.universe.clone(),
            relations: self
                .relations
                .iter()
                .map(|(k, rows)| (k.clone(), rows.iter().filter(|t| inside(t)).cloned().collect()))
                .collect(),
            functions: self
                .functions
                .iter()
                .map(|(k, g)| {
                    let g = g
                        .iter()
                        .filter(|(t, _)| inside(t))
                        .map(|(t, v)| (t.clone(), *v))
                        .collect();
                    (k.clone(), g)
                })
                .collect(),
            constants: self
                .constants
                .iter()
                .filter(|(_, v)| subset.contains(v))
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
        }
    }

    /// Whether `self` is a substructure of `b`: same signature, carrier
    /// inclusion, `R^A = R^B & A^n`, `f^A = f^B` on `A`, shared constants.
    pub fn check_substructure_of(&self, b: &Structure) -> Result<(), ModelError> {
        let fail = |m: &str| Err(ModelError::NotSubstructure(m.into()));
        if self.signature != b.signature {
            return fail("signatures differ");
        }
        if !self.carrier.is_subset(&b.carrier) {
            return fail("carrier is not contained in the larger carrier");
        }
        let induced = b.induced(&self.carrier);
        let rel = |s: &Structure, k: &str| s.relations.get(k).cloned().unwrap_or_default();
        for r in &self.signature.relations {
            if rel(self, &r.name) != rel(&induced, &r.name) {
                return fail("relations differ on the smaller carrier");
            }
        }
        let fun = |s: &Structure, k: &str| s.functions.get(k).cloned().unwrap_or_default();
        for f in &self.signature.functions {
            if fun(self, &f.name) != fun(&induced, &f.name) {
                return fail("functions differ on the smaller carrier");
            }
        }
        if self.constants != induced.constants {
            return fail("constants differ");
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Structure, ModelError> {
        let raw: RawStructure =
            serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        raw.into_structure()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&RawStructure::from(self)).unwrap()
    }
}

/// Whether `h` is an isomorphism from `s1` onto `s2`.
pub fn is_isomorphism(h: &BTreeMap<Id, Id>, s1: &Structure, s2: &Structure) -> bool {
    if s1.signature != s2.signature {
        return false;
    }
    if h.keys().copied().collect::<BTreeSet<_>>() != s1.carrier {
        return false;
    }
    let image: BTreeSet<Id> = h.values().copied().collect();
    if image.len() != h.len() || image != s2.carrier {
        return false;
    }
    let map = |t: &Vec<Id>| t.iter().map(|x| h[x]).collect::<Vec<_>>();
    for c in &s1.signature.constants {
        match (s1.constants.get(c), s2.constants.get(c)) {
            (None, None) => {}
            (Some(a), Some(b)) if h[a] == *b => {}
            _ => return false,
        }
    }
    for r in &s1.signature.relations {
        let empty = BTreeSet::new();
        let r1 = s1.relations.get(&r.name).unwrap_or(&empty);
        let r2 = s2.relations.get(&r.name).unwrap_or(&empty);
        let mapped: BTreeSet<Vec<Id>> = r1.iter().map(map).collect();
        if mapped != *r2 {
            return false;
        }
    }
    for f in &s1.signature.functions {
        let empty = BTreeMap::new();
        let g1 = s1.functions.get(&f.name).unwrap_or(&empty);
        let g2 = s2.functions.get(&f.name).unwrap_or(&empty);
        if g1.len() != g2.len() {
            return false;
        }
        for (args, v) in g1 {
            let Some(w) = g2.get(&map(args)) else {
                return false;
            };
            let (in1, in2) = (s1.carrier.contains(v), s2.carrier.contains(w));
            if in1 != in2 || (in1 && h[v] != *w) {
                return false;
            }
        }
    }
    true
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStructure {
    signature: Signature,
    carrier: Vec<Id>,
    #[serde(default)]
    universe: Vec<Id>,
    #[serde(default)]
    relations: BTreeMap<String, Vec<Vec<Id>>>,
    #[serde(default)]
    functions: BTreeMap<String, Vec<Vec<Id>>>,
    #[serde(default)]
    constants: BTreeMap<String, Id>,
}

impl RawStructure {
    fn into_structure(self) -> Result<Structure, ModelError> {
        let carrier: BTreeSet<Id> = self.carrier.into_iter().collect();
        let mut universe: BTreeSet<Id> = self.universe.into_iter().collect();
        universe.extend(carrier.iter().copied());
        let mut functions = BTreeMap::new();
        for (name, rows) in self.functions {
            let mut g = BTreeMap::new();
            for mut row in rows {
                let Some(v) = row.pop() else {
                    return Err(ModelError::Invalid(format!("empty row in {name}")));
                };
                if g.insert(row.clone(), v).is_some_and(|old| old != v) {
                    return Err(ModelError::Invalid(format!("{name}{row:?} defined twice")));
                }
            }
            functions.insert(name, g);
        }
        let s = Structure {
            signature: self.signature,
            carrier,
            universe,
            relations: self
                .relations
                .into_iter()
                .map(|(k, v)| (k, v.into_iter().collect()))
                .collect(),
            functions,
            constants: self.constants,
        };
        s.validate()?;
        Ok(s)
    }
}

impl From<&Structure> for RawStructure {
    fn from(s: &Structure) -> Self {
        RawStructure {
            signature: s.signature.clone(),
            carrier: s.carrier.iter().copied().collect(),
            universe: s.universe.iter().copied().collect(),
            relations: s
                .relations
                .iter()
                .map(|(k, v)| (k.clone(), v.iter().cloned().collect()))
                .collect(),
            functions: s
                .functions
                .iter()
                .map(|(k, g)| {
                    let rows = g
                        .iter()
                        .map(|(a, v)| {
                            let mut r = a.clone();
                            r.push(*v);
                            r
                        })
                        .collect();
                    (k.clone(), rows)
                })
                .collect(),
            constants: s.constants.clone(),
        }
    }
}

/// The two structures of the equality pair: `A = {0}` inside `B = {0,1}`,
/// with a binary relation holding everywhere.
pub fn equality_pair(equality: bool) -> (Structure, Structure) {
    let sig = Signature {
        relations: vec![SymbolSpec {
            name: "~".into(),
            arity: 2,
        }],
        equality,
        ..Default::default()
    };
    let b_carrier: BTreeSet<Id> = [0, 1].into();
    let b = Structure {
        signature: sig,
        carrier: b_carrier.clone(),
        universe: b_carrier.clone(),
        relations: [("~".to_string(), tuples(&[0, 1], 2).into_iter().collect())].into(),
        functions: BTreeMap::new(),
        constants: BTreeMap::new(),
    };
    let a = b.induced(&[0].into());
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let text = r#"{"signature":{"relations":[{"name":"R","arity":1}],
            "functions":[{"name":"f","arity":1}],"constants":["c"],"equality":true},
            "carrier":[3],"universe":[3,9],"relations":{"R":[[3]]},
            "functions":{"f":[[3,9]]},"constants":{"c":3}}"#;
        let s = Structure::from_json(text).unwrap();
        assert_eq!(Structure::from_json(&s.to_json()).unwrap(), s);
        assert!(Structure::from_json(r#"{"signature":{},"carrier":[1],"constants":{"c":1}}"#).is_err());
        assert!(Structure::from_json("[]").is_err());
    }

    #[test]
    fn equality_pair_isomorphisms() {
        let (a, b) = equality_pair(true);
        let id: BTreeMap<Id, Id> = [(0, 0), (1, 1)].into();
        assert!(is_isomorphism(&id, &b, &b));
        let collapse: BTreeMap<Id, Id> = [(0, 0), (1, 0)].into();
        assert!(!is_isomorphism(&collapse, &b, &a));
        let swap: BTreeMap<Id, Id> = [(0, 1), (1, 0)].into();
        assert!(is_isomorphism(&swap, &b, &b));
        a.check_substructure_of(&b).unwrap();
    }
}
