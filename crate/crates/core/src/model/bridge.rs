use std::collections::BTreeMap;

use super::{Id, Signature, Structure, SymbolSpec};
use crate::ordinal::Ordinal;
use crate::patterns::FiniteConfig;

/// Encodes a configuration as a non-closed structure: element `i` gets id `i`,
/// `+` is a binary function whose values outside the set get fresh ids, and
/// `<`, `<1` are binary relations.
pub fn config_structure(config: &FiniteConfig) -> Structure {
    let n = config.len();
    let sym = |name: &str| SymbolSpec {
        name: name.into(),
        arity: 2,
    };
    let signature = Signature {
        relations: vec![sym("<"), sym("<1")],
        functions: vec![sym("+")],
        constants: Vec::new(),
        equality: true,
    };
    let carrier = (0..n as Id).collect();
    let mut fresh: BTreeMap<Ordinal, Id> = BTreeMap::new();
    let mut plus = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let v = match config.add_table[i][j] {
                Some(k) => k as Id,
                None => {
                    let sum = config.elements[i].add(&config.elements[j]);
                    let next = (n + fresh.len()) as Id;
                    *fresh.entry(sum).or_insert(next)
                }
            };
            plus.insert(vec![i as Id, j as Id], v);
        }
    }
    let universe = (0..(n + fresh.len()) as Id).collect();
    let mut less = std::collections::BTreeSet::new();
    let mut reach = std::collections::BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            less.insert(vec![i as Id, j as Id]);
            if config.lt1_table[i][j] {
                reach.insert(vec![i as Id, j as Id]);
            }
        }
    }
    Structure {
        signature,
        carrier,
        universe,
        relations: [("<".to_string(), less), ("<1".to_string(), reach)].into(),
        functions: [("+".to_string(), plus)].into(),
        constants: BTreeMap::new(),
    }
}
