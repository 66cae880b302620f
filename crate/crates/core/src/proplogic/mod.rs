//! Propositional logic: syntax, decision procedures, the sentence
//! enumeration ψ_n, and finite first-order model checking.

pub mod corpus;
pub mod enumerate;
pub mod fo;
mod formula;
mod parse;
pub mod sat;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use enumerate::{EnumerationError, SentenceEnumeration, ENUMERATION_VERSION};
pub use formula::{evaluate, Connective, Formula, Valuation};
pub use parse::{parse_canonical, parse_formula, parse_theory_lines, ParseError};

/// A finite set of axioms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Theory {
    axioms: BTreeSet<Formula>,
}

impl Theory {
    pub fn new() -> Self {
        Theory::default()
    }

    pub fn axioms(&self) -> impl Iterator<Item = &Formula> {
        self.axioms.iter()
    }

    pub fn axiom_vec(&self) -> Vec<Formula> {
        self.axioms.iter().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    pub fn insert(&mut self, f: Formula) -> bool {
        self.axioms.insert(f)
    }

    pub fn atoms(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.axioms.iter().for_each(|f| f.collect_atoms(&mut out));
        out
    }

    /// Parses a theory file (one formula per line, `#` comments).
    pub fn parse(text: &str) -> Result<Theory, (usize, ParseError)> {
        parse_theory_lines(text).map(Theory::from_iter)
    }

    /// Parses axioms separated by `;`, e.g. `"p0; p0 -> p1"`.
    pub fn parse_inline(text: &str) -> Result<Theory, ParseError> {
        text.split(';').map(str::trim).filter(|s| !s.is_empty()).map(parse_formula).collect()
    }

    /// One axiom per line in the input grammar.
    pub fn to_file_string(&self) -> String {
        self.axioms.iter().map(|f| format!("{f}\n")).collect()
    }
}

impl FromIterator<Formula> for Theory {
    fn from_iter<I: IntoIterator<Item = Formula>>(iter: I) -> Self {
        Theory { axioms: iter.into_iter().collect() }
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.axioms.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join("; "))
    }
}

impl Serialize for Theory {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Theory {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
        Theory::parse_inline(inner).map_err(serde::de::Error::custom)
    }
}

/// `premises ⊨ conclusions` for formula slices.
pub fn entails_formulas(premises: &[Formula], conclusions: &[Formula]) -> bool {
    let mut atoms = BTreeSet::new();
    premises.iter().chain(conclusions).for_each(|f| f.collect_atoms(&mut atoms));
    if atoms.len() > sat::TRUTH_TABLE_ATOM_LIMIT {
        sat::entails_dpll(premises, conclusions)
    } else {
        sat::entails_truth_table(premises, conclusions)
    }
}

/// Every valuation satisfying all of `t` satisfies all of `u`.
pub fn entails(t: &Theory, u: &Theory) -> bool {
    entails_formulas(&t.axiom_vec(), &u.axiom_vec())
}

pub fn entails_formula(t: &Theory, f: &Formula) -> bool {
    entails_formulas(&t.axiom_vec(), std::slice::from_ref(f))
}

pub fn equivalent(t: &Theory, u: &Theory) -> bool {
    entails(t, u) && entails(u, t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Tautological,
    ConsistentNontautological,
    Inconsistent,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Tautological => "tautological",
            Classification::ConsistentNontautological => "consistent-nontautological",
            Classification::Inconsistent => "inconsistent",
        })
    }
}

/// The empty theory is tautological; a theory both tautological and
/// inconsistent cannot exist, so the order of the checks is immaterial.
pub fn classify(t: &Theory) -> Classification {
    let axioms = t.axiom_vec();
    if entails_formulas(&[], &axioms) {
        Classification::Tautological
    } else if entails_formulas(&axioms, &[Formula::False]) {
        Classification::Inconsistent
    } else {
        Classification::ConsistentNontautological
    }
}
