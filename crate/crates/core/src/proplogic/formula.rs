use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Propositional formula over atoms `p0, p1, …`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Formula {
    False,
    True,
    Atom(u32),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

/// Binary connectives, in canonical token order.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Connective {
    And,
    Or,
    Implies,
    Iff,
}

impl Connective {
    pub const ALL: [Connective; 4] = [Connective::And, Connective::Or, Connective::Implies, Connective::Iff];

    pub fn apply(self, a: Formula, b: Formula) -> Formula {
        let (a, b) = (Box::new(a), Box::new(b));
        match self {
            Connective::And => Formula::And(a, b),
            Connective::Or => Formula::Or(a, b),
            Connective::Implies => Formula::Implies(a, b),
            Connective::Iff => Formula::Iff(a, b),
        }
    }
}

impl Formula {
    pub fn atom(i: u32) -> Formula {
        Formula::Atom(i)
    }

    pub fn negate(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: Formula) -> Formula {
        Formula::Implies(Box::new(self), Box::new(rhs))
    }

    pub fn iff(self, rhs: Formula) -> Formula {
        Formula::Iff(Box::new(self), Box::new(rhs))
    }

    /// Conjunction of all formulas, `⊤` when empty.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        let mut iter = items.into_iter();
        match iter.next() {
            None => Formula::True,
            Some(first) => iter.fold(first, Formula::and),
        }
    }

    pub fn eval<F: Fn(u32) -> bool>(&self, atom: &F) -> bool {
        match self {
            Formula::False => false,
            Formula::True => true,
            Formula::Atom(i) => atom(*i),
            Formula::Not(a) => !a.eval(atom),
            Formula::And(a, b) => a.eval(atom) && b.eval(atom),
            Formula::Or(a, b) => a.eval(atom) || b.eval(atom),
            Formula::Implies(a, b) => !a.eval(atom) || b.eval(atom),
            Formula::Iff(a, b) => a.eval(atom) == b.eval(atom),
        }
    }

    pub fn collect_atoms(&self, out: &mut BTreeSet<u32>) {
        match self {
            Formula::False | Formula::True => {}
            Formula::Atom(i) => {
                out.insert(*i);
            }
            Formula::Not(a) => a.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::False | Formula::True | Formula::Atom(_) => 1,
            Formula::Not(a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// Fully parenthesised rendering over the enumeration alphabet
    /// `⊥ ⊤ p 0-9 ¬ ∧ ∨ → ↔ ( )`. Every formula has exactly one such string.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        self.write_canonical(&mut s);
        s
    }

    fn write_canonical(&self, out: &mut String) {
        match self {
            Formula::False => out.push('⊥'),
            Formula::True => out.push('⊤'),
            Formula::Atom(i) => {
                out.push('p');
                out.push_str(&i.to_string());
            }
            Formula::Not(a) => {
                out.push('¬');
                a.write_canonical(out);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                out.push('(');
                a.write_canonical(out);
                out.push(match self {
                    Formula::And(..) => '∧',
                    Formula::Or(..) => '∨',
                    Formula::Implies(..) => '→',
                    _ => '↔',
                });
                b.write_canonical(out);
                out.push(')');
            }
        }
    }

    /// Number of tokens in [`Formula::canonical`].
    pub fn canonical_len(&self) -> usize {
        match self {
            Formula::False | Formula::True => 1,
            Formula::Atom(i) => 1 + decimal_digits(*i),
            Formula::Not(a) => 1 + a.canonical_len(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                3 + a.canonical_len() + b.canonical_len()
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(_) => 5,
            _ => 6,
        }
    }
}

pub(crate) fn decimal_digits(mut n: u32) -> usize {
    let mut d = 1;
    while n >= 10 {
        n /= 10;
        d += 1;
    }
    d
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Formula, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

/// ASCII rendering in the input grammar with minimal parentheses; parses
/// back to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::False => f.write_str("F"),
            Formula::True => f.write_str("T"),
            Formula::Atom(i) => write!(f, "p{i}"),
            Formula::Not(a) => {
                f.write_str("!")?;
                write_child(f, a, a.precedence() < 5)
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                let p = self.precedence();
                let op = if p == 4 { " & " } else { " | " };
                write_child(f, a, a.precedence() < p)?;
                f.write_str(op)?;
                write_child(f, b, b.precedence() <= p)
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                let p = self.precedence();
                let op = if p == 2 { " -> " } else { " <-> " };
                write_child(f, a, a.precedence() <= p)?;
                f.write_str(op)?;
                write_child(f, b, b.precedence() < p)
            }
        }
    }
}

/// Truth assignment to atoms, with a default for atoms not listed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Valuation {
    assignment: BTreeMap<u32, bool>,
    default: bool,
}

impl Valuation {
    pub fn new(default: bool) -> Self {
        Valuation { assignment: BTreeMap::new(), default }
    }

    pub fn with(mut self, atom: u32, value: bool) -> Self {
        self.assignment.insert(atom, value);
        self
    }

    pub fn set(&mut self, atom: u32, value: bool) {
        self.assignment.insert(atom, value);
    }

    pub fn get(&self, atom: u32) -> bool {
        self.assignment.get(&atom).copied().unwrap_or(self.default)
    }

    /// The valuation that sets `atoms[i]` to bit `i` of `mask`.
    pub fn from_mask(atoms: &[u32], mask: u64) -> Self {
        let mut v = Valuation::new(false);
        for (i, &a) in atoms.iter().enumerate() {
            v.set(a, (mask >> i) & 1 == 1);
        }
        v
    }

    /// Parses `p0=1,p1=0` (also `true`/`false`, `T`/`F`). Unlisted atoms
    /// default to false.
    pub fn parse(text: &str) -> Result<Valuation, String> {
        let mut v = Valuation::new(false);
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, value) = part.split_once('=').ok_or_else(|| format!("expected atom=value in {part:?}"))?;
            let idx = name
                .trim()
                .strip_prefix('p')
                .and_then(|d| d.parse::<u32>().ok())
                .ok_or_else(|| format!("bad atom name {name:?}"))?;
            let value = match value.trim() {
                "1" | "true" | "T" => true,
                "0" | "false" | "F" => false,
                other => return Err(format!("bad truth value {other:?}")),
            };
            v.set(idx, value);
        }
        Ok(v)
    }

    pub fn evaluate(&self, f: &Formula) -> bool {
        f.eval(&|a| self.get(a))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.assignment.iter().map(|(a, v)| format!("p{a}={}", u8::from(*v))).collect();
        f.write_str(&parts.join(","))
    }
}

pub fn evaluate(v: &Valuation, f: &Formula) -> bool {
    v.evaluate(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_strings() {
        let f = Formula::atom(0).implies(Formula::atom(1).and(Formula::True.negate()));
        assert_eq!(f.canonical(), "(p0→(p1∧¬⊤))");
        assert_eq!(f.canonical_len(), f.canonical().chars().count());
        assert_eq!(Formula::atom(123).canonical_len(), 4);
    }

    #[test]
    fn display_uses_minimal_parentheses() {
        let f = Formula::atom(0).implies(Formula::atom(1).implies(Formula::atom(2)));
        assert_eq!(f.to_string(), "p0 -> p1 -> p2");
        let g = Formula::atom(0).implies(Formula::atom(1)).implies(Formula::atom(2));
        assert_eq!(g.to_string(), "(p0 -> p1) -> p2");
        let h = Formula::atom(0).and(Formula::atom(0).negate()).negate();
        assert_eq!(h.to_string(), "!(p0 & !p0)");
    }

    #[test]
    fn truth_table_semantics() {
        let v = Valuation::new(false).with(0, true);
        assert!(v.evaluate(&Formula::atom(0).or(Formula::atom(0).negate())));
        assert!(!v.evaluate(&Formula::False));
        assert!(!v.evaluate(&Formula::atom(0).implies(Formula::atom(1))));
        assert!(v.evaluate(&Formula::atom(1).iff(Formula::False)));
    }

    #[test]
    fn valuation_text() {
        let v = Valuation::parse("p0=1, p2=false").unwrap();
        assert!(v.get(0));
        assert!(!v.get(1));
        assert!(!v.get(2));
        assert_eq!(v.to_string(), "p0=1,p2=0");
        assert!(Valuation::parse("q0=1").is_err());
    }
}
