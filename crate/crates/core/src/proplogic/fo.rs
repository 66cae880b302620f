//! First-order sentences over a relational vocabulary with equality,
//! checked by brute force on finite structures.
//!
//! Sentence grammar (same connectives and precedence as propositional
//! formulas; a quantifier body extends as far right as possible):
//!
//! ```text
//! forall x. φ    exists x φ    ∀x φ    ∃x φ
//! R(x, y)    x = y    x != y    x < y    P      (P nullary)
//! ```
//!
//! Structure files:
//!
//! ```text
//! universe 1 2 3
//! relation < 2
//! 1 2
//! 1 3
//! 2 3
//! relation P 0
//! ()
//! ```

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use super::formula::{Formula, Valuation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FoError {
    #[error("unknown relation {0:?}")]
    UnknownRelation(String),
    #[error("relation {name:?} has arity {expected}, used with {found} arguments")]
    ArityMismatch { name: String, expected: usize, found: usize },
    #[error("variable {0:?} is not bound by a quantifier")]
    NotClosed(String),
    #[error("syntax error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("structure line {line}: {message}")]
    Structure { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FoFormula {
    True,
    False,
    Rel(String, Vec<String>),
    Eq(String, String),
    Not(Box<FoFormula>),
    And(Box<FoFormula>, Box<FoFormula>),
    Or(Box<FoFormula>, Box<FoFormula>),
    Implies(Box<FoFormula>, Box<FoFormula>),
    Iff(Box<FoFormula>, Box<FoFormula>),
    Forall(String, Box<FoFormula>),
    Exists(String, Box<FoFormula>),
}

impl FoFormula {
    pub fn negate(self) -> FoFormula {
        FoFormula::Not(Box::new(self))
    }

    pub fn and(self, rhs: FoFormula) -> FoFormula {
        FoFormula::And(Box::new(self), Box::new(rhs))
    }

    /// Embeds a propositional formula, reading atom `p<i>` as the nullary
    /// relation named `p<i>`.
    pub fn from_propositional(f: &Formula) -> FoFormula {
        let b = |g: &Formula| Box::new(FoFormula::from_propositional(g));
        match f {
            Formula::True => FoFormula::True,
            Formula::False => FoFormula::False,
            Formula::Atom(i) => FoFormula::Rel(format!("p{i}"), Vec::new()),
            Formula::Not(a) => FoFormula::Not(b(a)),
            Formula::And(x, y) => FoFormula::And(b(x), b(y)),
            Formula::Or(x, y) => FoFormula::Or(b(x), b(y)),
            Formula::Implies(x, y) => FoFormula::Implies(b(x), b(y)),
            Formula::Iff(x, y) => FoFormula::Iff(b(x), b(y)),
        }
    }

    fn check(&self, m: &FiniteStructure, bound: &mut Vec<String>) -> Result<(), FoError> {
        let var = |v: &String, bound: &Vec<String>| {
            if bound.contains(v) {
                Ok(())
            } else {
                Err(FoError::NotClosed(v.clone()))
            }
        };
        match self {
            FoFormula::True | FoFormula::False => Ok(()),
            FoFormula::Rel(name, args) => {
                let rel = m.relations.get(name).ok_or_else(|| FoError::UnknownRelation(name.clone()))?;
                if rel.arity != args.len() {
                    return Err(FoError::ArityMismatch { name: name.clone(), expected: rel.arity, found: args.len() });
                }
                args.iter().try_for_each(|a| var(a, bound))
            }
            FoFormula::Eq(a, b) => var(a, bound).and_then(|_| var(b, bound)),
            FoFormula::Not(a) => a.check(m, bound),
            FoFormula::And(a, b) | FoFormula::Or(a, b) | FoFormula::Implies(a, b) | FoFormula::Iff(a, b) => {
                a.check(m, bound)?;
                b.check(m, bound)
            }
            FoFormula::Forall(v, body) | FoFormula::Exists(v, body) => {
                bound.push(v.clone());
                let r = body.check(m, bound);
                bound.pop();
                r
            }
        }
    }

    fn eval(&self, m: &FiniteStructure, env: &mut Vec<(String, usize)>) -> bool {
        let lookup = |env: &Vec<(String, usize)>, v: &str| {
            env.iter().rev().find(|(name, _)| name == v).map(|(_, e)| *e).expect("checked closed")
        };
        match self {
            FoFormula::True => true,
            FoFormula::False => false,
            FoFormula::Rel(name, args) => {
                let tuple: Vec<usize> = args.iter().map(|a| lookup(env, a)).collect();
                m.relations[name].tuples.contains(&tuple)
            }
            FoFormula::Eq(a, b) => lookup(env, a) == lookup(env, b),
            FoFormula::Not(a) => !a.eval(m, env),
            FoFormula::And(a, b) => a.eval(m, env) && b.eval(m, env),
            FoFormula::Or(a, b) => a.eval(m, env) || b.eval(m, env),
            FoFormula::Implies(a, b) => !a.eval(m, env) || b.eval(m, env),
            FoFormula::Iff(a, b) => a.eval(m, env) == b.eval(m, env),
            FoFormula::Forall(v, body) | FoFormula::Exists(v, body) => {
                let universal = matches!(self, FoFormula::Forall(..));
                for e in 0..m.universe.len() {
                    env.push((v.clone(), e));
                    let holds = body.eval(m, env);
                    env.pop();
                    if holds != universal {
                        return !universal;
                    }
                }
                universal
            }
        }
    }
}

impl fmt::Display for FoFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FoFormula::True => f.write_str("true"),
            FoFormula::False => f.write_str("false"),
            FoFormula::Rel(name, args) if args.is_empty() => f.write_str(name),
            FoFormula::Rel(name, args) if name == "<" && args.len() == 2 => write!(f, "{} < {}", args[0], args[1]),
            FoFormula::Rel(name, args) => write!(f, "{name}({})", args.join(", ")),
            FoFormula::Eq(a, b) => write!(f, "{a} = {b}"),
            FoFormula::Not(a) => write!(f, "!({a})"),
            FoFormula::And(a, b) => write!(f, "({a} & {b})"),
            FoFormula::Or(a, b) => write!(f, "({a} | {b})"),
            FoFormula::Implies(a, b) => write!(f, "({a} -> {b})"),
            FoFormula::Iff(a, b) => write!(f, "({a} <-> {b})"),
            FoFormula::Forall(v, body) => write!(f, "(forall {v}. {body})"),
            FoFormula::Exists(v, body) => write!(f, "(exists {v}. {body})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Relation {
    arity: usize,
    tuples: HashSet<Vec<usize>>,
}

/// A finite relational structure; elements are referred to by name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteStructure {
    universe: Vec<String>,
    relations: BTreeMap<String, Relation>,
}

impl FiniteStructure {
    pub fn new<I, S>(universe: I) -> Result<Self, FoError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let universe: Vec<String> = universe.into_iter().map(Into::into).collect();
        if universe.is_empty() {
            return Err(FoError::Structure { line: 0, message: "universe must be nonempty".into() });
        }
        let distinct: BTreeSet<&String> = universe.iter().collect();
        if distinct.len() != universe.len() {
            return Err(FoError::Structure { line: 0, message: "duplicate universe element".into() });
        }
        Ok(FiniteStructure { universe, relations: BTreeMap::new() })
    }

    pub fn size(&self) -> usize {
        self.universe.len()
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn relation_names(&self) -> impl Iterator<Item = (&str, usize)> {
        self.relations.iter().map(|(n, r)| (n.as_str(), r.arity))
    }

    fn element(&self, name: &str) -> Option<usize> {
        self.universe.iter().position(|e| e == name)
    }

    /// Declares a relation; tuples name universe elements.
    pub fn add_relation<T, S>(&mut self, name: &str, arity: usize, tuples: T) -> Result<(), FoError>
    where
        T: IntoIterator<Item = Vec<S>>,
        S: AsRef<str>,
    {
        let mut set = HashSet::new();
        for t in tuples {
            if t.len() != arity {
                return Err(FoError::ArityMismatch { name: name.into(), expected: arity, found: t.len() });
            }
            let idx = t
                .iter()
                .map(|e| {
                    self.element(e.as_ref()).ok_or_else(|| FoError::Structure {
                        line: 0,
                        message: format!("{:?} is not in the universe", e.as_ref()),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            set.insert(idx);
        }
        self.relations.insert(name.to_string(), Relation { arity, tuples: set });
        Ok(())
    }

    /// `({1..n}, <)`.
    pub fn linear_order(n: usize) -> FiniteStructure {
        let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let mut m = FiniteStructure::new(names.clone()).expect("n ≥ 1");
        let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        let tuples: Vec<Vec<String>> = pairs.map(|(i, j)| vec![names[i].clone(), names[j].clone()]).collect();
        m.add_relation("<", 2, tuples).expect("well-formed");
        m
    }

    /// A structure of the given size whose nullary relations `p<i>` encode
    /// `v` on `atoms`.
    pub fn from_valuation(size: usize, atoms: &BTreeSet<u32>, v: &Valuation) -> FiniteStructure {
        let mut m = FiniteStructure::new((1..=size).map(|i| i.to_string())).expect("size ≥ 1");
        for &a in atoms {
            let tuples: Vec<Vec<String>> = if v.get(a) { vec![Vec::new()] } else { Vec::new() };
            m.add_relation(&format!("p{a}"), 0, tuples).expect("nullary");
        }
        m
    }

    /// Parses the structure file format described in the module docs.
    pub fn parse(text: &str) -> Result<FiniteStructure, FoError> {
        let mut structure: Option<FiniteStructure> = None;
        let mut current: Option<(String, usize, Vec<Vec<String>>, usize)> = None;
        let err = |line: usize, message: String| FoError::Structure { line, message };

        fn flush(
            m: &mut FiniteStructure,
            cur: Option<(String, usize, Vec<Vec<String>>, usize)>,
        ) -> Result<(), FoError> {
            if let Some((name, arity, tuples, line)) = cur {
                m.add_relation(&name, arity, tuples).map_err(|e| match e {
                    FoError::Structure { message, .. } => FoError::Structure { line, message },
                    other => other,
                })?;
            }
            Ok(())
        }

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let head = words.next().unwrap_or("");
            match head {
                "universe" => {
                    if structure.is_some() {
                        return Err(err(line_no, "second universe line".into()));
                    }
                    structure = Some(FiniteStructure::new(words).map_err(|e| match e {
                        FoError::Structure { message, .. } => err(line_no, message),
                        other => other,
                    })?);
                }
                "relation" => {
                    let m = structure.as_mut().ok_or_else(|| err(line_no, "relation before universe".into()))?;
                    flush(m, current.take())?;
                    let name = words.next().ok_or_else(|| err(line_no, "missing relation name".into()))?;
                    let arity = words
                        .next()
                        .and_then(|a| a.parse::<usize>().ok())
                        .ok_or_else(|| err(line_no, "missing or bad arity".into()))?;
                    if words.next().is_some() {
                        return Err(err(line_no, "trailing text after arity".into()));
                    }
                    current = Some((name.to_string(), arity, Vec::new(), line_no));
                }
                _ => {
                    let cur = current.as_mut().ok_or_else(|| err(line_no, "tuple outside a relation block".into()))?;
                    let tuple: Vec<String> = if line == "()" {
                        Vec::new()
                    } else {
                        line.split(|c: char| c.is_whitespace() || c == ',')
                            .filter(|s| !s.is_empty())
                            .map(String::from)
                            .collect()
                    };
                    if tuple.len() != cur.1 {
                        return Err(err(line_no, format!("expected {} elements, found {}", cur.1, tuple.len())));
                    }
                    cur.2.push(tuple);
                }
            }
        }
        let mut m = structure.ok_or_else(|| err(0, "missing universe line".into()))?;
        flush(&mut m, current)?;
        Ok(m)
    }
}

/// `m ⊨ φ`, by expanding quantifiers over the universe.
pub fn fo_models(m: &FiniteStructure, phi: &FoFormula) -> Result<bool, FoError> {
    phi.check(m, &mut Vec::new())?;
    Ok(phi.eval(m, &mut Vec::new()))
}

/// `m ⊨ φ` for every sentence of the theory.
pub fn fo_models_all(m: &FiniteStructure, theory: &[FoFormula]) -> Result<bool, FoError> {
    for phi in theory {
        phi.check(m, &mut Vec::new())?;
    }
    Ok(theory.iter().all(|phi| phi.eval(m, &mut Vec::new())))
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Forall,
    Exists,
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Eq,
    Neq,
    Lt,
    LParen,
    RParen,
    Comma,
    Dot,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, FoError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, width) = if c.is_alphanumeric() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            let tok = match word.as_str() {
                "forall" => Tok::Forall,
                "exists" => Tok::Exists,
                "true" => Tok::True,
                "false" => Tok::False,
                _ => Tok::Ident(word),
            };
            (tok, j - i)
        } else {
            match (c, next) {
                ('∀', _) => (Tok::Forall, 1),
                ('∃', _) => (Tok::Exists, 1),
                ('⊤', _) => (Tok::True, 1),
                ('⊥', _) => (Tok::False, 1),
                ('!', Some('=')) => (Tok::Neq, 2),
                ('≠', _) => (Tok::Neq, 1),
                ('!', _) | ('¬', _) => (Tok::Not, 1),
                ('&', _) | ('∧', _) => (Tok::And, 1),
                ('|', _) | ('∨', _) => (Tok::Or, 1),
                ('-', Some('>')) => (Tok::Implies, 2),
                ('→', _) => (Tok::Implies, 1),
                ('<', Some('-')) if chars.get(i + 2) == Some(&'>') => (Tok::Iff, 3),
                ('↔', _) => (Tok::Iff, 1),
                ('<', _) => (Tok::Lt, 1),
                ('=', _) => (Tok::Eq, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                (',', _) => (Tok::Comma, 1),
                ('.', _) => (Tok::Dot, 1),
                _ => return Err(FoError::Parse { position: pos, message: format!("unexpected character {c:?}") }),
            }
        };
        out.push((tok, pos));
        i += width;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T, FoError> {
        Err(FoError::Parse {
            position: self.toks[self.at].1,
            message: format!("expected {expected}, found {:?}", self.peek()),
        })
    }

    fn ident(&mut self) -> Result<String, FoError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.fail("a variable"),
        }
    }

    fn iff(&mut self) -> Result<FoFormula, FoError> {
        let lhs = self.imp()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            return Ok(FoFormula::Iff(Box::new(lhs), Box::new(self.iff()?)));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<FoFormula, FoError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            return Ok(FoFormula::Implies(Box::new(lhs), Box::new(self.imp()?)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<FoFormula, FoError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = FoFormula::Or(Box::new(lhs), Box::new(self.and()?));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<FoFormula, FoError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = FoFormula::And(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<FoFormula, FoError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(self.unary()?.negate())
            }
            Tok::Forall | Tok::Exists => {
                let universal = self.bump() == Tok::Forall;
                let v = self.ident()?;
                if *self.peek() == Tok::Dot {
                    self.bump();
                }
                let body = Box::new(self.iff()?);
                Ok(if universal { FoFormula::Forall(v, body) } else { FoFormula::Exists(v, body) })
            }
            Tok::True => {
                self.bump();
                Ok(FoFormula::True)
            }
            Tok::False => {
                self.bump();
                Ok(FoFormula::False)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.iff()?;
                if *self.peek() != Tok::RParen {
                    return self.fail("')'");
                }
                self.bump();
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.bump();
                match self.peek() {
                    Tok::LParen => {
                        self.bump();
                        let mut args = Vec::new();
                        if *self.peek() != Tok::RParen {
                            args.push(self.ident()?);
                            while *self.peek() == Tok::Comma {
                                self.bump();
                                args.push(self.ident()?);
                            }
                        }
                        if *self.peek() != Tok::RParen {
                            return self.fail("')' or ','");
                        }
                        self.bump();
                        Ok(FoFormula::Rel(name, args))
                    }
                    Tok::Eq => {
                        self.bump();
                        Ok(FoFormula::Eq(name, self.ident()?))
                    }
                    Tok::Neq => {
                        self.bump();
                        Ok(FoFormula::Eq(name, self.ident()?).negate())
                    }
                    Tok::Lt => {
                        self.bump();
                        Ok(FoFormula::Rel("<".into(), vec![name, self.ident()?]))
                    }
                    _ => Ok(FoFormula::Rel(name, Vec::new())),
                }
            }
            _ => self.fail("a formula"),
        }
    }
}

pub fn parse_fo(text: &str) -> Result<FoFormula, FoError> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let f = p.iff()?;
    if *p.peek() != Tok::End {
        return p.fail("end of input");
    }
    Ok(f)
}

/// One sentence per line; `#` comments and blank lines skipped.
pub fn parse_fo_theory(text: &str) -> Result<Vec<FoFormula>, (usize, FoError)> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if !line.is_empty() {
            out.push(parse_fo(line).map_err(|e| (i + 1, e))?);
        }
    }
    Ok(out)
}
