//! Parsers for the textual formula grammar and for canonical strings.
//!
//! Input grammar, loosest first:
//!
//! ```text
//! iff   := imp ("<->" iff)?
//! imp   := or ("->" imp)?
//! or    := and ("|" and)*
//! and   := unary ("&" unary)*
//! unary := "!" unary | atom | "T" | "F" | "(" iff ")"
//! atom  := "p" digits
//! ```
//!
//! The Unicode spellings `¬ ∧ ∨ → ↔ ⊤ ⊥` are accepted as aliases.

use thiserror::Error;

use super::formula::{Connective, Formula};

/// A syntax error. `position` is the 1-based character column where the
/// offending token starts (one past the last character for end of input).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Atom(u32),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Atom(i) => format!("atom p{i}"),
        Tok::True => "'T'".into(),
        Tok::False => "'F'".into(),
        Tok::Not => "'!'".into(),
        Tok::And => "'&'".into(),
        Tok::Or => "'|'".into(),
        Tok::Implies => "'->'".into(),
        Tok::Iff => "'<->'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |position: usize, message: String| ParseError { position, message };
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let starts = |s: &str| s.chars().enumerate().all(|(k, sc)| chars.get(i + k) == Some(&sc));
        let (tok, width) = match c {
            'p' => {
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == i + 1 {
                    return Err(err(pos, "expected digits after 'p'".into()));
                }
                let digits: String = chars[i + 1..j].iter().collect();
                let idx = digits.parse::<u32>().map_err(|_| err(pos, format!("atom index {digits} too large")))?;
                (Tok::Atom(idx), j - i)
            }
            'T' | '⊤' => (Tok::True, 1),
            'F' | '⊥' => (Tok::False, 1),
            '!' | '¬' => (Tok::Not, 1),
            '&' | '∧' => (Tok::And, 1),
            '|' | '∨' => (Tok::Or, 1),
            '→' => (Tok::Implies, 1),
            '↔' => (Tok::Iff, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '-' if starts("->") => (Tok::Implies, 2),
            '<' if starts("<->") => (Tok::Iff, 3),
            other => return Err(err(pos, format!("unexpected character {other:?}"))),
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

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.pos(),
            message: format!("expected {expected}, found {}", describe(self.peek())),
        })
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.imp()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.iff()?;
            return Ok(lhs.iff(rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.imp()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = lhs.or(self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = lhs.and(self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(self.unary()?.negate())
            }
            Tok::Atom(i) => {
                self.bump();
                Ok(Formula::Atom(i))
            }
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
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
            _ => self.fail("a formula"),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let f = p.iff()?;
    if *p.peek() != Tok::End {
        return p.fail("end of input");
    }
    Ok(f)
}

/// Parses a theory file: one formula per line; `#` comments and blank lines
/// are skipped. Errors carry the 1-based line number.
pub fn parse_theory_lines(text: &str) -> Result<Vec<Formula>, (usize, ParseError)> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        out.push(parse_formula(line).map_err(|e| (i + 1, e))?);
    }
    Ok(out)
}

/// Strict recognizer for canonical strings (see [`Formula::canonical`]):
/// no spaces, full parentheses, no leading zeros in atom indices.
pub fn parse_canonical(text: &str) -> Option<Formula> {
    let chars: Vec<char> = text.chars().collect();
    let (f, used) = canonical_at(&chars, 0)?;
    (used == chars.len()).then_some(f)
}

fn canonical_at(s: &[char], i: usize) -> Option<(Formula, usize)> {
    match *s.get(i)? {
        '⊥' => Some((Formula::False, i + 1)),
        '⊤' => Some((Formula::True, i + 1)),
        'p' => {
            let mut j = i + 1;
            while j < s.len() && s[j].is_ascii_digit() {
                j += 1;
            }
            let digits: String = s[i + 1..j].iter().collect();
            if digits.is_empty() || (digits.len() > 1 && digits.starts_with('0')) {
                return None;
            }
            Some((Formula::Atom(digits.parse().ok()?), j))
        }
        '¬' => {
            let (a, j) = canonical_at(s, i + 1)?;
            Some((a.negate(), j))
        }
        '(' => {
            let (a, j) = canonical_at(s, i + 1)?;
            let op = match *s.get(j)? {
                '∧' => Connective::And,
                '∨' => Connective::Or,
                '→' => Connective::Implies,
                '↔' => Connective::Iff,
                _ => return None,
            };
            let (b, k) = canonical_at(s, j + 1)?;
            (*s.get(k)? == ')').then(|| (op.apply(a, b), k + 1))
        }
        _ => None,
    }
}
