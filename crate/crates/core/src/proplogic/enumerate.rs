//! The effective sentence enumeration ψ_1, ψ_2, …
//!
//! Two streams are interleaved, odd positions first, and any formula
//! already emitted is skipped within its stream:
//!
//! * the *shortlex* stream lists every canonical string (see
//!   [`Formula::canonical`]) ordered by token length, then lexicographically
//!   under the token order `⊥ ⊤ p 0 1 … 9 ¬ ∧ ∨ → ↔ ( )`;
//! * the *clause ladder* lists, block by block, the clauses over
//!   `p0 … p(m-1)` that mention `p(m-1)`. Literals appear in atom order and
//!   nest to the right, `(l0∨(l1∨l2))`; each block is sorted shortlex.
//!
//! The shortlex stream alone already lists every formula, so the
//! enumeration is total. The ladder makes clauses over the first few atoms
//! appear early: two theories over `p0 … p(m-1)` that are not equivalent
//! disagree on some clause of the first `m` ladder blocks.

use std::collections::HashSet;
use std::sync::{Mutex, OnceLock};

use thiserror::Error;

use super::formula::{Connective, Formula};

/// Identifies the ordering; reports that depend on ψ_n embed it.
pub const ENUMERATION_VERSION: &str = "psi-interleaved-shortlex-ladder/1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerationError {
    #[error("sentence indices start at 1")]
    ZeroIndex,
}

/// Rank of a canonical-string character in the token order.
pub fn token_rank(c: char) -> u8 {
    match c {
        '⊥' => 0,
        '⊤' => 1,
        'p' => 2,
        '0'..='9' => 3 + (c as u8 - b'0'),
        '¬' => 13,
        '∧' => 14,
        '∨' => 15,
        '→' => 16,
        '↔' => 17,
        '(' => 18,
        ')' => 19,
        _ => panic!("{c:?} is not an enumeration token"),
    }
}

/// The 20 tokens in order.
pub const TOKENS: [char; 20] =
    ['⊥', '⊤', 'p', '0', '1', '2', '3', '4', '5', '6', '7', '8', '9', '¬', '∧', '∨', '→', '↔', '(', ')'];

fn shortlex_key(f: &Formula) -> Vec<u8> {
    f.canonical().chars().map(token_rank).collect()
}

/// All canonical formulas by exact token length, each class sorted.
#[derive(Default)]
struct LengthClasses {
    classes: Vec<Vec<Formula>>,
}

impl LengthClasses {
    fn class(&mut self, len: usize) -> &[Formula] {
        while self.classes.len() <= len {
            let l = self.classes.len();
            let built = self.build(l);
            self.classes.push(built);
        }
        &self.classes[len]
    }

    fn build(&mut self, len: usize) -> Vec<Formula> {
        let mut out = Vec::new();
        if len == 0 {
            return out;
        }
        if len == 1 {
            out.extend([Formula::False, Formula::True]);
        } else {
            // p followed by len-1 digits without a leading zero (except "0")
            let digits = (len - 1) as u32;
            if digits <= 9 {
                let (lo, hi) = if digits == 1 { (0u64, 10u64) } else { (10u64.pow(digits - 1), 10u64.pow(digits)) };
                out.extend((lo..hi).filter_map(|i| u32::try_from(i).ok()).map(Formula::Atom));
            }
            out.extend(self.class(len - 1).to_vec().into_iter().map(Formula::negate));
            if len >= 5 {
                for left in 1..=len - 4 {
                    let right = len - 3 - left;
                    let lhs = self.class(left).to_vec();
                    let rhs = self.class(right).to_vec();
                    for a in &lhs {
                        for b in &rhs {
                            for op in Connective::ALL {
                                out.push(op.apply(a.clone(), b.clone()));
                            }
                        }
                    }
                }
            }
        }
        let mut keyed: Vec<(Vec<u8>, Formula)> = out.into_iter().map(|f| (shortlex_key(&f), f)).collect();
        keyed.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        keyed.into_iter().map(|(_, f)| f).collect()
    }
}

/// Every canonical formula in shortlex order.
pub struct ShortlexFormulas {
    classes: LengthClasses,
    len: usize,
    idx: usize,
}

impl ShortlexFormulas {
    pub fn new() -> Self {
        ShortlexFormulas { classes: LengthClasses::default(), len: 1, idx: 0 }
    }
}

impl Default for ShortlexFormulas {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for ShortlexFormulas {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        loop {
            let class = self.classes.class(self.len);
            if let Some(f) = class.get(self.idx) {
                self.idx += 1;
                return Some(f.clone());
            }
            self.len += 1;
            self.idx = 0;
        }
    }
}

/// Block `m ≥ 1` of the clause ladder: the `2·3^(m-1)` clauses over
/// `p0 … p(m-1)` mentioning `p(m-1)`, sorted shortlex.
pub fn ladder_block(m: u32) -> Vec<Formula> {
    assert!(m >= 1);
    let mut clauses = Vec::new();
    let combos = 3u64.pow(m - 1);
    for code in 0..combos {
        for last_negative in [false, true] {
            let mut literals = Vec::new();
            let mut c = code;
            for atom in 0..m - 1 {
                match c % 3 {
                    1 => literals.push(Formula::atom(atom)),
                    2 => literals.push(Formula::atom(atom).negate()),
                    _ => {}
                }
                c /= 3;
            }
            let last = Formula::atom(m - 1);
            literals.push(if last_negative { last.negate() } else { last });
            let clause = literals.into_iter().rev().reduce(|acc, lit| lit.or(acc)).expect("nonempty clause");
            clauses.push(clause);
        }
    }
    let mut keyed: Vec<(Vec<u8>, Formula)> = clauses.into_iter().map(|f| (shortlex_key(&f), f)).collect();
    keyed.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    keyed.into_iter().map(|(_, f)| f).collect()
}

struct Ladder {
    block: u32,
    pending: std::vec::IntoIter<Formula>,
}

impl Iterator for Ladder {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        loop {
            if let Some(f) = self.pending.next() {
                return Some(f);
            }
            self.block += 1;
            self.pending = ladder_block(self.block).into_iter();
        }
    }
}

struct State {
    emitted: Vec<Formula>,
    seen: HashSet<Formula>,
    shortlex: ShortlexFormulas,
    ladder: Ladder,
}

impl State {
    fn extend_to(&mut self, n: usize) {
        while self.emitted.len() < n {
            let from_shortlex = self.emitted.len().is_multiple_of(2);
            loop {
                let f = if from_shortlex { self.shortlex.next() } else { self.ladder.next() }.expect("infinite stream");
                if self.seen.insert(f.clone()) {
                    self.emitted.push(f);
                    break;
                }
            }
        }
    }
}

/// Append-only, thread-safe cache of ψ_1, ψ_2, ….
pub struct SentenceEnumeration {
    state: Mutex<State>,
}

impl SentenceEnumeration {
    pub fn new() -> Self {
        SentenceEnumeration {
            state: Mutex::new(State {
                emitted: Vec::new(),
                seen: HashSet::new(),
                shortlex: ShortlexFormulas::new(),
                ladder: Ladder { block: 0, pending: Vec::new().into_iter() },
            }),
        }
    }

    /// The process-wide shared instance.
    pub fn global() -> &'static SentenceEnumeration {
        static GLOBAL: OnceLock<SentenceEnumeration> = OnceLock::new();
        GLOBAL.get_or_init(SentenceEnumeration::new)
    }

    /// ψ_n, 1-indexed.
    pub fn get(&self, n: usize) -> Result<Formula, EnumerationError> {
        if n == 0 {
            return Err(EnumerationError::ZeroIndex);
        }
        let mut st = self.state.lock().expect("enumeration lock");
        st.extend_to(n);
        Ok(st.emitted[n - 1].clone())
    }

    /// ψ_1 … ψ_k.
    pub fn prefix(&self, k: usize) -> Vec<Formula> {
        let mut st = self.state.lock().expect("enumeration lock");
        st.extend_to(k);
        st.emitted[..k].to_vec()
    }

    /// Position of `f` if it is among the first `limit` sentences.
    pub fn index_of(&self, f: &Formula, limit: usize) -> Option<usize> {
        self.prefix(limit).iter().position(|g| g == f).map(|i| i + 1)
    }
}

impl Default for SentenceEnumeration {
    fn default() -> Self {
        Self::new()
    }
}

/// Convenience for [`SentenceEnumeration::global`]`.get(n)`.
pub fn enumerate_sentence(n: usize) -> Result<Formula, EnumerationError> {
    SentenceEnumeration::global().get(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proplogic::parse::parse_canonical;

    #[test]
    fn first_sentences() {
        let e = SentenceEnumeration::new();
        assert_eq!(e.get(1).unwrap(), Formula::False);
        assert_eq!(e.get(2).unwrap(), Formula::atom(0));
        assert_eq!(e.get(3).unwrap(), Formula::True);
        assert_eq!(e.get(4).unwrap(), Formula::atom(0).negate());
        // p0 was already taken from the ladder
        assert_eq!(e.get(5).unwrap(), Formula::atom(1));
        assert_eq!(e.get(0), Err(EnumerationError::ZeroIndex));
    }

    #[test]
    fn injective_prefix() {
        let e = SentenceEnumeration::new();
        let p = e.prefix(1000);
        let set: HashSet<_> = p.iter().collect();
        assert_eq!(set.len(), 1000);
    }

    #[test]
    fn ladder_sizes() {
        for m in 1..=4 {
            assert_eq!(ladder_block(m).len() as u64, 2 * 3u64.pow(m - 1));
        }
        assert_eq!(ladder_block(2)[0].canonical(), "p1");
        assert!(ladder_block(2).contains(&parse_canonical("(¬p0∨¬p1)").unwrap()));
    }

    #[test]
    fn shortlex_lengths_are_monotone() {
        let lens: Vec<usize> = ShortlexFormulas::new().take(1200).map(|f| f.canonical_len()).collect();
        assert!(lens.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(lens.iter().filter(|&&l| l == 2).count(), 12);
    }
}
