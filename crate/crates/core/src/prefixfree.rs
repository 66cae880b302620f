//! Prefix-freeness, Omega sums of string sets, and Kraft's inequality.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{interval_of, measure_of_disjoint_union, BitString, ExactError, ExactRational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrefixError {
    #[error("set is not prefix-free: {prefix} is a proper prefix of {extension}")]
    NotPrefixFree { prefix: BitString, extension: BitString },
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ExactError },
    #[error("family yielded {0} twice")]
    Duplicate(BitString),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A finite, deduplicated set of bit strings.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct StringSet(BTreeSet<BitString>);

impl StringSet {
    pub fn new() -> Self {
        StringSet(BTreeSet::new())
    }

    pub fn insert(&mut self, s: BitString) -> bool {
        self.0.insert(s)
    }

    pub fn contains(&self, s: &BitString) -> bool {
        self.0.contains(s)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Elements in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &BitString> {
        self.0.iter()
    }

    pub fn max_len(&self) -> usize {
        self.0.iter().map(BitString::len).max().unwrap_or(0)
    }

    pub fn union(&self, other: &StringSet) -> StringSet {
        StringSet(self.0.union(&other.0).cloned().collect())
    }

    pub fn is_disjoint(&self, other: &StringSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    /// Parses the set file format: one 0/1 string per line, `#` starts a
    /// comment, blank lines are ignored.
    pub fn parse(text: &str) -> Result<StringSet, PrefixError> {
        let mut set = StringSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let s = line.parse().map_err(|source| PrefixError::Parse { line: i + 1, source })?;
            set.insert(s);
        }
        Ok(set)
    }
}

impl FromIterator<BitString> for StringSet {
    fn from_iter<I: IntoIterator<Item = BitString>>(iter: I) -> Self {
        StringSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a StringSet {
    type Item = &'a BitString;
    type IntoIter = std::collections::btree_set::Iter<'a, BitString>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for StringSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

pub fn is_proper_prefix(prefix: &BitString, s: &BitString) -> bool {
    prefix.is_proper_prefix_of(s)
}

/// Outcome of [`check_prefix_free`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum PrefixFreeness {
    PrefixFree,
    Witness { prefix: BitString, extension: BitString },
}

impl PrefixFreeness {
    pub fn is_prefix_free(&self) -> bool {
        matches!(self, PrefixFreeness::PrefixFree)
    }
}

/// In lexicographic order every string that extends `σ` sits in one block
/// right after `σ`, so comparing neighbours finds a witness if one exists.
pub fn check_prefix_free(set: &StringSet) -> PrefixFreeness {
    let mut iter = set.iter();
    let Some(mut prev) = iter.next() else {
        return PrefixFreeness::PrefixFree;
    };
    for next in iter {
        if prev.is_proper_prefix_of(next) {
            return PrefixFreeness::Witness { prefix: prev.clone(), extension: next.clone() };
        }
        prev = next;
    }
    PrefixFreeness::PrefixFree
}

/// `Σ_{σ∈S} 2^(−|σ|)` over any finite set of strings, prefix-free or not.
pub fn omega<'a, I>(strings: I) -> ExactRational
where
    I: IntoIterator<Item = &'a BitString>,
{
    let mut per_len: BTreeMap<usize, u64> = BTreeMap::new();
    for s in strings {
        *per_len.entry(s.len()).or_default() += 1;
    }
    omega_from_counts(per_len.into_iter())
}

/// `Σ count(ℓ)·2^(−ℓ)` over a common denominator.
pub fn omega_from_counts(counts: impl Iterator<Item = (usize, u64)>) -> ExactRational {
    let counts: Vec<_> = counts.filter(|&(_, c)| c > 0).collect();
    let Some(top) = counts.iter().map(|&(l, _)| l).max() else {
        return ExactRational::zero();
    };
    let mut numer = BigUint::default();
    for (len, count) in counts {
        numer += BigUint::from(count) << (top - len);
    }
    ExactRational::from_dyadic(numer, top as u64)
}

/// Both sides of the identity `𝔏(⋃ I_σ) = Ω_S`, computed independently.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalReport {
    pub lhs: ExactRational,
    pub rhs: ExactRational,
    pub equal: bool,
}

pub fn interval_measure_equals_omega(set: &StringSet) -> Result<IntervalReport, PrefixError> {
    if let PrefixFreeness::Witness { prefix, extension } = check_prefix_free(set) {
        return Err(PrefixError::NotPrefixFree { prefix, extension });
    }
    let intervals: Vec<_> = set.iter().map(interval_of).collect();
    let lhs = measure_of_disjoint_union(&intervals)?;
    let rhs = omega(set);
    let equal = lhs == rhs;
    Ok(IntervalReport { lhs, rhs, equal })
}

/// A possibly infinite family of distinct strings, consumed in order.
/// Only partial sums are ever reported; no limit is claimed.
pub struct StreamedFamily<I> {
    source: I,
    seen: HashSet<BitString>,
    emitted: usize,
    partial: ExactRational,
    exhausted: bool,
}

/// Partial Omega of a [`StreamedFamily`] after some number of strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartialOmega {
    pub value: ExactRational,
    pub emitted: usize,
    /// True when the family ran out before the requested count.
    pub exhausted: bool,
}

impl<I: Iterator<Item = BitString>> StreamedFamily<I> {
    pub fn new(source: I) -> Self {
        StreamedFamily { source, seen: HashSet::new(), emitted: 0, partial: ExactRational::zero(), exhausted: false }
    }

    pub fn emitted(&self) -> usize {
        self.emitted
    }

    pub fn partial_sum(&self) -> &ExactRational {
        &self.partial
    }

    pub fn next_string(&mut self) -> Result<Option<BitString>, PrefixError> {
        if self.exhausted {
            return Ok(None);
        }
        match self.source.next() {
            None => {
                self.exhausted = true;
                Ok(None)
            }
            Some(s) => {
                if !self.seen.insert(s.clone()) {
                    return Err(PrefixError::Duplicate(s));
                }
                self.emitted += 1;
                self.partial += &ExactRational::pow2_neg(s.len() as u64);
                Ok(Some(s))
            }
        }
    }

    /// Advances until `k` strings have been emitted in total (or the family
    /// is exhausted) and reports the partial sum.
    pub fn omega_partial(&mut self, k: usize) -> Result<PartialOmega, PrefixError> {
        while self.emitted < k {
            if self.next_string()?.is_none() {
                break;
            }
        }
        Ok(PartialOmega { value: self.partial.clone(), emitted: self.emitted, exhausted: self.emitted < k })
    }
}

/// Ω of the first `k` strings of a fresh family.
pub fn omega_partial<I>(family: I, k: usize) -> Result<PartialOmega, PrefixError>
where
    I: IntoIterator<Item = BitString>,
{
    StreamedFamily::new(family.into_iter()).omega_partial(k)
}

/// The prefix-free family `1, 00, 010, 0110, 01110, …` whose Omega is 1.
pub fn chain_family() -> impl Iterator<Item = BitString> {
    let first = std::iter::once(BitString::new(vec![true]).expect("nonempty"));
    let rest = (0usize..).map(|n| {
        let mut bits = vec![false];
        bits.extend(std::iter::repeat_n(true, n));
        bits.push(false);
        BitString::new(bits).expect("nonempty")
    });
    first.chain(rest)
}

/// Leaves of a random binary trie of depth at most `max_depth`.
///
/// Internal nodes keep each child with some probability (at least one is
/// always kept), so leaves do not have to cover the whole tree and Ω can
/// fall anywhere in `(0, 1]`.
pub fn random_prefix_free_set<R: Rng + ?Sized>(rng: &mut R, max_depth: usize) -> StringSet {
    assert!(max_depth >= 1, "the empty string is not a member of any set");
    let mut out = StringSet::new();
    let mut stack: Vec<Vec<bool>> = vec![Vec::new()];
    while let Some(node) = stack.pop() {
        let depth = node.len();
        let split = depth == 0 || (depth < max_depth && rng.gen_bool(0.55));
        if !split {
            out.insert(BitString::new(node).expect("depth ≥ 1"));
            continue;
        }
        let (keep0, keep1) = match rng.gen_range(0..4) {
            0 => (true, false),
            1 => (false, true),
            _ => (true, true),
        };
        for (keep, bit) in [(keep1, true), (keep0, false)] {
            if keep {
                let mut child = node.clone();
                child.push(bit);
                stack.push(child);
            }
        }
    }
    out
}

/// Total count of strings of length `len`, `2^len`.
pub fn strings_of_length(len: usize) -> BigUint {
    BigUint::one() << len
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn set(items: &[&str]) -> StringSet {
        items.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn proper_prefix() {
        assert!(is_proper_prefix(&bs("0"), &bs("00")));
        assert!(!is_proper_prefix(&bs("1"), &bs("00")));
        assert!(!is_proper_prefix(&bs("01"), &bs("01")));
    }

    #[test]
    fn prefix_free_verdicts() {
        assert!(check_prefix_free(&set(&["1", "00"])).is_prefix_free());
        assert!(check_prefix_free(&set(&["0"])).is_prefix_free());
        let w = PrefixFreeness::Witness { prefix: bs("0"), extension: bs("00") };
        assert_eq!(check_prefix_free(&set(&["0", "00"])), w);
        assert_eq!(check_prefix_free(&set(&["0", "1", "00"])), w);
        // a witness hidden behind an unrelated neighbour
        let w2 = check_prefix_free(&set(&["01", "0100", "011"]));
        assert_eq!(w2, PrefixFreeness::Witness { prefix: bs("01"), extension: bs("0100") });
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(&set(&["0"])), q("1/2"));
        assert_eq!(omega(&set(&["0", "00"])), q("3/4"));
        assert_eq!(omega(&set(&["1", "00"])), q("3/4"));
        assert_eq!(omega(&set(&["0", "1", "00"])), q("5/4"));
        assert_eq!(omega(&StringSet::new()), q("0"));
    }

    #[test]
    fn chain_family_partials() {
        let first: Vec<String> = chain_family().take(5).map(|s| s.to_string()).collect();
        assert_eq!(first, ["1", "00", "010", "0110", "01110"]);
        assert_eq!(omega_partial(chain_family(), 3).unwrap().value, q("7/8"));
        assert_eq!(omega_partial(chain_family(), 10).unwrap().value, q("1023/1024"));
        assert_eq!(omega_partial(chain_family(), 0).unwrap().value, q("0"));
    }

    #[test]
    fn exhausted_family_is_flagged() {
        let p = omega_partial(set(&["1", "00"]).iter().cloned(), 5).unwrap();
        assert_eq!(p.value, q("3/4"));
        assert_eq!(p.emitted, 2);
        assert!(p.exhausted);
    }

    #[test]
    fn duplicate_in_family_is_an_error() {
        let dup = vec![bs("1"), bs("1")];
        assert_eq!(omega_partial(dup, 2), Err(PrefixError::Duplicate(bs("1"))));
    }

    #[test]
    fn interval_identity_examples() {
        let r = interval_measure_equals_omega(&set(&["1", "00"])).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone(), r.equal), (q("3/4"), q("3/4"), true));
        let r = interval_measure_equals_omega(&set(&["01001"])).unwrap();
        assert_eq!(r.lhs, q("1/32"));
        assert!(r.equal);
        let err = interval_measure_equals_omega(&set(&["0", "00"])).unwrap_err();
        assert_eq!(err, PrefixError::NotPrefixFree { prefix: bs("0"), extension: bs("00") });
    }

    #[test]
    fn set_file_format() {
        let s = StringSet::parse("# example\n1\n\n00  # two heads\n1\n").unwrap();
        assert_eq!(s, set(&["1", "00"]));
        let err = StringSet::parse("1\n0a\n").unwrap_err();
        assert!(matches!(err, PrefixError::Parse { line: 2, .. }));
    }

    #[test]
    fn random_tries_are_prefix_free() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let s = random_prefix_free_set(&mut rng, 12);
            assert!(!s.is_empty());
            assert!(s.max_len() <= 12);
            assert!(check_prefix_free(&s).is_prefix_free());
        }
    }
}
