//! Exact rationals, bit strings, base-2 codes and dyadic intervals.
//!
//! Every measure and weight in this crate is an [`ExactRational`]; nothing is
//! ever rounded. Floating point only shows up when a report is rendered for
//! humans (see [`ExactRational::to_f64`]).

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("0 has no leading-1 binary expansion")]
    ZeroHasNoExpansion,
    #[error("integer code 0 does not name any bit string")]
    ZeroIntegerCode,
    #[error("division by zero")]
    DivisionByZero,
    #[error("bit strings must be nonempty")]
    EmptyBitString,
    #[error("invalid bit {found:?} at position {position}")]
    InvalidBit { position: usize, found: char },
    #[error("intervals #{first} and #{second} overlap")]
    Overlap { first: usize, second: usize },
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
}

/// An arbitrary-precision fraction, always in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, ExactError> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(ExactRational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    /// `2^(-k)`.
    pub fn pow2_neg(k: u64) -> Self {
        ExactRational(BigRational::new_raw(BigInt::one(), BigInt::one() << k))
    }

    /// `numer / 2^exp`, reduced by stripping common factors of two only.
    ///
    /// Much cheaper than the general constructor for long binary fractions,
    /// since no gcd is computed.
    pub fn from_dyadic(numer: BigUint, exp: u64) -> Self {
        if numer.is_zero() {
            return Self::zero();
        }
        let tz = numer.trailing_zeros().unwrap_or(0).min(exp);
        let numer = BigInt::from_biguint(Sign::Plus, numer >> tz);
        ExactRational(BigRational::new_raw(numer, BigInt::one() << (exp - tz)))
    }

    /// `base^(-k)` for an integer base ≥ 1.
    pub fn pow_neg(base: u64, k: u64) -> Self {
        let denom = num_traits::pow(BigInt::from(base), k as usize);
        ExactRational(BigRational::new_raw(BigInt::one(), denom))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn checked_div(&self, rhs: &ExactRational) -> Result<ExactRational, ExactError> {
        if rhs.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(ExactRational(&self.0 / &rhs.0))
    }

    pub fn pow(&self, exp: u32) -> ExactRational {
        ExactRational(num_traits::pow(self.0.clone(), exp as usize))
    }

    pub fn abs(&self) -> ExactRational {
        ExactRational(self.0.abs())
    }

    pub fn min(self, other: ExactRational) -> ExactRational {
        std::cmp::min(self, other)
    }

    pub fn max(self, other: ExactRational) -> ExactRational {
        std::cmp::max(self, other)
    }

    /// Approximate value, for display and CSV export only.
    pub fn to_f64(&self) -> f64 {
        if let Some(v) = self.0.to_f64() {
            if v.is_finite() {
                return v;
            }
        }
        // Huge numerators/denominators overflow the direct conversion.
        let n = self.numer();
        let d = self.denom();
        let shift = n.bits().max(d.bits()).saturating_sub(1000);
        let n = (n >> shift).to_f64().unwrap_or(0.0);
        let d = (d >> shift).to_f64().unwrap_or(f64::INFINITY);
        if d == 0.0 {
            0.0
        } else {
            n / d
        }
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        ExactRational(r)
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        ExactRational::from_integer(n)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for ExactRational {
    type Err = ExactError;

    /// Accepts `p/q` or a bare integer `p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ExactError::ParseRational(s.to_string());
        let t = s.trim();
        match t.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                ExactRational::new(p, q)
            }
            None => {
                let p: BigInt = t.parse().map_err(|_| bad())?;
                Ok(ExactRational::from_integer(p))
            }
        }
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &ExactRational) -> ExactRational {
                ExactRational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl AddAssign<&ExactRational> for ExactRational {
    fn add_assign(&mut self, rhs: &ExactRational) {
        self.0 += &rhs.0;
    }
}

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl Sum for ExactRational {
    fn sum<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a ExactRational> for ExactRational {
    fn sum<I: Iterator<Item = &'a ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::zero(), |acc, x| acc + x)
    }
}

/// A nonempty finite string of bits. Leading zeros are significant, so `0`
/// and `00` are different strings.
///
/// The derived ordering is lexicographic with `0 < 1` and a proper prefix
/// sorting before its extensions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Result<Self, ExactError> {
        if bits.is_empty() {
            return Err(ExactError::EmptyBitString);
        }
        Ok(BitString(bits))
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Base-2 value of the bits read as an unsigned integer (leading zeros
    /// contribute nothing).
    pub fn value(&self) -> BigUint {
        let mut v = BigUint::zero();
        for &b in &self.0 {
            v <<= 1u32;
            if b {
                v += 1u32;
            }
        }
        v
    }

    pub fn is_proper_prefix_of(&self, other: &BitString) -> bool {
        self.len() < other.len() && other.0.starts_with(&self.0)
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = self.0.clone();
        bits.extend_from_slice(&other.0);
        BitString(bits)
    }

    /// The `len`-bit big-endian representation of `byte`'s low bits.
    pub fn from_byte(byte: u8) -> BitString {
        BitString((0..8).rev().map(|i| (byte >> i) & 1 == 1).collect())
    }

    /// Shortlex key: shorter strings first, then lexicographic.
    pub fn shortlex_cmp(&self, other: &BitString) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .enumerate()
            .map(|(position, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                found => Err(ExactError::InvalidBit { position, found }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        BitString::new(bits)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Binary expansion of a positive integer; always starts with `1`.
pub fn nat_to_binary(n: &BigUint) -> Result<BitString, ExactError> {
    if n.is_zero() {
        return Err(ExactError::ZeroHasNoExpansion);
    }
    let bits = (0..n.bits()).rev().map(|i| n.bit(i)).collect();
    Ok(BitString(bits))
}

pub fn binary_to_nat(s: &BitString) -> BigUint {
    s.value()
}

/// Integer code `((1σ))₂ − 1`; a bijection from bit strings onto the
/// positive integers (`0 ↦ 1`, `1 ↦ 2`, `00 ↦ 3`, ...).
pub fn integer_code(s: &BitString) -> BigUint {
    let lead = BigUint::one() << s.len();
    lead + s.value() - 1u32
}

/// Inverse of [`integer_code`].
pub fn from_integer_code(code: &BigUint) -> Result<BitString, ExactError> {
    if code.is_zero() {
        return Err(ExactError::ZeroIntegerCode);
    }
    let shifted = code + 1u32;
    let full = nat_to_binary(&shifted)?;
    // `shifted ≥ 2`, so dropping the leading 1 leaves a nonempty string.
    Ok(BitString(full.0[1..].to_vec()))
}

/// A half-open interval `(lower, upper]` inside `[0, 1]`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DyadicInterval {
    lower: ExactRational,
    upper: ExactRational,
}

impl DyadicInterval {
    pub fn lower(&self) -> &ExactRational {
        &self.lower
    }

    pub fn upper(&self) -> &ExactRational {
        &self.upper
    }

    pub fn width(&self) -> ExactRational {
        &self.upper - &self.lower
    }

    pub fn overlaps(&self, other: &DyadicInterval) -> bool {
        let lo = std::cmp::max(&self.lower, &other.lower);
        let hi = std::cmp::min(&self.upper, &other.upper);
        lo < hi
    }

    /// Membership in `(lower, upper]`.
    pub fn contains(&self, x: &ExactRational) -> bool {
        &self.lower < x && x <= &self.upper
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}]", self.lower, self.upper)
    }
}

impl fmt::Debug for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The reals in `(0, 1]` whose infinite binary expansion starts with `s`:
/// `(v / 2^|s|, (v + 1) / 2^|s|]`.
pub fn interval_of(s: &BitString) -> DyadicInterval {
    let v = s.value();
    let k = s.len() as u64;
    DyadicInterval { lower: ExactRational::from_dyadic(v.clone(), k), upper: ExactRational::from_dyadic(v + 1u32, k) }
}

/// Lebesgue measure of a union of pairwise disjoint intervals.
pub fn measure_of_disjoint_union(intervals: &[DyadicInterval]) -> Result<ExactRational, ExactError> {
    let mut order: Vec<usize> = (0..intervals.len()).collect();
    order.sort_by(|&a, &b| intervals[a].lower.cmp(&intervals[b].lower));
    let mut reach: Option<usize> = None;
    for &i in &order {
        if let Some(r) = reach {
            if intervals[i].lower < intervals[r].upper {
                let (first, second) = if r < i { (r, i) } else { (i, r) };
                return Err(ExactError::Overlap { first, second });
            }
            if intervals[i].upper > intervals[r].upper {
                reach = Some(i);
            }
        } else {
            reach = Some(i);
        }
    }
    Ok(intervals.iter().map(DyadicInterval::width).sum())
}

/// A closed rational interval certified to contain some real value that is
/// only approachable as a limit (an infinite sum, say).
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Enclosure {
    pub lower: ExactRational,
    pub upper: ExactRational,
    pub terms_used: usize,
}

impl Enclosure {
    pub fn exact(value: ExactRational) -> Self {
        Enclosure { lower: value.clone(), upper: value, terms_used: 0 }
    }

    pub fn width(&self) -> ExactRational {
        &self.upper - &self.lower
    }

    pub fn contains(&self, x: &ExactRational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    /// True when the closed intervals share no point.
    pub fn is_disjoint(&self, other: &Enclosure) -> bool {
        self.upper < other.lower || other.upper < self.lower
    }

    pub fn is_nested_in(&self, outer: &Enclosure) -> bool {
        outer.lower <= self.lower && self.upper <= outer.upper
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn base_two_expansions() {
        for (n, s) in [(9u32, "1001"), (26, "11010"), (41, "101001"), (1, "1")] {
            assert_eq!(nat_to_binary(&BigUint::from(n)).unwrap().to_string(), s);
        }
        assert_eq!(nat_to_binary(&BigUint::zero()), Err(ExactError::ZeroHasNoExpansion));
    }

    #[test]
    fn integer_code_table() {
        let table = ["0", "1", "00", "01", "10", "11", "000", "001", "010", "011"];
        for (i, s) in table.iter().enumerate() {
            assert_eq!(integer_code(&bs(s)), BigUint::from(i as u32 + 1));
        }
        assert_eq!(integer_code(&bs("01001")), BigUint::from(40u32));
        assert_eq!(from_integer_code(&BigUint::from(25u32)).unwrap(), bs("1010"));
        assert_eq!(from_integer_code(&BigUint::zero()), Err(ExactError::ZeroIntegerCode));
    }

    #[test]
    fn intervals_from_examples() {
        let i = interval_of(&bs("01001"));
        assert_eq!(i.lower(), &q("9/32"));
        assert_eq!(i.upper(), &q("5/16"));
        assert_eq!(i.width(), q("1/32"));
        assert_eq!(interval_of(&bs("0")).to_string(), "(0, 1/2]");
        assert_eq!(interval_of(&bs("1")).to_string(), "(1/2, 1]");
        assert_eq!(interval_of(&bs("00")).width(), q("1/4"));
    }

    #[test]
    fn disjoint_union() {
        let halves = [interval_of(&bs("0")), interval_of(&bs("1"))];
        assert_eq!(measure_of_disjoint_union(&halves).unwrap(), q("1"));
        assert_eq!(measure_of_disjoint_union(&[interval_of(&bs("00"))]).unwrap(), q("1/4"));
        assert_eq!(measure_of_disjoint_union(&[]).unwrap(), q("0"));

        let middle = DyadicInterval { lower: q("1/4"), upper: q("3/4") };
        let err = measure_of_disjoint_union(&[interval_of(&bs("0")), middle]).unwrap_err();
        assert_eq!(err, ExactError::Overlap { first: 0, second: 1 });
    }

    #[test]
    fn touching_intervals_are_disjoint() {
        let a = interval_of(&bs("00"));
        let b = interval_of(&bs("01"));
        assert!(!a.overlaps(&b));
        assert!(a.contains(&q("1/4")));
        assert!(!b.contains(&q("1/4")));
    }

    #[test]
    fn rational_plumbing() {
        assert_eq!(q("1/2") + q("1/4"), q("3/4"));
        assert!(q("3/4") < q("5/4"));
        assert_eq!(q("2/4").to_string(), "1/2");
        assert_eq!(q("1/2").checked_div(&q("0")), Err(ExactError::DivisionByZero));
        assert_eq!(ExactRational::new(1, 0), Err(ExactError::DivisionByZero));
        assert!("1/x".parse::<ExactRational>().is_err());
        assert_eq!(ExactRational::from_dyadic(BigUint::from(12u32), 4), q("3/4"));
        assert_eq!(ExactRational::pow2_neg(3), q("1/8"));
        assert_eq!(ExactRational::pow_neg(3, 2), q("1/9"));
    }

    #[test]
    fn bit_string_rejects_garbage() {
        assert_eq!("".parse::<BitString>(), Err(ExactError::EmptyBitString));
        assert_eq!("012".parse::<BitString>(), Err(ExactError::InvalidBit { position: 2, found: '2' }));
        assert_ne!(bs("0"), bs("00"));
    }

    #[test]
    fn enclosure_relations() {
        let a = Enclosure { lower: q("0"), upper: q("1/2"), terms_used: 1 };
        let b = Enclosure { lower: q("1/2"), upper: q("1"), terms_used: 1 };
        let c = Enclosure { lower: q("3/4"), upper: q("1"), terms_used: 2 };
        assert!(!a.is_disjoint(&b));
        assert!(a.is_disjoint(&c));
        assert!(c.is_nested_in(&b));
    }
}
