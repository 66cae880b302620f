//! Probability measures on bit strings and on positive integers, the
//! dominance comparison against Ω, and the Monte-Carlo reading of Ω_S.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{Enclosure, ExactRational};
use crate::minilang::EnumerationReport;
use crate::prefixfree::{check_prefix_free, omega, PrefixFreeness, StringSet};

pub use crate::minilang::k_number;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeasureError {
    #[error("length measure sums to {0}, not 1 (set renormalize to rescale)")]
    NotNormalized(ExactRational),
    #[error("invalid measure: {0}")]
    Invalid(String),
    #[error("string of length {len} lies outside the support 1..={support}")]
    OutsideSupport { len: usize, support: usize },
    #[error("length {0} does not occur in the census")]
    LengthAbsent(usize),
    #[error("base must be at least 2, got {0}")]
    BaseTooSmall(u64),
    #[error("set is not prefix-free: {prefix} is a proper prefix of {extension}")]
    NotPrefixFree { prefix: String, extension: String },
    #[error("trials must be at least 1")]
    NoTrials,
}

/// Per-length probabilities π_1 … π_L with Σ 2^ℓ·π_ℓ = 1: each string of
/// length ℓ has probability π_ℓ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LengthMeasure {
    values: Vec<ExactRational>,
}

/// How to build a [`LengthMeasure`]; also the JSON measure-file format,
/// with rationals written as `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LengthMeasureSpec {
    /// All mass on length `m`: π_m = 2^-m.
    PointMass { m: usize, support: usize },
    /// Length ℓ with probability ∝ (1 − q)^(ℓ−1)·q on 1..=support.
    StopProbability { q: ExactRational, support: usize },
    /// π_1, π_2, … given directly.
    Explicit {
        values: Vec<ExactRational>,
        #[serde(default)]
        renormalize: bool,
    },
}

impl LengthMeasure {
    pub fn support(&self) -> usize {
        self.values.len()
    }

    /// π_ℓ (0 outside the support).
    pub fn pi(&self, len: usize) -> ExactRational {
        if len == 0 {
            return ExactRational::zero();
        }
        self.values.get(len - 1).cloned().unwrap_or_default()
    }

    pub fn values(&self) -> &[ExactRational] {
        &self.values
    }

    /// Σ 2^ℓ·π_ℓ, which is 1 for every constructed measure.
    pub fn total_mass(&self) -> ExactRational {
        mass(&self.values)
    }

    /// P(|σ| = ℓ) = 2^ℓ·π_ℓ.
    pub fn length_probability(&self, len: usize) -> ExactRational {
        &self.pi(len) * &ExactRational::from_integer(BigUint::from(1u32) << len)
    }
}

fn mass(values: &[ExactRational]) -> ExactRational {
    values.iter().enumerate().map(|(i, v)| v * &ExactRational::from_integer(BigUint::from(1u32) << (i + 1))).sum()
}

pub fn make_length_measure(spec: &LengthMeasureSpec) -> Result<LengthMeasure, MeasureError> {
    match spec {
        LengthMeasureSpec::PointMass { m, support } => {
            if *m == 0 || m > support {
                return Err(MeasureError::Invalid(format!("point mass at {m} outside 1..={support}")));
            }
            let mut values = vec![ExactRational::zero(); *support];
            values[m - 1] = ExactRational::pow2_neg(*m as u64);
            Ok(LengthMeasure { values })
        }
        LengthMeasureSpec::StopProbability { q, support } => {
            if *support == 0 || q <= &ExactRational::zero() || q > &ExactRational::one() {
                return Err(MeasureError::Invalid(format!("stop probability {q} must lie in (0, 1] with support ≥ 1")));
            }
            let keep = ExactRational::one() - q;
            let mut p = q.clone();
            let mut raw = Vec::with_capacity(*support);
            for _ in 0..*support {
                raw.push(p.clone());
                p = &p * &keep;
            }
            let z: ExactRational = raw.iter().sum();
            let values = raw
                .iter()
                .enumerate()
                .map(|(i, pl)| pl.checked_div(&z).expect("z > 0") * ExactRational::pow2_neg(i as u64 + 1))
                .collect();
            Ok(LengthMeasure { values })
        }
        LengthMeasureSpec::Explicit { values, renormalize } => {
            if values.is_empty() {
                return Err(MeasureError::Invalid("empty value list".into()));
            }
            if let Some(i) = values.iter().position(ExactRational::is_negative) {
                return Err(MeasureError::Invalid(format!("pi_{} is negative", i + 1)));
            }
            let total = mass(values);
            if total == ExactRational::one() {
                return Ok(LengthMeasure { values: values.clone() });
            }
            if !renormalize || total.is_zero() {
                return Err(MeasureError::NotNormalized(total));
            }
            Ok(LengthMeasure { values: values.iter().map(|v| v.checked_div(&total).expect("nonzero")).collect() })
        }
    }
}

/// Random measure on 1..=support: even draws are stop-probability
/// measures, odd draws explicit tables of random integer weights.
pub fn random_length_measure<R: Rng + ?Sized>(rng: &mut R, support: usize, draw: usize) -> LengthMeasure {
    let spec = if draw.is_multiple_of(2) {
        let q = ExactRational::new(rng.gen_range(1..100), 100).expect("nonzero");
        LengthMeasureSpec::StopProbability { q, support }
    } else {
        let mut weights: Vec<u32> = (0..support).map(|_| rng.gen_range(0..=100)).collect();
        if weights.iter().all(|&w| w == 0) {
            weights[0] = 1;
        }
        let values = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| &ExactRational::from_integer(w) * &ExactRational::pow2_neg(i as u64 + 1))
            .collect();
        LengthMeasureSpec::Explicit { values, renormalize: true }
    };
    make_length_measure(&spec).expect("valid by construction")
}

/// Σ_ℓ #{σ ∈ S : |σ| = ℓ}·π_ℓ.
pub fn set_probability(set: &StringSet, pi: &LengthMeasure) -> Result<ExactRational, MeasureError> {
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for s in set.iter() {
        if s.len() > pi.support() {
            return Err(MeasureError::OutsideSupport { len: s.len(), support: pi.support() });
        }
        *counts.entry(s.len()).or_default() += 1;
    }
    Ok(counts.into_iter().map(|(len, c)| &ExactRational::from_integer(c) * &pi.pi(len)).sum())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominanceReport {
    /// Σ 𝒩(ℓ)·π_ℓ.
    pub halting_prob: ExactRational,
    /// Σ 𝒩(ℓ)·2^-ℓ.
    pub omega_partial: ExactRational,
    pub strict: bool,
    /// Halting programs exist at two different lengths.
    pub hypothesis_met: bool,
}

pub fn dominance_check(census: &EnumerationReport, pi: &LengthMeasure) -> Result<DominanceReport, MeasureError> {
    if let Some(row) = census.rows.iter().find(|r| r.bit_length > pi.support()) {
        return Err(MeasureError::OutsideSupport { len: row.bit_length, support: pi.support() });
    }
    let mut halting_prob = ExactRational::zero();
    for (len, n) in census.halting_counts() {
        halting_prob += &(&ExactRational::from_integer(n) * &pi.pi(len));
    }
    let omega_partial = census.omega_h_partial.clone();
    Ok(DominanceReport {
        strict: halting_prob < omega_partial,
        hypothesis_met: census.halting_counts().filter(|&(_, n)| n > 0).count() >= 2,
        halting_prob,
        omega_partial,
    })
}

/// 𝒩(ℓ)/2^ℓ.
pub fn fixed_length_halting(census: &EnumerationReport, len: usize) -> Result<ExactRational, MeasureError> {
    let n = census.halted_at(len).ok_or(MeasureError::LengthAbsent(len))?;
    Ok(&ExactRational::from_integer(n) * &ExactRational::pow2_neg(len as u64))
}

/// A set of positive integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NatSet {
    Finite(BTreeSet<u64>),
    /// `{n ≥ 1 : n mod period ∈ residues}`.
    Periodic {
        period: u64,
        residues: BTreeSet<u64>,
    },
}

impl NatSet {
    pub fn evens() -> Self {
        NatSet::Periodic { period: 2, residues: [0].into() }
    }

    pub fn odds() -> Self {
        NatSet::Periodic { period: 2, residues: [1].into() }
    }

    pub fn all() -> Self {
        NatSet::Periodic { period: 1, residues: [0].into() }
    }

    pub fn contains(&self, n: u64) -> bool {
        match self {
            NatSet::Finite(s) => s.contains(&n),
            NatSet::Periodic { period, residues } => n >= 1 && residues.contains(&(n % period)),
        }
    }

    /// Smallest members of each residue class, within 1..=period.
    fn representatives(period: u64, residues: &BTreeSet<u64>) -> Vec<u64> {
        residues.iter().filter(|&&r| r < period).map(|&r| if r == 0 { period } else { r }).collect()
    }
}

/// 𝔭(S) = Σ_{n∈S} 2^-n, exact for finite and periodic sets.
pub fn p_nat(set: &NatSet) -> ExactRational {
    match set {
        NatSet::Finite(s) => s.iter().filter(|&&n| n >= 1).map(|&n| ExactRational::pow2_neg(n)).sum(),
        NatSet::Periodic { period, residues } => {
            assert!(*period >= 1, "period must be positive");
            let head: ExactRational =
                NatSet::representatives(*period, residues).into_iter().map(ExactRational::pow2_neg).sum();
            let ratio = ExactRational::one() - ExactRational::pow2_neg(*period);
            head.checked_div(&ratio).expect("period ≥ 1")
        }
    }
}

/// 𝔭 of `{n ≤ bound : pred(n)}` plus the certified tail `[0, 2^-bound]`.
pub fn p_nat_predicate<F: Fn(u64) -> bool>(pred: F, bound: u64) -> Enclosure {
    let lower: ExactRational = (1..=bound).filter(|&n| pred(n)).map(ExactRational::pow2_neg).sum();
    let upper = &lower + &ExactRational::pow2_neg(bound);
    Enclosure { lower, upper, terms_used: bound as usize }
}

/// Σ_{σ∈S} r^-|σ|.
pub fn generalized_omega(set: &StringSet, base: u64) -> Result<ExactRational, MeasureError> {
    if base < 2 {
        return Err(MeasureError::BaseTooSmall(base));
    }
    Ok(set.iter().map(|s| ExactRational::pow_neg(base, s.len() as u64)).sum())
}

/// Which reading of the Poisson suggestion to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PoissonVariant {
    /// α_n = λ^n / (n!·(e^λ − 1)): the Poisson law conditioned on n ≥ 1.
    Normalized,
    /// α_n = e^-λ·λ^-n / n! literally; does not sum to 1.
    AsWrittenUnnormalized,
}

/// A sequence α_1, α_2, … of positive weights on the positive integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexMeasure {
    /// α_n = (1 − r)·r^(n−1), 0 < r < 1.
    Geometric {
        ratio: ExactRational,
    },
    /// Listed α_1 … α_m; the remaining mass `tail` sits beyond m.
    Prefix {
        values: Vec<ExactRational>,
        tail: ExactRational,
    },
    Poisson {
        lambda: ExactRational,
        variant: PoissonVariant,
    },
}

/// Series terms used for e^x bounds.
fn exp_terms(x: &ExactRational) -> u32 {
    40 + 3 * x.to_f64().ceil().max(0.0) as u32
}

/// Rational bounds `lo ≤ e^x ≤ hi` for `x ≥ 0`.
pub fn exp_bounds(x: &ExactRational) -> (ExactRational, ExactRational) {
    assert!(!x.is_negative(), "exp_bounds needs x ≥ 0");
    let n = exp_terms(x);
    let mut term = ExactRational::one();
    let mut sum = ExactRational::one();
    for k in 1..=n {
        term = &term * &x.checked_div(&ExactRational::from_integer(k)).expect("k ≥ 1");
        sum += &term;
    }
    // next term times the geometric bound 1 / (1 − x/(n+2))
    let next = &term * &x.checked_div(&ExactRational::from_integer(n + 1)).expect("nonzero");
    let shrink = ExactRational::one() - x.checked_div(&ExactRational::from_integer(n + 2)).expect("nonzero");
    let rest = next.checked_div(&shrink).expect("n + 2 > x");
    let hi = &sum + &rest;
    (sum, hi)
}

fn factorial(n: u64) -> ExactRational {
    ExactRational::from_integer((1..=n).fold(BigUint::from(1u32), |acc, k| acc * k))
}

impl IndexMeasure {
    pub fn geometric(ratio: ExactRational) -> Result<Self, MeasureError> {
        if ratio <= ExactRational::zero() || ratio >= ExactRational::one() {
            return Err(MeasureError::Invalid(format!("geometric ratio {ratio} must lie in (0, 1)")));
        }
        Ok(IndexMeasure::Geometric { ratio })
    }

    pub fn prefix(values: Vec<ExactRational>, tail: ExactRational) -> Result<Self, MeasureError> {
        if values.iter().any(|v| v <= &ExactRational::zero()) {
            return Err(MeasureError::Invalid("weights must be positive".into()));
        }
        if tail.is_negative() {
            return Err(MeasureError::Invalid("tail mass must be nonnegative".into()));
        }
        let total: ExactRational = values.iter().sum::<ExactRational>() + tail.clone();
        if total != ExactRational::one() {
            return Err(MeasureError::NotNormalized(total));
        }
        Ok(IndexMeasure::Prefix { values, tail })
    }

    pub fn poisson(lambda: ExactRational, variant: PoissonVariant) -> Result<Self, MeasureError> {
        if lambda <= ExactRational::zero() {
            return Err(MeasureError::Invalid(format!("lambda {lambda} must be positive")));
        }
        Ok(IndexMeasure::Poisson { lambda, variant })
    }

    pub fn is_normalized(&self) -> bool {
        !matches!(self, IndexMeasure::Poisson { variant: PoissonVariant::AsWrittenUnnormalized, .. })
    }

    /// Bounds on α_n.
    pub fn term(&self, n: u64) -> (ExactRational, ExactRational) {
        assert!(n >= 1);
        match self {
            IndexMeasure::Geometric { ratio } => {
                let v = (ExactRational::one() - ratio.clone()) * ratio.pow((n - 1) as u32);
                (v.clone(), v)
            }
            IndexMeasure::Prefix { values, tail } => match values.get(n as usize - 1) {
                Some(v) => (v.clone(), v.clone()),
                None => (ExactRational::zero(), tail.clone()),
            },
            IndexMeasure::Poisson { lambda, variant } => match variant {
                PoissonVariant::Normalized => {
                    let (lo, hi) = exp_bounds(lambda);
                    let base = lambda.pow(n as u32).checked_div(&factorial(n)).expect("n! > 0");
                    let one = ExactRational::one();
                    (
                        base.checked_div(&(hi - one.clone())).expect("e^λ > 1"),
                        base.checked_div(&(lo - one)).expect("e^λ > 1"),
                    )
                }
                PoissonVariant::AsWrittenUnnormalized => {
                    let (lo, hi) = exp_bounds(lambda);
                    let base =
                        ExactRational::one().checked_div(&(lambda.pow(n as u32) * factorial(n))).expect("positive");
                    (base.checked_div(&hi).expect("positive"), base.checked_div(&lo).expect("positive"))
                }
            },
        }
    }

    /// Bounds on Σ_{n>0} α_n (exactly 1 for normalized measures).
    pub fn total(&self) -> Enclosure {
        match self {
            IndexMeasure::Poisson { lambda, variant: PoissonVariant::AsWrittenUnnormalized } => {
                // e^-λ·(e^(1/λ) − 1)
                let inv = ExactRational::one().checked_div(lambda).expect("λ > 0");
                let (a_lo, a_hi) = exp_bounds(&inv);
                let (b_lo, b_hi) = exp_bounds(lambda);
                let one = ExactRational::one();
                Enclosure {
                    lower: (a_lo - one.clone()).checked_div(&b_hi).expect("positive"),
                    upper: (a_hi - one).checked_div(&b_lo).expect("positive"),
                    terms_used: 0,
                }
            }
            _ => Enclosure::exact(ExactRational::one()),
        }
    }
}

/// Σ_{n∈H} α_n, as an enclosure. Geometric weights on periodic sets have a
/// closed form; otherwise terms up to `bound` are summed and the rest of
/// the mass bounds the tail.
pub fn alpha_halting(alpha: &IndexMeasure, set: &NatSet, bound: u64) -> Enclosure {
    if let (IndexMeasure::Geometric { ratio }, NatSet::Periodic { period, residues }) = (alpha, set) {
        // Σ_{n∈H} (1−r) r^(n−1) = (1−r)/r · Σ_rep r^rep / (1 − r^period)
        let one = ExactRational::one();
        let head: ExactRational =
            NatSet::representatives(*period, residues).into_iter().map(|n| ratio.pow(n as u32)).sum();
        let value = ((one.clone() - ratio.clone()).checked_div(ratio).expect("r > 0") * head)
            .checked_div(&(one - ratio.pow(*period as u32)))
            .expect("r < 1");
        return Enclosure::exact(value);
    }
    let limit = match set {
        NatSet::Finite(s) => s.iter().next_back().copied().unwrap_or(0),
        NatSet::Periodic { .. } => bound,
    };
    let (mut lower, mut upper) = (ExactRational::zero(), ExactRational::zero());
    let mut all_lower = ExactRational::zero();
    for n in 1..=limit {
        let (lo, hi) = alpha.term(n);
        if set.contains(n) {
            lower += &lo;
            upper += &hi;
        }
        all_lower += &lo;
    }
    if matches!(set, NatSet::Periodic { .. }) {
        let rest = &alpha.total().upper - &all_lower;
        upper = &upper + &rest.max(ExactRational::zero());
    }
    Enclosure { lower, upper, terms_used: limit as usize }
}

/// Result of a Monte-Carlo run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct McReport {
    pub trials: u64,
    pub hits: u64,
    pub estimate: ExactRational,
    pub target: ExactRational,
    pub seed: u64,
    pub generator: &'static str,
}

/// Trials per independent generator stream.
pub const MC_CHUNK: u64 = 1024;

pub const MC_GENERATOR: &str =
    "ChaCha8 (rand_chacha 0.3), seed_from_u64(seed), stream = chunk index, 1024 trials per chunk";

struct Trie {
    /// children[node] = [child on 0, child on 1]
    children: Vec<[Option<usize>; 2]>,
    terminal: Vec<bool>,
}

impl Trie {
    fn new(set: &StringSet) -> Self {
        let mut t = Trie { children: vec![[None, None]], terminal: vec![false] };
        for s in set.iter() {
            let mut node = 0;
            for &b in s.bits() {
                node = match t.children[node][usize::from(b)] {
                    Some(c) => c,
                    None => {
                        t.children.push([None, None]);
                        t.terminal.push(false);
                        let c = t.children.len() - 1;
                        t.children[node][usize::from(b)] = Some(c);
                        c
                    }
                };
            }
            t.terminal[node] = true;
        }
        t
    }

    /// Draws coin tosses (tails = 1, heads = 0) until the prefix read so
    /// far is in the set or no longer extends to any member.
    fn trial<R: Rng>(&self, rng: &mut R) -> bool {
        let mut node = 0;
        loop {
            if self.terminal[node] {
                return true;
            }
            if self.children[node] == [None, None] {
                return false;
            }
            let tails = rng.gen::<bool>();
            match self.children[node][usize::from(tails)] {
                Some(c) => node = c,
                None => return false,
            }
        }
    }
}

/// Estimates the probability that a uniformly random real in (0, 1] has a
/// binary expansion starting with some member of `set`; the exact answer is
/// Ω_S.
pub fn sample_real_prefix(set: &StringSet, trials: u64, seed: u64) -> Result<McReport, MeasureError> {
    if trials == 0 {
        return Err(MeasureError::NoTrials);
    }
    if let PrefixFreeness::Witness { prefix, extension } = check_prefix_free(set) {
        return Err(MeasureError::NotPrefixFree { prefix: prefix.to_string(), extension: extension.to_string() });
    }
    let trie = Trie::new(set);
    let chunks = trials.div_ceil(MC_CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let n = MC_CHUNK.min(trials - c * MC_CHUNK);
            (0..n).filter(|_| trie.trial(&mut rng)).count() as u64
        })
        .sum();
    Ok(McReport {
        trials,
        hits,
        estimate: ExactRational::new(hits, trials).expect("trials > 0"),
        target: omega(set.iter()),
        seed,
        generator: MC_GENERATOR,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minilang::halting_census;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    fn set(items: &[&str]) -> StringSet {
        items.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn length_measures() {
        let pm = make_length_measure(&LengthMeasureSpec::PointMass { m: 2, support: 2 }).unwrap();
        assert_eq!(pm.values(), &[q("0"), q("1/4")]);
        let ex = LengthMeasureSpec::Explicit { values: vec![q("1/6"), q("1/6")], renormalize: false };
        assert_eq!(make_length_measure(&ex).unwrap().total_mass(), q("1"));
        let sp = make_length_measure(&LengthMeasureSpec::StopProbability { q: q("1/2"), support: 3 }).unwrap();
        // P = 4/7, 2/7, 1/7
        assert_eq!(sp.values(), &[q("2/7"), q("1/14"), q("1/56")]);
        assert_eq!(sp.total_mass(), q("1"));
        let bad = LengthMeasureSpec::Explicit { values: vec![q("1/2"), q("1/2")], renormalize: false };
        assert!(matches!(make_length_measure(&bad), Err(MeasureError::NotNormalized(_))));
        let fixed = LengthMeasureSpec::Explicit { values: vec![q("1/2"), q("1/2")], renormalize: true };
        assert_eq!(make_length_measure(&fixed).unwrap().total_mass(), q("1"));
    }

    #[test]
    fn spec_json() {
        let spec: LengthMeasureSpec =
            serde_json::from_str(r#"{"kind":"stop-probability","q":"1/3","support":24}"#).unwrap();
        assert_eq!(spec, LengthMeasureSpec::StopProbability { q: q("1/3"), support: 24 });
        let spec: LengthMeasureSpec = serde_json::from_str(r#"{"kind":"explicit","values":["1/6","1/6"]}"#).unwrap();
        assert!(make_length_measure(&spec).is_ok());
    }

    #[test]
    fn coin_examples() {
        let pi =
            make_length_measure(&LengthMeasureSpec::Explicit { values: vec![q("1/6"), q("1/6")], renormalize: false })
                .unwrap();
        assert_eq!(set_probability(&set(&["1", "00"]), &pi).unwrap(), q("1/3"));
        assert_eq!(set_probability(&set(&["1", "00", "01"]), &pi).unwrap(), q("1/2"));
        assert_eq!(set_probability(&StringSet::new(), &pi).unwrap(), q("0"));
        assert!(set_probability(&set(&["000"]), &pi).is_err());
    }

    #[test]
    fn dominance_on_census() {
        let census = halting_census(3, 100).unwrap();
        let pm = make_length_measure(&LengthMeasureSpec::PointMass { m: 8, support: 24 }).unwrap();
        let r = dominance_check(&census, &pm).unwrap();
        assert!(r.hypothesis_met && r.strict);
        assert_eq!(r.halting_prob, q("1/256"));
        let short = make_length_measure(&LengthMeasureSpec::PointMass { m: 8, support: 16 }).unwrap();
        assert!(dominance_check(&census, &short).is_err());
        assert_eq!(fixed_length_halting(&census, 16).unwrap(), q("4/65536"));
        assert!(fixed_length_halting(&census, 12).is_err());
    }

    #[test]
    fn natural_number_measure() {
        assert_eq!(p_nat(&NatSet::evens()), q("1/3"));
        assert_eq!(p_nat(&NatSet::odds()), q("2/3"));
        assert_eq!(p_nat(&NatSet::all()), q("1"));
        assert_eq!(p_nat(&NatSet::Finite([1, 3].into())), q("5/8"));
        let e = p_nat_predicate(|n| n % 2 == 0, 20);
        assert!(e.contains(&q("1/3")));
    }

    #[test]
    fn base_three() {
        assert_eq!(generalized_omega(&set(&["1", "00"]), 3).unwrap(), q("4/9"));
        assert!(generalized_omega(&set(&["1"]), 1).is_err());
    }

    #[test]
    fn index_measures() {
        let g = IndexMeasure::geometric(q("1/2")).unwrap();
        assert_eq!(alpha_halting(&g, &NatSet::evens(), 0), Enclosure::exact(q("1/3")));
        assert_eq!(alpha_halting(&g, &NatSet::Finite([1].into()), 0).lower, q("1/2"));
        assert!(IndexMeasure::prefix(vec![q("1/2")], q("1/4")).is_err());
        let pre = IndexMeasure::prefix(vec![q("1/2"), q("1/4")], q("1/4")).unwrap();
        let e = alpha_halting(&pre, &NatSet::all(), 2);
        assert_eq!((e.lower, e.upper), (q("3/4"), q("1")));
    }

    #[test]
    fn exp_and_poisson() {
        let (lo, hi) = exp_bounds(&q("1"));
        assert!(lo.to_f64() <= std::f64::consts::E && std::f64::consts::E <= hi.to_f64());
        assert!(hi.clone() - lo < q("1/1000000000000"));
        let pn = IndexMeasure::poisson(q("2"), PoissonVariant::Normalized).unwrap();
        let all = alpha_halting(&pn, &NatSet::all(), 60);
        assert!(all.contains(&q("1")));
        let raw = IndexMeasure::poisson(q("2"), PoissonVariant::AsWrittenUnnormalized).unwrap();
        assert!(!raw.is_normalized());
        assert!(raw.total().upper < q("1"));
    }

    #[test]
    fn monte_carlo() {
        let r = sample_real_prefix(&set(&["1", "00"]), 10_000, 3).unwrap();
        assert!((r.estimate.to_f64() - 0.75).abs() < 0.02);
        assert_eq!(r, sample_real_prefix(&set(&["1", "00"]), 10_000, 3).unwrap());
        let empty = sample_real_prefix(&StringSet::new(), 100, 1).unwrap();
        assert_eq!(empty.hits, 0);
        assert!(sample_real_prefix(&set(&["0", "00"]), 10, 1).is_err());
    }
}
