//! The provability sequence σ(T) and the weights built on it: 𝒱 and the
//! α-weighted family 𝒱^⟨a,b⟩_α, both reported as certified enclosures.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use super::WeightError;
use crate::exact::{Enclosure, ExactRational};
use crate::proplogic::{entails_formulas, equivalent, Formula, SentenceEnumeration, Theory};

fn bits_for(t: &Theory, sentences: &[Formula]) -> Vec<bool> {
    let axioms = t.axiom_vec();
    sentences.iter().map(|psi| entails_formulas(&axioms, std::slice::from_ref(psi))).collect()
}

/// σ_n(T) for n = 1..=k: bit n is set when `T ⊢ ψ_n`.
pub fn sigma_prefix(t: &Theory, k: usize) -> Vec<bool> {
    bits_for(t, &SentenceEnumeration::global().prefix(k))
}

/// `[Σ_{n≤k} 2^-n σ_n, same + 2^-k]` for the given prefix of σ.
pub fn v_enclosure_from_bits(bits: &[bool]) -> Enclosure {
    let k = bits.len();
    let mut numer = BigUint::default();
    for &b in bits {
        numer <<= 1;
        if b {
            numer += 1u32;
        }
    }
    let lower = ExactRational::from_dyadic(numer.clone(), k as u64);
    let upper = ExactRational::from_dyadic(numer + 1u32, k as u64);
    Enclosure { lower, upper, terms_used: k }
}

/// Enclosure of 𝒱(T) = Σ_{n>0} 2^-n σ_n(T) from the first `k` terms.
pub fn v_weight(t: &Theory, k: usize) -> Result<Enclosure, WeightError> {
    if k == 0 {
        return Err(WeightError::ZeroPrecision);
    }
    Ok(v_enclosure_from_bits(&sigma_prefix(t, k)))
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Disagreement {
    Equivalent,
    At { index: usize, first_entails: bool, second_entails: bool },
}

/// Least `n` with σ_n(T) ≠ σ_n(U), or `Equivalent`.
///
/// Terminates for non-equivalent theories: some clause over their atoms
/// separates them, and every such clause has a finite index.
pub fn first_disagreement(t: &Theory, u: &Theory) -> Disagreement {
    if equivalent(t, u) {
        return Disagreement::Equivalent;
    }
    let e = SentenceEnumeration::global();
    let mut done = 0;
    let mut chunk = 64;
    loop {
        let sentences = e.prefix(done + chunk);
        let fresh = &sentences[done..];
        let (bt, bu) = (bits_for(t, fresh), bits_for(u, fresh));
        if let Some(i) = bt.iter().zip(&bu).position(|(a, b)| a != b) {
            return Disagreement::At { index: done + i + 1, first_entails: bt[i], second_entails: bu[i] };
        }
        done += chunk;
        chunk *= 2;
    }
}

/// Memoised σ prefixes, shared by the audit workers.
#[derive(Default)]
pub struct SigmaCache {
    map: Mutex<HashMap<Theory, Arc<Vec<bool>>>>,
}

impl SigmaCache {
    pub fn new() -> Self {
        SigmaCache::default()
    }

    /// At least `k` bits of σ(T).
    pub fn bits(&self, t: &Theory, k: usize) -> Arc<Vec<bool>> {
        let have = self.map.lock().expect("sigma cache").get(t).cloned();
        if let Some(bits) = &have {
            if bits.len() >= k {
                return bits.clone();
            }
        }
        let start = have.as_ref().map_or(0, |b| b.len());
        let target = k.max(2 * start);
        let sentences = SentenceEnumeration::global().prefix(target);
        let mut bits = have.map(|b| b.as_ref().clone()).unwrap_or_default();
        bits.extend(bits_for(t, &sentences[start..]));
        let bits = Arc::new(bits);
        let mut map = self.map.lock().expect("sigma cache");
        let entry = map.entry(t.clone()).or_insert_with(|| bits.clone());
        if entry.len() < bits.len() {
            *entry = bits.clone();
        }
        entry.clone()
    }

    /// Least index where σ(T) and σ(U) differ, scanning at most `limit`
    /// sentences.
    pub fn first_difference(&self, t: &Theory, u: &Theory, limit: usize) -> Option<usize> {
        let mut k = 64.min(limit);
        loop {
            let (a, b) = (self.bits(t, k), self.bits(u, k));
            if let Some(i) = a[..k].iter().zip(&b[..k]).position(|(x, y)| x != y) {
                return Some(i + 1);
            }
            if k >= limit {
                return None;
            }
            k = (2 * k).min(limit);
        }
    }
}

/// The weight sequence α_n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphaKind {
    /// α_n = c^-n.
    Geometric { c: ExactRational },
    /// α_1 … α_m listed, with `tail` ≥ Σ_{i>m} α_i.
    Explicit { prefix: Vec<ExactRational>, tail: ExactRational },
}

/// Parameters of 𝒱^⟨a,b⟩_α: proved sentences contribute `b·α_n`, the
/// others `a·α_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaSpec {
    kind: AlphaKind,
    a: ExactRational,
    b: ExactRational,
}

impl AlphaSpec {
    fn check_ab(a: &ExactRational, b: &ExactRational) -> Result<(), WeightError> {
        if a.is_negative() || b <= a {
            return Err(WeightError::InvalidAlpha(format!("b > a >= 0 fails for a = {a}, b = {b}")));
        }
        Ok(())
    }

    /// α_n = c^-n, valid when c > 1 + b/(b-a).
    pub fn geometric(a: ExactRational, b: ExactRational, c: ExactRational) -> Result<Self, WeightError> {
        Self::check_ab(&a, &b)?;
        let bound = ExactRational::one() + b.checked_div(&(&b - &a)).expect("b > a");
        if c <= bound {
            return Err(WeightError::InvalidAlpha(format!("c > 1 + b/(b-a) requires c > {bound}, got c = {c}")));
        }
        Ok(AlphaSpec { kind: AlphaKind::Geometric { c }, a, b })
    }

    /// A finite list of α values plus a bound on the rest. Fast convergence
    /// is checked for every listed index, so weights use at most
    /// `prefix.len()` terms.
    pub fn explicit(
        a: ExactRational,
        b: ExactRational,
        prefix: Vec<ExactRational>,
        tail: ExactRational,
    ) -> Result<Self, WeightError> {
        Self::check_ab(&a, &b)?;
        if prefix.is_empty() {
            return Err(WeightError::InvalidAlpha("empty alpha prefix".into()));
        }
        if let Some(n) = prefix.iter().position(|x| x <= &ExactRational::zero()) {
            return Err(WeightError::InvalidAlpha(format!("alpha_{} must be positive", n + 1)));
        }
        if tail.is_negative() {
            return Err(WeightError::InvalidAlpha("tail bound must be nonnegative".into()));
        }
        let ratio = ExactRational::one() - a.checked_div(&b).expect("b > 0");
        let mut rest = tail.clone();
        for n in (0..prefix.len()).rev() {
            if rest >= &prefix[n] * &ratio {
                return Err(WeightError::InvalidAlpha(format!(
                    "sum of alpha_i over i > {} is {rest}, not below alpha_{}·(1 - a/b) = {}",
                    n + 1,
                    n + 1,
                    &prefix[n] * &ratio
                )));
            }
            rest += &prefix[n];
        }
        Ok(AlphaSpec { kind: AlphaKind::Explicit { prefix, tail }, a, b })
    }

    pub fn a(&self) -> &ExactRational {
        &self.a
    }

    pub fn b(&self) -> &ExactRational {
        &self.b
    }

    pub fn kind(&self) -> &AlphaKind {
        &self.kind
    }

    /// Largest usable number of terms, if bounded.
    pub fn max_terms(&self) -> Option<usize> {
        match &self.kind {
            AlphaKind::Geometric { .. } => None,
            AlphaKind::Explicit { prefix, .. } => Some(prefix.len()),
        }
    }

    /// α_1 … α_k.
    pub fn alphas(&self, k: usize) -> Vec<ExactRational> {
        match &self.kind {
            AlphaKind::Geometric { c } => {
                let inv = ExactRational::one().checked_div(c).expect("c > 1");
                let mut out = Vec::with_capacity(k);
                let mut p = ExactRational::one();
                for _ in 0..k {
                    p = &p * &inv;
                    out.push(p.clone());
                }
                out
            }
            AlphaKind::Explicit { prefix, .. } => prefix[..k.min(prefix.len())].to_vec(),
        }
    }

    /// An upper bound for Σ_{i>k} α_i (exact for geometric sequences).
    pub fn tail_after(&self, k: usize) -> ExactRational {
        match &self.kind {
            AlphaKind::Geometric { c } => {
                let ck = c.pow(k as u32);
                let denom = &ck * &(c - &ExactRational::one());
                ExactRational::one().checked_div(&denom).expect("c > 1")
            }
            AlphaKind::Explicit { prefix, tail } => {
                prefix[k.min(prefix.len())..].iter().fold(tail.clone(), |acc, x| acc + x)
            }
        }
    }

    /// Σ x_n·c^-n over the bits (x_n = b or a) with one final reduction:
    /// writing c = p/q and a, b over a common denominator d, the sum is
    /// Σ x_n·q^n·p^(k-n) / (d·p^k), accumulated by Horner's rule.
    fn geometric_sum(&self, c: &ExactRational, bits: &[bool]) -> ExactRational {
        let (p, q) = (c.numer(), c.denom());
        let d = self.a.denom() * self.b.denom();
        let an = self.a.numer() * self.b.denom();
        let bn = self.b.numer() * self.a.denom();
        let mut acc = BigInt::default();
        let mut qn = BigInt::from(1);
        let mut pk = BigInt::from(1);
        for &bit in bits {
            qn *= q;
            pk *= p;
            acc = acc * p + if bit { &bn } else { &an } * &qn;
        }
        ExactRational::from(BigRational::new(acc, d * pk))
    }

    /// Enclosure from a σ prefix: lower = Σ α_n·(a or b), upper = lower +
    /// b·tail.
    pub fn enclosure_from_bits(&self, bits: &[bool]) -> Enclosure {
        let k = self.max_terms().map_or(bits.len(), |m| m.min(bits.len()));
        let lower = match &self.kind {
            AlphaKind::Geometric { c } => self.geometric_sum(c, &bits[..k]),
            AlphaKind::Explicit { .. } => {
                let mut lower = ExactRational::zero();
                for (alpha, &bit) in self.alphas(k).iter().zip(bits) {
                    lower += &(alpha * if bit { &self.b } else { &self.a });
                }
                lower
            }
        };
        let upper = &lower + &(&self.b * &self.tail_after(k));
        Enclosure { lower, upper, terms_used: k }
    }
}

/// Enclosure of 𝒱^⟨a,b⟩_α(T) from `k` terms (capped for explicit
/// sequences).
pub fn v_ab(t: &Theory, spec: &AlphaSpec, k: usize) -> Result<Enclosure, WeightError> {
    if k == 0 {
        return Err(WeightError::ZeroPrecision);
    }
    let k = spec.max_terms().map_or(k, |m| m.min(k));
    Ok(spec.enclosure_from_bits(&sigma_prefix(t, k)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn th(s: &str) -> Theory {
        Theory::parse_inline(s).unwrap()
    }

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    #[test]
    fn inconsistent_theories_prove_everything() {
        assert!(sigma_prefix(&th("p0; !p0"), 64).iter().all(|&b| b));
        let e = v_weight(&th("p0; !p0"), 10).unwrap();
        assert_eq!(e.lower, q("1023/1024"));
        assert_eq!(e.upper, q("1"));
    }

    #[test]
    fn empty_theory_proves_tautologies_only() {
        let bits = sigma_prefix(&Theory::new(), 200);
        let sentences = SentenceEnumeration::global().prefix(200);
        for (bit, psi) in bits.iter().zip(&sentences) {
            let taut = crate::proplogic::sat::entails_truth_table(&[], std::slice::from_ref(psi));
            assert_eq!(*bit, taut, "{psi}");
        }
    }

    #[test]
    fn refinement_nests() {
        let t = th("p0 -> p1");
        let coarse = v_weight(&t, 10).unwrap();
        let fine = v_weight(&t, 20).unwrap();
        assert!(fine.is_nested_in(&coarse));
    }

    #[test]
    fn disagreement_examples() {
        assert_eq!(first_disagreement(&th("p0"), &th("p0")), Disagreement::Equivalent);
        assert_eq!(first_disagreement(&th("p0; p0 -> p1"), &th("p0 & p1")), Disagreement::Equivalent);
        let Disagreement::At { index, first_entails, second_entails } = first_disagreement(&th("p0"), &th("p1")) else {
            panic!("p0 and p1 are not equivalent");
        };
        let psi = SentenceEnumeration::global().get(index).unwrap();
        assert_eq!(first_entails, crate::proplogic::entails_formula(&th("p0"), &psi));
        assert_eq!(second_entails, crate::proplogic::entails_formula(&th("p1"), &psi));
        assert_ne!(first_entails, second_entails);
    }

    #[test]
    fn alpha_validation() {
        assert!(AlphaSpec::geometric(q("2"), q("4"), q("7")).is_ok());
        let err = AlphaSpec::geometric(q("2"), q("4"), q("2")).unwrap_err();
        assert!(err.to_string().contains("c > 3"), "{err}");
        assert!(AlphaSpec::geometric(q("4"), q("2"), q("7")).is_err());
        assert!(AlphaSpec::geometric(q("2"), q("4"), q("3")).is_err());
    }

    #[test]
    fn large_a_pushes_every_weight_above_one() {
        let spec = AlphaSpec::geometric(q("8"), q("16"), q("7")).unwrap();
        for t in [Theory::new(), th("p0"), th("p0; !p0")] {
            assert!(v_ab(&t, &spec, 10).unwrap().lower > ExactRational::one());
        }
    }

    #[test]
    fn geometric_tail_is_exact() {
        let spec = AlphaSpec::geometric(q("2"), q("4"), q("7")).unwrap();
        // Σ_{i>2} 7^-i = 7^-2 / 6
        assert_eq!(spec.tail_after(2), q("1/294"));
        let e = v_ab(&th("p0; !p0"), &spec, 5).unwrap();
        // all bits set: value 4·Σ 7^-n = 4/6
        assert!(e.contains(&q("2/3")));
    }

    #[test]
    fn explicit_alpha() {
        let prefix = vec![q("1/2"), q("1/8"), q("1/32")];
        let spec = AlphaSpec::explicit(q("0"), q("1"), prefix.clone(), q("1/128")).unwrap();
        assert_eq!(spec.max_terms(), Some(3));
        assert_eq!(v_ab(&th("p0"), &spec, 50).unwrap().terms_used, 3);
        let bad = AlphaSpec::explicit(q("0"), q("1"), vec![q("1/2"), q("1/2")], q("0"));
        assert!(bad.is_err());
    }

    #[test]
    fn cache_matches_direct_computation() {
        let cache = SigmaCache::new();
        let t = th("p0 | p2");
        assert_eq!(cache.bits(&t, 30)[..30], sigma_prefix(&t, 30)[..]);
        assert_eq!(cache.bits(&t, 100)[..100], sigma_prefix(&t, 100)[..]);
        let Disagreement::At { index, .. } = first_disagreement(&th("p0"), &th("p1")) else { unreachable!() };
        assert_eq!(cache.first_difference(&th("p0"), &th("p1"), 10_000), Some(index));
    }

    #[test]
    fn geometric_sum_matches_term_by_term() {
        let spec = AlphaSpec::geometric(q("1/3"), q("5/2"), q("9/2")).unwrap();
        let bits: Vec<bool> = (0..40).map(|i| i % 3 != 1).collect();
        let mut naive = ExactRational::zero();
        for (alpha, &bit) in spec.alphas(40).iter().zip(&bits) {
            naive += &(alpha * if bit { spec.b() } else { spec.a() });
        }
        assert_eq!(spec.enclosure_from_bits(&bits).lower, naive);
    }
}
