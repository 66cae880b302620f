//! The weight registry and brute-force HP/EP auditors over finite corpora.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::sigma::{v_enclosure_from_bits, AlphaSpec, SigmaCache};
use super::{
    axiom_count, check_reference, construct::u_construction, counting_weight, w_five, w_four, w_incons, w_lower,
    w_structure, w_taut, w_three, w_upper, w_valuation, WeightError, WeightValue,
};
use crate::exact::ExactRational;
use crate::proplogic::fo::{FiniteStructure, FoFormula};
use crate::proplogic::sat::ModelSet;
use crate::proplogic::{entails, Theory, Valuation};

/// Registered weight names, in report order.
pub const REGISTRY: [&str; 13] =
    ["wv", "wm", "wtaut", "wincons", "wlower", "wupper", "w3", "w4", "w5", "count", "v", "vab", "u"];

/// Name of the deliberately HP-violating weight.
pub const BROKEN_WEIGHT: &str = "axiom-count";

/// Atoms given nullary relations in the default structures.
const DEFAULT_STRUCTURE_ATOMS: u32 = 16;

/// `T_i ⊢ T_j` for every ordered pair of a corpus.
pub struct EntailmentMatrix {
    rows: Vec<Vec<bool>>,
}

impl EntailmentMatrix {
    pub fn new(corpus: &[Theory]) -> Self {
        let atoms: BTreeSet<u32> = corpus.iter().flat_map(Theory::atoms).collect();
        let rows = if atoms.len() <= 16 {
            let atoms: Vec<u32> = atoms.into_iter().collect();
            let models: Vec<ModelSet> = corpus.par_iter().map(|t| ModelSet::of(&t.axiom_vec(), &atoms)).collect();
            models.par_iter().map(|mi| models.iter().map(|mj| mi.is_subset(mj)).collect()).collect()
        } else {
            corpus.par_iter().map(|t| corpus.iter().map(|u| entails(t, u)).collect()).collect()
        };
        EntailmentMatrix { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn entails(&self, i: usize, j: usize) -> bool {
        self.rows[i][j]
    }

    pub fn equivalent(&self, i: usize, j: usize) -> bool {
        self.rows[i][j] && self.rows[j][i]
    }
}

/// A weighing function on propositional theories.
pub trait Weighing: Send + Sync {
    fn name(&self) -> &str;

    /// Weight of one theory; `precision` is the number of series terms for
    /// enclosure-valued weights and is ignored otherwise.
    fn weigh(&self, t: &Theory, precision: usize) -> Result<WeightValue, WeightError>;

    /// Weights of a whole corpus. Weighings defined relative to a list
    /// (the inductive construction) override this.
    fn weigh_corpus(&self, corpus: &[Theory], precision: usize) -> Result<Vec<WeightValue>, WeightError> {
        corpus.par_iter().map(|t| self.weigh(t, precision)).collect()
    }

    /// Precision from which overlapping enclosures of a non-equivalent pair
    /// should be refined one term at a time.
    fn separation_start(&self, _t: &Theory, _u: &Theory) -> Option<usize> {
        None
    }
}

type SmallFn = dyn Fn(&Theory) -> Result<u32, WeightError> + Send + Sync;

struct Small {
    name: String,
    f: Box<SmallFn>,
}

impl Weighing for Small {
    fn name(&self) -> &str {
        &self.name
    }

    fn weigh(&self, t: &Theory, _precision: usize) -> Result<WeightValue, WeightError> {
        (self.f)(t).map(WeightValue::small)
    }
}

fn embed(t: &Theory) -> Vec<FoFormula> {
    t.axioms().map(FoFormula::from_propositional).collect()
}

/// Enclosure weights over σ: 𝒱 itself, or the α-weighted variant.
struct SigmaWeight {
    name: String,
    alpha: Option<AlphaSpec>,
    cache: SigmaCache,
}

/// Scan limit for locating the first σ difference of a pair.
const DISAGREEMENT_SCAN_LIMIT: usize = 1 << 20;

impl Weighing for SigmaWeight {
    fn name(&self) -> &str {
        &self.name
    }

    fn weigh(&self, t: &Theory, precision: usize) -> Result<WeightValue, WeightError> {
        if precision == 0 {
            return Err(WeightError::ZeroPrecision);
        }
        let k = match &self.alpha {
            Some(spec) => spec.max_terms().map_or(precision, |m| m.min(precision)),
            None => precision,
        };
        let bits = self.cache.bits(t, k);
        let bits = &bits[..k];
        Ok(WeightValue::Enclosure(match &self.alpha {
            None => v_enclosure_from_bits(bits),
            Some(spec) => spec.enclosure_from_bits(bits),
        }))
    }

    fn separation_start(&self, t: &Theory, u: &Theory) -> Option<usize> {
        self.cache.first_difference(t, u, DISAGREEMENT_SCAN_LIMIT)
    }
}

struct UWeight {
    seed: ExactRational,
}

impl Weighing for UWeight {
    fn name(&self) -> &str {
        "u"
    }

    fn weigh(&self, t: &Theory, _precision: usize) -> Result<WeightValue, WeightError> {
        Ok(WeightValue::Exact(u_construction(std::slice::from_ref(t), self.seed.clone()).weight(0).clone()))
    }

    fn weigh_corpus(&self, corpus: &[Theory], _precision: usize) -> Result<Vec<WeightValue>, WeightError> {
        Ok(u_construction(corpus, self.seed.clone()).weights().into_iter().map(WeightValue::Exact).collect())
    }
}

/// Parameters for the registered weights. Unused fields are ignored.
#[derive(Clone, Debug)]
pub struct WeightParams {
    /// For `wv`.
    pub valuation: Valuation,
    /// The reference theory 𝕍 for `wlower`, `wupper`, `w4`, `w5`.
    pub reference: Theory,
    /// For `wm`; atoms are read as nullary relations `p<i>`.
    pub structure: FiniteStructure,
    /// For `count`; universe sizes must differ pairwise.
    pub structures: Vec<FiniteStructure>,
    /// For `vab`.
    pub alpha: AlphaSpec,
    /// For `u`: the weight given when no constraint applies.
    pub seed_weight: ExactRational,
}

impl Default for WeightParams {
    /// `wv` and `wm` use the all-false valuation, `count` uses structures of
    /// sizes 1, 2, 3 with seeded random truth values for `p0 … p15`, 𝕍 is
    /// `{p0}`, and `vab` uses a = 2, b = 4, α_n = 7^-n.
    fn default() -> Self {
        let atoms: BTreeSet<u32> = (0..DEFAULT_STRUCTURE_ATOMS).collect();
        let valuation = Valuation::new(false);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let structures = (1..=3)
            .map(|size| {
                let mut v = Valuation::new(false);
                for &a in &atoms {
                    v.set(a, rng.gen_bool(0.5));
                }
                FiniteStructure::from_valuation(size, &atoms, &v)
            })
            .collect();
        let q = |s: &str| s.parse::<ExactRational>().expect("literal");
        WeightParams {
            structure: FiniteStructure::from_valuation(2, &atoms, &valuation),
            valuation,
            reference: Theory::from_iter([crate::proplogic::Formula::atom(0)]),
            structures,
            alpha: AlphaSpec::geometric(q("2"), q("4"), q("7")).expect("valid"),
            seed_weight: ExactRational::zero(),
        }
    }
}

impl WeightParams {
    /// A structure whose nullary relations `p0 … p15` follow `v`.
    pub fn structure_for(v: &Valuation) -> FiniteStructure {
        let atoms: BTreeSet<u32> = (0..DEFAULT_STRUCTURE_ATOMS).collect();
        FiniteStructure::from_valuation(2, &atoms, v)
    }
}

/// Looks up a registered weight (or the broken `axiom-count`).
pub fn build_weighing(name: &str, params: &WeightParams) -> Result<Box<dyn Weighing>, WeightError> {
    let small = |f: Box<SmallFn>| -> Box<dyn Weighing> { Box::new(Small { name: name.to_string(), f }) };
    let p = params.clone();
    Ok(match name {
        "wv" => small(Box::new(move |t| Ok(w_valuation(&p.valuation, t)))),
        "wm" => small(Box::new(move |t| Ok(w_structure(&p.structure, &embed(t))?))),
        "wtaut" => small(Box::new(|t| Ok(w_taut(t)))),
        "wincons" => small(Box::new(|t| Ok(w_incons(t)))),
        "wlower" => small(Box::new(move |t| Ok(w_lower(&p.reference, t)))),
        "wupper" => small(Box::new(move |t| Ok(w_upper(&p.reference, t)))),
        "w3" => small(Box::new(|t| Ok(w_three(t)))),
        "w4" => {
            check_reference(&p.reference)?;
            small(Box::new(move |t| w_four(&p.reference, t)))
        }
        "w5" => {
            check_reference(&p.reference)?;
            small(Box::new(move |t| w_five(&p.reference, t)))
        }
        "count" => {
            counting_weight(&p.structures, &[])?;
            small(Box::new(move |t| counting_weight(&p.structures, &embed(t))))
        }
        "v" => Box::new(SigmaWeight { name: "v".into(), alpha: None, cache: SigmaCache::new() }),
        "vab" => Box::new(SigmaWeight { name: "vab".into(), alpha: Some(p.alpha), cache: SigmaCache::new() }),
        "u" => Box::new(UWeight { seed: p.seed_weight }),
        BROKEN_WEIGHT => small(Box::new(|t| Ok(axiom_count(t)))),
        other => return Err(WeightError::UnknownWeight(other.to_string())),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Principle {
    HP,
    EP,
}

/// HP: `first ⊢ second` yet `w(first) ≥ w(second)` fails.
/// EP: the theories are not equivalent yet their weights coincide (or
/// their enclosures could not be separated).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub principle: Principle,
    pub first: usize,
    pub second: usize,
    pub first_theory: Theory,
    pub second_theory: Theory,
    pub first_weight: WeightValue,
    pub second_weight: WeightValue,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub weight: String,
    pub corpus_size: usize,
    pub precision: usize,
    /// Ordered pairs `i ≠ j` with `T_i ⊢ T_j`.
    pub entailed_pairs: usize,
    /// Unordered pairs of non-equivalent theories.
    pub nonequivalent_pairs: usize,
    /// Non-equivalent pairs whose enclosures overlapped at `precision`.
    pub refined_pairs: usize,
    /// Largest precision needed to separate a refined pair.
    pub max_separation_precision: Option<usize>,
    pub hp_violation_count: usize,
    pub ep_violation_count: usize,
    pub hp_violations: Vec<Violation>,
    pub ep_violations: Vec<Violation>,
    /// Whether the violation lists were cut at the listing limit.
    pub truncated: bool,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.hp_violation_count == 0 && self.ep_violation_count == 0
    }
}

fn violation(principle: Principle, corpus: &[Theory], weights: &[WeightValue], i: usize, j: usize) -> Violation {
    Violation {
        principle,
        first: i,
        second: j,
        first_theory: corpus[i].clone(),
        second_theory: corpus[j].clone(),
        first_weight: weights[i].clone(),
        second_weight: weights[j].clone(),
    }
}

fn hp_with(matrix: &EntailmentMatrix, corpus: &[Theory], weights: &[WeightValue]) -> (usize, Vec<Violation>) {
    let n = corpus.len();
    let rows: Vec<(usize, Vec<Violation>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut count = 0;
            let mut out = Vec::new();
            for j in (0..n).filter(|&j| j != i && matrix.entails(i, j)) {
                count += 1;
                if !weights[i].dominates(&weights[j]) {
                    out.push(violation(Principle::HP, corpus, weights, i, j));
                }
            }
            (count, out)
        })
        .collect();
    let pairs = rows.iter().map(|r| r.0).sum();
    (pairs, rows.into_iter().flat_map(|r| r.1).collect())
}

/// HP audit: every violating ordered pair `T ⊢ U` with `w(T) ≱ w(U)`.
pub fn hp_audit(w: &dyn Weighing, corpus: &[Theory], precision: usize) -> Result<Vec<Violation>, WeightError> {
    let matrix = EntailmentMatrix::new(corpus);
    let weights = w.weigh_corpus(corpus, precision)?;
    Ok(hp_with(&matrix, corpus, &weights).1)
}

struct EpOutcome {
    pairs: usize,
    refined: usize,
    max_precision: Option<usize>,
    violations: Vec<Violation>,
}

/// Most refinement steps tried for one pair.
const REFINE_STEPS: usize = 4096;

fn ep_with(
    w: &dyn Weighing,
    matrix: &EntailmentMatrix,
    corpus: &[Theory],
    weights: &[WeightValue],
    precision: usize,
) -> Result<EpOutcome, WeightError> {
    let n = corpus.len();
    type Row = (usize, usize, Option<usize>, Vec<Violation>);
    let rows: Vec<Row> = (0..n)
        .into_par_iter()
        .map(|i| -> Result<Row, WeightError> {
            let (mut pairs, mut refined, mut max_k, mut out) = (0, 0, None::<usize>, Vec::new());
            for j in (i + 1..n).filter(|&j| !matrix.equivalent(i, j)) {
                pairs += 1;
                if !weights[i].may_coincide(&weights[j]) {
                    continue;
                }
                if !weights[i].is_enclosure() {
                    out.push(violation(Principle::EP, corpus, weights, i, j));
                    continue;
                }
                refined += 1;
                let hint = w.separation_start(&corpus[i], &corpus[j]);
                let mut k = hint.map_or(2 * precision, |m| m.max(precision));
                let mut separated = None;
                for _ in 0..REFINE_STEPS {
                    let (a, b) = (w.weigh(&corpus[i], k)?, w.weigh(&corpus[j], k)?);
                    if !a.may_coincide(&b) {
                        separated = Some(k);
                        break;
                    }
                    k = if hint.is_some() { k + 1 } else { 2 * k };
                }
                match separated {
                    Some(k) => max_k = Some(max_k.map_or(k, |m: usize| m.max(k))),
                    None => out.push(violation(Principle::EP, corpus, weights, i, j)),
                }
            }
            Ok((pairs, refined, max_k, out))
        })
        .collect::<Result<_, _>>()?;
    Ok(EpOutcome {
        pairs: rows.iter().map(|r| r.0).sum(),
        refined: rows.iter().map(|r| r.1).sum(),
        max_precision: rows.iter().filter_map(|r| r.2).max(),
        violations: rows.into_iter().flat_map(|r| r.3).collect(),
    })
}

/// EP audit: non-equivalent pairs whose weights coincide. Overlapping
/// enclosures are refined first, starting at the pair's first σ
/// disagreement when the weight provides one.
pub fn ep_audit(w: &dyn Weighing, corpus: &[Theory], precision: usize) -> Result<Vec<Violation>, WeightError> {
    let matrix = EntailmentMatrix::new(corpus);
    let weights = w.weigh_corpus(corpus, precision)?;
    Ok(ep_with(w, &matrix, corpus, &weights, precision)?.violations)
}

/// Both audits, sharing the entailment matrix and the weights. At most
/// `list_limit` violations of each kind are listed; counts are complete.
pub fn audit(
    w: &dyn Weighing,
    corpus: &[Theory],
    precision: usize,
    list_limit: usize,
) -> Result<AuditReport, WeightError> {
    let matrix = EntailmentMatrix::new(corpus);
    let weights = w.weigh_corpus(corpus, precision)?;
    let (entailed_pairs, mut hp) = hp_with(&matrix, corpus, &weights);
    let ep = ep_with(w, &matrix, corpus, &weights, precision)?;
    let mut ep_violations = ep.violations;
    let (hp_count, ep_count) = (hp.len(), ep_violations.len());
    let truncated = hp_count > list_limit || ep_count > list_limit;
    hp.truncate(list_limit);
    ep_violations.truncate(list_limit);
    Ok(AuditReport {
        weight: w.name().to_string(),
        corpus_size: corpus.len(),
        precision,
        entailed_pairs,
        nonequivalent_pairs: ep.pairs,
        refined_pairs: ep.refined,
        max_separation_precision: ep.max_precision,
        hp_violation_count: hp_count,
        ep_violation_count: ep_count,
        hp_violations: hp,
        ep_violations,
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn th(s: &str) -> Theory {
        Theory::parse_inline(s).unwrap()
    }

    fn small_corpus() -> Vec<Theory> {
        ["p0", "p1", "p0 & p1", "p0 | p1", "", "p0; !p0", "p0 -> p1", "p0; p1", "!p0", "p2 <-> p0"]
            .iter()
            .map(|s| th(s))
            .collect()
    }

    #[test]
    fn matrix_agrees_with_entails() {
        let c = small_corpus();
        let m = EntailmentMatrix::new(&c);
        for i in 0..c.len() {
            for j in 0..c.len() {
                assert_eq!(m.entails(i, j), entails(&c[i], &c[j]));
            }
        }
    }

    #[test]
    fn registry_weights_satisfy_hp() {
        let c = small_corpus();
        let params = WeightParams::default();
        for name in REGISTRY {
            let w = build_weighing(name, &params).unwrap();
            assert!(hp_audit(w.as_ref(), &c, 16).unwrap().is_empty(), "{name}");
        }
    }

    #[test]
    fn broken_weight_is_caught() {
        let c = vec![th("p0 & p1"), th("p0; p1 | p1; p0 | p0")];
        let w = build_weighing(BROKEN_WEIGHT, &WeightParams::default()).unwrap();
        let v = hp_audit(w.as_ref(), &c, 1).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].first, v[0].second), (0, 1));
    }

    #[test]
    fn ep_results() {
        let c = small_corpus();
        let params = WeightParams::default();
        for name in ["v", "vab", "u"] {
            let w = build_weighing(name, &params).unwrap();
            assert!(ep_audit(w.as_ref(), &c, 8).unwrap().is_empty(), "{name}");
        }
        let w = build_weighing("wincons", &params).unwrap();
        assert!(!ep_audit(w.as_ref(), &c, 8).unwrap().is_empty());
    }

    #[test]
    fn unknown_names_and_bad_references() {
        let params = WeightParams::default();
        assert!(matches!(build_weighing("nope", &params), Err(WeightError::UnknownWeight(_))));
        let bad = WeightParams { reference: th("p0 | !p0"), ..WeightParams::default() };
        assert!(build_weighing("w4", &bad).is_err());
    }

    #[test]
    fn full_report() {
        let w = build_weighing("v", &WeightParams::default()).unwrap();
        let r = audit(w.as_ref(), &small_corpus(), 8, 10).unwrap();
        assert!(r.passed());
        assert!(r.refined_pairs > 0);
        assert!(r.max_separation_precision.is_some());
    }
}
