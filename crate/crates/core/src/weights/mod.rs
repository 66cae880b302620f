//! Weighing functions for theories and the HP/EP auditors.
//!
//! A weighing satisfies HP when `T ⊢ U` implies `w(T) ≥ w(U)`, and EP when
//! equal weights imply equivalent theories.

pub mod audit;
pub mod construct;
pub mod sigma;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exact::{Enclosure, ExactRational};
use crate::proplogic::fo::{fo_models_all, FiniteStructure, FoError, FoFormula};
use crate::proplogic::{classify, entails, Classification, Theory, Valuation};

pub use audit::{
    audit, build_weighing, ep_audit, hp_audit, AuditReport, EntailmentMatrix, Principle, Violation, Weighing,
    WeightParams, BROKEN_WEIGHT, REGISTRY,
};
pub use construct::{u_construction, WeightAssignment};
pub use sigma::{first_disagreement, sigma_prefix, v_ab, v_weight, AlphaKind, AlphaSpec, Disagreement, SigmaCache};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("the reference theory must be consistent and not tautological, but it is {0}")]
    ReferenceNotContingent(Classification),
    #[error("invalid alpha sequence: {0}")]
    InvalidAlpha(String),
    #[error("structures #{first} and #{second} both have {size} elements")]
    Equinumerous { first: usize, second: usize, size: usize },
    #[error(transparent)]
    Fo(#[from] FoError),
    #[error("unknown weight {0:?}")]
    UnknownWeight(String),
    #[error("precision must be at least 1")]
    ZeroPrecision,
}

/// A weight: either an exact number or a certified enclosure of an
/// infinite sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum WeightValue {
    Exact(ExactRational),
    Enclosure(Enclosure),
}

impl WeightValue {
    pub fn small(n: u32) -> Self {
        WeightValue::Exact(ExactRational::from_integer(n))
    }

    pub fn lower(&self) -> &ExactRational {
        match self {
            WeightValue::Exact(v) => v,
            WeightValue::Enclosure(e) => &e.lower,
        }
    }

    pub fn upper(&self) -> &ExactRational {
        match self {
            WeightValue::Exact(v) => v,
            WeightValue::Enclosure(e) => &e.upper,
        }
    }

    /// The HP comparison `self ≥ other`, endpoint-wise for enclosures.
    pub fn dominates(&self, other: &WeightValue) -> bool {
        self.lower() >= other.lower() && self.upper() >= other.upper()
    }

    /// Whether the two weights might be equal: equality for exact values,
    /// overlap for enclosures.
    pub fn may_coincide(&self, other: &WeightValue) -> bool {
        !(self.upper() < other.lower() || other.upper() < self.lower())
    }

    pub fn is_enclosure(&self) -> bool {
        matches!(self, WeightValue::Enclosure(_))
    }
}

impl fmt::Display for WeightValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightValue::Exact(v) => write!(f, "{v}"),
            WeightValue::Enclosure(e) => write!(f, "{e}"),
        }
    }
}

/// 0 when `v` satisfies every axiom of `t`, else 1.
pub fn w_valuation(v: &Valuation, t: &Theory) -> u32 {
    u32::from(!t.axioms().all(|f| v.evaluate(f)))
}

/// 0 when `m ⊨ t`, else 1.
pub fn w_structure(m: &FiniteStructure, t: &[FoFormula]) -> Result<u32, FoError> {
    Ok(u32::from(!fo_models_all(m, t)?))
}

/// 0 for tautological theories, 1 otherwise.
pub fn w_taut(t: &Theory) -> u32 {
    u32::from(classify(t) != Classification::Tautological)
}

/// 1 for inconsistent theories, 0 otherwise.
pub fn w_incons(t: &Theory) -> u32 {
    u32::from(classify(t) == Classification::Inconsistent)
}

/// 0 when `v ⊢ t`, else 1.
pub fn w_lower(v: &Theory, t: &Theory) -> u32 {
    u32::from(!entails(v, t))
}

/// 1 when `t ⊢ v`, else 0.
pub fn w_upper(v: &Theory, t: &Theory) -> u32 {
    u32::from(entails(t, v))
}

/// 0 / 1 / 2 for tautological / contingent / inconsistent theories.
pub fn w_three(t: &Theory) -> u32 {
    match classify(t) {
        Classification::Tautological => 0,
        Classification::ConsistentNontautological => 1,
        Classification::Inconsistent => 2,
    }
}

fn check_reference(v: &Theory) -> Result<(), WeightError> {
    match classify(v) {
        Classification::ConsistentNontautological => Ok(()),
        other => Err(WeightError::ReferenceNotContingent(other)),
    }
}

/// Four-valued weighing relative to a contingent reference theory `v`.
pub fn w_four(v: &Theory, t: &Theory) -> Result<u32, WeightError> {
    check_reference(v)?;
    if classify(t) == Classification::Inconsistent {
        return Ok(3);
    }
    Ok(match (entails(t, v), entails(v, t)) {
        (false, true) => 0,
        (true, true) | (false, false) => 1,
        (true, false) => 2,
    })
}

/// Five-valued weighing relative to a contingent reference theory `v`.
pub fn w_five(v: &Theory, t: &Theory) -> Result<u32, WeightError> {
    check_reference(v)?;
    match classify(t) {
        Classification::Tautological => return Ok(0),
        Classification::Inconsistent => return Ok(4),
        Classification::ConsistentNontautological => {}
    }
    Ok(match (entails(t, v), entails(v, t)) {
        (false, true) => 1,
        (true, true) | (false, false) => 2,
        (true, false) => 3,
    })
}

/// Number of structures in `structures` that do not satisfy `t`.
/// Structures must have pairwise different universe sizes.
pub fn counting_weight(structures: &[FiniteStructure], t: &[FoFormula]) -> Result<u32, WeightError> {
    for (i, a) in structures.iter().enumerate() {
        if let Some(j) = structures[i + 1..].iter().position(|b| b.size() == a.size()) {
            return Err(WeightError::Equinumerous { first: i, second: i + 1 + j, size: a.size() });
        }
    }
    let mut count = 0;
    for m in structures {
        if !fo_models_all(m, t)? {
            count += 1;
        }
    }
    Ok(count)
}

/// Deliberately wrong "weight": the number of axioms. Used to check that
/// the HP auditor does find violations.
pub fn axiom_count(t: &Theory) -> u32 {
    t.len() as u32
}
