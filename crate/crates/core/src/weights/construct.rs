//! Inductive HP+EP weight assignment for a finite list of theories.

use std::collections::BTreeSet;

use serde::Serialize;

use super::audit::EntailmentMatrix;
use crate::exact::ExactRational;
use crate::proplogic::Theory;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightAssignment {
    entries: Vec<(Theory, ExactRational)>,
}

impl WeightAssignment {
    pub fn entries(&self) -> &[(Theory, ExactRational)] {
        &self.entries
    }

    pub fn weight(&self, i: usize) -> &ExactRational {
        &self.entries[i].1
    }

    pub fn weights(&self) -> Vec<ExactRational> {
        self.entries.iter().map(|(_, w)| w.clone()).collect()
    }

    /// Weight of the first entry syntactically equal to `t`.
    pub fn lookup(&self, t: &Theory) -> Option<&ExactRational> {
        self.entries.iter().find(|(u, _)| u == t).map(|(_, w)| w)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn midpoint(a: &ExactRational, b: &ExactRational) -> ExactRational {
    (a + b) * ExactRational::new(1, 2).expect("nonzero")
}

/// Assigns weights in list order. A theory equivalent to an earlier one
/// copies its weight; otherwise the weight lies strictly between
/// `II` = max weight of earlier theories it proves and `JJ` = min weight of
/// earlier theories proving it (the midpoint, or `II+1` / `JJ-1` when one
/// side is empty, or `seed` when both are). If that value is already taken
/// by an earlier, necessarily incomparable, theory, the midpoint towards
/// the next larger used weight (or the value + 1) is used instead, which
/// keeps distinct classes at distinct weights.
pub fn u_construction(theories: &[Theory], seed: ExactRational) -> WeightAssignment {
    let ent = EntailmentMatrix::new(theories);
    let mut weights: Vec<ExactRational> = Vec::with_capacity(theories.len());
    let mut used: BTreeSet<ExactRational> = BTreeSet::new();
    for i in 0..theories.len() {
        if let Some(j) = (0..i).find(|&j| ent.equivalent(i, j)) {
            weights.push(weights[j].clone());
            continue;
        }
        let ii = (0..i).filter(|&j| ent.entails(i, j)).map(|j| &weights[j]).max();
        let jj = (0..i).filter(|&j| ent.entails(j, i)).map(|j| &weights[j]).min();
        let one = ExactRational::one();
        let mut w = match (ii, jj) {
            (Some(lo), Some(hi)) => midpoint(lo, hi),
            (Some(lo), None) => lo + &one,
            (None, Some(hi)) => hi - &one,
            (None, None) => seed.clone(),
        };
        if used.contains(&w) {
            let next = used.range((std::ops::Bound::Excluded(&w), std::ops::Bound::Unbounded)).next();
            let next = match (next, jj) {
                (Some(n), Some(hi)) => Some(n.clone().min(hi.clone())),
                (Some(n), None) => Some(n.clone()),
                (None, hi) => hi.cloned(),
            };
            w = match next {
                Some(n) => midpoint(&w, &n),
                None => &w + &one,
            };
        }
        used.insert(w.clone());
        weights.push(w);
    }
    WeightAssignment { entries: theories.iter().cloned().zip(weights).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn th(s: &str) -> Theory {
        Theory::parse_inline(s).unwrap()
    }

    #[test]
    fn stronger_theories_weigh_more() {
        let a = u_construction(&[th("p0"), th("p0 & p1")], ExactRational::zero());
        assert!(a.weight(0) < a.weight(1));
    }

    #[test]
    fn equivalent_theories_share_weights() {
        let a = u_construction(&[th("p0"), th("p0; p0 -> p1; p1"), th("p0 & p1")], ExactRational::zero());
        assert_eq!(a.weight(1), a.weight(2));
        assert_ne!(a.weight(0), a.weight(1));
    }

    #[test]
    fn singleton_gets_the_seed() {
        let seed: ExactRational = "3/7".parse().unwrap();
        let a = u_construction(&[th("p5")], seed.clone());
        assert_eq!(a.weight(0), &seed);
        assert_eq!(a.lookup(&th("p5")), Some(&seed));
    }

    #[test]
    fn incomparable_theories_get_distinct_weights() {
        let a = u_construction(&[th("p0"), th("p1"), th("p2"), th("p0 & p1")], ExactRational::zero());
        let w = a.weights();
        assert_ne!(w[0], w[1]);
        assert_ne!(w[1], w[2]);
        assert!(w[3] > w[0] && w[3] > w[1]);
    }
}
