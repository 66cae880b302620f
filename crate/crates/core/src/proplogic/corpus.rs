//! Seeded random formulas and theories for property tests and audits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Connective, Formula, Theory};

/// Random formula over `p0 … p(atoms-1)` with nesting depth ≤ `depth`.
pub fn random_formula<R: Rng>(rng: &mut R, atoms: u32, depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..20) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::atom(rng.gen_range(0..atoms)),
        };
    }
    if rng.gen_bool(0.2) {
        return random_formula(rng, atoms, depth - 1).negate();
    }
    let op = Connective::ALL[rng.gen_range(0..4)];
    op.apply(random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1))
}

/// Random theory with between 0 and `max_axioms` axioms of depth ≤ 3.
pub fn random_theory<R: Rng>(rng: &mut R, atoms: u32, max_axioms: usize) -> Theory {
    let n = rng.gen_range(0..=max_axioms);
    (0..n).map(|_| random_formula(rng, atoms, 3)).collect()
}

/// `count` theories over 4 atoms with at most 3 axioms each.
pub fn random_corpus(seed: u64, count: usize) -> Vec<Theory> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_theory(&mut rng, 4, 3)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_reproducible_and_bounded() {
        let a = random_corpus(9, 50);
        assert_eq!(a, random_corpus(9, 50));
        assert!(a.iter().all(|t| t.len() <= 3 && t.atoms().iter().all(|&i| i < 4)));
    }
}
