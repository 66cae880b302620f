//! Decision procedures: exhaustive truth tables (the reference semantics)
//! and a Tseitin + DPLL satisfiability check used when tables get large.

use std::collections::HashMap;

use super::formula::{Formula, Valuation};

/// Above this many atoms `entails` switches from truth tables to DPLL.
pub const TRUTH_TABLE_ATOM_LIMIT: usize = 12;

fn assignment(atoms: &[u32], mask: u64) -> impl Fn(u32) -> bool + '_ {
    move |a| match atoms.binary_search(&a) {
        Ok(i) => (mask >> i) & 1 == 1,
        Err(_) => false,
    }
}

/// `premises ⊨ conclusions` by enumerating every valuation of the atoms
/// that occur in either side.
pub fn entails_truth_table(premises: &[Formula], conclusions: &[Formula]) -> bool {
    let mut atoms = std::collections::BTreeSet::new();
    premises.iter().chain(conclusions).for_each(|f| f.collect_atoms(&mut atoms));
    let atoms: Vec<u32> = atoms.into_iter().collect();
    assert!(atoms.len() < 40, "truth table over {} atoms", atoms.len());
    (0..1u64 << atoms.len()).all(|mask| {
        let v = assignment(&atoms, mask);
        !premises.iter().all(|f| f.eval(&v)) || conclusions.iter().all(|f| f.eval(&v))
    })
}

/// Models of `formulas` over a fixed, sorted atom list, as a bitset indexed
/// by valuation mask (bit `i` of the mask is the value of `atoms[i]`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModelSet {
    words: Vec<u64>,
}

impl ModelSet {
    pub fn of(formulas: &[Formula], atoms: &[u32]) -> ModelSet {
        assert!(atoms.len() <= 24, "model set over {} atoms", atoms.len());
        debug_assert!(atoms.windows(2).all(|w| w[0] < w[1]));
        let n = 1usize << atoms.len();
        let mut words = vec![0u64; n.div_ceil(64)];
        for mask in 0..n as u64 {
            let v = assignment(atoms, mask);
            if formulas.iter().all(|f| f.eval(&v)) {
                words[(mask / 64) as usize] |= 1 << (mask % 64);
            }
        }
        ModelSet { words }
    }

    pub fn is_subset(&self, other: &ModelSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }
}

#[derive(Default)]
struct Cnf {
    clauses: Vec<Vec<i32>>,
    vars: i32,
    atom_vars: HashMap<u32, i32>,
    truth: Option<i32>,
}

impl Cnf {
    fn fresh(&mut self) -> i32 {
        self.vars += 1;
        self.vars
    }

    /// Returns a literal equivalent to `f` under the emitted clauses.
    fn encode(&mut self, f: &Formula) -> i32 {
        match f {
            Formula::True | Formula::False => {
                let t = match self.truth {
                    Some(t) => t,
                    None => {
                        let t = self.fresh();
                        self.clauses.push(vec![t]);
                        self.truth = Some(t);
                        t
                    }
                };
                if matches!(f, Formula::True) {
                    t
                } else {
                    -t
                }
            }
            Formula::Atom(a) => {
                if let Some(&v) = self.atom_vars.get(a) {
                    return v;
                }
                let v = self.fresh();
                self.atom_vars.insert(*a, v);
                v
            }
            Formula::Not(a) => -self.encode(a),
            Formula::And(a, b) => {
                let (a, b) = (self.encode(a), self.encode(b));
                let x = self.fresh();
                self.clauses.extend([vec![-x, a], vec![-x, b], vec![x, -a, -b]]);
                x
            }
            Formula::Or(a, b) => {
                let (a, b) = (self.encode(a), self.encode(b));
                self.or_gate(a, b)
            }
            Formula::Implies(a, b) => {
                let (a, b) = (self.encode(a), self.encode(b));
                self.or_gate(-a, b)
            }
            Formula::Iff(a, b) => {
                let (a, b) = (self.encode(a), self.encode(b));
                let x = self.fresh();
                self.clauses.extend([vec![-x, -a, b], vec![-x, a, -b], vec![x, a, b], vec![x, -a, -b]]);
                x
            }
        }
    }

    fn or_gate(&mut self, a: i32, b: i32) -> i32 {
        let x = self.fresh();
        self.clauses.extend([vec![-x, a, b], vec![x, -a], vec![x, -b]]);
        x
    }
}

fn lit_value(assign: &[i8], lit: i32) -> i8 {
    let v = assign[lit.unsigned_abs() as usize];
    if lit > 0 {
        v
    } else {
        -v
    }
}

/// Unit propagation; returns false on conflict.
fn propagate(clauses: &[Vec<i32>], assign: &mut [i8], trail: &mut Vec<usize>) -> bool {
    loop {
        let mut changed = false;
        for clause in clauses {
            let mut unassigned = None;
            let mut open = 0;
            let mut satisfied = false;
            for &lit in clause {
                match lit_value(assign, lit) {
                    1 => {
                        satisfied = true;
                        break;
                    }
                    0 => {
                        open += 1;
                        unassigned = Some(lit);
                    }
                    _ => {}
                }
            }
            if satisfied {
                continue;
            }
            match (open, unassigned) {
                (0, _) => return false,
                (1, Some(lit)) => {
                    let var = lit.unsigned_abs() as usize;
                    assign[var] = if lit > 0 { 1 } else { -1 };
                    trail.push(var);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return true;
        }
    }
}

fn dpll(clauses: &[Vec<i32>], assign: &mut Vec<i8>) -> bool {
    let mut trail = Vec::new();
    if !propagate(clauses, assign, &mut trail) {
        for v in trail {
            assign[v] = 0;
        }
        return false;
    }
    let branch = clauses.iter().flat_map(|c| c.iter()).map(|l| l.unsigned_abs() as usize).find(|&v| assign[v] == 0);
    let Some(var) = branch else {
        return true;
    };
    for value in [1i8, -1] {
        assign[var] = value;
        if dpll(clauses, assign) {
            return true;
        }
    }
    assign[var] = 0;
    for v in trail {
        assign[v] = 0;
    }
    false
}

pub fn satisfiable_dpll(formulas: &[Formula]) -> bool {
    let mut cnf = Cnf::default();
    let roots: Vec<i32> = formulas.iter().map(|f| cnf.encode(f)).collect();
    for r in roots {
        cnf.clauses.push(vec![r]);
    }
    let mut assign = vec![0i8; cnf.vars as usize + 1];
    dpll(&cnf.clauses, &mut assign)
}

/// `premises ⊨ c` for each conclusion `c`, via unsatisfiability of
/// `premises ∪ {¬c}`.
pub fn entails_dpll(premises: &[Formula], conclusions: &[Formula]) -> bool {
    conclusions.iter().all(|c| {
        let mut set = premises.to_vec();
        set.push(c.clone().negate());
        !satisfiable_dpll(&set)
    })
}

/// A satisfying valuation of all formulas, if any (truth-table search).
pub fn find_model(formulas: &[Formula]) -> Option<Valuation> {
    let mut atoms = std::collections::BTreeSet::new();
    formulas.iter().for_each(|f| f.collect_atoms(&mut atoms));
    let atoms: Vec<u32> = atoms.into_iter().collect();
    (0..1u64 << atoms.len())
        .find(|&mask| {
            let v = assignment(&atoms, mask);
            formulas.iter().all(|f| f.eval(&v))
        })
        .map(|mask| Valuation::from_mask(&atoms, mask))
}
