//! MiniLang: a five-character, input-free toy language whose program codes
//! form a prefix-free set.
//!
//! | char | code       | meaning                                  |
//! |------|------------|------------------------------------------|
//! | `I`  | `01001001` | r ← r + 1                                |
//! | `D`  | `01000100` | r ← max(r − 1, 0)                        |
//! | `P`  | `01010000` | print r                                  |
//! | `J`  | `01001010` | if r ≠ 0, jump to the first instruction  |
//! | `E`  | `01000101` | halt (last character, exactly once)      |
//!
//! The register `r` starts at 0. Every executed instruction, `E` included,
//! costs one unit of fuel. Halting is only ever reported within a fuel
//! budget, so halting counts and Ω values are lower bounds.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{integer_code, BitString, Enclosure, ExactRational};
use crate::prefixfree::{check_prefix_free, omega_from_counts, PrefixFreeness, StringSet};

/// Identifies the character table and semantics; embedded in reports.
pub const LANGUAGE_VERSION: &str = "minilang-IDPJE/1";

/// Character used to show that the program codes leave room in [0, 1].
pub const GAP_WITNESS: char = 'X';

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MiniLangError {
    #[error("{0:?} is not a MiniLang character")]
    UnknownCharacter(char),
    #[error("{0:?} is not an ASCII character")]
    NotAscii(char),
    #[error("code length {0} is not a positive multiple of 8")]
    BadLength(usize),
    #[error("byte {byte:#04x} at position {position} is not a MiniLang character")]
    UnknownByte { position: usize, byte: u8 },
    #[error("END at position {0} is not the last character")]
    EndMisplaced(usize),
    #[error("program does not end with END")]
    EndMissing,
    #[error("{0} is not the code of an enumerated program")]
    NotEnumerated(BitString),
    #[error("max-chars and fuel must be at least 1")]
    ZeroBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Instr {
    Inc,
    Dec,
    Print,
    Jnz,
}

impl Instr {
    /// Body instructions in code order (`D < I < J < P`).
    pub const IN_CODE_ORDER: [Instr; 4] = [Instr::Dec, Instr::Inc, Instr::Jnz, Instr::Print];

    pub fn char(self) -> char {
        match self {
            Instr::Inc => 'I',
            Instr::Dec => 'D',
            Instr::Print => 'P',
            Instr::Jnz => 'J',
        }
    }

    pub fn from_char(c: char) -> Option<Instr> {
        match c {
            'I' => Some(Instr::Inc),
            'D' => Some(Instr::Dec),
            'P' => Some(Instr::Print),
            'J' => Some(Instr::Jnz),
            _ => None,
        }
    }
}

const END: char = 'E';

/// 8-bit code of any ASCII character.
pub fn ascii_code(c: char) -> Result<BitString, MiniLangError> {
    if !c.is_ascii() {
        return Err(MiniLangError::NotAscii(c));
    }
    Ok(BitString::from_byte(c as u8))
}

/// The five language characters with their codes.
pub fn char_table() -> Vec<(char, BitString)> {
    ['I', 'D', 'P', 'J', END].into_iter().map(|c| (c, BitString::from_byte(c as u8))).collect()
}

/// Code of a language character.
pub fn char_code(c: char) -> Result<BitString, MiniLangError> {
    if Instr::from_char(c).is_some() || c == END {
        Ok(BitString::from_byte(c as u8))
    } else {
        Err(MiniLangError::UnknownCharacter(c))
    }
}

/// A program body; the END terminator is implicit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Program {
    pub body: Vec<Instr>,
}

impl Program {
    pub fn new(body: Vec<Instr>) -> Self {
        Program { body }
    }

    /// Number of characters, END included.
    pub fn chars(&self) -> usize {
        self.body.len() + 1
    }

    /// Code length in bits.
    pub fn bit_len(&self) -> usize {
        8 * self.chars()
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.body.iter().map(|i| i.char()).chain([END]).collect();
        f.write_str(&s)
    }
}

/// Parses source text such as `IDJE`.
impl FromStr for Program {
    type Err = MiniLangError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.trim().chars().collect();
        let mut body = Vec::new();
        for (i, &c) in chars.iter().enumerate() {
            if c == END {
                if i + 1 != chars.len() {
                    return Err(MiniLangError::EndMisplaced(i + 1));
                }
                return Ok(Program { body });
            }
            body.push(Instr::from_char(c).ok_or(MiniLangError::UnknownCharacter(c))?);
        }
        Err(MiniLangError::EndMissing)
    }
}

pub fn encode(p: &Program) -> BitString {
    let bits: Vec<bool> = p
        .body
        .iter()
        .map(|i| i.char())
        .chain([END])
        .flat_map(|c| BitString::from_byte(c as u8).bits().to_vec())
        .collect();
    BitString::new(bits).expect("nonempty")
}

/// Accepts exactly the codes of programs; positions in errors are
/// 1-based character indices.
pub fn decode(bits: &BitString) -> Result<Program, MiniLangError> {
    if !bits.len().is_multiple_of(8) {
        return Err(MiniLangError::BadLength(bits.len()));
    }
    let bytes: Vec<u8> =
        bits.bits().chunks(8).map(|chunk| chunk.iter().fold(0u8, |acc, &b| (acc << 1) | u8::from(b))).collect();
    let mut body = Vec::new();
    for (i, &byte) in bytes.iter().enumerate() {
        let c = byte as char;
        if c == END {
            if i + 1 != bytes.len() {
                return Err(MiniLangError::EndMisplaced(i + 1));
            }
            return Ok(Program { body });
        }
        body.push(Instr::from_char(c).ok_or(MiniLangError::UnknownByte { position: i + 1, byte })?);
    }
    Err(MiniLangError::EndMissing)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Halted,
    FuelExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunResult {
    pub status: RunStatus,
    pub steps: u64,
    pub output: Vec<u64>,
}

impl RunResult {
    pub fn halted(&self) -> bool {
        self.status == RunStatus::Halted
    }
}

pub fn run(p: &Program, fuel: u64) -> RunResult {
    let mut r: u64 = 0;
    let mut pc = 0;
    let mut steps = 0;
    let mut output = Vec::new();
    while steps < fuel {
        steps += 1;
        let Some(&instr) = p.body.get(pc) else {
            return RunResult { status: RunStatus::Halted, steps, output };
        };
        pc += 1;
        match instr {
            Instr::Inc => r = r.saturating_add(1),
            Instr::Dec => r = r.saturating_sub(1),
            Instr::Print => output.push(r),
            Instr::Jnz => {
                if r != 0 {
                    pc = 0;
                }
            }
        }
    }
    RunResult { status: RunStatus::FuelExhausted, steps, output }
}

/// All programs of at most `max_chars` characters, shortest first and
/// lexicographic by code within a length.
pub fn enumerate_programs(max_chars: usize) -> Vec<Program> {
    let mut out = vec![Program::default()];
    let mut layer = vec![Program::default()];
    for _ in 1..max_chars {
        let next: Vec<Program> = layer
            .iter()
            .flat_map(|p| {
                Instr::IN_CODE_ORDER.iter().map(move |&i| {
                    let mut body = p.body.clone();
                    body.push(i);
                    Program { body }
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub bit_length: usize,
    pub total: u64,
    pub halted: u64,
}

/// Fuel-bounded halting counts per code length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerationReport {
    pub language_version: &'static str,
    pub max_chars: usize,
    pub fuel: u64,
    pub rows: Vec<CensusRow>,
    /// Σ total(ℓ)·2^-ℓ.
    pub omega_p_partial: ExactRational,
    /// Σ halted(ℓ)·2^-ℓ, a lower bound of the halting Ω.
    pub omega_h_partial: ExactRational,
    /// Codes of the programs that halted, in enumeration order.
    #[serde(skip)]
    pub halted_codes: Vec<BitString>,
}

impl EnumerationReport {
    pub fn halted_at(&self, bit_length: usize) -> Option<u64> {
        self.rows.iter().find(|r| r.bit_length == bit_length).map(|r| r.halted)
    }

    /// `(ℓ, 𝒩(ℓ))` pairs.
    pub fn halting_counts(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.rows.iter().map(|r| (r.bit_length, r.halted))
    }

    pub fn halted_set(&self) -> StringSet {
        self.halted_codes.iter().cloned().collect()
    }
}

pub fn halting_census(max_chars: usize, fuel: u64) -> Result<EnumerationReport, MiniLangError> {
    if max_chars == 0 || fuel == 0 {
        return Err(MiniLangError::ZeroBound);
    }
    let programs = enumerate_programs(max_chars);
    let halted: Vec<bool> = programs.par_iter().map(|p| run(p, fuel).halted()).collect();
    let mut rows: BTreeMap<usize, CensusRow> = BTreeMap::new();
    for (p, &h) in programs.iter().zip(&halted) {
        let row = rows.entry(p.bit_len()).or_insert(CensusRow { bit_length: p.bit_len(), total: 0, halted: 0 });
        row.total += 1;
        row.halted += u64::from(h);
    }
    let rows: Vec<CensusRow> = rows.into_values().collect();
    let omega_p_partial = omega_from_counts(rows.iter().map(|r| (r.bit_length, r.total)));
    let omega_h_partial = omega_from_counts(rows.iter().map(|r| (r.bit_length, r.halted)));
    let halted_codes = programs.iter().zip(&halted).filter(|(_, &h)| h).map(|(p, _)| encode(p)).collect();
    Ok(EnumerationReport {
        language_version: LANGUAGE_VERSION,
        max_chars,
        fuel,
        rows,
        omega_p_partial,
        omega_h_partial,
        halted_codes,
    })
}

/// Ω of all program codes with at most `max_chars` characters.
pub fn omega_programs(max_chars: usize) -> ExactRational {
    omega_from_counts((1..=max_chars).map(|n| (8 * n, 4u64.pow((n - 1) as u32))))
}

/// ℧_S = Ω_S / Ω_ℙ at the truncation `max_chars`.
pub fn mho(subset: &StringSet, max_chars: usize) -> Result<ExactRational, MiniLangError> {
    if max_chars == 0 {
        return Err(MiniLangError::ZeroBound);
    }
    for s in subset.iter() {
        match decode(s) {
            Ok(p) if p.chars() <= max_chars => {}
            _ => return Err(MiniLangError::NotEnumerated(s.clone())),
        }
    }
    let omega_s = crate::prefixfree::omega(subset.iter());
    Ok(omega_s.checked_div(&omega_programs(max_chars)).expect("Ω_ℙ > 0"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapReport {
    pub witness: char,
    pub witness_code: BitString,
    pub omega_p_partial: ExactRational,
    /// Ω_ℙ-partial + 2^-8.
    pub with_witness: ExactRational,
    pub at_most_one: bool,
    pub prefix_free_with_witness: bool,
}

/// The code of `X` is no program code's prefix or extension, so adding it
/// keeps the set prefix-free and Ω_ℙ + 2^-8 ≤ 1.
pub fn program_gap(max_chars: usize) -> Result<GapReport, MiniLangError> {
    if max_chars == 0 {
        return Err(MiniLangError::ZeroBound);
    }
    let witness_code = ascii_code(GAP_WITNESS)?;
    let omega_p_partial = omega_programs(max_chars);
    let with_witness = &omega_p_partial + &ExactRational::pow2_neg(8);
    let mut codes: StringSet = enumerate_programs(max_chars).iter().map(encode).collect();
    codes.insert(witness_code.clone());
    Ok(GapReport {
        witness: GAP_WITNESS,
        witness_code,
        at_most_one: with_witness <= ExactRational::one(),
        omega_p_partial,
        with_witness,
        prefix_free_with_witness: matches!(check_prefix_free(&codes), PrefixFreeness::PrefixFree),
    })
}

/// Shortest code length (bits) of an enumerated program that halts within
/// `fuel` and prints exactly `target`; `None` if there is none.
pub fn bounded_k(target: &[u64], max_chars: usize, fuel: u64) -> Option<usize> {
    enumerate_programs(max_chars)
        .into_iter()
        .find(|p| {
            let r = run(p, fuel);
            r.halted() && r.output == target
        })
        .map(|p| p.bit_len())
}

/// Terms 2^-c with c above this are too large to represent and are only
/// accounted for in the upper bound.
pub const K_EXPONENT_CAP: u64 = 1 << 25;

/// K = Σ 2^-(integer code) over the halted programs of a census, as an
/// enclosure: exact (`lower == upper`) unless some code exceeds
/// [`K_EXPONENT_CAP`].
pub fn k_number(census: &EnumerationReport) -> Enclosure {
    let codes: Vec<BigUint> = census.halted_codes.iter().map(integer_code).collect();
    let cap = BigUint::from(K_EXPONENT_CAP);
    let (small, large): (Vec<&BigUint>, Vec<&BigUint>) = codes.iter().partition(|c| **c <= cap);
    let exps: Vec<u64> = small.iter().map(|c| u64::try_from(*c).expect("≤ cap")).collect();
    let lower = match exps.iter().max() {
        None => ExactRational::zero(),
        Some(&top) => {
            let mut numer = BigUint::default();
            for &e in &exps {
                numer.set_bit(top - e, true);
            }
            ExactRational::from_dyadic(numer, top)
        }
    };
    let slack = &ExactRational::from_integer(large.len() as u64) * &ExactRational::pow2_neg(K_EXPONENT_CAP);
    let upper = if large.is_empty() { lower.clone() } else { &lower + &slack };
    Enclosure { lower, upper, terms_used: exps.len() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prog(s: &str) -> Program {
        s.parse().unwrap()
    }

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn character_codes() {
        assert_eq!(char_code('E').unwrap(), bs("01000101"));
        assert_eq!(char_code('P').unwrap(), bs("01010000"));
        assert_eq!(ascii_code('B').unwrap(), bs("01000010"));
        assert!(char_code('B').is_err());
        let beep = "BEEP".chars().map(|c| ascii_code(c).unwrap()).reduce(|a, b| a.concat(&b)).unwrap();
        assert_eq!(beep, bs("01000010010001010100010101010000"));
        assert_eq!(char_table().len(), 5);
    }

    #[test]
    fn decoding() {
        assert_eq!(decode(&encode(&prog("E"))).unwrap(), Program::default());
        assert_eq!(decode(&encode(&prog("IJE"))).unwrap().body, vec![Instr::Inc, Instr::Jnz]);
        let ei = ascii_code('E').unwrap().concat(&ascii_code('I').unwrap());
        assert_eq!(decode(&ei), Err(MiniLangError::EndMisplaced(1)));
        assert_eq!(decode(&ascii_code('I').unwrap()), Err(MiniLangError::EndMissing));
        assert_eq!(decode(&bs("0100")), Err(MiniLangError::BadLength(4)));
        assert!(matches!(decode(&ascii_code('X').unwrap()), Err(MiniLangError::UnknownByte { position: 1, .. })));
        assert_eq!(encode(&prog("IJE")).len(), 24);
    }

    #[test]
    fn running() {
        let e = run(&prog("E"), 10);
        assert_eq!((e.status, e.steps, e.output.len()), (RunStatus::Halted, 1, 0));
        assert_eq!(run(&prog("E"), 1).status, RunStatus::Halted);
        for fuel in [1, 10, 1000] {
            assert_eq!(run(&prog("IJE"), fuel).status, RunStatus::FuelExhausted);
        }
        let r = run(&prog("IDJE"), 100);
        assert!(r.halted() && r.output.is_empty());
        assert_eq!(run(&prog("IPIPE"), 100).output, vec![1, 2]);
        assert_eq!(run(&prog("DPE"), 10).output, vec![0]);
    }

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(enumerate_programs(1).len(), 1);
        assert_eq!(enumerate_programs(2).len(), 5);
        assert_eq!(enumerate_programs(3).len(), 21);
        let codes: Vec<BitString> = enumerate_programs(3).iter().map(encode).collect();
        assert!(codes.windows(2).all(|w| w[0].shortlex_cmp(&w[1]).is_lt()));
    }

    #[test]
    fn census_small() {
        let c = halting_census(1, 5).unwrap();
        assert_eq!(c.halted_at(8), Some(1));
        assert_eq!(c.omega_h_partial, ExactRational::pow2_neg(8));
        let c = halting_census(2, 100).unwrap();
        assert_eq!(c.halted_at(16), Some(4));
    }

    #[test]
    fn mho_normalises() {
        let all: StringSet = enumerate_programs(2).iter().map(encode).collect();
        assert_eq!(mho(&all, 2).unwrap(), ExactRational::one());
        assert_eq!(mho(&StringSet::new(), 2).unwrap(), ExactRational::zero());
        let mut outside = StringSet::new();
        outside.insert(encode(&prog("IIE")));
        assert!(matches!(mho(&outside, 2), Err(MiniLangError::NotEnumerated(_))));
    }

    #[test]
    fn gap() {
        let g = program_gap(1).unwrap();
        assert_eq!(g.with_witness, ExactRational::pow2_neg(7));
        assert!(g.at_most_one && g.prefix_free_with_witness);
    }

    #[test]
    fn shortest_programs() {
        assert_eq!(bounded_k(&[], 3, 100), Some(8));
        assert_eq!(bounded_k(&[0], 2, 100), Some(16));
        assert_eq!(bounded_k(&[7, 7, 7], 3, 100), None);
    }

    #[test]
    fn k_number_single_term() {
        let c = halting_census(1, 10).unwrap();
        let k = k_number(&c);
        assert_eq!(k.lower, ExactRational::pow2_neg(324));
        assert_eq!(k.lower, k.upper);
    }
}
