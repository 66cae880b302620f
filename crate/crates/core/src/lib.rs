//! Exact weighing of propositional theories and halting-probability
//! measures over prefix-free codes.

pub mod exact;
pub mod measures;
pub mod minilang;
pub mod prefixfree;
pub mod proplogic;
pub mod weights;
