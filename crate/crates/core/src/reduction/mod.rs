//! Lattice reduction of the bound on `n`: LLL, the bound-reduction step,
//! the three phases, and continued-fraction convergents.

pub mod convergents;
pub mod enumerate;
pub mod lll;
pub mod phases;
pub mod smart;

pub use convergents::{continued_fraction, convergent_check, convergent_hits};
pub use lll::{gram_schmidt, is_lll_reduced, lll, IntLattice};
pub use phases::{
    convergent_sweep, exponent_box, phase1, phase1_from, phase2, phase3, phase3_after, ExponentBox, NRecord, Phase1, Sweep,
    J_CASES, TRIVIAL_EXPONENTS,
};
pub use smart::{recheck, reduce_step, smart_reduce, C4Rule, ReduceConfig, ReductionState, SmartInput};
