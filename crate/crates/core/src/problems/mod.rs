//! The four representation/encoding couplings solved with OMNIREP.

use thiserror::Error;

pub mod bitcount;
pub mod blocks;
pub mod precision;
pub mod program;

pub use bitcount::{decode_bitcount, eval_cubic, repair_allocation, BitCountProblem};
pub use blocks::{image_error, render_blocks, BlocksProblem};
pub use precision::{decode_precision, eval_poly50, PrecisionProblem};
pub use program::{eval_program, run_program, Instruction, ProgramProblem};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("contract violation: {0}")]
    Contract(String),
}

/// `n` evenly spaced points covering `[lo, hi]`.
pub(crate) fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![(lo + hi) / 2.0],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}
