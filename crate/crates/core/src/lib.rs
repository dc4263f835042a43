//! Coevolutionary optimization.
//!
//! * [`omnirep`]: cooperative coevolution of representations and encodings,
//!   with the four problem couplings in [`problems`].
//! * [`safe`]: commensalistic coevolution of solutions and objective
//!   functions, with the [`maze`] and ZDT ([`moo`]) domains.
//!
//! Both engines reuse the single-population machinery in [`evo`] and draw
//! all randomness from position-addressed streams ([`rng`]), so a run is
//! reproducible for a given seed regardless of the worker count.

pub mod evo;
pub mod genome;
pub mod image;
pub mod maze;
pub mod moo;
pub mod novelty;
pub mod omnirep;
pub mod parallel;
pub mod problems;
pub mod rng;
pub mod safe;

pub use evo::{EvoError, EvolutionParams, Individual};
pub use genome::{Genome, GenomeTemplate};
pub use novelty::{knn_novelty, BehaviorPoint, NoveltyArchive};
pub use parallel::Evaluator;
pub use rng::RngStreams;
