//! Continued fractions whose odd-order partial quotients are all 1.
//!
//! * [`cf`] — expansion, convergents, comparison and cylinders over exact rationals.
//! * [`decompose`] — greedy sum/product decompositions into two such continued fractions.
//! * [`pressure`] — the finite pressure sums `f_{n,B}` and their unit crossings `s_{n,B}`.
//! * [`geometry`] — admissible words, fundamental intervals, gaps, the measure `μ`,
//!   and the cover/ratio computations for super-exponential growth.
//! * [`dimension`] — dimension values and the growth-rate classifier.
//! * [`cli`] — configuration, cache, artifacts and the command dispatcher.

pub mod cf;
pub mod cli;
pub mod decompose;
pub mod dimension;
pub mod error;
pub mod geometry;
pub mod pressure;
pub mod rational;
pub mod verify;

pub use cf::{compare, cylinder, expand, CfExpansion, ConvergentTable, Cylinder};
pub use decompose::{product_decompose, sum_decompose, DecompositionResult, EvenRestrictedSeq, Op, Status};
pub use error::{Error, Result};
pub use rational::Rational;
