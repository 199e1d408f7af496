//! Exact-arithmetic combinatorics for noncommutative probability.
//!
//! Moment functionals on words, set partitions and their noncrossing
//! refinements, cumulants in four independence theories, the preLie Magnus
//! operator, shuffle-algebra Markov chains, coalgebraic central limit
//! theorems, classical and free Wick polynomials, and Bell-inequality
//! computations for a pair of qubits.

pub mod bell;
pub mod clt;
pub mod cumulants;
pub mod error;
pub mod lincomb;
pub mod moments;
pub mod partitions;
pub mod prelie;
pub mod scalar;
pub mod shuffle;
pub mod wick;
pub mod word;

pub use error::{Error, Result};
pub use lincomb::LinComb;
pub use moments::{evaluate, model_moments, FunctionalFile, Model, MomentFunctional, WordFunctional};
pub use scalar::Scalar;
pub use word::{Alphabet, Sentence, Word};
