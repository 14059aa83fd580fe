//! Exact simulation of quantum-walk error correction on five nested squares.

pub mod codec;
pub mod error;
pub mod error_model;
pub mod linalg;
pub mod oracle;
pub mod pauli;
pub mod scalar;
pub mod schedule;
pub mod walk;

pub use error::{QwecError, Result};
pub use pauli::PauliWord;

pub type StateVector = walk::StateVector<f64>;
pub type StateVector32 = walk::StateVector<f32>;
pub type CoinSpec = walk::CoinSpec<f64>;
pub type Mat2 = linalg::Mat2<f64>;
pub type Dense = linalg::Dense<f64>;
pub type WalkProgram = schedule::WalkProgram<f64>;
pub type WalkStep = schedule::WalkStep<f64>;
pub type ErrorSpec = error_model::ErrorSpec<f64>;
pub type Complex = num_complex::Complex<f64>;

/// The RNG used for every seeded run.
pub type SimRng = rand_chacha::ChaCha8Rng;

/// Independent stream for (seed, index).
pub fn rng_for(seed: u64, stream: u64) -> SimRng {
    use rand::SeedableRng;
    let mut r = SimRng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}
