//! Dense numerics shared by every learned model: matrices, activations,
//! losses, optimizers, finite differences and the seeded PRNG.

mod grad;
mod matrix;
mod ops;
mod optim;
mod rng;

pub use grad::{finite_diff_grad, max_relative_error, DEFAULT_FD_STEP};
pub use matrix::{dot, solve, Matrix};
pub use ops::{
    argmax, binary_cross_entropy, cross_entropy, relu, softmax, stable_sigmoid, PROB_FLOOR,
};
pub use optim::{adam_step, sgd_step, AdamState, ADAM_BETA1, ADAM_BETA2, ADAM_EPS};
pub use rng::{derive_seed, PrngStream};

use rand::Rng;

/// Glorot/Xavier uniform initialization.
pub fn glorot_uniform(rows: usize, cols: usize, rng: &mut PrngStream) -> Matrix {
    let limit = libm::sqrt(6.0 / (rows + cols) as f64);
    Matrix::from_fn(rows, cols, |_, _| rng.random_range(-limit..limit))
}
