//! Quantum discriminator for binary classification.
//!
//! A discriminator over `b` binary features is a block-diagonal `2B x 2B`
//! unitary (`B = 2^b`) whose `j`-th 2x2 block is either the identity
//! (pattern `j` is class 0) or Pauli-X (class 1). Training is a single
//! classical pass that switches on the block of every class-1 training
//! pattern; inference runs the matching quantum circuit on `|x 0>` and
//! reads the prediction qubit.
//!
//! Module map:
//! - [`qcore`]: dense state-vector simulator and matrix utilities
//! - [`discriminator`]: the model, trainer, and error metric
//! - [`synth`]: model-to-circuit compilation and the 2-bit reference suite
//! - [`datasets`]: Iris and Bars-and-Stripes ingestion and binarization
//! - [`bench`]: Monte-Carlo experiment harness with an optional noise model
//! - [`rng`]: the deterministic RNG everything above draws from

pub mod bench;
pub mod datasets;
pub mod discriminator;
pub mod qcore;
pub mod rng;
pub mod synth;
