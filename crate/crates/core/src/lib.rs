//! Errorless signature codes for over-loaded synchronous CDMA.
//!
//! A signature matrix is *errorless* when it maps user bit vectors to
//! distinct chip vectors, so a noiseless receiver can always invert the
//! superposition. Over the antipodal alphabet these are COW matrices
//! ("codes for over-loaded wireless"), over the on-off alphabet COO
//! matrices ("codes for over-loaded optical"). This crate provides:
//!
//! * [`matrix`] — exact integer matrix types, Hadamard and Kronecker
//!   primitives, and the shared text format.
//! * [`exact`] — rational elimination: rank, basis columns, inverses.
//! * [`construct`] — every code construction plus the built-in codes.
//! * [`verify`] — naive, fast, and structural errorless checks.
//! * [`capacity`] — user-count and sum-capacity bounds.
//! * [`decoder`] — exhaustive ML and the low-complexity tensor decoder.
//! * [`sim`] — seeded Monte-Carlo AWGN bit-error-rate harness.

pub mod capacity;
pub mod construct;
pub mod decoder;
pub mod exact;
pub mod matrix;
pub mod sim;
pub mod verify;

pub use construct::{CodeDescriptor, Structure};
pub use matrix::{Alphabet, BinaryMatrix, CodeMatrix, IntMatrix, SignMatrix, TernaryVector};
pub use verify::{Method, Verdict};
