//! Finite-dimensional models of a single quantum particle.
//!
//! The crate builds the N-dimensional inner-product space H_N with its two
//! DFT-conjugate bases, the unitary families U^t, V^t, V^t_* and their
//! commutator laws, and computes Feynman propagators for the free particle
//! and the harmonic oscillator three ways each: exact quadratic Gauss sums,
//! reduced/full phase summation, and plain matrix evolution. All roots of
//! unity are carried as exact rational multiples of π until the final
//! complex evaluation, so periodicity reductions are equalities and not
//! approximations.
//!
//! Supporting machinery: an embedding of sampled L₂([0, a]) functions into
//! H_N, a demonstration of where the Weyl commutation relation fails on the
//! interval, and a sweep engine that evaluates quantities along divisibility
//! chains of N and reports stabilization.
//!
//! Hot inner loops are data-parallel through rayon when the default
//! `parallel` feature is enabled; disabling it yields a bit-identical
//! sequential build.

pub mod constants;
pub mod embed;
pub mod error;
pub mod free;
pub mod gauss;
pub mod model;
pub mod osc;
pub mod par;
pub mod phase;
pub mod sweep;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use num_rational::Rational64;
pub use phase::{parse_rational, RationalPhase};
