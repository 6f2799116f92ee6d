//! Simulation and statistical verification of isotropic self-similar Markov
//! processes on the punctured space `R^d \ {0}`.
//!
//! The crate builds such processes from their skew-product ingredients (a
//! multiplicative radial Lévy process and an independent rotation-invariant
//! spherical process), converts between the self-similar and the
//! scale-invariant picture with the Lamperti-Kiu time change, simulates the
//! isotropic stable processes that lack a skew product, and checks every
//! defining invariant with Monte Carlo hypothesis tests.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the default `std`
//! feature enables standard-library float intrinsics and the optional
//! `parallel` feature parallelises Monte Carlo sampling loops with rayon.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod factory;
pub mod geom;
pub mod lamperti;
pub mod path;
pub mod rng;
pub mod sphere;
pub mod stats;

mod error;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
