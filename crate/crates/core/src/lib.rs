//! Exact arithmetic for heights, orbits and integral points of rational maps
//! over the algebraic numbers.
//!
//! The crate is organized bottom-up: [`zpoly`] supplies integer polynomials
//! with resultants, factorization and certified root isolation; [`algnum`]
//! builds exact algebraic numbers and their heights on top; [`dynamics`],
//! [`enumerate`] and [`sieve`] run the experiments.

use std::sync::atomic::{AtomicU32, Ordering};

pub mod algnum;
pub mod dynamics;
pub mod enumerate;
pub mod dyadic;
pub mod error;
pub mod primes;
pub mod sieve;
pub mod zpoly;

pub use error::{Error, Result};
pub use zpoly::{ComplexBox, IntPoly};

/// Default cap, in bits, for certified comparisons and factor selection.
pub const DEFAULT_PRECISION_CAP: u32 = 256;

static PRECISION_CAP: AtomicU32 = AtomicU32::new(DEFAULT_PRECISION_CAP);

/// Current precision cap in bits.
pub fn precision_cap() -> u32 {
    PRECISION_CAP.load(Ordering::Relaxed)
}

/// Set the process-wide precision cap (clamped to at least 16 bits).
pub fn set_precision_cap(bits: u32) {
    PRECISION_CAP.store(bits.max(16), Ordering::Relaxed);
}
