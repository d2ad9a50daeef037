//! Rényi-divergence source simulation.
//!
//! Finite-alphabet distributions, Rényi information measures, the information
//! spectrum exponents, asymptotic divergence formulas for simulating an i.i.d.
//! target from an i.i.d. source (plus the resolvability and intrinsic
//! randomness specializations), the guessing exponents and explicit finite
//! block-length codes that can be evaluated exactly in the log domain.
//!
//! All quantities are in nats. The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
mod num;

pub mod asymptotics;
pub mod codes;
pub mod dist;
pub mod guessing;
pub mod measures;
pub mod opt;
pub mod spectrum;

pub use asymptotics::{
    asymptotic_divergence, best_set_mass_exponents, conversion_rate, intrinsic_asymptotics,
    intrinsic_randomness, resolvability, resolvability_asymptotics, unnormalized_lower_bound,
    Direction, RateQuery,
};
pub use codes::{evaluate_code, CodeKind, InducedPmf, SimCode};
pub use dist::{enumerate_types, guard_limit, set_guard_limit, MassBlock, Pmf, ProductView, SeqType};
pub use error::Error;
pub use measures::{
    mode_entropy, renyi_divergence, renyi_entropy, tilted, tilted_cross_entropy,
};
pub use num::{ExtReal, Order};

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
