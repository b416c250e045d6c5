//! Dense simulation of multi-qubit parity games (Vaidman's GHZ game, its W variant and
//! rule-maker extensions) on small states.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure computation:
//!
//! * [`qstate`]: pure states, density matrices, basis measurements, partial trace.
//! * [`entanglement`]: concurrences, three-tangle and the GHZ-family n-tangle.
//! * [`games`]: game definitions, Born-rule win probabilities, exhaustive classical
//!   search, rule-maker games and their closed forms.
//! * [`noise`]: single-qubit noise channels and the noisy rule-maker game.
//! * [`qss`]: seeded Monte-Carlo sessions of the basic and facilitated secret-sharing
//!   protocols.
//!
//! IO, file formats and the command-line front end live in the `qgames` crate.

#![no_std]

extern crate alloc;

mod error;
mod linalg;

pub mod entanglement;
pub mod games;
pub mod noise;
pub mod qss;
pub mod qstate;

pub use error::{Error, Result};
pub use linalg::CMatrix;
