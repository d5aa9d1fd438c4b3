//! Exact and asymptotic distances to uniformity for riffle shuffles of decks
//! with repeated cards.
//!
//! Every probability is an exact rational ([`ExactQ`]); decimals appear only
//! when a value is rendered. Bounds involving logarithms are evaluated with
//! 128-bit binary floats.

pub mod arith;
pub mod deck;
pub mod distance;
pub mod error;
pub mod general;
pub mod matrix;
pub mod real;
pub mod redblack;
pub mod simulate;
pub mod single_card;
pub mod tables;
pub mod transpose;
pub mod verify;

pub use arith::{binomial, eulerian_poly, multinomial, poly_mul, ExactQ, IntPoly};
pub use deck::{DeckSpec, ShuffleParam, Word};
pub use distance::{distance_report, DistanceReport, FiniteDist, Metric};
pub use error::{Error, Result};
