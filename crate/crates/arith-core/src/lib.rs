//! Exact and interval arithmetic foundations for the bound certification tools.
//!
//! * [`rational`]: exact big rationals and decimal parsing.
//! * [`interval`]: multiprecision outward-rounded intervals with `log`, `sqrt`, `pi`.
//! * [`fast`]: double-precision intervals for long scans.
//! * [`primes`]: sieves, primorials, totients.
//! * [`constants`]: Euler's constant, the Mertens-type constant, `pi/4` combinations.
//! * [`report`]: verification report types.

pub mod constants;
pub mod fast;
pub mod interval;
pub mod primes;
pub mod rational;
pub mod report;

pub use constants::FixedConstants;
pub use fast::Fi;
pub use interval::{enclose_log, enclose_sqrt, IntervalReal};
pub use rational::Rational;
pub use report::{Status, VerificationReport, Witness};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ArithError {
    #[error("cannot parse decimal `{0}`")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
}
