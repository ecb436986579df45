//! Counting integers in arithmetic progressions that avoid a squarefree wheel,
//! exact extremal constants of the wheel discrepancy, and the window bounds
//! derived from them.
//!
//! For a wheel `Q` write `Pi(N; Q)` for the number of `1 <= n <= N` coprime to `Q` and
//! `D(N) = Pi(N; Q) - (phi(Q)/Q) N`, which has period `Q`. With
//! `A = min D - phi(Q)/Q` and `B = max D - min D + phi(Q)/Q` every window satisfies
//! `Pi(x, x+y; k, a, Q) < phi(Q) y / (k Q) + B`.

pub mod count;
pub mod extremal;
pub mod table;
pub mod window;

pub use count::{sieve_count, sieve_count_oracle};
pub use extremal::{extremal_constants, extremal_constants_with, ConstantSource, ExtremalConstants, ExtremalStore};
pub use table::{load_table3, load_table5, SieveRangeRow};
pub use window::{
    chained_affine, chained_window_bound, coprime_run_max, coprime_run_table, lemma23_affine, lemma23_window_bound, row_affine, window_count_max, WindowBound,
    CHAIN_PRIMES,
};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SieveError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("table error: {0}")]
    Table(String),
    #[error("no extremal constants for k={k}, r={r}: {why}")]
    Missing { k: u64, r: usize, why: String },
}
