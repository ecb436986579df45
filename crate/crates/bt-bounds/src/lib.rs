//! Brun-Titchmarsh bounds `pi(x, x+y; k, a) < 2y/(phi(k)(log(y/k) + xi))`: the error terms of
//! the large-sieve form, the final bounds, and certificates for every range of `y`.
//!
//! The range `(k, oo)` is split into regimes, each closed by its own argument:
//!
//! * [`tiny`]: the few progression terms that fit when `y` is a small multiple of `k`,
//! * sieve rows: the affine window bounds of the wheel sieve ([`regimes::verify_sieve_range`]),
//! * direct blocks: the weighted sum itself ([`regimes::verify_bridge`]),
//! * analytic: the `eps` terms with piecewise or constant remainder bounds.
//!
//! [`theorem::verify_theorem`] runs them and checks they tile `(k, oo)`.

pub mod eps;
pub mod regimes;
pub mod theorem;
pub mod tiny;

pub use eps::{eps1, eps2, eps3, eps_total, simple_bound, simple_bound_inf, thm11_bound, EpsilonParams, Variant};
pub use regimes::{
    analytic_start, direct_block_bound, sieve_crossover, sieve_gap, verify_analytic_range, verify_bridge, verify_large_range, verify_mid_range,
    verify_sieve_range,
};
pub use theorem::{
    check_coverage, load_table1, search_xi, verify_primed_domination, verify_subwheel_domination, verify_theorem, verify_theorem_rows, verify_uniform,
    Cover, Tables, TheoremOptions, XiRow,
};
pub use tiny::{verify_tiny_generic, verify_tiny_range};

#[derive(Debug, thiserror::Error)]
pub enum BoundsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("table error: {0}")]
    Table(String),
    #[error(transparent)]
    Mertens(#[from] mertens_remainder::MertensError),
    #[error(transparent)]
    Sieve(#[from] legendre_sieve::SieveError),
}
