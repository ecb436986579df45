//! Squarefree totient sums coprime to a modulus, their remainder terms, certified
//! sup-norm scans of the remainder, and the weighted-sum lower bounds built on them.
//!
//! `plain_sum(k, z) = sum_{q <= z, (q,k)=1} mu^2(q)/phi(q)` and
//! `weighted_sum(k, z)` is the same sum with weights `z/(z+q)`.

pub mod expansion;
pub mod lemma;
pub mod scan;
pub mod sums;
pub mod table;

pub use expansion::{alterman_c, eta, remainder, remainder_constant, MertensExpansion};
pub use lemma::{lemma21_main_term, piecewise_delta_bound, verify_weighted_lower_bound, DeltaCoeffs};
pub use scan::{scan_remainder_sup, verify_constant_bound, verify_remainder_table, SupPoint};
pub use sums::{plain_sum, weighted_sum};
pub use table::{default_data_dir, load_table2, load_table4, DeltaTableRow, RemainderWindowTable};

use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum MertensError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("table error: {0}")]
    Table(String),
}

/// Which form of the remainder inequalities to certify.
///
/// `Paper` uses the displayed constants; `Conservative` adds the `E(z)/2` term the
/// weighted-sum identity actually produces and the factor 2 in the tail integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Paper,
    #[default]
    Conservative,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Paper => "paper",
            Mode::Conservative => "conservative",
        }
    }
}
