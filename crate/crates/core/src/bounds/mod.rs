//! Riesz means of computed spectra and the explicit bounds they are checked
//! against: the leading `|Ω|λ³/96` bound, its geometric correction, the
//! eigenvalue-sum bound, and the correction under a Hardy inequality.

mod formulas;
mod hardy;
mod legendre;
mod report;

pub use formulas::{
    hl_bound, improved_bound, improved_coefficient, improved_exponent, liyau_sum_bound, melas_bound, melas_correction,
    melas_threshold, riesz_mean, BoundParams,
};
pub use hardy::{hardy_quotient, HardyQuotient};
pub use legendre::{check_convex, legendre_transform};
pub use report::{linear_grid, verify, verify_with_slack, BoundReport, Violation, DEFAULT_SLACK};
