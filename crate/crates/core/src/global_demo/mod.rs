//! Global harness over ℚ: exact shifted convolution sums, spectral data
//! ingestion, truncated spectral sides and the short-window scaling experiment.

mod coeffs;
mod scaling;
mod shifted;
mod spectral;
mod sum;

pub use coeffs::{
    divisor_asymptotics, divisor_coeffs, divisor_summatory, divisors, DivisorAsymptotics,
    EULER_GAMMA,
};
pub use scaling::{
    divisor_correlation_density, divisor_main_term, scaling_experiment, ScalingConfig,
    ScalingReport, ScalingRow,
};
pub use shifted::{
    shifted_sum_lhs, shifted_sum_with, CoefficientSource, Coefficients, ShiftedSumSpec, Window,
};
pub use spectral::{
    c_abs_from_L, ingest_spectral_data, kim_sarnak_violations, multiplicativity_defects,
    parse_spectral_data, spectral_rhs_truncated, write_spectral_data, DataWarning, ReportRow,
    SpectralData, SpectralDatum, SpectralReport, Temperedness, KIM_SARNAK_THETA,
};
pub use sum::{exact_sum, ExactSum};
