//! The discrete parabolic equation `f^{t+1} = C f^t + q^t` on a digital space.
//!
//! `C = {c_pk}` is nonnegative, supported on the closed balls `U(v_p)`, and
//! column-stochastic: `Σ_p c_pk = 1` for every `k`. Columns, not rows, are
//! what the validator checks. The lazy uniform scheme used by the bundled
//! experiments is also row-stochastic and symmetric; that double
//! stochasticity is why its limit field is uniform.

mod coefficients;
mod eigen;
mod evolve;
mod spectral;
mod stochastic;

pub use coefficients::{
    CoefficientError, CoefficientMatrix, ValidationReport, COLUMN_SUM_TOLERANCE,
};
pub use eigen::{symmetric_eigen, SymmetricEigen};
pub use evolve::{
    advance, check_conservation, check_stability, l1_norm, run, step, step_dense,
    ConservationCheck, Field, SourceTerm, StabilityCheck, Trajectory, CONSERVATION_TOLERANCE,
    STABILITY_TOLERANCE,
};
pub use spectral::{
    check_eigen_sum_zero, spectral_solve, EigenSumEntry, EigenSumReport, SpectralError,
    SpectralSolution, EIGEN_SUM_TOLERANCE,
};
pub use stochastic::{
    commutator_norm, commutes_with_transpose, final_field, is_irreducible, is_primitive,
    matrix_power, period, solve_elliptic, stationary, stationary_default, StationaryResult,
    StochasticError, COMMUTE_TOLERANCE, DEFAULT_STATIONARY_MAX_ITERATIONS,
    DEFAULT_STATIONARY_TOLERANCE, UNIT_EIGENVALUE_TOLERANCE,
};
