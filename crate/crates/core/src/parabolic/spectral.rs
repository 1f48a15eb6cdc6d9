//! Separation of variables: `f^t = Σ_s d_s λ_s^t X_s` over an orthonormal
//! eigenbasis of a symmetric coefficient matrix.

use serde::Serialize;
use thiserror::Error;

use super::coefficients::{CoefficientError, CoefficientMatrix};
use super::eigen::symmetric_eigen;
use super::evolve::Field;
use super::stochastic::{COMMUTE_TOLERANCE, UNIT_EIGENVALUE_TOLERANCE};
use crate::space::PointId;

/// Eigenvectors of sub-unit eigenvalues must sum to zero within this.
pub const EIGEN_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error(
        "coefficient matrix is not symmetric (max |c_pk - c_kp| = {0:e}); \
         only symmetric matrices are supported, general normal matrices \
         commuting with their transpose are not"
    )]
    NotSymmetric(f64),
    #[error(transparent)]
    Coefficients(#[from] CoefficientError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSolution {
    pub labels: Vec<PointId>,
    /// `λ_s`, descending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal `X_s`, aligned with `eigenvalues`.
    pub eigenvectors: Vec<Vec<f64>>,
    /// `d_s = ⟨X_s, f⁰⟩`.
    pub coefficients: Vec<f64>,
    /// ‖C·X_s − λ_s·X_s‖_∞ per pair.
    pub residuals: Vec<f64>,
}

impl SpectralSolution {
    /// Closed-form field at time `t`.
    pub fn evaluate(&self, t: u64) -> Field {
        let n = self.labels.len();
        let mut values = vec![0.0; n];
        for ((&lambda, x), &d) in self
            .eigenvalues
            .iter()
            .zip(&self.eigenvectors)
            .zip(&self.coefficients)
        {
            let w = d * pow(lambda, t);
            for (v, &xp) in values.iter_mut().zip(x) {
                *v += w * xp;
            }
        }
        Field { t, values }
    }

    /// The `t → ∞` limit: only terms with `λ = 1` survive.
    pub fn limit(&self) -> Field {
        let mut values = vec![0.0; self.labels.len()];
        for ((&lambda, x), &d) in self
            .eigenvalues
            .iter()
            .zip(&self.eigenvectors)
            .zip(&self.coefficients)
        {
            if (lambda - 1.0).abs() <= UNIT_EIGENVALUE_TOLERANCE {
                for (v, &xp) in values.iter_mut().zip(x) {
                    *v += d * xp;
                }
            }
        }
        Field {
            t: u64::MAX,
            values,
        }
    }

    pub fn unit_eigenvalue_count(&self) -> usize {
        self.eigenvalues
            .iter()
            .filter(|l| (*l - 1.0).abs() <= UNIT_EIGENVALUE_TOLERANCE)
            .count()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

fn pow(lambda: f64, t: u64) -> f64 {
    match i32::try_from(t) {
        Ok(e) => lambda.powi(e),
        Err(_) => lambda.powf(t as f64),
    }
}

/// Full eigendecomposition of symmetric `C` and the coefficients of `f0`.
pub fn spectral_solve(c: &CoefficientMatrix, f0: &Field) -> Result<SpectralSolution, SpectralError> {
    if f0.values.len() != c.len() {
        return Err(CoefficientError::DimensionMismatch {
            expected: c.len(),
            found: f0.values.len(),
        }
        .into());
    }
    let asym = c.max_asymmetry();
    if asym > COMMUTE_TOLERANCE {
        return Err(SpectralError::NotSymmetric(asym));
    }
    let dense = c.to_dense();
    let eig = symmetric_eigen(&dense);
    let coefficients = eig
        .vectors
        .iter()
        .map(|x| x.iter().zip(&f0.values).map(|(a, b)| a * b).sum())
        .collect();
    let residuals = eig
        .values
        .iter()
        .zip(&eig.vectors)
        .map(|(&lambda, x)| {
            dense
                .iter()
                .zip(x)
                .map(|(row, &xp)| {
                    let cx: f64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
                    (cx - lambda * xp).abs()
                })
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(SpectralSolution {
        labels: c.space().points().to_vec(),
        eigenvalues: eig.values,
        eigenvectors: eig.vectors,
        coefficients,
        residuals,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenSumEntry {
    pub eigenvalue: f64,
    pub sum: f64,
    /// False for unit-modulus eigenvalues, which are excluded from the check.
    pub checked: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenSumReport {
    pub entries: Vec<EigenSumEntry>,
    pub max_checked_sum: f64,
    pub ok: bool,
}

/// For every eigenpair with `|λ| < 1 − 1e-10`, checks `|Σ_p X(p)| ≤ 1e-9`.
pub fn check_eigen_sum_zero(solution: &SpectralSolution) -> EigenSumReport {
    let entries: Vec<EigenSumEntry> = solution
        .eigenvalues
        .iter()
        .zip(&solution.eigenvectors)
        .map(|(&eigenvalue, x)| EigenSumEntry {
            eigenvalue,
            sum: x.iter().sum(),
            checked: eigenvalue.abs() < 1.0 - UNIT_EIGENVALUE_TOLERANCE,
        })
        .collect();
    let max_checked_sum = entries
        .iter()
        .filter(|e| e.checked)
        .map(|e| e.sum.abs())
        .fold(0.0, f64::max);
    EigenSumReport {
        ok: max_checked_sum <= EIGEN_SUM_TOLERANCE,
        entries,
        max_checked_sum,
    }
}
