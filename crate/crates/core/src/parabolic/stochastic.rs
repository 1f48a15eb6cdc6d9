//! Limit behaviour of `f^{t+1} = C f^t` for column-stochastic `C`.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use super::coefficients::CoefficientMatrix;
use super::eigen::symmetric_eigen;
use super::evolve::Field;
use crate::space::PointId;

pub const DEFAULT_STATIONARY_TOLERANCE: f64 = 1e-13;
pub const DEFAULT_STATIONARY_MAX_ITERATIONS: u64 = 1_000_000;
/// Entry-wise tolerance for `C·Cᵀ = Cᵀ·C`.
pub const COMMUTE_TOLERANCE: f64 = 1e-12;
/// Eigenvalues within this distance of 1 count as unit eigenvalues.
pub const UNIT_EIGENVALUE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StochasticError {
    #[error("coefficient matrix is invalid: {0}")]
    Invalid(String),
    #[error("coefficient matrix is not irreducible")]
    NotIrreducible,
    #[error("coefficient matrix is not primitive (period {0})")]
    NotPrimitive(u64),
    #[error("power iteration did not converge in {iterations} iterations (last change {change:e})")]
    NoConvergence { iterations: u64, change: f64 },
}

/// Support digraph: edge `k → p` whenever `c_pk > 0`.
fn successors(c: &CoefficientMatrix) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); c.len()];
    for p in 0..c.len() {
        for &(k, v) in c.row(p) {
            if v > 0.0 {
                out[k].push(p);
            }
        }
    }
    out
}

fn reach(adj: &[Vec<usize>], start: usize) -> Vec<Option<u64>> {
    let mut level = vec![None; adj.len()];
    level[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        let next = level[u].unwrap() + 1;
        for &w in &adj[u] {
            if level[w].is_none() {
                level[w] = Some(next);
                queue.push_back(w);
            }
        }
    }
    level
}

/// Indecomposable: the support digraph is strongly connected.
pub fn is_irreducible(c: &CoefficientMatrix) -> bool {
    if c.is_empty() {
        return false;
    }
    let succ = successors(c);
    let mut pred = vec![Vec::new(); succ.len()];
    for (u, list) in succ.iter().enumerate() {
        for &w in list {
            pred[w].push(u);
        }
    }
    reach(&succ, 0).iter().all(Option::is_some) && reach(&pred, 0).iter().all(Option::is_some)
}

/// Period of an irreducible matrix: gcd of `level(u) + 1 − level(w)` over all
/// support edges `u → w`, with levels from a breadth-first search.
pub fn period(c: &CoefficientMatrix) -> Result<u64, StochasticError> {
    if !is_irreducible(c) {
        return Err(StochasticError::NotIrreducible);
    }
    let succ = successors(c);
    let level = reach(&succ, 0);
    let mut g = 0u64;
    for (u, list) in succ.iter().enumerate() {
        let lu = level[u].unwrap() as i64;
        for &w in list {
            let lw = level[w].unwrap() as i64;
            g = gcd(g, (lu + 1 - lw).unsigned_abs());
        }
    }
    Ok(g)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Primitive: irreducible with period 1.
pub fn is_primitive(c: &CoefficientMatrix) -> Result<bool, StochasticError> {
    Ok(period(c)? == 1)
}

/// Stationary vector of `C` with its labels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationaryResult {
    pub labels: Vec<PointId>,
    /// `c_k`, summing to 1; every column of `C^∞` equals this vector.
    pub vector: Vec<f64>,
    pub iterations: u64,
    /// ‖C·c − c‖₁ of the returned vector.
    pub residual: f64,
}

fn mat_vec(c: &CoefficientMatrix, x: &[f64]) -> Vec<f64> {
    (0..c.len())
        .map(|p| c.row(p).iter().map(|&(k, v)| v * x[k]).sum())
        .collect()
}

fn require_ergodic(c: &CoefficientMatrix) -> Result<(), StochasticError> {
    let report = c.validate();
    if !report.is_valid() {
        return Err(StochasticError::Invalid(report.describe()));
    }
    let p = period(c)?;
    if p != 1 {
        return Err(StochasticError::NotPrimitive(p));
    }
    Ok(())
}

/// Power iteration from the uniform vector until the L1 change drops below
/// `tolerance`.
pub fn stationary(
    c: &CoefficientMatrix,
    tolerance: f64,
    max_iterations: u64,
) -> Result<StationaryResult, StochasticError> {
    require_ergodic(c)?;
    let n = c.len();
    let mut x = vec![1.0 / n as f64; n];
    let mut change = f64::INFINITY;
    let mut iterations = 0;
    while iterations < max_iterations {
        let mut y = mat_vec(c, &x);
        let s: f64 = y.iter().sum();
        y.iter_mut().for_each(|v| *v /= s);
        change = y.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
        x = y;
        iterations += 1;
        if change < tolerance {
            let residual = mat_vec(c, &x)
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - b).abs())
                .sum();
            return Ok(StationaryResult {
                labels: c.space().points().to_vec(),
                vector: x,
                iterations,
                residual,
            });
        }
    }
    Err(StochasticError::NoConvergence { iterations, change })
}

pub fn stationary_default(c: &CoefficientMatrix) -> Result<StationaryResult, StochasticError> {
    stationary(
        c,
        DEFAULT_STATIONARY_TOLERANCE,
        DEFAULT_STATIONARY_MAX_ITERATIONS,
    )
}

/// `f^∞ = S·c` with `S = Σ f⁰`: the limit depends only on the total.
pub fn final_field(c: &CoefficientMatrix, f0: &Field) -> Result<Field, StochasticError> {
    let st = stationary_default(c)?;
    let s = f0.sum();
    Ok(Field {
        t: u64::MAX,
        values: st.vector.iter().map(|v| s * v).collect(),
    })
}

pub(crate) fn dense_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

fn transpose(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

/// `C^e` by repeated squaring, dense.
pub fn matrix_power(c: &CoefficientMatrix, mut e: u64) -> Vec<Vec<f64>> {
    let n = c.len();
    let mut result: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut base = c.to_dense();
    while e > 0 {
        if e & 1 == 1 {
            result = dense_mul(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = dense_mul(&base, &base);
        }
    }
    result
}

/// Largest entry of `|C·Cᵀ − Cᵀ·C|`.
pub fn commutator_norm(c: &CoefficientMatrix) -> f64 {
    let a = c.to_dense();
    let at = transpose(&a);
    let left = dense_mul(&a, &at);
    let right = dense_mul(&at, &a);
    left.iter()
        .flatten()
        .zip(right.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn commutes_with_transpose(c: &CoefficientMatrix) -> bool {
    commutator_norm(c) <= COMMUTE_TOLERANCE
}

/// Basis of the fixed fields `f = C f`.
///
/// Symmetric `C`: eigenvectors for unit eigenvalues (orthonormal). Irreducible
/// and primitive `C`: the stationary vector. Otherwise: null space of `C − I`
/// by Gaussian elimination.
pub fn solve_elliptic(c: &CoefficientMatrix) -> Vec<Field> {
    let as_field = |values: Vec<f64>| Field { t: 0, values };
    if c.is_empty() {
        return Vec::new();
    }
    if c.is_symmetric(COMMUTE_TOLERANCE) {
        let e = symmetric_eigen(&c.to_dense());
        return e
            .values
            .iter()
            .zip(e.vectors)
            .filter(|(l, _)| (*l - 1.0).abs() <= UNIT_EIGENVALUE_TOLERANCE)
            .map(|(_, v)| as_field(v))
            .collect();
    }
    if require_ergodic(c).is_ok() {
        if let Ok(st) = stationary_default(c) {
            return vec![as_field(st.vector)];
        }
    }
    let mut a = c.to_dense();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] -= 1.0;
    }
    null_space(a, UNIT_EIGENVALUE_TOLERANCE)
        .into_iter()
        .map(as_field)
        .collect()
}

/// Null space basis by reduced row echelon form with partial pivoting.
fn null_space(mut a: Vec<Vec<f64>>, tol: f64) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == n {
            break;
        }
        let best = (row..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[best][col].abs() <= tol {
            continue;
        }
        a.swap(row, best);
        let piv = a[row][col];
        a[row].iter_mut().for_each(|v| *v /= piv);
        for r in 0..n {
            if r != row {
                let factor = a[r][col];
                if factor != 0.0 {
                    for k in 0..n {
                        a[r][k] -= factor * a[row][k];
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0.0; n];
            v[free] = 1.0;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][free];
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::DigitalSpace;

    fn edge() -> DigitalSpace {
        DigitalSpace::new([1, 2], [(1, 2)]).unwrap()
    }

    fn cycle4() -> DigitalSpace {
        DigitalSpace::new([1, 2, 3, 4], [(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap()
    }

    #[test]
    fn upper_triangular_is_reducible() {
        let c = CoefficientMatrix::from_dense(&edge(), &[vec![1.0, 0.5], vec![0.0, 0.5]]).unwrap();
        assert!(c.validate().is_valid());
        assert!(!is_irreducible(&c));
        assert_eq!(
            stationary_default(&c),
            Err(StochasticError::NotIrreducible)
        );
    }

    #[test]
    fn identity_blocks_on_s0_are_reducible() {
        let s0 = DigitalSpace::new([1, 2], []).unwrap();
        let c = CoefficientMatrix::from_dense(&s0, &[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(!is_irreducible(&c));
        assert_eq!(is_primitive(&c), Err(StochasticError::NotIrreducible));
        assert_eq!(solve_elliptic(&c).len(), 2);
    }

    #[test]
    fn rotation_on_four_cycle_has_period_four() {
        // c_{p+1, p} = 1
        let g = cycle4();
        let c = CoefficientMatrix::from_entries(
            &g,
            (1..=4u32).map(|p| (PointId(p % 4 + 1), PointId(p), 1.0)),
        )
        .unwrap();
        assert!(c.validate().is_valid());
        assert!(is_irreducible(&c));
        assert_eq!(period(&c), Ok(4));
        assert_eq!(is_primitive(&c), Ok(false));
        assert_eq!(
            stationary_default(&c),
            Err(StochasticError::NotPrimitive(4))
        );
    }

    #[test]
    fn lazy_walk_is_primitive_and_uniform() {
        let c = CoefficientMatrix::lazy_uniform(&cycle4(), 0.25).unwrap();
        assert_eq!(is_primitive(&c), Ok(true));
        let st = stationary_default(&c).unwrap();
        assert!(st.vector.iter().all(|&v| (v - 0.25).abs() < 1e-15));
        assert!(commutes_with_transpose(&c));
    }

    #[test]
    fn non_uniform_stationary_vector() {
        // column-stochastic, not doubly stochastic: c = (2/3, 1/3)
        let c = CoefficientMatrix::from_dense(&edge(), &[vec![0.8, 0.4], vec![0.2, 0.6]]).unwrap();
        let st = stationary_default(&c).unwrap();
        assert!((st.vector[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((st.vector[1] - 1.0 / 3.0).abs() < 1e-12);
        assert!(!commutes_with_transpose(&c));
        let basis = solve_elliptic(&c);
        assert_eq!(basis.len(), 1);

        let f0 = Field {
            t: 0,
            values: vec![3.0, 0.0],
        };
        let fin = final_field(&c, &f0).unwrap();
        assert!((fin.values[0] - 2.0).abs() < 1e-12 && (fin.values[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reducible_non_symmetric_null_space() {
        // two absorbing points joined through a middle point
        let g = DigitalSpace::new([1, 2, 3], [(1, 2), (2, 3)]).unwrap();
        let c = CoefficientMatrix::from_dense(
            &g,
            &[vec![1.0, 0.3, 0.0], vec![0.0, 0.4, 0.0], vec![0.0, 0.3, 1.0]],
        )
        .unwrap();
        assert!(c.validate().is_valid());
        let basis = solve_elliptic(&c);
        assert_eq!(basis.len(), 2);
        let d = c.to_dense();
        for f in &basis {
            for (p, row) in d.iter().enumerate() {
                let cf: f64 = row.iter().zip(&f.values).map(|(a, b)| a * b).sum();
                assert!((cf - f.values[p]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn identity_fixed_space_is_everything() {
        let g = cycle4();
        let id: Vec<Vec<f64>> = (0..4)
            .map(|i| (0..4).map(|j| f64::from(u8::from(i == j))).collect())
            .collect();
        let c = CoefficientMatrix::from_dense(&g, &id).unwrap();
        assert!(commutes_with_transpose(&c));
        assert_eq!(solve_elliptic(&c).len(), 4);
    }

    #[test]
    fn matrix_power_small() {
        let c = CoefficientMatrix::from_dense(&edge(), &[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        assert_eq!(matrix_power(&c, 0), vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(matrix_power(&c, 5), vec![vec![0.5, 0.5], vec![0.5, 0.5]]);
    }
}
