use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::space::{DigitalSpace, PointId};

/// Tolerance on column sums.
pub const COLUMN_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoefficientError {
    #[error("coefficient references unknown point {0}")]
    UnknownPoint(PointId),
    #[error("duplicate coefficient entry ({0}, {1})")]
    DuplicateEntry(PointId, PointId),
    #[error("weight w = {w} outside (0, {max}] (max degree {max_degree})")]
    WeightOutOfRange { w: f64, max: f64, max_degree: usize },
    #[error("field has {found} values, space has {expected} points")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid coefficient matrix: {0}")]
    Invalid(String),
}

/// Sparse coefficient matrix `C = {c_pk}` bound to a digital space.
///
/// Rows are indexed by the updated point `p` and columns by the source point
/// `k`, both in the space's ascending label order. Construction does not
/// enforce the matrix invariants; [`CoefficientMatrix::validate`] reports them.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    space: DigitalSpace,
    rows: Vec<Vec<(usize, f64)>>,
}

/// Result of checking nonnegativity, ball support and column sums.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ValidationReport {
    pub negative: Vec<(PointId, PointId, f64)>,
    /// Nonzero entries `c_pk` with `k` outside the ball `U(p)`.
    pub off_support: Vec<(PointId, PointId)>,
    /// Columns whose sum differs from 1 by more than the tolerance.
    pub bad_columns: Vec<(PointId, f64)>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.negative.is_empty() && self.off_support.is_empty() && self.bad_columns.is_empty()
    }

    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        if let Some(&(p, k, v)) = self.negative.first() {
            parts.push(format!("negative coefficient c[{p},{k}] = {v}"));
        }
        if let Some(&(p, k)) = self.off_support.first() {
            parts.push(format!("c[{p},{k}] nonzero but {k} is not in the ball of {p}"));
        }
        if let Some(&(k, s)) = self.bad_columns.first() {
            parts.push(format!("column {k} sums to {s}"));
        }
        if parts.is_empty() {
            "valid".into()
        } else {
            parts.join("; ")
        }
    }
}

impl CoefficientMatrix {
    /// Builds a matrix from `(p, k, c_pk)` triples. Zero entries are dropped.
    pub fn from_entries<I>(space: &DigitalSpace, entries: I) -> Result<Self, CoefficientError>
    where
        I: IntoIterator<Item = (PointId, PointId, f64)>,
    {
        let mut map = BTreeMap::new();
        for (p, k, v) in entries {
            let i = space.index_of(p).ok_or(CoefficientError::UnknownPoint(p))?;
            let j = space.index_of(k).ok_or(CoefficientError::UnknownPoint(k))?;
            if map.insert((i, j), v).is_some() {
                return Err(CoefficientError::DuplicateEntry(p, k));
            }
        }
        let mut rows = vec![Vec::new(); space.len()];
        for ((i, j), v) in map {
            if v != 0.0 {
                rows[i].push((j, v));
            }
        }
        Ok(CoefficientMatrix {
            space: space.clone(),
            rows,
        })
    }

    /// Dense rows `c[p][k]` in label order.
    pub fn from_dense(space: &DigitalSpace, dense: &[Vec<f64>]) -> Result<Self, CoefficientError> {
        let n = space.len();
        if dense.len() != n || dense.iter().any(|r| r.len() != n) {
            return Err(CoefficientError::DimensionMismatch {
                expected: n,
                found: dense.len(),
            });
        }
        let rows = dense
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0.0)
                    .map(|(j, &v)| (j, v))
                    .collect()
            })
            .collect();
        Ok(CoefficientMatrix {
            space: space.clone(),
            rows,
        })
    }

    /// Lazy uniform scheme: `c_ps = w` for every neighbour `s` of `p` and
    /// `c_pp = 1 − w·deg(p)`. Symmetric and doubly stochastic.
    ///
    /// Requires `0 < w ≤ 1/Δ` with `Δ` the maximum degree.
    pub fn lazy_uniform(space: &DigitalSpace, w: f64) -> Result<Self, CoefficientError> {
        let max_degree = space.max_degree();
        let max = if max_degree == 0 {
            1.0
        } else {
            1.0 / max_degree as f64
        };
        if !(w > 0.0 && w <= max) {
            return Err(CoefficientError::WeightOutOfRange { w, max, max_degree });
        }
        let rows = (0..space.len())
            .map(|i| {
                let nb = space.neighbor_indices(i);
                let mut row: Vec<(usize, f64)> = nb.iter().map(|&j| (j, w)).collect();
                let diag = 1.0 - w * nb.len() as f64;
                let at = nb.partition_point(|&j| j < i);
                row.insert(at, (i, diag));
                row.retain(|&(_, v)| v != 0.0);
                row
            })
            .collect();
        Ok(CoefficientMatrix {
            space: space.clone(),
            rows,
        })
    }

    pub fn space(&self) -> &DigitalSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Nonzero entries of row `p` as `(column index, value)`, ascending.
    pub fn row(&self, p: usize) -> &[(usize, f64)] {
        &self.rows[p]
    }

    pub fn get(&self, p: usize, k: usize) -> f64 {
        self.rows[p]
            .binary_search_by_key(&k, |&(j, _)| j)
            .map_or(0.0, |pos| self.rows[p][pos].1)
    }

    pub fn get_labels(&self, p: PointId, k: PointId) -> Option<f64> {
        Some(self.get(self.space.index_of(p)?, self.space.index_of(k)?))
    }

    /// Nonzero entries as labelled triples in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (PointId, PointId, f64)> + '_ {
        self.rows.iter().enumerate().flat_map(move |(i, row)| {
            row.iter()
                .map(move |&(j, v)| (self.space.point(i), self.space.point(j), v))
        })
    }

    /// Replaces (or inserts) one entry. Used to build perturbed matrices.
    pub fn set(&mut self, p: usize, k: usize, value: f64) {
        let row = &mut self.rows[p];
        match row.binary_search_by_key(&k, |&(j, _)| j) {
            Ok(pos) if value == 0.0 => {
                row.remove(pos);
            }
            Ok(pos) => row[pos].1 = value,
            Err(_) if value == 0.0 => {}
            Err(pos) => row.insert(pos, (k, value)),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        let mut d = vec![vec![0.0; n]; n];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                d[i][j] = v;
            }
        }
        d
    }

    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.len()];
        for row in &self.rows {
            for &(j, v) in row {
                sums[j] += v;
            }
        }
        sums
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.max_asymmetry() <= tol
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let g = &self.space;
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                if v < 0.0 || v.is_nan() {
                    report.negative.push((g.point(i), g.point(j), v));
                }
                if i != j && !g.has_edge_indices(i, j) {
                    report.off_support.push((g.point(i), g.point(j)));
                }
            }
        }
        for (j, s) in self.column_sums().into_iter().enumerate() {
            if !((s - 1.0).abs() <= COLUMN_SUM_TOLERANCE) {
                report.bad_columns.push((g.point(j), s));
            }
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s0() -> DigitalSpace {
        DigitalSpace::new([1, 2], []).unwrap()
    }

    fn path3() -> DigitalSpace {
        DigitalSpace::new([1, 2, 3], [(1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn lazy_uniform_is_doubly_stochastic() {
        let c = CoefficientMatrix::lazy_uniform(&path3(), 0.25).unwrap();
        assert!(c.validate().is_valid());
        assert!(c.is_symmetric(0.0));
        assert_eq!(c.get(1, 1), 0.5);
        assert_eq!(c.get(0, 0), 0.75);
        assert_eq!(c.get(0, 2), 0.0);
    }

    #[test]
    fn lazy_uniform_weight_range() {
        for w in [0.0, -0.1, 0.51, f64::NAN] {
            assert!(matches!(
                CoefficientMatrix::lazy_uniform(&path3(), w),
                Err(CoefficientError::WeightOutOfRange { .. })
            ));
        }
        assert!(CoefficientMatrix::lazy_uniform(&path3(), 0.5).is_ok());
    }

    #[test]
    fn validation_failures_name_the_entry() {
        let mut c = CoefficientMatrix::lazy_uniform(&path3(), 0.25).unwrap();
        c.set(0, 1, -0.25);
        let r = c.validate();
        assert_eq!(r.negative, vec![(PointId(1), PointId(2), -0.25)]);
        assert_eq!(r.bad_columns.len(), 1);

        let mut c = CoefficientMatrix::lazy_uniform(&path3(), 0.25).unwrap();
        c.set(2, 0, 0.1);
        assert_eq!(c.validate().off_support, vec![(PointId(3), PointId(1))]);
    }

    #[test]
    fn s0_averaging_matrix_is_off_support() {
        // points of S0 are not adjacent, so averaging them leaves the balls
        let c = CoefficientMatrix::from_dense(&s0(), &[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let r = c.validate();
        assert!(r.negative.is_empty() && r.bad_columns.is_empty());
        assert_eq!(r.off_support.len(), 2);
    }

    #[test]
    fn entries_reject_unknown_and_duplicate() {
        let g = path3();
        assert_eq!(
            CoefficientMatrix::from_entries(&g, [(PointId(1), PointId(9), 1.0)]),
            Err(CoefficientError::UnknownPoint(PointId(9)))
        );
        assert_eq!(
            CoefficientMatrix::from_entries(
                &g,
                [(PointId(1), PointId(1), 1.0), (PointId(1), PointId(1), 1.0)]
            ),
            Err(CoefficientError::DuplicateEntry(PointId(1), PointId(1)))
        );
    }
}
