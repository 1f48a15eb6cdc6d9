use std::fmt;

use serde::Serialize;

use super::coefficients::{CoefficientError, CoefficientMatrix};
use crate::space::{DigitalSpace, PointId};

/// Per-step tolerance used by [`check_stability`].
pub const STABILITY_TOLERANCE: f64 = 1e-12;
/// Per-step absolute tolerance used by [`check_conservation`].
pub const CONSERVATION_TOLERANCE: f64 = 1e-9;

/// Values `f_p^t` at one time step, in the bound space's label order.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub t: u64,
    pub values: Vec<f64>,
}

impl Field {
    pub fn zeros(space: &DigitalSpace) -> Self {
        Field {
            t: 0,
            values: vec![0.0; space.len()],
        }
    }

    /// Field that is zero except at the listed points.
    pub fn from_points<I>(space: &DigitalSpace, values: I) -> Result<Self, CoefficientError>
    where
        I: IntoIterator<Item = (PointId, f64)>,
    {
        let mut f = Self::zeros(space);
        for (p, v) in values {
            let i = space.index_of(p).ok_or(CoefficientError::UnknownPoint(p))?;
            f.values[i] = v;
        }
        Ok(f)
    }

    pub fn at(&self, space: &DigitalSpace, p: PointId) -> Option<f64> {
        space.index_of(p).map(|i| self.values[i])
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn max_abs_diff(&self, other: &Field) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// ‖f‖₁ = |f₁| + … + |fₙ|.
pub fn l1_norm(f: &Field) -> f64 {
    f.values.iter().map(|v| v.abs()).sum()
}

/// Source term `q_p^t`, evaluated lazily per point and time.
pub struct SourceTerm(Box<dyn Fn(PointId, u64) -> f64 + Send + Sync>);

impl SourceTerm {
    pub fn new(f: impl Fn(PointId, u64) -> f64 + Send + Sync + 'static) -> Self {
        SourceTerm(Box::new(f))
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_, _| c)
    }

    pub fn eval(&self, p: PointId, t: u64) -> f64 {
        (self.0)(p, t)
    }

    fn total(&self, labels: &[PointId], t: u64) -> f64 {
        labels.iter().map(|&p| self.eval(p, t)).sum()
    }
}

impl fmt::Debug for SourceTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SourceTerm(..)")
    }
}

fn check_dim(c: &CoefficientMatrix, f: &Field) -> Result<(), CoefficientError> {
    if f.values.len() != c.len() {
        return Err(CoefficientError::DimensionMismatch {
            expected: c.len(),
            found: f.values.len(),
        });
    }
    Ok(())
}

/// One explicit step `f_p^{t+1} = Σ_k c_pk f_k^t + q_p^t`, accumulating
/// over the stored (ball-supported) entries of each row.
pub fn step(
    c: &CoefficientMatrix,
    f: &Field,
    q: Option<&SourceTerm>,
) -> Result<Field, CoefficientError> {
    check_dim(c, f)?;
    let g = c.space();
    let values = (0..c.len())
        .map(|p| {
            let acc: f64 = c.row(p).iter().map(|&(k, v)| v * f.values[k]).sum();
            acc + q.map_or(0.0, |q| q.eval(g.point(p), f.t))
        })
        .collect();
    Ok(Field {
        t: f.t + 1,
        values,
    })
}

/// Same update as [`step`] through a dense matrix-vector product.
pub fn step_dense(
    c: &CoefficientMatrix,
    f: &Field,
    q: Option<&SourceTerm>,
) -> Result<Field, CoefficientError> {
    check_dim(c, f)?;
    let g = c.space();
    let dense = c.to_dense();
    let values = dense
        .iter()
        .enumerate()
        .map(|(p, row)| {
            let acc: f64 = row.iter().zip(&f.values).map(|(a, b)| a * b).sum();
            acc + q.map_or(0.0, |q| q.eval(g.point(p), f.t))
        })
        .collect();
    Ok(Field {
        t: f.t + 1,
        values,
    })
}

/// Fields `f⁰ … f^T` of one run, with the point labels they refer to.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    labels: Vec<PointId>,
    fields: Vec<Field>,
}

impl Trajectory {
    pub fn new(labels: Vec<PointId>, fields: Vec<Field>) -> Self {
        Trajectory { labels, fields }
    }

    pub fn labels(&self) -> &[PointId] {
        &self.labels
    }

    pub fn fields(&self) -> &[Field] {
        &self.fields
    }

    pub fn last(&self) -> &Field {
        self.fields.last().expect("trajectory holds at least f0")
    }

    pub fn sums(&self) -> Vec<f64> {
        self.fields.iter().map(Field::sum).collect()
    }

    pub fn norms(&self) -> Vec<f64> {
        self.fields.iter().map(l1_norm).collect()
    }

    /// History of a single point.
    pub fn series(&self, p: PointId) -> Option<Vec<f64>> {
        let i = self.labels.binary_search(&p).ok()?;
        Some(self.fields.iter().map(|f| f.values[i]).collect())
    }
}

/// Runs `steps` explicit steps from `f0`.
pub fn run(
    c: &CoefficientMatrix,
    f0: &Field,
    q: Option<&SourceTerm>,
    steps: u64,
) -> Result<Trajectory, CoefficientError> {
    check_dim(c, f0)?;
    let mut fields = Vec::with_capacity(steps as usize + 1);
    fields.push(f0.clone());
    for _ in 0..steps {
        let next = step(c, fields.last().unwrap(), q)?;
        fields.push(next);
    }
    Ok(Trajectory::new(c.space().points().to_vec(), fields))
}

/// Advances `steps` times keeping only the latest field.
pub fn advance(
    c: &CoefficientMatrix,
    f0: &Field,
    steps: u64,
) -> Result<Field, CoefficientError> {
    let mut f = f0.clone();
    for _ in 0..steps {
        f = step(c, &f, None)?;
    }
    Ok(f)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityCheck {
    pub stable: bool,
    /// Time `t` of the first step with ‖f^{t+1}‖₁ > ‖f^t‖₁ + tolerance.
    pub first_violation: Option<u64>,
}

/// Checks ‖f^{t+1}‖₁ ≤ ‖f^t‖₁ for every consecutive pair.
pub fn check_stability(traj: &Trajectory) -> StabilityCheck {
    let first_violation = traj
        .fields()
        .windows(2)
        .find(|w| l1_norm(&w[1]) > l1_norm(&w[0]) + STABILITY_TOLERANCE)
        .map(|w| w[0].t);
    StabilityCheck {
        stable: first_violation.is_none(),
        first_violation,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConservationCheck {
    pub conserved: bool,
    /// Largest |Σf^{t+1} − Σf^t − Σ_p q_p^t| over single steps.
    pub max_step_drift: f64,
    /// Largest deviation of Σf^t from its expected value over the run.
    pub max_drift: f64,
}

/// Checks that the total sum is constant (homogeneous case) or grows by
/// `Σ_p q_p^t` per step (with a source).
pub fn check_conservation(traj: &Trajectory, q: Option<&SourceTerm>) -> ConservationCheck {
    let fields = traj.fields();
    let mut max_step_drift: f64 = 0.0;
    let mut max_drift: f64 = 0.0;
    let mut expected = fields.first().map_or(0.0, Field::sum);
    for w in fields.windows(2) {
        let added = q.map_or(0.0, |q| q.total(traj.labels(), w[0].t));
        let (s0, s1) = (w[0].sum(), w[1].sum());
        max_step_drift = max_step_drift.max((s1 - s0 - added).abs());
        expected += added;
        max_drift = max_drift.max((s1 - expected).abs());
    }
    ConservationCheck {
        conserved: max_step_drift <= CONSERVATION_TOLERANCE,
        max_step_drift,
        max_drift,
    }
}
