//! Finite metric spaces, their distance-level structure, and the Lipschitz
//! seminorm `L_d(f) = sup |f(x)-f(y)| / d(x,y)`.
//!
//! Validation canonicalizes distances that agree within [`MERGE_TOL`] to a
//! shared representative, so the level structure (the sorted distinct
//! distances `d_0 < d_1 < ... < d_N` and the spheres `V_i^γ`) is built on
//! exact equality classes. Points are 0-indexed in the API and 1-indexed in
//! error messages and serialized output.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Slack for the metric axioms and for merging nearly-equal distances.
pub const MERGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MetricError {
    #[error("matrix is not square: row {row} has {got} entries, expected {expected}",
            row = .0 + 1, got = .1, expected = .2)]
    NotSquare(usize, usize, usize),
    #[error("empty distance matrix")]
    Empty,
    #[error("non-finite distance at ({i}, {j})", i = .0 + 1, j = .1 + 1)]
    NonFinite(usize, usize),
    #[error("nonzero diagonal: d({i},{i}) != 0", i = .0 + 1)]
    Diagonal(usize),
    #[error("asymmetric: d({i},{j}) != d({j},{i})", i = .0 + 1, j = .1 + 1)]
    Asymmetry(usize, usize),
    #[error("non-positive distance between distinct points {i} and {j}", i = .0 + 1, j = .1 + 1)]
    NonPositive(usize, usize),
    #[error("triangle inequality fails: d({i},{k}) > d({i},{j}) + d({j},{k})",
            i = .0 + 1, j = .1 + 1, k = .2 + 1)]
    Triangle(usize, usize, usize),
    #[error("point index {index} out of range 1..={n}", index = .0 + 1, n = .1)]
    IndexOutOfRange(usize, usize),
    #[error("level index {0} out of range 0..={1}")]
    LevelOutOfRange(usize, usize),
    #[error("function has {got} entries but the space has {n} points")]
    LengthMismatch { got: usize, n: usize },
}

/// A validated finite metric space: `n` points and canonicalized distances.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteMetricSpace {
    n: usize,
    d: Vec<Vec<f64>>,
}

/// The sorted distinct distances `d_0 = 0 < d_1 < ... < d_N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceLevels {
    values: Vec<f64>,
}

impl DistanceLevels {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn count(&self) -> usize {
        self.values.len()
    }

    /// Index γ with `d_γ = value` (exact match on canonical distances).
    pub fn index_of(&self, value: f64) -> Option<usize> {
        self.values.iter().position(|&v| v == value)
    }
}

impl FiniteMetricSpace {
    /// Validates a raw distance matrix against the metric axioms.
    ///
    /// Checks run in a fixed order, each scanning indices lexicographically,
    /// and the first violation is reported: squareness and finiteness, zero
    /// diagonal, symmetry, positivity off the diagonal, triangle inequality
    /// (`d(i,k) <= d(i,j) + d(j,k)`, slack [`MERGE_TOL`]). Distances that
    /// agree within [`MERGE_TOL`] are canonicalized to a shared
    /// representative before the positivity and triangle checks.
    pub fn validate(raw: &[Vec<f64>]) -> Result<Self, MetricError> {
        let n = raw.len();
        if n == 0 {
            return Err(MetricError::Empty);
        }
        for (i, row) in raw.iter().enumerate() {
            if row.len() != n {
                return Err(MetricError::NotSquare(i, row.len(), n));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(MetricError::NonFinite(i, j));
                }
            }
        }
        for i in 0..n {
            if raw[i][i].abs() > MERGE_TOL {
                return Err(MetricError::Diagonal(i));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if (raw[i][j] - raw[j][i]).abs() > MERGE_TOL {
                    return Err(MetricError::Asymmetry(i, j));
                }
            }
        }

        let d = canonicalize(raw, n);

        for i in 0..n {
            for j in (i + 1)..n {
                if d[i][j] <= 0.0 {
                    return Err(MetricError::NonPositive(i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if d[i][k] > d[i][j] + d[j][k] + MERGE_TOL {
                        return Err(MetricError::Triangle(i, j, k));
                    }
                }
            }
        }
        Ok(FiniteMetricSpace { n, d })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Canonical distance between points `i` and `j` (0-indexed).
    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.d[i][j]
    }

    /// The sorted distinct distances, starting at `d_0 = 0`.
    pub fn distance_levels(&self) -> DistanceLevels {
        let mut values: Vec<f64> = Vec::new();
        for row in &self.d {
            for &v in row {
                if !values.contains(&v) {
                    values.push(v);
                }
            }
        }
        values.sort_by(f64::total_cmp);
        DistanceLevels { values }
    }

    /// The sphere `V_i^γ = { j | d(i,j) = d_γ }`.
    pub fn sphere(&self, i: usize, gamma: usize) -> Result<Vec<usize>, MetricError> {
        if i >= self.n {
            return Err(MetricError::IndexOutOfRange(i, self.n));
        }
        let levels = self.distance_levels();
        if gamma >= levels.count() {
            return Err(MetricError::LevelOutOfRange(gamma, levels.count() - 1));
        }
        let target = levels.values()[gamma];
        Ok((0..self.n).filter(|&j| self.d[i][j] == target).collect())
    }

    /// The distance function `D_j : x ↦ d(x, j)`.
    pub fn distance_function(&self, j: usize) -> Result<Vec<Complex64>, MetricError> {
        if j >= self.n {
            return Err(MetricError::IndexOutOfRange(j, self.n));
        }
        Ok((0..self.n)
            .map(|x| Complex64::new(self.d[x][j], 0.0))
            .collect())
    }

    /// Indicator of the sphere `V_m^γ`.
    pub fn sphere_indicator(&self, m: usize, gamma: usize) -> Result<Vec<Complex64>, MetricError> {
        let sphere = self.sphere(m, gamma)?;
        let mut f = vec![Complex64::new(0.0, 0.0); self.n];
        for j in sphere {
            f[j] = Complex64::new(1.0, 0.0);
        }
        Ok(f)
    }

    /// Lipschitz seminorm `L_d(f) = max_{x≠y} |f(x)-f(y)| / d(x,y)`,
    /// zero when there are no pairs (n = 1).
    pub fn lipnorm(&self, f: &[Complex64]) -> Result<f64, MetricError> {
        if f.len() != self.n {
            return Err(MetricError::LengthMismatch {
                got: f.len(),
                n: self.n,
            });
        }
        let mut sup = 0.0f64;
        for x in 0..self.n {
            for y in (x + 1)..self.n {
                let ratio = (f[x] - f[y]).norm() / self.d[x][y];
                sup = sup.max(ratio);
            }
        }
        Ok(sup)
    }

    pub fn from_json_str(s: &str) -> Result<Self, crate::json::ParseError> {
        #[derive(Deserialize)]
        struct Wire {
            n: usize,
            d: Vec<Vec<f64>>,
        }
        let wire: Wire = serde_json::from_str(s)?;
        if wire.d.len() != wire.n {
            return Err(crate::json::ParseError::Schema(format!(
                "d has {} rows but n is {}",
                wire.d.len(),
                wire.n
            )));
        }
        Ok(FiniteMetricSpace::validate(&wire.d)?)
    }
}

/// Merge entries that agree within [`MERGE_TOL`] to a shared representative.
/// The class containing zero maps to exactly 0.0; other classes map to their
/// smallest member.
fn canonicalize(raw: &[Vec<f64>], n: usize) -> Vec<Vec<f64>> {
    let mut values: Vec<f64> = raw.iter().flatten().copied().collect();
    values.sort_by(f64::total_cmp);
    values.dedup();

    // (class representative, class upper bound so far)
    let mut classes: Vec<(f64, f64)> = Vec::new();
    for &v in &values {
        match classes.last_mut() {
            Some((_, last)) if v - *last <= MERGE_TOL => *last = v,
            _ => classes.push((v, v)),
        }
    }
    let representative = |v: f64| -> f64 {
        for &(rep, hi) in &classes {
            if v >= rep - MERGE_TOL && v <= hi + MERGE_TOL {
                return if rep.abs() <= MERGE_TOL { 0.0 } else { rep };
            }
        }
        v
    };
    (0..n)
        .map(|i| (0..n).map(|j| representative(raw[i][j])).collect())
        .collect()
}
