//! Magic biunitary matrices over matrix representations.
//!
//! A magic unitary is an `n x n` grid of `dim x dim` projections whose rows
//! and columns each sum to the identity. [`MagicUnitary::check_commutation`]
//! decides commutation with a distance matrix along two independent routes:
//!
//! * (A) the blockwise residual `‖a d − d a‖`, treating `d(i,j)` as scalar
//!   blocks, and
//! * (B) the quadruple test `a_ij a_kl = 0` whenever `d(i,k) ≠ d(j,l)`.
//!
//! The two routes are provably equivalent for exact magic unitaries, so the
//! check cross-validates them on every call and reports a hard error if they
//! ever disagree.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{is_projection, CMatrix};
use crate::metric::FiniteMetricSpace;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MagicError {
    #[error("bad grid shape: {0}")]
    Shape(String),
    #[error("entry ({i}, {j}) is not a projection", i = .0 + 1, j = .1 + 1)]
    NotProjection(usize, usize),
    #[error("row {row} does not sum to the identity", row = .0 + 1)]
    RowSum(usize),
    #[error("column {col} does not sum to the identity", col = .0 + 1)]
    ColSum(usize),
    #[error("not a bijection: {0}")]
    NotBijection(String),
    #[error("point count mismatch: {left} vs {right}")]
    PointCountMismatch { left: usize, right: usize },
    #[error("weight vector has {got} entries but the grid has {n} points")]
    LengthMismatch { got: usize, n: usize },
    #[error(
        "commutation criteria disagree: residual {residual:e} vs {violations} quadruple violations"
    )]
    InternalDisagreement { residual: f64, violations: usize },
}

/// An `n x n` magic biunitary over `dim x dim` matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MagicUnitary {
    n: usize,
    dim: usize,
    grid: Vec<Vec<CMatrix>>,
}

/// Outcome of the two-route commutation check.
///
/// `commutes` holds iff `violations` is empty iff the residual is at most
/// `n² ε`; the constructor has already asserted that the three agree.
/// Quadruples are 0-indexed in the struct and 1-indexed on the wire.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutationReport {
    pub commutes: bool,
    pub residual: f64,
    pub violations: Vec<(usize, usize, usize, usize)>,
}

impl Serialize for CommutationReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            commutes: bool,
            residual: f64,
            violations: Vec<[usize; 4]>,
        }
        Wire {
            commutes: self.commutes,
            residual: self.residual,
            violations: self
                .violations
                .iter()
                .map(|&(i, j, k, l)| [i + 1, j + 1, k + 1, l + 1])
                .collect(),
        }
        .serialize(serializer)
    }
}

impl MagicUnitary {
    /// Validates a grid: square layout, equal square blocks, every entry a
    /// projection within `eps`, rows and columns summing to the identity
    /// within `eps`.
    pub fn validate(grid: Vec<Vec<CMatrix>>, eps: f64) -> Result<Self, MagicError> {
        let n = grid.len();
        if n == 0 {
            return Err(MagicError::Shape("grid has no rows".into()));
        }
        if grid.iter().any(|row| row.len() != n) {
            return Err(MagicError::Shape("grid is not square".into()));
        }
        let dim = grid[0][0].rows();
        if dim == 0 {
            return Err(MagicError::Shape("entries are empty".into()));
        }
        for (i, row) in grid.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                if entry.rows() != dim || entry.cols() != dim {
                    return Err(MagicError::Shape(format!(
                        "entry ({}, {}) is {}x{}, expected {}x{}",
                        i + 1,
                        j + 1,
                        entry.rows(),
                        entry.cols(),
                        dim,
                        dim
                    )));
                }
                if !is_projection(entry, eps).expect("square by construction") {
                    return Err(MagicError::NotProjection(i, j));
                }
            }
        }
        let id = CMatrix::identity(dim);
        for i in 0..n {
            let mut sum = CMatrix::zeros(dim, dim);
            for j in 0..n {
                sum = &sum + &grid[i][j];
            }
            if !sum.approx_eq(&id, eps * n as f64) {
                return Err(MagicError::RowSum(i));
            }
        }
        for j in 0..n {
            let mut sum = CMatrix::zeros(dim, dim);
            for i in 0..n {
                sum = &sum + &grid[i][j];
            }
            if !sum.approx_eq(&id, eps * n as f64) {
                return Err(MagicError::ColSum(j));
            }
        }
        Ok(MagicUnitary { n, dim, grid })
    }

    /// The classical grid of a permutation: `a_ij = 1` iff `images[i] = j`,
    /// over the one-dimensional representation.
    pub fn from_permutation(images: &[usize]) -> Result<Self, MagicError> {
        let n = images.len();
        if n == 0 {
            return Err(MagicError::NotBijection("empty permutation".into()));
        }
        let mut seen = vec![false; n];
        for &img in images {
            if img >= n {
                return Err(MagicError::NotBijection(format!(
                    "image {} out of range 1..={}",
                    img + 1,
                    n
                )));
            }
            if seen[img] {
                return Err(MagicError::NotBijection(format!(
                    "image {} repeated",
                    img + 1
                )));
            }
            seen[img] = true;
        }
        let one = CMatrix::identity(1);
        let zero = CMatrix::zeros(1, 1);
        let grid = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if images[i] == j {
                            one.clone()
                        } else {
                            zero.clone()
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(MagicUnitary { n, dim: 1, grid })
    }

    /// The canonical genuinely-quantum four-point grid built from two
    /// projections:
    ///
    /// ```text
    /// [ p   1-p  0    0  ]
    /// [ 1-p p    0    0  ]
    /// [ 0   0    q   1-q ]
    /// [ 0   0   1-q   q  ]
    /// ```
    pub fn two_block_quantum(p: &CMatrix, q: &CMatrix, eps: f64) -> Result<Self, MagicError> {
        if !p.is_square() || p.rows() != q.rows() || !q.is_square() {
            return Err(MagicError::Shape(format!(
                "p is {}x{}, q is {}x{}",
                p.rows(),
                p.cols(),
                q.rows(),
                q.cols()
            )));
        }
        if !is_projection(p, eps).expect("square checked") {
            return Err(MagicError::NotProjection(0, 0));
        }
        if !is_projection(q, eps).expect("square checked") {
            return Err(MagicError::NotProjection(2, 2));
        }
        let dim = p.rows();
        let id = CMatrix::identity(dim);
        let zero = CMatrix::zeros(dim, dim);
        let pc = &id - p;
        let qc = &id - q;
        let grid = vec![
            vec![p.clone(), pc.clone(), zero.clone(), zero.clone()],
            vec![pc, p.clone(), zero.clone(), zero.clone()],
            vec![zero.clone(), zero.clone(), q.clone(), qc.clone()],
            vec![zero.clone(), zero.clone(), qc, q.clone()],
        ];
        Ok(MagicUnitary { n: 4, dim, grid })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> &CMatrix {
        &self.grid[i][j]
    }

    /// The ∗-product grid `x_ij = Σ_k a_ik ⊗ c_kj`; the representation
    /// dimension multiplies. The result is revalidated at `eps`.
    pub fn star_product(&self, other: &MagicUnitary, eps: f64) -> Result<Self, MagicError> {
        if self.n != other.n {
            return Err(MagicError::PointCountMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let n = self.n;
        let dim = self.dim * other.dim;
        let mut grid = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let mut sum = CMatrix::zeros(dim, dim);
                for k in 0..n {
                    sum = &sum + &self.grid[i][k].kron(&other.grid[k][j]);
                }
                row.push(sum);
            }
            grid.push(row);
        }
        MagicUnitary::validate(grid, eps)
    }

    /// The antipode image: grid transpose, entry `(i,j)` becomes `a_ji`.
    pub fn antipode(&self) -> Self {
        let grid = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.grid[j][i].clone()).collect())
            .collect();
        MagicUnitary {
            n: self.n,
            dim: self.dim,
            grid,
        }
    }

    /// Two-route commutation check against a distance matrix; see the module
    /// docs. Errors with [`MagicError::InternalDisagreement`] if the residual
    /// route and the quadruple route reach different verdicts.
    pub fn check_commutation(
        &self,
        metric: &FiniteMetricSpace,
        eps: f64,
    ) -> Result<CommutationReport, MagicError> {
        if self.n != metric.n() {
            return Err(MagicError::PointCountMismatch {
                left: self.n,
                right: metric.n(),
            });
        }
        let n = self.n;

        // Route A: blockwise residual of a d - d a.
        let mut residual = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut block = CMatrix::zeros(self.dim, self.dim);
                for x in 0..n {
                    let coeff = Complex64::new(metric.distance(x, j), 0.0);
                    block = &block + &self.grid[i][x].scale(coeff);
                    let coeff = Complex64::new(-metric.distance(i, x), 0.0);
                    block = &block + &self.grid[x][j].scale(coeff);
                }
                residual = residual.max(block.max_abs());
            }
        }
        let commutes_residual = residual <= eps * (n * n) as f64;

        // Route B: quadruples with mismatched distances and nonzero products.
        let entry_norms: Vec<Vec<f64>> = self
            .grid
            .iter()
            .map(|row| row.iter().map(CMatrix::max_abs).collect())
            .collect();
        let mut violations = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if entry_norms[i][j] == 0.0 {
                    continue;
                }
                for k in 0..n {
                    for l in 0..n {
                        if metric.distance(i, k) == metric.distance(j, l)
                            || entry_norms[k][l] == 0.0
                        {
                            continue;
                        }
                        if (&self.grid[i][j] * &self.grid[k][l]).max_abs() > eps {
                            violations.push((i, j, k, l));
                        }
                    }
                }
            }
        }
        let commutes_quadruple = violations.is_empty();

        if commutes_residual != commutes_quadruple {
            return Err(MagicError::InternalDisagreement {
                residual,
                violations: violations.len(),
            });
        }
        Ok(CommutationReport {
            commutes: commutes_quadruple,
            residual,
            violations,
        })
    }

    /// True iff the grid preserves the weighted functional
    /// `ψ = Σ_i w_i ev_i`, i.e. `Σ_i w_i a_ij = w_j I` for every column `j`.
    pub fn preserves_functional(&self, weights: &[f64], eps: f64) -> Result<bool, MagicError> {
        if weights.len() != self.n {
            return Err(MagicError::LengthMismatch {
                got: weights.len(),
                n: self.n,
            });
        }
        let id = CMatrix::identity(self.dim);
        for j in 0..self.n {
            let mut sum = CMatrix::zeros(self.dim, self.dim);
            for i in 0..self.n {
                sum = &sum + &self.grid[i][j].scale(Complex64::new(weights[i], 0.0));
            }
            if !sum.approx_eq(
                &id.scale(Complex64::new(weights[j], 0.0)),
                eps * self.n as f64,
            ) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn from_json_str(s: &str, eps: f64) -> Result<Self, crate::json::ParseError> {
        let wire: MagicWire = serde_json::from_str(s)?;
        if wire.entries.len() != wire.n {
            return Err(crate::json::ParseError::Schema(format!(
                "entries has {} rows but n is {}",
                wire.entries.len(),
                wire.n
            )));
        }
        let magic = MagicUnitary::validate(wire.entries, eps)?;
        if magic.dim != wire.dim {
            return Err(crate::json::ParseError::Schema(format!(
                "entries are {}x{} blocks but dim is {}",
                magic.dim, magic.dim, wire.dim
            )));
        }
        Ok(magic)
    }
}

#[derive(Serialize, Deserialize)]
struct MagicWire {
    n: usize,
    dim: usize,
    entries: Vec<Vec<CMatrix>>,
}

impl Serialize for MagicUnitary {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let wire = MagicWire {
            n: self.n,
            dim: self.dim,
            entries: self.grid.clone(),
        };
        wire.serialize(serializer)
    }
}
