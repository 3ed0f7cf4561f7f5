//! Dense complex matrices, projections, and states (density matrices).
//!
//! A [`State`] is a density matrix `rho`; it evaluates elements of the
//! represented algebra via `omega(a) = trace(rho * a)`. Conjugated states
//! `omega_a(x) = omega(a* x a) / omega(a* a)` are produced by
//! [`State::conjugate_by`].

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Trace of a density matrix must equal one within this bound.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues of a density matrix may undershoot zero by at most this much.
pub const EIGENVALUE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MatrixError {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("ragged or empty matrix data: {0}")]
    Shape(String),
    #[error("non-finite entry at ({row}, {col})", row = .0 + 1, col = .1 + 1)]
    NonFinite(usize, usize),
    #[error("not Hermitian: max |m - m*| entry is {0:e}")]
    NotHermitian(f64),
    #[error("trace is not 1 (got {0})")]
    TraceNotOne(f64),
    #[error("not positive semidefinite: min eigenvalue {0:e}")]
    NotPositive(f64),
    #[error("conjugator annihilates the state: omega(a*a) = {0:e}")]
    NullConjugator(f64),
    #[error("zero vector cannot define a pure state")]
    ZeroVector,
}

/// Dense complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Complex64>(
        rows: usize,
        cols: usize,
        mut f: F,
    ) -> Self {
        let mut m = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds a matrix from nested rows, rejecting ragged or empty input
    /// and non-finite entries.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self, MatrixError> {
        if rows.is_empty() {
            return Err(MatrixError::Shape("matrix has no rows".into()));
        }
        let cols = rows[0].len();
        if cols == 0 {
            return Err(MatrixError::Shape("matrix has no columns".into()));
        }
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(MatrixError::Shape(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    cols
                )));
            }
            for (j, &z) in row.iter().enumerate() {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(MatrixError::NonFinite(i, j));
                }
                data.push(z);
            }
        }
        Ok(CMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Real diagonal matrix.
    pub fn diag(entries: &[f64]) -> Self {
        let n = entries.len();
        CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(entries[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// 1x1 matrix holding a single scalar.
    pub fn scalar(z: Complex64) -> Self {
        CMatrix {
            rows: 1,
            cols: 1,
            data: vec![z],
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.cols + j] = z;
    }

    pub fn adjoint(&self) -> Self {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, z: Complex64) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|w| w * z).collect(),
        }
    }

    pub fn matmul(&self, other: &CMatrix) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matmul dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CMatrix) -> Self {
        let mut out = CMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        out.set(
                            i1 * other.rows + i2,
                            j1 * other.cols + j2,
                            a * other.get(i2, j2),
                        );
                    }
                }
            }
        }
        out
    }

    /// Max-entry norm `max_ij |m_ij|`.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &CMatrix, eps: f64) -> bool {
        self.rows == other.rows && self.cols == other.cols && (self - other).max_abs() <= eps
    }

    pub fn is_hermitian(&self, eps: f64) -> bool {
        self.is_square() && (self - &self.adjoint()).max_abs() <= eps
    }

    /// Eigendecomposition of a Hermitian matrix.
    ///
    /// Returns the eigenvalues and a matrix whose columns are the matching
    /// orthonormal eigenvectors. The caller is responsible for Hermitianity;
    /// only squareness is checked here.
    pub fn hermitian_eigen(&self) -> Result<(Vec<f64>, CMatrix), MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let na = nalgebra::DMatrix::from_fn(n, n, |i, j| self.get(i, j));
        let eig = na.symmetric_eigen();
        let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, j)]);
        Ok((values, vectors))
    }

    /// Eigenvector for the largest eigenvalue of a Hermitian matrix.
    pub fn top_eigenvector(&self) -> Result<(f64, Vec<Complex64>), MatrixError> {
        let (values, vectors) = self.hermitian_eigen()?;
        let (k, &top) = values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("square matrix has at least one eigenvalue");
        let v = (0..self.rows).map(|i| vectors.get(i, k)).collect();
        Ok((top, v))
    }

    /// Column vector `m v`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }
}

impl std::ops::Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl std::ops::Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, other: &CMatrix) -> CMatrix {
        self.matmul(other)
    }
}

impl std::ops::Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

// Complex entries cross the wire as [re, im] pairs.
impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        let z = self.get(i, j);
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(deserializer)?;
        let rows = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|[re, im]| Complex64::new(re, im))
                    .collect()
            })
            .collect();
        CMatrix::from_rows(rows).map_err(D::Error::custom)
    }
}

/// True iff `m` is a projection: `‖m − m*‖ ≤ eps` and `‖m − m²‖ ≤ eps`
/// in the max-entry norm.
pub fn is_projection(m: &CMatrix, eps: f64) -> Result<bool, MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let self_adjoint = (m - &m.adjoint()).max_abs() <= eps;
    let idempotent = (m - &(m * m)).max_abs() <= eps;
    Ok(self_adjoint && idempotent)
}

/// A state on a matrix algebra, represented by its density matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct State {
    dim: usize,
    rho: CMatrix,
}

impl State {
    /// Validates a density matrix: Hermitian within `eps`, trace 1 within
    /// [`TRACE_TOL`], eigenvalues at least `-`[`EIGENVALUE_TOL`].
    pub fn new(rho: CMatrix, eps: f64) -> Result<Self, MatrixError> {
        if !rho.is_square() {
            return Err(MatrixError::NonSquare {
                rows: rho.rows(),
                cols: rho.cols(),
            });
        }
        let herm_defect = (&rho - &rho.adjoint()).max_abs();
        if herm_defect > eps {
            return Err(MatrixError::NotHermitian(herm_defect));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(MatrixError::TraceNotOne(tr.re));
        }
        let (eigenvalues, _) = rho.hermitian_eigen()?;
        let min_eig = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min_eig < -EIGENVALUE_TOL {
            return Err(MatrixError::NotPositive(min_eig));
        }
        Ok(State {
            dim: rho.rows(),
            rho,
        })
    }

    /// Rank-one state `|v><v| / <v|v>`.
    pub fn pure_from_vector(v: &[Complex64]) -> Result<Self, MatrixError> {
        let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq <= 0.0 || !norm_sq.is_finite() {
            return Err(MatrixError::ZeroVector);
        }
        let dim = v.len();
        let rho = CMatrix::from_fn(dim, dim, |i, j| v[i] * v[j].conj() / norm_sq);
        Ok(State { dim, rho })
    }

    /// The normalized trace `I / dim`.
    pub fn normalized_trace(dim: usize) -> Self {
        let rho = CMatrix::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0));
        State { dim, rho }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rho(&self) -> &CMatrix {
        &self.rho
    }

    /// Evaluation `omega(a) = trace(rho * a)`.
    pub fn expect(&self, a: &CMatrix) -> Result<Complex64, MatrixError> {
        if a.rows() != self.dim || a.cols() != self.dim {
            return Err(MatrixError::DimMismatch {
                left_rows: self.dim,
                left_cols: self.dim,
                right_rows: a.rows(),
                right_cols: a.cols(),
            });
        }
        // trace(rho * a) = sum_{i,j} rho_ij a_ji
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += self.rho.get(i, j) * a.get(j, i);
            }
        }
        Ok(acc)
    }

    /// Conjugated state `omega_a(x) = omega(a* x a) / omega(a* a)`, realized
    /// as the density matrix `a rho a* / trace(a rho a*)`.
    pub fn conjugate_by(&self, a: &CMatrix, eps: f64) -> Result<State, MatrixError> {
        if a.rows() != self.dim || a.cols() != self.dim {
            return Err(MatrixError::DimMismatch {
                left_rows: self.dim,
                left_cols: self.dim,
                right_rows: a.rows(),
                right_cols: a.cols(),
            });
        }
        let conj = &(a * &self.rho) * &a.adjoint();
        let weight = conj.trace().re;
        if weight <= eps {
            return Err(MatrixError::NullConjugator(weight));
        }
        Ok(State {
            dim: self.dim,
            rho: conj.scale(Complex64::new(1.0 / weight, 0.0)),
        })
    }

    /// Convex mixture `t * self + (1 - t) * other`.
    pub fn mix(&self, other: &State, t: f64) -> Result<State, MatrixError> {
        if self.dim != other.dim {
            return Err(MatrixError::DimMismatch {
                left_rows: self.dim,
                left_cols: self.dim,
                right_rows: other.dim,
                right_cols: other.dim,
            });
        }
        let rho = &self.rho.scale(Complex64::new(t, 0.0))
            + &other.rho.scale(Complex64::new(1.0 - t, 0.0));
        Ok(State { dim: self.dim, rho })
    }

    pub fn from_json_str(s: &str, eps: f64) -> Result<Self, crate::json::ParseError> {
        #[derive(Deserialize)]
        struct Wire {
            dim: usize,
            rho: CMatrix,
        }
        let wire: Wire = serde_json::from_str(s)?;
        if wire.rho.rows() != wire.dim || wire.rho.cols() != wire.dim {
            return Err(crate::json::ParseError::Schema(format!(
                "rho is {}x{} but dim is {}",
                wire.rho.rows(),
                wire.rho.cols(),
                wire.dim
            )));
        }
        Ok(State::new(wire.rho, eps)?)
    }
}

/// Complex standard-normal vector of length `n`.
pub fn sample_cvector<R: Rng>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

/// Matrix with independent complex standard-normal entries.
pub fn sample_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Pure state from a normalized complex standard-normal vector.
pub fn sample_pure_state<R: Rng>(rng: &mut R, dim: usize) -> State {
    loop {
        let v = sample_cvector(rng, dim);
        if let Ok(state) = State::pure_from_vector(&v) {
            return state;
        }
    }
}

/// Haar-ish random unitary: Gram-Schmidt of a complex Gaussian matrix.
pub fn sample_unitary<R: Rng>(rng: &mut R, dim: usize) -> CMatrix {
    let columns = sample_orthonormal(rng, dim, dim);
    let mut u = CMatrix::zeros(dim, dim);
    for (j, col) in columns.iter().enumerate() {
        for i in 0..dim {
            u.set(i, j, col[i]);
        }
    }
    u
}

/// Random rank-`rank` orthogonal projection of size `dim`.
pub fn sample_projection<R: Rng>(rng: &mut R, dim: usize, rank: usize) -> CMatrix {
    assert!(rank <= dim);
    let columns = sample_orthonormal(rng, dim, rank);
    let mut p = CMatrix::zeros(dim, dim);
    for col in &columns {
        for i in 0..dim {
            for j in 0..dim {
                let v = p.get(i, j) + col[i] * col[j].conj();
                p.set(i, j, v);
            }
        }
    }
    p
}

fn sample_orthonormal<R: Rng>(rng: &mut R, dim: usize, count: usize) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(count);
    while basis.len() < count {
        let mut v = sample_cvector(rng, dim);
        for b in &basis {
            let overlap: Complex64 = b.iter().zip(&v).map(|(bi, vi)| bi.conj() * vi).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= overlap * bi;
            }
        }
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue; // essentially dependent draw, retry
        }
        for vi in v.iter_mut() {
            *vi /= norm;
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_TOL;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn projection_identity_is_projection() {
        assert!(is_projection(&CMatrix::identity(3), DEFAULT_TOL).unwrap());
    }

    #[test]
    fn projection_nilpotent_rejected() {
        let m = CMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert!(!is_projection(&m, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn projection_rank_one_outer_product() {
        // vv* for unit vector v = (0.6, 0.8)
        let v = [c(0.6, 0.0), c(0.8, 0.0)];
        let m = CMatrix::from_fn(2, 2, |i, j| v[i] * v[j].conj());
        assert!(is_projection(&m, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn projection_requires_square() {
        let m = CMatrix::zeros(2, 3);
        assert!(matches!(
            is_projection(&m, DEFAULT_TOL),
            Err(MatrixError::NonSquare { .. })
        ));
    }

    #[test]
    fn expect_identity_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in 1..5 {
            let omega = sample_pure_state(&mut rng, dim);
            let got = omega.expect(&CMatrix::identity(dim)).unwrap();
            assert_abs_diff_eq!(got.re, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(got.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn expect_mixed_and_pure_examples() {
        let half = State::normalized_trace(2);
        let e11 = CMatrix::diag(&[1.0, 0.0]);
        assert_abs_diff_eq!(half.expect(&e11).unwrap().re, 0.5, epsilon = 1e-12);

        let pure = State::pure_from_vector(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(pure.expect(&e11).unwrap().re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn conjugate_by_unitary_fixes_normalized_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u = sample_unitary(&mut rng, 3);
        let omega = State::normalized_trace(3);
        let conj = omega.conjugate_by(&u, DEFAULT_TOL).unwrap();
        assert!(conj.rho().approx_eq(omega.rho(), 1e-12));
    }

    #[test]
    fn conjugate_by_projection_fixes_states_in_range() {
        // p = vv*, omega = that same pure state: p rho p = rho.
        let v = [c(0.6, 0.0), c(0.0, 0.8)];
        let p = CMatrix::from_fn(2, 2, |i, j| v[i] * v[j].conj());
        let omega = State::pure_from_vector(&v).unwrap();
        let conj = omega.conjugate_by(&p, DEFAULT_TOL).unwrap();
        assert!(conj.rho().approx_eq(omega.rho(), 1e-12));
    }

    #[test]
    fn conjugate_by_zero_is_null() {
        let omega = State::normalized_trace(2);
        let z = CMatrix::zeros(2, 2);
        assert!(matches!(
            omega.conjugate_by(&z, DEFAULT_TOL),
            Err(MatrixError::NullConjugator(_))
        ));
    }

    #[test]
    fn conjugated_state_still_validates() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let omega = sample_pure_state(&mut rng, 4);
            let a = sample_matrix(&mut rng, 4, 4);
            match omega.conjugate_by(&a, DEFAULT_TOL) {
                Ok(conj) => {
                    State::new(conj.rho().clone(), DEFAULT_TOL).unwrap();
                }
                Err(MatrixError::NullConjugator(_)) => {}
                Err(e) => panic!("unexpected error: {e}"),
            }
        }
    }

    #[test]
    fn state_rejects_bad_density_matrices() {
        let not_herm = CMatrix::from_rows(vec![
            vec![c(0.5, 0.0), c(0.3, 0.1)],
            vec![c(0.0, 0.0), c(0.5, 0.0)],
        ])
        .unwrap();
        assert!(matches!(
            State::new(not_herm, DEFAULT_TOL),
            Err(MatrixError::NotHermitian(_))
        ));

        let bad_trace = CMatrix::diag(&[0.7, 0.7]);
        assert!(matches!(
            State::new(bad_trace, DEFAULT_TOL),
            Err(MatrixError::TraceNotOne(_))
        ));

        let not_psd = CMatrix::diag(&[1.5, -0.5]);
        assert!(matches!(
            State::new(not_psd, DEFAULT_TOL),
            Err(MatrixError::NotPositive(_))
        ));
    }

    #[test]
    fn expectation_real_on_hermitian_and_in_unit_interval_on_projections() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let omega = sample_pure_state(&mut rng, 3);
            let g = sample_matrix(&mut rng, 3, 3);
            let h = &g + &g.adjoint();
            assert!(omega.expect(&h).unwrap().im.abs() <= 1e-12);

            let p = sample_projection(&mut rng, 3, 2);
            let val = omega.expect(&p).unwrap();
            assert!(val.im.abs() <= 1e-12);
            assert!(val.re >= -1e-12 && val.re <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn complement_of_projection_is_projection_and_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for rank in 0..=3 {
            let p = sample_projection(&mut rng, 3, rank);
            let q = &CMatrix::identity(3) - &p;
            assert!(is_projection(&p, DEFAULT_TOL).unwrap());
            assert!(is_projection(&q, DEFAULT_TOL).unwrap());
            assert!((&p * &q).max_abs() <= 1e-12);
        }
    }

    #[test]
    fn top_eigenvector_of_projection_lies_in_range() {
        let v = [c(1.0, 0.0), c(1.0, 0.0)];
        let p = CMatrix::from_fn(2, 2, |i, j| v[i] * v[j].conj() / 2.0);
        let (val, vec) = p.top_eigenvector().unwrap();
        assert_abs_diff_eq!(val, 1.0, epsilon = 1e-12);
        let pv = p.apply(&vec);
        for (a, b) in pv.iter().zip(&vec) {
            assert_abs_diff_eq!(a.re, b.re, epsilon = 1e-10);
            assert_abs_diff_eq!(a.im, b.im, epsilon = 1e-10);
        }
    }

    #[test]
    fn kron_matches_block_structure() {
        let a = CMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        let b = CMatrix::from_rows(vec![vec![c(0.0, 1.0)]]).unwrap();
        let k = a.kron(&b);
        assert_eq!(k.rows(), 2);
        assert_eq!(k.get(0, 1), c(0.0, 2.0));
    }

    #[test]
    fn state_json_round_trip() {
        let state = State::pure_from_vector(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let text = serde_json::to_string(&state).unwrap();
        let back = State::from_json_str(&text, DEFAULT_TOL).unwrap();
        assert!(back.rho().approx_eq(state.rho(), 1e-12));
    }

    #[test]
    fn state_json_rejects_dim_mismatch() {
        let text = r#"{"dim": 3, "rho": [[[1.0, 0.0]]]}"#;
        assert!(State::from_json_str(text, DEFAULT_TOL).is_err());
    }
}
