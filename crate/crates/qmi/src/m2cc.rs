//! The quantum space `M₂(ℂ) ⊕ ℂ ⊕ ℂ`: its Lipnorm, the represented
//! symmetry algebra on generators `x, y, z, p`, the coaction, the
//! comultiplication lift, and the admissibility criterion `x = y = 0`.
//!
//! Elements of the space are triples `(m, e, f)` with `m` a 2×2 complex
//! matrix. The represented symmetry algebra [`ARep`] carries the relations
//!
//! ```text
//! x² = −yz,   2xx* + yy* + zz* = 1,   p* = p = p²,
//! ```
//!
//! with `x, y, z` generating a commutative *-algebra. The coaction is fixed
//! on two generators,
//!
//! ```text
//! α(e₁₂,0,0) = (e₁₁−e₂₂,0,0)⊗x + (e₁₂,0,0)⊗z + (e₂₁,0,0)⊗y
//! α(0,1,0)   = (0,1,0)⊗p + (0,0,1)⊗(1−p),
//! ```
//!
//! and extended as a unital *-homomorphism.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::matrix::{is_projection, sample_pure_state, CMatrix, MatrixError, State};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum M2ccError {
    #[error("bad generator shape: {0}")]
    Shape(String),
    #[error("relation violated: {0}")]
    RelationViolation(&'static str),
    #[error("generators {0} and {1} do not commute")]
    CommutativityViolation(&'static str, &'static str),
    #[error("z is not unitary")]
    NotUnitary,
    #[error("p is not a projection")]
    NotProjection,
    #[error("state dimension {state} does not match representation dimension {rep}")]
    DimMismatch { state: usize, rep: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// An element `(m, e, f)` of `M₂(ℂ) ⊕ ℂ ⊕ ℂ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleElement {
    pub m: CMatrix,
    pub e: Complex64,
    pub f: Complex64,
}

impl TripleElement {
    pub fn new(m: CMatrix, e: Complex64, f: Complex64) -> Result<Self, M2ccError> {
        if m.rows() != 2 || m.cols() != 2 {
            return Err(M2ccError::Shape(format!(
                "matrix part is {}x{}, expected 2x2",
                m.rows(),
                m.cols()
            )));
        }
        Ok(TripleElement { m, e, f })
    }

    pub fn zero() -> Self {
        TripleElement {
            m: CMatrix::zeros(2, 2),
            e: Complex64::new(0.0, 0.0),
            f: Complex64::new(0.0, 0.0),
        }
    }

    /// The unit `(I, 1, 1)`.
    pub fn unit() -> Self {
        TripleElement {
            m: CMatrix::identity(2),
            e: Complex64::new(1.0, 0.0),
            f: Complex64::new(1.0, 0.0),
        }
    }

    /// Matrix unit `(e_ij, 0, 0)` for `i, j ∈ {0, 1}`.
    pub fn matrix_unit(i: usize, j: usize) -> Self {
        let mut m = CMatrix::zeros(2, 2);
        m.set(i, j, Complex64::new(1.0, 0.0));
        TripleElement {
            m,
            e: Complex64::new(0.0, 0.0),
            f: Complex64::new(0.0, 0.0),
        }
    }

    /// `(0, 1, 0)`.
    pub fn mid_unit() -> Self {
        TripleElement {
            m: CMatrix::zeros(2, 2),
            e: Complex64::new(1.0, 0.0),
            f: Complex64::new(0.0, 0.0),
        }
    }

    /// `(0, 0, 1)`.
    pub fn last_unit() -> Self {
        TripleElement {
            m: CMatrix::zeros(2, 2),
            e: Complex64::new(0.0, 0.0),
            f: Complex64::new(1.0, 0.0),
        }
    }

    /// The six canonical basis elements, matrix units first.
    pub fn basis() -> Vec<TripleElement> {
        vec![
            TripleElement::matrix_unit(0, 0),
            TripleElement::matrix_unit(0, 1),
            TripleElement::matrix_unit(1, 0),
            TripleElement::matrix_unit(1, 1),
            TripleElement::mid_unit(),
            TripleElement::last_unit(),
        ]
    }

    pub fn add(&self, other: &TripleElement) -> TripleElement {
        TripleElement {
            m: &self.m + &other.m,
            e: self.e + other.e,
            f: self.f + other.f,
        }
    }

    pub fn scale(&self, z: Complex64) -> TripleElement {
        TripleElement {
            m: self.m.scale(z),
            e: self.e * z,
            f: self.f * z,
        }
    }

    /// Componentwise product of the direct sum.
    pub fn mul(&self, other: &TripleElement) -> TripleElement {
        TripleElement {
            m: &self.m * &other.m,
            e: self.e * other.e,
            f: self.f * other.f,
        }
    }

    pub fn adjoint(&self) -> TripleElement {
        TripleElement {
            m: self.m.adjoint(),
            e: self.e.conj(),
            f: self.f.conj(),
        }
    }

    pub fn approx_eq(&self, other: &TripleElement, eps: f64) -> bool {
        self.m.approx_eq(&other.m, eps)
            && (self.e - other.e).norm() <= eps
            && (self.f - other.f).norm() <= eps
    }

    /// Complex standard-normal element.
    pub fn sample<R: Rng>(rng: &mut R) -> TripleElement {
        let v = crate::matrix::sample_cvector(rng, 6);
        TripleElement {
            m: CMatrix::from_rows(vec![vec![v[0], v[1]], vec![v[2], v[3]]]).expect("2x2"),
            e: v[4],
            f: v[5],
        }
    }
}

impl Serialize for TripleElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            m: &'a CMatrix,
            e: [f64; 2],
            f: [f64; 2],
        }
        Wire {
            m: &self.m,
            e: [self.e.re, self.e.im],
            f: [self.f.re, self.f.im],
        }
        .serialize(serializer)
    }
}

/// The Lipnorm `L((a b; c d), e, f) = |a−d| + |b| + |c| + |a−e| + |a−f|`.
pub fn lipnorm6(b: &TripleElement) -> f64 {
    let a = b.m.get(0, 0);
    let b12 = b.m.get(0, 1);
    let c = b.m.get(1, 0);
    let d = b.m.get(1, 1);
    (a - d).norm() + b12.norm() + c.norm() + (a - b.e).norm() + (a - b.f).norm()
}

/// A representation of the symmetry algebra by matrices for `x, y, z, p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ARep {
    dim: usize,
    x: CMatrix,
    y: CMatrix,
    z: CMatrix,
    p: CMatrix,
}

impl ARep {
    /// Validates the generator relations and the commutativity of the
    /// *-algebra generated by `x, y, z`, each within `eps`.
    pub fn new(
        x: CMatrix,
        y: CMatrix,
        z: CMatrix,
        p: CMatrix,
        eps: f64,
    ) -> Result<Self, M2ccError> {
        let dim = x.rows();
        for (name, m) in [("x", &x), ("y", &y), ("z", &z), ("p", &p)] {
            if !m.is_square() || m.rows() != dim {
                return Err(M2ccError::Shape(format!(
                    "{name} is {}x{}, expected {dim}x{dim}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        if dim == 0 {
            return Err(M2ccError::Shape("generators are empty".into()));
        }

        if (&(&x * &x) + &(&y * &z)).max_abs() > eps {
            return Err(M2ccError::RelationViolation("x^2 = -yz"));
        }
        let sum = &(&(&x * &x.adjoint()).scale(Complex64::new(2.0, 0.0)) + &(&y * &y.adjoint()))
            + &(&z * &z.adjoint());
        if !sum.approx_eq(&CMatrix::identity(dim), eps) {
            return Err(M2ccError::RelationViolation("2xx* + yy* + zz* = 1"));
        }
        if !is_projection(&p, eps)? {
            return Err(M2ccError::RelationViolation("p* = p = p^2"));
        }

        let xa = x.adjoint();
        let ya = y.adjoint();
        let za = z.adjoint();
        let pairs: [(&'static str, &CMatrix, &'static str, &CMatrix); 9] = [
            ("x", &x, "y", &y),
            ("x", &x, "z", &z),
            ("y", &y, "z", &z),
            ("x", &x, "x*", &xa),
            ("y", &y, "y*", &ya),
            ("z", &z, "z*", &za),
            ("x", &x, "y*", &ya),
            ("x", &x, "z*", &za),
            ("y", &y, "z*", &za),
        ];
        for (na, a, nb, b) in pairs {
            if (&(a * b) - &(b * a)).max_abs() > eps {
                return Err(M2ccError::CommutativityViolation(na, nb));
            }
        }
        Ok(ARep { dim, x, y, z, p })
    }

    /// Scalar representation from four complex numbers.
    pub fn from_scalars(
        x: Complex64,
        y: Complex64,
        z: Complex64,
        p: Complex64,
        eps: f64,
    ) -> Result<Self, M2ccError> {
        ARep::new(
            CMatrix::scalar(x),
            CMatrix::scalar(y),
            CMatrix::scalar(z),
            CMatrix::scalar(p),
            eps,
        )
    }

    /// A representation of the quotient algebra: `x = y = 0`, `z` unitary,
    /// `p` a projection.
    pub fn quotient(u: CMatrix, p: CMatrix, eps: f64) -> Result<Self, M2ccError> {
        if !u.is_square() || u.rows() != p.rows() || !p.is_square() {
            return Err(M2ccError::Shape(format!(
                "z is {}x{}, p is {}x{}",
                u.rows(),
                u.cols(),
                p.rows(),
                p.cols()
            )));
        }
        let dim = u.rows();
        let id = CMatrix::identity(dim);
        if !(&u * &u.adjoint()).approx_eq(&id, eps) || !(&u.adjoint() * &u).approx_eq(&id, eps) {
            return Err(M2ccError::NotUnitary);
        }
        if !is_projection(&p, eps)? {
            return Err(M2ccError::NotProjection);
        }
        ARep::new(
            CMatrix::zeros(dim, dim),
            CMatrix::zeros(dim, dim),
            u,
            p,
            eps,
        )
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn x(&self) -> &CMatrix {
        &self.x
    }

    pub fn y(&self) -> &CMatrix {
        &self.y
    }

    pub fn z(&self) -> &CMatrix {
        &self.z
    }

    pub fn p(&self) -> &CMatrix {
        &self.p
    }

    /// `x = y = 0` within `eps`: the representation factors through the
    /// quotient that defines the quantum isometry group.
    pub fn is_admissible(&self, eps: f64) -> bool {
        self.x.max_abs() <= eps && self.y.max_abs() <= eps
    }

    pub fn from_json_str(s: &str, eps: f64) -> Result<Self, crate::json::ParseError> {
        #[derive(Deserialize)]
        struct Wire {
            dim: usize,
            x: CMatrix,
            y: CMatrix,
            z: CMatrix,
            p: CMatrix,
        }
        let wire: Wire = serde_json::from_str(s)?;
        if wire.x.rows() != wire.dim {
            return Err(crate::json::ParseError::Schema(format!(
                "x is {}x{} but dim is {}",
                wire.x.rows(),
                wire.x.cols(),
                wire.dim
            )));
        }
        Ok(ARep::new(wire.x, wire.y, wire.z, wire.p, eps)?)
    }
}

/// An element of `B ⊗ M_dim`: a 2×2 grid of `dim×dim` blocks for the
/// `M₂ ⊗ M_dim` part plus one block each for the two scalar summands.
#[derive(Debug, Clone, PartialEq)]
pub struct CoactionImage {
    blocks: Vec<CMatrix>, // row-major 2x2
    e_block: CMatrix,
    f_block: CMatrix,
}

impl CoactionImage {
    pub fn zero(dim: usize) -> Self {
        CoactionImage {
            blocks: vec![CMatrix::zeros(dim, dim); 4],
            e_block: CMatrix::zeros(dim, dim),
            f_block: CMatrix::zeros(dim, dim),
        }
    }

    /// The unit `(I, 1, 1) ⊗ 1`.
    pub fn unit(dim: usize) -> Self {
        let id = CMatrix::identity(dim);
        CoactionImage {
            blocks: vec![
                id.clone(),
                CMatrix::zeros(dim, dim),
                CMatrix::zeros(dim, dim),
                id.clone(),
            ],
            e_block: id.clone(),
            f_block: id,
        }
    }

    pub fn block(&self, i: usize, j: usize) -> &CMatrix {
        &self.blocks[2 * i + j]
    }

    pub fn e_block(&self) -> &CMatrix {
        &self.e_block
    }

    pub fn f_block(&self) -> &CMatrix {
        &self.f_block
    }

    pub fn add(&self, other: &CoactionImage) -> CoactionImage {
        CoactionImage {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a + b)
                .collect(),
            e_block: &self.e_block + &other.e_block,
            f_block: &self.f_block + &other.f_block,
        }
    }

    pub fn scale(&self, z: Complex64) -> CoactionImage {
        CoactionImage {
            blocks: self.blocks.iter().map(|b| b.scale(z)).collect(),
            e_block: self.e_block.scale(z),
            f_block: self.f_block.scale(z),
        }
    }

    /// Product in `B ⊗ M_dim`: 2×2 block-matrix product on the `M₂` part,
    /// plain products on the scalar summands.
    pub fn mul(&self, other: &CoactionImage) -> CoactionImage {
        let dim = self.e_block.rows();
        let mut blocks = Vec::with_capacity(4);
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = CMatrix::zeros(dim, dim);
                for k in 0..2 {
                    acc = &acc + &(self.block(i, k) * other.block(k, j));
                }
                blocks.push(acc);
            }
        }
        CoactionImage {
            blocks,
            e_block: &self.e_block * &other.e_block,
            f_block: &self.f_block * &other.f_block,
        }
    }

    pub fn adjoint(&self) -> CoactionImage {
        CoactionImage {
            blocks: vec![
                self.block(0, 0).adjoint(),
                self.block(1, 0).adjoint(),
                self.block(0, 1).adjoint(),
                self.block(1, 1).adjoint(),
            ],
            e_block: self.e_block.adjoint(),
            f_block: self.f_block.adjoint(),
        }
    }

    pub fn approx_eq(&self, other: &CoactionImage, eps: f64) -> bool {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a.approx_eq(b, eps))
            && self.e_block.approx_eq(&other.e_block, eps)
            && self.f_block.approx_eq(&other.f_block, eps)
    }

    /// Applies a state to every block, landing back in the triple algebra.
    pub fn pushforward(&self, omega: &State) -> Result<TripleElement, M2ccError> {
        let dim = self.e_block.rows();
        if omega.dim() != dim {
            return Err(M2ccError::DimMismatch {
                state: omega.dim(),
                rep: dim,
            });
        }
        let mut m = CMatrix::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                m.set(i, j, omega.expect(self.block(i, j))?);
            }
        }
        Ok(TripleElement {
            m,
            e: omega.expect(&self.e_block)?,
            f: omega.expect(&self.f_block)?,
        })
    }
}

/// The coaction induced by a representation, precomputed on the six basis
/// elements of the triple algebra.
#[derive(Debug, Clone)]
pub struct Coaction {
    dim: usize,
    images: Vec<CoactionImage>, // order: e11, e12, e21, e22, mid, last
}

impl Coaction {
    pub fn new(rep: &ARep) -> Self {
        let dim = rep.dim;
        let x = &rep.x;
        let y = &rep.y;
        let z = &rep.z;
        let p = &rep.p;
        let zero = CMatrix::zeros(dim, dim);
        let id = CMatrix::identity(dim);

        let alpha_e12 = CoactionImage {
            blocks: vec![x.clone(), z.clone(), y.clone(), -x],
            e_block: zero.clone(),
            f_block: zero.clone(),
        };
        let alpha_e21 = alpha_e12.adjoint();

        // Closed form of α(e₁₁), cross-checked against α(e₁₂)α(e₂₁).
        let xa = x.adjoint();
        let ya = y.adjoint();
        let za = z.adjoint();
        let alpha_e11 = CoactionImage {
            blocks: vec![
                &(x * &xa) + &(z * &za),
                &(x * &ya) - &(z * &xa),
                &(y * &xa) - &(x * &za),
                &(x * &xa) + &(y * &ya),
            ],
            e_block: zero.clone(),
            f_block: zero.clone(),
        };
        debug_assert!(
            alpha_e11.approx_eq(&alpha_e12.mul(&alpha_e21), 1e-9),
            "closed form of the e11 image disagrees with the product"
        );
        let alpha_e22 = alpha_e21.mul(&alpha_e12);

        let alpha_mid = CoactionImage {
            blocks: vec![zero.clone(); 4],
            e_block: p.clone(),
            f_block: &id - p,
        };
        // the last summand is forced by unitality:
        // α(0,0,1) = 1 − α(I,0,0) − α(0,1,0)
        let alpha_last = CoactionImage::unit(dim).add(
            &alpha_e11
                .add(&alpha_e22)
                .add(&alpha_mid)
                .scale(Complex64::new(-1.0, 0.0)),
        );
        debug_assert!(
            alpha_last.approx_eq(
                &CoactionImage {
                    blocks: vec![zero; 4],
                    e_block: &id - p,
                    f_block: p.clone(),
                },
                1e-9
            ),
            "unital extension disagrees with the closed form of the last summand"
        );

        Coaction {
            dim,
            images: vec![
                alpha_e11, alpha_e12, alpha_e21, alpha_e22, alpha_mid, alpha_last,
            ],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `α(b)` by linearity over the basis images.
    pub fn apply(&self, b: &TripleElement) -> CoactionImage {
        let coeffs = [
            b.m.get(0, 0),
            b.m.get(0, 1),
            b.m.get(1, 0),
            b.m.get(1, 1),
            b.e,
            b.f,
        ];
        let mut acc = CoactionImage::zero(self.dim);
        for (c, image) in coeffs.iter().zip(&self.images) {
            if *c != Complex64::new(0.0, 0.0) {
                acc = acc.add(&image.scale(*c));
            }
        }
        acc
    }

    /// `(ι ⊗ ω) α(b)`.
    pub fn push(&self, omega: &State, b: &TripleElement) -> Result<TripleElement, M2ccError> {
        self.apply(b).pushforward(omega)
    }

    /// `L(pushforward) − L(b)`.
    pub fn defect(&self, omega: &State, b: &TripleElement) -> Result<f64, M2ccError> {
        Ok(lipnorm6(&self.push(omega, b)?) - lipnorm6(b))
    }
}

/// `α(b)` for a single element; sweeps should build a [`Coaction`] once.
pub fn coaction_apply(rep: &ARep, b: &TripleElement) -> CoactionImage {
    Coaction::new(rep).apply(b)
}

/// `(ι ⊗ ω) α(b)` for a single element.
pub fn pushforward6(
    rep: &ARep,
    omega: &State,
    b: &TripleElement,
) -> Result<TripleElement, M2ccError> {
    Coaction::new(rep).push(omega, b)
}

/// A refuting pair for a non-admissible representation.
#[derive(Debug, Clone, Serialize)]
pub struct M2ccWitness {
    pub b: TripleElement,
    pub omega: State,
    pub defect: f64,
}

/// Outcome of [`admissibility_check`].
#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub samples_run: usize,
    pub max_defect: f64,
    pub witness: Option<M2ccWitness>,
}

/// For admissible representations (`x = y = 0` within `eps`), sweeps
/// `samples` seeded (pure state, element) pairs — the elements cycle through
/// the basis interleaved with random elements — and reports the maximum
/// defect. For non-admissible representations, searches for a positive
/// defect over `e₁₂`, `e₁₁`, `(0,1,0)` and random elements against seeded
/// pure states and reports the first witness.
pub fn admissibility_check(
    rep: &ARep,
    samples: usize,
    seed: u64,
    eps: f64,
) -> Result<AdmissibilityReport, M2ccError> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let coaction = Coaction::new(rep);
    let basis = TripleElement::basis();

    if rep.is_admissible(eps) {
        let mut max_defect = f64::NEG_INFINITY;
        for k in 0..samples {
            let omega = sample_pure_state(&mut rng, rep.dim);
            let b = if k % 2 == 0 {
                basis[(k / 2) % basis.len()].clone()
            } else {
                TripleElement::sample(&mut rng)
            };
            max_defect = max_defect.max(coaction.defect(&omega, &b)?);
        }
        Ok(AdmissibilityReport {
            admissible: true,
            samples_run: samples,
            max_defect: if samples > 0 { max_defect } else { 0.0 },
            witness: None,
        })
    } else {
        // e12 first: the coaction formula makes it sensitive to x
        let priority = [
            TripleElement::matrix_unit(0, 1),
            TripleElement::matrix_unit(0, 0),
            TripleElement::mid_unit(),
        ];
        let mut max_defect = f64::NEG_INFINITY;
        let mut run = 0;
        for _ in 0..samples.max(1) {
            let omega = sample_pure_state(&mut rng, rep.dim);
            let random_b = TripleElement::sample(&mut rng);
            for b in priority.iter().chain(std::iter::once(&random_b)) {
                let defect = coaction.defect(&omega, b)?;
                max_defect = max_defect.max(defect);
                run += 1;
                if defect > eps {
                    return Ok(AdmissibilityReport {
                        admissible: false,
                        samples_run: run,
                        max_defect,
                        witness: Some(M2ccWitness {
                            b: b.clone(),
                            omega,
                            defect,
                        }),
                    });
                }
            }
        }
        Ok(AdmissibilityReport {
            admissible: false,
            samples_run: run,
            max_defect,
            witness: None,
        })
    }
}

/// Lifts the comultiplication to a pair of representations:
///
/// ```text
/// Δ(x) = (zz* − yy*) ⊗ x + x ⊗ z + x* ⊗ y
/// Δ(y) = (yx* − xz*) ⊗ 2x + y ⊗ z + z* ⊗ y
/// Δ(z) = (xy* − zx*) ⊗ 2x + z ⊗ z + y* ⊗ y
/// Δ(p) = p ⊗ p + (1−p) ⊗ (1−p)
/// ```
///
/// with `⊗` the matrix tensor product, left factors from `r1` and right
/// factors from `r2`. The result is validated; a relation failure here
/// would mean the formulas were transcribed wrong, so it is a hard error.
pub fn comult_lift(r1: &ARep, r2: &ARep, eps: f64) -> Result<ARep, M2ccError> {
    let (x1, y1, z1, p1) = (&r1.x, &r1.y, &r1.z, &r1.p);
    let (x2, y2, z2, p2) = (&r2.x, &r2.y, &r2.z, &r2.p);
    let x1a = x1.adjoint();
    let y1a = y1.adjoint();
    let z1a = z1.adjoint();
    let two_x2 = x2.scale(Complex64::new(2.0, 0.0));

    let x = &(&(&(z1 * &z1a) - &(y1 * &y1a)).kron(x2) + &x1.kron(z2)) + &x1a.kron(y2);
    let y = &(&(&(y1 * &x1a) - &(x1 * &z1a)).kron(&two_x2) + &y1.kron(z2)) + &z1a.kron(y2);
    let z = &(&(&(x1 * &y1a) - &(z1 * &x1a)).kron(&two_x2) + &z1.kron(z2)) + &y1a.kron(y2);

    let id1 = CMatrix::identity(r1.dim);
    let id2 = CMatrix::identity(r2.dim);
    let p = &p1.kron(p2) + &(&id1 - p1).kron(&(&id2 - p2));

    ARep::new(x, y, z, p, eps)
}

/// Preservation of `ψ(m, e, f) = trace(m) + e + f`: checks
/// `(ψ ⊗ ι) α(b) = ψ(b) · 1` on the six basis elements.
pub fn trace_preservation_check(rep: &ARep, eps: f64) -> bool {
    let coaction = Coaction::new(rep);
    let id = CMatrix::identity(rep.dim);
    for b in TripleElement::basis() {
        let image = coaction.apply(&b);
        let applied =
            &(&(image.block(0, 0) + image.block(1, 1)) + image.e_block()) + image.f_block();
        let psi = b.m.trace() + b.e + b.f;
        if !applied.approx_eq(&id.scale(psi), eps) {
            return false;
        }
    }
    true
}

/// Random representation of the quotient algebra (`x = y = 0`).
pub fn sample_quotient_rep<R: Rng>(rng: &mut R, dim: usize) -> ARep {
    let u = crate::matrix::sample_unitary(rng, dim);
    let rank = rng.gen_range(0..=dim);
    let p = crate::matrix::sample_projection(rng, dim, rank);
    ARep::quotient(u, p, crate::DEFAULT_TOL).expect("sampled quotient data must validate")
}

/// Random diagonal representation with nonzero `x`: each diagonal slot is a
/// scalar solution of the relations, so the result is commutative but not
/// admissible (unless every sampled `x` is zero, which does not happen for
/// the radius range used here).
pub fn sample_scalar_solution_rep<R: Rng>(rng: &mut R, dim: usize) -> ARep {
    let mut xs = Vec::with_capacity(dim);
    let mut ys = Vec::with_capacity(dim);
    let mut zs = Vec::with_capacity(dim);
    let mut ps = Vec::with_capacity(dim);
    for _ in 0..dim {
        // |x| = r with 0 < r <= 1/2 keeps the norm relation solvable
        let r: f64 = rng.gen_range(0.05..=0.5);
        let disc = (1.0 - 2.0 * r * r).powi(2) - 4.0 * r.powi(4);
        let u = ((1.0 - 2.0 * r * r) + disc.max(0.0).sqrt()) / 2.0;
        let s = u.sqrt();
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let x = Complex64::from_polar(r, phi);
        let y = Complex64::from_polar(s, theta);
        let z = -(x * x) / y;
        xs.push(x);
        ys.push(y);
        zs.push(z);
        ps.push(Complex64::new(
            if rng.gen_bool(0.5) { 1.0 } else { 0.0 },
            0.0,
        ));
    }
    let diag = |v: &[Complex64]| {
        CMatrix::from_fn(dim, dim, |i, j| {
            if i == j {
                v[i]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    };
    ARep::new(diag(&xs), diag(&ys), diag(&zs), diag(&ps), 1e-9)
        .expect("scalar solutions satisfy the relations by construction")
}
