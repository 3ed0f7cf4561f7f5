//! The 1-isometry inequality, made checkable.
//!
//! A state `ω` pushes a function `f` forward through a grid to
//! `g(j) = Σ_i f(i) ω(a_ji)`; the defect `L_d(g) − L_d(f)` must stay
//! nonpositive for isometric grids. Commuting instances are *certified*
//! pairwise by transport plans ([`certify_pair`]); non-commuting instances
//! are *refuted* by an explicit witness state and function
//! ([`witness_search`]). [`decide_isometric`] combines the exact commutation
//! criterion with both kinds of corroborating evidence and fails hard if
//! they ever disagree.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::magic::{CommutationReport, MagicError, MagicUnitary};
use crate::matrix::{sample_cvector, sample_pure_state, MatrixError, State};
use crate::metric::{FiniteMetricSpace, MetricError};
use crate::transport::{coupling_for_pair, TransportError, TransportPlan};

/// Stored certificate/witness numbers must reproduce within this bound.
pub const RECHECK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Error)]
pub enum IsoError {
    #[error("function has {got} entries but the space has {n} points")]
    SizeMismatch { got: usize, n: usize },
    #[error("pair certification requires a commuting grid")]
    CommutationRequired,
    #[error("coupling for pair ({x}, {y}) is infeasible (deficit {deficit:e}) although the grid commutes",
            x = .x + 1, y = .y + 1)]
    UnexpectedInfeasibility { x: usize, y: usize, deficit: f64 },
    #[error("corroboration contradicts the commutation verdict: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Magic(#[from] MagicError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Transport(#[from] TransportError),
}

/// How a witness state was constructed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessRoute {
    /// Conjugated top-eigenvector state of `a_ij a_kl a_ij` for a violating
    /// quadruple (0-indexed in the struct, 1-indexed on the wire).
    ViolatingQuadruple {
        quadruple: (usize, usize, usize, usize),
    },
    /// The `index`-th seeded random pure state.
    RandomState { index: usize },
}

impl Serialize for WitnessRoute {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(tag = "route", rename_all = "snake_case")]
        enum Wire {
            ViolatingQuadruple { quadruple: [usize; 4] },
            RandomState { index: usize },
        }
        match *self {
            WitnessRoute::ViolatingQuadruple {
                quadruple: (i, j, k, l),
            } => Wire::ViolatingQuadruple {
                quadruple: [i + 1, j + 1, k + 1, l + 1],
            },
            WitnessRoute::RandomState { index } => Wire::RandomState { index },
        }
        .serialize(serializer)
    }
}

/// Which candidate function exposed the defect. Points are 0-indexed in the
/// struct and 1-indexed on the wire; levels are 0-indexed everywhere, like
/// the distance levels `d_0, ..., d_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CandidateFunction {
    Distance { point: usize },
    SphereIndicator { point: usize, level: usize },
}

impl Serialize for CandidateFunction {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(tag = "kind", rename_all = "snake_case")]
        enum Wire {
            Distance { point: usize },
            SphereIndicator { point: usize, level: usize },
        }
        match *self {
            CandidateFunction::Distance { point } => Wire::Distance { point: point + 1 },
            CandidateFunction::SphereIndicator { point, level } => Wire::SphereIndicator {
                point: point + 1,
                level,
            },
        }
        .serialize(serializer)
    }
}

/// A concrete refutation of 1-isometry: `lipdefect(a, M, omega, f) = defect > 0`.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub omega: State,
    pub f: Vec<[f64; 2]>,
    pub defect: f64,
    pub route: WitnessRoute,
    pub candidate: CandidateFunction,
}

impl Witness {
    pub fn function(&self) -> Vec<Complex64> {
        self.f
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect()
    }

    /// Recomputes the defect from scratch; must agree within [`RECHECK_TOL`].
    pub fn verify(&self, a: &MagicUnitary, metric: &FiniteMetricSpace) -> Result<(), IsoError> {
        let again = lipdefect(a, metric, &self.omega, &self.function())?;
        if (again - self.defect).abs() > RECHECK_TOL {
            return Err(IsoError::Inconsistent(format!(
                "witness defect {} does not reproduce (got {})",
                self.defect, again
            )));
        }
        Ok(())
    }
}

/// The evaluated transport chain for one pair `(x, y)`:
/// `|g(x) − g(y)| ≤ Σ λ_ij |f(i) − f(j)| ≤ L_d(f) · d(x, y)`.
/// Points are 0-indexed in the struct and 1-indexed on the wire.
#[derive(Debug, Clone)]
pub struct PairCertificate {
    pub x: usize,
    pub y: usize,
    pub plan: TransportPlan,
    /// `|g(x) − g(y)|` for the pushforward `g`.
    pub pushforward_gap: f64,
    /// `Σ λ_ij |f(i) − f(j)|`.
    pub transported: f64,
    /// `L_d(f) · d(x, y)`.
    pub bound: f64,
}

impl Serialize for PairCertificate {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            x: usize,
            y: usize,
            plan: &'a TransportPlan,
            pushforward_gap: f64,
            transported: f64,
            bound: f64,
        }
        Wire {
            x: self.x + 1,
            y: self.y + 1,
            plan: &self.plan,
            pushforward_gap: self.pushforward_gap,
            transported: self.transported,
            bound: self.bound,
        }
        .serialize(serializer)
    }
}

impl PairCertificate {
    /// Both chain inequalities on the stored numbers, within [`RECHECK_TOL`].
    pub fn holds(&self) -> bool {
        self.pushforward_gap <= self.transported + RECHECK_TOL
            && self.transported <= self.bound + RECHECK_TOL
    }
}

/// Tolerance, seeding, and sweep sizes for [`decide_isometric`].
#[derive(Debug, Clone, Serialize)]
pub struct DecideConfig {
    pub eps: f64,
    pub seed: u64,
    /// Corroboration samples (state, function) on commuting instances.
    pub samples: usize,
    /// Seeded random pure states tried by the witness search after the
    /// quadruple-derived states.
    pub witness_random_states: usize,
}

impl Default for DecideConfig {
    fn default() -> Self {
        DecideConfig {
            eps: crate::DEFAULT_TOL,
            seed: 0,
            samples: 200,
            witness_random_states: 50,
        }
    }
}

/// Verdict plus the evidence backing it.
#[derive(Debug, Clone, Serialize)]
pub struct IsometryVerdict {
    pub isometric: bool,
    pub report: CommutationReport,
    /// Largest defect seen during corroboration (commuting instances only).
    pub max_defect: Option<f64>,
    pub samples: usize,
    pub certificates: Vec<PairCertificate>,
    pub witness: Option<Witness>,
    /// True when the witness search ran and exhausted its candidates.
    pub witness_searched: bool,
}

/// The matrix `w[j][i] = ω(a_ji)` so that pushforwards become plain sums.
pub fn state_weights(a: &MagicUnitary, omega: &State) -> Result<Vec<Vec<Complex64>>, IsoError> {
    let n = a.n();
    let mut weights = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for j in 0..n {
        for i in 0..n {
            weights[j][i] = omega.expect(a.entry(j, i))?;
        }
    }
    Ok(weights)
}

fn pushforward_with_weights(weights: &[Vec<Complex64>], f: &[Complex64]) -> Vec<Complex64> {
    weights
        .iter()
        .map(|row| row.iter().zip(f).map(|(w, fi)| w * fi).sum())
        .collect()
}

/// `(ι ⊗ ω) α(f)`: the function `g(j) = Σ_i f(i) ω(a_ji)`.
pub fn pushforward(
    a: &MagicUnitary,
    omega: &State,
    f: &[Complex64],
) -> Result<Vec<Complex64>, IsoError> {
    if f.len() != a.n() {
        return Err(IsoError::SizeMismatch {
            got: f.len(),
            n: a.n(),
        });
    }
    let weights = state_weights(a, omega)?;
    Ok(pushforward_with_weights(&weights, f))
}

/// `L_d(pushforward) − L_d(f)`; positive values refute 1-isometry.
pub fn lipdefect(
    a: &MagicUnitary,
    metric: &FiniteMetricSpace,
    omega: &State,
    f: &[Complex64],
) -> Result<f64, IsoError> {
    if a.n() != metric.n() {
        return Err(IsoError::Magic(MagicError::PointCountMismatch {
            left: a.n(),
            right: metric.n(),
        }));
    }
    let g = pushforward(a, omega, f)?;
    Ok(metric.lipnorm(&g)? - metric.lipnorm(f)?)
}

/// Certifies the 1-isometry inequality for one pair via a transport plan;
/// requires a commuting grid and stores every number in the chain.
pub fn certify_pair(
    a: &MagicUnitary,
    metric: &FiniteMetricSpace,
    omega: &State,
    f: &[Complex64],
    x: usize,
    y: usize,
    eps: f64,
) -> Result<PairCertificate, IsoError> {
    if f.len() != a.n() {
        return Err(IsoError::SizeMismatch {
            got: f.len(),
            n: a.n(),
        });
    }
    let report = a.check_commutation(metric, eps)?;
    if !report.commutes {
        return Err(IsoError::CommutationRequired);
    }
    let outcome = coupling_for_pair(a, metric, omega, x, y, eps)?;
    let plan = match outcome {
        crate::transport::TransportOutcome::Plan(plan) => plan,
        crate::transport::TransportOutcome::Infeasible(cert) => {
            return Err(IsoError::UnexpectedInfeasibility {
                x,
                y,
                deficit: cert.deficit,
            });
        }
    };
    let g = pushforward(a, omega, f)?;
    let n = a.n();
    let pushforward_gap = (g[x] - g[y]).norm();
    let mut transported = 0.0;
    for i in 0..n {
        for j in 0..n {
            transported += plan.lambda[i][j] * (f[i] - f[j]).norm();
        }
    }
    let bound = metric.lipnorm(f)? * metric.distance(x, y);
    Ok(PairCertificate {
        x,
        y,
        plan,
        pushforward_gap,
        transported,
        bound,
    })
}

/// Searches for a refuting `(state, function)` pair.
///
/// For each violating quadruple `(i, j, k, l)`, in report order, the top
/// eigenvector of `a_ij a_kl a_ij` defines a pure state which is conjugated
/// by `a_ij`; the candidate functions — distance functions `D_m` first, then
/// sphere indicators — are scanned for a defect above `eps`. After the
/// quadruple-derived states, `random_states` seeded random pure states are
/// scanned against the same candidates. Every returned witness has been
/// re-verified; `None` means no witness among the enumerated candidates,
/// which for a non-commuting grid is weaker than an isometry verdict.
pub fn witness_search(
    a: &MagicUnitary,
    metric: &FiniteMetricSpace,
    eps: f64,
    seed: u64,
    random_states: usize,
) -> Result<Option<Witness>, IsoError> {
    let report = a.check_commutation(metric, eps)?;
    let candidates = candidate_functions(metric)?;

    for &(i, j, k, l) in &report.violations {
        let sandwich = &(a.entry(i, j) * a.entry(k, l)) * a.entry(i, j);
        let (top, vector) = sandwich.top_eigenvector()?;
        if top <= eps {
            continue;
        }
        let base = State::pure_from_vector(&vector)?;
        let omega = match base.conjugate_by(a.entry(i, j), eps) {
            Ok(state) => state,
            Err(MatrixError::NullConjugator(_)) => base,
            Err(e) => return Err(e.into()),
        };
        let route = WitnessRoute::ViolatingQuadruple {
            quadruple: (i, j, k, l),
        };
        if let Some(witness) = scan_candidates(a, metric, &omega, &candidates, eps, route)? {
            witness.verify(a, metric)?;
            return Ok(Some(witness));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for index in 0..random_states {
        let omega = sample_pure_state(&mut rng, a.dim());
        let route = WitnessRoute::RandomState { index };
        if let Some(witness) = scan_candidates(a, metric, &omega, &candidates, eps, route)? {
            witness.verify(a, metric)?;
            return Ok(Some(witness));
        }
    }
    Ok(None)
}

fn candidate_functions(
    metric: &FiniteMetricSpace,
) -> Result<Vec<(CandidateFunction, Vec<Complex64>)>, IsoError> {
    let n = metric.n();
    let mut candidates = Vec::new();
    for m in 0..n {
        candidates.push((
            CandidateFunction::Distance { point: m },
            metric.distance_function(m)?,
        ));
    }
    let levels = metric.distance_levels();
    for m in 0..n {
        for level in 0..levels.count() {
            candidates.push((
                CandidateFunction::SphereIndicator { point: m, level },
                metric.sphere_indicator(m, level)?,
            ));
        }
    }
    Ok(candidates)
}

fn scan_candidates(
    a: &MagicUnitary,
    metric: &FiniteMetricSpace,
    omega: &State,
    candidates: &[(CandidateFunction, Vec<Complex64>)],
    eps: f64,
    route: WitnessRoute,
) -> Result<Option<Witness>, IsoError> {
    let weights = state_weights(a, omega)?;
    for (candidate, f) in candidates {
        let g = pushforward_with_weights(&weights, f);
        let defect = metric.lipnorm(&g)? - metric.lipnorm(f)?;
        if defect > eps {
            return Ok(Some(Witness {
                omega: omega.clone(),
                f: f.iter().map(|z| [z.re, z.im]).collect(),
                defect,
                route: route.clone(),
                candidate: candidate.clone(),
            }));
        }
    }
    Ok(None)
}

/// Decides 1-isometry by the exact commutation criterion, then corroborates:
/// commuting grids get a seeded defect sweep (every defect must stay at or
/// below `eps`) plus transport certificates for all point pairs under the
/// normalized trace state; non-commuting grids get a witness search. A
/// corroboration result that contradicts the verdict is an error, not a
/// report.
pub fn decide_isometric(
    a: &MagicUnitary,
    metric: &FiniteMetricSpace,
    config: &DecideConfig,
) -> Result<IsometryVerdict, IsoError> {
    let report = a.check_commutation(metric, config.eps)?;
    let n = a.n();

    if report.commutes {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut max_defect = f64::NEG_INFINITY;
        for _ in 0..config.samples {
            let omega = sample_pure_state(&mut rng, a.dim());
            let f = sample_cvector(&mut rng, n);
            let defect = lipdefect(a, metric, &omega, &f)?;
            max_defect = max_defect.max(defect);
            if defect > config.eps {
                return Err(IsoError::Inconsistent(format!(
                    "commuting grid shows defect {defect:e}"
                )));
            }
        }
        let trace_state = State::normalized_trace(a.dim());
        let mut certificates = Vec::new();
        for x in 0..n {
            for y in (x + 1)..n {
                let f = metric.distance_function(y)?;
                let certificate = certify_pair(a, metric, &trace_state, &f, x, y, config.eps)?;
                if !certificate.holds() {
                    return Err(IsoError::Inconsistent(format!(
                        "certificate chain fails for pair ({}, {})",
                        x + 1,
                        y + 1
                    )));
                }
                certificates.push(certificate);
            }
        }
        Ok(IsometryVerdict {
            isometric: true,
            report,
            max_defect: if config.samples > 0 {
                Some(max_defect)
            } else {
                None
            },
            samples: config.samples,
            certificates,
            witness: None,
            witness_searched: false,
        })
    } else {
        let witness = witness_search(
            a,
            metric,
            config.eps,
            config.seed,
            config.witness_random_states,
        )?;
        Ok(IsometryVerdict {
            isometric: false,
            report,
            max_defect: None,
            samples: 0,
            certificates: Vec::new(),
            witness,
            witness_searched: true,
        })
    }
}
