//! Constrained couplings via flow networks.
//!
//! A [`CouplingProblem`] asks for nonnegative `λ_ij` with row marginals
//! `α`, column marginals `β`, and support inside a relation `allowed`.
//! [`CouplingProblem::solve`] builds the bipartite network (source → left
//! with capacity `α_i`, capacity-1 central edges on the relation, right →
//! sink with capacity `β_j`), runs a deterministic shortest-augmenting-path
//! max flow, and either extracts the coupling or derives an infeasibility
//! certificate from the minimum cut. [`CouplingProblem::hall_check`] decides
//! the same question by exhaustive subset enumeration and is kept as an
//! independent oracle for the flow route.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::magic::{MagicError, MagicUnitary};
use crate::matrix::{MatrixError, State};
use crate::metric::FiniteMetricSpace;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum TransportError {
    #[error("marginal vectors and relation must share one size: alpha {alpha}, beta {beta}, allowed {rows}x{cols}")]
    ShapeMismatch {
        alpha: usize,
        beta: usize,
        rows: usize,
        cols: usize,
    },
    #[error("{side} marginals sum to {sum}, expected 1")]
    BadMarginalSum { side: &'static str, sum: f64 },
    #[error("{side} marginal {index} is negative ({value})", index = .index + 1)]
    NegativeMarginal {
        side: &'static str,
        index: usize,
        value: f64,
    },
    #[error("non-finite marginal")]
    NonFinite,
    #[error("point index {index} out of range 1..={n}", index = .0 + 1, n = .1)]
    IndexOutOfRange(usize, usize),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Magic(#[from] MagicError),
}

/// Marginals plus a support relation; `allowed[i][j]` means mass may move
/// from left `i` to right `j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingProblem {
    n: usize,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    allowed: Vec<Vec<bool>>,
    eps: f64,
}

/// A coupling `λ` with the problem's marginals and support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportPlan {
    pub lambda: Vec<Vec<f64>>,
}

/// A subset of left indices whose mass exceeds what its targets can absorb.
/// Indices are 0-based in the struct and 1-based on the wire; `deficit > 0`
/// is recomputable from the problem.
#[derive(Debug, Clone, PartialEq)]
pub struct CutCertificate {
    pub z: Vec<usize>,
    pub deficit: f64,
}

impl Serialize for CutCertificate {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            z: Vec<usize>,
            deficit: f64,
        }
        Wire {
            z: self.z.iter().map(|&i| i + 1).collect(),
            deficit: self.deficit,
        }
        .serialize(serializer)
    }
}

/// Result of a feasibility question.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum TransportOutcome {
    Plan(TransportPlan),
    Infeasible(CutCertificate),
}

impl TransportOutcome {
    pub fn plan(&self) -> Option<&TransportPlan> {
        match self {
            TransportOutcome::Plan(p) => Some(p),
            TransportOutcome::Infeasible(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&CutCertificate> {
        match self {
            TransportOutcome::Plan(_) => None,
            TransportOutcome::Infeasible(c) => Some(c),
        }
    }
}

impl CouplingProblem {
    /// Validates marginals (entries ≥ −eps, sums within `n·eps` of 1) and
    /// the relation shape.
    pub fn new(
        alpha: Vec<f64>,
        beta: Vec<f64>,
        allowed: Vec<Vec<bool>>,
        eps: f64,
    ) -> Result<Self, TransportError> {
        let n = alpha.len();
        if n == 0
            || beta.len() != n
            || allowed.len() != n
            || allowed.iter().any(|row| row.len() != n)
        {
            return Err(TransportError::ShapeMismatch {
                alpha: alpha.len(),
                beta: beta.len(),
                rows: allowed.len(),
                cols: allowed.first().map_or(0, Vec::len),
            });
        }
        for (side, v) in [("alpha", &alpha), ("beta", &beta)] {
            if v.iter().any(|x| !x.is_finite()) {
                return Err(TransportError::NonFinite);
            }
            if let Some((index, &value)) = v.iter().enumerate().find(|(_, &x)| x < -eps) {
                return Err(TransportError::NegativeMarginal { side, index, value });
            }
            let sum: f64 = v.iter().sum();
            if (sum - 1.0).abs() > eps * n as f64 {
                return Err(TransportError::BadMarginalSum { side, sum });
            }
        }
        Ok(CouplingProblem {
            n,
            alpha,
            beta,
            allowed,
            eps,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn allowed(&self) -> &[Vec<bool>] {
        &self.allowed
    }

    /// `Σ_{i∈Z} α_i − Σ_{j ∈ ∪_{i∈Z} V_i} β_j` for a subset of left indices.
    pub fn deficit(&self, z: &[usize]) -> f64 {
        let mut mass = 0.0;
        let mut targets = vec![false; self.n];
        for &i in z {
            mass += self.alpha[i];
            for j in 0..self.n {
                if self.allowed[i][j] {
                    targets[j] = true;
                }
            }
        }
        let absorbed: f64 = (0..self.n)
            .filter(|&j| targets[j])
            .map(|j| self.beta[j])
            .sum();
        mass - absorbed
    }

    /// Decides the subset inequality `Σ_{i∈Z} α_i ≤ Σ_{j∈∪V_i} β_j`
    /// directly. Up to 20 points every subset is enumerated and, on failure,
    /// the lexicographically-least maximum-deficit subset is returned; past
    /// 20 points the certificate is taken from the flow route's minimum cut.
    pub fn hall_check(&self) -> Option<CutCertificate> {
        if self.n > 20 {
            return self.solve().certificate().cloned();
        }
        let threshold = self.eps * self.n as f64;
        let mut best: Option<CutCertificate> = None;
        for mask in 1u32..(1u32 << self.n) {
            let z: Vec<usize> = (0..self.n).filter(|&i| mask >> i & 1 == 1).collect();
            let deficit = self.deficit(&z);
            if deficit <= threshold {
                continue;
            }
            let better = match &best {
                None => true,
                Some(b) => deficit > b.deficit || (deficit == b.deficit && z < b.z),
            };
            if better {
                best = Some(CutCertificate { z, deficit });
            }
        }
        best
    }

    /// Max-flow coupling construction; see the module docs. Feasible means
    /// flow value at least `1 − n·eps`.
    pub fn solve(&self) -> TransportOutcome {
        let n = self.n;
        let source = 0;
        let left = |i: usize| 1 + i;
        let right = |j: usize| 1 + n + j;
        let sink = 1 + 2 * n;

        let mut net = FlowNetwork::new(2 * n + 2);
        for i in 0..n {
            net.add_edge(source, left(i), self.alpha[i].max(0.0));
        }
        let mut central = vec![vec![usize::MAX; n]; n];
        for i in 0..n {
            for j in 0..n {
                if self.allowed[i][j] {
                    central[i][j] = net.add_edge(left(i), right(j), 1.0);
                }
            }
        }
        for j in 0..n {
            net.add_edge(right(j), sink, self.beta[j].max(0.0));
        }

        let flow = net.max_flow(source, sink);
        if flow >= 1.0 - self.eps * n as f64 {
            let lambda = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| match central[i][j] {
                            usize::MAX => 0.0,
                            e => net.flow_on(e),
                        })
                        .collect()
                })
                .collect();
            TransportOutcome::Plan(TransportPlan { lambda })
        } else {
            let reachable = net.residual_reachable(source);
            let z: Vec<usize> = (0..n).filter(|&i| reachable[left(i)]).collect();
            let deficit = self.deficit(&z);
            // Holds for every problem whose marginals are not sitting exactly
            // on the feasibility threshold; float dust can void it only there.
            debug_assert!(
                !z.is_empty() && deficit > 0.0,
                "min cut of an infeasible validated problem must witness a deficit"
            );
            TransportOutcome::Infeasible(CutCertificate { z, deficit })
        }
    }

    /// Checks a plan against this problem: marginals within `n·eps` and
    /// support inside the relation (entries off the relation at most `eps`).
    pub fn validate_plan(&self, plan: &TransportPlan) -> Result<(), String> {
        let n = self.n;
        if plan.lambda.len() != n || plan.lambda.iter().any(|row| row.len() != n) {
            return Err("plan shape does not match problem".into());
        }
        let tol = self.eps * n as f64;
        for i in 0..n {
            for j in 0..n {
                let v = plan.lambda[i][j];
                if v < -self.eps {
                    return Err(format!("negative mass at ({}, {})", i + 1, j + 1));
                }
                if !self.allowed[i][j] && v > self.eps {
                    return Err(format!("mass off the relation at ({}, {})", i + 1, j + 1));
                }
            }
        }
        for i in 0..n {
            let row: f64 = plan.lambda[i].iter().sum();
            if (row - self.alpha[i]).abs() > tol {
                return Err(format!(
                    "row {} marginal off by {:e}",
                    i + 1,
                    row - self.alpha[i]
                ));
            }
        }
        for j in 0..n {
            let col: f64 = (0..n).map(|i| plan.lambda[i][j]).sum();
            if (col - self.beta[j]).abs() > tol {
                return Err(format!(
                    "column {} marginal off by {:e}",
                    j + 1,
                    col - self.beta[j]
                ));
            }
        }
        Ok(())
    }

    pub fn from_json_str(s: &str, eps: f64) -> Result<Self, crate::json::ParseError> {
        #[derive(Deserialize)]
        struct Wire {
            alpha: Vec<f64>,
            beta: Vec<f64>,
            allowed: Vec<Vec<bool>>,
        }
        let wire: Wire = serde_json::from_str(s)?;
        CouplingProblem::new(wire.alpha, wire.beta, wire.allowed, eps)
            .map_err(|e| crate::json::ParseError::Schema(e.to_string()))
    }
}

/// The coupling demanded for one point pair `(x, y)` by a state on a magic
/// unitary: marginals `α_i = ω(a_xi)`, `β_j = ω(a_yj)`, support
/// `d(i,j) = d(x,y)`. Whenever the grid commutes with the metric, a plan
/// exists; an infeasibility certificate here refutes commutation.
pub fn coupling_for_pair(
    a: &MagicUnitary,
    metric: &FiniteMetricSpace,
    omega: &State,
    x: usize,
    y: usize,
    eps: f64,
) -> Result<TransportOutcome, TransportError> {
    let n = a.n();
    if n != metric.n() {
        return Err(TransportError::Magic(MagicError::PointCountMismatch {
            left: n,
            right: metric.n(),
        }));
    }
    if x >= n {
        return Err(TransportError::IndexOutOfRange(x, n));
    }
    if y >= n {
        return Err(TransportError::IndexOutOfRange(y, n));
    }
    let mut alpha = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n);
    for i in 0..n {
        alpha.push(omega.expect(a.entry(x, i))?.re);
        beta.push(omega.expect(a.entry(y, i))?.re);
    }
    let target = metric.distance(x, y);
    let allowed = (0..n)
        .map(|i| (0..n).map(|j| metric.distance(i, j) == target).collect())
        .collect();
    let problem = CouplingProblem::new(alpha, beta, allowed, eps)?;
    Ok(problem.solve())
}

/// Residual-graph max flow with deterministic edge ordering; augmenting
/// paths are found by breadth-first search, so each round uses a shortest
/// path and the whole run is reproducible.
struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<f64>,
    initial_cap: Vec<f64>,
}

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
            initial_cap: Vec::new(),
        }
    }

    /// Adds a forward edge and its zero-capacity reverse; returns the
    /// forward edge id.
    fn add_edge(&mut self, u: usize, v: usize, cap: f64) -> usize {
        let e = self.to.len();
        self.to.push(v);
        self.cap.push(cap);
        self.initial_cap.push(cap);
        self.adj[u].push(e);
        self.to.push(u);
        self.cap.push(0.0);
        self.initial_cap.push(0.0);
        self.adj[v].push(e + 1);
        e
    }

    fn flow_on(&self, e: usize) -> f64 {
        self.initial_cap[e] - self.cap[e]
    }

    fn max_flow(&mut self, source: usize, sink: usize) -> f64 {
        let mut total = 0.0;
        loop {
            let parent = self.bfs(source, sink);
            if parent[sink] == usize::MAX {
                return total;
            }
            let mut bottleneck = f64::INFINITY;
            let mut v = sink;
            while v != source {
                let e = parent[v];
                bottleneck = bottleneck.min(self.cap[e]);
                v = self.to[e ^ 1];
            }
            let mut v = sink;
            while v != source {
                let e = parent[v];
                self.cap[e] -= bottleneck;
                self.cap[e ^ 1] += bottleneck;
                v = self.to[e ^ 1];
            }
            total += bottleneck;
        }
    }

    /// Parent edge of every node on some shortest residual path from
    /// `source`, stopping early at `sink`.
    fn bfs(&self, source: usize, sink: usize) -> Vec<usize> {
        let mut parent = vec![usize::MAX; self.adj.len()];
        let mut visited = vec![false; self.adj.len()];
        visited[source] = true;
        let mut queue = std::collections::VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if !visited[v] && self.cap[e] > 0.0 {
                    visited[v] = true;
                    parent[v] = e;
                    if v == sink {
                        return parent;
                    }
                    queue.push_back(v);
                }
            }
        }
        parent
    }

    fn residual_reachable(&self, source: usize) -> Vec<bool> {
        let mut visited = vec![false; self.adj.len()];
        visited[source] = true;
        let mut queue = std::collections::VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if !visited[v] && self.cap[e] > 0.0 {
                    visited[v] = true;
                    queue.push_back(v);
                }
            }
        }
        visited
    }
}
