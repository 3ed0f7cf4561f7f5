//! Reference instances: a small corpus of finite metric spaces, the
//! five-point coupling sets used throughout the transport tests, and the
//! canonical genuinely-quantum four-point grid inputs.
//!
//! These are desk-scale fixtures exercised by the test and acceptance
//! suites; they are exported so CLI users can reproduce the same runs.

use num_complex::Complex64;

use crate::matrix::CMatrix;
use crate::metric::FiniteMetricSpace;

fn space(d: &[&[f64]]) -> FiniteMetricSpace {
    let rows: Vec<Vec<f64>> = d.iter().map(|r| r.to_vec()).collect();
    FiniteMetricSpace::validate(&rows).expect("corpus metric must validate")
}

/// One point.
pub fn point1() -> FiniteMetricSpace {
    space(&[&[0.0]])
}

/// Two points at distance 1.
pub fn pair1() -> FiniteMetricSpace {
    space(&[&[0.0, 1.0], &[1.0, 0.0]])
}

/// Two points at distance 2.
pub fn pair2() -> FiniteMetricSpace {
    space(&[&[0.0, 2.0], &[2.0, 0.0]])
}

/// Equilateral triangle, side 1.
pub fn equilateral3() -> FiniteMetricSpace {
    space(&[&[0.0, 1.0, 1.0], &[1.0, 0.0, 1.0], &[1.0, 1.0, 0.0]])
}

/// Three-point path: d(1,2) = d(2,3) = 1, d(1,3) = 2.
pub fn path3() -> FiniteMetricSpace {
    space(&[&[0.0, 1.0, 2.0], &[1.0, 0.0, 1.0], &[2.0, 1.0, 0.0]])
}

/// Scalene triangle with sides 2, 3, 4; trivial isometry group.
pub fn scalene3() -> FiniteMetricSpace {
    space(&[&[0.0, 2.0, 3.0], &[2.0, 0.0, 4.0], &[3.0, 4.0, 0.0]])
}

/// Two 2-point clusters: d(1,2) = d(3,4) = 1, every cross distance 2.
pub fn two_cluster4() -> FiniteMetricSpace {
    space(&[
        &[0.0, 1.0, 2.0, 2.0],
        &[1.0, 0.0, 2.0, 2.0],
        &[2.0, 2.0, 0.0, 1.0],
        &[2.0, 2.0, 1.0, 0.0],
    ])
}

/// Skewed clusters: d(1,2) = d(3,4) = 1, d(1,3) = d(2,4) = 2,
/// d(1,4) = d(2,3) = 3.
pub fn skew4() -> FiniteMetricSpace {
    space(&[
        &[0.0, 1.0, 2.0, 3.0],
        &[1.0, 0.0, 3.0, 2.0],
        &[2.0, 3.0, 0.0, 1.0],
        &[3.0, 2.0, 1.0, 0.0],
    ])
}

/// Shortest-path metric of the 4-cycle.
pub fn cycle4() -> FiniteMetricSpace {
    space(&[
        &[0.0, 1.0, 2.0, 1.0],
        &[1.0, 0.0, 1.0, 2.0],
        &[2.0, 1.0, 0.0, 1.0],
        &[1.0, 2.0, 1.0, 0.0],
    ])
}

/// Five-point path: d(i,j) = |i - j|.
pub fn path5() -> FiniteMetricSpace {
    let rows: Vec<Vec<f64>> = (0..5)
        .map(|i| (0..5).map(|j| (i as f64 - j as f64).abs()).collect())
        .collect();
    FiniteMetricSpace::validate(&rows).expect("corpus metric must validate")
}

/// Shortest-path metric of the 5-cycle.
pub fn cycle5() -> FiniteMetricSpace {
    let rows: Vec<Vec<f64>> = (0..5usize)
        .map(|i| {
            (0..5usize)
                .map(|j| {
                    let diff = (i as i64 - j as i64).rem_euclid(5);
                    diff.min(5 - diff) as f64
                })
                .collect()
        })
        .collect();
    FiniteMetricSpace::validate(&rows).expect("corpus metric must validate")
}

/// Two 3-point clusters: distance 1 inside a cluster, 2 across.
pub fn two_triangles6() -> FiniteMetricSpace {
    let rows: Vec<Vec<f64>> = (0..6usize)
        .map(|i| {
            (0..6usize)
                .map(|j| {
                    if i == j {
                        0.0
                    } else if i / 3 == j / 3 {
                        1.0
                    } else {
                        2.0
                    }
                })
                .collect()
        })
        .collect();
    FiniteMetricSpace::validate(&rows).expect("corpus metric must validate")
}

/// The full metric corpus, smallest spaces first.
pub fn metric_corpus() -> Vec<FiniteMetricSpace> {
    vec![
        point1(),
        pair1(),
        pair2(),
        equilateral3(),
        path3(),
        scalene3(),
        two_cluster4(),
        skew4(),
        cycle4(),
        path5(),
        cycle5(),
        two_triangles6(),
    ]
}

/// Corpus spaces with at most `max_n` points.
pub fn metric_corpus_up_to(max_n: usize) -> Vec<FiniteMetricSpace> {
    metric_corpus()
        .into_iter()
        .filter(|m| m.n() <= max_n)
        .collect()
}

/// The five-point coupling sets V_1 = {2}, V_2 = {1}, V_3 = ∅, V_4 = {5},
/// V_5 = {4} (1-based), as an `allowed` relation.
pub fn five_point_allowed() -> Vec<Vec<bool>> {
    let mut allowed = vec![vec![false; 5]; 5];
    allowed[0][1] = true;
    allowed[1][0] = true;
    allowed[3][4] = true;
    allowed[4][3] = true;
    allowed
}

/// Rank-one projection `(1/2) * ones(2)` — does not commute with
/// `diag(1, 0)`.
pub fn projection_half_ones() -> CMatrix {
    CMatrix::from_fn(2, 2, |_, _| Complex64::new(0.5, 0.0))
}

/// The projection `diag(1, 0)`.
pub fn projection_diag10() -> CMatrix {
    CMatrix::diag(&[1.0, 0.0])
}
