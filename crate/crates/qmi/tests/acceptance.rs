//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

mod common;

use std::time::{Duration, Instant};

use common::{instance_corpus, is_isometry, named_corpus, Instance};
use num_complex::Complex64;
use qmi::group::{isometry_group, Permutation};
use qmi::instances;
use qmi::isometry::{lipdefect, witness_search, CandidateFunction};
use qmi::m2cc::{
    admissibility_check, comult_lift, sample_quotient_rep, sample_scalar_solution_rep,
    trace_preservation_check, ARep, TripleElement,
};
use qmi::magic::MagicUnitary;
use qmi::matrix::{
    sample_cvector, sample_projection, sample_pure_state, sample_unitary, CMatrix, State,
};
use qmi::transport::{coupling_for_pair, CouplingProblem, TransportOutcome};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn conclude(criterion: &str, started: Instant, limit: Option<Duration>, failures: Vec<String>) {
    let elapsed = started.elapsed();
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let ok = failures.is_empty() && in_time;
    println!(
        "criterion {criterion}: {} ({:.2} s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    if !in_time {
        panic!(
            "criterion {criterion} exceeded its runtime budget: {:.2} s > {:.2} s",
            elapsed.as_secs_f64(),
            limit.unwrap().as_secs_f64()
        );
    }
    assert!(
        failures.is_empty(),
        "criterion {criterion} failed ({} cases):\n{}",
        failures.len(),
        failures.join("\n")
    );
}

const CRITERION_EPS: f64 = 1e-8;

#[test]
fn criterion_1_commutation_criteria_agree() {
    let started = Instant::now();
    let corpus = instance_corpus(2024, 1e-9);
    let mut failures = Vec::new();
    assert!(
        corpus.len() >= 200,
        "instance corpus too small: {}",
        corpus.len()
    );
    for Instance {
        name,
        magic,
        metric,
    } in &corpus
    {
        if let Err(e) = magic.check_commutation(metric, CRITERION_EPS) {
            failures.push(format!("{name}: {e}"));
        }
    }
    println!("  instances checked: {}", corpus.len());
    conclude(
        "1 (criterion equivalence)",
        started,
        Some(Duration::from_secs(10)),
        failures,
    );
}

#[test]
fn criterion_2_commuting_instances_contract_and_couple() {
    let started = Instant::now();
    let corpus = instance_corpus(2024, 1e-9);
    let mut failures = Vec::new();
    let mut commuting = 0usize;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for Instance {
        name,
        magic,
        metric,
    } in &corpus
    {
        let report = match magic.check_commutation(metric, CRITERION_EPS) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                continue;
            }
        };
        if !report.commutes {
            continue;
        }
        commuting += 1;
        let n = metric.n();

        let mut states = Vec::new();
        let mut max_defect = f64::NEG_INFINITY;
        for k in 0..200 {
            let omega = sample_pure_state(&mut rng, magic.dim());
            let f = sample_cvector(&mut rng, n);
            match lipdefect(magic, metric, &omega, &f) {
                Ok(defect) => max_defect = max_defect.max(defect),
                Err(e) => failures.push(format!("{name}: defect sample failed: {e}")),
            }
            if k < 3 {
                states.push(omega);
            }
        }
        if max_defect > CRITERION_EPS {
            failures.push(format!("{name}: max defect {max_defect:e}"));
        }

        states.push(State::normalized_trace(magic.dim()));
        for omega in &states {
            for x in 0..n {
                for y in 0..n {
                    match coupling_for_pair(magic, metric, omega, x, y, CRITERION_EPS) {
                        Ok(TransportOutcome::Plan(_)) => {}
                        Ok(TransportOutcome::Infeasible(cert)) => failures.push(format!(
                            "{name}: pair ({}, {}) infeasible, deficit {:e}",
                            x + 1,
                            y + 1,
                            cert.deficit
                        )),
                        Err(e) => failures.push(format!("{name}: pair ({x}, {y}): {e}")),
                    }
                }
            }
        }
    }
    println!("  commuting instances: {commuting}");
    assert!(commuting >= 40, "too few commuting instances: {commuting}");
    conclude(
        "2 (commutation implies 1-isometry)",
        started,
        Some(Duration::from_secs(30)),
        failures,
    );
}

#[test]
fn criterion_3_classical_non_isometries_all_witnessed() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut cases = 0usize;
    for (name, metric) in named_corpus() {
        if metric.n() > 6 {
            continue;
        }
        let iso = isometry_group(&metric);
        for images in common::all_permutations(metric.n()) {
            let p = Permutation::new(images.clone()).expect("valid permutation");
            if iso.contains(&p) {
                continue;
            }
            cases += 1;
            let grid = MagicUnitary::from_permutation(&images).expect("valid permutation");
            match witness_search(&grid, &metric, 1e-9, 0, 0) {
                Ok(Some(witness)) => {
                    if witness.defect <= 1e-6 {
                        failures.push(format!(
                            "perm{images:?}@{name}: defect {:e} too small",
                            witness.defect
                        ));
                    }
                    if !matches!(witness.candidate, CandidateFunction::Distance { .. }) {
                        failures.push(format!(
                            "perm{images:?}@{name}: witness is not a distance function: {:?}",
                            witness.candidate
                        ));
                    }
                }
                Ok(None) => failures.push(format!("perm{images:?}@{name}: no witness found")),
                Err(e) => failures.push(format!("perm{images:?}@{name}: {e}")),
            }
        }
    }
    println!("  non-isometric permutations witnessed: {cases}");
    assert!(cases >= 50, "too few cases: {cases}");
    conclude(
        "3 (classical refutation completeness)",
        started,
        None,
        failures,
    );
}

#[test]
fn criterion_4_quantum_witness_reproduction() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let grid = MagicUnitary::two_block_quantum(
        &instances::projection_half_ones(),
        &instances::projection_diag10(),
        1e-9,
    )
    .expect("canonical two-block grid");
    let metric = instances::skew4();
    match witness_search(&grid, &metric, 1e-9, 0, 0) {
        Ok(Some(witness)) => {
            if (witness.defect - 0.25).abs() > 1e-9 {
                failures.push(format!("defect {} != 0.25", witness.defect));
            }
            if witness.candidate != (CandidateFunction::Distance { point: 0 }) {
                failures.push(format!("candidate {:?} is not D_1", witness.candidate));
            }
            // the witness state is the pure (1,1)/sqrt(2) state
            let expected = instances::projection_half_ones();
            if !witness.omega.rho().approx_eq(&expected, 1e-9) {
                failures.push("witness state is not the pure (1,1)/sqrt(2) state".into());
            }
        }
        Ok(None) => failures.push("no witness found".into()),
        Err(e) => failures.push(e.to_string()),
    }
    conclude("4 (quantum witness reproduction)", started, None, failures);
}

#[test]
fn criterion_5_transport_oracle_equivalence() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let rounds = 1000;
    for round in 0..rounds {
        let n = rng.gen_range(1..=6);
        let alpha = random_marginal(&mut rng, n);
        let beta = random_marginal(&mut rng, n);
        let density = rng.gen_range(0.1..0.95);
        let allowed: Vec<Vec<bool>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_bool(density)).collect())
            .collect();
        let problem = match CouplingProblem::new(alpha, beta, allowed, 1e-9) {
            Ok(p) => p,
            Err(e) => {
                failures.push(format!("round {round}: invalid problem: {e}"));
                continue;
            }
        };
        let hall = problem.hall_check();
        match (hall, problem.solve()) {
            (None, TransportOutcome::Plan(plan)) => {
                if let Err(e) = problem.validate_plan(&plan) {
                    failures.push(format!("round {round}: plan invalid: {e}"));
                }
            }
            (Some(cert), TransportOutcome::Infeasible(flow_cert)) => {
                if problem.deficit(&cert.z) <= 0.0 || problem.deficit(&flow_cert.z) <= 0.0 {
                    failures.push(format!("round {round}: certificate deficit not positive"));
                }
            }
            (hall, flow) => failures.push(format!(
                "round {round}: hall {:?} vs flow {:?}",
                hall.map(|c| c.z),
                flow.plan().is_some()
            )),
        }
    }

    // the five-point support sets: infeasible exactly when alpha_3 > 0
    let allowed = instances::five_point_allowed();
    let feasible = CouplingProblem::new(
        vec![0.2, 0.3, 0.0, 0.25, 0.25],
        vec![0.3, 0.2, 0.0, 0.25, 0.25],
        allowed.clone(),
        1e-9,
    )
    .expect("valid marginals");
    if feasible.solve().plan().is_none() || feasible.hall_check().is_some() {
        failures.push("five-point instance with alpha_3 = 0 must be feasible".into());
    }
    let infeasible = CouplingProblem::new(
        vec![0.2, 0.2, 0.2, 0.2, 0.2],
        vec![0.2, 0.2, 0.2, 0.2, 0.2],
        allowed,
        1e-9,
    )
    .expect("valid marginals");
    match infeasible.solve() {
        TransportOutcome::Infeasible(cert) if cert.z.contains(&2) => {}
        other => failures.push(format!(
            "five-point instance with alpha_3 > 0 must be infeasible through point 3, got {other:?}"
        )),
    }
    println!("  random problems: {rounds}");
    conclude("5 (transport oracle equivalence)", started, None, failures);
}

fn random_marginal<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0f64) + 1e-3).collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / sum).collect()
}

#[test]
fn criterion_6_admissible_representations_have_no_defect() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let mut reps: Vec<(String, ARep)> = Vec::new();

    // scalar phases
    for k in 0..10 {
        let theta = 0.37 * k as f64;
        let u = CMatrix::scalar(Complex64::from_polar(1.0, theta));
        let p = CMatrix::diag(&[f64::from(u8::from(k % 2 == 0))]);
        reps.push((
            format!("phase{k}"),
            ARep::quotient(u, p, 1e-9).expect("scalar quotient data"),
        ));
    }
    // 2x2 quotient reps with noncommuting unitary and projection
    let mut built = 0;
    while built < 10 {
        let u = sample_unitary(&mut rng, 2);
        let p = sample_projection(&mut rng, 2, 1);
        let commutator = (&(&u * &p) - &(&p * &u)).max_abs();
        if commutator < 0.05 {
            continue;
        }
        reps.push((
            format!("quotient2x2_{built}"),
            ARep::quotient(u, p, 1e-9).expect("sampled quotient data"),
        ));
        built += 1;
    }
    assert!(reps.len() >= 20);

    for (name, rep) in &reps {
        match admissibility_check(rep, 1000, 13, 1e-9) {
            Ok(report) => {
                if !report.admissible {
                    failures.push(format!("{name}: flagged non-admissible"));
                }
                if report.max_defect > CRITERION_EPS {
                    failures.push(format!("{name}: max defect {:e}", report.max_defect));
                }
            }
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    println!("  representations swept: {}", reps.len());
    conclude(
        "6 (admissible side of the worked example)",
        started,
        Some(Duration::from_secs(60)),
        failures,
    );
}

#[test]
fn criterion_7_non_admissible_scalar_representation() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let c = |re: f64| Complex64::new(re, 0.0);
    // relations must validate at 1e-12
    match ARep::from_scalars(c(0.3), c(0.9), c(-0.1), c(1.0), 1e-12) {
        Ok(rep) => match admissibility_check(&rep, 100, 0, 1e-9) {
            Ok(report) => {
                if report.admissible {
                    failures.push("representation must be non-admissible".into());
                }
                match report.witness {
                    Some(witness) => {
                        if !witness.b.approx_eq(&TripleElement::matrix_unit(0, 1), 0.0) {
                            failures.push("witness element is not e12".into());
                        }
                        if (witness.defect - 1.2).abs() > 1e-9 {
                            failures.push(format!("defect {} != 1.2", witness.defect));
                        }
                    }
                    None => failures.push("no witness reported".into()),
                }
            }
            Err(e) => failures.push(e.to_string()),
        },
        Err(e) => failures.push(format!("relations rejected at 1e-12: {e}")),
    }
    conclude(
        "7 (non-admissible side of the worked example)",
        started,
        None,
        failures,
    );
}

#[test]
fn criterion_8_comultiplication_structure() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(88);

    let mut corpus: Vec<(String, ARep)> = Vec::new();
    for k in 0..30 {
        let dim = rng.gen_range(1..=3);
        corpus.push((
            format!("quotient{k}(d{dim})"),
            sample_quotient_rep(&mut rng, dim),
        ));
    }
    for k in 0..20 {
        let dim = rng.gen_range(1..=2);
        corpus.push((
            format!("scalar_solution{k}(d{dim})"),
            sample_scalar_solution_rep(&mut rng, dim),
        ));
    }

    let mut pairs = 0usize;
    for k in 0..50 {
        let (n1, r1) = &corpus[k % corpus.len()];
        let (n2, r2) = &corpus[(3 * k + 1) % corpus.len()];
        pairs += 1;
        if let Err(e) = comult_lift(r1, r2, 1e-9) {
            failures.push(format!("lift({n1}, {n2}): {e}"));
        }
    }

    for k in 0..10 {
        let r1 = &corpus[k].1;
        let r2 = &corpus[(k + 17) % corpus.len()].1;
        let r3 = &corpus[(k + 31) % corpus.len()].1;
        if r1.dim() * r2.dim() * r3.dim() > 12 {
            continue;
        }
        let left = comult_lift(&comult_lift(r1, r2, 1e-9).expect("lift"), r3, 1e-9).expect("lift");
        let right = comult_lift(r1, &comult_lift(r2, r3, 1e-9).expect("lift"), 1e-9).expect("lift");
        let worst = [
            (left.x(), right.x()),
            (left.y(), right.y()),
            (left.z(), right.z()),
            (left.p(), right.p()),
        ]
        .iter()
        .map(|(a, b)| (*a - *b).max_abs())
        .fold(0.0, f64::max);
        if worst > 1e-9 {
            failures.push(format!("coassociativity off by {worst:e} at triple {k}"));
        }
    }

    for (name, rep) in &corpus {
        if !trace_preservation_check(rep, 1e-9) {
            failures.push(format!("{name}: trace preservation fails"));
        }
    }
    println!("  lift pairs: {pairs}, corpus reps: {}", corpus.len());
    assert!(pairs >= 50);
    conclude(
        "8 (comultiplication structure checks)",
        started,
        None,
        failures,
    );
}

#[test]
fn criterion_9_classical_cross_module_consistency() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut metrics = 0usize;
    for (name, metric) in named_corpus() {
        if metric.n() > 5 {
            continue;
        }
        metrics += 1;
        let iso = isometry_group(&metric);
        for images in common::all_permutations(metric.n()) {
            let p = Permutation::new(images.clone()).expect("valid permutation");
            let grid = MagicUnitary::from_permutation(&images).expect("valid permutation");
            match grid.check_commutation(&metric, 1e-9) {
                Ok(report) => {
                    if report.commutes != iso.contains(&p) {
                        failures.push(format!(
                            "perm{images:?}@{name}: commutes={} but group membership={}",
                            report.commutes,
                            iso.contains(&p)
                        ));
                    }
                    if report.commutes != is_isometry(&metric, &images) {
                        failures.push(format!(
                            "perm{images:?}@{name}: direct distance check disagrees"
                        ));
                    }
                }
                Err(e) => failures.push(format!("perm{images:?}@{name}: {e}")),
            }
        }
    }
    println!("  metrics checked exhaustively: {metrics}");
    assert!(
        metrics >= 10,
        "need at least 10 corpus metrics with n <= 5, got {metrics}"
    );
    conclude(
        "9 (classical cross-module consistency)",
        started,
        None,
        failures,
    );
}
