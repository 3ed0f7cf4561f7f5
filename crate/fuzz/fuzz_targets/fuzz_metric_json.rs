//! Fuzzes the metric-space JSON parser, then checks structural invariants
//! on whatever validates: distance levels start at zero and are strictly
//! sorted, spheres partition the space, and the Lipschitz seminorm of a
//! distance function reaches 1.

#![no_main]
use libfuzzer_sys::fuzz_target;
use qmi::metric::FiniteMetricSpace;

const MAX_INPUT: usize = 64 * 1024;

fuzz_target!(|data: &[u8]| {
    if data.len() > MAX_INPUT {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(metric) = FiniteMetricSpace::from_json_str(text) else {
        return;
    };

    let levels = metric.distance_levels();
    assert_eq!(levels.values().first(), Some(&0.0));
    assert!(levels.values().windows(2).all(|w| w[0] < w[1]));

    for i in 0..metric.n() {
        let mut seen = vec![false; metric.n()];
        for gamma in 0..levels.count() {
            for j in metric.sphere(i, gamma).expect("in-range sphere") {
                assert!(!seen[j], "spheres must be disjoint");
                seen[j] = true;
            }
        }
        assert!(seen.iter().all(|&s| s), "spheres must cover the space");
    }

    if metric.n() >= 2 {
        let f = metric.distance_function(0).expect("point 0 exists");
        // the pair (x, 0) realizes ratio exactly 1; slack-validated inputs
        // may push the sup slightly past it
        assert!(metric.lipnorm(&f).expect("length matches") >= 1.0);
    }
});
