//! Fuzzes the magic-unitary JSON parser. Validated grids are exercised
//! through the antipode, the uniform-functional check, and the two-route
//! commutation check against an equilateral metric of matching size.

#![no_main]
use libfuzzer_sys::fuzz_target;
use qmi::magic::MagicUnitary;
use qmi::metric::FiniteMetricSpace;

const MAX_INPUT: usize = 64 * 1024;
const EPS: f64 = 1e-9;

fuzz_target!(|data: &[u8]| {
    if data.len() > MAX_INPUT {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(magic) = MagicUnitary::from_json_str(text, EPS) else {
        return;
    };

    assert_eq!(magic.antipode().antipode(), magic);

    let n = magic.n();
    let uniform = vec![1.0 / n as f64; n];
    assert!(magic
        .preserves_functional(&uniform, EPS)
        .expect("length matches"));

    let equilateral: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
        .collect();
    let metric = FiniteMetricSpace::validate(&equilateral).expect("equilateral is a metric");
    // near tolerance boundaries the two routes may legitimately disagree,
    // which is a reported error, never a panic
    let _ = magic.check_commutation(&metric, EPS);
});
