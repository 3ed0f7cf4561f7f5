//! Fuzzes the complex-function parser and runs the Lipschitz seminorm on
//! an equilateral space of matching size.

#![no_main]
use libfuzzer_sys::fuzz_target;
use qmi::json::parse_complex_vec;
use qmi::metric::FiniteMetricSpace;

const MAX_INPUT: usize = 16 * 1024;

fuzz_target!(|data: &[u8]| {
    if data.len() > MAX_INPUT {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(f) = parse_complex_vec(text) else {
        return;
    };
    if f.is_empty() || f.len() > 64 {
        return;
    }
    let n = f.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
        .collect();
    let metric = FiniteMetricSpace::validate(&rows).expect("equilateral is a metric");
    // entries are finite, but differences may overflow; the seminorm is
    // still nonnegative
    assert!(metric.lipnorm(&f).expect("length matches") >= 0.0);
});
