//! Fuzzes the density-matrix JSON parser. Every accepted state must give
//! unit weight to the identity and survive conjugation by the identity.

#![no_main]
use libfuzzer_sys::fuzz_target;
use qmi::matrix::{CMatrix, State};

const MAX_INPUT: usize = 64 * 1024;
const EPS: f64 = 1e-9;

fuzz_target!(|data: &[u8]| {
    if data.len() > MAX_INPUT {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(state) = State::from_json_str(text, EPS) else {
        return;
    };

    let id = CMatrix::identity(state.dim());
    let unit = state.expect(&id).expect("dimensions match");
    assert!((unit.re - 1.0).abs() <= 1e-9 && unit.im.abs() <= 1e-9);

    let conj = state
        .conjugate_by(&id, EPS)
        .expect("identity never annihilates");
    assert!(conj.rho().approx_eq(state.rho(), 1e-9));
});
