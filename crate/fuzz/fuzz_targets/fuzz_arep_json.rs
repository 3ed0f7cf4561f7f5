//! Fuzzes the representation JSON parser for the M2 ⊕ C ⊕ C example.
//! Accepted representations must preserve the trace functional and induce
//! an idempotent image on the first matrix unit, both of which follow from
//! the validated relations.

#![no_main]
use libfuzzer_sys::fuzz_target;
use qmi::m2cc::{trace_preservation_check, ARep, Coaction, TripleElement};

const MAX_INPUT: usize = 64 * 1024;
const EPS: f64 = 1e-9;

fuzz_target!(|data: &[u8]| {
    if data.len() > MAX_INPUT {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(rep) = ARep::from_json_str(text, EPS) else {
        return;
    };

    assert!(trace_preservation_check(&rep, 1e-6));

    let coaction = Coaction::new(&rep);
    let e11 = coaction.apply(&TripleElement::matrix_unit(0, 0));
    assert!(e11.mul(&e11).approx_eq(&e11, 1e-5));

    let unit = coaction.apply(&TripleElement::unit());
    let pushed = unit
        .pushforward(&qmi::matrix::State::normalized_trace(rep.dim()))
        .expect("dimensions match");
    assert!(pushed.approx_eq(&TripleElement::unit(), 1e-6));
});
