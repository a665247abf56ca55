#![no_main]

use libfuzzer_sys::fuzz_target;
use ordlab::patterns::{verify_certificate, Certificate};
use ordlab::Ordinal;
use serde::Deserialize;

#[derive(Deserialize)]
struct Case {
    alpha: Ordinal,
    beta: Ordinal,
    certificate: Certificate,
}

fuzz_target!(|data: &[u8]| {
    let Ok(case) = serde_json::from_slice::<Case>(data) else {
        return;
    };
    let _ = verify_certificate(&case.certificate, &case.alpha, &case.beta);
    let text = serde_json::to_string(&case.certificate).unwrap();
    assert_eq!(serde_json::from_str::<Certificate>(&text).unwrap(), case.certificate);
});
