#![no_main]

use libfuzzer_sys::fuzz_target;
use ordlab::Ordinal;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(x) = text.parse::<Ordinal>() {
        let printed = x.to_string();
        assert_eq!(printed.parse::<Ordinal>().unwrap(), x);
        if let Some(s) = x.checked_add(&Ordinal::one()) {
            assert!(s > x);
        }
    }
});
