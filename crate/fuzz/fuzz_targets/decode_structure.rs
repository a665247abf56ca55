#![no_main]

use libfuzzer_sys::fuzz_target;
use ordlab::model::Structure;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(s) = Structure::from_json(text) {
        assert_eq!(Structure::from_json(&s.to_json()).unwrap(), s);
        s.check_substructure_of(&s).unwrap();
    }
});
