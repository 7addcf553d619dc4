#![no_main]

use doob_mds::format::{parse_any, parse_json, to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(c) = parse_json(s) {
        let again = parse_json(&to_json(&c)).expect("printed code parses");
        assert_eq!(again.words(), c.words());
    }
    let _ = parse_any(s);
});
