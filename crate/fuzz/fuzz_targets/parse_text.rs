#![no_main]

use doob_mds::format::{parse_text, to_text};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(c) = parse_text(s) {
        let again = parse_text(&to_text(&c)).expect("printed code parses");
        assert_eq!(again.words(), c.words());
        let _ = c.min_distance();
    }
});
