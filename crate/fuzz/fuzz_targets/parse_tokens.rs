#![no_main]

use doob_mds::algebra::{Z4Pair, Z4};
use doob_mds::format::parse_word;
use doob_mds::graphs::DoobParams;
use doob_mds::search::SymmetryMode;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&sel, rest)) = data.split_first() else { return };
    let Ok(s) = std::str::from_utf8(rest) else { return };
    if let Ok(x) = s.parse::<Z4Pair>() {
        assert_eq!(x.to_string().parse::<Z4Pair>().ok(), Some(x));
    }
    let _ = s.parse::<Z4>();
    let _ = s.parse::<SymmetryMode>();
    let p = DoobParams::new((sel & 3) as usize, (sel >> 2 & 7) as usize);
    let _ = parse_word(p, s, 1);
});
