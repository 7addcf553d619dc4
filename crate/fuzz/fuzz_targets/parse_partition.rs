#![no_main]

use doob_mds::cocliques::{classify_partition, CocliquePartition};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = CocliquePartition::parse(s) {
        let again = CocliquePartition::parse(&p.to_string()).expect("printed partition parses");
        assert_eq!(again, p);
        let _ = classify_partition(&p);
    }
});
