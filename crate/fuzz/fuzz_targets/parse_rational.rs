#![no_main]

use catmeas_core::rational::{format_rational, parse_rational};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(r) = parse_rational(text) {
            let shown = format_rational(&r);
            assert_eq!(parse_rational(&shown).ok(), Some(r));
        }
    }
});
