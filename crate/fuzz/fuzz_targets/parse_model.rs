#![no_main]

use catmeas_cli::parse_model_str;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Err(e) = parse_model_str(text) {
            // every error must render and point inside the document
            let _ = e.to_string();
            assert!(e.line >= 1 && e.column >= 1);
        }
    }
});
