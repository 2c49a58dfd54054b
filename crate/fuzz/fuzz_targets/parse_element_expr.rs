#![no_main]

use catmeas_cli::expr::{format_element, parse_element, parse_expr};
use catmeas_core::boolalg::BoolAlg;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let parsed = parse_expr(text);
    let alg = BoolAlg::new(["a", "b", "c"]).expect("distinct atoms");
    match parse_element(&alg, text) {
        Ok(e) => {
            assert!(parsed.is_ok());
            assert_eq!(parse_element(&alg, &format_element(&alg, e)).ok(), Some(e));
        }
        Err(err) => assert!(err.offset <= text.chars().count()),
    }
});
