//! Monomial text parsing must never panic, whatever the bytes.

#![no_main]

use kcech::monomial::default_var_names;
use kcech::parse::parse_monomial;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        for nvars in [1, 3] {
            let _ = parse_monomial(text, &default_var_names(nvars));
        }
    }
});
