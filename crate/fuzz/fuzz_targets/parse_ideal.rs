//! Bracketed generator lists must parse or fail cleanly; on success the
//! resulting ideal is exercised through a few total operations.

#![no_main]

use kcech::monomial::{default_var_names, CyclicModule};
use kcech::parse::parse_ideal;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let names = default_var_names(3);
        if let Ok(ideal) = parse_ideal(text, &names) {
            let _ = ideal.is_proper_nonzero();
            let _ = ideal.radical();
            let _ = CyclicModule::new(ideal).krull_dim();
        }
    }
});
