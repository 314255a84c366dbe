//! Instance-file validation must reject arbitrary JSON without panicking.

#![no_main]

use kcech_cli::instance::parse_instance;
use kcech_cli::Overrides;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_instance(text, &Overrides::default());
    }
});
