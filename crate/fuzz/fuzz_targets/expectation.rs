#![no_main]

use capline_cli::Expectation;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|json: &str| {
    if let Ok(expectation) = Expectation::parse(json) {
        assert!(expectation.validate().is_ok());
    }
});
