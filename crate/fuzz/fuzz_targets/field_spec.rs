#![no_main]
use libfuzzer_sys::fuzz_target;
use mgw_core::scalar::FieldSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = FieldSpec::parse(text) {
        // display/parse round-trip
        assert_eq!(FieldSpec::parse(&f.to_string()).unwrap(), f);
    }
});
