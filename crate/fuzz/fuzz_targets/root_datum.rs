#![no_main]
use libfuzzer_sys::fuzz_target;
use mgw_core::rootdata::build_root_datum;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(d) = build_root_datum(text) {
        assert_eq!(d.cartan.len(), d.rank);
        assert!(d.coxeter_number >= 2);
    }
});
