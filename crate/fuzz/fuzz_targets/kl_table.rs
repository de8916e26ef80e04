#![no_main]
use libfuzzer_sys::fuzz_target;
use mgw_core::cache::parse_kl_table;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(table) = parse_kl_table(text) {
        // a decoded table re-encodes without panicking
        let _ = serde_json::to_string(&table).unwrap();
    }
});
