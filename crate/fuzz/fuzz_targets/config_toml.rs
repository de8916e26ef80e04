#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    // the CLI accepts arbitrary TOML tables and reads a known field subset;
    // decoding must never panic
    let _ = toml::from_str::<toml::Table>(text);
});
