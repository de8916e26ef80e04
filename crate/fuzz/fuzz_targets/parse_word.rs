#![no_main]
use libfuzzer_sys::fuzz_target;
use mgw_core::rootdata::build_root_datum;
use mgw_core::weyl::AffineWeyl;

thread_local! {
    // the group caches Bruhat queries in a RefCell, so keep it thread-local
    static GROUP: AffineWeyl = AffineWeyl::new(build_root_datum("A2").unwrap());
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    GROUP.with(|g| {
        if let Ok(w) = g.parse_word(text) {
            // a successful parse must round-trip through the canonical word
            let canonical = g.word_string(&w);
            assert_eq!(g.parse_word(&canonical).unwrap(), w);
            assert_eq!(g.reduced_word(&w).len(), g.length(&w));
        }
    });
});
