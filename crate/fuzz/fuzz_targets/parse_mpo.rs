#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(t) = mposym::io::parse_mpo(s) {
            // whatever decodes must encode and decode to the same tensor
            let again = mposym::io::parse_mpo(&mposym::io::mpo_to_json(&t, None).unwrap()).unwrap();
            assert_eq!(again.bond(), t.bond());
        }
    }
});
