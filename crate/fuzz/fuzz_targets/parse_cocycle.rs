#![no_main]

use libfuzzer_sys::fuzz_target;
use mposym::models::group::FiniteGroup;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = mposym::io::parse_cocycle(s, None);
        let _ = mposym::io::parse_cocycle(s, Some(&FiniteGroup::cyclic(2)));
    }
});
