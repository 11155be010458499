#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(g) = mposym::io::parse_group(s) {
            for a in 0..g.order() {
                assert_eq!(g.op(a, g.inv(a)), 0);
            }
        }
    }
});
