#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(p) = mposym::io::parse_prebialgebra(s) {
            if p.dim() <= 16 {
                let _ = mposym::prebialgebra::check_axioms(&p, 1e-9);
            }
        }
    }
});
