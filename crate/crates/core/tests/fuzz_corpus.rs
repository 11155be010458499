//! The checked-in fuzz seeds stay decodable (except the deliberately invalid ones).

use std::fs;
use std::path::PathBuf;

use mposym::io;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn check<T>(target: &str, parse: impl Fn(&str) -> mposym::Result<T>) {
    for (name, body) in seeds(target) {
        let r = parse(&body);
        if name.starts_with("not_") {
            assert!(r.is_err(), "{target}/{name} should be rejected");
        } else {
            assert!(r.is_ok(), "{target}/{name}: {:?}", r.err());
        }
    }
}

#[test]
fn seeds_decode() {
    check("parse_mpo", io::parse_mpo);
    check("parse_group", io::parse_group);
    check("parse_cocycle", |s| io::parse_cocycle(s, None));
    check("parse_family", io::parse_family);
    check("parse_fusion", io::parse_fusion);
    check("parse_fusion_set", io::parse_fusion_set);
    check("parse_prebialgebra", io::parse_prebialgebra);
    check("parse_representation", io::parse_representation);
}

#[test]
fn fusion_set_seeds_have_small_residuals() {
    for (name, body) in seeds("parse_fusion_set") {
        let (_, table) = io::parse_fusion_set(&body).unwrap();
        assert!(table.values().all(|s| s.residual < 1e-9), "{name}");
    }
}
