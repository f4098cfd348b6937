use std::path::PathBuf;

use wordrank::{figures, ChainSpec};

#[test]
fn chain_files_match_builders() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("chains");
    for (name, spec) in figures::bundled() {
        let loaded = ChainSpec::load(dir.join(format!("{name}.json")))
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(loaded, spec, "{name}");
        assert!(loaded.validate().is_ok(), "{name}");
    }
}

#[test]
fn json_round_trip() {
    for (name, spec) in figures::bundled() {
        let back = ChainSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec, "{name}");
    }
}
