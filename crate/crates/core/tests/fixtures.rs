//! Every bundled fixture parses, survives a round trip and runs through its
//! default solver with the oracle switched on.

use multibin::cli::{run_command, EXIT_OK};
use multibin::io;
use serde_json::Value;

#[test]
fn every_fixture_round_trips() {
    assert!(!io::FIXTURES.is_empty());
    for (name, text) in io::FIXTURES {
        let parsed = io::parse_instance(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let emitted = io::emit_instance(&parsed);
        assert_eq!(io::parse_instance(&emitted).unwrap(), parsed, "{name}");
        assert_eq!(
            io::emit_instance(&io::parse_instance(&emitted).unwrap()),
            emitted,
            "{name}"
        );
        assert_eq!(io::digest(&parsed), io::digest(&io::parse_instance(&emitted).unwrap()));
    }
}

#[test]
fn every_fixture_agrees_with_its_oracle() {
    for (name, _) in io::FIXTURES {
        let stem = name.trim_end_matches(".json");
        let out = run_command(["oracle", "--fixture", stem, "--format", "machine"]);
        assert_eq!(out.code, EXIT_OK, "{stem}: {}", out.stderr);
        let report: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(report["oracle"]["agrees"], Value::Bool(true), "{stem}: {}", out.stdout);
    }
}

#[test]
fn short_fixture_names_resolve() {
    for short in ["fig2", "fig8", "fig11", "fig12", "fig13", "fig15", "table13"] {
        assert!(io::fixture(short).is_some(), "{short}");
    }
    assert!(io::fixture("fig99").is_none());
}
