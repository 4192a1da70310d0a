#![no_main]
//! Fuzz the full command pipeline: a request is a command name on the first
//! line followed by a JSON document. Reports must be produced without
//! panicking and must be deterministic.

use std::str::FromStr;

use libfuzzer_sys::fuzz_target;
use wittforms::cli::{run_command, Command, RunOptions};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Some((head, doc)) = text.split_once('\n') else {
        return;
    };
    let Ok(cmd) = Command::from_str(head.trim()) else {
        return;
    };
    // keep oracle scans tiny so the harness stays fast
    let opts = RunOptions {
        assert_layer: true,
        oracle_bound: 1 << 12,
    };
    let first = run_command(cmd, doc, &opts);
    let second = run_command(cmd, doc, &opts);
    assert_eq!(first.to_json(), second.to_json(), "reports must be stable");
    // every report is valid JSON with the fixed top-level fields
    let value: serde_json::Value = serde_json::from_str(&first.to_json()).unwrap();
    for key in ["input_canonical", "results", "errors", "version"] {
        assert!(value.get(key).is_some(), "missing report field {key}");
    }
});
