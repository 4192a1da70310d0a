#![no_main]
//! Fuzz the exact-rational scalar grammar ("n", "n/d") and finite-field
//! coefficient handling by embedding arbitrary strings into otherwise valid
//! documents.

use libfuzzer_sys::fuzz_target;
use serde_json::json;
use wittforms::cli::{emit_document, parse_value};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let doc = json!({
        "field": {"kind": "Q"},
        "form": {"type": "quadratic", "diag": [text, "2"]}
    });
    if let Ok(parsed) = parse_value(&doc) {
        // accepted scalars must canonicalize stably
        let emitted = emit_document(&parsed);
        let reparsed = parse_value(&emitted).expect("canonical form must parse");
        assert_eq!(parsed.form, reparsed.form);
    }
    // the same string as a finite-field scalar
    let doc = json!({
        "field": {"kind": "GF", "p": 5, "k": 2},
        "form": {"type": "quadratic", "diag": [text, 2]}
    });
    let _ = parse_value(&doc);
});
