#![no_main]
//! Fuzz the JSON document parser: arbitrary bytes must never panic, and any
//! accepted document must survive a canonical emit/reparse round trip.

use libfuzzer_sys::fuzz_target;
use wittforms::cli::{emit_document, parse_document, parse_value};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(parsed) = parse_document(text) else {
        return;
    };
    // canonical emission reparses to the same objects
    let emitted = emit_document(&parsed);
    let reparsed = parse_value(&emitted).expect("canonical emission must parse");
    assert_eq!(parsed.field, reparsed.field);
    assert_eq!(parsed.algebra, reparsed.algebra);
    assert_eq!(parsed.form, reparsed.form);
    assert_eq!(parsed.form2, reparsed.form2);
    // and the emission is a fixed point
    let twice = emit_document(&reparsed);
    assert_eq!(
        serde_json::to_string(&emitted).unwrap(),
        serde_json::to_string(&twice).unwrap()
    );
});
