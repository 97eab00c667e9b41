#![no_main]

use libfuzzer_sys::fuzz_target;
use rhlab::runner::{to_csv, to_json, to_markdown, RunReport};

fuzz_target!(|data: &[u8]| {
    let Ok(report) = serde_json::from_slice::<RunReport>(data) else { return };
    let _ = report.recompute_verdicts();
    let _ = to_markdown(&report);
    let _ = to_csv(&report);
    if let Ok(text) = to_json(&report) {
        let again: RunReport = serde_json::from_str(&text).expect("re-encoded report decodes");
        assert_eq!(to_json(&again).expect("encodes"), text);
    }
});
