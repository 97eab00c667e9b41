#![no_main]

use libfuzzer_sys::fuzz_target;
use rhlab::runner::Scenario;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = Scenario::from_toml(text) {
        assert!(!s.checks.is_empty());
        assert!(s.samples.count >= 1);
        assert!(s.tolerances.values().all(|t| *t > 0.0 && t.is_finite()));
        let _ = s.instance.instance_type();
    }
});
