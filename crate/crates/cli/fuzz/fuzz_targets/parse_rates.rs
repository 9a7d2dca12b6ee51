#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(rates) = fraccount_cli::parse_rates(text) {
        assert!(!rates.is_empty());
        assert!(rates.iter().all(|r| r.is_finite() && *r > 0.0));
        assert_eq!(rates.len(), text.split(',').count());
    }
});
