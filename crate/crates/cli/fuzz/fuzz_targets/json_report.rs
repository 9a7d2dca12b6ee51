#![no_main]

use libfuzzer_sys::fuzz_target;

// anything the reader accepts must re-emit as a fixed point
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(report) = fraccount_cli::parse_report(text) {
        let once = report.to_json();
        let again = fraccount_cli::parse_report(&once).expect("emitted report must parse");
        assert_eq!(again.to_json(), once);
        let _ = report.to_csv();
    }
});
