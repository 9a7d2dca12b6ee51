#![no_main]

use libfuzzer_sys::fuzz_target;

// NUL-separated argument vector; only the grammar is exercised
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let argv = std::iter::once("fraccount").chain(text.split('\0'));
    if let Err(e) = fraccount_cli::parse_args(argv) {
        let _ = e.render().to_string();
    }
});
