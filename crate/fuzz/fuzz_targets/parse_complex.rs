//! Complex literals: accepted values are finite and format back to
//! an equal value.

#![no_main]

use coupler::scenario::{format_complex, parse_complex};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(z) = parse_complex(text) {
        assert!(z.re.is_finite() && z.im.is_finite());
        assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
    }
});
