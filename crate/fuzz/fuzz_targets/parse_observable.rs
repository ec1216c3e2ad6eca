//! Observable entries: accepted ones print back to an equal entry.

#![no_main]

use coupler::scenario::parse_observable;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(obs) = parse_observable(text) {
        assert_eq!(parse_observable(&obs.to_string()).unwrap(), obs);
    }
});
