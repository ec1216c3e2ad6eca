//! Scenario files never panic the parser, and accepted ones survive
//! serialization unchanged.

#![no_main]

use coupler::parse_scenario;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 16 * 1024 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = parse_scenario(text) {
        let again = parse_scenario(&cfg.to_toml()).expect("serialized scenario must parse");
        assert_eq!(again, cfg);
    }
});
