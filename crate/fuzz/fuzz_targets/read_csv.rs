//! Result tables: the reader never panics and its output format is a
//! fixed point after one pass.

#![no_main]

use coupler::csv::read_csv;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 64 * 1024 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(table) = read_csv(text) {
        let once = table.to_csv_string();
        let reread = read_csv(&once).expect("written table must read back");
        assert_eq!(reread.to_csv_string(), once);
    }
});
