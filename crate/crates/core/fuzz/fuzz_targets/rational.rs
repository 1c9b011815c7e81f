#![no_main]

use costshare::rational;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = rational::parse(text) {
        assert_eq!(rational::parse(&rational::format(&r)).unwrap(), r);
    }
});
