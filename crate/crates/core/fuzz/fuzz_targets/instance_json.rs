#![no_main]

use costshare::Instance;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(inst) = Instance::from_json(text) {
        let again = Instance::from_json(&inst.to_json()).expect("emitted instance reloads");
        assert_eq!(again.to_json(), inst.to_json());
    }
});
