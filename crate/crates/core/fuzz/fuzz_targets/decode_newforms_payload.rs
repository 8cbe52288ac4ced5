#![no_main]

use libfuzzer_sys::fuzz_target;
use rcf::lmfdb::decode_api_page;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok((records, _)) = decode_api_page(text) {
            for r in &records {
                r.validate().expect("decoded records are valid");
            }
        }
    }
});
