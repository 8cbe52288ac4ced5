#![no_main]

use libfuzzer_sys::fuzz_target;
use rcf::lmfdb::CacheDocument;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(doc) = CacheDocument::decode(text) {
        let encoded = doc.encode();
        assert_eq!(CacheDocument::decode(&encoded).expect("re-decodes"), doc);
    }
});
