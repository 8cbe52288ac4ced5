#![no_main]

use libfuzzer_sys::fuzz_target;
use rcf::cli::parse_primes;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(primes) = parse_primes(text) {
            assert!(!primes.is_empty());
            assert!(primes.windows(2).all(|w| w[0] < w[1]));
        }
    }
});
