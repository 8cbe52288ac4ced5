#![no_main]

use libfuzzer_sys::fuzz_target;
use rcf::polyfield::{self, IntPolynomial};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(p) = text.parse::<IntPolynomial>() else { return };
    let again: IntPolynomial = p.to_coeff_string().parse().expect("printed form parses");
    assert_eq!(again, p);
    if p.degree() <= 8 && p.coeffs_asc().iter().all(|c| c.bits() <= 64) {
        if let Ok(t) = polyfield::substitute_ix(&p) {
            let _ = polyfield::real_root_count(&t);
            if let Ok(g) = polyfield::even_part(&t) {
                let _ = polyfield::has_sqrt_subfield(&g, 7);
            }
        }
    }
});
