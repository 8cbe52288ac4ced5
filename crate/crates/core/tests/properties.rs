// SPDX-License-Identifier: Apache-2.0

use num_bigint::BigInt;
use proptest::prelude::*;

use rcf::arith::{self, census_from_orders, invariants_from_census, kronecker, FiniteAbelianGroup};
use rcf::lmfdb::{CacheDocument, NewformQuery, NewformRecord};
use rcf::pairsearch::{
    audit_minimality, search_pair_logged, verify_pair, SearchBounds, SearchPolicy,
};
use rcf::polyfield::{substitute_ix, IntPolynomial};
use rcf::qform::{is_equivalent, reduce_definite, BinaryQuadraticForm};

/// Orders of all elements of `Z/n₁ × … × Z/n_k`.
fn element_orders(factors: &[u64]) -> Vec<u64> {
    let mut orders = vec![1u64];
    for &n in factors {
        let mut next = Vec::new();
        for &o in &orders {
            for x in 0..n {
                let ox = n / num_integer::gcd(x, n);
                next.push(num_integer::lcm(o, ox));
            }
        }
        orders = next;
    }
    orders
}

fn primes_3_mod_4() -> Vec<u64> {
    (3..200)
        .filter(|&p| p % 4 == 3 && arith::is_prime(p))
        .collect()
}

proptest! {
    #[test]
    fn normalized_groups_form_a_divisor_chain(factors in prop::collection::vec(1u64..40, 0..4)) {
        let g = FiniteAbelianGroup::from_cyclic_factors(&factors);
        prop_assert_eq!(g.order(), factors.iter().product::<u64>());
        let inv = g.invariant_factors();
        prop_assert!(inv.iter().all(|&d| d >= 2));
        prop_assert!(inv.windows(2).all(|w| w[1] % w[0] == 0));
    }

    #[test]
    fn census_recovers_the_group(factors in prop::collection::vec(1u64..13, 0..3)) {
        let g = FiniteAbelianGroup::from_cyclic_factors(&factors);
        let census = census_from_orders(element_orders(&factors), g.order()).unwrap();
        prop_assert_eq!(&census, &g.census());
        prop_assert_eq!(invariants_from_census(&census, g.order()).unwrap(), g);
    }

    #[test]
    fn kronecker_is_multiplicative_in_the_modulus(a in -500i64..500, m in 1i64..200, n in 1i64..200) {
        let (m, n) = (2 * m - 1, 2 * n - 1);
        prop_assert_eq!(
            kronecker(a, m * n).unwrap(),
            kronecker(a, m).unwrap() * kronecker(a, n).unwrap()
        );
    }

    #[test]
    fn definite_reduction_witness(a in 1i64..300, b in -300i64..300, c in 1i64..300) {
        prop_assume!(b * b - 4 * a * c < 0);
        prop_assume!(num_integer::gcd(num_integer::gcd(a, b), c) == 1);
        let f = BinaryQuadraticForm::new(a, b, c).unwrap();
        let (r, m) = reduce_definite(&f).unwrap();
        prop_assert!(r.is_reduced_definite());
        prop_assert_eq!(m.determinant(), 1);
        prop_assert_eq!(f.act(&m).unwrap(), r);
        prop_assert!(is_equivalent(&f, &r).unwrap());
    }

    #[test]
    fn polynomial_text_round_trips(coeffs in prop::collection::vec(-1000i64..1000, 1..10)) {
        prop_assume!(coeffs[0] != 0);
        let text = coeffs.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        let p: IntPolynomial = text.parse().unwrap();
        prop_assert_eq!(p.to_coeff_string(), text.clone());
        let json = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<IntPolynomial>(&json).unwrap(), p);
    }

    #[test]
    fn imaginary_substitution_is_an_involution(half in prop::collection::vec(-50i64..50, 1..6)) {
        prop_assume!(half[0] > 0);
        // x ↦ ix twice is x ↦ −x, which fixes even polynomials
        let desc: Vec<BigInt> = half
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| {
                let mut v = vec![BigInt::from(c)];
                if i + 1 < half.len() {
                    v.push(BigInt::from(0));
                }
                v
            })
            .collect();
        let p = IntPolynomial::from_desc(desc).unwrap();
        let twice = substitute_ix(&substitute_ix(&p).unwrap()).unwrap();
        prop_assert_eq!(twice, p);
    }

    #[test]
    fn cache_documents_round_trip(
        level in 11u64..5000,
        dims in prop::collection::vec(1u64..6, 0..4),
        cm in any::<bool>(),
    ) {
        let records: Vec<NewformRecord> = dims
            .iter()
            .enumerate()
            .map(|(i, &dim)| NewformRecord {
                label: format!("{level}.2.a.{i}"),
                level,
                weight: 2,
                dimension: dim,
                field_poly: Some(
                    IntPolynomial::from_desc((0..=dim).map(|k| BigInt::from(k as i64 + 1))).unwrap(),
                ),
                self_twist_discs: if cm { vec![-7] } else { vec![] },
                is_cm: cm,
            })
            .collect();
        let doc = CacheDocument {
            query: NewformQuery { level, weight: 2 },
            retrieved_at: "2026-01-01T00:00:00Z".into(),
            note: None,
            records,
        };
        let text = doc.encode();
        let back = CacheDocument::decode(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(back.encode(), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn searched_pairs_verify_and_are_minimal(
        idx in 0usize..40,
        f1_max in 2u64..25,
        f2_max in 2u64..12,
        policy in prop_oneof![
            Just(SearchPolicy::F1ThenF2),
            Just(SearchPolicy::F2ThenF1),
            Just(SearchPolicy::MinMax),
        ],
    ) {
        let primes = primes_3_mod_4();
        let p = primes[idx % primes.len()];
        let (result, log) = search_pair_logged(p, SearchBounds { f1_max, f2_max }, policy);
        match result {
            Ok(pair) => {
                let check = verify_pair(p, pair.f1, pair.f2).unwrap();
                prop_assert!(check.matches);
                prop_assert!(!pair.group.is_trivial());
                prop_assert_eq!(check.real, pair.group);
                audit_minimality(&log, Some((pair.f1, pair.f2))).unwrap();
            }
            Err(_) => audit_minimality(&log, None).unwrap(),
        }
    }
}
