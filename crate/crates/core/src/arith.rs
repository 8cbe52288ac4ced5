// SPDX-License-Identifier: Apache-2.0

//! Exact integer primitives shared by the form and field code: the Kronecker
//! symbol, trial-division factorization, integer square roots, the
//! `t² − D·u² = ±4` Pell solver and recovery of an abelian group's
//! invariant factors from its exponent census.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest integer [`factor`] accepts.
pub const FACTOR_BOUND: u64 = 1_000_000_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("Kronecker symbol undefined for modulus 0")]
    ZeroModulus,
    #[error("{value} exceeds the trial-division bound {bound}")]
    UnsupportedSize { value: u64, bound: u64 },
    #[error("{0} is not a positive non-square discriminant")]
    BadDiscriminant(i64),
    #[error("inconsistent census: {0}")]
    InconsistentCensus(String),
}

/// Kronecker symbol `(a / n)`.
pub fn kronecker(a: i64, n: i64) -> Result<i32, ArithError> {
    if n == 0 {
        return Err(ArithError::ZeroModulus);
    }
    let mut a = a as i128;
    let mut n = n as i128;
    let mut sign = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            sign = -sign;
        }
    }
    // Factor of two in n.
    let mut twos = 0;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    if twos > 0 {
        if a % 2 == 0 {
            return Ok(0);
        }
        if twos % 2 == 1 {
            let r = a.rem_euclid(8);
            if r == 3 || r == 5 {
                sign = -sign;
            }
        }
    }
    // Jacobi symbol (a / n) for odd positive n.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    Ok(if n == 1 { sign } else { 0 })
}

/// Prime factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub value: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn product(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }

    /// All positive divisors in increasing order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let current = divs.clone();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                divs.extend(current.iter().map(|d| d * pk));
            }
        }
        divs.sort_unstable();
        divs
    }
}

pub fn factor(n: u64) -> Result<Factorization, ArithError> {
    if n > FACTOR_BOUND {
        return Err(ArithError::UnsupportedSize {
            value: n,
            bound: FACTOR_BOUND,
        });
    }
    assert!(n >= 1, "factor requires n >= 1");
    let mut rest = n;
    let mut factors = Vec::new();
    let mut p = 2u64;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { value: n, factors })
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factor(n).map(|f| f.factors == [(n, 1)]).unwrap_or(false)
}

/// `⌊√n⌋`.
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn is_square(n: i128) -> bool {
    n >= 0 && {
        let r = isqrt(n as u128);
        r * r == n as u128
    }
}

/// Minimal positive solution of `t² − D·u² = 4·norm`, `norm = ±1`.
///
/// The unit it describes is `ε = (t + u√D)/2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellSolution {
    pub discriminant: i64,
    pub t: BigInt,
    pub u: BigInt,
    pub norm: i8,
}

impl PellSolution {
    /// `ε` in the basis `1, ω` with `ω = (σ + √D)/2`, `σ = D mod 2`.
    pub fn omega_coordinates(&self, sigma: i64) -> (BigInt, BigInt) {
        // (t + u√D)/2 = (t − uσ)/2 + u·ω
        let x = (&self.t - &self.u * BigInt::from(sigma)) / 2;
        (x, self.u.clone())
    }
}

/// Fundamental solution of `t² − D·u² = ±4` by the continued fraction of
/// `ω = (σ + √D)/2`; the first convergent `p/q` with
/// `(2p − σq)² − D q² = ±4` yields `t = 2p − σq`, `u = q`.
pub fn pell_fundamental(d: i64) -> Result<PellSolution, ArithError> {
    if d <= 0 || d.rem_euclid(4) > 1 || is_square(d as i128) {
        return Err(ArithError::BadDiscriminant(d));
    }
    let sigma = d.rem_euclid(2);
    let dd = BigInt::from(d);
    let root = BigInt::from(isqrt(d as u128) as u64);
    // Complete quotients (P + √D)/Q with Q | D − P².
    let mut p_cf = BigInt::from(sigma);
    let mut q_cf = BigInt::from(2);
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let four = BigInt::from(4);
    loop {
        let a = num_integer::Integer::div_floor(&(&p_cf + &root), &q_cf);
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);

        let t = BigInt::from(2) * &h - BigInt::from(sigma) * &k;
        let value = &t * &t - &dd * &k * &k;
        if value.abs() == four && t.is_positive() {
            let norm = if value.is_negative() { -1 } else { 1 };
            return Ok(PellSolution {
                discriminant: d,
                t,
                u: k,
                norm,
            });
        }
        p_cf = &a * &q_cf - &p_cf;
        q_cf = (&dd - &p_cf * &p_cf) / &q_cf;
    }
}

/// A finite abelian group presented by its invariant factors
/// `d₁ | d₂ | … | d_k`, each at least 2. The empty list is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FiniteAbelianGroup {
    invariant_factors: Vec<u64>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_cyclic_factors(&[n])
    }

    /// Normalizes an arbitrary product of cyclic groups, e.g. `C2 × C3 → [6]`.
    pub fn from_cyclic_factors(orders: &[u64]) -> Self {
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &n in orders {
            assert!(n >= 1, "cyclic factor of order 0");
            if n == 1 {
                continue;
            }
            let fac = factor(n).expect("cyclic factor within trial-division bound");
            for (p, e) in fac.factors {
                by_prime.entry(p).or_default().push(e);
            }
        }
        Self::from_primary(by_prime)
    }

    fn from_primary(mut by_prime: BTreeMap<u64, Vec<u32>>) -> Self {
        let rank = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; rank];
        for (p, exps) in by_prime.iter_mut() {
            exps.sort_unstable();
            let offset = rank - exps.len();
            for (i, &e) in exps.iter().enumerate() {
                factors[offset + i] *= p.pow(e);
            }
        }
        Self {
            invariant_factors: factors,
        }
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    pub fn product(&self, other: &Self) -> Self {
        let mut all = self.invariant_factors.clone();
        all.extend_from_slice(&other.invariant_factors);
        Self::from_cyclic_factors(&all)
    }

    /// Number of elements `x` with `x^k = 1`.
    pub fn count_killed_by(&self, k: u64) -> u64 {
        self.invariant_factors
            .iter()
            .map(|&d| num_integer::gcd(d, k))
            .product()
    }

    /// The full census: `k ↦ #{x : x^k = 1}` for every divisor `k` of the order.
    pub fn census(&self) -> BTreeMap<u64, u64> {
        let order = self.order();
        factor(order)
            .expect("group order within trial-division bound")
            .divisors()
            .into_iter()
            .map(|k| (k, self.count_killed_by(k)))
            .collect()
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("trivial");
        }
        let parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}Z"))
            .collect();
        f.write_str(&parts.join("+"))
    }
}

/// Census from the orders of all elements of a group of order `group_order`.
pub fn census_from_orders(
    orders: impl IntoIterator<Item = u64>,
    group_order: u64,
) -> Result<BTreeMap<u64, u64>, ArithError> {
    let divisors = factor(group_order)?.divisors();
    let mut census: BTreeMap<u64, u64> = divisors.iter().map(|&k| (k, 0)).collect();
    for ord in orders {
        if ord == 0 || !group_order.is_multiple_of(ord) {
            return Err(ArithError::InconsistentCensus(format!(
                "element order {ord} does not divide {group_order}"
            )));
        }
        for &k in &divisors {
            if k % ord == 0 {
                *census.get_mut(&k).unwrap() += 1;
            }
        }
    }
    Ok(census)
}

/// The unique abelian group whose counts `#{x : x^k = 1}` match `census`.
///
/// Only prime-power keys dividing `group_order` are consulted, together with
/// `census[1] = 1` and `census[order] = order`.
pub fn invariants_from_census(
    census: &BTreeMap<u64, u64>,
    group_order: u64,
) -> Result<FiniteAbelianGroup, ArithError> {
    let bad = |msg: String| Err(ArithError::InconsistentCensus(msg));
    if group_order == 0 {
        return bad("group order 0".into());
    }
    if census.get(&1).copied().unwrap_or(1) != 1 {
        return bad("census(1) must be 1".into());
    }
    match census.get(&group_order) {
        Some(&c) if c == group_order => {}
        Some(&c) => return bad(format!("census({group_order}) = {c}")),
        None if group_order == 1 => {}
        None => return bad(format!("census lacks the group order {group_order}")),
    }
    let mut by_prime = BTreeMap::new();
    for (q, e) in factor(group_order)?.factors {
        // s_j = log_q census(q^j) = Σ_i min(j, e_i)
        let mut s = vec![0u32];
        let mut qj = 1u64;
        for _ in 1..=e {
            qj *= q;
            let Some(&count) = census.get(&qj) else {
                return bad(format!("census lacks {qj}"));
            };
            let Some(sj) = exact_log(count, q) else {
                return bad(format!("census({qj}) = {count} is not a power of {q}"));
            };
            if sj < s[s.len() - 1] || sj > e {
                return bad(format!("census({qj}) = {count} out of range"));
            }
            s.push(sj);
            if sj == e {
                break;
            }
        }
        if s[s.len() - 1] != e {
            return bad(format!("{q}-part never reaches q^{e}"));
        }
        // r_j = #{i : e_i ≥ j}
        let r: Vec<u32> = s.windows(2).map(|w| w[1] - w[0]).collect();
        if r.windows(2).any(|w| w[1] > w[0]) {
            return bad(format!("{q}-part counts are not a partition"));
        }
        let mut exps = Vec::new();
        for j in 0..r.len() {
            let next = r.get(j + 1).copied().unwrap_or(0);
            exps.extend(std::iter::repeat_n((j + 1) as u32, (r[j] - next) as usize));
        }
        by_prime.insert(q, exps);
    }
    Ok(FiniteAbelianGroup::from_primary(by_prime))
}

fn exact_log(mut n: u64, q: u64) -> Option<u32> {
    let mut k = 0;
    while n > 1 {
        if !n.is_multiple_of(q) {
            return None;
        }
        n /= q;
        k += 1;
    }
    (n == 1).then_some(k)
}

/// Order of an element in a finite group whose order is known: divide out
/// primes of `group_order` while `pow(x, n / q)` is still the identity.
pub(crate) fn element_order(
    group_order: u64,
    fac: &Factorization,
    mut is_identity_at: impl FnMut(u64) -> bool,
) -> u64 {
    let mut n = group_order;
    for &(q, _) in &fac.factors {
        while n.is_multiple_of(q) && is_identity_at(n / q) {
            n /= q;
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn legendre_by_squares(a: i64, p: i64) -> i32 {
        let a = a.rem_euclid(p);
        if a == 0 {
            0
        } else if (1..p).any(|x| (x * x) % p == a) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(28, 3).unwrap(), 1);
        assert_eq!(kronecker(44, 2).unwrap(), 0);
        assert_eq!(kronecker(-7, 3).unwrap(), -1);
        assert_eq!(kronecker(5, 0), Err(ArithError::ZeroModulus));
        // (d/2) by the mod-8 rule
        assert_eq!(kronecker(-7, 2).unwrap(), 1);
        assert_eq!(kronecker(5, 2).unwrap(), -1);
        assert_eq!(kronecker(-1, -1).unwrap(), -1);
    }

    #[test]
    fn kronecker_matches_legendre_scan() {
        for p in [3i64, 5, 7, 11, 13, 31, 97] {
            for a in -60..60 {
                assert_eq!(
                    kronecker(a, p).unwrap(),
                    legendre_by_squares(a, p),
                    "({a}/{p})"
                );
            }
        }
    }

    #[test]
    fn factor_examples() {
        assert_eq!(factor(63).unwrap().factors, vec![(3, 2), (7, 1)]);
        assert!(factor(1).unwrap().factors.is_empty());
        assert_eq!(factor(9947).unwrap().factors, vec![(7, 3), (29, 1)]);
        assert!(matches!(
            factor(FACTOR_BOUND + 1),
            Err(ArithError::UnsupportedSize { .. })
        ));
        assert_eq!(factor(FACTOR_BOUND).unwrap().product(), FACTOR_BOUND);
    }

    #[test]
    fn factor_recomposes() {
        for n in 1..=100_000u64 {
            let f = factor(n).unwrap();
            assert_eq!(f.product(), n);
            assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
        }
    }

    #[test]
    fn isqrt_examples() {
        assert_eq!(isqrt(28), 5);
        assert_eq!(isqrt(0), 0);
        assert_eq!(isqrt(1_000_000), 1000);
        let big = u64::MAX as u128 * 3;
        let r = isqrt(big);
        assert!(r * r <= big && (r + 1) * (r + 1) > big);
    }

    #[test]
    fn pell_examples() {
        let s = pell_fundamental(28).unwrap();
        assert_eq!((s.t, s.u, s.norm), (16.into(), 3.into(), 1));
        let s = pell_fundamental(5).unwrap();
        assert_eq!((s.t, s.u, s.norm), (1.into(), 1.into(), -1));
        let s = pell_fundamental(44).unwrap();
        assert_eq!((s.t, s.u, s.norm), (20.into(), 3.into(), 1));
        assert_eq!(pell_fundamental(36), Err(ArithError::BadDiscriminant(36)));
        assert_eq!(pell_fundamental(7), Err(ArithError::BadDiscriminant(7)));
    }

    #[test]
    fn census_examples() {
        let klein = BTreeMap::from([(1, 1), (2, 4), (4, 4)]);
        assert_eq!(
            invariants_from_census(&klein, 4)
                .unwrap()
                .invariant_factors(),
            &[2, 2]
        );
        let c4 = BTreeMap::from([(1, 1), (2, 2), (4, 4)]);
        assert_eq!(
            invariants_from_census(&c4, 4).unwrap().invariant_factors(),
            &[4]
        );
        let bogus = BTreeMap::from([(1, 1), (2, 3), (4, 4)]);
        assert!(invariants_from_census(&bogus, 4).is_err());
        assert!(invariants_from_census(&BTreeMap::from([(1, 1), (2, 2)]), 4).is_err());
    }

    #[test]
    fn census_of_explicit_product_c2_c20() {
        // Enumerate Z/2 × Z/20 directly and count x with k·x = 0.
        let mut census = BTreeMap::new();
        for k in factor(40).unwrap().divisors() {
            let count = (0..2u64)
                .flat_map(|a| (0..20u64).map(move |b| (a, b)))
                .filter(|&(a, b)| (a * k) % 2 == 0 && (b * k) % 20 == 0)
                .count() as u64;
            census.insert(k, count);
        }
        assert_eq!(
            invariants_from_census(&census, 40)
                .unwrap()
                .invariant_factors(),
            &[2, 20]
        );
    }

    #[test]
    fn normalization_and_display() {
        let g = FiniteAbelianGroup::from_cyclic_factors(&[2, 3]);
        assert_eq!(g.invariant_factors(), &[6]);
        let g = FiniteAbelianGroup::from_cyclic_factors(&[4, 10, 1]);
        assert_eq!(g.invariant_factors(), &[2, 20]);
        assert_eq!(g.to_string(), "Z/2Z+Z/20Z");
        assert_eq!(FiniteAbelianGroup::trivial().to_string(), "trivial");
        assert_eq!(FiniteAbelianGroup::cyclic(1), FiniteAbelianGroup::trivial());
    }
}
