// SPDX-License-Identifier: Apache-2.0

//! Independent oracles shared by the oracle and acceptance suites.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use rcf::arith::{self, is_square};
use rcf::polyfield::{squarefree_part, IntPolynomial};
use rcf::qform::{class_group, compose, BinaryQuadraticForm};

// Descartes / Vincent–Collins–Akritas root isolation on (0, 1).

fn sign_variations(p: &[BigInt]) -> usize {
    let signs: Vec<bool> = p
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| c.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Coefficients of `p(x + 1)`, ascending.
fn taylor_shift(p: &[BigInt]) -> Vec<BigInt> {
    let mut q = p.to_vec();
    let n = q.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let add = q[j + 1].clone();
            q[j] += add;
        }
    }
    q
}

fn reversed(p: &[BigInt]) -> Vec<BigInt> {
    p.iter().rev().cloned().collect()
}

/// `2ⁿ p(x/2)`.
fn halve(p: &[BigInt]) -> Vec<BigInt> {
    let n = p.len() - 1;
    p.iter().enumerate().map(|(k, c)| c << (n - k)).collect()
}

fn eval_at_zero_one(p: &[BigInt]) -> (bool, bool) {
    let at_one: BigInt = p.iter().sum();
    (p[0].is_zero(), at_one.is_zero())
}

/// Roots of a squarefree `p` in the open interval (0, 1).
fn roots_in_unit_interval(p: &[BigInt]) -> usize {
    let v = sign_variations(&taylor_shift(&reversed(p)));
    if v <= 1 {
        return v;
    }
    let left = halve(p);
    let right = taylor_shift(&left);
    // p(1/2) = 0 ⇔ right(0) = 0
    let mid = usize::from(right[0].is_zero());
    roots_in_unit_interval(&left) + roots_in_unit_interval(&right) + mid
}

/// Positive roots of a squarefree `p` with `p(0) ≠ 0`.
fn positive_roots(p: &[BigInt]) -> usize {
    let (_, one) = eval_at_zero_one(p);
    roots_in_unit_interval(p) + roots_in_unit_interval(&reversed(p)) + usize::from(one)
}

pub fn bisection_count(p: &IntPolynomial) -> usize {
    let mut c = squarefree_part(p).coeffs_asc().to_vec();
    let mut zero = 0;
    while c[0].is_zero() {
        c.remove(0);
        zero = 1;
    }
    if c.len() == 1 {
        return zero;
    }
    let neg: Vec<BigInt> = c
        .iter()
        .enumerate()
        .map(|(k, a)| if k % 2 == 1 { -a } else { a.clone() })
        .collect();
    zero + positive_roots(&c) + positive_roots(&neg)
}

pub fn product(factors: &[Vec<i64>]) -> IntPolynomial {
    let mut acc = vec![BigInt::one()];
    for f in factors {
        let mut out = vec![BigInt::zero(); acc.len() + f.len() - 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in f.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        acc = out;
    }
    IntPolynomial::from_asc(acc).unwrap()
}

/// Least `(t, u, norm)` with `t² − D u² = ±4`, by scanning `u`.
pub fn pell_brute(d: i64) -> (i64, i64, i8) {
    (1i64..)
        .find_map(|u| {
            [-4i64, 4].into_iter().find_map(|n| {
                let sq = d * u * u + n;
                (sq > 0 && is_square(sq as i128))
                    .then(|| (arith::isqrt(sq as u128) as i64, u, n.signum() as i8))
            })
        })
        .unwrap()
}

/// Non-square discriminants with `|D| < bound`.
pub fn discriminants(bound: i64) -> impl Iterator<Item = i64> {
    (-bound + 1..bound).filter(|&d| d != 0 && d.rem_euclid(4) <= 1 && !is_square(d as i128))
}

/// Identity, inverses, commutativity and associativity on all classes of `d`.
pub fn check_group_law(d: i64) -> Result<(), String> {
    let g = class_group(d).map_err(|e| e.to_string())?;
    let reps = &g.representatives;
    let n = reps.len();
    let idx = |f: &BinaryQuadraticForm| g.class_of(f).map_err(|e| e.to_string());
    if idx(&BinaryQuadraticForm::principal(d).unwrap())? != 0 {
        return Err(format!("D = {d}: principal form is not class 0"));
    }
    let mut table = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            table[i][j] = idx(&compose(&reps[i], &reps[j]).map_err(|e| e.to_string())?)?;
        }
    }
    for i in 0..n {
        if table[i][0] != i {
            return Err(format!("D = {d}: identity fails at class {i}"));
        }
        if idx(&compose(&reps[i], &reps[i].inverse()).map_err(|e| e.to_string())?)? != 0 {
            return Err(format!("D = {d}: inverse fails at class {i}"));
        }
        for j in 0..n {
            if table[i][j] != table[j][i] {
                return Err(format!("D = {d}: {i}·{j} ≠ {j}·{i}"));
            }
            for k in 0..n {
                if table[table[i][j]][k] != table[i][table[j][k]] {
                    return Err(format!("D = {d}: associativity fails at ({i}, {j}, {k})"));
                }
            }
        }
    }
    if g.structure.order() as usize != n {
        return Err(format!("D = {d}: structure order differs from class count"));
    }
    Ok(())
}
