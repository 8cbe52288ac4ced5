// SPDX-License-Identifier: Apache-2.0

//! Quadratic fields, their residue rings `O/f` and the class groups
//! `Cl(K mod f)`.
//!
//! `Cl(K mod f)` is the ray class group for the modulus `(f)` without real
//! places. It sits in the exact sequence
//! `O* → (O/f)* → Cl(K mod f) → Cl(K) → 1`, so the quotient
//! `(O/f)* / image(O*)` is computed by a coset census and extended by the
//! class group of `K` whenever the two orders are coprime.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, ArithError, FiniteAbelianGroup, PellSolution};
use crate::qform::{self, FormError};

/// Largest conductor accepted by the residue enumeration.
pub const CONDUCTOR_BOUND: u64 = 120;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("conductor {f} outside 1..={max}")]
    ConductorOutOfRange { f: u64, max: u64 },
    #[error("{0} is not a real quadratic discriminant")]
    NotReal(i64),
    #[error(
        "unresolved extension for d_K = {d_k}, f = {f}: class number {class_number} \
         shares a factor with |(O/f)*/units| = {quotient_order}"
    )]
    UnresolvedExtension {
        d_k: i64,
        f: u64,
        class_number: u64,
        quotient_order: u64,
    },
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Real,
    Imaginary,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Real => "real",
            Side::Imaginary => "imaginary",
        })
    }
}

pub fn is_fundamental(d: i64) -> bool {
    let squarefree = |n: i64| {
        n != 0
            && arith::factor(n.unsigned_abs())
                .map(|f| f.factors.iter().all(|&(_, e)| e == 1))
                .unwrap_or(false)
    };
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
        }
        _ => false,
    }
}

/// Discriminant of `Q(√p)` (real) or `Q(√−p)` (imaginary). For the primes
/// `p ≡ 3 mod 4` this is `4p` and `−p` respectively.
pub fn fundamental_discriminant(p: u64, side: Side) -> Result<i64, FieldError> {
    if p == 2 || !arith::is_prime(p) {
        return Err(FieldError::InvalidPrime(p));
    }
    let p = p as i64;
    let signed = match side {
        Side::Real => p,
        Side::Imaginary => -p,
    };
    Ok(if signed.rem_euclid(4) == 1 {
        signed
    } else {
        4 * signed
    })
}

/// A quadratic field together with a conductor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticModulus {
    pub d_k: i64,
    pub f: u64,
}

impl QuadraticModulus {
    pub fn new(d_k: i64, f: u64) -> Result<Self, FieldError> {
        if !is_fundamental(d_k) {
            return Err(FieldError::NotFundamental(d_k));
        }
        if f == 0 {
            return Err(FieldError::ConductorOutOfRange {
                f,
                max: CONDUCTOR_BOUND,
            });
        }
        Ok(Self { d_k, f })
    }

    pub fn for_prime(p: u64, side: Side, f: u64) -> Result<Self, FieldError> {
        Self::new(fundamental_discriminant(p, side)?, f)
    }

    fn ring(&self) -> Result<ResidueRing, FieldError> {
        if self.f > CONDUCTOR_BOUND {
            return Err(FieldError::ConductorOutOfRange {
                f: self.f,
                max: CONDUCTOR_BOUND,
            });
        }
        Ok(ResidueRing::new(self.d_k, self.f))
    }
}

/// Residues `x + y·ω mod f` with `ω = (d + √d)/2`, so that
/// `ω² = d·ω − (d² − d)/4`.
#[derive(Debug, Clone, Copy)]
struct ResidueRing {
    f: u64,
    d: u64,
    c: u64,
}

type Residue = (u64, u64);

impl ResidueRing {
    fn new(d: i64, f: u64) -> Self {
        let m = f as i128;
        let d_wide = d as i128;
        Self {
            f,
            d: d_wide.rem_euclid(m) as u64,
            c: ((d_wide * d_wide - d_wide) / 4).rem_euclid(m) as u64,
        }
    }

    fn one(&self) -> Residue {
        (1 % self.f, 0)
    }

    fn index(&self, r: Residue) -> usize {
        (r.0 * self.f + r.1) as usize
    }

    fn mul(&self, a: Residue, b: Residue) -> Residue {
        let f = self.f;
        let yy = a.1 * b.1 % f;
        let x = (a.0 * b.0 + (f - yy * self.c % f)) % f;
        let y = (a.0 * b.1 + a.1 * b.0 + yy * self.d) % f;
        (x, y)
    }

    fn pow(&self, mut base: Residue, mut e: u64) -> Residue {
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn norm(&self, r: Residue) -> u64 {
        let f = self.f;
        (r.0 * r.0 + self.d * r.0 % f * r.1 + self.c * r.1 % f * r.1) % f
    }

    fn reduce(&self, x: &BigInt, y: &BigInt) -> Residue {
        let m = BigInt::from(self.f);
        let r = |v: &BigInt| ((v % &m + &m) % &m).to_u64().expect("residue fits u64");
        (r(x), r(y))
    }

    /// Images of the roots of unity and the fundamental unit.
    fn unit_generators(&self, d_k: i64, eps: Option<&PellSolution>) -> Vec<Residue> {
        let f = self.f;
        let mut gens = vec![((f - 1) % f, 0)];
        if d_k == -3 || d_k == -4 {
            // ζ₆ = (1 + √−3)/2 and i = √−4/2 are both 2 + ω
            gens.push((2 % f, 1 % f));
        }
        if let Some(eps) = eps {
            let (x, y) = eps.omega_coordinates(d_k.rem_euclid(2));
            // ω-basis here is (d + √d)/2 = σ-basis ω + (d − σ)/2
            let shift = BigInt::from((d_k - d_k.rem_euclid(2)) / 2);
            gens.push(self.reduce(&(x - &y * shift), &y));
        }
        gens
    }
}

/// The unit group `(O/f)*`.
#[derive(Debug, Clone, Serialize)]
pub struct ResidueUnitGroup {
    pub modulus: QuadraticModulus,
    pub elements: Vec<(u64, u64)>,
    pub structure: FiniteAbelianGroup,
}

impl ResidueUnitGroup {
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }
}

fn units_of(ring: &ResidueRing) -> Vec<Residue> {
    let f = ring.f;
    (0..f)
        .flat_map(|x| (0..f).map(move |y| (x, y)))
        .filter(|&r| num_integer::gcd(ring.norm(r), f) == 1)
        .collect()
}

/// Structure of `G / H` where `in_h` marks the members of `H` by ring index.
fn quotient_structure(
    ring: &ResidueRing,
    elements: &[Residue],
    in_h: &[bool],
    h_order: u64,
) -> Result<FiniteAbelianGroup, ArithError> {
    let q = elements.len() as u64 / h_order;
    if q == 1 {
        return Ok(FiniteAbelianGroup::trivial());
    }
    let fac = arith::factor(q)?;
    let orders = elements
        .iter()
        .map(|&g| arith::element_order(q, &fac, |k| in_h[ring.index(ring.pow(g, k))]));
    let census = arith::census_from_orders(orders, q)?
        .into_iter()
        .map(|(k, n)| (k, n / h_order))
        .collect();
    arith::invariants_from_census(&census, q)
}

pub fn residue_unit_group(m: &QuadraticModulus) -> Result<ResidueUnitGroup, FieldError> {
    let ring = m.ring()?;
    let elements = units_of(&ring);
    let mut in_h = vec![false; (ring.f * ring.f) as usize];
    in_h[ring.index(ring.one())] = true;
    let structure = quotient_structure(&ring, &elements, &in_h, 1)?;
    Ok(ResidueUnitGroup {
        modulus: *m,
        elements,
        structure,
    })
}

/// Fundamental unit of a real quadratic field, `ε = (t + u√d)/2`.
pub fn fundamental_unit(d_k: i64) -> Result<PellSolution, FieldError> {
    if d_k <= 0 {
        return Err(FieldError::NotReal(d_k));
    }
    if !is_fundamental(d_k) {
        return Err(FieldError::NotFundamental(d_k));
    }
    Ok(arith::pell_fundamental(d_k)?)
}

/// Image of the global units in `(O/f)*`.
#[derive(Debug, Clone, Serialize)]
pub struct UnitImage {
    pub elements: Vec<(u64, u64)>,
    pub order: u64,
}

fn unit_image_in(
    ring: &ResidueRing,
    m: &QuadraticModulus,
) -> Result<(UnitImage, Vec<bool>), FieldError> {
    let eps = if m.d_k > 0 {
        Some(fundamental_unit(m.d_k)?)
    } else {
        None
    };
    let gens = ring.unit_generators(m.d_k, eps.as_ref());
    let mut member = vec![false; (ring.f * ring.f) as usize];
    let one = ring.one();
    member[ring.index(one)] = true;
    let mut elements = vec![one];
    let mut frontier = vec![one];
    while let Some(x) = frontier.pop() {
        for &g in &gens {
            let y = ring.mul(x, g);
            let idx = ring.index(y);
            if !member[idx] {
                member[idx] = true;
                elements.push(y);
                frontier.push(y);
            }
        }
    }
    elements.sort_unstable();
    let order = elements.len() as u64;
    Ok((UnitImage { elements, order }, member))
}

/// Subgroup of `(O/f)*` generated by `−1`, the other roots of unity and,
/// for real fields, the fundamental unit.
pub fn unit_image_subgroup(m: &QuadraticModulus) -> Result<UnitImage, FieldError> {
    Ok(unit_image_in(&m.ring()?, m)?.0)
}

/// Class group of the maximal order: definite form classes for `d_K < 0`,
/// the wide class group for `d_K > 0`.
pub fn field_class_group(d_k: i64) -> Result<FiniteAbelianGroup, FieldError> {
    if !is_fundamental(d_k) {
        return Err(FieldError::NotFundamental(d_k));
    }
    Ok(if d_k < 0 {
        qform::class_group(d_k)?.structure
    } else {
        qform::wide_real_class_group(d_k)?
    })
}

/// Everything computed on the way to `Cl(K mod f)`.
#[derive(Debug, Clone, Serialize)]
pub struct RayClassComputation {
    pub modulus: QuadraticModulus,
    pub class_group: FiniteAbelianGroup,
    pub residue_unit_order: u64,
    pub unit_image_order: u64,
    pub quotient: FiniteAbelianGroup,
    pub group: FiniteAbelianGroup,
}

impl RayClassComputation {
    /// `|Cl_f| · |unit image| = h_K · |(O/f)*|`.
    pub fn satisfies_order_identity(&self) -> bool {
        self.group.order() * self.unit_image_order
            == self.class_group.order() * self.residue_unit_order
    }
}

pub fn ray_class_computation(m: &QuadraticModulus) -> Result<RayClassComputation, FieldError> {
    let class_group = field_class_group(m.d_k)?;
    ray_class_with(m, class_group)
}

pub(crate) fn ray_class_with(
    m: &QuadraticModulus,
    class_group: FiniteAbelianGroup,
) -> Result<RayClassComputation, FieldError> {
    let ring = m.ring()?;
    let elements = units_of(&ring);
    let (image, member) = unit_image_in(&ring, m)?;
    let quotient = quotient_structure(&ring, &elements, &member, image.order)?;
    let h = class_group.order();
    let q = quotient.order();
    let group = if h == 1 {
        quotient.clone()
    } else if num_integer::gcd(h, q) == 1 {
        quotient.product(&class_group)
    } else {
        return Err(FieldError::UnresolvedExtension {
            d_k: m.d_k,
            f: m.f,
            class_number: h,
            quotient_order: q,
        });
    };
    Ok(RayClassComputation {
        modulus: *m,
        class_group,
        residue_unit_order: elements.len() as u64,
        unit_image_order: image.order,
        quotient,
        group,
    })
}

/// `Cl(K mod f)`.
pub fn ray_class_group(m: &QuadraticModulus) -> Result<FiniteAbelianGroup, FieldError> {
    Ok(ray_class_computation(m)?.group)
}

/// Unit index `[O_K* : O_f*]`.
fn unit_index(d_k: i64, f: u64) -> Result<u64, FieldError> {
    if f == 1 {
        return Ok(1);
    }
    Ok(match d_k {
        -3 => 3,
        -4 => 2,
        d if d < 0 => 1,
        d => {
            let eps = fundamental_unit(d)?;
            let ring = ResidueRing::new(d, f);
            let e = ring.unit_generators(d, Some(&eps))[1];
            let mut k = 1;
            let mut power = e;
            while power.1 != 0 {
                power = ring.mul(power, e);
                k += 1;
            }
            k
        }
    })
}

/// Class number of the order of conductor `f`:
/// `h_K · f · ∏_{ℓ | f} (1 − (d_K/ℓ)/ℓ) / [O_K* : O_f*]`.
pub fn order_class_number(d_k: i64, f: u64) -> Result<u64, FieldError> {
    if f == 0 {
        return Err(FieldError::ConductorOutOfRange {
            f,
            max: CONDUCTOR_BOUND,
        });
    }
    let h = field_class_group(d_k)?.order() as u128;
    let mut num = h * f as u128;
    let mut den = 1u128;
    for l in arith::factor(f)?.primes() {
        let chi = arith::kronecker(d_k, l as i64)? as i128;
        num *= (l as i128 - chi) as u128;
        den *= l as u128;
    }
    den *= unit_index(d_k, f)? as u128;
    debug_assert_eq!(num % den, 0);
    Ok((num / den) as u64)
}

pub fn is_isomorphic(g: &FiniteAbelianGroup, h: &FiniteAbelianGroup) -> bool {
    g == h
}
