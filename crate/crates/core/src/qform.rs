// SPDX-License-Identifier: Apache-2.0

//! Integral binary quadratic forms `ax² + bxy + cy²`.
//!
//! Positive definite forms are reduced to the unique representative
//! `−a < b ≤ a ≤ c` (with `b ≥ 0` when `a = c`), so equivalence is equality.
//! Indefinite forms are reduced into a rho cycle and two forms are
//! equivalent exactly when their cycles coincide.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, ArithError, FiniteAbelianGroup};

/// Largest `|D|` accepted by class enumeration.
pub const DISCRIMINANT_BOUND: i64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("the zero form has no class")]
    ZeroForm,
    #[error("discriminant {0} is a perfect square")]
    SquareDiscriminant(i64),
    #[error("{0} is not a discriminant (must be ≡ 0 or 1 mod 4, non-zero)")]
    InvalidDiscriminant(i64),
    #[error("form {0} is not primitive")]
    NotPrimitive(BinaryQuadraticForm),
    #[error("form {0} is not positive definite")]
    NotPositiveDefinite(BinaryQuadraticForm),
    #[error("form {0} is not indefinite")]
    NotIndefinite(BinaryQuadraticForm),
    #[error("discriminants differ: {0} vs {1}")]
    DiscriminantMismatch(i64, i64),
    #[error("|D| = {0} exceeds the enumeration bound {DISCRIMINANT_BOUND}")]
    BoundExceeded(i64),
    #[error("coefficient overflow while handling discriminant {0}")]
    Overflow(i64),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinaryQuadraticForm {
    a: i64,
    b: i64,
    c: i64,
}

impl fmt::Display for BinaryQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Checks `d` is a usable discriminant for class computations.
pub fn validate_discriminant(d: i64) -> Result<(), FormError> {
    if d == 0 || d.rem_euclid(4) > 1 {
        return Err(FormError::InvalidDiscriminant(d));
    }
    if arith::is_square(d as i128) {
        return Err(FormError::SquareDiscriminant(d));
    }
    Ok(())
}

impl BinaryQuadraticForm {
    /// Builds a form, rejecting the zero form and square discriminants.
    /// Non-primitive forms are accepted here; see [`Self::is_primitive`].
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self, FormError> {
        if a == 0 && b == 0 && c == 0 {
            return Err(FormError::ZeroForm);
        }
        let form = Self { a, b, c };
        let d = form.discriminant_i128();
        let d = i64::try_from(d).map_err(|_| FormError::Overflow(i64::MAX))?;
        if arith::is_square(d as i128) {
            return Err(FormError::SquareDiscriminant(d));
        }
        Ok(form)
    }

    fn from_wide(a: i128, b: i128, c: i128, d: i64) -> Result<Self, FormError> {
        let conv = |x: i128| i64::try_from(x).map_err(|_| FormError::Overflow(d));
        Ok(Self {
            a: conv(a)?,
            b: conv(b)?,
            c: conv(c)?,
        })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    fn discriminant_i128(&self) -> i128 {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        b * b - 4 * a * c
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant_i128() as i64
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    pub fn is_positive_definite(&self) -> bool {
        self.discriminant() < 0 && self.a > 0
    }

    /// `(1, b₀, (b₀² − D)/4)` with `b₀ = D mod 2`.
    pub fn principal(d: i64) -> Result<Self, FormError> {
        validate_discriminant(d)?;
        let b0 = d.rem_euclid(2);
        Ok(Self {
            a: 1,
            b: b0,
            c: (b0 * b0 - d) / 4,
        })
    }

    /// `(a, −b, c)`.
    pub fn inverse(&self) -> Self {
        Self {
            a: self.a,
            b: -self.b,
            c: self.c,
        }
    }

    /// Evaluates the form at `(x, y)`.
    pub fn eval(&self, x: i128, y: i128) -> i128 {
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }

    /// `f ∘ M`, i.e. the form `(x, y) ↦ f(αx + βy, γx + δy)`.
    pub fn act(&self, m: &Unimodular) -> Result<Self, FormError> {
        let [[al, be], [ga, de]] = m.0;
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let na = self.eval(al, ga);
        let nc = self.eval(be, de);
        let nb = 2 * a * al * be + b * (al * de + be * ga) + 2 * c * ga * de;
        Self::from_wide(na, nb, nc, self.discriminant())
    }

    /// Definite reduction predicate.
    pub fn is_reduced_definite(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        -a < b && b <= a && a <= c && !(b < 0 && a == c)
    }

    /// Indefinite reduction predicate: `0 < b < √D`, `√D − b < 2|a| < √D + b`.
    pub fn is_reduced_indefinite(&self) -> bool {
        let d = self.discriminant();
        if d <= 0 {
            return false;
        }
        let s = arith::isqrt(d as u128) as i64;
        let two_a = 2 * self.a.abs();
        0 < self.b && self.b <= s && two_a + self.b > s && two_a - self.b <= s
    }
}

/// A 2×2 integer matrix of determinant +1, rows `[[α, β], [γ, δ]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Unimodular(pub [[i128; 2]; 2]);

impl Unimodular {
    pub const IDENTITY: Self = Self([[1, 0], [0, 1]]);

    pub fn determinant(&self) -> i128 {
        let [[a, b], [c, d]] = self.0;
        a * d - b * c
    }

    fn then(&self, rhs: &Self) -> Self {
        let [[a, b], [c, d]] = self.0;
        let [[e, f], [g, h]] = rhs.0;
        Self([
            [a * e + b * g, a * f + b * h],
            [c * e + d * g, c * f + d * h],
        ])
    }
}

/// Reduces a primitive positive definite form, returning the reduced form
/// and the matrix `M` with `f ∘ M = reduced`.
pub fn reduce_definite(
    f: &BinaryQuadraticForm,
) -> Result<(BinaryQuadraticForm, Unimodular), FormError> {
    if !f.is_positive_definite() {
        return Err(FormError::NotPositiveDefinite(*f));
    }
    if !f.is_primitive() {
        return Err(FormError::NotPrimitive(*f));
    }
    let d = f.discriminant();
    let (mut a, mut b, mut c) = (f.a as i128, f.b as i128, f.c as i128);
    let mut witness = Unimodular::IDENTITY;
    loop {
        if !(-a < b && b <= a) {
            let t = Integer::div_floor(&(a - b), &(2 * a));
            c += t * (a * t + b);
            b += 2 * a * t;
            witness = witness.then(&Unimodular([[1, t], [0, 1]]));
        }
        if a > c || (a == c && b < 0) {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            witness = witness.then(&Unimodular([[0, -1], [1, 0]]));
        } else {
            break;
        }
    }
    Ok((BinaryQuadraticForm::from_wide(a, b, c, d)?, witness))
}

/// One normalized rho step `(a, b, c) ↦ (c, r, (r² − D)/4c)` with
/// `r ≡ −b mod 2c`. Properly equivalent to the input.
pub fn rho(f: &BinaryQuadraticForm) -> Result<BinaryQuadraticForm, FormError> {
    let d = f.discriminant_i128();
    if d <= 0 {
        return Err(FormError::NotIndefinite(*f));
    }
    if f.c == 0 {
        return Err(FormError::SquareDiscriminant(d as i64));
    }
    let s = arith::isqrt(d as u128) as i128;
    let c = f.c as i128;
    let m = 2 * c.abs();
    let r = if c.abs() > s {
        // r in (−|c|, |c|]
        let r = (-(f.b as i128)).rem_euclid(m);
        if r > c.abs() {
            r - m
        } else {
            r
        }
    } else {
        // largest r < √D
        s - (s + f.b as i128).rem_euclid(m)
    };
    BinaryQuadraticForm::from_wide(c, r, (r * r - d) / (4 * c), d as i64)
}

fn require_indefinite(f: &BinaryQuadraticForm) -> Result<(), FormError> {
    let d = f.discriminant();
    if d <= 0 {
        return Err(FormError::NotIndefinite(*f));
    }
    validate_discriminant(d)?;
    if !f.is_primitive() {
        return Err(FormError::NotPrimitive(*f));
    }
    Ok(())
}

/// Applies rho until the form is reduced.
pub fn reduce_indefinite(f: &BinaryQuadraticForm) -> Result<BinaryQuadraticForm, FormError> {
    require_indefinite(f)?;
    let mut g = *f;
    while !g.is_reduced_indefinite() {
        g = rho(&g)?;
    }
    Ok(g)
}

/// The closed rho cycle of reduced forms equivalent to `f`, starting at the
/// reduction of `f`.
pub fn reduction_cycle(f: &BinaryQuadraticForm) -> Result<Vec<BinaryQuadraticForm>, FormError> {
    let start = reduce_indefinite(f)?;
    let mut cycle = vec![start];
    let mut g = rho(&start)?;
    while g != start {
        cycle.push(g);
        g = rho(&g)?;
    }
    Ok(cycle)
}

/// Canonical reduced representative (definite) or some reduced cycle member
/// (indefinite).
pub fn reduce(f: &BinaryQuadraticForm) -> Result<BinaryQuadraticForm, FormError> {
    if f.discriminant() < 0 {
        reduce_definite(f).map(|(g, _)| g)
    } else {
        reduce_indefinite(f)
    }
}

/// Proper equivalence.
pub fn is_equivalent(f: &BinaryQuadraticForm, g: &BinaryQuadraticForm) -> Result<bool, FormError> {
    let (df, dg) = (f.discriminant(), g.discriminant());
    if df != dg {
        return Err(FormError::DiscriminantMismatch(df, dg));
    }
    if df < 0 {
        Ok(reduce_definite(f)?.0 == reduce_definite(g)?.0)
    } else {
        let target = reduce_indefinite(g)?;
        Ok(reduction_cycle(f)?.contains(&target))
    }
}

fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

/// Dirichlet composition of two primitive forms of one discriminant; the
/// result is reduced.
pub fn compose(
    f: &BinaryQuadraticForm,
    g: &BinaryQuadraticForm,
) -> Result<BinaryQuadraticForm, FormError> {
    let (df, dg) = (f.discriminant(), g.discriminant());
    if df != dg {
        return Err(FormError::DiscriminantMismatch(df, dg));
    }
    for h in [f, g] {
        if !h.is_primitive() {
            return Err(FormError::NotPrimitive(*h));
        }
        if df < 0 && h.a <= 0 {
            return Err(FormError::NotPositiveDefinite(*h));
        }
    }
    let d = df as i128;
    let (a1, b1) = (f.a as i128, f.b as i128);
    let (a2, b2) = (g.a as i128, g.b as i128);
    let beta = (b1 + b2) / 2;
    // u·a1 + v·a2 + w·β = e
    let (g1, x1, y1) = xgcd(a1, a2);
    let (e, x2, w) = xgcd(g1, beta);
    let (u, v) = (x2 * x1, x2 * y1);
    let a3 = a1 * a2 / (e * e);
    let m = 2 * a3.abs();
    let b3 = ((u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + d) / 2) / e).rem_euclid(m);
    let c3 = (b3 * b3 - d) / (4 * a3);
    let h = BinaryQuadraticForm::from_wide(a3, b3, c3, df)?;
    reduce(&h)
}

/// Which kind of class group a discriminant yields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    Definite,
    NarrowIndefinite,
}

/// Form classes of one discriminant with their group structure. Index 0 is
/// the principal class.
#[derive(Debug, Clone, Serialize)]
pub struct FormClassGroup {
    pub discriminant: i64,
    pub representatives: Vec<BinaryQuadraticForm>,
    pub structure: FiniteAbelianGroup,
    pub flavor: Flavor,
    #[serde(skip)]
    index: HashMap<BinaryQuadraticForm, usize>,
}

impl FormClassGroup {
    pub fn order(&self) -> usize {
        self.representatives.len()
    }

    /// Class index of any primitive form of this discriminant.
    pub fn class_of(&self, f: &BinaryQuadraticForm) -> Result<usize, FormError> {
        if f.discriminant() != self.discriminant {
            return Err(FormError::DiscriminantMismatch(
                self.discriminant,
                f.discriminant(),
            ));
        }
        let r = reduce(f)?;
        Ok(*self
            .index
            .get(&r)
            .expect("every reduced form was enumerated"))
    }

    /// Class index of the product of two classes.
    pub fn multiply(&self, i: usize, j: usize) -> Result<usize, FormError> {
        let h = compose(&self.representatives[i], &self.representatives[j])?;
        self.class_of(&h)
    }

    fn class_order(&self, i: usize) -> Result<u64, FormError> {
        let mut k = 1;
        let mut x = i;
        while x != 0 {
            x = self.multiply(x, i)?;
            k += 1;
        }
        Ok(k)
    }

    /// Structure of the quotient by the subgroup with class indices `sub`.
    pub(crate) fn quotient_structure(
        &self,
        sub: &[usize],
    ) -> Result<FiniteAbelianGroup, FormError> {
        let h = self.order() as u64;
        let q = h / sub.len() as u64;
        let mut orders = Vec::with_capacity(self.order());
        for i in 0..self.order() {
            let mut k = 1;
            let mut x = i;
            while !sub.contains(&x) {
                x = self.multiply(x, i)?;
                k += 1;
            }
            orders.push(k);
        }
        // every coset is counted |sub| times
        let census = arith::census_from_orders(orders, q)?
            .into_iter()
            .map(|(k, n)| (k, n / sub.len() as u64))
            .collect();
        Ok(arith::invariants_from_census(&census, q)?)
    }
}

/// One reduced representative per proper equivalence class of primitive
/// forms of discriminant `d` (positive definite forms when `d < 0`).
pub fn class_representatives(d: i64) -> Result<Vec<BinaryQuadraticForm>, FormError> {
    Ok(enumerate_classes(d)?.0)
}

type ClassIndex = (
    Vec<BinaryQuadraticForm>,
    HashMap<BinaryQuadraticForm, usize>,
);

fn enumerate_classes(d: i64) -> Result<ClassIndex, FormError> {
    validate_discriminant(d)?;
    if d.abs() > DISCRIMINANT_BOUND {
        return Err(FormError::BoundExceeded(d));
    }
    if d < 0 {
        let mut reps = Vec::new();
        let mut a = 1i64;
        while 3 * a * a <= -d {
            // |b| ascending, positive sign first
            for b_abs in (0..=a).filter(|b| (b - d).rem_euclid(2) == 0) {
                let signs: &[i64] = if b_abs == 0 || b_abs == a {
                    &[1]
                } else {
                    &[1, -1]
                };
                for b in signs.iter().map(|s| s * b_abs) {
                    let num = b * b - d;
                    if num % (4 * a) != 0 {
                        continue;
                    }
                    let c = num / (4 * a);
                    let form = BinaryQuadraticForm { a, b, c };
                    if c >= a && form.is_reduced_definite() && form.is_primitive() {
                        reps.push(form);
                    }
                }
            }
            a += 1;
        }
        let index = reps.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        return Ok((reps, index));
    }

    let s = arith::isqrt(d as u128) as i64;
    let mut reduced = Vec::new();
    for b in (1..=s).filter(|b| (b - d).rem_euclid(2) == 0) {
        let m = (d - b * b) / 4;
        for a0 in arith::factor(m as u64)?.divisors() {
            let a0 = a0 as i64;
            if 2 * a0 + b <= s || 2 * a0 - b > s {
                continue;
            }
            for a in [a0, -a0] {
                let form = BinaryQuadraticForm { a, b, c: -m / a };
                if form.is_primitive() {
                    reduced.push(form);
                }
            }
        }
    }
    let key = |f: &BinaryQuadraticForm| (f.a.abs(), f.a < 0, f.b);
    let mut index: HashMap<BinaryQuadraticForm, usize> = HashMap::new();
    let mut reps: Vec<BinaryQuadraticForm> = Vec::new();
    let principal = reduce_indefinite(&BinaryQuadraticForm::principal(d)?)?;
    for start in std::iter::once(principal).chain(reduced.iter().copied()) {
        if index.contains_key(&start) {
            continue;
        }
        let cycle = reduction_cycle(&start)?;
        let rep = *cycle.iter().min_by_key(|f| key(f)).unwrap();
        for f in cycle {
            index.insert(f, reps.len());
        }
        reps.push(rep);
    }
    debug_assert_eq!(index.len(), reduced.len());
    Ok((reps, index))
}

/// Form class group (narrow when `d > 0`).
pub fn class_group(d: i64) -> Result<FormClassGroup, FormError> {
    let (representatives, index) = enumerate_classes(d)?;
    let mut group = FormClassGroup {
        discriminant: d,
        representatives,
        structure: FiniteAbelianGroup::trivial(),
        flavor: if d < 0 {
            Flavor::Definite
        } else {
            Flavor::NarrowIndefinite
        },
        index,
    };
    let h = group.order() as u64;
    let orders = (0..group.order())
        .map(|i| group.class_order(i))
        .collect::<Result<Vec<_>, _>>()?;
    let census = arith::census_from_orders(orders, h)?;
    group.structure = arith::invariants_from_census(&census, h)?;
    Ok(group)
}

/// Class of `(−1, b₀, (D − b₀²)/4)`: trivial iff the order has a unit of
/// norm −1.
pub fn minus_one_class(group: &FormClassGroup) -> Result<usize, FormError> {
    let d = group.discriminant;
    let b0 = d.rem_euclid(2);
    group.class_of(&BinaryQuadraticForm {
        a: -1,
        b: b0,
        c: (d - b0 * b0) / 4,
    })
}

/// Wide (ordinary) class group: the narrow group modulo the class of the
/// form with leading coefficient −1.
pub fn wide_real_class_group(d: i64) -> Result<FiniteAbelianGroup, FormError> {
    if d <= 0 {
        return Err(FormError::InvalidDiscriminant(d));
    }
    let narrow = class_group(d)?;
    let j = minus_one_class(&narrow)?;
    if j == 0 {
        return Ok(narrow.structure);
    }
    narrow.quotient_structure(&[0, j])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(a: i64, b: i64, c: i64) -> BinaryQuadraticForm {
        BinaryQuadraticForm::new(a, b, c).unwrap()
    }

    #[test]
    fn make_form_examples() {
        assert_eq!(form(1, 1, 16).discriminant(), -63);
        assert_eq!(form(1, 0, -7).discriminant(), 28);
        assert!(!form(2, 2, 4).is_primitive());
        assert_eq!(BinaryQuadraticForm::new(0, 0, 0), Err(FormError::ZeroForm));
        assert_eq!(
            BinaryQuadraticForm::new(1, 2, 1),
            Err(FormError::SquareDiscriminant(0))
        );
        assert_eq!(
            BinaryQuadraticForm::new(1, 3, 2),
            Err(FormError::SquareDiscriminant(1))
        );
    }

    #[test]
    fn principal_examples() {
        assert_eq!(BinaryQuadraticForm::principal(-63).unwrap(), form(1, 1, 16));
        assert_eq!(BinaryQuadraticForm::principal(28).unwrap(), form(1, 0, -7));
        assert_eq!(BinaryQuadraticForm::principal(-7).unwrap(), form(1, 1, 2));
        assert!(BinaryQuadraticForm::principal(-6).is_err());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(form(2, 1, 8).inverse(), form(2, -1, 8));
        let f = form(4, 1, 4);
        assert!(is_equivalent(&f.inverse(), &f).unwrap());
        let p = BinaryQuadraticForm::principal(-63).unwrap();
        assert!(is_equivalent(&p.inverse(), &p).unwrap());
    }

    #[test]
    fn reduce_definite_examples() {
        let (r, _) = reduce_definite(&form(1, 5, 7)).unwrap();
        assert_eq!(r, form(1, 1, 1));
        let (r, w) = reduce_definite(&form(1, 0, 7)).unwrap();
        assert_eq!((r, w), (form(1, 0, 7), Unimodular::IDENTITY));
        let input = form(15, 14, 4);
        let (r, w) = reduce_definite(&input).unwrap();
        assert_eq!(r, form(3, -2, 4));
        assert_eq!(w.determinant(), 1);
        assert_eq!(input.act(&w).unwrap(), r);
        assert!(matches!(
            reduce_definite(&form(-1, 1, -2)),
            Err(FormError::NotPositiveDefinite(_))
        ));
    }

    #[test]
    fn reduce_definite_against_orbit_scan() {
        // (1,5,7) has D = −3; every form of D = −3 with small coefficients
        // reached by a short word in S and T must reduce to (1,1,1).
        let s = Unimodular([[0, -1], [1, 0]]);
        let t = Unimodular([[1, 1], [0, 1]]);
        let t_inv = Unimodular([[1, -1], [0, 1]]);
        let mut frontier = vec![form(1, 1, 1)];
        for _ in 0..6 {
            let mut next = Vec::new();
            for f in &frontier {
                for m in [s, t, t_inv] {
                    let g = f.act(&m).unwrap();
                    assert_eq!(reduce_definite(&g).unwrap().0, form(1, 1, 1));
                    next.push(g);
                }
            }
            frontier = next;
        }
    }

    #[test]
    fn reduction_cycle_examples() {
        let cycle = reduction_cycle(&form(1, 4, -3)).unwrap();
        assert!(cycle.contains(&form(1, 4, -3)));
        let mut g = cycle[0];
        for _ in 0..cycle.len() {
            g = rho(&g).unwrap();
        }
        assert_eq!(g, cycle[0]);

        for f in class_representatives(252).unwrap() {
            let cyc = reduction_cycle(&f).unwrap();
            assert!(cyc.iter().all(BinaryQuadraticForm::is_reduced_indefinite));
            assert!(is_equivalent(&cyc[0], &cyc[cyc.len() - 1]).unwrap());
        }
        assert!(reduction_cycle(&form(1, 1, 1)).is_err());
    }

    #[test]
    fn equivalence_examples() {
        // (1,5,20): D = 25 − 80 = −55 ≠ −63, so use a translate of the principal form.
        let shifted = form(1, 1, 16).act(&Unimodular([[1, 2], [0, 1]])).unwrap();
        assert_eq!(shifted, form(1, 5, 22));
        assert!(is_equivalent(&form(1, 1, 16), &shifted).unwrap());
        assert!(!is_equivalent(&form(2, 1, 8), &form(2, -1, 8)).unwrap());
        let cyc = reduction_cycle(&form(1, 4, -3)).unwrap();
        assert!(is_equivalent(&cyc[0], &cyc[1]).unwrap());
        assert_eq!(
            is_equivalent(&form(1, 1, 16), &form(1, 1, 2)),
            Err(FormError::DiscriminantMismatch(-63, -7))
        );
    }

    #[test]
    fn compose_examples() {
        let p = BinaryQuadraticForm::principal(-63).unwrap();
        let f = form(2, 1, 8);
        assert!(is_equivalent(&compose(&p, &f).unwrap(), &f).unwrap());
        assert!(is_equivalent(&compose(&f, &f.inverse()).unwrap(), &p).unwrap());
        assert!(is_equivalent(&compose(&f, &f).unwrap(), &form(4, 1, 4)).unwrap());
        assert!(compose(&f, &form(1, 1, 2)).is_err());
    }

    #[test]
    fn representatives_examples() {
        assert_eq!(
            class_representatives(-63).unwrap(),
            vec![form(1, 1, 16), form(2, 1, 8), form(2, -1, 8), form(4, 1, 4)]
        );
        assert_eq!(class_representatives(-7).unwrap().len(), 1);
        assert_eq!(class_representatives(-112).unwrap().len(), 2);
        assert!(matches!(
            class_representatives(-40_000_004),
            Err(FormError::BoundExceeded(_))
        ));
    }

    #[test]
    fn class_group_examples() {
        assert_eq!(
            class_group(-23).unwrap().structure.invariant_factors(),
            &[3]
        );
        assert_eq!(
            class_group(-63).unwrap().structure.invariant_factors(),
            &[4]
        );
        let g = class_group(316).unwrap();
        assert_eq!(g.flavor, Flavor::NarrowIndefinite);
        assert_eq!(g.structure.invariant_factors(), &[6]);
    }

    #[test]
    fn wide_examples() {
        assert!(wide_real_class_group(28).unwrap().is_trivial());
        assert_eq!(
            wide_real_class_group(316).unwrap().invariant_factors(),
            &[3]
        );
        assert_eq!(class_group(252).unwrap().order(), 4);
        assert_eq!(
            wide_real_class_group(252).unwrap().invariant_factors(),
            &[2]
        );
        // D = 5: ε has norm −1, so wide = narrow = trivial
        assert!(wide_real_class_group(5).unwrap().is_trivial());
    }
}
