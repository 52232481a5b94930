//! Exact arithmetic in `Q(r)` where `r = X^(-1/k)` for a positive integer `X`.
//!
//! Elements are polynomials in `r` of degree below the degree of `r`'s
//! minimal polynomial `x^d - 1/Y`. Equality is structural; the sign of a
//! non-zero element is found by refining a rational enclosure of `r`, which
//! always terminates because the element is non-zero.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow, Signed, Zero};

use crate::scalar::{rational_to_f64, ratio, Rational, Scalar};

/// Precision (in bisection steps) of the enclosure cached with each field.
const CACHED_BITS: u32 = 96;

/// The field generated by `r = radicand^(-1/index)`, stored in reduced form.
#[derive(Debug)]
pub struct RadicalField {
    /// Degree `d` of `r` over the rationals.
    degree: u32,
    /// `Y` with `r^d = 1/Y`.
    base: BigUint,
    lower: Rational,
    upper: Rational,
}

impl PartialEq for RadicalField {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.base == other.base
    }
}

impl Eq for RadicalField {}

impl RadicalField {
    /// Field containing `radicand^(-1/index)`.
    ///
    /// If `radicand` is a perfect `e`-th power for some `e` dividing `index`,
    /// the root is rewritten with the largest such `e` so the stored
    /// polynomial `x^d - 1/Y` is irreducible.
    pub fn new(radicand: BigUint, index: u32) -> Arc<Self> {
        assert!(index >= 1, "root index must be positive");
        assert!(!radicand.is_zero(), "radicand must be positive");
        let mut best = 1u32;
        let mut base = radicand.clone();
        for e in (2..=index).rev() {
            if index % e != 0 {
                continue;
            }
            let root = radicand.nth_root(e);
            if Pow::pow(&root, e) == radicand {
                best = e;
                base = root;
                break;
            }
        }
        let degree = index / best;
        let (lower, upper) = enclose(&base, degree, CACHED_BITS);
        Arc::new(RadicalField {
            degree,
            base,
            lower,
            upper,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn base(&self) -> &BigUint {
        &self.base
    }

    /// The generator `r`.
    pub fn generator(self: &Arc<Self>) -> Radical {
        if self.degree == 1 {
            let inv = Rational::new(BigInt::one(), BigInt::from(self.base.clone()));
            return Radical::constant(inv);
        }
        Radical::normalized(Some(self.clone()), vec![Rational::zero(), Rational::one()])
    }

    fn inverse_base(&self) -> Rational {
        Rational::new(BigInt::one(), BigInt::from(self.base.clone()))
    }

    /// `true` iff `candidate^degree * base <= 1`, i.e. `candidate <= r`.
    fn at_most_root(&self, candidate: &Rational) -> bool {
        at_most_root(&self.base, self.degree, candidate)
    }
}

fn at_most_root(base: &BigUint, degree: u32, candidate: &Rational) -> bool {
    let mut power = Rational::one();
    for _ in 0..degree {
        power *= candidate;
    }
    power * Rational::from_integer(BigInt::from(base.clone())) <= Rational::one()
}

/// Rational interval of width `2^-bits` containing `base^(-1/degree)`.
fn enclose(base: &BigUint, degree: u32, bits: u32) -> (Rational, Rational) {
    let mut lo = Rational::zero();
    let mut hi = Rational::one();
    let half = ratio(1, 2);
    for _ in 0..bits {
        let mid = (&lo + &hi) * &half;
        if at_most_root(base, degree, &mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// An element `sum_i coeffs[i] * r^i` of a [`RadicalField`].
///
/// Rational constants carry no field and combine with any field element.
#[derive(Clone)]
pub struct Radical {
    field: Option<Arc<RadicalField>>,
    coeffs: Vec<Rational>,
}

impl fmt::Debug for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*r")?,
                _ => write!(f, "({c})*r^{i}")?,
            }
        }
        if let Some(field) = &self.field {
            write!(f, " [r^{} = 1/{}]", field.degree, field.base)?;
        }
        Ok(())
    }
}

impl fmt::Display for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "{:?}", self),
        }
    }
}

impl Radical {
    pub fn constant(value: Rational) -> Self {
        Self::normalized(None, vec![value])
    }

    pub fn field(&self) -> Option<&Arc<RadicalField>> {
        self.field.as_ref()
    }

    fn normalized(field: Option<Arc<RadicalField>>, mut coeffs: Vec<Rational>) -> Self {
        if let Some(f) = &field {
            let d = f.degree as usize;
            if coeffs.len() > d {
                let inv = f.inverse_base();
                // r^(d+i) = r^i / Y
                for i in (d..coeffs.len()).rev() {
                    let c = core::mem::take(&mut coeffs[i]);
                    if !c.is_zero() {
                        coeffs[i - d] += c * &inv;
                    }
                }
                coeffs.truncate(d);
            }
        }
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        let field = if coeffs.len() > 1 { field } else { None };
        Radical { field, coeffs }
    }

    fn join(a: &Self, b: &Self) -> Option<Arc<RadicalField>> {
        match (&a.field, &b.field) {
            (Some(x), Some(y)) => {
                assert!(x == y, "mixing elements of different radical fields");
                Some(x.clone())
            }
            (Some(x), None) | (None, Some(x)) => Some(x.clone()),
            (None, None) => None,
        }
    }

    fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn signum(&self) -> Ordering {
        if self.coeffs.is_empty() {
            return Ordering::Equal;
        }
        let Some(field) = &self.field else {
            return self.coeffs[0].cmp(&Rational::zero());
        };
        let mut lo = field.lower.clone();
        let mut hi = field.upper.clone();
        let half = ratio(1, 2);
        loop {
            let (low, high) = self.enclosure(&lo, &hi);
            if low > Rational::zero() {
                return Ordering::Greater;
            }
            if high < Rational::zero() {
                return Ordering::Less;
            }
            let mid = (&lo + &hi) * &half;
            if field.at_most_root(&mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }

    /// Bounds on the value when `r` ranges over `[lo, hi]` with `lo >= 0`.
    fn enclosure(&self, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
        let mut low = Rational::zero();
        let mut high = Rational::zero();
        let mut lo_pow = Rational::one();
        let mut hi_pow = Rational::one();
        for c in &self.coeffs {
            if c.is_positive() {
                low += c * &lo_pow;
                high += c * &hi_pow;
            } else {
                low += c * &hi_pow;
                high += c * &lo_pow;
            }
            lo_pow *= lo;
            hi_pow *= hi;
        }
        (low, high)
    }

    fn inverse(&self) -> Self {
        assert!(!self.coeffs.is_empty(), "division by zero");
        let Some(field) = &self.field else {
            return Radical::constant(self.coeffs[0].recip());
        };
        // Extended Euclid on (a, x^d - 1/Y) over Q[x].
        let d = field.degree as usize;
        let mut modulus = vec![Rational::zero(); d + 1];
        modulus[0] = -field.inverse_base();
        modulus[d] = Rational::one();
        let (g, s) = ext_gcd(self.coeffs.clone(), modulus);
        debug_assert_eq!(g.len(), 1, "minimal polynomial must be irreducible");
        let scale = g[0].recip();
        let coeffs = s.into_iter().map(|c| c * &scale).collect();
        Radical::normalized(Some(field.clone()), coeffs)
    }
}

fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_divrem(mut num: Vec<Rational>, den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    trim(&mut num);
    let dlen = den.len();
    if num.len() < dlen {
        return (Vec::new(), num);
    }
    let lead = den[dlen - 1].clone();
    let mut quot = vec![Rational::zero(); num.len() - dlen + 1];
    while num.len() >= dlen && !num.is_empty() {
        let shift = num.len() - dlen;
        let factor = num[num.len() - 1].clone() / &lead;
        for (i, c) in den.iter().enumerate() {
            num[shift + i] -= &factor * c;
        }
        quot[shift] = factor;
        num.pop();
        trim(&mut num);
    }
    (quot, num)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let len = a.len().max(b.len());
    let mut out: Vec<Rational> = (0..len)
        .map(|i| {
            a.get(i).cloned().unwrap_or_else(Rational::zero)
                - b.get(i).cloned().unwrap_or_else(Rational::zero)
        })
        .collect();
    trim(&mut out);
    out
}

/// Returns `(g, s)` with `s*a ≡ g (mod b)`.
fn ext_gcd(a: Vec<Rational>, b: Vec<Rational>) -> (Vec<Rational>, Vec<Rational>) {
    let (mut r0, mut r1) = (a, b);
    trim(&mut r0);
    trim(&mut r1);
    let (mut s0, mut s1) = (vec![Rational::one()], Vec::new());
    while !r1.is_empty() {
        let (q, r) = poly_divrem(r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = core::mem::replace(&mut r1, r);
        s0 = core::mem::replace(&mut s1, s2);
    }
    (r0, s0)
}

impl PartialEq for Radical {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
            && (self.coeffs.len() <= 1 || self.field == other.field)
    }
}

impl Eq for Radical {}

impl PartialOrd for Radical {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Radical {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum()
    }
}

impl Add for Radical {
    type Output = Radical;
    fn add(self, rhs: Radical) -> Radical {
        let field = Radical::join(&self, &rhs);
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        Radical::normalized(field, coeffs)
    }
}

impl Sub for Radical {
    type Output = Radical;
    fn sub(self, rhs: Radical) -> Radical {
        self + (-rhs)
    }
}

impl Neg for Radical {
    type Output = Radical;
    fn neg(self) -> Radical {
        Radical {
            field: self.field,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for Radical {
    type Output = Radical;
    fn mul(self, rhs: Radical) -> Radical {
        let field = Radical::join(&self, &rhs);
        Radical::normalized(field, poly_mul(&self.coeffs, &rhs.coeffs))
    }
}

impl Div for Radical {
    type Output = Radical;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Radical) -> Radical {
        self * rhs.inverse()
    }
}

impl Zero for Radical {
    fn zero() -> Self {
        Radical {
            field: None,
            coeffs: Vec::new(),
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Radical {
    fn one() -> Self {
        Radical::constant(Rational::one())
    }
}

impl Scalar for Radical {
    fn from_u64(value: u64) -> Self {
        Radical::constant(Rational::from_u64(value))
    }

    fn from_rational(value: &Rational) -> Self {
        Radical::constant(value.clone())
    }

    fn to_f64(&self) -> f64 {
        let r = match &self.field {
            Some(f) => rational_to_f64(&((&f.lower + &f.upper) * ratio(1, 2))),
            None => 0.0,
        };
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + rational_to_f64(c))
    }

    fn as_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(x: u32, k: u32) -> Arc<RadicalField> {
        RadicalField::new(BigUint::from(x), k)
    }

    #[test]
    fn perfect_powers_reduce_to_rationals() {
        let f = field(4, 2);
        assert_eq!(f.degree(), 1);
        assert_eq!(f.generator().as_rational(), Some(ratio(1, 2)));
        let g = field(64, 6);
        assert_eq!(g.degree(), 1);
        assert_eq!(g.generator().as_rational(), Some(ratio(1, 2)));
        let h = field(16, 4);
        assert_eq!(h.degree(), 1);
        let partial = field(9, 4);
        assert_eq!(partial.degree(), 2);
        assert_eq!(partial.base(), &BigUint::from(3u32));
    }

    #[test]
    fn powers_of_the_generator_close_up() {
        let f = field(5, 3);
        let r = f.generator();
        let cube = r.clone() * r.clone() * r.clone();
        assert_eq!(cube.as_rational(), Some(ratio(1, 5)));
        assert_eq!(cube * Radical::from_u64(5), Radical::one());
    }

    #[test]
    fn ordering_matches_floating_point() {
        let f = field(21, 3);
        let r = f.generator();
        let approx = libm::pow(21.0, -1.0 / 3.0);
        assert!((r.to_f64() - approx).abs() < 1e-15);
        assert!(r > Radical::constant(ratio(36, 100)));
        assert!(r < Radical::constant(ratio(37, 100)));
        let sq = r.clone() * r.clone();
        assert!(sq < r);
        assert!(Radical::one() - r.clone() > Radical::zero());
    }

    #[test]
    fn inverse_round_trips() {
        let f = field(7, 4);
        let r = f.generator();
        let x = Radical::one() - r.clone() * r.clone() + Radical::from_u64(3) * r.clone();
        let y = Radical::one() / x.clone();
        assert_eq!(x * y, Radical::one());
    }

    #[test]
    fn sign_of_tiny_differences() {
        let f = field(2, 2);
        let r = f.generator(); // 1/sqrt(2)
        let below = Radical::constant(ratio(70, 99));
        let above = Radical::constant(ratio(99, 140));
        assert!(r > below);
        assert!(r < above);
        assert_eq!(r.clone() - r.clone(), Radical::zero());
    }
}
