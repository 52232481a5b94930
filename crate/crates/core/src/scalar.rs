//! Exact number types shared by every solver.
//!
//! All oracle-grade computations run over a [`Scalar`]: an exact ordered
//! field. [`Rational`] is the everyday choice; [`crate::radical::Radical`]
//! covers instances whose probabilities are k-th roots.

use alloc::string::{String, ToString};

use core::fmt;
use core::ops::{Add, Div, Mul, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision fraction kept in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// An exact, totally ordered field used for probabilities and objective values.
pub trait Scalar:
    Clone
    + Ord
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_u64(value: u64) -> Self;

    fn from_rational(value: &Rational) -> Self;

    /// Nearest `f64`; only used for reporting and float-mode evaluation.
    fn to_f64(&self) -> f64;

    /// The exact rational value, when the number happens to be rational.
    fn as_rational(&self) -> Option<Rational>;
}

impl Scalar for Rational {
    fn from_u64(value: u64) -> Self {
        Rational::from_integer(BigInt::from(value))
    }

    fn from_rational(value: &Rational) -> Self {
        value.clone()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

/// Shorthand for `num / den`. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_from_u64(value: u64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Converts through a scaled integer quotient so that huge numerators and
/// denominators do not overflow `f64` on their own.
pub fn rational_to_f64(value: &Rational) -> f64 {
    if value.is_zero() {
        return 0.0;
    }
    let num = value.numer();
    let den = value.denom();
    if let (Some(n), Some(d)) = (num.to_f64(), den.to_f64()) {
        if n.is_finite() && d.is_finite() && n.abs() < 1e300 && d < 1e300 {
            return n / d;
        }
    }
    let shift = num.bits() as i64 - den.bits() as i64 - 64;
    let (scaled_num, scaled_den) = if shift > 0 {
        (num.clone(), den.clone() << (shift as usize))
    } else {
        (num.clone() << ((-shift) as usize), den.clone())
    };
    let quotient = (scaled_num / scaled_den).to_f64().unwrap_or(0.0);
    quotient * libm::pow(2.0, shift as f64)
}

/// Cost-to-probability ratio of a set: finite, or the distinguished `+∞`.
///
/// Variant order gives the total order used for sorting: every finite ratio
/// precedes `Infinite`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SetRatio<P> {
    Finite(P),
    Infinite,
}

impl<P> SetRatio<P> {
    pub fn is_infinite(&self) -> bool {
        matches!(self, SetRatio::Infinite)
    }
}

impl<P: fmt::Display> fmt::Display for SetRatio<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetRatio::Finite(v) => write!(f, "{v}"),
            SetRatio::Infinite => f.write_str("inf"),
        }
    }
}

/// True when the decimal expansion of `value` terminates.
pub fn is_terminating(value: &Rational) -> bool {
    let mut den = value.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while den.is_even() {
        den /= &two;
    }
    while (&den % &five).is_zero() {
        den /= &five;
    }
    den.is_one()
}

/// Exact decimal string for a terminating rational, `None` otherwise.
pub fn exact_decimal(value: &Rational) -> Option<String> {
    if !is_terminating(value) {
        return None;
    }
    let den = value.denom();
    let mut digits = 0usize;
    let mut scale = BigInt::one();
    while !(&scale % den).is_zero() {
        scale *= 10;
        digits += 1;
    }
    let scaled = value.numer() * (&scale / den);
    Some(format_scaled(&scaled, digits))
}

/// Decimal rendering: exact when terminating, otherwise rounded to
/// `significant` significant digits.
pub fn decimal_string(value: &Rational, significant: usize) -> String {
    if let Some(exact) = exact_decimal(value) {
        return exact;
    }
    rounded_decimal(value, significant)
}

/// Rounds half away from zero to `significant` significant digits.
pub fn rounded_decimal(value: &Rational, significant: usize) -> String {
    let significant = significant.max(1);
    if value.is_zero() {
        return String::from("0");
    }
    let negative = value.is_negative();
    let magnitude = value.abs();
    // exponent e with 10^e <= |v| < 10^(e+1)
    let mut exponent: i64 = magnitude.numer().to_string().len() as i64
        - magnitude.denom().to_string().len() as i64;
    let ten = Rational::from_integer(BigInt::from(10));
    loop {
        let lower = pow_rational(&ten, exponent);
        if magnitude < lower {
            exponent -= 1;
            continue;
        }
        if magnitude >= &lower * &ten {
            exponent += 1;
            continue;
        }
        break;
    }
    let frac_digits = significant as i64 - 1 - exponent;
    let scaled = &magnitude * pow_rational(&ten, frac_digits);
    let half = ratio(1, 2);
    let mut rounded = (scaled + half).floor().to_integer();
    if negative {
        rounded = -rounded;
    }
    if frac_digits >= 0 {
        trim_zeros(format_scaled(&rounded, frac_digits as usize))
    } else {
        let mut s = rounded.to_string();
        for _ in 0..(-frac_digits) {
            s.push('0');
        }
        s
    }
}

fn pow_rational(base: &Rational, exponent: i64) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exponent.unsigned_abs() {
        acc *= base;
    }
    if exponent < 0 {
        acc.recip()
    } else {
        acc
    }
}

fn format_scaled(scaled: &BigInt, digits: usize) -> String {
    let negative = scaled.sign() == Sign::Minus;
    let body = scaled.magnitude().to_string();
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if digits == 0 {
        out.push_str(&body);
        return out;
    }
    if body.len() <= digits {
        out.push_str("0.");
        for _ in 0..(digits - body.len()) {
            out.push('0');
        }
        out.push_str(&body);
    } else {
        let split = body.len() - digits;
        out.push_str(&body[..split]);
        out.push('.');
        out.push_str(&body[split..]);
    }
    out
}

fn trim_zeros(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

/// Parses a plain decimal (`-12`, `0.125`, `3.`) into an exact rational.
pub fn parse_decimal(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    let (negative, body) = match text.as_bytes()[0] {
        b'-' => (true, &text[1..]),
        b'+' => (false, &text[1..]),
        _ => (false, text),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => (&body[..pos], body[pos + 1..].parse::<i64>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(pos) => (&mantissa[..pos], &mantissa[pos + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mut digits = String::from(int_part);
    digits.push_str(frac_part);
    let numer: BigUint = if digits.is_empty() {
        BigUint::zero()
    } else {
        digits.parse().ok()?
    };
    let numer = BigInt::from_biguint(if negative { Sign::Minus } else { Sign::Plus }, numer);
    let value = Rational::new(numer, BigInt::one());
    let ten = Rational::from_integer(BigInt::from(10));
    Some(value * pow_rational(&ten, exponent - frac_part.len() as i64))
}

/// Parses `a/b`, an integer, or a decimal.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    parse_decimal(text)
}

/// Best rational approximation of `x` with denominator at most `max_den`
/// (continued-fraction convergents plus the best semiconvergent).
pub fn approximate_f64(x: f64, max_den: u64) -> Rational {
    assert!(x.is_finite(), "cannot approximate a non-finite value");
    let negative = x < 0.0;
    let target = exact_f64(x.abs());
    let (mut p0, mut q0, mut p1, mut q1) = (
        BigInt::zero(),
        BigInt::one(),
        BigInt::one(),
        BigInt::zero(),
    );
    let max_den = BigInt::from(max_den);
    let mut rest = target.clone();
    loop {
        let a = rest.floor().to_integer();
        let q2 = &q0 + &a * &q1;
        if q2 > max_den {
            let k = (&max_den - &q0) / &q1;
            let semi = Rational::new(&p0 + &k * &p1, &q0 + &k * &q1);
            let conv = Rational::new(p1.clone(), q1.clone());
            let best = if (&semi - &target).abs() < (&conv - &target).abs() {
                semi
            } else {
                conv
            };
            return if negative { -best } else { best };
        }
        let p2 = &p0 + &a * &p1;
        p0 = core::mem::replace(&mut p1, p2);
        q0 = core::mem::replace(&mut q1, q2);
        let frac = &rest - Rational::from_integer(a);
        if frac.is_zero() {
            let conv = Rational::new(p1, q1);
            return if negative { -conv } else { conv };
        }
        rest = frac.recip();
    }
}

/// The exact binary value of a finite `f64`.
pub fn exact_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}

pub(crate) fn sum_u64(values: impl IntoIterator<Item = u64>) -> u64 {
    values.into_iter().fold(0u64, |acc, v| {
        acc.checked_add(v).expect("cost total overflows u64")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&ratio(99, 10), 12), "9.9");
        assert_eq!(decimal_string(&ratio(-3, 8), 12), "-0.375");
        assert_eq!(decimal_string(&ratio(7, 1), 12), "7");
        assert_eq!(decimal_string(&ratio(1, 3), 12), "0.333333333333");
        assert_eq!(decimal_string(&ratio(2, 3), 4), "0.6667");
        assert_eq!(decimal_string(&ratio(143, 48), 12), "2.97916666667");
        assert_eq!(decimal_string(&ratio(-200_000, 3), 3), "-66700");
        assert_eq!(decimal_string(&ratio(1, 30_000), 2), "0.000033");
    }

    #[test]
    fn decimal_parsing() {
        assert_eq!(parse_decimal("0.125"), Some(ratio(1, 8)));
        assert_eq!(parse_decimal("-12"), Some(ratio(-12, 1)));
        assert_eq!(parse_decimal("1e-3"), Some(ratio(1, 1000)));
        assert_eq!(parse_decimal("2.5E2"), Some(ratio(250, 1)));
        assert_eq!(parse_decimal("abc"), None);
        assert_eq!(parse_rational("143/48"), Some(ratio(143, 48)));
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn approximation_respects_denominator() {
        let r = approximate_f64(core::f64::consts::PI, 1000);
        assert_eq!(r, ratio(355, 113));
        let r = approximate_f64(0.5, 10);
        assert_eq!(r, ratio(1, 2));
        let r = approximate_f64(0.123_456_789_123, 1_000_000_000);
        assert!(r.denom() <= &BigInt::from(1_000_000_000u64));
        assert!((rational_to_f64(&r) - 0.123_456_789_123).abs() < 1e-17 * 1e9);
    }

    #[test]
    fn set_ratio_orders_infinity_last() {
        let a: SetRatio<Rational> = SetRatio::Finite(ratio(100, 1));
        let b = SetRatio::Infinite;
        assert!(a < b);
        assert_eq!(b.to_string(), "inf");
    }

    #[test]
    fn huge_rationals_convert_to_f64() {
        let big = Rational::new(BigInt::from(10).pow(400), BigInt::from(10).pow(399) * 4);
        assert!((rational_to_f64(&big) - 2.5).abs() < 1e-12);
    }
}
