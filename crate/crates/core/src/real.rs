//! Fixed-point binary reals backed by big integers.
//!
//! A [`Real`] is `mantissa / 2^bits`. Every value used by the oracle lives in
//! a modest range (integrands on `[0, 1]`, constants below 4, coefficients of
//! moderate size), so a fixed binary point gives absolute precision control
//! without an exponent. Addition and subtraction are exact; multiplication and
//! division truncate toward negative infinity, so each introduces at most one
//! unit in the last place.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Bits of precision needed to hold `digits` decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32
}

#[derive(Clone)]
pub struct Real {
    mant: BigInt,
    bits: u32,
}

impl Real {
    pub fn zero(bits: u32) -> Self {
        Real { mant: BigInt::zero(), bits }
    }

    pub fn one(bits: u32) -> Self {
        Real { mant: BigInt::one() << bits, bits }
    }

    pub fn from_int(v: i64, bits: u32) -> Self {
        Real { mant: BigInt::from(v) << bits, bits }
    }

    /// Nearest representable value to an exact rational.
    pub fn from_ratio(r: &BigRational, bits: u32) -> Self {
        let num = r.numer() << (bits + 1);
        let den = r.denom();
        // round half up: floor((2 n 2^b + d) / 2d)
        let mant = (num + den).div_floor(&(den << 1));
        Real { mant, bits }
    }

    /// Exact conversion of a finite `f64`, rounded to `bits`.
    pub fn from_f64(v: f64, bits: u32) -> Option<Self> {
        BigRational::from_float(v).map(|r| Real::from_ratio(&r, bits))
    }

    /// Parse `[-]digits[.digits][e[+|-]exp]`, rounding to `bits`.
    pub fn parse_decimal(s: &str, bits: u32) -> Option<Self> {
        let (body, exp) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
            None => (s, 0),
        };
        let (neg, body) = match body.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, body),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
            return None;
        }
        let digits: BigInt = format!("0{int_part}{frac_part}").parse().ok()?;
        let scale = exp - frac_part.len() as i32;
        let ten = BigInt::from(10u32);
        let r = if scale >= 0 {
            BigRational::from_integer(digits * ten.pow(scale as u32))
        } else {
            BigRational::new(digits, ten.pow((-scale) as u32))
        };
        let r = if neg { -r } else { r };
        Some(Real::from_ratio(&r, bits))
    }

    /// `10^-k` rounded to `bits`.
    pub fn pow10_neg(k: u32, bits: u32) -> Self {
        let den = BigInt::from(10u32).pow(k);
        Real::from_ratio(&BigRational::new(BigInt::one(), den), bits)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    /// Re-express at a different precision (truncating when narrowing).
    pub fn with_bits(&self, bits: u32) -> Self {
        let mant = match bits.cmp(&self.bits) {
            Ordering::Equal => self.mant.clone(),
            Ordering::Greater => &self.mant << (bits - self.bits),
            Ordering::Less => &self.mant >> (self.bits - bits),
        };
        Real { mant, bits }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Self {
        Real { mant: self.mant.abs(), bits: self.bits }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        Real { mant: &self.mant * k, bits: self.bits }
    }

    pub fn div_int(&self, k: i64) -> Self {
        assert!(k != 0, "division by zero");
        Real { mant: self.mant.div_floor(&BigInt::from(k)), bits: self.bits }
    }

    pub fn mul_ratio(&self, r: &BigRational) -> Self {
        Real { mant: (&self.mant * r.numer()).div_floor(r.denom()), bits: self.bits }
    }

    /// Multiply by `2^k`.
    pub fn shl(&self, k: u32) -> Self {
        Real { mant: &self.mant << k, bits: self.bits }
    }

    /// Divide by `2^k`.
    pub fn shr(&self, k: u32) -> Self {
        Real { mant: &self.mant >> k, bits: self.bits }
    }

    pub fn powi(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Real::one(self.bits);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of a negative value");
        Real { mant: (&self.mant << self.bits).sqrt(), bits: self.bits }
    }

    pub fn recip(&self) -> Self {
        &Real::one(self.bits) / self
    }

    pub fn to_f64(&self) -> f64 {
        // Keep ~60 significant bits; enough for an f64 approximation.
        let len = self.mant.bits();
        let drop = len.saturating_sub(60);
        let top = (&self.mant >> drop).to_f64().unwrap_or(f64::NAN);
        top * 2f64.powi(drop as i32 - self.bits as i32)
    }

    /// Position of the leading bit relative to the binary point: `x ≈ 2^e`.
    pub(crate) fn log2_floor(&self) -> i64 {
        self.mant.bits() as i64 - 1 - i64::from(self.bits)
    }

    /// Decimal rendering with exactly `frac` digits after the point, rounded
    /// to nearest.
    pub fn to_fixed_string(&self, frac: u32) -> String {
        let scale = BigInt::from(10u32).pow(frac);
        let num = (&self.mant * scale) << 1u32;
        let den = BigInt::one() << (self.bits + 1);
        let scaled = (num + (BigInt::one() << self.bits)).div_floor(&den);
        let neg = scaled.sign() == Sign::Minus;
        let digits = scaled.abs().to_string();
        let frac = frac as usize;
        let padded =
            if digits.len() <= frac { format!("{}{}", "0".repeat(frac + 1 - digits.len()), digits) } else { digits };
        let (int_part, frac_part) = padded.split_at(padded.len() - frac);
        let sign = if neg { "-" } else { "" };
        if frac == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }

    /// Decimal rendering with `sig` significant digits in positional
    /// notation.
    pub fn to_sig_string(&self, sig: u32) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let approx = self.abs().to_f64();
        let mut exp10 = approx.log10().floor() as i64;
        // f64 estimate may be off by one at powers of ten; the rendering
        // below tolerates that by re-checking the leading digit count.
        let frac = |e: i64| (i64::from(sig) - 1 - e).max(0) as u32;
        let mut s = self.to_fixed_string(frac(exp10));
        let lead = s.trim_start_matches('-').split('.').next().unwrap_or("").len() as i64;
        if exp10 >= 0 && lead != exp10 + 1 {
            exp10 = lead - 1;
            s = self.to_fixed_string(frac(exp10));
        }
        s
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.to_sig_string(25))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (f64::from(self.bits) / std::f64::consts::LOG2_10).floor() as u32;
        f.write_str(&self.to_sig_string(digits.max(1)))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Real {}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Real {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.bits == other.bits {
            self.mant.cmp(&other.mant)
        } else {
            let bits = self.bits.max(other.bits);
            self.with_bits(bits).mant.cmp(&other.with_bits(bits).mant)
        }
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { mant: -&self.mant, bits: self.bits }
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { mant: -self.mant, bits: self.bits }
    }
}

impl Add<&Real> for &Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        debug_assert_eq!(self.bits, rhs.bits);
        Real { mant: &self.mant + &rhs.mant, bits: self.bits }
    }
}

impl Sub<&Real> for &Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        debug_assert_eq!(self.bits, rhs.bits);
        Real { mant: &self.mant - &rhs.mant, bits: self.bits }
    }
}

impl Mul<&Real> for &Real {
    type Output = Real;
    fn mul(self, rhs: &Real) -> Real {
        debug_assert_eq!(self.bits, rhs.bits);
        Real { mant: (&self.mant * &rhs.mant) >> self.bits, bits: self.bits }
    }
}

impl Div<&Real> for &Real {
    type Output = Real;
    fn div(self, rhs: &Real) -> Real {
        debug_assert_eq!(self.bits, rhs.bits);
        assert!(!rhs.is_zero(), "division by zero");
        Real { mant: (&self.mant << self.bits).div_floor(&rhs.mant), bits: self.bits }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real { (&self).$m(&rhs) }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real { (&self).$m(rhs) }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real { self.$m(&rhs) }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

/// Elementary functions at the precision of their argument.
///
/// Each routine works with a few extra guard bits internally and truncates
/// back, so results are accurate to a small number of ulps.
pub mod functions {
    use super::Real;

    const GUARD: u32 = 24;

    fn below(x: &Real, bits: u32) -> bool {
        // |x| < 2^-bits
        x.is_zero() || x.log2_floor() < -i64::from(bits)
    }

    /// `atan(1/k)` by the Gregory series.
    fn atan_inv(k: i64, bits: u32) -> Real {
        let k2 = k * k;
        let mut term = Real::one(bits).div_int(k);
        let mut sum = term.clone();
        let mut i: i64 = 1;
        loop {
            term = term.div_int(k2);
            if term.is_zero() {
                break;
            }
            let t = term.div_int(2 * i + 1);
            sum = if i % 2 == 1 { &sum - &t } else { &sum + &t };
            i += 1;
        }
        sum
    }

    /// `atanh(1/k)`.
    fn atanh_inv(k: i64, bits: u32) -> Real {
        let k2 = k * k;
        let mut term = Real::one(bits).div_int(k);
        let mut sum = term.clone();
        let mut i: i64 = 1;
        loop {
            term = term.div_int(k2);
            if term.is_zero() {
                break;
            }
            sum = &sum + &term.div_int(2 * i + 1);
            i += 1;
        }
        sum
    }

    /// π via Machin's formula.
    pub fn pi(bits: u32) -> Real {
        let w = bits + GUARD;
        let v = &atan_inv(5, w).mul_int(16) - &atan_inv(239, w).mul_int(4);
        v.with_bits(bits)
    }

    /// ln 2 = 18 atanh(1/26) − 2 atanh(1/4801) + 8 atanh(1/8749).
    pub fn ln2(bits: u32) -> Real {
        let w = bits + GUARD;
        let v = &(&atanh_inv(26, w).mul_int(18) - &atanh_inv(4801, w).mul_int(2)) + &atanh_inv(8749, w).mul_int(8);
        v.with_bits(bits)
    }

    /// Sine and cosine by Taylor series after halving the argument.
    pub fn sin_cos(x: &Real) -> (Real, Real) {
        const HALVINGS: u32 = 6;
        let bits = x.bits();
        let w = bits + GUARD + 2 * HALVINGS;
        let y = x.with_bits(w).shr(HALVINGS);
        let y2 = &y * &y;

        let mut sin = y.clone();
        let mut term = y.clone();
        let mut k: i64 = 1;
        while !below(&term, w) {
            term = (-(&term * &y2)).div_int((2 * k) * (2 * k + 1));
            sin = &sin + &term;
            k += 1;
        }
        let mut cos = Real::one(w);
        let mut term = Real::one(w);
        let mut k: i64 = 1;
        while !below(&term, w) {
            term = (-(&term * &y2)).div_int((2 * k - 1) * (2 * k));
            cos = &cos + &term;
            k += 1;
        }
        for _ in 0..HALVINGS {
            let s2 = (&sin * &cos).shl(1);
            let c2 = &(&cos * &cos).shl(1) - &Real::one(w);
            sin = s2;
            cos = c2;
        }
        (sin.with_bits(bits), cos.with_bits(bits))
    }

    pub fn tan(x: &Real) -> Real {
        let w = x.bits() + GUARD;
        let (s, c) = sin_cos(&x.with_bits(w));
        (&s / &c).with_bits(x.bits())
    }

    pub fn cos(x: &Real) -> Real {
        sin_cos(x).1
    }

    /// Natural logarithm of a positive value.
    pub fn ln(x: &Real) -> Real {
        assert!(!x.is_negative() && !x.is_zero(), "ln of a non-positive value");
        let bits = x.bits();
        let w = bits + GUARD;
        let xw = x.with_bits(w);
        // x = m 2^e with m in [1, 2)
        let e = xw.log2_floor();
        let m = if e >= 0 { xw.shr(e as u32) } else { xw.shl((-e) as u32) };
        let one = Real::one(w);
        let z = &(&m - &one) / &(&m + &one);
        let z2 = &z * &z;
        let mut term = z.clone();
        let mut sum = z;
        let mut k: i64 = 1;
        while !below(&term, w) {
            term = &term * &z2;
            sum = &sum + &term.div_int(2 * k + 1);
            k += 1;
        }
        let v = &sum.shl(1) + &ln2(w).mul_int(e);
        v.with_bits(bits)
    }

    /// Arctangent; two argument halvings bring `|x| ≤ 1` under `tan(π/16)`.
    pub fn atan(x: &Real) -> Real {
        let bits = x.bits();
        let w = bits + GUARD;
        let one = Real::one(w);
        let mut y = x.with_bits(w);
        if y.is_negative() {
            return -atan(&-x);
        }
        if y > one {
            let inv = y.recip();
            let v = &pi(w).shr(1) - &atan(&inv);
            return v.with_bits(bits);
        }
        const HALVINGS: u32 = 2;
        for _ in 0..HALVINGS {
            let r = (&one + &(&y * &y)).sqrt();
            y = &y / &(&one + &r);
        }
        let y2 = &y * &y;
        let mut term = y.clone();
        let mut sum = y;
        let mut k: i64 = 1;
        while !below(&term, w) {
            term = -(&term * &y2);
            sum = &sum + &term.div_int(2 * k + 1);
            k += 1;
        }
        sum.shl(HALVINGS).with_bits(bits)
    }
}

#[cfg(test)]
mod tests {
    use super::functions::*;
    use super::*;

    const PI_50: &str = "3.14159265358979323846264338327950288419716939937511";
    const LN2_50: &str = "0.69314718055994530941723212145817656807550013436026";

    fn close(a: &Real, b: &Real, digits: u32) -> bool {
        (a - b).abs() < Real::pow10_neg(digits, a.bits())
    }

    #[test]
    fn pi_and_ln2_match_reference_digits() {
        let bits = bits_for_digits(60);
        assert_eq!(pi(bits).to_fixed_string(50), PI_50);
        assert_eq!(ln2(bits).to_fixed_string(50), LN2_50);
    }

    #[test]
    fn trig_identities_hold() {
        let bits = bits_for_digits(80);
        let x = Real::from_ratio(&BigRational::new(7.into(), 10.into()), bits);
        let (s, c) = sin_cos(&x);
        assert!(close(&(&(&s * &s) + &(&c * &c)), &Real::one(bits), 70));
        // atan(tan x) = x
        assert!(close(&atan(&tan(&x)), &x, 70));
        // tan(π/4) = 1
        let q = pi(bits).shr(2);
        assert!(close(&tan(&q), &Real::one(bits), 70));
        // atan(1) = π/4, atan(2) = π/2 − atan(1/2)
        assert!(close(&atan(&Real::one(bits)), &q, 70));
    }

    #[test]
    fn ln_inverts_known_values() {
        let bits = bits_for_digits(80);
        let two = Real::from_int(2, bits);
        assert!(close(&ln(&two), &ln2(bits), 70));
        let eighth = Real::one(bits).shr(3);
        assert!(close(&ln(&eighth), &ln2(bits).mul_int(-3), 70));
        // ln(cos(π/4)) = −ln2/2
        let c = cos(&pi(bits).shr(2));
        assert!(close(&ln(&c), &(-ln2(bits).shr(1)), 70));
    }

    #[test]
    fn decimal_rendering() {
        let bits = 128;
        assert_eq!(Real::from_int(-3, bits).to_fixed_string(2), "-3.00");
        let r = Real::from_ratio(&BigRational::new(1.into(), 8.into()), bits);
        assert_eq!(r.to_fixed_string(3), "0.125");
        assert_eq!(r.to_fixed_string(0), "0");
        assert_eq!(r.to_sig_string(2), "0.13");
        let p = pi(bits_for_digits(30));
        assert_eq!(p.to_sig_string(20), "3.1415926535897932385");
        assert_eq!(Real::from_int(100, bits).to_sig_string(3), "100");
        assert_eq!(Real::from_int(99, bits).to_sig_string(5), "99.000");
    }

    #[test]
    fn decimal_parsing() {
        let bits = 200;
        assert_eq!(Real::parse_decimal("1e-35", bits).unwrap(), Real::pow10_neg(35, bits));
        assert_eq!(Real::parse_decimal("-2.5", bits).unwrap(), Real::from_int(-5, bits).shr(1));
        assert_eq!(Real::parse_decimal("0.125E1", bits).unwrap(), Real::from_int(5, bits).shr(2));
        assert_eq!(Real::parse_decimal(".5", bits).unwrap(), Real::one(bits).shr(1));
        for bad in ["", "-", "1e", "abc", "1.2.3", "--1", "1e-x"] {
            assert!(Real::parse_decimal(bad, bits).is_none(), "{bad}");
        }
    }

    #[test]
    fn ratio_rounds_to_nearest() {
        let r = BigRational::new(1.into(), 3.into());
        let x = Real::from_ratio(&r, 4);
        // 1/3 · 16 = 5.33 → 5
        assert_eq!(x.mantissa(), &BigInt::from(5));
        let r = BigRational::new((-1).into(), 3.into());
        assert_eq!(Real::from_ratio(&r, 4).mantissa(), &BigInt::from(-5));
    }
}
