//! Multiprecision scalars.
//!
//! Reals are MPFR floats (`rug::Float`). Complex numbers are a thin pair of
//! floats; MPC is not required. Every public routine in this crate takes a
//! target precision in bits and works internally with [`GUARD_BITS`] extra.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

/// Extra bits carried by internal computations on top of the requested precision.
pub const GUARD_BITS: u32 = 64;

/// Smallest precision accepted by the public API.
pub const MIN_PREC: u32 = 64;

pub fn check_prec(prec: u32) -> Result<()> {
    if prec < MIN_PREC {
        return Err(Error::Precision(prec));
    }
    Ok(())
}

/// Working precision for a given target precision.
#[inline]
pub fn work(prec: u32) -> u32 {
    prec + GUARD_BITS
}

#[inline]
pub fn fl<T>(prec: u32, v: T) -> Float
where
    Float: rug::Assign<T>,
{
    Float::with_val(prec, v)
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub fn two_pi(prec: u32) -> Float {
    pi(prec) * 2u32
}

/// `2^e` as a float with a 64-bit mantissa.
pub fn pow2(e: i64) -> Float {
    let mut x = Float::with_val(64, 1);
    x <<= e as i32;
    x
}

/// log2 of |x|, or -inf for zero.
pub fn log2_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    m.abs().log2() + e as f64
}

/// A value together with a nonnegative error estimate.
///
/// Error estimates are forward heuristics; the precision-doubling tests are
/// what validates them.
#[derive(Clone, Debug)]
pub struct Estimate {
    pub value: Float,
    pub error: Float,
}

impl Estimate {
    pub fn new(value: Float, error: Float) -> Self {
        debug_assert!(error.is_finite() && !error.is_sign_negative());
        Estimate { value, error }
    }

    pub fn exact(value: Float) -> Self {
        Estimate { value, error: Float::with_val(64, 0) }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

/// Complex number with MPFR real and imaginary parts.
#[derive(Clone, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.20e} {:+.20e}i)", self.re.to_f64(), self.im.to_f64())
    }
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn one(prec: u32) -> Self {
        BigComplex { re: fl(prec, 1), im: Float::new(prec) }
    }

    pub fn i(prec: u32) -> Self {
        BigComplex { re: Float::new(prec), im: fl(prec, 1) }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        BigComplex { re: fl(prec, re), im: fl(prec, im) }
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::new(re.prec());
        BigComplex { re, im }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    /// Same value rounded to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        BigComplex { re: fl(prec, &self.re), im: fl(prec, &self.im) }
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        fl(p, self.re.square_ref()) + fl(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        let p = self.prec();
        fl(p, self.re.hypot_ref(&self.im))
    }

    pub fn arg(&self) -> Float {
        let p = self.prec();
        fl(p, self.im.atan2_ref(&self.re))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn scale(&self, s: &Float) -> Self {
        let p = self.prec().max(s.prec());
        BigComplex { re: fl(p, &self.re * s), im: fl(p, &self.im * s) }
    }

    /// Multiply by `i^n` exactly.
    pub fn mul_i_pow(&self, n: i64) -> Self {
        match n.rem_euclid(4) {
            0 => self.clone(),
            1 => BigComplex { re: -self.im.clone(), im: self.re.clone() },
            2 => BigComplex { re: -self.re.clone(), im: -self.im.clone() },
            _ => BigComplex { re: self.im.clone(), im: -self.re.clone() },
        }
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        BigComplex { re: fl(n.prec(), &self.re / &n), im: -fl(n.prec(), &self.im / &n) }
    }

    pub fn div(&self, other: &Self) -> Self {
        self * &other.recip()
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let r = fl(p, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        BigComplex { re: fl(p, &r * &c), im: r * s }
    }

    /// Principal logarithm, imaginary part in (-pi, pi].
    pub fn ln(&self) -> Self {
        let p = self.prec();
        let n = self.norm_sqr();
        BigComplex { re: n.ln() / 2u32, im: fl(p, self.im.atan2_ref(&self.re)) }
    }

    pub fn sqr(&self) -> Self {
        self * self
    }

    pub fn powi(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = BigComplex::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    /// Distance `|self - other|`.
    pub fn dist(&self, other: &Self) -> Float {
        (self - other).abs()
    }
}

impl<'a> Add<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, o: &'a BigComplex) -> BigComplex {
        let p = self.prec().max(o.prec());
        BigComplex { re: fl(p, &self.re + &o.re), im: fl(p, &self.im + &o.im) }
    }
}

impl<'a> Sub<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &'a BigComplex) -> BigComplex {
        let p = self.prec().max(o.prec());
        BigComplex { re: fl(p, &self.re - &o.re), im: fl(p, &self.im - &o.im) }
    }
}

impl<'a> Mul<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn mul(self, o: &'a BigComplex) -> BigComplex {
        let p = self.prec().max(o.prec());
        let ac = fl(p, &self.re * &o.re);
        let bd = fl(p, &self.im * &o.im);
        let ad = fl(p, &self.re * &o.im);
        let bc = fl(p, &self.im * &o.re);
        BigComplex { re: ac - bd, im: ad + bc }
    }
}

impl Add for BigComplex {
    type Output = BigComplex;
    fn add(self, o: BigComplex) -> BigComplex {
        &self + &o
    }
}

impl Sub for BigComplex {
    type Output = BigComplex;
    fn sub(self, o: BigComplex) -> BigComplex {
        &self - &o
    }
}

impl Mul for BigComplex {
    type Output = BigComplex;
    fn mul(self, o: BigComplex) -> BigComplex {
        &self * &o
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex { re: -self.re, im: -self.im }
    }
}

impl<'a> AddAssign<&'a BigComplex> for BigComplex {
    fn add_assign(&mut self, o: &'a BigComplex) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl<'a> SubAssign<&'a BigComplex> for BigComplex {
    fn sub_assign(&mut self, o: &'a BigComplex) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl<'a> MulAssign<&'a BigComplex> for BigComplex {
    fn mul_assign(&mut self, o: &'a BigComplex) {
        *self = &*self * o;
    }
}

/// Binomial coefficient as an exact integer.
pub fn binomial(n: u32, k: u32) -> rug::Integer {
    rug::Integer::from(rug::Integer::binomial_u(n, k))
}

pub fn factorial(n: u32) -> rug::Integer {
    rug::Integer::from(rug::Integer::factorial(n))
}

/// `x^e` for a float and a signed integer exponent.
pub fn powi(x: &Float, e: i32) -> Float {
    fl(x.prec(), x.pow(e))
}

/// Render a float with a fixed number of significant decimal digits.
pub fn to_decimal(x: &Float, digits: usize) -> String {
    x.to_string_radix(10, Some(digits))
}

/// Decimal digits needed for a bit-exact round trip at `prec` bits.
pub fn roundtrip_digits(prec: u32) -> usize {
    (prec as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2
}

pub fn parse_float(prec: u32, s: &str) -> Option<Float> {
    Float::parse(s).ok().map(|p| Float::with_val(prec, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_exp_ln_roundtrip() {
        let z = BigComplex::from_f64(128, 0.3, -2.5);
        let w = z.exp().ln();
        assert!(w.dist(&z).to_f64() < 1e-35);
    }

    #[test]
    fn principal_branch_of_ln() {
        let z = BigComplex::from_f64(128, -1.0, 0.0);
        let l = z.ln();
        assert!((l.im.to_f64() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn i_powers_are_exact() {
        let z = BigComplex::from_f64(64, 2.0, 3.0);
        assert_eq!(z.mul_i_pow(4), z);
        assert_eq!(z.mul_i_pow(1), BigComplex::from_f64(64, -3.0, 2.0));
        assert_eq!(z.mul_i_pow(-1), BigComplex::from_f64(64, 3.0, -2.0));
    }

    #[test]
    fn decimal_roundtrip_is_bit_exact() {
        let x = pi(256) / 7u32;
        let s = to_decimal(&x, roundtrip_digits(256));
        assert_eq!(parse_float(256, &s).unwrap(), x);
    }
}
