//! Double-double reals (about 106 bits of mantissa) for the extended
//! precision mode of the Szpiro ratio computations.
//!
//! Only what the ratio kernels need: field operations, ordering and logs of
//! positive integers. Logs are evaluated in 256-bit fixed point with the
//! `atanh` series and then split into a (hi, lo) pair.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Self { hi, lo }
    }

    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    /// Natural log of a positive integer, correct to roughly 2^-200 before
    /// rounding to double-double.
    pub fn ln_natural(n: &BigUint) -> Self {
        assert!(!n.is_zero(), "log of zero");
        from_fixed(&ln_fixed(n))
    }
}

impl PartialEq for DoubleDouble {
    fn eq(&self, other: &Self) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * Self::from_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * Self::from_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo } + Self::from_f64(q3)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

const FIXED_BITS: u64 = 256;

/// 2 * atanh(num/den) scaled by 2^FIXED_BITS, for 0 <= num/den <= 1/3.
fn atanh2_fixed(num: &BigInt, den: &BigInt) -> BigInt {
    let one = BigInt::one() << FIXED_BITS;
    let s = (&one * num) / den;
    let s2 = (&s * &s) >> FIXED_BITS;
    let mut term = s;
    let mut sum = BigInt::zero();
    let mut k = 1u32;
    while !term.is_zero() {
        sum += &term / BigInt::from(k);
        term = (&term * &s2) >> FIXED_BITS;
        k += 2;
    }
    sum * 2
}

fn ln2_fixed() -> &'static BigInt {
    static LN2: OnceLock<BigInt> = OnceLock::new();
    LN2.get_or_init(|| atanh2_fixed(&BigInt::one(), &BigInt::from(3)))
}

fn ln_fixed(n: &BigUint) -> BigInt {
    // n = 2^k * m with m in [1, 2); ln m = 2 atanh((m - 1) / (m + 1)).
    let k = n.bits() - 1;
    let n = BigInt::from(n.clone());
    let (num, den) = (&n - (BigInt::one() << k), &n + (BigInt::one() << k));
    ln2_fixed() * BigInt::from(k) + atanh2_fixed(&num, &den)
}

fn from_fixed(v: &BigInt) -> DoubleDouble {
    let scale = 2f64.powi(-(FIXED_BITS as i32));
    let hi = v.to_f64().unwrap() * scale;
    let hi_fixed = f64_to_fixed(hi);
    let rest = v - hi_fixed;
    let lo = rest.to_f64().unwrap() * scale;
    DoubleDouble::new(hi, lo)
}

fn f64_to_fixed(x: f64) -> BigInt {
    if x == 0.0 {
        return BigInt::zero();
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let mant = if exp == 0 { (bits & ((1 << 52) - 1)) << 1 } else { (bits & ((1 << 52) - 1)) | (1 << 52) };
    let e = exp - 1075 + FIXED_BITS as i64;
    let m = BigInt::from(mant);
    let v = if e >= 0 { m << e as u64 } else { m >> (-e) as u64 };
    if x.is_sign_negative() {
        -v
    } else {
        v
    }
}

#[allow(dead_code)]
fn abs_fixed(v: &BigInt) -> BigInt {
    v.abs()
}
