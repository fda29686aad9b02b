//! Floating-point p-adic numbers: `p^val * unit` with the unit known modulo
//! `p^prec`. Used to follow large multiples of a point at a bad prime
//! without the coordinate blowup of exact rational arithmetic.
//!
//! Operations that would divide by something indistinguishable from zero
//! return `None`; callers restart with more precision.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::{val_int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Padic {
    /// Known only to be divisible by `p^abs`.
    Zero { abs: i64 },
    Unit { val: i64, unit: BigInt, prec: u32 },
}

impl Padic {
    pub fn valuation(&self) -> Option<i64> {
        match self {
            Padic::Zero { .. } => None,
            Padic::Unit { val, .. } => Some(*val),
        }
    }

    /// Absolute precision: the value is known modulo `p^abs`.
    pub fn abs_prec(&self) -> i64 {
        match self {
            Padic::Zero { abs } => *abs,
            Padic::Unit { val, prec, .. } => val + *prec as i64,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Padic::Zero { .. })
    }
}

/// Arithmetic context for a fixed prime and working relative precision.
#[derive(Clone, Debug)]
pub struct PadicField {
    p: BigInt,
    prec: u32,
    powers: Vec<BigInt>,
}

impl PadicField {
    pub fn new(p: &BigUint, prec: u32) -> Self {
        let p = BigInt::from_biguint(Sign::Plus, p.clone());
        let mut powers = Vec::with_capacity(prec as usize + 1);
        let mut acc = BigInt::one();
        for _ in 0..=prec {
            powers.push(acc.clone());
            acc *= &p;
        }
        Self { p, prec, powers }
    }

    pub fn prime(&self) -> &BigInt {
        &self.p
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    fn pow(&self, k: u32) -> BigInt {
        match self.powers.get(k as usize) {
            Some(v) => v.clone(),
            None => num_traits::pow(self.p.clone(), k as usize),
        }
    }

    /// Strips factors of p from a nonzero integer.
    fn split(&self, n: &BigInt) -> (i64, BigInt) {
        let mut m = n.clone();
        let mut v = 0;
        loop {
            let (q, r) = m.div_rem(&self.p);
            if !r.is_zero() {
                return (v, m);
            }
            m = q;
            v += 1;
        }
    }

    fn normalize(&self, base_val: i64, residue: BigInt, abs: i64) -> Padic {
        let modulus_exp = abs - base_val;
        if modulus_exp <= 0 {
            return Padic::Zero { abs };
        }
        let modulus = self.pow(modulus_exp as u32);
        let r = residue.mod_floor(&modulus);
        if r.is_zero() {
            return Padic::Zero { abs };
        }
        let (w, unit) = self.split(&r);
        let val = base_val + w;
        let prec = (abs - val) as u32;
        let unit = unit.mod_floor(&self.pow(prec));
        Padic::Unit { val, unit, prec }
    }

    pub fn from_int(&self, n: &BigInt) -> Padic {
        if n.is_zero() {
            return Padic::Zero { abs: i64::MAX / 4 };
        }
        let (v, u) = self.split(n);
        Padic::Unit { val: v, unit: u.mod_floor(&self.pow(self.prec)), prec: self.prec }
    }

    pub fn from_rational(&self, r: &Rational) -> Padic {
        if r.is_zero() {
            return Padic::Zero { abs: i64::MAX / 4 };
        }
        let (vn, un) = self.split(r.numer());
        let (vd, ud) = self.split(r.denom());
        let m = self.pow(self.prec);
        let inv = ud.mod_floor(&m).modinv(&m).expect("unit denominator is invertible");
        Padic::Unit { val: vn - vd, unit: (un * inv).mod_floor(&m), prec: self.prec }
    }

    pub fn neg(&self, a: &Padic) -> Padic {
        match a {
            Padic::Zero { .. } => a.clone(),
            Padic::Unit { val, unit, prec } => {
                let m = self.pow(*prec);
                Padic::Unit { val: *val, unit: (-unit).mod_floor(&m), prec: *prec }
            }
        }
    }

    pub fn add(&self, a: &Padic, b: &Padic) -> Padic {
        let abs = a.abs_prec().min(b.abs_prec());
        match (a, b) {
            (Padic::Zero { .. }, Padic::Zero { .. }) => Padic::Zero { abs },
            (Padic::Zero { .. }, Padic::Unit { val, unit, .. }) | (Padic::Unit { val, unit, .. }, Padic::Zero { .. }) => {
                self.normalize(*val, unit.clone(), abs)
            }
            (Padic::Unit { val: va, unit: ua, .. }, Padic::Unit { val: vb, unit: ub, .. }) => {
                let v = (*va).min(*vb);
                if v >= abs {
                    return Padic::Zero { abs };
                }
                let sa = ua * self.pow((va - v) as u32);
                let sb = ub * self.pow((vb - v) as u32);
                self.normalize(v, sa + sb, abs)
            }
        }
    }

    pub fn sub(&self, a: &Padic, b: &Padic) -> Padic {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Padic, b: &Padic) -> Padic {
        match (a, b) {
            (Padic::Zero { abs: x }, Padic::Zero { abs: y }) => Padic::Zero { abs: x.saturating_add(*y) },
            (Padic::Zero { abs }, Padic::Unit { val, .. }) | (Padic::Unit { val, .. }, Padic::Zero { abs }) => {
                Padic::Zero { abs: abs.saturating_add(*val) }
            }
            (Padic::Unit { val: va, unit: ua, prec: pa }, Padic::Unit { val: vb, unit: ub, prec: pb }) => {
                let prec = (*pa).min(*pb);
                let m = self.pow(prec);
                Padic::Unit { val: va + vb, unit: (ua * ub).mod_floor(&m), prec }
            }
        }
    }

    pub fn mul_int(&self, a: &Padic, k: i64) -> Padic {
        self.mul(a, &self.from_int(&BigInt::from(k)))
    }

    /// `a / b`, or `None` when `b` cannot be distinguished from zero.
    pub fn div(&self, a: &Padic, b: &Padic) -> Option<Padic> {
        let Padic::Unit { val: vb, unit: ub, prec: pb } = b else {
            return None;
        };
        Some(match a {
            Padic::Zero { abs } => Padic::Zero { abs: abs - vb },
            Padic::Unit { val: va, unit: ua, prec: pa } => {
                let prec = (*pa).min(*pb);
                let m = self.pow(prec);
                let inv = ub.mod_floor(&m).modinv(&m)?;
                Padic::Unit { val: va - vb, unit: (ua * inv).mod_floor(&m), prec }
            }
        })
    }
}

/// Exact valuation of a nonzero rational at `p`, via the p-adic type's
/// conventions (used by tests as a cross-check).
pub fn exact_valuation(r: &Rational, p: &BigUint) -> Option<i64> {
    let vn = val_int(r.numer(), p)? as i64;
    let vd = val_int(r.denom(), p).unwrap_or(0) as i64;
    Some(vn - vd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat_frac;

    fn field(p: u32) -> PadicField {
        PadicField::new(&BigUint::from(p), 30)
    }

    #[test]
    fn valuations_follow_rationals() {
        let f = field(5);
        for (n, d) in [(50, 3), (7, 125), (-625, 2), (1, 1)] {
            let r = rat_frac(n, d);
            assert_eq!(f.from_rational(&r).valuation(), exact_valuation(&r, &BigUint::from(5u32)));
        }
    }

    #[test]
    fn field_operations_agree_with_rationals() {
        let f = field(7);
        let a = rat_frac(49, 3);
        let b = rat_frac(-2, 21);
        let pa = f.from_rational(&a);
        let pb = f.from_rational(&b);
        assert_eq!(f.mul(&pa, &pb), f.from_rational(&(&a * &b)));
        assert_eq!(f.div(&pa, &pb).unwrap(), f.from_rational(&(&a / &b)));
        // Sums lose absolute precision down to the smaller operand's.
        let s = f.add(&pa, &pb);
        let exact = f.from_rational(&(&a + &b));
        assert_eq!(s.valuation(), exact.valuation());
        let diff = f.sub(&s, &exact);
        assert!(diff.is_zero());
    }

    #[test]
    fn cancellation_becomes_zero() {
        let f = field(3);
        let a = f.from_rational(&rat_frac(1, 2));
        let z = f.sub(&a, &a);
        assert!(z.is_zero());
        assert!(f.div(&a, &z).is_none());
    }
}
