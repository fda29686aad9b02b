//! Global minimal models over Q (Laska, Kraus, Connell).
//!
//! Scale to an integral model, then at each prime remove the largest
//! admissible power `u = p^d` with `p^{4d} | c4`, `p^{6d} | c6`, backing off
//! by one at 2 and 3 when Kraus' congruence conditions fail, and rebuild
//! a reduced model from `(c4, c6)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::model::{rint, Transform, WeierstrassModel};
use crate::arith::rational::val_int;
use crate::arith::{factor, Factorization, Natural, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalModelResult {
    pub model: WeierstrassModel,
    /// Maps the input model onto `model`.
    pub transform: Transform,
    /// Factorization of `|disc(model)|`.
    pub disc_min: Factorization,
}

/// Smallest `D > 0` with `D^i a_i` integral for every coefficient.
fn integral_scaling(e: &WeierstrassModel) -> BigInt {
    let weights = [1u32, 2, 3, 4, 6];
    let mut den = BigInt::one();
    for c in e.coefficients() {
        den = den.lcm(c.denom());
    }
    if den.is_one() {
        return den;
    }
    let f = factor(den.magnitude()).expect("nonzero denominator");
    let mut d = BigInt::one();
    for (p, _) in f.entries() {
        let mut need = 0u32;
        for (c, w) in e.coefficients().iter().zip(weights) {
            if c.is_zero() {
                continue;
            }
            let vd = val_int(c.denom(), p).unwrap_or(0);
            let vn = val_int(c.numer(), p).unwrap_or(0);
            if vd > vn {
                need = need.max((vd - vn).div_ceil(w));
            }
        }
        d *= BigInt::from(p.clone()).pow(need);
    }
    d
}

fn valuation_or_max(n: &BigInt, p: &Natural) -> u32 {
    val_int(n, p).unwrap_or(u32::MAX)
}

/// Reduced integral model with invariants `c4`, `c6` (Kraus' conditions
/// assumed).
fn model_from_c4c6(c4: &BigInt, c6: &BigInt) -> Option<WeierstrassModel> {
    let twelve = BigInt::from(12);
    let mut b2 = (-c6).mod_floor(&twelve);
    if b2 > BigInt::from(6) {
        b2 -= &twelve;
    }
    let b4_num: BigInt = &b2 * &b2 - c4;
    if !(&b4_num % BigInt::from(24)).is_zero() {
        return None;
    }
    let b4: BigInt = b4_num / 24;
    let b6_num: BigInt = -(&b2 * &b2 * &b2) + BigInt::from(36) * &b2 * &b4 - c6;
    if !(&b6_num % BigInt::from(216)).is_zero() {
        return None;
    }
    let b6: BigInt = b6_num / 216;
    let two = BigInt::from(2);
    let a1 = b2.mod_floor(&two);
    let a3 = b6.mod_floor(&two);
    let a2 = (&b2 - &a1) / 4;
    let a4 = (&b4 - &a1 * &a3) / 2;
    let a6 = (&b6 - &a3) / 4;
    let r = |n: BigInt| Rational::from_integer(n);
    let e = WeierstrassModel::new(r(a1), r(a2), r(a3), r(a4), r(a6)).ok()?;
    (e.c4() == &r(c4.clone()) && e.c6() == &r(c6.clone())).then_some(e)
}

/// Change of variables taking `from` to `to`, given the scaling `u`.
fn transform_between(from: &WeierstrassModel, to: &WeierstrassModel, u: &Rational) -> Transform {
    let s = (u * to.a1() - from.a1()) / rint(2);
    let r = (u * u * to.a2() - from.a2() + &s * from.a1() + &s * &s) / rint(3);
    let t = (u * u * u * to.a3() - from.a3() - &r * from.a1()) / rint(2);
    Transform::new(u.clone(), r, s, t)
}

pub fn minimal_model(e: &WeierstrassModel) -> MinimalModelResult {
    let d = integral_scaling(e);
    let scale = Transform::scaling(Rational::new(BigInt::one(), d.clone()));
    let integral = e.transform(&scale);
    let c4 = integral.c4().numer().clone();
    let c6 = integral.c6().numer().clone();
    let disc = integral.discriminant().numer().clone();
    let disc_f = factor(disc.magnitude()).expect("nonsingular");
    let mut u = BigInt::one();
    for (p, vd) in disc_f.entries() {
        let v4 = valuation_or_max(&c4, p);
        let v6 = valuation_or_max(&c6, p);
        let mut dp = (vd / 12).min(v4 / 4).min(v6 / 6);
        if dp == 0 {
            continue;
        }
        let pb = BigInt::from(p.clone());
        match p.to_u32() {
            Some(2) => {
                let a = &c4 / pb.pow(4 * dp);
                let b = &c6 / pb.pow(6 * dp);
                let b4 = b.mod_floor(&BigInt::from(4));
                let b32 = b.mod_floor(&BigInt::from(32));
                let kraus = b4 == BigInt::from(3)
                    || (a.mod_floor(&BigInt::from(16)).is_zero() && (b32.is_zero() || b32 == BigInt::from(8)));
                if !kraus {
                    dp -= 1;
                }
            }
            Some(3) => {
                if v6 == 6 * dp + 2 {
                    dp -= 1;
                }
            }
            _ => {}
        }
        u *= pb.pow(dp);
    }
    let u4 = u.pow(4);
    let u6 = u.pow(6);
    let model = model_from_c4c6(&(&c4 / &u4), &(&c6 / &u6)).expect("Kraus conditions hold after adjustment");
    let u_int = Rational::from_integer(u);
    let w2 = transform_between(&integral, &model, &u_int);
    debug_assert_eq!(integral.transform(&w2), model);
    let transform = scale.then(&w2);
    let disc_min = factor(model.discriminant().numer().magnitude()).expect("nonsingular");
    MinimalModelResult { model, transform, disc_min }
}

/// `true` when the model is integral and its discriminant matches the
/// minimal one.
pub fn is_globally_minimal(e: &WeierstrassModel) -> bool {
    e.is_integral() && minimal_model(e).model.discriminant().abs() == e.discriminant().abs()
}
