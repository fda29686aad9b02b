use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::EllipticError;
use crate::arith::rational::{format_rational, naive_height};
use crate::arith::Rational;

/// A change of variables `x = u^2 x' + r`, `y = u^3 y' + s u^2 x' + t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transform {
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub u: Rational,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub r: Rational,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub s: Rational,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub t: Rational,
}

impl Transform {
    pub fn identity() -> Self {
        Self { u: Rational::one(), r: Rational::zero(), s: Rational::zero(), t: Rational::zero() }
    }

    pub fn new(u: Rational, r: Rational, s: Rational, t: Rational) -> Self {
        assert!(!u.is_zero(), "scaling must be nonzero");
        Self { u, r, s, t }
    }

    pub fn scaling(u: Rational) -> Self {
        Self::new(u, Rational::zero(), Rational::zero(), Rational::zero())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Transform) -> Transform {
        let (u1, r1, s1, t1) = (&self.u, &self.r, &self.s, &self.t);
        let (u2, r2, s2, t2) = (&next.u, &next.r, &next.s, &next.t);
        let u1sq = u1 * u1;
        Transform {
            u: u1 * u2,
            r: r1 + &u1sq * r2,
            s: s1 + u1 * s2,
            t: t1 + &u1sq * s1 * r2 + &u1sq * u1 * t2,
        }
    }
}

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` over Q, with its
/// standard invariants cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassModel {
    a: [Rational; 5],
    b2: Rational,
    b4: Rational,
    b6: Rational,
    b8: Rational,
    c4: Rational,
    c6: Rational,
    disc: Rational,
}

impl WeierstrassModel {
    pub fn new(a1: Rational, a2: Rational, a3: Rational, a4: Rational, a6: Rational) -> Result<Self, EllipticError> {
        let b2 = &a1 * &a1 + &a2 * rint(4);
        let b4 = &a1 * &a3 + &a4 * rint(2);
        let b6 = &a3 * &a3 + &a6 * rint(4);
        let b8 = &a1 * &a1 * &a6 + &a2 * &a6 * rint(4) - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
        let c4 = &b2 * &b2 - &b4 * rint(24);
        let c6 = -(&b2 * &b2 * &b2) + &b2 * &b4 * rint(36) - &b6 * rint(216);
        let disc = -(&b2 * &b2 * &b8) - &b4 * &b4 * &b4 * rint(8) - &b6 * &b6 * rint(27) + &b2 * &b4 * &b6 * rint(9);
        if disc.is_zero() {
            return Err(EllipticError::Singular);
        }
        Ok(Self { a: [a1, a2, a3, a4, a6], b2, b4, b6, b8, c4, c6, disc })
    }

    pub fn from_ints(a: [i64; 5]) -> Result<Self, EllipticError> {
        let [a1, a2, a3, a4, a6] = a.map(rint);
        Self::new(a1, a2, a3, a4, a6)
    }

    /// Short form `y^2 = x^3 + a x + b`.
    pub fn short(a: i64, b: i64) -> Result<Self, EllipticError> {
        Self::from_ints([0, 0, 0, a, b])
    }

    pub fn coefficients(&self) -> &[Rational; 5] {
        &self.a
    }
    pub fn a1(&self) -> &Rational {
        &self.a[0]
    }
    pub fn a2(&self) -> &Rational {
        &self.a[1]
    }
    pub fn a3(&self) -> &Rational {
        &self.a[2]
    }
    pub fn a4(&self) -> &Rational {
        &self.a[3]
    }
    pub fn a6(&self) -> &Rational {
        &self.a[4]
    }
    pub fn b2(&self) -> &Rational {
        &self.b2
    }
    pub fn b4(&self) -> &Rational {
        &self.b4
    }
    pub fn b6(&self) -> &Rational {
        &self.b6
    }
    pub fn b8(&self) -> &Rational {
        &self.b8
    }
    pub fn c4(&self) -> &Rational {
        &self.c4
    }
    pub fn c6(&self) -> &Rational {
        &self.c6
    }
    pub fn discriminant(&self) -> &Rational {
        &self.disc
    }

    pub fn j_invariant(&self) -> Rational {
        &self.c4 * &self.c4 * &self.c4 / &self.disc
    }

    /// `log max(|num j|, den j)`; zero for `j = 0`.
    pub fn j_height(&self) -> f64 {
        naive_height(&self.j_invariant())
    }

    pub fn is_integral(&self) -> bool {
        self.a.iter().all(|c| c.denom().is_one())
    }

    /// Integer coefficients, if the model is integral.
    pub fn integer_coefficients(&self) -> Option<[BigInt; 5]> {
        if !self.is_integral() {
            return None;
        }
        Some(self.a.clone().map(|c| c.numer().clone()))
    }

    /// The model obtained by the change of variables `w`.
    pub fn transform(&self, w: &Transform) -> WeierstrassModel {
        let [a1, a2, a3, a4, a6] = &self.a;
        let Transform { u, r, s, t } = w;
        let u2 = u * u;
        let u3 = &u2 * u;
        let u4 = &u2 * &u2;
        let u6 = &u3 * &u3;
        let two = rint(2);
        let three = rint(3);
        let n1 = (a1 + s * &two) / u;
        let n2 = (a2 - s * a1 + r * &three - s * s) / &u2;
        let n3 = (a3 + r * a1 + t * &two) / &u3;
        let n4 = (a4 - s * a3 + r * a2 * &two - (t + r * s) * a1 + r * r * &three - s * t * &two) / &u4;
        let n6 = (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1) / &u6;
        WeierstrassModel::new(n1, n2, n3, n4, n6).expect("isomorphic model of a nonsingular curve")
    }

    /// Short label-free representation `[a1,a2,a3,a4,a6]`.
    pub fn ainvs_string(&self) -> String {
        let parts: Vec<String> = self.a.iter().map(format_rational).collect();
        format!("[{}]", parts.join(","))
    }

    /// `|disc|` as a positive rational.
    pub fn abs_discriminant(&self) -> Rational {
        self.disc.abs()
    }
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ainvs_string())
    }
}

pub(crate) fn rint(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
