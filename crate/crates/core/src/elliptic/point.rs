use std::fmt;

use num_traits::Zero;

use super::model::{rint, Transform, WeierstrassModel};
use super::EllipticError;
use crate::arith::rational::format_rational;
use crate::arith::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Infinity,
    Affine { x: Rational, y: Rational },
}

impl Point {
    pub fn affine(x: Rational, y: Rational) -> Self {
        Point::Affine { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::Affine { x: rint(x), y: rint(y) }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<&Rational> {
        match self {
            Point::Infinity => None,
            Point::Affine { x, .. } => Some(x),
        }
    }

    pub fn y(&self) -> Option<&Rational> {
        match self {
            Point::Infinity => None,
            Point::Affine { y, .. } => Some(y),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => f.write_str("O"),
            Point::Affine { x, y } => write!(f, "({}, {})", format_rational(x), format_rational(y)),
        }
    }
}

impl WeierstrassModel {
    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine { x, y } => {
                let lhs = y * y + self.a1() * x * y + self.a3() * y;
                let rhs = x * x * x + self.a2() * x * x + self.a4() * x + self.a6();
                lhs == rhs
            }
        }
    }

    pub fn check_point(&self, p: &Point) -> Result<(), EllipticError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(EllipticError::NotOnCurve(p.to_string()))
        }
    }

    pub fn negate(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine { x: x.clone(), y: -y - self.a1() * x - self.a3() },
        }
    }

    /// Group law; inputs are assumed to lie on the curve.
    pub fn add(&self, p: &Point, q: &Point) -> Point {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let (lambda, nu) = if x1 == x2 {
            let denom = y1 * rint(2) + self.a1() * x1 + self.a3();
            if denom.is_zero() || y1 != y2 {
                return Point::Infinity;
            }
            let num = x1 * x1 * rint(3) + self.a2() * x1 * rint(2) + self.a4() - self.a1() * y1;
            let lambda = num / &denom;
            let nu = (-(x1 * x1 * x1) + self.a4() * x1 + self.a6() * rint(2) - self.a3() * y1) / &denom;
            (lambda, nu)
        } else {
            let lambda = (y2 - y1) / (x2 - x1);
            let nu = (y1 * x2 - y2 * x1) / (x2 - x1);
            (lambda, nu)
        };
        let x3 = &lambda * &lambda + self.a1() * &lambda - self.a2() - x1 - x2;
        let y3 = -(&lambda + self.a1()) * &x3 - &nu - self.a3();
        Point::Affine { x: x3, y: y3 }
    }

    pub fn sub(&self, p: &Point, q: &Point) -> Point {
        self.add(p, &self.negate(q))
    }

    pub fn double(&self, p: &Point) -> Point {
        self.add(p, p)
    }

    pub fn multiply(&self, p: &Point, m: i64) -> Point {
        let base = if m < 0 { self.negate(p) } else { p.clone() };
        let mut n = m.unsigned_abs();
        let mut acc = Point::Infinity;
        let mut pow = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(&acc, &pow);
            }
            n >>= 1;
            if n > 0 {
                pow = self.double(&pow);
            }
        }
        acc
    }

    /// Smallest `m` in `1..=max_order` with `mP = O`.
    pub fn order_up_to(&self, p: &Point, max_order: u32) -> Option<u32> {
        let mut q = p.clone();
        for m in 1..=max_order {
            if q.is_infinity() {
                return Some(m);
            }
            if m < max_order {
                q = self.add(&q, p);
            }
        }
        None
    }

    /// Image of `p` under the change of variables producing `self.transform(w)`.
    pub fn map_point(&self, w: &Transform, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => {
                let u2 = &w.u * &w.u;
                let u3 = &u2 * &w.u;
                let xr = x - &w.r;
                let nx = &xr / &u2;
                let ny = (y - &w.s * &xr - &w.t) / &u3;
                Point::Affine { x: nx, y: ny }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn e37() -> WeierstrassModel {
        WeierstrassModel::from_ints([0, 0, 1, -1, 0]).unwrap()
    }

    #[test]
    fn doubling_on_37a() {
        let e = e37();
        let p = Point::from_ints(0, 0);
        assert_eq!(e.double(&p), Point::from_ints(1, 0));
        assert_eq!(e.multiply(&p, 3), Point::from_ints(-1, -1));
        assert_eq!(e.multiply(&p, 4), Point::from_ints(2, -3));
        let five_p = e.multiply(&p, 5);
        let expected = Point::affine(Rational::new(BigInt::from(1), BigInt::from(4)), Rational::new(BigInt::from(-5), BigInt::from(8)));
        assert_eq!(five_p, expected);
        assert!(e.contains(&five_p));
        assert_eq!(e.multiply(&p, 1), p);
        assert_eq!(e.add(&p, &e.negate(&p)), Point::Infinity);
        assert_eq!(e.multiply(&p, 0), Point::Infinity);
        assert_eq!(e.multiply(&Point::Infinity, 7), Point::Infinity);
    }

    #[test]
    fn associativity_and_scalars() {
        let e = WeierstrassModel::from_ints([0, 0, 1, -7, 6]).unwrap();
        let (p, q, r) = (Point::from_ints(0, 2), Point::from_ints(1, 0), Point::from_ints(2, 0));
        for pt in [&p, &q, &r] {
            assert!(e.contains(pt));
        }
        assert_eq!(e.add(&e.add(&p, &q), &r), e.add(&p, &e.add(&q, &r)));
        assert_eq!(e.multiply(&p, 5), e.add(&e.multiply(&p, 2), &e.multiply(&p, 3)));
        assert_eq!(e.multiply(&p, -3), e.negate(&e.multiply(&p, 3)));
    }

    #[test]
    fn torsion_orders() {
        // y^2 = x^3 - x has full 2-torsion; y^2 = x^3 + 1 has (2, 3) of order 6.
        let e = WeierstrassModel::short(-1, 0).unwrap();
        assert_eq!(e.order_up_to(&Point::from_ints(1, 0), 12), Some(2));
        let e = WeierstrassModel::short(0, 1).unwrap();
        assert_eq!(e.order_up_to(&Point::from_ints(2, 3), 12), Some(6));
        assert_eq!(e37().order_up_to(&Point::from_ints(0, 0), 12), None);
    }

    #[test]
    fn points_follow_transforms() {
        let e = e37();
        let w = Transform::new(rint(3), rint(2), rint(-1), rint(5));
        let e2 = e.transform(&w);
        let p = e.multiply(&Point::from_ints(0, 0), 3);
        let p2 = e.map_point(&w, &p);
        assert!(e2.contains(&p2));
        assert_eq!(e2.double(&p2), e.map_point(&w, &e.double(&p)));
    }
}
