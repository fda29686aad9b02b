//! Archimedean local height from exact coordinates via Tate's series.
//!
//! After shifting `x` so that every real point has `x >= 1`, with `t = 1/x`,
//! `z(t) = 1 - b4 t^2 - 2 b6 t^3 - b8 t^4` and
//! `w(t) = 4t + b2 t^2 + 2 b4 t^3 + b6 t^4` (so that `t(2P) = w/z`),
//!
//! `lambda_T(P) = (1/2) log|x| + (1/8) sum_n 4^-n log z(t(2^n P))`,
//!
//! and the height in our normalization is `2 lambda_T - (1/6) log|disc|`.
//! The iteration runs in double-double so large coefficients do not eat
//! the cancellation in `z`.

use num_complex::Complex64;
use num_traits::Signed;

use super::{HeightError, PrecisionTarget};
use crate::arith::rational::{ln_bigint_abs, rat_to_f64, Rational};
use crate::arith::DoubleDouble;
use crate::elliptic::{Point, Transform, WeierstrassModel};

const MAX_TERMS: u32 = 80;

/// Roots of `4x^3 + b2 x^2 + 2 b4 x + b6`, the x-coordinates of the
/// 2-torsion points.
#[derive(Clone, Copy, Debug)]
pub enum TwoTorsionRoots {
    /// Positive discriminant: `e1 > e2 > e3`.
    Three([f64; 3]),
    /// Negative discriminant: the real root and one of the complex pair.
    One(f64, Complex64),
}

impl TwoTorsionRoots {
    pub fn smallest_real(&self) -> f64 {
        match self {
            TwoTorsionRoots::Three(e) => e[2],
            TwoTorsionRoots::One(e, _) => *e,
        }
    }
}

fn eval_cubic(c: [f64; 4], x: f64) -> (f64, f64) {
    let f = ((c[0] * x + c[1]) * x + c[2]) * x + c[3];
    let df = (3.0 * c[0] * x + 2.0 * c[1]) * x + c[2];
    (f, df)
}

fn polish(c: [f64; 4], mut x: f64) -> f64 {
    for _ in 0..6 {
        let (f, df) = eval_cubic(c, x);
        if df == 0.0 || !f.is_finite() {
            break;
        }
        let step = f / df;
        let next = x - step;
        if !next.is_finite() || (next - x).abs() <= 1e-17 * x.abs() {
            break;
        }
        x = next;
    }
    x
}

/// Some real root by safeguarded Newton inside a sign-changing bracket.
fn one_real_root(c: [f64; 4]) -> f64 {
    let bound = 1.0 + (c[1].abs().max(c[2].abs()).max(c[3].abs())) / c[0];
    let (mut lo, mut hi) = (-bound, bound);
    let mut x = 0.5 * (lo + hi);
    for _ in 0..400 {
        let (f, df) = eval_cubic(c, x);
        if f == 0.0 {
            return x;
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - f / df;
        x = if df != 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if hi - lo <= 1e-16 * hi.abs().max(lo.abs()).max(1e-300) {
            break;
        }
    }
    x
}

pub fn two_torsion_roots(model: &WeierstrassModel) -> TwoTorsionRoots {
    let c = [4.0, rat_to_f64(model.b2()), 2.0 * rat_to_f64(model.b4()), rat_to_f64(model.b6())];
    let r = one_real_root(c);
    // 4x^3 + c1 x^2 + c2 x + c3 = (x - r)(4x^2 + p x + q)
    let p = c[1] + 4.0 * r;
    let q = c[2] + p * r;
    let disc = p * p - 16.0 * q;
    if model.discriminant().is_positive() {
        let s = disc.max(0.0).sqrt();
        let r1 = -(p + p.signum() * s) / 8.0;
        let r2 = if r1 != 0.0 { q / (4.0 * r1) } else { 0.0 };
        let mut e = [polish(c, r), polish(c, r1), polish(c, r2)];
        e.sort_by(|a, b| b.partial_cmp(a).unwrap());
        TwoTorsionRoots::Three(e)
    } else {
        let s = (-disc).max(0.0).sqrt();
        TwoTorsionRoots::One(polish(c, r), Complex64::new(-p / 8.0, s / 8.0))
    }
}

fn dd_of(r: &Rational) -> DoubleDouble {
    let hi = rat_to_f64(r);
    if !hi.is_finite() || hi == 0.0 {
        return DoubleDouble::from_f64(hi);
    }
    match Rational::from_float(hi) {
        Some(h) => DoubleDouble::new(hi, rat_to_f64(&(r - h))),
        None => DoubleDouble::from_f64(hi),
    }
}

fn dd_ln(x: DoubleDouble) -> f64 {
    // ln(hi + lo) = ln(hi) + log1p(lo/hi)
    x.hi().ln() + (x.lo() / x.hi()).ln_1p()
}

/// Archimedean local height (normalization summing to the canonical
/// height). Invariant under changes of Weierstrass model.
pub fn local_height_arch(model: &WeierstrassModel, point: &Point, precision: PrecisionTarget) -> Result<f64, HeightError> {
    let Point::Affine { x, .. } = point else {
        return Err(HeightError::PointAtInfinity);
    };
    let roots = two_torsion_roots(model);
    let shift = Rational::from_integer(num_bigint::BigInt::from((roots.smallest_real().floor() - 1.0) as i64));
    let one = Rational::from_integer(1.into());
    let zero = Rational::from_integer(0.into());
    let w = Transform::new(one, shift.clone(), zero.clone(), zero);
    let shifted = model.transform(&w);
    let xs = x - &shift;
    if !xs.is_positive() {
        return Err(HeightError::Divergence("shifted x-coordinate is not positive".into()));
    }
    let ln_x = ln_bigint_abs(xs.numer()) - ln_bigint_abs(xs.denom());
    let b2 = dd_of(shifted.b2());
    let b4 = dd_of(shifted.b4());
    let b6 = dd_of(shifted.b6());
    let b8 = dd_of(shifted.b8());
    let two = DoubleDouble::from_f64(2.0);
    let four = DoubleDouble::from_f64(4.0);
    let mut t = dd_of(&xs.recip());
    let mut weight = 1.0;
    let mut sum = 0.0;
    let mut largest: f64 = 1.0;
    for n in 0..MAX_TERMS {
        let t2 = t * t;
        let t3 = t2 * t;
        let t4 = t2 * t2;
        let z = DoubleDouble::ONE - b4 * t2 - two * b6 * t3 - b8 * t4;
        let wv = four * t + b2 * t2 + two * b4 * t3 + b6 * t4;
        if !(z.hi() > 0.0) || !z.hi().is_finite() {
            return Err(HeightError::Divergence(format!("series term {n} is not positive")));
        }
        let term = dd_ln(z);
        largest = largest.max(term.abs());
        sum += weight * term;
        t = wv / z;
        weight *= 0.25;
        // The remaining terms are bounded by weight * (4/3) * largest
        // (with twice the largest seen as a safety factor).
        if n >= 8 && weight * 2.0 * largest * (4.0 / 3.0) / 8.0 < precision.0 * 0.01 {
            break;
        }
    }
    let ln_disc = ln_bigint_abs(model.discriminant().numer()) - ln_bigint_abs(model.discriminant().denom());
    let lambda_t = 0.5 * ln_x + sum / 8.0;
    Ok(2.0 * lambda_t - ln_disc / 6.0)
}
