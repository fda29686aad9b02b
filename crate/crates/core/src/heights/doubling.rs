//! Canonical height as `lim h(x(2^n P)) / 4^n`, without forming the huge
//! coordinates.
//!
//! Write `x(2^i P) = X_i / Z_i` in lowest terms. With the doubling forms
//! `F = X^4 - b4 X^2 Z^2 - 2 b6 X Z^3 - b8 Z^4` and
//! `G = 4 X^3 Z + b2 X^2 Z^2 + 2 b4 X Z^3 + b6 Z^4`,
//! `(X_{i+1}, Z_{i+1}) = (F, G)(X_i, Z_i) / g_i` where `g_i` only involves
//! primes dividing `2 disc`. So
//!
//! `h = log max(|X_0|, |Z_0|) + sum_i 4^-(i+1) (log s_i - log g_i)`,
//!
//! with `s_i` the size of `(F, G)` at the normalized real pair and `g_i`
//! read off p-adic copies of the pair.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::HeightError;
use crate::arith::rational::{ln_biguint, rat_to_f64, Rational};
use crate::arith::{factor, Natural, Padic, PadicField};
use crate::elliptic::{Point, WeierstrassModel};

const STEPS: u32 = 40;
const MAX_PRECISION: u32 = 4096;

struct Forms<T> {
    b2: T,
    b4: T,
    b6: T,
    b8: T,
}

fn real_step(c: &Forms<f64>, x: f64, z: f64) -> (f64, f64) {
    let (x2, z2) = (x * x, z * z);
    let f = x2 * x2 - c.b4 * x2 * z2 - 2.0 * c.b6 * x * z2 * z - c.b8 * z2 * z2;
    let g = 4.0 * x2 * x * z + c.b2 * x2 * z2 + 2.0 * c.b4 * x * z2 * z + c.b6 * z2 * z2;
    (f, g)
}

fn padic_step(field: &PadicField, c: &Forms<Padic>, x: &Padic, z: &Padic) -> (Padic, Padic) {
    let f = field;
    let x2 = f.mul(x, x);
    let z2 = f.mul(z, z);
    let xz3 = f.mul(&f.mul(x, &z2), z);
    let z4 = f.mul(&z2, &z2);
    let x2z2 = f.mul(&x2, &z2);
    let ff = f.sub(
        &f.sub(&f.sub(&f.mul(&x2, &x2), &f.mul(&c.b4, &x2z2)), &f.mul_int(&f.mul(&c.b6, &xz3), 2)),
        &f.mul(&c.b8, &z4),
    );
    let gg = f.add(
        &f.add(&f.add(&f.mul_int(&f.mul(&f.mul(&x2, x), z), 4), &f.mul(&c.b2, &x2z2)), &f.mul_int(&f.mul(&c.b4, &xz3), 2)),
        &f.mul(&c.b6, &z4),
    );
    (ff, gg)
}

/// Divides a p-adic number by `p^e`.
fn shift_down(a: &Padic, e: i64) -> Padic {
    match a {
        Padic::Zero { abs } => Padic::Zero { abs: abs - e },
        Padic::Unit { val, unit, prec } => Padic::Unit { val: val - e, unit: unit.clone(), prec: *prec },
    }
}

/// `min(v(F), v(G))`, or `None` when precision is insufficient.
fn gcd_valuation(f: &Padic, g: &Padic) -> Option<i64> {
    match (f, g) {
        (Padic::Unit { val: a, .. }, Padic::Unit { val: b, .. }) => Some((*a).min(*b)),
        (Padic::Unit { val, .. }, Padic::Zero { abs }) | (Padic::Zero { abs }, Padic::Unit { val, .. }) => {
            (val <= abs).then_some(*val)
        }
        _ => None,
    }
}

/// Canonical height by the doubling limit; the model must be integral.
pub fn canonical_height_doubling(model: &WeierstrassModel, point: &Point) -> Result<f64, HeightError> {
    let Point::Affine { x, .. } = point else {
        return Ok(0.0);
    };
    if !model.is_integral() {
        return Err(HeightError::NotIntegral);
    }
    let x0 = x.numer().clone();
    let z0 = x.denom().clone();
    let h0 = ln_biguint(x0.magnitude().max(z0.magnitude()));

    let two_disc = (model.discriminant().numer() * BigInt::from(2)).magnitude().clone();
    let primes: Vec<Natural> = factor(&two_disc).expect("nonzero").primes().cloned().collect();
    let ln_primes: Vec<f64> = primes.iter().map(ln_biguint).collect();

    let real = Forms { b2: rat_to_f64(model.b2()), b4: rat_to_f64(model.b4()), b6: rat_to_f64(model.b6()), b8: rat_to_f64(model.b8()) };
    let (mut u, mut w) = normalized_start(x);

    let mut real_terms = Vec::with_capacity(STEPS as usize);
    for _ in 0..STEPS {
        let (f, g) = real_step(&real, u, w);
        let s = f.abs().max(g.abs());
        if !(s > 0.0) || !s.is_finite() {
            return Err(HeightError::Divergence("doubling forms vanished numerically".into()));
        }
        real_terms.push(s.ln());
        u = f / s;
        w = g / s;
    }

    let mut gcd_terms = vec![0.0; STEPS as usize];
    for (p, ln_p) in primes.iter().zip(&ln_primes) {
        let vals = padic_gcd_valuations(model, p, &x0, &z0)?;
        for (t, v) in gcd_terms.iter_mut().zip(vals) {
            *t += v as f64 * ln_p;
        }
    }

    let mut sum = 0.0;
    let mut weight = 0.25;
    for (s, g) in real_terms.iter().zip(&gcd_terms) {
        sum += weight * (s - g);
        weight *= 0.25;
    }
    Ok(h0 + sum)
}

fn normalized_start(x: &Rational) -> (f64, f64) {
    if x.abs() <= Rational::one() {
        (rat_to_f64(x), 1.0)
    } else {
        let sign = if x.is_negative() { -1.0 } else { 1.0 };
        (sign, rat_to_f64(&x.recip()).abs() * 1.0)
    }
}

fn padic_gcd_valuations(model: &WeierstrassModel, p: &Natural, x0: &BigInt, z0: &BigInt) -> Result<Vec<i64>, HeightError> {
    let mut prec = 64u32;
    'retry: loop {
        let field = PadicField::new(p, prec);
        let c = Forms {
            b2: field.from_rational(model.b2()),
            b4: field.from_rational(model.b4()),
            b6: field.from_rational(model.b6()),
            b8: field.from_rational(model.b8()),
        };
        let mut x = field.from_int(x0);
        let mut z = field.from_int(z0);
        let mut out = Vec::with_capacity(STEPS as usize);
        for _ in 0..STEPS {
            let (f, g) = padic_step(&field, &c, &x, &z);
            let Some(e) = gcd_valuation(&f, &g) else {
                if prec >= MAX_PRECISION {
                    return Err(HeightError::PrecisionExhausted(p.clone()));
                }
                prec *= 2;
                continue 'retry;
            };
            out.push(e);
            x = shift_down(&f, e);
            z = shift_down(&g, e);
        }
        return Ok(out);
    }
}
