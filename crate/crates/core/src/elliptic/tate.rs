//! Tate's algorithm: Kodaira symbol, conductor exponent and Tamagawa
//! number at a prime, following the step order of the classical
//! presentation (Silverman, Advanced Topics IV.9.4; Cremona 3.2).

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::model::WeierstrassModel;
use super::EllipticError;
use crate::arith::Natural;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Kodaira {
    I0,
    In(u32),
    II,
    III,
    IV,
    I0Star,
    InStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl Kodaira {
    /// Order of the component group of the special fiber over the
    /// algebraic closure of the residue field.
    pub fn component_group_order(self) -> u32 {
        match self {
            Kodaira::I0 | Kodaira::II | Kodaira::IIStar => 1,
            Kodaira::In(n) => n,
            Kodaira::III | Kodaira::IIIStar => 2,
            Kodaira::IV | Kodaira::IVStar => 3,
            Kodaira::I0Star | Kodaira::InStar(_) => 4,
        }
    }
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kodaira::I0 => f.write_str("I0"),
            Kodaira::In(n) => write!(f, "I{n}"),
            Kodaira::II => f.write_str("II"),
            Kodaira::III => f.write_str("III"),
            Kodaira::IV => f.write_str("IV"),
            Kodaira::I0Star => f.write_str("I0*"),
            Kodaira::InStar(n) => write!(f, "I{n}*"),
            Kodaira::IVStar => f.write_str("IV*"),
            Kodaira::IIIStar => f.write_str("III*"),
            Kodaira::IIStar => f.write_str("II*"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionKind {
    Good,
    SplitMultiplicative,
    NonsplitMultiplicative,
    Additive,
}

impl ReductionKind {
    pub fn is_multiplicative(self) -> bool {
        matches!(self, ReductionKind::SplitMultiplicative | ReductionKind::NonsplitMultiplicative)
    }
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReductionKind::Good => "good",
            ReductionKind::SplitMultiplicative => "split-multiplicative",
            ReductionKind::NonsplitMultiplicative => "nonsplit-multiplicative",
            ReductionKind::Additive => "additive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionData {
    #[serde(serialize_with = "crate::io::ser_display")]
    pub prime: Natural,
    #[serde(serialize_with = "crate::io::ser_display")]
    pub kodaira: Kodaira,
    pub v_disc_min: u32,
    pub conductor_exp: u32,
    pub reduction_kind: ReductionKind,
    /// Order of the geometric component group (`n_v` for multiplicative
    /// reduction).
    pub n_components: u32,
    pub tamagawa: u32,
}

/// Result of running the algorithm on an integral model that may not be
/// minimal at `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TateOutput {
    pub data: ReductionData,
    /// How many times the model had to be rescaled by `u = p`.
    pub scalings: u32,
}

type Coeffs = [BigInt; 5];

struct Invariants {
    b2: BigInt,
    b6: BigInt,
    b8: BigInt,
    c4: BigInt,
    c6: BigInt,
    disc: BigInt,
}

fn invariants(a: &Coeffs) -> Invariants {
    let [a1, a2, a3, a4, a6] = a;
    let b2 = a1 * a1 + 4i64 * a2;
    let b4 = a1 * a3 + 2i64 * a4;
    let b6 = a3 * a3 + 4i64 * a6;
    let b8 = a1 * a1 * a6 + 4i64 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    let c4 = &b2 * &b2 - 24i64 * &b4;
    let c6 = -(&b2 * &b2 * &b2) + 36i64 * &b2 * &b4 - 216i64 * &b6;
    let disc = -(&b2 * &b2 * &b8) - 8i64 * &b4 * &b4 * &b4 - 27i64 * &b6 * &b6 + 9i64 * &b2 * &b4 * &b6;
    Invariants { b2, b6, b8, c4, c6, disc }
}

/// `(1, r, s, t)` change of variables on integer coefficients.
fn shift(a: &mut Coeffs, r: &BigInt, s: &BigInt, t: &BigInt) {
    let [a1, a2, a3, a4, a6] = a.clone();
    let n1 = &a1 + 2i64 * s;
    let n2 = &a2 - s * &a1 + 3i64 * r - s * s;
    let n3 = &a3 + r * &a1 + 2i64 * t;
    let n4 = &a4 - s * &a3 + 2i64 * r * &a2 - (t + r * s) * &a1 + 3i64 * r * r - 2i64 * s * t;
    let n6 = &a6 + r * &a4 + r * r * &a2 + r * r * r - t * &a3 - t * t - r * t * &a1;
    *a = [n1, n2, n3, n4, n6];
}

fn val(n: &BigInt, p: &BigInt) -> u32 {
    if n.is_zero() {
        return u32::MAX;
    }
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

fn divides(p: &BigInt, k: u32, n: &BigInt) -> bool {
    val(n, p) >= k
}

fn md(n: &BigInt, p: &BigInt) -> BigInt {
    n.mod_floor(p)
}

fn inv(n: &BigInt, p: &BigInt) -> BigInt {
    md(n, p).modinv(p).expect("unit modulo p")
}

fn is_square_mod(n: &BigInt, p: &BigInt) -> bool {
    let n = md(n, p);
    if n.is_zero() || p == &BigInt::from(2) {
        return true;
    }
    let e = (p - 1u32) / 2u32;
    n.modpow(&e, p).is_one()
}

/// Whether `a X^2 + b X + c` (with `a` a unit) has a root mod `p`.
fn quadratic_has_root(a: &BigInt, b: &BigInt, c: &BigInt, p: &BigInt) -> bool {
    if p == &BigInt::from(2) {
        return (0..2).any(|x| md(&(a * x * x + b * x + c), p).is_zero());
    }
    is_square_mod(&(b * b - 4i64 * a * c), p)
}

/// Root of `a X^2 + b X + c` known to have a double root mod `p`.
fn quadratic_double_root(a: &BigInt, b: &BigInt, c: &BigInt, p: &BigInt) -> BigInt {
    if p == &BigInt::from(2) {
        return (0..2).map(BigInt::from).find(|x| md(&(a * x * x + b * x + c), p).is_zero()).expect("double root");
    }
    md(&(-b * inv(&(2i64 * a), p)), p)
}

enum CubicShape {
    /// Distinct roots over the algebraic closure; count of roots in F_p.
    Distinct(u32),
    Double(BigInt),
    Triple(BigInt),
}

fn poly_eval(c: &[BigInt; 3], x: &BigInt, p: &BigInt) -> BigInt {
    md(&(((x + &c[0]) * x + &c[1]) * x + &c[2]), p)
}

/// Multiplicity of `x` as a root of the monic cubic with lower coefficients `c`.
fn multiplicity(c: &[BigInt; 3], x: &BigInt, p: &BigInt) -> u32 {
    // Taylor shift: P(T + x) = T^3 + B T^2 + C T + D.
    let d = poly_eval(c, x, p);
    let cc = md(&(3i64 * x * x + 2i64 * &c[0] * x + &c[1]), p);
    let bb = md(&(3i64 * x + &c[0]), p);
    if !d.is_zero() {
        0
    } else if !cc.is_zero() {
        1
    } else if !bb.is_zero() {
        2
    } else {
        3
    }
}

fn cubic_shape(c: [BigInt; 3], p: &BigInt) -> CubicShape {
    let [b, cc, d] = &c;
    let disc = b * b * cc * cc - 4i64 * cc * cc * cc - 4i64 * b * b * b * d - 27i64 * d * d + 18i64 * b * cc * d;
    if !md(&disc, p).is_zero() {
        return CubicShape::Distinct(count_roots(&c, p));
    }
    let root = if p <= &BigInt::from(3) {
        (0..3u32)
            .map(BigInt::from)
            .filter(|x| x < p)
            .find(|x| multiplicity(&c, x, p) >= 2)
            .expect("repeated root is rational")
    } else {
        let delta = md(&(b * b - 3i64 * cc), p);
        if delta.is_zero() {
            md(&(-b * inv(&BigInt::from(3), p)), p)
        } else {
            md(&((9i64 * d - b * cc) * inv(&(2i64 * &delta), p)), p)
        }
    };
    match multiplicity(&c, &root, p) {
        3 => CubicShape::Triple(root),
        2 => CubicShape::Double(root),
        m => unreachable!("repeated root of multiplicity {m}"),
    }
}

/// Number of roots in F_p of a squarefree monic cubic.
fn count_roots(c: &[BigInt; 3], p: &BigInt) -> u32 {
    if let Some(small) = p.to_u32().filter(|&q| q < 2000) {
        return (0..small).filter(|&x| poly_eval(c, &BigInt::from(x), p).is_zero()).count() as u32;
    }
    // deg gcd(P, X^p - X)
    let modulus = [md(&c[2], p), md(&c[1], p), md(&c[0], p)];
    let xp = poly_pow_x(p, &modulus, p);
    let mut h = vec![xp[0].clone(), md(&(&xp[1] - 1), p), xp[2].clone()];
    let mut f = vec![modulus[0].clone(), modulus[1].clone(), modulus[2].clone(), BigInt::one()];
    trim(&mut h);
    while !h.is_empty() {
        let r = poly_rem(&f, &h, p);
        f = h;
        h = r;
    }
    (f.len() - 1) as u32
}

fn trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
}

fn poly_rem(f: &[BigInt], g: &[BigInt], p: &BigInt) -> Vec<BigInt> {
    let mut r: Vec<BigInt> = f.to_vec();
    let lead_inv = inv(g.last().unwrap(), p);
    while r.len() >= g.len() {
        let shift = r.len() - g.len();
        let coef = md(&(r.last().unwrap() * &lead_inv), p);
        for (i, gi) in g.iter().enumerate() {
            r[shift + i] = md(&(&r[shift + i] - &coef * gi), p);
        }
        trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// `X^e mod (X^3 + m2 X^2 + m1 X + m0)` with `modulus = [m0, m1, m2]`.
fn poly_pow_x(e: &BigInt, modulus: &[BigInt; 3], p: &BigInt) -> [BigInt; 3] {
    let mulmod = |a: &[BigInt; 3], b: &[BigInt; 3]| -> [BigInt; 3] {
        let mut prod = vec![BigInt::zero(); 5];
        for i in 0..3 {
            for j in 0..3 {
                prod[i + j] += &a[i] * &b[j];
            }
        }
        for k in (3..5).rev() {
            let top = md(&prod[k], p);
            for i in 0..3 {
                prod[k - 3 + i] -= &top * &modulus[i];
            }
            prod[k] = BigInt::zero();
        }
        [md(&prod[0], p), md(&prod[1], p), md(&prod[2], p)]
    };
    let mut result = [BigInt::one(), BigInt::zero(), BigInt::zero()];
    let mut base = [BigInt::zero(), BigInt::one(), BigInt::zero()];
    let bits = e.bits();
    for i in 0..bits {
        if e.bit(i) {
            result = mulmod(&result, &base);
        }
        base = mulmod(&base, &base);
    }
    result
}

fn search_shift(a: &Coeffs, p: &BigInt, conditions: impl Fn(&Coeffs) -> bool, s_range: u32, t_range: u32, r_range: u32) -> Coeffs {
    for r in 0..r_range {
        for s in 0..s_range {
            for t in 0..t_range {
                let mut b = a.clone();
                shift(&mut b, &BigInt::from(r), &BigInt::from(s), &BigInt::from(t));
                if conditions(&b) {
                    return b;
                }
            }
        }
    }
    panic!("no change of coordinates found at p = {p}");
}

fn data(p: &BigInt, kodaira: Kodaira, v_disc: u32, f: u32, kind: ReductionKind, tamagawa: u32) -> ReductionData {
    ReductionData {
        prime: p.magnitude().clone(),
        kodaira,
        v_disc_min: v_disc,
        conductor_exp: f,
        reduction_kind: kind,
        n_components: kodaira.component_group_order(),
        tamagawa,
    }
}

/// Runs Tate's algorithm at `p` on an integral model, rescaling as often
/// as needed to reach a model minimal at `p`.
pub fn tate_algorithm(model: &WeierstrassModel, p: &Natural) -> Result<TateOutput, EllipticError> {
    let mut a = model.integer_coefficients().ok_or(EllipticError::NotIntegral)?;
    let p = BigInt::from_biguint(Sign::Plus, p.clone());
    let two = BigInt::from(2);
    let three = BigInt::from(3);
    let mut scalings = 0;
    loop {
        let inv0 = invariants(&a);
        let n = val(&inv0.disc, &p);
        if n == 0 {
            let d = data(&p, Kodaira::I0, 0, 0, ReductionKind::Good, 1);
            return Ok(TateOutput { data: d, scalings });
        }
        // Move the singular point of the reduction to (0, 0).
        if p <= three {
            let q = p.to_u32().unwrap();
            a = search_shift(&a, &p, |b| b[2..].iter().all(|c| divides(&p, 1, c)), 1, q, q);
        } else {
            let r = if divides(&p, 1, &inv0.c4) {
                md(&(-&inv0.b2 * inv(&BigInt::from(12), &p)), &p)
            } else {
                md(&(-(&inv0.c6 + &inv0.b2 * &inv0.c4) * inv(&(12i64 * &inv0.c4), &p)), &p)
            };
            let t = md(&(-(&a[0] * &r + &a[2]) * inv(&two, &p)), &p);
            shift(&mut a, &r, &BigInt::zero(), &t);
            assert!(a[2..].iter().all(|c| divides(&p, 1, c)), "singular point not moved to origin");
        }
        let inv1 = invariants(&a);
        if !divides(&p, 1, &inv1.c4) {
            let split = quadratic_has_root(&BigInt::one(), &a[0], &(-&a[1]), &p);
            let (kind, c) = if split {
                (ReductionKind::SplitMultiplicative, n)
            } else {
                (ReductionKind::NonsplitMultiplicative, if n % 2 == 0 { 2 } else { 1 })
            };
            return Ok(TateOutput { data: data(&p, Kodaira::In(n), n, 1, kind, c), scalings });
        }
        let add = ReductionKind::Additive;
        if !divides(&p, 2, &a[4]) {
            return Ok(TateOutput { data: data(&p, Kodaira::II, n, n, add, 1), scalings });
        }
        if !divides(&p, 3, &inv1.b8) {
            return Ok(TateOutput { data: data(&p, Kodaira::III, n, n - 1, add, 2), scalings });
        }
        if !divides(&p, 3, &inv1.b6) {
            let c = if quadratic_has_root(&BigInt::one(), &(&a[2] / &p), &(-(&a[4] / (&p * &p))), &p) { 3 } else { 1 };
            return Ok(TateOutput { data: data(&p, Kodaira::IV, n, n - 2, add, c), scalings });
        }
        // Arrange p | a1, a2; p^2 | a3, a4; p^3 | a6.
        let p2 = &p * &p;
        let p3 = &p2 * &p;
        let cond6 = |b: &Coeffs| {
            divides(&p, 1, &b[0]) && divides(&p, 1, &b[1]) && divides(&p, 2, &b[2]) && divides(&p, 2, &b[3]) && divides(&p, 3, &b[4])
        };
        if p <= three {
            let q = p.to_u32().unwrap();
            a = search_shift(&a, &p, cond6, q, q * q * q, 1);
        } else {
            let s = md(&(-&a[0] * inv(&two, &p)), &p);
            let t = md(&(-&a[2] * inv(&two, &p2)), &p2);
            shift(&mut a, &BigInt::zero(), &s, &t);
            assert!(cond6(&a), "step 6 normalization failed");
        }
        let cubic = [&a[1] / &p, &a[3] / &p2, &a[4] / &p3];
        match cubic_shape(cubic, &p) {
            CubicShape::Distinct(k) => {
                return Ok(TateOutput { data: data(&p, Kodaira::I0Star, n, n - 4, add, 1 + k), scalings });
            }
            CubicShape::Double(root) => {
                shift(&mut a, &(&p * root), &BigInt::zero(), &BigInt::zero());
                let (m, c) = subprocedure_instar(&mut a, &p);
                return Ok(TateOutput { data: data(&p, Kodaira::InStar(m), n, n - m - 4, add, c), scalings });
            }
            CubicShape::Triple(root) => {
                shift(&mut a, &(&p * root), &BigInt::zero(), &BigInt::zero());
                let p4 = &p2 * &p2;
                let (b, c) = (&a[2] / &p2, -(&a[4] / &p4));
                if !md(&(&b * &b + 4i64 * &c), &p).is_zero() {
                    let tam = if quadratic_has_root(&BigInt::one(), &b, &c, &p) { 3 } else { 1 };
                    return Ok(TateOutput { data: data(&p, Kodaira::IVStar, n, n - 6, add, tam), scalings });
                }
                let y0 = quadratic_double_root(&BigInt::one(), &b, &c, &p);
                shift(&mut a, &BigInt::zero(), &BigInt::zero(), &(&p2 * y0));
                if !divides(&p, 4, &a[3]) {
                    return Ok(TateOutput { data: data(&p, Kodaira::IIIStar, n, n - 7, add, 2), scalings });
                }
                if !divides(&p, 6, &a[4]) {
                    return Ok(TateOutput { data: data(&p, Kodaira::IIStar, n, n - 8, add, 1), scalings });
                }
                // Not minimal: divide through by u = p.
                let weights = [1u32, 2, 3, 4, 6];
                for (c, w) in a.iter_mut().zip(weights) {
                    *c = &*c / p.pow(w);
                }
                scalings += 1;
            }
        }
    }
}

/// The `I_m^*` chain of quadratics; returns `(m, tamagawa)`.
fn subprocedure_instar(a: &mut Coeffs, p: &BigInt) -> (u32, u32) {
    let mut mx = p * p;
    let mut my = p * p;
    let mut m = 1;
    loop {
        let xa2 = &a[1] / p;
        let xa3 = &a[2] / &my;
        let xa6 = &a[4] / (&mx * &my);
        if !md(&(&xa3 * &xa3 + 4i64 * &xa6), p).is_zero() {
            let c = if quadratic_has_root(&BigInt::one(), &xa3, &(-&xa6), p) { 4 } else { 2 };
            return (m, c);
        }
        let y0 = quadratic_double_root(&BigInt::one(), &xa3, &(-&xa6), p);
        shift(a, &BigInt::zero(), &BigInt::zero(), &(&my * y0));
        my *= p;
        m += 1;
        let xa4 = &a[3] / (p * &mx);
        let xa6 = &a[4] / (&mx * &my);
        if !md(&(&xa4 * &xa4 - 4i64 * &xa2 * &xa6), p).is_zero() {
            let c = if quadratic_has_root(&xa2, &xa4, &xa6, p) { 4 } else { 2 };
            return (m, c);
        }
        let x0 = quadratic_double_root(&xa2, &xa4, &xa6, p);
        shift(a, &(&mx * x0), &BigInt::zero(), &BigInt::zero());
        mx *= p;
        m += 1;
    }
}

/// Local data at `p` for a model that is already minimal there.
pub fn local_data(model: &WeierstrassModel, p: &Natural) -> Result<ReductionData, EllipticError> {
    let out = tate_algorithm(model, p)?;
    if out.scalings > 0 {
        return Err(EllipticError::NotMinimal(p.clone()));
    }
    Ok(out.data)
}
