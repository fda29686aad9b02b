//! Period lattice, elliptic logarithm, and the archimedean local height as a
//! function of `z in C / Lambda`.
//!
//! Used for large multiples `nP`, where exact coordinates are out of reach:
//! `z(nP) = n z(P)` is reduced modulo the lattice in lattice coordinates, and
//! the height comes from the q-expansion
//!
//! `lambda(z) = -(1/2) B2(Im z / Im tau) log|q| - log|1 - u|
//!              - sum_n log|(1 - q^n u)(1 - q^n / u)|`
//!
//! with `u = e^{2 pi i z/w1}`, `q = e^{2 pi i tau}`, doubled to match the
//! normalization where local heights sum to the canonical height.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::arch::{two_torsion_roots, TwoTorsionRoots};
use super::HeightError;
use crate::arith::rational::rat_to_f64;
use crate::elliptic::{Point, WeierstrassModel};

/// Carlson's symmetric integral `R_F(x, y, z)`.
pub fn carlson_rf(x: Complex64, y: Complex64, z: Complex64) -> Complex64 {
    let (mut x, mut y, mut z) = (x, y, z);
    for _ in 0..200 {
        let mean = (x + y + z) / 3.0;
        let dev = ((mean - x).norm()).max((mean - y).norm()).max((mean - z).norm());
        if dev <= 1e-4 * mean.norm() {
            let dx = (mean - x) / mean;
            let dy = (mean - y) / mean;
            let dz = -(dx + dy);
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            let series = 1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - e2 * e3 * (3.0 / 44.0);
            return series / mean.sqrt();
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sy * sz + sz * sx;
        x = (x + lambda) * 0.25;
        y = (y + lambda) * 0.25;
        z = (z + lambda) * 0.25;
    }
    let mean = (x + y + z) / 3.0;
    1.0 / mean.sqrt()
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..100 {
        if (a - b).abs() <= 1e-16 * a.abs() {
            break;
        }
        let next = (0.5 * (a + b), (a * b).sqrt());
        a = next.0;
        b = next.1;
    }
    a
}

/// The period lattice of a real Weierstrass model and a reduced basis.
#[derive(Clone, Debug)]
pub struct PeriodLattice {
    roots: TwoTorsionRoots,
    /// Real period.
    pub real_period: f64,
    /// Second generator of the natural basis: purely imaginary for a
    /// positive discriminant, with real part `real_period / 2` otherwise.
    pub second_period: Complex64,
    w1: Complex64,
    w2: Complex64,
    tau: Complex64,
}

impl PeriodLattice {
    pub fn new(model: &WeierstrassModel) -> Self {
        let roots = two_torsion_roots(model);
        let zero = Complex64::new(0.0, 0.0);
        let (real_period, second_period) = match roots {
            TwoTorsionRoots::Three([e1, e2, e3]) => {
                let c = |v: f64| Complex64::new(v, 0.0);
                let w1 = 2.0 * carlson_rf(zero, c(e1 - e2), c(e1 - e3)).re;
                let w2 = 2.0 * carlson_rf(zero, c(e1 - e3), c(e2 - e3)).re;
                (w1, Complex64::new(0.0, w2))
            }
            TwoTorsionRoots::One(e1, _) => {
                let b2 = rat_to_f64(model.b2());
                let b4 = rat_to_f64(model.b4());
                let beta = (3.0 * e1 * e1 + 0.5 * b2 * e1 + 0.5 * b4).sqrt();
                let a = 3.0 * e1 + 0.25 * b2;
                let w1 = 2.0 * PI / agm(2.0 * beta.sqrt(), (2.0 * beta + a).max(0.0).sqrt());
                let im = PI / agm(2.0 * beta.sqrt(), (2.0 * beta - a).max(0.0).sqrt());
                (w1, Complex64::new(0.5 * w1, im))
            }
        };
        let (w1, w2) = reduce_basis(Complex64::new(real_period, 0.0), second_period);
        Self { roots, real_period, second_period, w1, w2, tau: w2 / w1 }
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    /// The reduced basis `(w1, w2)`.
    pub fn basis(&self) -> (Complex64, Complex64) {
        (self.w1, self.w2)
    }

    /// Elliptic logarithm of an affine real point, up to sign and modulo
    /// the lattice.
    pub fn elliptic_log(&self, x: f64) -> Complex64 {
        let c = |v: f64| Complex64::new(v, 0.0);
        match self.roots {
            TwoTorsionRoots::Three([e1, e2, e3]) => {
                if x >= 0.5 * (e1 + e2) {
                    let d = (x - e1).max(0.0);
                    c(carlson_rf(c(d), c(x - e2), c(x - e3)).re)
                } else {
                    // Translate the egg point by the 2-torsion point over e3.
                    let dx = (x - e3).max(0.0);
                    if dx == 0.0 {
                        return 0.5 * self.second_period;
                    }
                    let xt = e3 + (e3 - e1) * (e3 - e2) / dx;
                    let t = carlson_rf(c((xt - e1).max(0.0)), c(xt - e2), c(xt - e3)).re;
                    c(t) + 0.5 * self.second_period
                }
            }
            TwoTorsionRoots::One(e1, e2) => {
                let e3 = e2.conj();
                c(carlson_rf(c((x - e1).max(0.0)), c(x) - e2, c(x) - e3).re)
            }
        }
    }

    /// Coordinates `(alpha, beta)` with `z = alpha w1 + beta w2` in the
    /// reduced basis.
    pub fn coordinates(&self, z: Complex64) -> (f64, f64) {
        let r = z / self.w1;
        let beta = r.im / self.tau.im;
        (r.re - beta * self.tau.re, beta)
    }

    /// Archimedean height at the lattice point with coordinates
    /// `(alpha, beta)`; infinite at the lattice itself.
    pub fn height_at(&self, alpha: f64, beta: f64) -> f64 {
        let mut b = beta - beta.floor();
        if b >= 0.5 {
            b -= 1.0;
        }
        let a = alpha - alpha.floor();
        let w = Complex64::new(a, 0.0) + self.tau * b;
        let ln_q = -2.0 * PI * self.tau.im;
        let q = (Complex64::new(0.0, 2.0 * PI) * self.tau).exp();
        let u = (Complex64::new(0.0, 2.0 * PI) * w).exp();
        let ln_one_minus_u = 2f64.ln() + (PI * w).sin().norm().ln() - PI * w.im;
        let mut sum = 0.0;
        let mut qn = q;
        for _ in 0..200 {
            let t1 = Complex64::new(1.0, 0.0) - qn * u;
            let t2 = Complex64::new(1.0, 0.0) - qn / u;
            sum += t1.norm().ln() + t2.norm().ln();
            if qn.norm() < 1e-18 {
                break;
            }
            qn *= q;
        }
        // The polynomial, not its periodic extension: the u-series is only
        // periodic in b together with the polynomial's linear term.
        let b2 = b * b - b + 1.0 / 6.0;
        let lambda = -0.5 * b2 * ln_q - ln_one_minus_u - sum;
        2.0 * lambda
    }

    /// Archimedean height of an affine point.
    pub fn height_of_point(&self, point: &Point) -> Result<f64, HeightError> {
        let Point::Affine { x, .. } = point else {
            return Err(HeightError::PointAtInfinity);
        };
        let (a, b) = self.coordinates(self.elliptic_log(rat_to_f64(x)));
        Ok(self.height_at(a, b))
    }
}

/// Lattice coordinates of a point, ready for evaluating multiples.
#[derive(Clone, Copy, Debug)]
pub struct LatticePoint {
    pub alpha: f64,
    pub beta: f64,
}

impl LatticePoint {
    pub fn new(lattice: &PeriodLattice, point: &Point) -> Result<Self, HeightError> {
        let Point::Affine { x, .. } = point else {
            return Err(HeightError::PointAtInfinity);
        };
        let (alpha, beta) = lattice.coordinates(lattice.elliptic_log(rat_to_f64(x)));
        Ok(Self { alpha, beta })
    }

    /// Archimedean height of `n * P`.
    pub fn height_of_multiple(&self, lattice: &PeriodLattice, n: u64) -> f64 {
        let scale = |c: f64| (n as f64 * (c - c.floor())).fract();
        lattice.height_at(scale(self.alpha), scale(self.beta))
    }
}

/// Gauss reduction of a lattice basis, oriented so that `Im(w2/w1) > 0`.
fn reduce_basis(mut w1: Complex64, mut w2: Complex64) -> (Complex64, Complex64) {
    for _ in 0..100 {
        if w2.norm() < w1.norm() {
            std::mem::swap(&mut w1, &mut w2);
        }
        let m = (w2 / w1).re.round();
        w2 -= w1 * m;
        if w2.norm() >= w1.norm() * (1.0 - 1e-15) {
            break;
        }
    }
    if (w2 / w1).im < 0.0 {
        w2 = -w2;
    }
    (w1, w2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heights::arch::local_height_arch;
    use crate::heights::PrecisionTarget;

    #[test]
    fn carlson_known_values() {
        // R_F(0, 1, 2) = 1.3110287771461
        let c = |v: f64| Complex64::new(v, 0.0);
        assert!((carlson_rf(c(0.0), c(1.0), c(2.0)).re - 1.3110287771461).abs() < 1e-12);
        // R_F(0, 1, 1) = pi/2
        assert!((carlson_rf(c(0.0), c(1.0), c(1.0)).re - PI / 2.0).abs() < 1e-14);
        // Conjugate pair arguments give a real value.
        let v = carlson_rf(c(1.0), Complex64::new(2.0, 1.0), Complex64::new(2.0, -1.0));
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn real_period_by_quadrature() {
        // 2 * int_{e1}^inf dx / sqrt(4x^3 + b2 x^2 + 2 b4 x + b6), evaluated
        // by adaptive quadrature at 30 digits.
        let e = WeierstrassModel::from_ints([0, 0, 1, -1, 0]).unwrap();
        let lat = PeriodLattice::new(&e);
        assert!((lat.real_period - 2.99345864623195921).abs() < 1e-11);
        let e = WeierstrassModel::from_ints([0, 1, 1, 0, 0]).unwrap();
        let lat = PeriodLattice::new(&e);
        assert!((lat.real_period - 5.46868952996758424).abs() < 1e-11);
    }

    #[test]
    fn q_expansion_matches_tate_series() {
        for (a, pts) in [
            ([0, 0, 1, -1, 0], vec![(0, 0), (1, 0), (2, -3), (6, 14)]),
            ([0, 1, 1, 0, 0], vec![(0, 0)]),
            ([0, 0, 1, -7, 6], vec![(0, 2), (1, 0), (2, 0), (-1, 3), (3, 3)]),
            ([0, 0, 0, -1, 0], vec![(0, 0), (1, 0), (-1, 0)]),
            ([0, 0, 0, -2, 0], vec![(-1, 1), (2, 2)]),
        ] {
            let e = WeierstrassModel::from_ints(a).unwrap();
            let lat = PeriodLattice::new(&e);
            for (x, y) in pts {
                let p = Point::from_ints(x, y);
                assert!(e.contains(&p), "{a:?} {x} {y}");
                let tate = local_height_arch(&e, &p, PrecisionTarget::default()).unwrap();
                let q = lat.height_of_point(&p).unwrap();
                assert!((tate - q).abs() < 1e-10, "{a:?} ({x},{y}): {tate} vs {q}");
            }
        }
    }

    #[test]
    fn multiples_follow_the_group_law() {
        let e = WeierstrassModel::from_ints([0, 0, 1, -7, 6]).unwrap();
        let lat = PeriodLattice::new(&e);
        let p = e.add(&Point::from_ints(0, 2), &Point::from_ints(2, 0));
        let lp = LatticePoint::new(&lat, &p).unwrap();
        for n in 1..=9u64 {
            let q = e.multiply(&p, n as i64);
            let direct = local_height_arch(&e, &q, PrecisionTarget::default()).unwrap();
            let scaled = lp.height_of_multiple(&lat, n);
            assert!((direct - scaled).abs() < 1e-9, "n={n}: {direct} vs {scaled}");
        }
    }
}
