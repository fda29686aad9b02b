//! Canonical and local heights.
//!
//! Normalization: `h(P) = lim h(x(2^n P)) / 4^n` with `h(a/b) = ln max(|a|, |b|)`,
//! so `h(mP) = m^2 h(P)` and `h((0,0)) = 0.0511114...` on `y^2 + y = x^3 - x`.
//! Local heights sum to `h` over all places, the `v(disc)/6 ln p` constant
//! sitting inside the nonarchimedean values.

pub mod arch;
pub mod bernoulli;
pub mod doubling;
pub mod lattice;
pub mod nonarch;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::arith::rational::{ln_bigint_abs, val_int};
use crate::arith::{factor, Natural};
use crate::elliptic::{CurveData, EllipticError, Point, ReductionKind, WeierstrassModel};

pub use arch::{local_height_arch, two_torsion_roots, TwoTorsionRoots};
pub use bernoulli::{bernoulli_b2, fourier_partial, fourier_tail_bound};
pub use doubling::canonical_height_doubling;
pub use lattice::{LatticePoint, PeriodLattice};
pub use nonarch::{
    component_index, fold_index, height_of_multiple, local_height_nonarch, tate_bound_check, ComponentProfile,
    TateBoundReport,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeightError {
    #[error("point at infinity has no local height")]
    PointAtInfinity,
    #[error("reduction at {0} is not split multiplicative")]
    NotSplitMultiplicative(Natural),
    #[error("p-adic precision exhausted at {0}")]
    PrecisionExhausted(Natural),
    #[error("no multiple of the point up to 12 reaches the identity component at {0}")]
    ComponentOrder(Natural),
    #[error("archimedean series diverged: {0}")]
    Divergence(String),
    #[error("model is not integral")]
    NotIntegral,
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
}

/// Absolute error target for real-valued results.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrecisionTarget(pub f64);

impl Default for PrecisionTarget {
    fn default() -> Self {
        PrecisionTarget(1e-10)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    Archimedean,
    Prime(Natural),
    /// All primes of good reduction taken together.
    GoodPrimes,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Archimedean => f.write_str("inf"),
            Place::Prime(p) => write!(f, "{p}"),
            Place::GoodPrimes => f.write_str("good"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Local height at one place with the reduction data that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalHeightBreakdown {
    pub place: Place,
    pub lambda: f64,
    pub reduction_kind: Option<ReductionKind>,
    pub n_v: u32,
    /// Component index, multiplicative places only.
    pub a_v: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum HeightMethod {
    #[default]
    SumOfLocal,
    DoublingLimit,
}

/// Canonical height of a point on any model of the curve.
pub fn canonical_height(
    model: &WeierstrassModel,
    point: &Point,
    method: HeightMethod,
    precision: PrecisionTarget,
) -> Result<f64, HeightError> {
    model.check_point(point)?;
    if point.is_infinity() {
        return Ok(0.0);
    }
    let data = CurveData::new(model);
    let p = data.to_minimal(point);
    let h = match method {
        HeightMethod::SumOfLocal => sum_of_local(&data, &p, precision)?,
        HeightMethod::DoublingLimit => canonical_height_doubling(data.model(), &p)?,
    };
    Ok(h.max(0.0))
}

/// Sum over places for a point already on the minimal model. Good places
/// contribute `ln den(x)` minus the part of the denominator at bad primes,
/// so the denominator never needs factoring.
fn sum_of_local(data: &CurveData, point: &Point, precision: PrecisionTarget) -> Result<f64, HeightError> {
    let Point::Affine { x, .. } = point else {
        return Ok(0.0);
    };
    let model = data.model();
    let mut total = local_height_arch(model, point, precision)?;
    let den = x.denom();
    let mut good = ln_bigint_abs(den);
    for r in &data.reduction {
        total += nonarch::exact_height_at(model, r, point)?;
        let ln_p = crate::arith::rational::ln_biguint(&r.prime);
        good -= val_int(den, &r.prime).unwrap_or(0) as f64 * ln_p;
    }
    Ok(total + good)
}

/// Every nonzero local height of a point: the archimedean place, each bad
/// prime, and each good prime dividing the denominator of `x`.
pub fn local_heights(
    model: &WeierstrassModel,
    point: &Point,
    precision: PrecisionTarget,
) -> Result<Vec<LocalHeightBreakdown>, HeightError> {
    model.check_point(point)?;
    let Point::Affine { .. } = point else {
        return Err(HeightError::PointAtInfinity);
    };
    let data = CurveData::new(model);
    let p = data.to_minimal(point);
    let min = data.model();
    let mut out = vec![LocalHeightBreakdown {
        place: Place::Archimedean,
        lambda: local_height_arch(min, &p, precision)?,
        reduction_kind: None,
        n_v: 0,
        a_v: None,
    }];
    for r in &data.reduction {
        out.push(nonarch::breakdown_at(min, r, &p)?);
    }
    let den = p.x().expect("affine").denom().magnitude().clone();
    if den > Natural::from(1u32) {
        let f = factor(&den).expect("nonzero");
        for q in f.primes().filter(|q| data.reduction_at(q).is_none()) {
            out.push(LocalHeightBreakdown {
                place: Place::Prime(q.clone()),
                lambda: nonarch::good_height_at(p.x().expect("affine"), q),
                reduction_kind: Some(ReductionKind::Good),
                n_v: 0,
                a_v: None,
            });
        }
    }
    Ok(out)
}

/// Torsion test: the height is below `1e-6` and the point has exact order
/// at most 12 (Mazur). The two criteria must agree.
pub fn is_torsion(model: &WeierstrassModel, point: &Point) -> Result<bool, HeightError> {
    let exact = model.order_up_to(point, 12).is_some();
    let h = canonical_height(model, point, HeightMethod::SumOfLocal, PrecisionTarget::default())?;
    debug_assert_eq!(exact, h < 1e-6, "height {h} disagrees with exact order test");
    Ok(exact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::Transform;
    use crate::arith::rat;

    fn e37a() -> WeierstrassModel {
        WeierstrassModel::from_ints([0, 0, 1, -1, 0]).unwrap()
    }

    #[test]
    fn reference_value() {
        let p = Point::from_ints(0, 0);
        for m in [HeightMethod::SumOfLocal, HeightMethod::DoublingLimit] {
            let h = canonical_height(&e37a(), &p, m, PrecisionTarget::default()).unwrap();
            assert!((h - 0.0511114082399688).abs() < 1e-10, "{m:?} {h}");
        }
    }

    #[test]
    fn breakdown_sums_to_height() {
        let e = e37a();
        let p = e.multiply(&Point::from_ints(0, 0), 7);
        let parts = local_heights(&e, &p, PrecisionTarget::default()).unwrap();
        let total: f64 = parts.iter().map(|b| b.lambda).sum();
        let h = canonical_height(&e, &p, HeightMethod::DoublingLimit, PrecisionTarget::default()).unwrap();
        assert!((total - h).abs() < 1e-8, "{total} vs {h}");
        assert!(parts.iter().any(|b| b.reduction_kind == Some(ReductionKind::Good)));
    }

    #[test]
    fn nonminimal_input_model() {
        let e = e37a();
        let w = Transform::new(rat(1) / rat(2), rat(1), rat(0), rat(-1));
        let big = e.transform(&w);
        let p = e.map_point(&w, &Point::from_ints(1, 0));
        // (1, 0) = 2 (0, 0)
        let h = canonical_height(&big, &p, HeightMethod::SumOfLocal, PrecisionTarget::default()).unwrap();
        assert!((h - 4.0 * 0.0511114082399688).abs() < 1e-10, "{h}");
    }

    #[test]
    fn torsion_points() {
        let e = WeierstrassModel::short(0, 1).unwrap();
        assert!(is_torsion(&e, &Point::from_ints(2, 3)).unwrap());
        assert!(!is_torsion(&e37a(), &Point::from_ints(0, 0)).unwrap());
        assert_eq!(canonical_height(&e, &Point::Infinity, HeightMethod::SumOfLocal, PrecisionTarget::default()).unwrap(), 0.0);
    }
}
