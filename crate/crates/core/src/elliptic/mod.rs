//! Elliptic curves over Q with exact rational arithmetic.

pub mod minimal;
pub mod model;
pub mod point;
pub mod tate;

use thiserror::Error;

use crate::arith::rational::ln_biguint;
use crate::arith::{Factorization, Natural};

pub use minimal::{is_globally_minimal, minimal_model, MinimalModelResult};
pub use model::{Transform, WeierstrassModel};
pub use point::Point;
pub use tate::{local_data, tate_algorithm, Kodaira, ReductionData, ReductionKind, TateOutput};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EllipticError {
    #[error("singular Weierstrass equation (discriminant 0)")]
    Singular,
    #[error("point {0} is not on the curve")]
    NotOnCurve(String),
    #[error("model is not integral")]
    NotIntegral,
    #[error("model is not minimal at {0}")]
    NotMinimal(Natural),
}

/// A curve together with its minimal model and reduction data at every
/// bad prime, computed once.
#[derive(Clone, Debug)]
pub struct CurveData {
    pub input: WeierstrassModel,
    pub minimal: MinimalModelResult,
    pub reduction: Vec<ReductionData>,
}

impl CurveData {
    pub fn new(model: &WeierstrassModel) -> Self {
        let minimal = minimal_model(model);
        let reduction = minimal
            .disc_min
            .primes()
            .map(|p| local_data(&minimal.model, p).expect("minimal model is minimal at every prime"))
            .collect();
        Self { input: model.clone(), minimal, reduction }
    }

    pub fn model(&self) -> &WeierstrassModel {
        &self.minimal.model
    }

    pub fn disc_min(&self) -> &Factorization {
        &self.minimal.disc_min
    }

    pub fn reduction_at(&self, p: &Natural) -> Option<&ReductionData> {
        self.reduction.iter().find(|r| &r.prime == p)
    }

    pub fn conductor(&self) -> Factorization {
        Factorization::from_prime_powers(self.reduction.iter().map(|r| (r.prime.clone(), r.conductor_exp)).collect())
    }

    /// Moves a point on the input model to the minimal model.
    pub fn to_minimal(&self, p: &Point) -> Point {
        self.input.map_point(&self.minimal.transform, p)
    }
}

/// Conductor as a factorization over the bad primes.
pub fn conductor(model: &WeierstrassModel) -> Factorization {
    CurveData::new(model).conductor()
}

/// `max(h(j), ln |disc_min|)`.
pub fn curve_height(model: &WeierstrassModel) -> f64 {
    let m = minimal_model(model);
    let ln_disc = ln_biguint(&m.disc_min.value());
    model.j_height().max(ln_disc)
}
