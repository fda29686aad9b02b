//! Szpiro ratios and their prime-depleted variants.
//!
//! For `F = prod p_i^{e_i}` with `q_i = ln p_i`, the ratio is
//! `sum e_i q_i / sum q_i`, and `sigma_J(F)` is the minimum of that ratio
//! over sub-products obtained by deleting at most `J` prime powers.
//!
//! Two algorithms compute `sigma_J`: exhaustive enumeration (the oracle)
//! and a parametric (Dinkelbach) iteration that only ever looks at
//! removal sets of size exactly `J`. Both are generic over [`Real`] so the
//! CLI can switch to double-double arithmetic.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Sub};

use serde::Serialize;
use thiserror::Error;

use crate::arith::{DoubleDouble, Factorization, Natural};

/// Relative tolerance for comparing ratio values.
pub const RATIO_TOL: f64 = 1e-9;
/// Largest `nu(F)` accepted by [`depleted_ratio_bruteforce`].
pub const BRUTE_FORCE_MAX_NU: usize = 30;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SzpiroError {
    #[error("brute force limited to {BRUTE_FORCE_MAX_NU} primes, got {0}")]
    TooManyPrimes(usize),
    #[error("depletion count J must be at least 1 here")]
    NeedPositiveJ,
}

/// Scalar used by the ratio kernels.
pub trait Real:
    Copy + Debug + PartialOrd + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn ln_natural(n: &Natural) -> Self;
    fn abs(self) -> Self;
}

impl Real for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn ln_natural(n: &Natural) -> Self {
        crate::arith::rational::ln_biguint(n)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
}

impl Real for DoubleDouble {
    fn zero() -> Self {
        DoubleDouble::ZERO
    }
    fn one() -> Self {
        DoubleDouble::ONE
    }
    fn from_f64(x: f64) -> Self {
        DoubleDouble::from_f64(x)
    }
    fn to_f64(self) -> f64 {
        DoubleDouble::to_f64(self)
    }
    fn ln_natural(n: &Natural) -> Self {
        DoubleDouble::ln_natural(n)
    }
    fn abs(self) -> Self {
        DoubleDouble::abs(self)
    }
}

/// A prime power `p^e` together with `ln p`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogWeight<R = f64> {
    pub prime: Natural,
    pub weight: R,
    pub exponent: u32,
}

/// The part of a [`LogWeight`] the ratio kernels look at.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term<R = f64> {
    pub weight: R,
    pub exponent: u32,
}

impl<R: Real> From<&LogWeight<R>> for Term<R> {
    fn from(w: &LogWeight<R>) -> Self {
        Term { weight: w.weight, exponent: w.exponent }
    }
}

fn terms_of<R: Real>(f: &Factorization) -> Vec<Term<R>> {
    f.entries().iter().map(|(p, e)| Term { weight: R::ln_natural(p), exponent: *e }).collect()
}

pub fn log_weights<R: Real>(f: &Factorization) -> Vec<LogWeight<R>> {
    f.entries()
        .iter()
        .map(|(p, e)| LogWeight { prime: p.clone(), weight: R::ln_natural(p), exponent: *e })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DepletionResult {
    pub value: f64,
    /// Indices into the factorization's entries, ascending.
    pub removed: Vec<usize>,
    pub kept: Vec<usize>,
    pub j: usize,
}

impl DepletionResult {
    /// The removed prime powers as a factorization (the witness divisor).
    pub fn removed_part(&self, f: &Factorization) -> Factorization {
        f.select(&self.removed)
    }

    pub fn kept_part(&self, f: &Factorization) -> Factorization {
        f.select(&self.kept)
    }
}

/// Ratio of the kept terms, summed in index order. An empty set has ratio 1.
fn kept_ratio<R: Real>(terms: &[Term<R>], kept: impl Iterator<Item = usize>) -> R {
    let mut num = R::zero();
    let mut den = R::zero();
    for i in kept {
        num = num + R::from_f64(terms[i].exponent as f64) * terms[i].weight;
        den = den + terms[i].weight;
    }
    if den == R::zero() {
        R::one()
    } else {
        num / den
    }
}

fn complement(n: usize, removed: &[usize]) -> Vec<usize> {
    let mut mask = vec![false; n];
    for &i in removed {
        mask[i] = true;
    }
    (0..n).filter(|&i| !mask[i]).collect()
}

fn ties<R: Real>(a: R, b: R) -> bool {
    let scale = if a.abs() > R::one() { a.abs() } else { R::one() };
    (a - b).abs() <= R::from_f64(RATIO_TOL) * scale
}

pub fn szpiro_ratio(f: &Factorization) -> f64 {
    szpiro_ratio_with::<f64>(f).to_f64()
}

pub fn szpiro_ratio_with<R: Real>(f: &Factorization) -> R {
    let terms = terms_of::<R>(f);
    kept_ratio(&terms, 0..terms.len())
}

/// Exhaustive minimum over removal sets of size at most `j`.
///
/// Ties (within [`RATIO_TOL`]) prefer the larger removal set, then the
/// lexicographically smallest one.
pub fn depleted_ratio_bruteforce(f: &Factorization, j: usize) -> Result<DepletionResult, SzpiroError> {
    depleted_ratio_bruteforce_with::<f64>(f, j)
}

pub fn depleted_ratio_bruteforce_with<R: Real>(f: &Factorization, j: usize) -> Result<DepletionResult, SzpiroError> {
    let nu = f.nu();
    if nu > BRUTE_FORCE_MAX_NU {
        return Err(SzpiroError::TooManyPrimes(nu));
    }
    Ok(bruteforce_terms(&terms_of::<R>(f), j))
}

pub(crate) fn bruteforce_terms<R: Real>(terms: &[Term<R>], j: usize) -> DepletionResult {
    let nu = terms.len();
    let mut best: Option<(R, Vec<usize>)> = None;
    for size in 0..=j.min(nu) {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let kept = complement(nu, &combo);
            let value = kept_ratio(terms, kept.iter().copied());
            let better = match &best {
                None => true,
                Some((b, bset)) => {
                    if ties(value, *b) {
                        combo.len() > bset.len()
                    } else {
                        value < *b
                    }
                }
            };
            if better {
                best = Some((value, combo.clone()));
            }
            if !next_combination(&mut combo, nu) {
                break;
            }
        }
    }
    let (_, removed) = best.expect("the empty removal set is always a candidate");
    finish(terms, removed, j)
}

fn finish<R: Real>(terms: &[Term<R>], removed: Vec<usize>, j: usize) -> DepletionResult {
    let kept = complement(terms.len(), &removed);
    let value = kept_ratio(terms, kept.iter().copied()).to_f64();
    DepletionResult { value, removed, kept, j }
}

/// Advances `combo` to the next k-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for t in i + 1..k {
                combo[t] = combo[t - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// `sigma_J` by parametric search over removal sets of size exactly `j`.
pub fn depleted_ratio(f: &Factorization, j: usize) -> DepletionResult {
    depleted_ratio_with::<f64>(f, j)
}

pub fn depleted_ratio_with<R: Real>(f: &Factorization, j: usize) -> DepletionResult {
    parametric_terms(&terms_of::<R>(f), j)
}

/// [`depleted_ratio`] on precomputed terms, in the order given. Entries
/// of the result index into `terms`.
pub fn depleted_ratio_terms(terms: &[Term], j: usize) -> DepletionResult {
    parametric_terms(terms, j)
}

pub(crate) fn parametric_terms<R: Real>(terms: &[Term<R>], j: usize) -> DepletionResult {
    let nu = terms.len();
    if nu <= j {
        return finish(terms, (0..nu).collect(), j);
    }
    if j == 0 {
        return finish(terms, Vec::new(), j);
    }
    let mut lambda = kept_ratio(terms, 0..nu);
    let mut order: Vec<usize> = (0..nu).collect();
    let mut keys = vec![R::zero(); nu];
    loop {
        for (i, t) in terms.iter().enumerate() {
            let diff = R::from_f64(t.exponent as f64) - lambda;
            keys[i] = if ties(R::from_f64(t.exponent as f64), lambda) { R::zero() } else { diff * t.weight };
        }
        order.sort_by(|&a, &b| keys[b].partial_cmp(&keys[a]).unwrap().then(a.cmp(&b)));
        let mut removed: Vec<usize> = order[..j].to_vec();
        removed.sort_unstable();
        let kept = complement(nu, &removed);
        let next = kept_ratio(terms, kept.iter().copied());
        if next < lambda && !ties(next, lambda) {
            lambda = next;
            continue;
        }
        return finish(terms, removed, j);
    }
}

/// Outcome of comparing `sigma_J(p^e F)` with the bounds around it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimeScalingReport {
    #[serde(serialize_with = "crate::io::ser_display")]
    pub prime: Natural,
    pub exponent: u32,
    pub j: usize,
    pub p_divides: bool,
    pub ln_p: f64,
    /// `sigma_{J-1}(F)`
    pub sigma_prev: f64,
    /// `sigma_J(F)`
    pub sigma: f64,
    /// `sigma_J(p^e F)`
    pub sigma_scaled: f64,
    /// `sigma_J(F) >= sigma_J(p^e F)`, the printed left inequality for `p` coprime to `F`.
    pub printed_upper_holds: bool,
    /// `sigma_J(p^e F) >= sigma_J(F) / ln p`.
    pub printed_lower_holds: bool,
    /// `ln p * sigma_J(F) >= sigma_J(p^e F)`, the printed left inequality for arbitrary `F`.
    pub printed_upper_log_holds: bool,
    /// `sigma_J(p^e F) <= sigma_{J-1}(F)`.
    pub removal_upper_holds: bool,
    /// `sigma_J(p^e F) >= sigma_J(F) / (3 ln p)`.
    pub removal_lower_holds: bool,
}

/// Evaluates every inequality around `sigma_J(p^e F)` without asserting any.
pub fn prime_scaling_probe(f: &Factorization, p: &Natural, e: u32, j: usize) -> Result<PrimeScalingReport, SzpiroError> {
    if j == 0 {
        return Err(SzpiroError::NeedPositiveJ);
    }
    let scaled = f.with_prime_power(p.clone(), e);
    let sigma_prev = depleted_ratio(f, j - 1).value;
    let sigma = depleted_ratio(f, j).value;
    let sigma_scaled = depleted_ratio(&scaled, j).value;
    let ln_p = f64::ln_natural(p);
    let slack = RATIO_TOL;
    Ok(PrimeScalingReport {
        prime: p.clone(),
        exponent: e,
        j,
        p_divides: f.exponent_of(p) > 0,
        ln_p,
        sigma_prev,
        sigma,
        sigma_scaled,
        printed_upper_holds: sigma >= sigma_scaled - slack,
        printed_lower_holds: sigma_scaled >= sigma / ln_p - slack,
        printed_upper_log_holds: ln_p * sigma >= sigma_scaled - slack,
        removal_upper_holds: sigma_scaled <= sigma_prev + slack,
        removal_lower_holds: sigma_scaled >= sigma / (3.0 * ln_p) - slack,
    })
}
