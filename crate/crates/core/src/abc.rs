//! Coprime triples `A + B + C = 0`, their Frey curves, and record scans
//! of `sigma_J(|ABC|)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{factor_u64, Factorization, Natural};
use crate::elliptic::{minimal_model, WeierstrassModel};
use crate::io::{format_real, ser_display};
use crate::szpiro::{depleted_ratio, depleted_ratio_terms, Term, RATIO_TOL};

pub const DEFAULT_TOP: usize = 25;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbcError {
    #[error("({0}, {1}, {2}) does not sum to zero")]
    NonzeroSum(i64, i64, i64),
    #[error("({0}, {1}, {2}) has a common factor")]
    NotCoprime(i64, i64, i64),
    #[error("triple has a zero entry")]
    Zero,
    #[error("scan bound must be at least 2, got {0}")]
    BoundTooSmall(u64),
    #[error("empty J range {0}..{1}")]
    EmptyRange(usize, usize),
    #[error("transfer probe needs J >= 1")]
    NeedPositiveJ,
    #[error("worker pool: {0}")]
    Pool(String),
}

/// A coprime triple in canonical form `0 < A <= B`, `C = -(A + B)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AbcTriple {
    a: u64,
    b: u64,
}

impl AbcTriple {
    pub fn new(a: u64, b: u64) -> Result<Self, AbcError> {
        if a == 0 || b == 0 {
            return Err(AbcError::Zero);
        }
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        if a.gcd(&b) != 1 {
            return Err(AbcError::NotCoprime(a as i64, b as i64, -((a + b) as i64)));
        }
        Ok(Self { a, b })
    }

    /// Canonical form of any triple with zero sum and no common factor.
    pub fn normalize(a: i64, b: i64, c: i64) -> Result<Self, AbcError> {
        if a as i128 + b as i128 + c as i128 != 0 {
            return Err(AbcError::NonzeroSum(a, b, c));
        }
        if a == 0 || b == 0 || c == 0 {
            return Err(AbcError::Zero);
        }
        if a.gcd(&b).gcd(&c) != 1 {
            return Err(AbcError::NotCoprime(a, b, c));
        }
        let mut m = [a.unsigned_abs(), b.unsigned_abs(), c.unsigned_abs()];
        m.sort_unstable();
        Self::new(m[0], m[1])
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        -((self.a + self.b) as i64)
    }

    pub fn sum(&self) -> u64 {
        self.a + self.b
    }

    /// `|ABC|`
    pub fn product(&self) -> Natural {
        Natural::from(self.a) * Natural::from(self.b) * Natural::from(self.sum())
    }

    /// Factorization of `|ABC|`, merged from the three coprime parts.
    pub fn factorization(&self) -> Factorization {
        let mut pairs = factor_u64(self.a);
        pairs.extend(factor_u64(self.b));
        pairs.extend(factor_u64(self.sum()));
        Factorization::from_prime_powers(pairs.into_iter().map(|(p, e)| (Natural::from(p), e)).collect())
    }

    /// Order of enumeration: by `A + B`, then `A`.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        (self.sum(), self.a).cmp(&(other.sum(), other.a))
    }
}

impl fmt::Display for AbcTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c())
    }
}

impl Serialize for AbcTriple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("AbcTriple", 3)?;
        st.serialize_field("A", &self.a)?;
        st.serialize_field("B", &self.b)?;
        st.serialize_field("C", &self.c())?;
        st.end()
    }
}

/// Canonical triples with `A + B <= n`, ordered by `(A + B, A)`.
pub fn enumerate_triples(n: u64) -> Result<impl Iterator<Item = AbcTriple>, AbcError> {
    if n < 2 {
        return Err(AbcError::BoundTooSmall(n));
    }
    Ok((2..=n).flat_map(triples_with_sum))
}

fn triples_with_sum(s: u64) -> impl Iterator<Item = AbcTriple> {
    (1..=s / 2).filter(move |a| a.gcd(&s) == 1).map(move |a| AbcTriple { a, b: s - a })
}

/// `y^2 = x(x + A)(x - B)`.
pub fn frey_curve(t: &AbcTriple) -> WeierstrassModel {
    let (a, b) = (t.a as i64, t.b as i64);
    WeierstrassModel::from_ints([0, a - b, 0, -a * b, 0]).expect("Frey curves of coprime triples are nonsingular")
}

/// Which power of 2 relates the minimal discriminant to `(ABC)^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FreyDiscCase {
    /// `|disc_min| = 2^4 (ABC)^2`
    TwoToFour,
    /// `|disc_min| = 2^-8 (ABC)^2`
    TwoToMinusEight,
}

impl FreyDiscCase {
    pub fn exponent(self) -> i32 {
        match self {
            FreyDiscCase::TwoToFour => 4,
            FreyDiscCase::TwoToMinusEight => -8,
        }
    }
}

impl fmt::Display for FreyDiscCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^{}", self.exponent())
    }
}

impl Serialize for FreyDiscCase {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FreyDiscReport {
    pub triple: AbcTriple,
    /// Discriminant of `y^2 = x(x + A)(x - B)` itself.
    #[serde(serialize_with = "ser_display")]
    pub model_disc: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub abc_squared: Natural,
    #[serde(serialize_with = "ser_display")]
    pub disc_min: Natural,
    #[serde(skip)]
    pub disc_min_factorization: Factorization,
    /// `None` when neither power of 2 matches.
    pub case: Option<FreyDiscCase>,
}

impl FreyDiscReport {
    pub fn holds(&self) -> bool {
        self.case.is_some()
    }

    /// `16 (ABC)^2`, with sign.
    pub fn model_disc_matches(&self) -> bool {
        self.model_disc == BigInt::from(self.abc_squared.clone() * 16u32)
    }
}

pub fn frey_disc_check(t: &AbcTriple) -> FreyDiscReport {
    let e = frey_curve(t);
    let model_disc = e.discriminant().numer().clone();
    let m = minimal_model(&e);
    let disc_min = m.disc_min.value();
    let sq = t.product().pow(2);
    let case = if disc_min == &sq << 4 {
        Some(FreyDiscCase::TwoToFour)
    } else if &disc_min << 8 == sq {
        Some(FreyDiscCase::TwoToMinusEight)
    } else {
        None
    };
    FreyDiscReport { triple: *t, model_disc, abc_squared: sq, disc_min, disc_min_factorization: m.disc_min, case }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanConfig {
    pub max_sum: u64,
    /// Tables are kept for `j_min..=j_max`; every record carries
    /// `sigma_0..=sigma_{j_max}`.
    pub j_min: usize,
    pub j_max: usize,
    pub top: usize,
    /// `None` uses rayon's global pool.
    pub workers: Option<usize>,
}

impl ScanConfig {
    pub fn new(max_sum: u64, j_max: usize) -> Self {
        Self { max_sum, j_min: 0, j_max, top: DEFAULT_TOP, workers: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRecord {
    pub triple: AbcTriple,
    #[serde(serialize_with = "ser_display")]
    pub abc_product_factorization: Factorization,
    #[serde(serialize_with = "ser_display")]
    pub radical: Natural,
    /// `sigma_J(|ABC|)` for `J = 0..=j_max`.
    pub sigma: Vec<f64>,
    pub frey_disc_case: Option<FreyDiscCase>,
}

impl ScanRecord {
    pub fn for_triple(t: &AbcTriple, j_max: usize) -> Self {
        let f = t.factorization();
        let sigma = (0..=j_max).map(|j| depleted_ratio(&f, j).value).collect();
        let radical = f.radical();
        ScanRecord { triple: *t, abc_product_factorization: f, radical, sigma, frey_disc_case: frey_disc_check(t).case }
    }
}

/// Top records by `sigma_J` for each `J` in `j_min..=j_max`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanTable {
    pub max_sum: u64,
    pub j_min: usize,
    pub j_max: usize,
    pub top: usize,
    pub triples_scanned: u64,
    /// `by_j[i]` belongs to `J = j_min + i`, sorted by `sigma_J`
    /// descending, then canonical order.
    pub by_j: Vec<Vec<ScanRecord>>,
}

impl ScanTable {
    pub fn table(&self, j: usize) -> Option<&[ScanRecord]> {
        j.checked_sub(self.j_min).and_then(|i| self.by_j.get(i)).map(Vec::as_slice)
    }
}

impl ScanTable {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["J".to_string(), "rank".into(), "A".into(), "B".into(), "C".into(), "radical".into()];
        header.extend((0..=self.j_max).map(|j| format!("sigma{j}")));
        header.push("frey_disc_case".into());
        w.write_record(&header).expect("in-memory write");
        for (i, recs) in self.by_j.iter().enumerate() {
            for (rank, r) in recs.iter().enumerate() {
                let mut row = vec![
                    (self.j_min + i).to_string(),
                    (rank + 1).to_string(),
                    r.triple.a.to_string(),
                    r.triple.b.to_string(),
                    r.triple.c().to_string(),
                    r.radical.to_string(),
                ];
                row.extend(r.sigma.iter().map(|&s| format_real(s)));
                row.push(r.frey_disc_case.map_or_else(|| "none".into(), |c| c.to_string()));
                w.write_record(&row).expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&JsonTable::from(self)).expect("serializable")
    }
}

#[derive(Serialize)]
struct JsonRecord<'a> {
    #[serde(rename = "A")]
    a: u64,
    #[serde(rename = "B")]
    b: u64,
    #[serde(rename = "C")]
    c: i64,
    abc_product_factorization: String,
    radical: String,
    sigma: Vec<String>,
    frey_disc_case: Option<&'a FreyDiscCase>,
}

#[derive(Serialize)]
struct JsonTable<'a> {
    max_sum: u64,
    j_min: usize,
    j_max: usize,
    top: usize,
    triples_scanned: u64,
    records: Vec<Vec<JsonRecord<'a>>>,
}

impl<'a> From<&'a ScanTable> for JsonTable<'a> {
    fn from(t: &'a ScanTable) -> Self {
        let records = t
            .by_j
            .iter()
            .map(|recs| {
                recs.iter()
                    .map(|r| JsonRecord {
                        a: r.triple.a,
                        b: r.triple.b,
                        c: r.triple.c(),
                        abc_product_factorization: r.abc_product_factorization.to_string(),
                        radical: r.radical.to_string(),
                        sigma: r.sigma.iter().map(|&s| format_real(s)).collect(),
                        frey_disc_case: r.frey_disc_case.as_ref(),
                    })
                    .collect()
            })
            .collect();
        JsonTable { max_sum: t.max_sum, j_min: t.j_min, j_max: t.j_max, top: t.top, triples_scanned: t.triples_scanned, records }
    }
}

/// Smallest-prime-factor table on `0..=n`.
struct SmallFactor {
    spf: Vec<u32>,
    ln: Vec<f64>,
}

impl SmallFactor {
    fn new(n: u64) -> Self {
        let n = n as usize;
        let mut spf = vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] == 0 {
                let mut k = i;
                while k <= n {
                    if spf[k] == 0 {
                        spf[k] = i as u32;
                    }
                    k += i;
                }
            }
        }
        // Same values as `ln_biguint`, which evaluates small integers in f64.
        let ln = (0..=n).map(|i| if i >= 2 { (i as f64).ln() } else { 0.0 }).collect();
        Self { spf, ln }
    }

    fn push(&self, mut m: u64, out: &mut Vec<(u32, u32)>) {
        while m > 1 {
            let p = self.spf[m as usize];
            let mut e = 0;
            while m % p as u64 == 0 {
                m /= p as u64;
                e += 1;
            }
            out.push((p, e));
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Candidate {
    triple: AbcTriple,
    value: f64,
}

/// Larger value first, then canonical order. A strict total order, so the
/// merged top list does not depend on how the range was split.
fn rank(x: &Candidate, y: &Candidate) -> Ordering {
    y.value.total_cmp(&x.value).then_with(|| x.triple.canonical_cmp(&y.triple))
}

#[derive(Clone, Debug)]
struct TopLists {
    lists: Vec<Vec<Candidate>>,
    top: usize,
    scanned: u64,
}

impl TopLists {
    fn new(tables: usize, top: usize) -> Self {
        Self { lists: vec![Vec::with_capacity(top + 1); tables], top, scanned: 0 }
    }

    fn offer(&mut self, j: usize, c: Candidate) {
        let list = &mut self.lists[j];
        if list.len() == self.top && list.last().is_some_and(|w| rank(&c, w) != Ordering::Less) {
            return;
        }
        let at = list.partition_point(|x| rank(x, &c) == Ordering::Less);
        list.insert(at, c);
        list.truncate(self.top);
    }

    fn merge(mut self, other: TopLists) -> TopLists {
        for (j, list) in other.lists.into_iter().enumerate() {
            for c in list {
                self.offer(j, c);
            }
        }
        self.scanned += other.scanned;
        self
    }
}

fn scan_sum(s: u64, sf: &SmallFactor, js: (usize, usize), acc: &mut TopLists, scratch: &mut Vec<(u32, u32)>, terms: &mut Vec<Term>) {
    for t in triples_with_sum(s) {
        scratch.clear();
        sf.push(t.a, scratch);
        sf.push(t.b, scratch);
        sf.push(s, scratch);
        scratch.sort_unstable();
        terms.clear();
        terms.extend(scratch.iter().map(|&(p, e)| Term { weight: sf.ln[p as usize], exponent: e }));
        for j in js.0..=js.1 {
            let value = depleted_ratio_terms(terms, j).value;
            acc.offer(j - js.0, Candidate { triple: t, value });
        }
        acc.scanned += 1;
    }
}

/// Scans every canonical triple with `A + B <= max_sum`.
pub fn scan(config: &ScanConfig) -> Result<ScanTable, AbcError> {
    if config.max_sum < 2 {
        return Err(AbcError::BoundTooSmall(config.max_sum));
    }
    if config.j_min > config.j_max {
        return Err(AbcError::EmptyRange(config.j_min, config.j_max));
    }
    let run = || scan_inner(config);
    match config.workers {
        None => Ok(run()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build().map_err(|e| AbcError::Pool(e.to_string()))?;
            Ok(pool.install(run))
        }
    }
}

fn scan_inner(config: &ScanConfig) -> ScanTable {
    let sf = SmallFactor::new(config.max_sum);
    let (j_min, j_max, top) = (config.j_min, config.j_max, config.top);
    let tables = j_max - j_min + 1;
    let merged = (2..=config.max_sum)
        .into_par_iter()
        .fold(
            || (TopLists::new(tables, top), Vec::new(), Vec::new()),
            |(mut acc, mut scratch, mut terms), s| {
                scan_sum(s, &sf, (j_min, j_max), &mut acc, &mut scratch, &mut terms);
                (acc, scratch, terms)
            },
        )
        .map(|(acc, _, _)| acc)
        .reduce(|| TopLists::new(tables, top), TopLists::merge);
    let by_j = merged
        .lists
        .iter()
        .map(|list| list.iter().map(|c| ScanRecord::for_triple(&c.triple, j_max)).collect())
        .collect();
    ScanTable { max_sum: config.max_sum, j_min, j_max, top, triples_scanned: merged.scanned, by_j }
}

/// The chain `sigma_J(disc_min) = sigma_J(2^e (ABC)^2)` against
/// `2 sigma_J(ABC) / ln 2`, evaluated without asserting.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransferReport {
    pub triple: AbcTriple,
    pub j: usize,
    pub case: Option<FreyDiscCase>,
    #[serde(serialize_with = "ser_display")]
    pub disc_min: Factorization,
    pub nu_abc: usize,
    pub sigma_disc_min: f64,
    pub sigma_abc: f64,
    pub sigma_abc_squared: f64,
    /// `sigma_J((ABC)^2) = 2 sigma_J(ABC)`, expected whenever `nu(ABC) > J`.
    pub squaring_doubles: bool,
    /// `2 sigma_J(ABC) / ln 2`
    pub printed_rhs: f64,
    /// `sigma_J(disc_min) >= 2 sigma_J(ABC) / ln 2`
    pub printed_holds: bool,
    /// `sigma_J((ABC)^2) / (3 ln 2)`
    pub removal_rhs: f64,
    /// `sigma_J(disc_min) >= sigma_J((ABC)^2) / (3 ln 2)`
    pub removal_holds: bool,
}

pub fn transfer_probe(t: &AbcTriple, j: usize) -> Result<TransferReport, AbcError> {
    if j == 0 {
        return Err(AbcError::NeedPositiveJ);
    }
    let frey = frey_disc_check(t);
    let f = t.factorization();
    let sigma_disc_min = depleted_ratio(&frey.disc_min_factorization, j).value;
    let sigma_abc = depleted_ratio(&f, j).value;
    let sigma_abc_squared = depleted_ratio(&f.pow(2), j).value;
    let ln2 = std::f64::consts::LN_2;
    let printed_rhs = 2.0 * sigma_abc / ln2;
    let removal_rhs = sigma_abc_squared / (3.0 * ln2);
    Ok(TransferReport {
        triple: *t,
        j,
        case: frey.case,
        disc_min: frey.disc_min_factorization,
        nu_abc: f.nu(),
        sigma_disc_min,
        sigma_abc,
        sigma_abc_squared,
        squaring_doubles: (sigma_abc_squared - 2.0 * sigma_abc).abs() <= RATIO_TOL * sigma_abc_squared.max(1.0),
        printed_rhs,
        printed_holds: sigma_disc_min >= printed_rhs - RATIO_TOL,
        removal_rhs,
        removal_holds: sigma_disc_min >= removal_rhs - RATIO_TOL,
    })
}
