//! Integer factorization and the `Factorization` ideal model.
//!
//! Trial division by the primes below 10^6, then Pollard rho with Brent's
//! cycle detection on the remaining cofactor. Primality of cofactors uses
//! Miller-Rabin: the first twelve prime bases are deterministic below 2^64,
//! above that 64 rounds with bases drawn from a fixed-seed ChaCha stream, so
//! results are reproducible.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ArithError;

/// Arbitrary-precision non-negative integer.
pub type Natural = BigUint;

const TRIAL_LIMIT: u32 = 1_000_000;
const DETERMINISTIC_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
/// Miller-Rabin rounds for candidates of 64 bits or more.
pub const PROBABILISTIC_ROUNDS: usize = 64;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve(TRIAL_LIMIT))
}

/// Primes up to and including `limit`.
pub fn sieve(limit: u32) -> Vec<u32> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u32);
            let mut k = i * i;
            while k <= n {
                composite[k] = true;
                k += i;
            }
        }
    }
    out
}

/// A factored positive integer: `(prime, exponent)` pairs, strictly
/// increasing by prime. The empty list is the unit ideal (1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Factorization {
    entries: Vec<(Natural, u32)>,
}

impl Factorization {
    pub fn unit() -> Self {
        Self::default()
    }

    /// Builds a factorization from arbitrary-order entries, merging repeated
    /// primes. Every base must be prime and every exponent positive.
    pub fn from_entries<I>(entries: I) -> Result<Self, ArithError>
    where
        I: IntoIterator<Item = (Natural, u32)>,
    {
        let mut v: Vec<(Natural, u32)> = Vec::new();
        for (p, e) in entries {
            if e == 0 {
                return Err(ArithError::ZeroExponent(p));
            }
            if !is_prime(&p) {
                return Err(ArithError::NotPrime(p));
            }
            v.push((p, e));
        }
        Ok(Self::from_prime_powers(v))
    }

    /// Like [`Factorization::from_entries`] but trusts the caller that every
    /// base is prime.
    pub fn from_prime_powers(mut v: Vec<(Natural, u32)>) -> Self {
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut entries: Vec<(Natural, u32)> = Vec::with_capacity(v.len());
        for (p, e) in v {
            if e == 0 {
                continue;
            }
            match entries.last_mut() {
                Some(last) if last.0 == p => last.1 += e,
                _ => entries.push((p, e)),
            }
        }
        Self { entries }
    }

    pub fn from_u64_pairs(pairs: &[(u64, u32)]) -> Result<Self, ArithError> {
        Self::from_entries(pairs.iter().map(|&(p, e)| (Natural::from(p), e)))
    }

    pub fn entries(&self) -> &[(Natural, u32)] {
        &self.entries
    }

    pub fn is_unit(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of distinct primes.
    pub fn nu(&self) -> usize {
        self.entries.len()
    }

    pub fn value(&self) -> Natural {
        self.entries
            .iter()
            .fold(Natural::one(), |acc, (p, e)| acc * num_traits::pow(p.clone(), *e as usize))
    }

    pub fn radical(&self) -> Natural {
        self.entries.iter().fold(Natural::one(), |acc, (p, _)| acc * p)
    }

    pub fn exponent_of(&self, p: &Natural) -> u32 {
        self.entries
            .binary_search_by(|(q, _)| q.cmp(p))
            .map(|i| self.entries[i].1)
            .unwrap_or(0)
    }

    /// The sub-factorization on the given entry indices.
    pub fn select(&self, indices: &[usize]) -> Self {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        Self {
            entries: idx.into_iter().map(|i| self.entries[i].clone()).collect(),
        }
    }

    /// Product of two factorizations.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut v = self.entries.clone();
        v.extend(other.entries.iter().cloned());
        Self::from_prime_powers(v)
    }

    /// `self^k` (exponents scaled by `k`, `k >= 1`).
    pub fn pow(&self, k: u32) -> Self {
        assert!(k >= 1, "power must be positive");
        Self {
            entries: self.entries.iter().map(|(p, e)| (p.clone(), e * k)).collect(),
        }
    }

    /// Multiplies in `p^e`.
    pub fn with_prime_power(&self, p: Natural, e: u32) -> Self {
        let mut v = self.entries.clone();
        v.push((p, e));
        Self::from_prime_powers(v)
    }

    /// Divides by `p^e`; `None` if `p^e` does not divide.
    pub fn divide_prime_power(&self, p: &Natural, e: u32) -> Option<Self> {
        let have = self.exponent_of(p);
        if have < e {
            return None;
        }
        let entries = self
            .entries
            .iter()
            .filter_map(|(q, f)| {
                if q == p {
                    (f - e > 0).then(|| (q.clone(), f - e))
                } else {
                    Some((q.clone(), *f))
                }
            })
            .collect();
        Some(Self { entries })
    }

    pub fn primes(&self) -> impl Iterator<Item = &Natural> {
        self.entries.iter().map(|(p, _)| p)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Parses the `Display` form, e.g. `2^6 * 3^3`; `1` is the unit.
impl std::str::FromStr for Factorization {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ArithError::ParseFactorization(s.to_string());
        if s.trim() == "1" {
            return Ok(Self::unit());
        }
        let mut v = Vec::new();
        for part in s.split('*') {
            let part = part.trim();
            let (p, e) = part.split_once('^').unwrap_or((part, "1"));
            let p: Natural = p.trim().parse().map_err(|_| bad())?;
            let e: u32 = e.trim().parse().map_err(|_| bad())?;
            v.push((p, e));
        }
        Self::from_entries(v)
    }
}

/// Factors `n >= 1`.
pub fn factor(n: &Natural) -> Result<Factorization, ArithError> {
    if n.is_zero() {
        return Err(ArithError::FactorZero);
    }
    let mut out: Vec<(Natural, u32)> = Vec::new();
    if let Some(small) = n.to_u64() {
        for (p, e) in factor_u64(small) {
            out.push((Natural::from(p), e));
        }
        return Ok(Factorization::from_prime_powers(out));
    }
    let mut m = n.clone();
    for &p in small_primes() {
        if let Some(v) = m.to_u64() {
            for (q, e) in factor_u64(v) {
                out.push((Natural::from(q), e));
            }
            return Ok(Factorization::from_prime_powers(out));
        }
        let bp = Natural::from(p);
        if &bp * &bp > m {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = m.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
        }
    }
    if !m.is_one() {
        let mut stack = vec![m];
        while let Some(c) = stack.pop() {
            if c.is_one() {
                continue;
            }
            if is_prime(&c) {
                out.push((c, 1));
                continue;
            }
            let d = pollard_brent_big(&c);
            stack.push(&c / &d);
            stack.push(d);
        }
    }
    Ok(Factorization::from_prime_powers(out))
}

pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0);
    let mut out = Vec::new();
    let mut m = n;
    for &p in small_primes() {
        let p = p as u64;
        if p * p > m {
            break;
        }
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    if m > 1 {
        let mut stack = vec![m];
        while let Some(c) = stack.pop() {
            if c == 1 {
                continue;
            }
            if is_prime_u64(c) {
                out.push((c, 1));
                continue;
            }
            let d = pollard_brent_u64(c);
            stack.push(c / d);
            stack.push(d);
        }
    }
    out.sort_unstable();
    let mut merged: Vec<(u64, u32)> = Vec::with_capacity(out.len());
    for (p, e) in out {
        match merged.last_mut() {
            Some(last) if last.0 == p => last.1 += e,
            _ => merged.push((p, e)),
        }
    }
    merged
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

fn miller_rabin_u64(n: u64, a: u64, d: u64, s: u32) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &DETERMINISTIC_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    DETERMINISTIC_BASES.iter().all(|&a| miller_rabin_u64(n, a, d, s))
}

/// Primality test: deterministic below 2^64, [`PROBABILISTIC_ROUNDS`]
/// Miller-Rabin rounds above.
pub fn is_prime(n: &Natural) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    for &p in &DETERMINISTIC_BASES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = Natural::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a17_7e11_d00d_beef);
    let span = &n_minus_1 - &one; // bases in [2, n-2]
    (0..PROBABILISTIC_ROUNDS).all(|round| {
        let a = if round < DETERMINISTIC_BASES.len() {
            Natural::from(DETERMINISTIC_BASES[round])
        } else {
            Natural::from(rng.gen::<u64>()) % &span + 2u32
        };
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            return true;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                return true;
            }
        }
        false
    })
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Returns a nontrivial factor of the odd composite `n`.
fn pollard_brent_u64(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, m) = (2u64, 128usize);
        let (mut g, mut r, mut q) = (1u64, 1usize, 1u64);
        let (mut x, mut ys) = (0u64, 0u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn pollard_brent_big(n: &Natural) -> Natural {
    if n.is_even() {
        return Natural::from(2u32);
    }
    let mut c = Natural::one();
    loop {
        let f = |x: &Natural| (x * x + &c) % n;
        let m = 128usize;
        let mut y = Natural::from(2u32);
        let mut g = Natural::one();
        let mut r = 1usize;
        let mut q = Natural::one();
        let mut x = Natural::zero();
        let mut ys = Natural::zero();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1u32;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_round_trip() {
        let f = Factorization::from_u64_pairs(&[(2, 6), (3, 3), (7, 1)]).unwrap();
        assert_eq!(f.to_string(), "2^6 * 3^3 * 7");
        assert_eq!("2^6 * 3^3 * 7".parse::<Factorization>().unwrap(), f);
        assert_eq!("3^3*2^6*7^1".parse::<Factorization>().unwrap(), f);
        assert!("1".parse::<Factorization>().unwrap().is_unit());
        assert!(matches!("4^2".parse::<Factorization>(), Err(ArithError::NotPrime(_))));
        assert!(matches!("2^x".parse::<Factorization>(), Err(ArithError::ParseFactorization(_))));
    }

    fn trial_division(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
            p += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn factors_1728() {
        let f = factor(&Natural::from(1728u32)).unwrap();
        assert_eq!(f, Factorization::from_u64_pairs(&[(2, 6), (3, 3)]).unwrap());
        assert_eq!(f.value(), Natural::from(1728u32));
        assert_eq!(f.radical(), Natural::from(6u32));
        assert_eq!(f.nu(), 2);
    }

    #[test]
    fn unit_and_zero() {
        let f = factor(&Natural::one()).unwrap();
        assert!(f.is_unit());
        assert_eq!((f.value(), f.radical(), f.nu()), (Natural::one(), Natural::one(), 0));
        assert!(matches!(factor(&Natural::zero()), Err(ArithError::FactorZero)));
    }

    #[test]
    fn matches_trial_division() {
        let f = factor(&Natural::from(6436341u64)).unwrap();
        assert_eq!(f, Factorization::from_u64_pairs(&trial_division(6436341)).unwrap());
        assert_eq!(trial_division(6436341), vec![(3, 10), (109, 1)]);
        for n in (1u64..5000).chain([999_983 * 999_979, 600851475143]) {
            let got: Vec<(u64, u32)> = factor_u64(n);
            assert_eq!(got, trial_division(n), "n = {n}");
        }
    }

    #[test]
    fn single_prime() {
        let f = factor(&Natural::from(37u32)).unwrap();
        assert_eq!((f.value(), f.radical(), f.nu()), (Natural::from(37u32), Natural::from(37u32), 1));
    }

    #[test]
    fn large_semiprimes() {
        // Mersenne primes 2^31 - 1, 2^61 - 1 and 2^89 - 1.
        let m31 = (Natural::one() << 31) - 1u32;
        let m61 = (Natural::one() << 61) - 1u32;
        let m89 = (Natural::one() << 89) - 1u32;
        assert!(is_prime(&m61));
        assert!(is_prime(&m89));
        let n = &m31 * &m89 * 9u32;
        let f = factor(&n).unwrap();
        assert_eq!(f.entries(), &[(Natural::from(3u32), 2), (m31, 1), (m89.clone(), 1)]);
        assert!(!is_prime(&(&m61 * &m89)));
        let q = Natural::from(1_000_000_007u64) * Natural::from(998_244_353u64) * Natural::from(1_000_000_009u64);
        let f = factor(&q).unwrap();
        assert_eq!(f.nu(), 3);
        assert_eq!(f.value(), q);
    }

    #[test]
    fn carmichael_numbers_are_composite() {
        for n in [561u64, 1105, 1729, 2465, 2821, 6601, 3215031751] {
            assert!(!is_prime_u64(n));
        }
        assert!(is_prime_u64(18446744073709551557));
    }

    #[test]
    fn from_entries_rejects_bad_input() {
        assert!(Factorization::from_u64_pairs(&[(4, 1)]).is_err());
        assert!(Factorization::from_u64_pairs(&[(3, 0)]).is_err());
        let f = Factorization::from_u64_pairs(&[(3, 1), (2, 2), (3, 4)]).unwrap();
        assert_eq!(f.entries(), &[(Natural::from(2u32), 2), (Natural::from(3u32), 5)]);
    }

    proptest::proptest! {
        #[test]
        fn round_trip(n in 1u64..u64::MAX / 2) {
            let f = factor(&Natural::from(n)).unwrap();
            proptest::prop_assert_eq!(f.value(), Natural::from(n));
            for w in f.entries().windows(2) {
                proptest::prop_assert!(w[0].0 < w[1].0);
            }
            for (p, e) in f.entries() {
                proptest::prop_assert!(*e >= 1 && is_prime(p));
            }
        }
    }
}
