//! The weighted-mean and Cauchy-Schwarz inequalities behind `M`, on random
//! positive inputs.

use proptest::prelude::*;
use szpiro_core::arith::Factorization;
use szpiro_core::certifier::{choose_m, MPrimes};
use szpiro_core::szpiro::szpiro_ratio;

fn positive_pairs() -> impl Strategy<Value = Vec<(f64, f64)>> {
    proptest::collection::vec((0.01f64..100.0, 0.01f64..100.0), 2..12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    /// Dropping the term with the largest `alpha` cannot raise the
    /// weighted mean; equality only when all `alpha` agree.
    #[test]
    fn dropping_the_largest_ratio(mut v in positive_pairs()) {
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mean = |s: &[(f64, f64)]| s.iter().map(|(a, x)| a * x).sum::<f64>() / s.iter().map(|(_, x)| x).sum::<f64>();
        let all = mean(&v);
        let rest = mean(&v[..v.len() - 1]);
        prop_assert!(all - rest >= -1e-12 * all.abs().max(1.0));
        let equal = v.iter().all(|(a, _)| *a == v[0].0);
        if !equal {
            prop_assert!(all > rest || (all - rest).abs() <= 1e-12 * all.abs().max(1.0));
        }
    }

    #[test]
    fn cauchy_schwarz(v in positive_pairs()) {
        let lhs = v.iter().map(|(a, x)| a * x).sum::<f64>() * v.iter().map(|(a, x)| a / x).sum::<f64>();
        let rhs = v.iter().map(|(a, _)| a).sum::<f64>().powi(2);
        prop_assert!(lhs - rhs >= -1e-12 * rhs.max(1.0));
    }

    /// With all primes of `D1` in the formula, `M + 1 <= 2 sigma(D1)^2 + 1`.
    #[test]
    fn m_within_jensen_bound(pairs in proptest::collection::vec((0usize..15, 1u32..=12), 1..6)) {
        let primes = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
        let mut seen = std::collections::BTreeMap::new();
        for (i, e) in pairs {
            seen.insert(primes[i], e);
        }
        let d1 = Factorization::from_u64_pairs(&seen.into_iter().collect::<Vec<_>>()).unwrap();
        let c = choose_m(&d1, &[], MPrimes::AllOfD1);
        let s = szpiro_ratio(&d1);
        prop_assert!(c.jensen_holds, "M = {} sigma = {}", c.m, s);
        prop_assert!((c.m + 1) as f64 <= 2.0 * s * s + 1.0 + 1e-9);
    }
}
