use proptest::prelude::*;
use szpiro_core::arith::{sieve, Factorization, Natural};
use szpiro_core::szpiro::{depleted_ratio, depleted_ratio_bruteforce, prime_scaling_probe, szpiro_ratio};

fn fz(pairs: &[(u64, u32)]) -> Factorization {
    Factorization::from_u64_pairs(pairs).unwrap()
}

/// Up to 12 distinct primes from the first 50, exponents 1..=12.
fn factorization() -> impl Strategy<Value = Factorization> {
    let primes: Vec<u64> = sieve(300).into_iter().take(50).map(u64::from).collect();
    (proptest::sample::subsequence(primes, 0..=12), proptest::collection::vec(1u32..=12, 12)).prop_map(|(ps, es)| {
        let pairs: Vec<(u64, u32)> = ps.into_iter().zip(es).collect();
        fz(&pairs)
    })
}

/// Independent evaluation of `sigma_J`: every removal set of size at most
/// `j`, by bitmask.
fn sigma_by_masks(f: &Factorization, j: usize) -> f64 {
    let terms: Vec<(f64, f64)> = f.entries().iter().map(|(p, e)| ((p.to_string().parse::<f64>().unwrap()).ln(), *e as f64)).collect();
    let n = terms.len();
    if n <= j {
        return 1.0;
    }
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << n) {
        if (mask.count_ones() as usize) > j || mask.count_ones() as usize == n {
            continue;
        }
        let (mut num, mut den) = (0.0, 0.0);
        for (i, (q, e)) in terms.iter().enumerate() {
            if mask & (1 << i) == 0 {
                num += e * q;
                den += q;
            }
        }
        best = best.min(num / den);
    }
    best
}

#[test]
fn example_1728() {
    let f = fz(&[(2, 6), (3, 3)]);
    assert!((szpiro_ratio(&f) - 4.1606).abs() < 0.005);
    assert!((depleted_ratio(&f, 1).value - 3.0).abs() < 1e-12);
    assert_eq!(depleted_ratio(&f, 2).value, 1.0);
    assert_eq!(depleted_ratio(&f, 1).removed_part(&f), fz(&[(2, 6)]));
}

#[test]
fn probe_counterexamples() {
    let r = prime_scaling_probe(&fz(&[(2, 1), (3, 5)]), &Natural::from(5u32), 7, 1).unwrap();
    assert_eq!(r.sigma, 1.0);
    assert!((r.sigma_prev - 3.4525).abs() < 1e-4);
    assert!((r.sigma_scaled - 3.4525).abs() < 1e-4);
    assert!(!r.printed_upper_holds);
    assert!(r.removal_upper_holds);

    let r = prime_scaling_probe(&fz(&[(3, 4)]), &Natural::from(2u32), 1, 1).unwrap();
    assert_eq!(r.sigma_scaled, 1.0);

    let r = prime_scaling_probe(&fz(&[(2, 6), (3, 4)]), &Natural::from(2u32), 4, 1).unwrap();
    assert!((r.sigma_scaled - 4.0).abs() < 1e-12);
    assert!((r.sigma / (3.0 * 2f64.ln()) - 1.92).abs() < 0.01);
    assert!(r.removal_lower_holds);
}

#[test]
fn equality_without_equal_exponents() {
    // sigma_1 = sigma_2 = 5, yet F is not a power of a squarefree number.
    let f = fz(&[(2, 5), (3, 5), (5, 6)]);
    assert!((depleted_ratio(&f, 1).value - 5.0).abs() < 1e-12);
    assert!((depleted_ratio(&f, 2).value - 5.0).abs() < 1e-12);
    let f = fz(&[(149, 1), (199, 2)]);
    assert_eq!(depleted_ratio(&f, 1).value, 1.0);
    assert_eq!(depleted_ratio(&f, 2).value, 1.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn ratio_at_least_one(f in factorization()) {
        let s = szpiro_ratio(&f);
        prop_assert!(s >= 1.0 - 1e-12);
        let squarefree = f.entries().iter().all(|(_, e)| *e == 1);
        prop_assert_eq!((s - 1.0).abs() < 1e-12, squarefree);
    }

    #[test]
    fn parametric_matches_bruteforce(f in factorization(), j in 0usize..=4) {
        let fast = depleted_ratio(&f, j);
        let slow = depleted_ratio_bruteforce(&f, j).unwrap();
        prop_assert!((fast.value - slow.value).abs() <= 1e-12, "{} vs {}", fast.value, slow.value);
        prop_assert_eq!(&fast.removed, &slow.removed);
        prop_assert!((fast.value - sigma_by_masks(&f, j)).abs() <= 1e-12);
    }

    #[test]
    fn monotone_in_j(f in factorization(), j in 1usize..=4) {
        let prev = depleted_ratio(&f, j - 1).value;
        let cur = depleted_ratio(&f, j).value;
        prop_assert!(prev >= cur - 1e-12);
        // Equality forces equal exponents on the part kept at J - 1, which
        // is all of F only for J = 1.
        if (prev - cur).abs() <= 1e-9 && f.nu() > j {
            let kept = depleted_ratio(&f, j - 1).kept_part(&f);
            let e0 = kept.entries()[0].1;
            prop_assert!(kept.entries().iter().all(|(_, e)| *e == e0));
            if j == 1 {
                prop_assert!(f.entries().iter().all(|(_, e)| *e == e0));
            }
        }
        if f.nu() > j {
            let emin = f.entries().iter().map(|(_, e)| *e).min().unwrap();
            let at_min = f.entries().iter().filter(|(_, e)| *e == emin).count();
            prop_assert_eq!((prev - cur).abs() <= 1e-9, at_min >= f.nu() - j + 1);
        }
    }

    #[test]
    fn exact_size_witness(f in factorization(), j in 1usize..=4) {
        prop_assume!(f.nu() >= j);
        let r = depleted_ratio_bruteforce(&f, j).unwrap();
        // Minimum over sets of size exactly j, by masks.
        let n = f.nu();
        let q: Vec<f64> = f.entries().iter().map(|(p, _)| p.to_string().parse::<f64>().unwrap().ln()).collect();
        let mut best = f64::INFINITY;
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != j {
                continue;
            }
            let (mut num, mut den) = (0.0, 0.0);
            for (i, (_, e)) in f.entries().iter().enumerate() {
                if mask & (1 << i) == 0 {
                    num += *e as f64 * q[i];
                    den += q[i];
                }
            }
            best = best.min(if den == 0.0 { 1.0 } else { num / den });
        }
        prop_assert!((r.value - best).abs() <= 1e-12);
    }

    #[test]
    fn power_scaling(f in factorization(), j in 0usize..=4, e in 1u32..=5) {
        prop_assume!(f.nu() > j);
        let base = depleted_ratio(&f, j);
        let scaled = depleted_ratio(&f.pow(e), j);
        prop_assert!((scaled.value - e as f64 * base.value).abs() <= 1e-9 * scaled.value);
        prop_assert_eq!(scaled.kept, base.kept);
    }

    #[test]
    fn adding_a_coprime_prime(f in factorization(), j in 1usize..=4, e in 1u32..=12) {
        let p = Natural::from(233u32);
        let r = prime_scaling_probe(&f, &p, e, j).unwrap();
        prop_assert!(r.sigma_scaled <= r.sigma_prev + 1e-12);
        prop_assert!(r.removal_upper_holds);
    }
}
