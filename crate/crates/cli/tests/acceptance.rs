//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines are always printed. The
//! process fails when a criterion fails, unless it is listed in
//! `KNOWN_UNATTAINABLE` together with the reason.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

use szpiro_core::abc::{enumerate_triples, frey_disc_check};
use szpiro_core::arith::{sieve, Factorization, Natural};
use szpiro_core::certifier::{certify, choose_m, fejer_identities, weight_closed_form, weight_sum, CertifierConfig, MPrimes};
use szpiro_core::elliptic::{CurveData, Point, ReductionKind, WeierstrassModel};
use szpiro_core::heights::{
    bernoulli_b2, canonical_height, fourier_partial, fourier_tail_bound, tate_bound_check, HeightMethod, PrecisionTarget,
};
use szpiro_core::io::{ingest_curves, CurveRecord};
use szpiro_core::szpiro::{depleted_ratio, depleted_ratio_bruteforce, prime_scaling_probe, szpiro_ratio};

/// Criteria expected to fail, with the reason.
const KNOWN_UNATTAINABLE: &[(u32, &str)] = &[(
    2,
    "equality sigma_(J-1) = sigma_J does not force equal exponents; it holds iff at least nu-J+1 exponents attain the minimum",
)];

struct Outcome {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn run(id: u32, name: &'static str, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (pass, detail) = f();
    Outcome { id, name, pass, detail, elapsed: start.elapsed() }
}

fn corpus() -> Vec<CurveRecord> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/corpus.tsv");
    ingest_curves(&path).expect("corpus")
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("szpiro").chain(args.iter().copied());
    let code = szpiro_cli::run_command_with_env(argv, &|_| None, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// `sigma_J` over removal sets of size at most `j`, by bitmask.
fn sigma_masks(pairs: &[(u64, u32)], j: usize) -> f64 {
    sigma_masks_where(pairs, |size| size <= j, j)
}

/// Minimum over removal sets of size exactly `j`.
fn sigma_masks_exact(pairs: &[(u64, u32)], j: usize) -> f64 {
    sigma_masks_where(pairs, |size| size == j, j)
}

fn sigma_masks_where(pairs: &[(u64, u32)], keep: impl Fn(usize) -> bool, j: usize) -> f64 {
    let n = pairs.len();
    if n <= j {
        return 1.0;
    }
    let logs: Vec<f64> = pairs.iter().map(|(p, _)| (*p as f64).ln()).collect();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if !keep(size) {
            continue;
        }
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..n {
            if mask & (1 << i) == 0 {
                num += pairs[i].1 as f64 * logs[i];
                den += logs[i];
            }
        }
        best = best.min(num / den);
    }
    best
}

fn criterion_1() -> (bool, String) {
    let f = Factorization::from_u64_pairs(&[(2, 6), (3, 3)]).unwrap();
    let start = Instant::now();
    let s0 = szpiro_ratio(&f);
    let s1 = depleted_ratio(&f, 1).value;
    let s2 = depleted_ratio(&f, 2).value;
    let t = start.elapsed();
    let pass = (s0 - 4.1606).abs() < 0.005 && (s1 - 3.0).abs() < 1e-12 && s2 == 1.0 && t < Duration::from_millis(1);
    (pass, format!("sigma0={s0:.6} sigma1={s1} sigma2={s2} in {t:?}"))
}

fn criterion_2() -> (bool, String) {
    let primes: Vec<u64> = sieve(300).into_iter().take(50).map(u64::from).collect();
    let mut rng = StdRng::seed_from_u64(0x5a5a_2002);
    let cases = 1000;
    let mut fails: BTreeMap<&str, (usize, String)> = BTreeMap::new();
    let mut note = |k: &'static str, f: &[(u64, u32)], j: usize| {
        let e = fails.entry(k).or_insert((0, format!("{f:?} J={j}")));
        e.0 += 1;
    };
    let mut strictness_with_nu_above_j = 0;
    for _ in 0..cases {
        let nu = rng.gen_range(0..=12);
        let mut ps = primes.clone();
        let mut pairs: Vec<(u64, u32)> = (0..nu)
            .map(|_| {
                let p = ps.swap_remove(rng.gen_range(0..ps.len()));
                (p, rng.gen_range(1..=12))
            })
            .collect();
        pairs.sort();
        let j = rng.gen_range(1..=4);
        let f = Factorization::from_u64_pairs(&pairs).unwrap();

        let prev = depleted_ratio(&f, j - 1);
        let cur = depleted_ratio(&f, j);
        if prev.value < cur.value - 1e-12 {
            note("monotone", &pairs, j);
        }
        let equal_exponents = pairs.iter().all(|(_, e)| *e == pairs[0].1);
        if (prev.value - cur.value).abs() <= 1e-9 && !equal_exponents {
            note("strictness", &pairs, j);
            if nu > j {
                strictness_with_nu_above_j += 1;
            }
        }
        if nu >= j && (cur.value - sigma_masks_exact(&pairs, j)).abs() > 1e-12 {
            note("witness size", &pairs, j);
        }
        let e = rng.gen_range(2..=5);
        if nu > j && (depleted_ratio(&f.pow(e), j).value - e as f64 * cur.value).abs() > 1e-9 * e as f64 * cur.value {
            note("power scaling", &pairs, j);
        }
        if ps.is_empty() {
            ps.push(233);
        }
        let p = ps[rng.gen_range(0..ps.len())];
        let pe = rng.gen_range(1..=12);
        let r = prime_scaling_probe(&f, &Natural::from(p), pe, j).unwrap();
        if r.sigma_scaled > r.sigma_prev + 1e-12 {
            note("coprime prime", &pairs, j);
        }
        let brute = depleted_ratio_bruteforce(&f, j).unwrap().value;
        let masks = sigma_masks(&pairs, j);
        if (brute - cur.value).abs() > 1e-12 || (masks - cur.value).abs() > 1e-12 {
            note("oracle", &pairs, j);
        }
    }
    let pass = fails.is_empty();
    let mut detail = format!("{cases} factorizations");
    for (k, (n, first)) in &fails {
        detail += &format!("; {k}: {n} failures, first {first}");
    }
    if fails.contains_key("strictness") {
        detail += &format!(" ({strictness_with_nu_above_j} with nu > J)");
    }
    (pass, detail)
}

fn criterion_3() -> (bool, String) {
    let mut rng = StdRng::seed_from_u64(0x5a5a_3003);
    let n_cases = 10_000;
    let (mut mean_min, mut strict_fail) = (f64::INFINITY, 0);
    for i in 0..n_cases {
        let n = rng.gen_range(2..=12);
        let mut v: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0))).collect();
        if i % 10 == 0 {
            let a = v[0].0;
            v.iter_mut().for_each(|t| t.0 = a);
        }
        let k = (0..n).max_by(|&a, &b| v[a].0.total_cmp(&v[b].0)).unwrap();
        v.swap(k, n - 1);
        let mean = |s: &[(f64, f64)]| s.iter().map(|(a, x)| a * x).sum::<f64>() / s.iter().map(|(_, x)| x).sum::<f64>();
        let margin = mean(&v) - mean(&v[..n - 1]);
        mean_min = mean_min.min(margin);
        let equal = v.iter().all(|t| t.0 == v[0].0);
        if !equal && margin <= 0.0 {
            strict_fail += 1;
        }
    }
    let mut jensen_min = f64::INFINITY;
    for _ in 0..n_cases {
        let n = rng.gen_range(1..=12);
        let v: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0))).collect();
        let lhs = v.iter().map(|(a, x)| a * x).sum::<f64>() * v.iter().map(|(a, x)| a / x).sum::<f64>();
        let rhs = v.iter().map(|(a, _)| a).sum::<f64>().powi(2);
        jensen_min = jensen_min.min((lhs - rhs) / rhs);
    }
    let primes: Vec<u64> = sieve(300).into_iter().take(50).map(u64::from).collect();
    let mut bound_fail = 0;
    let mut bound_min = f64::INFINITY;
    for _ in 0..n_cases {
        let nu = rng.gen_range(1..=6);
        let mut ps = primes.clone();
        let mut pairs: Vec<(u64, u32)> =
            (0..nu).map(|_| (ps.swap_remove(rng.gen_range(0..ps.len())), rng.gen_range(1..=12))).collect();
        pairs.sort();
        let d1 = Factorization::from_u64_pairs(&pairs).unwrap();
        let c = choose_m(&d1, &[], MPrimes::AllOfD1);
        let s = sigma_masks(&pairs, 0);
        let margin = 2.0 * s * s + 1.0 - (c.m + 1) as f64;
        bound_min = bound_min.min(margin);
        if margin < -1e-12 {
            bound_fail += 1;
        }
    }
    let pass = mean_min >= -1e-12 && strict_fail == 0 && jensen_min >= -1e-12 && bound_fail == 0;
    (
        pass,
        format!(
            "{n_cases} each: weighted-mean margin min {mean_min:.3e}, strictness failures {strict_fail}; \
             Cauchy-Schwarz relative margin min {jensen_min:.3e}; M+1 <= 2 sigma(D1)^2 + 1 margin min {bound_min:.3e}"
        ),
    )
}

fn criterion_4() -> (bool, String) {
    let mut worst = 0f64;
    let mut points = 0;
    for m in 1..=40u32 {
        for i in 0..25 {
            let t = i as f64 * std::f64::consts::TAU / 25.0 + 0.01;
            let r = fejer_identities(m, t);
            worst = worst.max((r.kernel_lhs.0 - r.kernel_rhs.0).abs());
            points += 1;
        }
    }
    let weights_ok = (1..=10_000u32).all(|m| weight_sum(m) == weight_closed_form(m));
    let mut tail_fail = 0;
    let mut tail_points = 0;
    for n in [1u32, 10, 100, 1000] {
        for i in 0..250 {
            let t = i as f64 / 250.0 * 3.0 - 1.0;
            if (bernoulli_b2(t) - fourier_partial(t, n)).abs() > fourier_tail_bound(n) + 1e-15 {
                tail_fail += 1;
            }
            tail_points += 1;
        }
    }
    let pass = worst <= 1e-12 && weights_ok && tail_fail == 0;
    (
        pass,
        format!(
            "kernel max error {worst:.2e} on {points} points; weight identity for M <= 10^4: {weights_ok}; \
             tail bound failures {tail_fail}/{tail_points}"
        ),
    )
}

fn criterion_5() -> (bool, String) {
    let recs = corpus();
    let prec = PrecisionTarget::default();
    let h = |e: &WeierstrassModel, p: &Point, m| canonical_height(e, p, m, prec).unwrap();
    let (mut agree, mut quad, mut para) = (0f64, 0f64, 0f64);
    let mut pairs = Vec::new();
    for r in &recs {
        let p = r.generator.clone().unwrap();
        let hs = h(&r.model, &p, HeightMethod::SumOfLocal);
        let hd = h(&r.model, &p, HeightMethod::DoublingLimit);
        agree = agree.max((hs - hd).abs());
        for m in 2..=5i64 {
            let hm = h(&r.model, &r.model.multiply(&p, m), HeightMethod::SumOfLocal);
            quad = quad.max((hm - (m * m) as f64 * hd).abs());
        }
        let q = r.model.multiply(&p, 3);
        pairs.push((r.model.clone(), p, q));
    }
    let e389 = WeierstrassModel::from_ints([0, 1, 1, -2, 0]).unwrap();
    pairs.push((e389, Point::from_ints(-1, 1), Point::from_ints(0, 0)));
    let e5077 = WeierstrassModel::from_ints([0, 0, 1, -7, 6]).unwrap();
    pairs.push((e5077.clone(), Point::from_ints(0, 2), Point::from_ints(1, 0)));
    pairs.push((e5077, Point::from_ints(2, 0), Point::from_ints(1, 0)));
    for (e, p, q) in &pairs {
        let hh = |x: &Point| h(e, x, HeightMethod::SumOfLocal);
        para = para.max((hh(&e.add(p, q)) + hh(&e.sub(p, q)) - 2.0 * hh(p) - 2.0 * hh(q)).abs());
    }
    let e37 = WeierstrassModel::from_ints([0, 0, 1, -1, 0]).unwrap();
    let h37 = h(&e37, &Point::from_ints(0, 0), HeightMethod::DoublingLimit);
    let pass = recs.len() >= 20 && agree <= 2e-8 && quad <= 1e-8 && para <= 1e-7 && (h37 - 0.0511114).abs() <= 1e-6;
    (
        pass,
        format!(
            "{} curves: method agreement {agree:.2e}, quadraticity {quad:.2e}, parallelogram {para:.2e} over {} pairs, 37a h = {h37:.10}",
            recs.len(),
            pairs.len()
        ),
    )
}

fn criterion_6() -> (bool, String) {
    let mut places = 0;
    let mut worst = f64::INFINITY;
    let mut printed_fail = 0;
    for r in corpus() {
        let data = CurveData::new(&r.model);
        let p = data.to_minimal(r.generator.as_ref().unwrap());
        for red in data.reduction.iter().filter(|x| x.reduction_kind == ReductionKind::SplitMultiplicative) {
            let t = tate_bound_check(data.model(), &p, &red.prime).unwrap();
            // The local heights here sum to the canonical height, so the
            // half-normalized bound becomes B2(a/n) n ln p.
            let margin = t.lambda - t.bound;
            worst = worst.min(margin);
            if !t.printed_holds {
                printed_fail += 1;
            }
            places += 1;
        }
    }
    let pass = places > 0 && worst >= -1e-9;
    (
        pass,
        format!("{places} split multiplicative places, min margin {worst:.3e}; unnormalized half bound failed at {printed_fail}"),
    )
}

fn criterion_7() -> (bool, String) {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut n = 0;
    let mut worst_local = f64::INFINITY;
    for r in corpus() {
        let p = r.generator.clone().unwrap();
        let cert = match certify(&r.label, &r.model, &p, &CertifierConfig::default()) {
            Ok(c) => c,
            Err(e) => {
                problems.push(format!("{}: {e}", r.label));
                continue;
            }
        };
        n += 1;
        let h = canonical_height(&r.model, &p, HeightMethod::DoublingLimit, PrecisionTarget::default()).unwrap();
        let cap = (6 * cert.m as u64).pow(2);
        let lb = cert.lower_bound.0;
        let s = szpiro_ratio(&cert.split.d1);
        for e in &cert.chain.local_estimates {
            worst_local = worst_local.min(e.margin.0);
        }
        let checks = [
            (cert.k.k <= cap, "k within (6M)^2"),
            (lb > 0.0, "positive"),
            (lb <= h + 1e-8, "below h"),
            ((cert.m + 1) as f64 <= 2.0 * s * s + 1.0 + 1e-12, "Jensen bound"),
            (cert.chain.local_estimates.iter().all(|e| e.margin.0 >= -1e-9), "local estimate"),
        ];
        for (ok, what) in checks {
            if !ok {
                problems.push(format!("{}: {what}", r.label));
            }
        }
    }
    let t = start.elapsed();
    let pass = problems.is_empty() && t < Duration::from_secs(300);
    let mut detail = format!("{n} certificates in {t:.1?}, min local-estimate margin {worst_local:.3e}");
    if !problems.is_empty() {
        detail += &format!("; {}", problems.join(", "));
    }
    (pass, detail)
}

fn criterion_8() -> (bool, String) {
    let mut n = 0;
    let mut bad = Vec::new();
    for t in enumerate_triples(200).unwrap() {
        let r = frey_disc_check(&t);
        let abc2 = t.product() * t.product();
        let sixteen = Natural::from(16u32);
        let ok = r.disc_min == &abc2 * &sixteen || &r.disc_min * Natural::from(256u32) == abc2;
        if !ok || !r.holds() || !r.model_disc_matches() {
            bad.push(t.to_string());
        }
        n += 1;
    }
    (bad.is_empty(), format!("{n} triples, {} outside the two cases {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>()))
}

/// Top candidates for `sigma_J`, per J, by exhaustive removal sets.
fn abc_oracle(max: u64, j_max: usize, top: usize) -> Vec<Vec<(f64, u64, u64, Vec<f64>)>> {
    let mut spf = vec![0u32; max as usize + 1];
    for i in 2..=max as usize {
        if spf[i] == 0 {
            for k in (i..=max as usize).step_by(i) {
                if spf[k] == 0 {
                    spf[k] = i as u32;
                }
            }
        }
    }
    let factor = |mut n: u64, out: &mut Vec<(u64, u32)>| {
        while n > 1 {
            let p = spf[n as usize] as u64;
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    };
    let mut lists: Vec<Vec<(f64, u64, u64, Vec<f64>)>> = vec![Vec::new(); j_max + 1];
    let mut floor = vec![f64::NEG_INFINITY; j_max + 1];
    let mut pairs = Vec::new();
    for a in 1..=max / 2 {
        for b in a..=max - a {
            if num_integer::gcd(a, b) != 1 {
                continue;
            }
            pairs.clear();
            factor(a, &mut pairs);
            factor(b, &mut pairs);
            factor(a + b, &mut pairs);
            let sig: Vec<f64> = (0..=j_max).map(|j| sigma_masks(&pairs, j)).collect();
            for j in 0..=j_max {
                if sig[j] >= floor[j] {
                    lists[j].push((sig[j], a, b, sig.clone()));
                    if lists[j].len() > 8 * top {
                        lists[j].sort_by(|x, y| y.0.total_cmp(&x.0));
                        floor[j] = lists[j][top - 1].0 - 1e-9;
                        lists[j].retain(|x| x.0 >= floor[j]);
                    }
                }
            }
        }
    }
    for l in &mut lists {
        l.sort_by(|x, y| y.0.total_cmp(&x.0).then((x.1 + x.2).cmp(&(y.1 + y.2))).then(x.1.cmp(&y.1)));
    }
    lists
}

fn criterion_9() -> (bool, String) {
    let max = 10_000u64;
    let top = 25;
    let mut outputs = Vec::new();
    let mut t8 = Duration::ZERO;
    for w in ["1", "4", "8"] {
        let start = Instant::now();
        let (code, out, err) = cli(&["abc-scan", "--max", "10000", "--J", "0..2", "--workers", w]);
        if w == "8" {
            t8 = start.elapsed();
        }
        if code != 0 {
            return (false, format!("abc-scan exited {code}: {err}"));
        }
        outputs.push(out);
    }
    let identical = outputs.iter().all(|o| o == &outputs[0]);
    let oracle = abc_oracle(max, 2, top);

    let mut mismatches = Vec::new();
    let mut rows = 0;
    let mut rdr = csv::Reader::from_reader(outputs[0].as_bytes());
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let j: usize = rec[0].parse().unwrap();
        let rank: usize = rec[1].parse().unwrap();
        let (a, b): (u64, u64) = (rec[2].parse().unwrap(), rec[3].parse().unwrap());
        let sig: Vec<f64> = (0..=2).map(|k| rec[6 + k].parse().unwrap()).collect();
        rows += 1;
        let Some(expect) = oracle[j].get(rank - 1) else {
            mismatches.push(format!("J={j} rank {rank}: oracle has no entry"));
            continue;
        };
        let s = expect.0;
        // Ties within rounding may be ordered either way.
        let tied: Vec<_> = oracle[j].iter().filter(|x| (x.0 - s).abs() <= 1e-12 * s).collect();
        let found = tied.iter().find(|x| x.1 == a && x.2 == b);
        match found {
            Some(x) => {
                if x.3.iter().zip(&sig).any(|(o, v)| (o - v).abs() > 1e-10 * o) {
                    mismatches.push(format!("J={j} rank {rank}: sigma {sig:?} vs {:?}", x.3));
                }
            }
            None => mismatches.push(format!("J={j} rank {rank}: ({a},{b}) not among oracle entries with sigma {s}")),
        }
    }
    let pass = identical && mismatches.is_empty() && rows == 3 * top && t8 < Duration::from_secs(60);
    let mut detail = format!("{rows} rows, identical across 1/4/8 workers: {identical}, 8-worker run {t8:.1?}");
    if !mismatches.is_empty() {
        detail += &format!("; {}", mismatches.iter().take(3).cloned().collect::<Vec<_>>().join("; "));
    }
    (pass, detail)
}

fn criterion_10() -> (bool, String) {
    let (code, text, err) = cli(&["probe"]);
    if code != 0 {
        return (false, format!("probe exited {code}: {err}"));
    }
    let (code, json, _) = cli(&["probe", "--format", "json"]);
    if code != 0 {
        return (false, "probe --format json failed".into());
    }
    let v: Value = serde_json::from_str(&json).unwrap();
    let num = |x: &Value| x.as_f64().unwrap();
    let near = |a: f64, b: f64, tol: f64| (a - b).abs() <= tol;
    let mut problems = Vec::new();
    let mut check = |ok: bool, what: &str| {
        if !ok {
            problems.push(what.to_string());
        }
    };

    let s = &v["scaling"];
    // F = 2 * 3^5, p = 5, e = 7
    let o_prev = sigma_masks(&[(2, 1), (3, 5)], 0);
    let o_scaled = sigma_masks(&[(2, 1), (3, 5), (5, 7)], 1);
    check(num(&s[0]["sigma"]) == 1.0, "sigma_1(2*3^5) = 1");
    check(near(num(&s[0]["sigma_prev"]), o_prev, 1e-12) && near(o_prev, 3.4525, 1e-4), "sigma_0(2*3^5)");
    check(near(num(&s[0]["sigma_scaled"]), o_scaled, 1e-12) && near(o_scaled, o_prev, 1e-12), "sigma_1(5^7*2*3^5)");
    check(s[0]["removal_upper_holds"] == true, "upper bound by sigma_(J-1)");
    check(s[0]["printed_upper_holds"] == false, "printed upper inequality fails");
    // F = 3^4, p = 2, e = 1
    check(num(&s[1]["sigma_scaled"]) == 1.0 && sigma_masks(&[(2, 1), (3, 4)], 1) == 1.0, "sigma_1(2*3^4) = 1");
    // F = 2^6 3^4, p = 2, e = 4
    let o = sigma_masks(&[(2, 10), (3, 4)], 1);
    check(near(num(&s[2]["sigma_scaled"]), o, 1e-12) && near(o, 4.0, 1e-12), "sigma_1(2^10*3^4) = 4");
    check(near(num(&s[2]["sigma"]) / (3.0 * std::f64::consts::LN_2), 1.92, 0.01), "sigma_1(F)/(3 ln 2)");
    check(s[2]["removal_lower_holds"] == true, "removal lower bound holds");

    let t = &v["transfer"][0];
    check(t["disc_min"] == "2^10 * 3^4", "Frey disc of (1,8,-9)");
    check(near(num(&t["sigma_disc_min"]), sigma_masks(&[(2, 10), (3, 4)], 1), 1e-12), "sigma_1(disc_min)");
    check(t["printed_holds"] == false && t["removal_holds"] == true, "transfer inequalities");

    let flagged: Vec<&str> = text.lines().filter(|l| l.contains("DISCREPANCY")).collect();
    check(
        text.lines().any(|l| l.contains("sigma_J(F) >= sigma_J(p^e F)") && l.contains("DISCREPANCY")),
        "scaling discrepancy flagged",
    );
    check(
        text.lines().any(|l| l.contains("2 sigma_J(ABC) / ln 2") && l.contains("DISCREPANCY")),
        "transfer discrepancy flagged",
    );
    check(!text.lines().any(|l| l.contains("removal") && l.contains("DISCREPANCY")), "removal variants unflagged");
    let pass = problems.is_empty();
    let mut detail = format!("{} lines flagged", flagged.len());
    if !pass {
        detail += &format!("; failed: {}", problems.join(", "));
    }
    (pass, detail)
}

fn main() {
    // `cargo test -- --list` and filters come through as arguments.
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let outcomes = [
        run(1, "example 1728", criterion_1),
        run(2, "sigma_J property suite", criterion_2),
        run(3, "weighted mean and Cauchy-Schwarz suites", criterion_3),
        run(4, "Fejer and Bernoulli suite", criterion_4),
        run(5, "canonical heights on the corpus", criterion_5),
        run(6, "Tate lower bound at split places", criterion_6),
        run(7, "certifier on the corpus", criterion_7),
        run(8, "Frey discriminant dichotomy", criterion_8),
        run(9, "abc-scan determinism and correctness", criterion_9),
        run(10, "probe reports", criterion_10),
    ];
    let budgets = [1, 30, 5, 10, 60, 60, 300, 120, 180, 60];
    let mut hard_fail = false;
    for o in &outcomes {
        let mut pass = o.pass;
        let mut detail = o.detail.clone();
        if o.elapsed > Duration::from_secs(budgets[o.id as usize - 1]) {
            pass = false;
            detail += &format!("; over the {} s budget", budgets[o.id as usize - 1]);
        }
        let known = KNOWN_UNATTAINABLE.iter().find(|(id, _)| *id == o.id);
        println!("{} criterion {:>2} {}: {} [{:.2?}]", if pass { "PASS" } else { "FAIL" }, o.id, o.name, detail, o.elapsed);
        if !pass {
            match known {
                Some((_, why)) => println!("     known unattainable: {why}"),
                None => hard_fail = true,
            }
        }
    }
    if hard_fail {
        std::process::exit(1);
    }
}
