use std::f64::consts::PI;

/// Periodic second Bernoulli polynomial: `t^2 - t + 1/6` on `[0, 1)`.
pub fn bernoulli_b2(t: f64) -> f64 {
    let f = t - t.floor();
    f * f - f + 1.0 / 6.0
}

/// Partial sum `(1/pi^2) sum_{n <= terms} cos(2 pi n t) / n^2` of the Fourier
/// series of [`bernoulli_b2`].
pub fn fourier_partial(t: f64, terms: u32) -> f64 {
    let f = t - t.floor();
    let mut s = 0.0;
    for n in 1..=terms {
        let n = n as f64;
        s += (2.0 * PI * n * f).cos() / (n * n);
    }
    s / (PI * PI)
}

/// Bound on `|bernoulli_b2(t) - fourier_partial(t, terms)|` from
/// `sum_{n > N} n^-2 <= 1/N`.
pub fn fourier_tail_bound(terms: u32) -> f64 {
    1.0 / (PI * PI * terms as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        assert!((bernoulli_b2(0.0) - 1.0 / 6.0).abs() < 1e-15);
        assert!((bernoulli_b2(0.5) + 1.0 / 12.0).abs() < 1e-15);
        assert!((bernoulli_b2(1.25) - bernoulli_b2(0.25)).abs() < 1e-15);
        assert!((bernoulli_b2(-0.25) - bernoulli_b2(0.75)).abs() < 1e-15);
        // Even about 0.
        assert!((bernoulli_b2(0.3) - bernoulli_b2(0.7)).abs() < 1e-15);
    }

    #[test]
    fn fourier_tail() {
        let n = 1000;
        assert!((bernoulli_b2(0.3) - fourier_partial(0.3, n)).abs() <= fourier_tail_bound(n));
        assert!((bernoulli_b2(0.0) - fourier_partial(0.0, n)).abs() <= fourier_tail_bound(n));
    }
}
