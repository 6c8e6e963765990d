//! Small statistics helpers shared by the experiments.
//!
//! Every bound check in the harness is one-sided and allows three standard
//! deviations of Monte Carlo noise on top of the theoretical envelope.

/// Standard deviation of an empirical rate from `trials` Bernoulli samples.
///
/// Evaluated at the rate itself; callers that want the deviation under the
/// null hypothesis pass the theoretical bound instead.
pub fn binomial_sigma(rate: f64, trials: u64) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    let r = rate.clamp(0.0, 1.0);
    (r * (1.0 - r) / trials as f64).sqrt()
}

/// One-sided check `rate <= bound + 3*sigma`, with sigma taken at whichever
/// of the two values gives the larger (more forgiving) noise estimate.
pub fn within_upper(rate: f64, bound: f64, trials: u64) -> bool {
    let sigma = binomial_sigma(rate, trials).max(binomial_sigma(bound, trials));
    rate <= bound + 3.0 * sigma
}

/// One-sided check `rate >= bound - 3*sigma`.
pub fn within_lower(rate: f64, bound: f64, trials: u64) -> bool {
    let sigma = binomial_sigma(rate, trials).max(binomial_sigma(bound, trials));
    rate >= bound - 3.0 * sigma
}

/// Noise on `log2(eps_hat)` via the delta method: d(log2 e)/de = 1/(e ln 2).
///
/// `eps_hat == 0` has no usable log; callers flag that case as vacuous.
pub fn log2_rate_sigma(eps_hat: f64, trials: u64) -> f64 {
    if eps_hat <= 0.0 {
        return f64::INFINITY;
    }
    binomial_sigma(eps_hat, trials) / (eps_hat * std::f64::consts::LN_2)
}

/// Exact `log2(n choose k)` summed in f64, good far past desk scale.
pub fn log2_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    let mut acc = 0.0;
    for i in 0..k {
        acc += ((n - i) as f64).log2() - ((i + 1) as f64).log2();
    }
    acc
}

/// `n choose k` saturating at `u128::MAX`; desk-scale inputs never saturate.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_table() {
        assert_eq!(binomial(27, 2), 351);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(5, 5), 1);
        assert_eq!(binomial(4, 7), 0);
        assert_eq!(binomial(66, 3), 45760);
    }

    #[test]
    fn log2_binomial_matches_exact() {
        let exact = binomial(40, 7) as f64;
        assert!((log2_binomial(40, 7) - exact.log2()).abs() < 1e-9);
    }

    #[test]
    fn sigma_is_zero_at_extremes() {
        assert_eq!(binomial_sigma(0.0, 100), 0.0);
        assert_eq!(binomial_sigma(1.0, 100), 0.0);
        assert!(binomial_sigma(0.5, 100) > 0.0);
    }
}
