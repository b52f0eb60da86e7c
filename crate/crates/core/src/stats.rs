//! Small statistics helpers shared by the verification suites and tests:
//! chi-square goodness of fit, a two-sample Kolmogorov-Smirnov distance,
//! and binomial standard deviations for Monte-Carlo acceptance margins.

/// Pearson chi-square statistic for observed counts against expected counts.
///
/// Panics if the lengths differ or an expected count is nonpositive; callers
/// are responsible for binning so that expected counts are reasonable.
pub fn chi_square_statistic(observed: &[u64], expected: &[f64]) -> f64 {
    assert_eq!(observed.len(), expected.len(), "bin count mismatch");
    observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| {
            assert!(e > 0.0, "expected count must be positive");
            let d = o as f64 - e;
            d * d / e
        })
        .sum()
}

/// Upper critical values of chi-square at significance 1e-3, dof 1..=24.
const CHI2_1E3: [f64; 24] = [
    10.828, 13.816, 16.266, 18.467, 20.515, 22.458, 24.322, 26.124, 27.877, 29.588, 31.264,
    32.910, 34.528, 36.123, 37.697, 39.252, 40.790, 42.312, 43.820, 45.315, 46.797, 48.268,
    49.728, 51.179,
];

/// Upper critical value of the chi-square distribution at significance 1e-3.
///
/// Tabulated for 1..=24 degrees of freedom, Wilson-Hilferty beyond that
/// (relative error below 0.5% there, immaterial for the suites).
pub fn chi_square_critical_1e3(dof: usize) -> f64 {
    // z quantile at 0.999
    const Z: f64 = 3.090_232_306_167_813;
    match dof {
        0 => panic!("zero degrees of freedom"),
        k if k <= CHI2_1E3.len() => CHI2_1E3[k - 1],
        k => {
            let k = k as f64;
            let a = 2.0 / (9.0 * k);
            k * (1.0 - a + Z * a.sqrt()).powi(3)
        }
    }
}

/// Chi-square test at significance 1e-3: `true` when the observed counts are
/// consistent with the expected ones.
pub fn chi_square_ok(observed: &[u64], expected: &[f64]) -> bool {
    let dof = observed.len() - 1;
    chi_square_statistic(observed, expected) <= chi_square_critical_1e3(dof)
}

/// Two-sample Kolmogorov-Smirnov statistic `D = sup |F_a - F_b|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty());
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(|u, v| u.total_cmp(v));
    ys.sort_by(|u, v| u.total_cmp(v));
    let (n, m) = (xs.len(), ys.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        // Advance past ties on both sides before comparing the CDFs.
        let cut = xs[i].min(ys[j]);
        while i < n && xs[i] <= cut {
            i += 1;
        }
        while j < m && ys[j] <= cut {
            j += 1;
        }
        let fa = i as f64 / n as f64;
        let fb = j as f64 / m as f64;
        d = d.max((fa - fb).abs());
    }
    d
}

/// Asymptotic two-sample KS critical value at significance `alpha`.
pub fn ks_critical(n: usize, m: usize, alpha: f64) -> f64 {
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    c * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

/// Standard deviation of an empirical binomial frequency at rate `p`.
pub fn binomial_sigma(p: f64, trials: u64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    (p * (1.0 - p) / trials as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_square_critical_matches_tables() {
        // Reference quantiles at 1e-3: dof 4 -> 18.467, dof 6 -> 22.458.
        assert!((chi_square_critical_1e3(4) - 18.467).abs() < 0.15);
        assert!((chi_square_critical_1e3(6) - 22.458).abs() < 0.15);
    }

    #[test]
    fn ks_detects_shift() {
        let a: Vec<f64> = (0..1000).map(|i| i as f64 / 1000.0).collect();
        let b: Vec<f64> = (0..1000).map(|i| i as f64 / 1000.0 + 0.5).collect();
        assert!(ks_two_sample(&a, &a) < 1e-12);
        assert!(ks_two_sample(&a, &b) > ks_critical(1000, 1000, 1e-3));
    }
}
