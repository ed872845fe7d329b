//! Small statistics toolkit: running moments, Monte Carlo estimates with
//! standard errors, and a one/two-sample Kolmogorov-Smirnov test used by the
//! distributional property checks.

/// A Monte Carlo estimate: sample mean, standard error of the mean, and the
/// number of samples behind it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: u64,
}

impl McEstimate {
    /// Estimate of a probability from Bernoulli counts.
    pub fn from_bernoulli(hits: u64, trials: u64) -> Self {
        if trials == 0 {
            return Self {
                mean: f64::NAN,
                std_error: f64::NAN,
                n_samples: 0,
            };
        }
        let p = hits as f64 / trials as f64;
        Self {
            mean: p,
            std_error: (p * (1.0 - p) / trials as f64).sqrt(),
            n_samples: trials,
        }
    }

    /// Multiplies by an exact constant.
    pub fn scaled(self, c: f64) -> Self {
        Self {
            mean: self.mean * c,
            std_error: self.std_error * c.abs(),
            n_samples: self.n_samples,
        }
    }

    /// Ratio of two estimates with first-order (delta-method) error
    /// propagation, treating the operands as independent.
    pub fn ratio(self, den: McEstimate) -> Self {
        let mean = self.mean / den.mean;
        let rel = (rel_var(self) + rel_var(den)).sqrt();
        Self {
            mean,
            std_error: (mean * rel).abs(),
            n_samples: self.n_samples.min(den.n_samples),
        }
    }

    /// Product of two estimates with delta-method error propagation.
    pub fn product(self, other: McEstimate) -> Self {
        let mean = self.mean * other.mean;
        let rel = (rel_var(self) + rel_var(other)).sqrt();
        Self {
            mean,
            std_error: (mean * rel).abs(),
            n_samples: self.n_samples.min(other.n_samples),
        }
    }

    /// Sum of two estimates, errors added in quadrature.
    pub fn plus(self, other: McEstimate) -> Self {
        Self {
            mean: self.mean + other.mean,
            std_error: (self.std_error * self.std_error + other.std_error * other.std_error)
                .sqrt(),
            n_samples: self.n_samples.min(other.n_samples),
        }
    }

    /// Distance from a reference value in standard errors. Zero spread maps
    /// to 0 when the values agree exactly and infinity otherwise.
    pub fn z_score(&self, reference: f64) -> f64 {
        let diff = self.mean - reference;
        if self.std_error == 0.0 {
            if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            diff / self.std_error
        }
    }
}

fn rel_var(e: McEstimate) -> f64 {
    if e.mean == 0.0 {
        f64::INFINITY
    } else {
        let r = e.std_error / e.mean;
        r * r
    }
}

/// Streaming first and second moments, mergeable by plain summation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningStats {
    n: u64,
    sum: f64,
    sum_sq: f64,
}

impl RunningStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        if self.n == 0 {
            f64::NAN
        } else {
            self.sum / self.n as f64
        }
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            return f64::NAN;
        }
        let n = self.n as f64;
        ((self.sum_sq - self.sum * self.sum / n) / (n - 1.0)).max(0.0)
    }

    pub fn std_error(&self) -> f64 {
        if self.n == 0 {
            f64::NAN
        } else {
            (self.variance() / self.n as f64).sqrt()
        }
    }

    pub fn estimate(&self) -> McEstimate {
        McEstimate {
            mean: self.mean(),
            std_error: if self.n < 2 { 0.0 } else { self.std_error() },
            n_samples: self.n,
        }
    }
}

/// One-sample Kolmogorov-Smirnov statistic of `samples` against the CDF `f`.
/// `samples` does not need to be sorted.
pub fn ks_statistic_one_sample<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let n = sorted.len() as f64;
    let mut sup = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let fx = cdf(x);
        let lower = (fx - i as f64 / n).abs();
        let upper = ((i + 1) as f64 / n - fx).abs();
        sup = sup.max(lower).max(upper);
    }
    sup
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_statistic_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(|p, q| p.total_cmp(q));
    ys.sort_by(|p, q| p.total_cmp(q));
    let (n, m) = (xs.len(), ys.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut sup = 0.0f64;
    while i < n && j < m {
        let t = xs[i].min(ys[j]);
        while i < n && xs[i] <= t {
            i += 1;
        }
        while j < m && ys[j] <= t {
            j += 1;
        }
        sup = sup.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    sup
}

/// Asymptotic one-sample KS critical value at significance `alpha`
/// (`sqrt(-ln(alpha/2)/2) / sqrt(n)`).
pub fn ks_critical_value(n: usize, alpha: f64) -> f64 {
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    c / (n as f64).sqrt()
}

/// Asymptotic two-sample KS critical value at significance `alpha`.
pub fn ks_critical_value_two_sample(n: usize, m: usize, alpha: f64) -> f64 {
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    c * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;

    #[test]
    fn running_stats_match_direct_formulas() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let mut s = RunningStats::new();
        for &x in &xs {
            s.push(x);
        }
        assert_eq!(s.count(), 4);
        assert!((s.mean() - 2.5).abs() < 1e-15);
        assert!((s.variance() - 5.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn bernoulli_estimate() {
        let e = McEstimate::from_bernoulli(25, 100);
        assert!((e.mean - 0.25).abs() < 1e-15);
        assert!((e.std_error - (0.25 * 0.75 / 100.0f64).sqrt()).abs() < 1e-15);
        let empty = McEstimate::from_bernoulli(0, 0);
        assert_eq!(empty.n_samples, 0);
        assert!(empty.mean.is_nan());
    }

    #[test]
    fn delta_method_ratio() {
        let a = McEstimate {
            mean: 2.0,
            std_error: 0.02,
            n_samples: 100,
        };
        let b = McEstimate {
            mean: 4.0,
            std_error: 0.08,
            n_samples: 200,
        };
        let r = a.ratio(b);
        assert!((r.mean - 0.5).abs() < 1e-15);
        let expect = 0.5 * ((0.01f64).powi(2) + (0.02f64).powi(2)).sqrt();
        assert!((r.std_error - expect).abs() < 1e-15);
        assert_eq!(r.n_samples, 100);
    }

    #[test]
    fn ks_accepts_true_uniform_and_rejects_shifted() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let samples: Vec<f64> = (0..10_000).map(|_| rng.random::<f64>()).collect();
        let d = ks_statistic_one_sample(&samples, |x| x.clamp(0.0, 1.0));
        assert!(d < ks_critical_value(samples.len(), 0.01), "d = {d}");

        let skewed: Vec<f64> = samples.iter().map(|x| x * x).collect();
        let d_bad = ks_statistic_one_sample(&skewed, |x| x.clamp(0.0, 1.0));
        assert!(d_bad > ks_critical_value(samples.len(), 0.01));
    }

    #[test]
    fn two_sample_ks_on_identical_populations() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let a: Vec<f64> = (0..5_000).map(|_| rng.random::<f64>()).collect();
        let b: Vec<f64> = (0..5_000).map(|_| rng.random::<f64>()).collect();
        let d = ks_statistic_two_sample(&a, &b);
        assert!(d < ks_critical_value_two_sample(a.len(), b.len(), 0.01));
    }
}
