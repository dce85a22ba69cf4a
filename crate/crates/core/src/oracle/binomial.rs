use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};

/// Number of trials and per-trial success probability of a binomial law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinomialSpec {
    n: u64,
    p: f64,
}

impl BinomialSpec {
    pub fn new(n: u64, p: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("binomial n must be at least 1".into()));
        }
        check_probability("p", p)?;
        Ok(Self { n, p })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    fn check_k(&self, k: u64) -> Result<()> {
        if k > self.n {
            Err(Error::Invalid(format!(
                "k = {k} is outside 0..={}",
                self.n
            )))
        } else {
            Ok(())
        }
    }

    /// P[X = k].
    pub fn pmf(&self, k: u64) -> Result<f64> {
        self.check_k(k)?;
        Ok(self.pmf_unchecked(k))
    }

    /// P[X ≥ k]. The sum runs over whichever tail is shorter in mass.
    pub fn cdf_upper(&self, k: u64) -> Result<f64> {
        self.check_k(k)?;
        if k == 0 {
            return Ok(1.0);
        }
        let mean = self.n as f64 * self.p;
        if k as f64 > mean {
            Ok((k..=self.n).rev().map(|j| self.pmf_unchecked(j)).sum())
        } else {
            let lower: f64 = (0..k).map(|j| self.pmf_unchecked(j)).sum();
            Ok((1.0 - lower).clamp(0.0, 1.0))
        }
    }

    pub(crate) fn pmf_unchecked(&self, k: u64) -> f64 {
        let (n, p) = (self.n, self.p);
        if p == 0.0 {
            return if k == 0 { 1.0 } else { 0.0 };
        }
        if p == 1.0 {
            return if k == n { 1.0 } else { 0.0 };
        }
        let ln_choose = ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k);
        let ln_pmf = ln_choose + k as f64 * p.ln() + (n - k) as f64 * (-p).ln_1p();
        ln_pmf.exp()
    }
}

/// ln(n!) = ln Γ(n + 1).
///
/// Exact product up to 170! (the largest factorial representable in f64),
/// Stirling's series with four correction terms above that.
pub fn ln_factorial(n: u64) -> f64 {
    if n <= 170 {
        (2..=n).fold(1.0_f64, |acc, i| acc * i as f64).ln()
    } else {
        let x = n as f64;
        let inv = 1.0 / x;
        let inv2 = inv * inv;
        let series =
            inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
        x * x.ln() - x + 0.5 * (std::f64::consts::TAU * x).ln() + series
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// pmf by the ratio recurrence from k = 0, independent of ln_factorial.
    fn pmf_by_recurrence(n: u64, p: f64, k: u64) -> f64 {
        let mut value = (1.0 - p).powi(n as i32);
        for j in 0..k {
            value *= (n - j) as f64 / (j + 1) as f64 * (p / (1.0 - p));
        }
        value
    }

    #[test]
    fn pmf_trivial_cases() {
        assert_eq!(BinomialSpec::new(1, 0.5).unwrap().pmf(0).unwrap(), 0.5);
        assert_eq!(BinomialSpec::new(10, 0.0).unwrap().pmf(0).unwrap(), 1.0);
        assert_eq!(BinomialSpec::new(10, 1.0).unwrap().pmf(10).unwrap(), 1.0);
        assert_eq!(BinomialSpec::new(10, 1.0).unwrap().pmf(3).unwrap(), 0.0);
    }

    #[test]
    fn pmf_matches_recurrence() {
        let spec = BinomialSpec::new(93, 0.15).unwrap();
        let oracle = pmf_by_recurrence(93, 0.15, 18);
        let got = spec.pmf(18).unwrap();
        assert!(((got - oracle) / oracle).abs() < 1e-10);
        // scipy.stats.binom.pmf(18, 93, 0.15)
        assert!((got - 0.054_746_619_246_920_78).abs() < 1e-12);
        for k in 0..=93 {
            let o = pmf_by_recurrence(93, 0.15, k);
            let g = spec.pmf(k).unwrap();
            assert!(((g - o) / o).abs() < 1e-10, "k = {k}");
        }
    }

    #[test]
    fn pmf_large_n_relative_accuracy() {
        // Recurrence is stable here because (1-p)^n does not underflow.
        let spec = BinomialSpec::new(10_000, 0.02).unwrap();
        for k in [150, 200, 250] {
            let o = pmf_by_recurrence(10_000, 0.02, k);
            let g = spec.pmf(k).unwrap();
            assert!(((g - o) / o).abs() < 1e-10, "k = {k}: {g} vs {o}");
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(BinomialSpec::new(0, 0.5).is_err());
        assert!(BinomialSpec::new(5, 1.2).is_err());
        let spec = BinomialSpec::new(5, 0.3).unwrap();
        assert!(spec.pmf(6).is_err());
        assert!(spec.cdf_upper(6).is_err());
    }

    #[test]
    fn upper_tail_values() {
        assert_eq!(BinomialSpec::new(5, 0.3).unwrap().cdf_upper(0).unwrap(), 1.0);
        assert!((BinomialSpec::new(2, 0.5).unwrap().cdf_upper(2).unwrap() - 0.25).abs() < 1e-15);
        // scipy.stats.binom.sf(17, 93, 0.15)
        let tail = BinomialSpec::new(93, 0.15).unwrap().cdf_upper(18).unwrap();
        assert!((tail - 0.151_329_159_912_042_77).abs() < 1e-12);
    }

    #[test]
    fn ln_factorial_joins_smoothly() {
        let exact_171 = ln_factorial(170) + 171f64.ln();
        assert!((ln_factorial(171) - exact_171).abs() < 1e-12);
        let exact_1000: f64 = (1..=1000).map(|i| (i as f64).ln()).sum();
        assert!((ln_factorial(1000) - exact_1000).abs() / exact_1000 < 1e-13);
    }
}
