//! Combining per-partition LP confidence distributions.
//!
//! Every partition contributes the normal confidence distribution
//! `N(lp, 1/n)`. They are pooled either under a common true value (fixed
//! effects, weights `n`) or allowing the true value to vary between partitions
//! with variance `tau2` (random effects, weights `1 / (tau2 + 1/n)`).
//! Partitions with `n = 0` carry no information and are skipped everywhere.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{invalid, Error, Result};

/// I² above this value marks heterogeneity as severe.
pub const SEVERE_I2: f64 = 0.40;

/// One partition's LP estimate and effective sample size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionEstimate {
    pub partition_id: usize,
    pub lp: f64,
    pub n: usize,
}

impl PartitionEstimate {
    pub fn new(partition_id: usize, lp: f64, n: usize) -> Self {
        Self { partition_id, lp, n }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Fixed,
    Dl,
    #[default]
    Reml,
}

impl Method {
    pub fn is_random(self) -> bool {
        !matches!(self, Method::Fixed)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Fixed => "fixed",
            Method::Dl => "dl",
            Method::Reml => "reml",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fixed" => Ok(Method::Fixed),
            "dl" => Ok(Method::Dl),
            "reml" => Ok(Method::Reml),
            other => Err(invalid("method", format!("`{other}` is not one of fixed, dl, reml"))),
        }
    }
}

/// Normal asymptotic confidence distribution `N(mean, variance)` of a combined
/// LP statistic, with the heterogeneity diagnostics that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CombinedCD {
    pub mean: f64,
    pub variance: f64,
    pub method: Method,
    pub tau2: f64,
    /// Cochran's Q about the fixed-effects mean.
    pub q: f64,
    pub k_eff: usize,
    pub i2_pre: f64,
    /// I² of the shrunken estimates; random-effects methods only.
    pub i2_post: Option<f64>,
}

impl CombinedCD {
    pub fn se(&self) -> f64 {
        self.variance.sqrt()
    }

    /// `H(x)`, the confidence distribution function.
    pub fn cdf(&self, x: f64) -> f64 {
        standard_normal().cdf((x - self.mean) / self.se())
    }

    pub fn heterogeneity(&self) -> HeterogeneityReport {
        HeterogeneityReport::new(self.q, self.i2_pre)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeterogeneityReport {
    pub q: f64,
    pub i2: f64,
    pub severe: bool,
}

impl HeterogeneityReport {
    pub fn new(q: f64, i2: f64) -> Self {
        Self {
            q,
            i2,
            severe: i2 > SEVERE_I2,
        }
    }
}

fn standard_normal() -> Normal {
    Normal::standard()
}

/// Non-degenerate estimates in partition order, so that every sum below is
/// accumulated in the same order regardless of how the input was gathered.
fn usable(estimates: &[PartitionEstimate]) -> Vec<PartitionEstimate> {
    let mut kept: Vec<PartitionEstimate> = estimates.iter().copied().filter(|e| e.n > 0).collect();
    kept.sort_by(|a, b| {
        a.partition_id
            .cmp(&b.partition_id)
            .then(a.n.cmp(&b.n))
            .then(a.lp.total_cmp(&b.lp))
    });
    kept
}

fn weighted_mean(estimates: &[PartitionEstimate], weights: &[f64]) -> (f64, f64) {
    let total: f64 = weights.iter().sum();
    let mean = estimates.iter().zip(weights).map(|(e, w)| w * e.lp).sum::<f64>() / total;
    (mean, total)
}

fn fixed_weights(estimates: &[PartitionEstimate]) -> Vec<f64> {
    estimates.iter().map(|e| e.n as f64).collect()
}

fn random_weights(estimates: &[PartitionEstimate], tau2: f64) -> Vec<f64> {
    estimates.iter().map(|e| 1.0 / (tau2 + 1.0 / e.n as f64)).collect()
}

fn passthrough(single: PartitionEstimate, method: Method) -> CombinedCD {
    log::warn!(
        "only partition {} is usable; heterogeneity is unidentifiable",
        single.partition_id
    );
    CombinedCD {
        mean: single.lp,
        variance: 1.0 / single.n as f64,
        method,
        tau2: 0.0,
        q: 0.0,
        k_eff: 1,
        i2_pre: 0.0,
        i2_post: method.is_random().then_some(0.0),
    }
}

/// Cochran's `Q = sum w (lp - mean)^2`; weights align with `estimates` and
/// entries with `n = 0` are skipped.
pub fn cochran_q(estimates: &[PartitionEstimate], combined_mean: f64, weights: &[f64]) -> f64 {
    estimates
        .iter()
        .zip(weights)
        .filter(|(e, _)| e.n > 0)
        .map(|(e, w)| w * (e.lp - combined_mean).powi(2))
        .sum()
}

/// `I² = max(0, (Q - (k - 1)) / Q)`, zero when `Q = 0`.
pub fn i_squared(q: f64, k_eff: usize) -> f64 {
    if q <= 0.0 {
        return 0.0;
    }
    ((q - (k_eff as f64 - 1.0)) / q).max(0.0)
}

/// Fixed-effects Q and I² of a set of estimates.
pub fn heterogeneity(estimates: &[PartitionEstimate]) -> HeterogeneityReport {
    let kept = usable(estimates);
    if kept.len() < 2 {
        return HeterogeneityReport::new(0.0, 0.0);
    }
    let w = fixed_weights(&kept);
    let (mean, _) = weighted_mean(&kept, &w);
    let q = cochran_q(&kept, mean, &w);
    HeterogeneityReport::new(q, i_squared(q, kept.len()))
}

/// Fixed-effects combination: weights `n`, mean `sum n lp / sum n`, variance
/// `1 / sum n`.
pub fn combine_fixed(estimates: &[PartitionEstimate]) -> Result<CombinedCD> {
    let kept = usable(estimates);
    match kept.len() {
        0 => Err(Error::NoUsablePartitions),
        1 => Ok(passthrough(kept[0], Method::Fixed)),
        k => {
            let w = fixed_weights(&kept);
            let (mean, total) = weighted_mean(&kept, &w);
            let q = cochran_q(&kept, mean, &w);
            Ok(CombinedCD {
                mean,
                variance: 1.0 / total,
                method: Method::Fixed,
                tau2: 0.0,
                q,
                k_eff: k,
                i2_pre: i_squared(q, k),
                i2_post: None,
            })
        }
    }
}

/// DerSimonian–Laird moment estimate of the between-partition variance,
/// `max(0, (Q - (k - 1)) / (sum n - sum n^2 / sum n))`.
pub fn tau2_dl(estimates: &[PartitionEstimate]) -> f64 {
    let kept = usable(estimates);
    if kept.len() < 2 {
        log::warn!("tau2 needs at least two usable partitions; using 0");
        return 0.0;
    }
    dl_on(&kept)
}

fn dl_on(kept: &[PartitionEstimate]) -> f64 {
    let w = fixed_weights(kept);
    let (mean, total) = weighted_mean(kept, &w);
    let q = cochran_q(kept, mean, &w);
    let denom = total - w.iter().map(|x| x * x).sum::<f64>() / total;
    let tau2 = (q - (kept.len() as f64 - 1.0)) / denom;
    if tau2.is_finite() {
        tau2.max(0.0)
    } else {
        0.0
    }
}

/// Fixed-point update used by the REML iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RemlUpdate {
    /// Stationarity condition of the restricted log-likelihood:
    /// `tau2 = sum w^2 ((lp - mu)^2 - s^2) / sum w^2 + 1 / sum w`.
    #[default]
    Likelihood,
    /// `tau2 = sum w^2 (k/(k-1) (lp - mu)^2 - s^2) / sum w^2`. Agrees with
    /// `Likelihood` when all partitions have the same size and only
    /// approximates it otherwise.
    ScaledMoment,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RemlOptions {
    /// Absolute change in `tau2` at which iteration stops.
    pub tol: f64,
    pub max_iter: usize,
    pub update: RemlUpdate,
}

impl Default for RemlOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 100_000,
            update: RemlUpdate::default(),
        }
    }
}

/// One REML fixed-point step from `tau2`, projected onto `[0, inf)`.
pub fn reml_step(estimates: &[PartitionEstimate], tau2: f64, update: RemlUpdate) -> f64 {
    let kept = usable(estimates);
    reml_step_on(&kept, tau2, update)
}

fn reml_step_on(kept: &[PartitionEstimate], tau2: f64, update: RemlUpdate) -> f64 {
    let w = random_weights(kept, tau2);
    let (mu, total) = weighted_mean(kept, &w);
    let k = kept.len() as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for (e, wi) in kept.iter().zip(&w) {
        let s2 = 1.0 / e.n as f64;
        let dev2 = (e.lp - mu).powi(2);
        let term = match update {
            RemlUpdate::Likelihood => dev2 - s2,
            RemlUpdate::ScaledMoment => k / (k - 1.0) * dev2 - s2,
        };
        num += wi * wi * term;
        den += wi * wi;
    }
    let next = match update {
        RemlUpdate::Likelihood => num / den + 1.0 / total,
        RemlUpdate::ScaledMoment => num / den,
    };
    next.max(0.0)
}

/// Restricted maximum likelihood estimate of `tau2`, iterated from the
/// DerSimonian–Laird value until successive iterates differ by at most `tol`.
pub fn tau2_reml(estimates: &[PartitionEstimate], options: &RemlOptions) -> Result<f64> {
    let kept = usable(estimates);
    if kept.len() < 2 {
        log::warn!("tau2 needs at least two usable partitions; using 0");
        return Ok(0.0);
    }
    let mut tau2 = dl_on(&kept);
    for _ in 0..options.max_iter {
        let next = reml_step_on(&kept, tau2, options.update);
        let change = (next - tau2).abs();
        tau2 = next;
        if change <= options.tol {
            return Ok(tau2.max(0.0));
        }
    }
    Err(Error::RemlNotConverged {
        iterations: options.max_iter,
    })
}

/// Random-effects combination with weights `1 / (tau2 + 1/n)`.
///
/// `i2_post` is the I² of the shrunken estimates
/// `lambda * mean + (1 - lambda) * lp` with `lambda = (1/n) / (tau2 + 1/n)`,
/// taken about the random-effects mean with the random-effects weights.
pub fn combine_random(estimates: &[PartitionEstimate], tau2: f64, method: Method) -> Result<CombinedCD> {
    if !(tau2 >= 0.0 && tau2.is_finite()) {
        return Err(invalid("tau2", format!("{tau2} is not a finite non-negative value")));
    }
    let kept = usable(estimates);
    match kept.len() {
        0 => return Err(Error::NoUsablePartitions),
        1 => return Ok(passthrough(kept[0], method)),
        _ => {}
    }
    let k = kept.len();
    let fw = fixed_weights(&kept);
    let (fixed_mean, _) = weighted_mean(&kept, &fw);
    let q = cochran_q(&kept, fixed_mean, &fw);

    let w = random_weights(&kept, tau2);
    let (mean, total) = weighted_mean(&kept, &w);
    let q_post: f64 = kept
        .iter()
        .zip(&w)
        .map(|(e, wi)| {
            let s2 = 1.0 / e.n as f64;
            let lambda = s2 / (tau2 + s2);
            let shrunk = lambda * mean + (1.0 - lambda) * e.lp;
            wi * (shrunk - mean).powi(2)
        })
        .sum();

    Ok(CombinedCD {
        mean,
        variance: 1.0 / total,
        method,
        tau2,
        q,
        k_eff: k,
        i2_pre: i_squared(q, k),
        i2_post: Some(i_squared(q_post, k)),
    })
}

/// Estimates `tau2` as `method` prescribes and combines.
pub fn meta_analyze(estimates: &[PartitionEstimate], method: Method, reml: &RemlOptions) -> Result<CombinedCD> {
    match method {
        Method::Fixed => combine_fixed(estimates),
        Method::Dl => combine_random(estimates, tau2_dl(estimates), method),
        Method::Reml => combine_random(estimates, tau2_reml(estimates, reml)?, method),
    }
}

/// Central interval `mean ± z_{(1+level)/2} se`.
pub fn cd_interval(cd: &CombinedCD, level: f64) -> Result<(f64, f64)> {
    if !(level > 0.0 && level < 1.0) {
        return Err(invalid("level", format!("{level} is outside (0, 1)")));
    }
    let z = standard_normal().inverse_cdf((1.0 + level) / 2.0);
    let half = z * cd.se();
    Ok((cd.mean - half, cd.mean + half))
}

/// Confidence-distribution mass of `(-inf, c]`, i.e. `H(c)`: the p-value of
/// `H0: LP <= c`.
pub fn cd_pvalue(cd: &CombinedCD, c: f64) -> f64 {
    cd.cdf(c)
}

/// Two-sided p-value for `H0: LP = c`, `2 min(H(c), 1 - H(c))`.
pub fn cd_two_sided_pvalue(cd: &CombinedCD, c: f64) -> f64 {
    let h = cd.cdf(c);
    (2.0 * h.min(1.0 - h)).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn est(pairs: &[(f64, usize)]) -> Vec<PartitionEstimate> {
        pairs
            .iter()
            .enumerate()
            .map(|(i, &(lp, n))| PartitionEstimate::new(i, lp, n))
            .collect()
    }

    #[test]
    fn fixed_examples() {
        let cd = combine_fixed(&est(&[(0.3, 100), (0.3, 300)])).unwrap();
        assert!((cd.mean - 0.3).abs() < 1e-15);
        assert!((cd.variance - 1.0 / 400.0).abs() < 1e-18);
        assert_eq!(cd.tau2, 0.0);

        let cd = combine_fixed(&est(&[(0.2, 100), (0.4, 300)])).unwrap();
        assert!((cd.mean - 0.35).abs() < 1e-15);
        assert!((cd.variance - 0.0025).abs() < 1e-18);
        assert!((cd.q - 3.0).abs() < 1e-12);

        let cd = combine_fixed(&est(&[(0.5, 50)])).unwrap();
        assert_eq!(cd.mean, 0.5);
        assert_eq!(cd.variance, 0.02);
        assert_eq!(cd.k_eff, 1);
    }

    #[test]
    fn degenerate_partitions_are_ignored() {
        let cd = combine_fixed(&est(&[(0.0, 0), (0.2, 100), (0.9, 0), (0.4, 300)])).unwrap();
        assert_eq!(cd.k_eff, 2);
        assert!((cd.mean - 0.35).abs() < 1e-15);
        assert_eq!(combine_fixed(&est(&[(0.0, 0)])), Err(Error::NoUsablePartitions));
        assert_eq!(
            combine_random(&est(&[(0.0, 0)]), 0.1, Method::Dl),
            Err(Error::NoUsablePartitions)
        );
    }

    #[test]
    fn cochran_q_examples() {
        let e = est(&[(0.1, 10), (0.1, 20), (0.1, 30)]);
        assert_eq!(cochran_q(&e, 0.1, &[10.0, 20.0, 30.0]), 0.0);
        let e = est(&[(0.2, 100), (0.4, 300)]);
        assert!((cochran_q(&e, 0.35, &[100.0, 300.0]) - 3.0).abs() < 1e-12);
        assert_eq!(cochran_q(&est(&[(0.7, 10)]), 0.7, &[10.0]), 0.0);
        // n = 0 rows contribute nothing even with a weight
        let e = est(&[(0.2, 100), (5.0, 0)]);
        assert!((cochran_q(&e, 0.1, &[100.0, 1.0]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn i_squared_examples() {
        assert_eq!(i_squared(0.0, 5), 0.0);
        assert!((i_squared(10.0, 5) - 0.6).abs() < 1e-15);
        assert_eq!(i_squared(3.0, 5), 0.0);
        assert!(!HeterogeneityReport::new(10.0, 0.4).severe);
        assert!(HeterogeneityReport::new(10.0, 0.41).severe);
    }

    #[test]
    fn dl_examples() {
        assert_eq!(tau2_dl(&est(&[(0.3, 100), (0.3, 200), (0.31, 100)])), 0.0);
        let t = tau2_dl(&est(&[(0.2, 100), (0.4, 300)]));
        assert!((t - 2.0 / 150.0).abs() < 1e-15, "{t}");
        assert_eq!(tau2_dl(&est(&[(0.2, 100)])), 0.0);
    }

    #[test]
    fn dl_survives_duplicated_partitions() {
        let base = [(0.12, 80), (0.31, 150), (-0.05, 60), (0.2, 300)];
        let mut doubled = base.to_vec();
        doubled.extend_from_slice(&base);
        let t = tau2_dl(&est(&doubled));
        assert!(t.is_finite() && t >= 0.0);
        // Brute-force recomputation of the moment estimator.
        let n: Vec<f64> = doubled.iter().map(|p| p.1 as f64).collect();
        let y: Vec<f64> = doubled.iter().map(|p| p.0).collect();
        let sn: f64 = n.iter().sum();
        let mean: f64 = n.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() / sn;
        let q: f64 = n.iter().zip(&y).map(|(a, b)| a * (b - mean).powi(2)).sum();
        let denom = sn - n.iter().map(|a| a * a).sum::<f64>() / sn;
        assert!((t - ((q - 7.0) / denom).max(0.0)).abs() < 1e-14);
    }

    #[test]
    fn reml_homogeneous_is_zero() {
        let e = est(&[(0.25, 100), (0.25, 400), (0.25, 50)]);
        for update in [RemlUpdate::Likelihood, RemlUpdate::ScaledMoment] {
            let opts = RemlOptions {
                update,
                ..Default::default()
            };
            assert_eq!(tau2_reml(&e, &opts).unwrap(), 0.0);
        }
    }

    #[test]
    fn reml_updates_agree_for_equal_sizes() {
        let e = est(&[(0.1, 200), (0.3, 200), (-0.1, 200), (0.25, 200), (0.05, 200)]);
        let a = tau2_reml(&e, &RemlOptions::default()).unwrap();
        let b = tau2_reml(
            &e,
            &RemlOptions {
                update: RemlUpdate::ScaledMoment,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(a > 0.0);
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn reml_reports_non_convergence() {
        let e = est(&[(0.1, 200), (0.5, 100), (-0.3, 300)]);
        let opts = RemlOptions {
            max_iter: 1,
            tol: 0.0,
            ..Default::default()
        };
        assert_eq!(tau2_reml(&e, &opts), Err(Error::RemlNotConverged { iterations: 1 }));
    }

    #[test]
    fn random_with_zero_tau_matches_fixed() {
        let e = est(&[(0.2, 100), (0.4, 300), (0.1, 50)]);
        let f = combine_fixed(&e).unwrap();
        let r = combine_random(&e, 0.0, Method::Dl).unwrap();
        assert!((f.mean - r.mean).abs() < 1e-15);
        assert!((f.variance - r.variance).abs() < 1e-18);
        assert_eq!(f.q, r.q);
        assert_eq!(r.i2_post, Some(0.0));
    }

    #[test]
    fn huge_tau_gives_unweighted_mean() {
        let e = est(&[(0.2, 100), (0.4, 3000), (0.1, 50)]);
        let r = combine_random(&e, 1e9, Method::Dl).unwrap();
        assert!((r.mean - (0.2 + 0.4 + 0.1) / 3.0).abs() < 1e-6);
        assert!(combine_random(&e, -1.0, Method::Dl).is_err());
    }

    #[test]
    fn interval_and_pvalue_examples() {
        let cd = CombinedCD {
            mean: 0.0,
            variance: 1.0,
            method: Method::Fixed,
            tau2: 0.0,
            q: 0.0,
            k_eff: 1,
            i2_pre: 0.0,
            i2_post: None,
        };
        let (lo, hi) = cd_interval(&cd, 0.95).unwrap();
        assert!((lo + 1.959963984540054).abs() < 1e-9 && (hi - 1.959963984540054).abs() < 1e-9);
        assert!(cd_interval(&cd, 1.0).is_err());
        assert!(cd_interval(&cd, 0.0).is_err());
        assert!((cd_pvalue(&cd, 0.0) - 0.5).abs() < 1e-15);
        let tail = CombinedCD { mean: 3.0, ..cd };
        assert!((cd_pvalue(&tail, 0.0) - 0.0013498980316301).abs() < 1e-12);
        assert!((cd_two_sided_pvalue(&tail, 0.0) - 0.0026997960632602).abs() < 1e-12);
        let tight = CombinedCD { variance: 1e-24, ..cd };
        let (lo, hi) = cd_interval(&tight, 0.99).unwrap();
        assert!(hi - lo < 1e-10);
    }

    #[test]
    fn method_parses() {
        assert_eq!("REML".parse::<Method>().unwrap(), Method::Reml);
        assert_eq!("dl".parse::<Method>().unwrap(), Method::Dl);
        assert!("bayes".parse::<Method>().is_err());
    }

    fn estimates() -> impl Strategy<Value = Vec<PartitionEstimate>> {
        prop::collection::vec((-0.6f64..0.6, 0usize..2000), 1..25).prop_map(|v| {
            v.into_iter()
                .enumerate()
                .map(|(i, (lp, n))| PartitionEstimate::new(i, lp, n))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn combined_mean_is_convex(e in estimates(), method in prop_oneof![Just(Method::Fixed), Just(Method::Dl), Just(Method::Reml)]) {
            let kept: Vec<f64> = e.iter().filter(|x| x.n > 0).map(|x| x.lp).collect();
            prop_assume!(!kept.is_empty());
            let cd = meta_analyze(&e, method, &RemlOptions::default()).unwrap();
            let lo = kept.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = kept.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(cd.mean >= lo - 1e-12 && cd.mean <= hi + 1e-12);
            prop_assert!(cd.tau2 >= 0.0);
            prop_assert!((0.0..=1.0).contains(&cd.i2_pre));
        }

        #[test]
        fn random_variance_dominates_fixed(e in estimates(), tau2 in 1e-6f64..0.5) {
            prop_assume!(e.iter().any(|x| x.n > 0));
            let f = combine_fixed(&e).unwrap();
            let r = combine_random(&e, tau2, Method::Dl).unwrap();
            prop_assert!(r.variance >= f.variance);
        }

        #[test]
        fn reduction_ignores_input_order(e in estimates(), seed in any::<u64>()) {
            prop_assume!(e.iter().any(|x| x.n > 0));
            let mut shuffled = e.clone();
            // cheap deterministic shuffle
            let len = shuffled.len();
            for i in (1..len).rev() {
                let j = (seed.wrapping_mul(6364136223846793005).wrapping_add(i as u64) >> 17) as usize % (i + 1);
                shuffled.swap(i, j);
            }
            for method in [Method::Fixed, Method::Dl, Method::Reml] {
                let a = meta_analyze(&e, method, &RemlOptions::default()).unwrap();
                let b = meta_analyze(&shuffled, method, &RemlOptions::default()).unwrap();
                prop_assert_eq!(a.mean.to_bits(), b.mean.to_bits());
                prop_assert_eq!(a.variance.to_bits(), b.variance.to_bits());
                prop_assert_eq!(a.tau2.to_bits(), b.tau2.to_bits());
            }
        }

        #[test]
        fn reml_is_a_fixed_point(e in estimates()) {
            prop_assume!(e.iter().filter(|x| x.n > 0).count() >= 2);
            for update in [RemlUpdate::Likelihood, RemlUpdate::ScaledMoment] {
                let opts = RemlOptions { update, ..Default::default() };
                let t = tau2_reml(&e, &opts).unwrap();
                prop_assert!(t >= 0.0);
                prop_assert!((reml_step(&e, t, update) - t).abs() <= opts.tol * 10.0);
            }
        }
    }
}
