//! Independent reference computations used by the integration suites.
//!
//! Nothing here calls into the crate's scoring or combining code: each oracle
//! recomputes its quantity from first principles, by brute force where that
//! is feasible.
#![allow(dead_code)]

/// Pearson correlation computed directly from the definition.
pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

/// Mid-ranks by counting: `#{x_j < x_i} + (#{x_j = x_i} + 1) / 2`, O(n^2).
pub fn brute_mid_ranks(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&xi| {
            let below = x.iter().filter(|&&xj| xj < xi).count() as f64;
            let equal = x.iter().filter(|&&xj| xj == xi).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect()
}

/// Phi coefficient of a 2x2 table from cell proportions:
/// `(P11 P22 - P12 P21) / sqrt(P1+ P+1 P2+ P+2)`.
pub fn phi_from_counts(n11: u64, n12: u64, n21: u64, n22: u64) -> f64 {
    let n = (n11 + n12 + n21 + n22) as f64;
    let (p11, p12, p21, p22) = (n11 as f64 / n, n12 as f64 / n, n21 as f64 / n, n22 as f64 / n);
    let (r1, r2) = (p11 + p12, p21 + p22);
    let (c1, c2) = (p11 + p21, p12 + p22);
    (p11 * p22 - p12 * p21) / (r1 * c1 * r2 * c2).sqrt()
}

/// Normal-approximation Wilcoxon rank-sum z statistic for tie-free `x`, the
/// ranks of group `y = 1` summed.
pub fn rank_sum_z(x: &[f64], y: &[f64]) -> f64 {
    let ranks = brute_mid_ranks(x);
    let n = x.len() as f64;
    let n1 = y.iter().filter(|&&v| v == 1.0).count() as f64;
    let n0 = n - n1;
    let w: f64 = ranks.iter().zip(y).filter(|(_, &v)| v == 1.0).map(|(r, _)| r).sum();
    let mean = n1 * (n + 1.0) / 2.0;
    let var = n1 * n0 * (n + 1.0) / 12.0;
    (w - mean) / var.sqrt()
}

/// Restricted log-likelihood of the normal random-effects model with known
/// within-partition variances `1/n`, up to a constant.
pub fn restricted_loglik(tau2: f64, lp: &[f64], n: &[f64]) -> f64 {
    let v: Vec<f64> = n.iter().map(|ni| 1.0 / ni + tau2).collect();
    let w: Vec<f64> = v.iter().map(|vi| 1.0 / vi).collect();
    let sw: f64 = w.iter().sum();
    let mu = w.iter().zip(lp).map(|(wi, y)| wi * y).sum::<f64>() / sw;
    let rss: f64 = w.iter().zip(lp).map(|(wi, y)| wi * (y - mu).powi(2)).sum();
    -0.5 * (v.iter().map(|vi| vi.ln()).sum::<f64>() + sw.ln() + rss)
}

/// Maximiser of `f` over `[lo, hi]` by a uniform grid, zoomed around the best
/// point until the grid step is below `resolution`.
pub fn grid_argmax(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, resolution: f64) -> f64 {
    const POINTS: usize = 400;
    loop {
        let step = (hi - lo) / POINTS as f64;
        let (best, _) = (0..=POINTS)
            .map(|i| {
                let t = lo + step * i as f64;
                (t, f(t))
            })
            .fold(
                (lo, f64::NEG_INFINITY),
                |acc, cur| if cur.1 > acc.1 { cur } else { acc },
            );
        if step < resolution {
            return best;
        }
        let (new_lo, new_hi) = ((best - step).max(lo), (best + step).min(hi));
        lo = new_lo;
        hi = new_hi;
    }
}

/// One-sample Kolmogorov–Smirnov statistic against Uniform(0, 1).
pub fn ks_uniform(samples: &[f64]) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &u)| {
            let lo = u - i as f64 / n;
            let hi = (i as f64 + 1.0) / n - u;
            lo.max(hi)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic 1% critical value of the KS statistic.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.6276 / (n as f64).sqrt()
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// erfc with relative error below 1.2e-7 (Numerical Recipes `erfcc`), ample
/// for test thresholds.
fn erfc(x: f64) -> f64 {
    let z = x.abs();
    let t = 1.0 / (1.0 + 0.5 * z);
    let r = t
        * (-z * z - 1.26551223
            + t * (1.00002368
                + t * (0.37409196
                    + t * (0.09678418
                        + t * (-0.18628806
                            + t * (0.27886807
                                + t * (-1.13520398 + t * (1.48851587 + t * (-0.82215223 + t * 0.17087277)))))))))
            .exp();
    if x >= 0.0 {
        r
    } else {
        2.0 - r
    }
}
