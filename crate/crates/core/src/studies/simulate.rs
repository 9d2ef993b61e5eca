//! Seeded synthetic datasets.
//!
//! All draws come from ChaCha8 seeded with the simulation seed, in row-major order:
//! for each row, the predictors left to right, then the response. Student-t,
//! Poisson and normal variates use the `rand_distr` samplers (ratio of
//! normal/chi-square, PTRS/inversion, Ziggurat); Bernoulli draws compare one
//! uniform against the success probability.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal, StudentT};

use crate::column::{DataType, Dataset, MixedColumn};
use crate::error::{invalid, Result};

/// Logistic model `Y ~ Bernoulli(P(b1 X1^2 + b2 X2 + ... + bp Xp))` with
/// `X1 ~ t(30)`, `X2 ~ Poisson(2)`, `X3 ~ Bernoulli(0.4)` and the remaining
/// predictors standard normal.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSpec {
    pub n: usize,
    pub p: usize,
    pub beta: Vec<f64>,
    /// Partition exponent used downstream, `k = floor(n^gamma + 0.5)`.
    pub gamma: f64,
    pub seed: u64,
}

impl SimulationSpec {
    /// The 50-predictor model with `beta = (3, -2, 1.5, 0, ..., 0)`.
    pub fn new(n: usize, seed: u64) -> Self {
        let p = 50;
        let mut beta = vec![0.0; p];
        beta[..3].copy_from_slice(&[3.0, -2.0, 1.5]);
        Self {
            n,
            p,
            beta,
            gamma: 0.4,
            seed,
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }
}

pub fn logistic(u: f64) -> f64 {
    1.0 / (1.0 + (-u).exp())
}

/// Predictors `X1..Xp` followed by the binary response `Y`.
pub fn simulate_dataset(spec: &SimulationSpec) -> Result<Dataset> {
    if spec.n == 0 {
        return Err(invalid("n", "at least one row is required"));
    }
    if spec.p < 3 {
        return Err(invalid("p", "the model needs at least three predictors"));
    }
    if spec.beta.len() != spec.p {
        return Err(invalid(
            "beta",
            format!("{} coefficients for {} predictors", spec.beta.len(), spec.p),
        ));
    }
    let t30 = StudentT::new(30.0).expect("valid degrees of freedom");
    let pois = Poisson::new(2.0).expect("valid rate");
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut cols: Vec<Vec<f64>> = vec![Vec::with_capacity(spec.n); spec.p + 1];
    for _ in 0..spec.n {
        let mut eta = 0.0;
        for (i, col) in cols.iter_mut().take(spec.p).enumerate() {
            let x: f64 = match i {
                0 => t30.sample(&mut rng),
                1 => pois.sample(&mut rng),
                2 => f64::from(u8::from(rng.random::<f64>() < 0.4)),
                _ => rng.sample(StandardNormal),
            };
            eta += spec.beta[i] * if i == 0 { x * x } else { x };
            col.push(x);
        }
        let y = f64::from(u8::from(rng.random::<f64>() < logistic(eta)));
        cols[spec.p].push(y);
    }

    let columns = cols
        .into_iter()
        .enumerate()
        .map(|(i, values)| {
            let (name, kind) = match i {
                0 => ("X1".to_string(), DataType::Continuous),
                1 => ("X2".to_string(), DataType::Discrete),
                2 => ("X3".to_string(), DataType::Binary),
                _ if i == spec.p => ("Y".to_string(), DataType::Binary),
                _ => (format!("X{}", i + 1), DataType::Continuous),
            };
            MixedColumn::complete(name, values, kind)
        })
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(columns)
}

/// Data whose true LP statistics differ between sites.
///
/// Every site draws `Y ~ Bernoulli(0.5)` and:
/// * `H1`, binary with `P(H1 = 1) = 0.5` and site-specific `phi = base_phi +
///   spread * z`, so its true LP statistic at the site is exactly `phi`;
/// * `H2`, continuous `N(shift * (2Y - 1), 1)` with `shift = 0.3 + 2.5 * spread * z'`;
/// * `C1`, continuous `N(0.25 * (2Y - 1), 1)` at every site;
/// * `N1..N3`, pure noise.
///
/// The `site` column identifies the site.
#[derive(Debug, Clone, PartialEq)]
pub struct HeterogeneousSpec {
    pub sites: usize,
    pub rows_per_site: usize,
    pub base_phi: f64,
    pub spread: f64,
    pub seed: u64,
}

impl Default for HeterogeneousSpec {
    fn default() -> Self {
        Self {
            sites: 20,
            rows_per_site: 500,
            base_phi: 0.2,
            spread: 0.1,
            seed: 7,
        }
    }
}

pub fn simulate_heterogeneous(spec: &HeterogeneousSpec) -> Result<Dataset> {
    if spec.sites == 0 || spec.rows_per_site < 2 {
        return Err(invalid("sites", "need at least one site with two rows"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let names = ["site", "Y", "H1", "H2", "C1", "N1", "N2", "N3"];
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
    for site in 0..spec.sites {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        let phi = (spec.base_phi + spec.spread * z1).clamp(-0.95, 0.95);
        let shift = 0.3 + 2.5 * spec.spread * z2;
        // cell probabilities of (H1, Y) with both margins 1/2
        let p_same = (1.0 + phi) / 4.0;
        for _ in 0..spec.rows_per_site {
            let y = f64::from(u8::from(rng.random::<f64>() < 0.5));
            // P(H1 = y | Y = y) = 2 * p_same
            let agree = rng.random::<f64>() < 2.0 * p_same;
            let h1 = if agree { y } else { 1.0 - y };
            let sign = 2.0 * y - 1.0;
            let h2 = shift * sign + rng.sample::<f64, _>(StandardNormal);
            let c1 = 0.25 * sign + rng.sample::<f64, _>(StandardNormal);
            let row = [site as f64, y, h1, h2, c1];
            for (col, v) in cols.iter_mut().zip(row) {
                col.push(v);
            }
            for col in &mut cols[5..] {
                col.push(rng.sample(StandardNormal));
            }
        }
    }
    let kinds = [
        DataType::CategoricalOrdinal,
        DataType::Binary,
        DataType::Binary,
        DataType::Continuous,
        DataType::Continuous,
        DataType::Continuous,
        DataType::Continuous,
        DataType::Continuous,
    ];
    let columns = cols
        .into_iter()
        .zip(names.iter().zip(kinds))
        .map(|(values, (name, kind))| MixedColumn::complete(*name, values, kind))
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(columns)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn column(d: &Dataset, name: &str) -> Vec<f64> {
        d.column(name).unwrap().values().iter().map(|v| v.unwrap()).collect()
    }

    #[test]
    fn dataset_shape_and_determinism() {
        let spec = SimulationSpec::new(2_000, 11);
        let a = simulate_dataset(&spec).unwrap();
        assert_eq!(a.columns().len(), 51);
        assert_eq!(a.n_rows(), 2_000);
        assert_eq!(a.columns().last().unwrap().name(), "Y");
        assert_eq!(a, simulate_dataset(&spec).unwrap());
        assert_ne!(a, simulate_dataset(&SimulationSpec::new(2_000, 12)).unwrap());
    }

    #[test]
    fn poisson_mean() {
        let d = simulate_dataset(&SimulationSpec::new(50_000, 3)).unwrap();
        let x2 = column(&d, "X2");
        let mean = x2.iter().sum::<f64>() / x2.len() as f64;
        // sd of the mean = sqrt(2 / 50000) ~ 0.0063
        assert!((mean - 2.0).abs() < 3.0 * (2.0f64 / 50_000.0).sqrt(), "{mean}");
        let x3 = column(&d, "X3");
        assert!(x3.iter().all(|&v| v == 0.0 || v == 1.0));
    }

    #[test]
    fn link_function_at_x3_only() {
        // Keep the other coefficients at zero so every row lies in the stratum.
        let mut spec = SimulationSpec::new(40_000, 5);
        spec.beta = vec![0.0; 50];
        spec.beta[2] = 1.5;
        let d = simulate_dataset(&spec).unwrap();
        let (x3, y) = (column(&d, "X3"), column(&d, "Y"));
        let ones: Vec<f64> = x3.iter().zip(&y).filter(|(x, _)| **x == 1.0).map(|(_, y)| *y).collect();
        let rate = ones.iter().sum::<f64>() / ones.len() as f64;
        let want = logistic(1.5);
        assert!((want - 0.8175744761936437).abs() < 1e-12);
        let sd = (want * (1.0 - want) / ones.len() as f64).sqrt();
        assert!((rate - want).abs() < 4.0 * sd, "{rate}");
    }

    #[test]
    fn spec_validation() {
        assert!(simulate_dataset(&SimulationSpec::new(0, 1)).is_err());
        let mut spec = SimulationSpec::new(10, 1);
        spec.beta.pop();
        assert!(simulate_dataset(&spec).is_err());
    }

    #[test]
    fn heterogeneous_sites() {
        let d = simulate_heterogeneous(&HeterogeneousSpec::default()).unwrap();
        assert_eq!(d.n_rows(), 20 * 500);
        assert_eq!(d.column("site").unwrap().distinct_values().len(), 20);
    }
}
