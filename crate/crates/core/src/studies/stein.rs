//! Early-season batting averages shrunk toward a common mean by random-effects
//! combining, with James–Stein as the comparator.

use serde::{Deserialize, Serialize};

use super::{fixture_rows, parse_field};
use crate::error::{invalid, Error, Result};
use crate::meta::{combine_random, tau2_dl, Method, PartitionEstimate};
use crate::report::sig12;

const FIXTURE: &str = include_str!("../../data/batting.csv");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BattingRecord {
    pub player: String,
    pub hits: u32,
    pub at_bats: u32,
    /// Batting average over the rest of the season, the prediction target.
    pub remainder_avg: f64,
}

impl BattingRecord {
    pub fn average(&self) -> f64 {
        f64::from(self.hits) / f64::from(self.at_bats)
    }
}

/// The embedded 18-player table.
pub fn batting_records() -> Result<Vec<BattingRecord>> {
    let records = fixture_rows("batting.csv", FIXTURE, 4)?
        .into_iter()
        .map(|f| {
            let r = BattingRecord {
                player: f[0].clone(),
                hits: parse_field("batting.csv", &f[1])?,
                at_bats: parse_field("batting.csv", &f[2])?,
                remainder_avg: parse_field("batting.csv", &f[3])?,
            };
            if r.at_bats == 0 || r.hits > r.at_bats {
                return Err(Error::Fixture {
                    name: "batting.csv",
                    reason: format!("{} has {} hits in {} at-bats", r.player, r.hits, r.at_bats),
                });
            }
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    if records.len() != 18 {
        return Err(Error::Fixture {
            name: "batting.csv",
            reason: format!("expected 18 players, found {}", records.len()),
        });
    }
    Ok(records)
}

/// Arcsine transform `asin(2 avg - 1)`; approximately `N(theta, 1/n)` for a
/// binomial proportion over `n` trials.
pub fn variance_stabilize(avg: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&avg) {
        return Err(invalid("avg", format!("{avg} is outside [0, 1]")));
    }
    Ok((2.0 * avg - 1.0).asin())
}

/// Inverse of [`variance_stabilize`]: `(sin theta + 1) / 2`.
pub fn variance_unstabilize(theta: f64) -> f64 {
    (theta.sin() + 1.0) / 2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerEstimate {
    pub player: String,
    pub hits: u32,
    pub at_bats: u32,
    #[serde(serialize_with = "sig12")]
    pub mle: f64,
    #[serde(serialize_with = "sig12")]
    pub remainder_avg: f64,
    #[serde(serialize_with = "sig12")]
    pub theta: f64,
    #[serde(serialize_with = "sig12")]
    pub lp_theta: f64,
    #[serde(serialize_with = "sig12")]
    pub lp_estimate: f64,
    #[serde(serialize_with = "sig12")]
    pub js_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteinAnalysis {
    pub players: Vec<PlayerEstimate>,
    #[serde(serialize_with = "sig12")]
    pub tau2: f64,
    /// Weighted mean of the transformed averages.
    #[serde(serialize_with = "sig12")]
    pub theta_mean: f64,
    /// Shrinkage weight toward `theta_mean` (common to all players when all
    /// at-bat counts agree; the first player's value otherwise).
    #[serde(serialize_with = "sig12")]
    pub lambda: f64,
    /// James–Stein multiplier applied to deviations from the grand mean.
    #[serde(serialize_with = "sig12")]
    pub js_factor: f64,
    #[serde(serialize_with = "sig12")]
    pub mse_ratio_lp: f64,
    #[serde(serialize_with = "sig12")]
    pub mse_ratio_js: f64,
}

/// Shrinks each player's transformed average toward the random-effects mean
/// with weight `lambda = (1/n) / (tau2_DL + 1/n)`, and back-transforms.
///
/// The James–Stein comparator works on the same transformed scale:
/// positive-part shrinkage toward the unweighted grand mean with multiplier
/// `max(0, 1 - (k - 3) s^2 / sum (theta - mean)^2)`, `s^2` the mean of `1/n`.
pub fn stein_shrinkage(records: &[BattingRecord]) -> Result<SteinAnalysis> {
    if records.len() < 4 {
        return Err(invalid("records", "James-Stein needs at least four units"));
    }
    let thetas = records
        .iter()
        .map(|r| variance_stabilize(r.average()))
        .collect::<Result<Vec<_>>>()?;
    let estimates: Vec<PartitionEstimate> = records
        .iter()
        .zip(&thetas)
        .enumerate()
        .map(|(i, (r, &t))| PartitionEstimate::new(i, t, r.at_bats as usize))
        .collect();
    let tau2 = tau2_dl(&estimates);
    let theta_mean = combine_random(&estimates, tau2, Method::Dl)?.mean;
    let lambda_of = |r: &BattingRecord| {
        let s2 = 1.0 / f64::from(r.at_bats);
        s2 / (tau2 + s2)
    };

    let k = thetas.len() as f64;
    let grand = thetas.iter().sum::<f64>() / k;
    let spread: f64 = thetas.iter().map(|t| (t - grand).powi(2)).sum();
    let s2 = records.iter().map(|r| 1.0 / f64::from(r.at_bats)).sum::<f64>() / k;
    let js_factor = if spread > 0.0 {
        (1.0 - (k - 3.0) * s2 / spread).max(0.0)
    } else {
        0.0
    };

    let players: Vec<PlayerEstimate> = records
        .iter()
        .zip(&thetas)
        .map(|(r, &theta)| {
            let lambda = lambda_of(r);
            let lp_theta = lambda * theta_mean + (1.0 - lambda) * theta;
            PlayerEstimate {
                player: r.player.clone(),
                hits: r.hits,
                at_bats: r.at_bats,
                mle: r.average(),
                remainder_avg: r.remainder_avg,
                theta,
                lp_theta,
                lp_estimate: variance_unstabilize(lp_theta),
                js_estimate: variance_unstabilize(grand + js_factor * (theta - grand)),
            }
        })
        .collect();

    let sse = |f: fn(&PlayerEstimate) -> f64| -> f64 { players.iter().map(|p| (f(p) - p.remainder_avg).powi(2)).sum() };
    let mle_sse = sse(|p| p.mle);

    Ok(SteinAnalysis {
        tau2,
        theta_mean,
        lambda: lambda_of(&records[0]),
        js_factor,
        mse_ratio_lp: sse(|p| p.lp_estimate) / mle_sse,
        mse_ratio_js: sse(|p| p.js_estimate) / mle_sse,
        players,
    })
}
