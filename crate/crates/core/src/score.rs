//! LP orthonormal score functions and the per-partition LP statistics.
//!
//! A predictor is first mapped through its empirical mid-distribution
//! (average-tie ranks), then expanded into polynomials in that rank which are
//! orthonormal under the empirical measure. The LP statistic of order `j` is the
//! Pearson correlation between the `j`-th score and the binary response.

use serde::{Deserialize, Serialize};

use crate::column::{DataType, MixedColumn};
use crate::error::{invalid, Error, Result};

/// Default number of score functions per variable.
pub const DEFAULT_M: usize = 4;

/// Rows of `x` grouped by value: the distinct values in ascending order, how
/// often each occurs, and which group every row falls into.
struct TieGroups {
    counts: Vec<usize>,
    group_of_row: Vec<usize>,
}

impl TieGroups {
    fn new(x: &[f64]) -> Self {
        let mut order: Vec<usize> = (0..x.len()).collect();
        order.sort_unstable_by(|&a, &b| x[a].total_cmp(&x[b]).then(a.cmp(&b)));
        let mut counts = Vec::new();
        let mut group_of_row = vec![0; x.len()];
        let mut last: Option<f64> = None;
        for &row in &order {
            // `==` rather than bit equality so that 0.0 and -0.0 tie.
            if last != Some(x[row]) {
                counts.push(0);
                last = Some(x[row]);
            }
            let group = counts.len() - 1;
            counts[group] += 1;
            group_of_row[row] = group;
        }
        Self { counts, group_of_row }
    }

    fn distinct(&self) -> usize {
        self.counts.len()
    }

    /// `(average rank - 0.5) / n` for every group.
    fn mid_ranks(&self) -> Vec<f64> {
        let n = self.group_of_row.len() as f64;
        let mut below = 0usize;
        self.counts
            .iter()
            .map(|&c| {
                // ranks below+1 ..= below+c, averaged
                let avg_rank = below as f64 + (c as f64 + 1.0) / 2.0;
                below += c;
                (avg_rank - 0.5) / n
            })
            .collect()
    }
}

/// Empirical mid-distribution transform `u_i = (avgrank(x_i) - 0.5) / n`.
///
/// Tied inputs share the mean of the ranks they occupy, so equal inputs map to
/// equal outputs and every output lies strictly inside `(0, 1)`.
pub fn mid_distribution_ranks(x: &[f64]) -> Result<Vec<f64>> {
    if x.is_empty() {
        return Err(Error::EmptyColumn);
    }
    let groups = TieGroups::new(x);
    let u = groups.mid_ranks();
    Ok(groups.group_of_row.iter().map(|&g| u[g]).collect())
}

/// Orthonormal LP score functions of one sample, evaluated at every row.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreBasis {
    m_requested: usize,
    distinct_count: usize,
    /// `columns[j - 1][i]` is `T_j` at row `i`.
    columns: Vec<Vec<f64>>,
}

impl ScoreBasis {
    pub fn m_requested(&self) -> usize {
        self.m_requested
    }

    pub fn m_effective(&self) -> usize {
        self.columns.len()
    }

    pub fn distinct_count(&self) -> usize {
        self.distinct_count
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    /// Score `T_j` (1-based order) at every row.
    pub fn column(&self, j: usize) -> Option<&[f64]> {
        j.checked_sub(1)
            .and_then(|idx| self.columns.get(idx))
            .map(Vec::as_slice)
    }

    /// Fewer scores than requested: the sample has too few distinct values.
    pub fn truncated(&self) -> bool {
        self.m_effective() < self.m_requested
    }
}

/// Builds `min(m_requested, distinct(x) - 1)` orthonormal score functions.
///
/// The polynomials are built on the distinct mid-ranks, weighted by their
/// multiplicities, with a Stieltjes/Arnoldi recurrence (multiply the previous
/// polynomial by `u`, then orthogonalise twice against all earlier ones). This
/// avoids the ill-conditioned raw power basis. Each polynomial keeps a positive
/// leading coefficient, so `T_1` is increasing in `x`. Columns are finally
/// centred and scaled to unit sample standard deviation (`n - 1` denominator).
///
/// Constant input is not an error: it yields a basis with no columns.
pub fn build_score_basis(x: &[f64], m_requested: usize) -> Result<ScoreBasis> {
    if x.is_empty() {
        return Err(Error::EmptyColumn);
    }
    if m_requested == 0 {
        return Err(invalid("m", "at least one score function is required"));
    }
    let groups = TieGroups::new(x);
    let distinct_count = groups.distinct();
    let m_effective = m_requested.min(distinct_count - 1);
    if m_effective < m_requested {
        log::debug!(
            "m = {m_requested} is not less than the number of distinct values ({distinct_count}); using {m_effective}"
        );
    }

    let u = groups.mid_ranks();
    let weights: Vec<f64> = groups.counts.iter().map(|&c| c as f64).collect();
    let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).zip(&weights).map(|((x, y), w)| w * x * y).sum() };

    let n = x.len() as f64;
    let mut basis: Vec<Vec<f64>> = vec![vec![1.0 / n.sqrt(); distinct_count]];
    for _ in 0..m_effective {
        let prev = basis.last().expect("basis starts with the constant");
        let mut v: Vec<f64> = prev.iter().zip(&u).map(|(p, ui)| p * ui).collect();
        for _pass in 0..2 {
            for q in &basis {
                let proj = dot(&v, q);
                v.iter_mut().zip(q).for_each(|(vi, qi)| *vi -= proj * qi);
            }
        }
        let norm = dot(&v, &v).sqrt();
        v.iter_mut().for_each(|vi| *vi /= norm);
        basis.push(v);
    }

    let columns = basis
        .iter()
        .skip(1)
        .map(|poly| {
            let mut col: Vec<f64> = groups.group_of_row.iter().map(|&g| poly[g]).collect();
            standardize(&mut col);
            col
        })
        .collect();

    Ok(ScoreBasis {
        m_requested,
        distinct_count,
        columns,
    })
}

fn standardize(col: &mut [f64]) {
    let n = col.len() as f64;
    let mean = col.iter().sum::<f64>() / n;
    col.iter_mut().for_each(|v| *v -= mean);
    let sd = (col.iter().map(|v| v * v).sum::<f64>() / (n - 1.0)).sqrt();
    col.iter_mut().for_each(|v| *v /= sd);
}

/// First LP score of a two-valued sample: the lower value maps to
/// `-sqrt(p / (1 - p))` and the higher to `sqrt((1 - p) / p)`, where `p` is
/// the fraction of the higher value.
pub fn binary_t1(y: &[f64]) -> Result<Vec<f64>> {
    if y.is_empty() {
        return Err(Error::EmptyColumn);
    }
    let mut distinct = y.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    match distinct.len() {
        1 => return Err(Error::DegenerateResponse("y".into())),
        2 => {}
        d => {
            return Err(Error::NotBinary {
                column: "y".into(),
                reason: format!("{d} distinct values"),
            })
        }
    }
    let high = distinct[1];
    let p = y.iter().filter(|&&v| v == high).count() as f64 / y.len() as f64;
    let lo = -(p / (1.0 - p)).sqrt();
    let hi = ((1.0 - p) / p).sqrt();
    Ok(y.iter().map(|&v| if v == high { hi } else { lo }).collect())
}

/// Pearson correlation, clamped to `[-1, 1]`.
pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    (sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0)
}

/// LP statistics of one predictor within one partition (the mapper output).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubpopSummary {
    pub partition_id: usize,
    pub variable: String,
    /// `lp[j - 1]` is `LP[j; X, Y]`.
    pub lp: Vec<f64>,
    /// Rows left after dropping missing cells; zero when degenerate.
    pub n_eff: usize,
    pub degenerate: bool,
    /// Fewer orders than requested were computable.
    pub truncated: bool,
}

impl SubpopSummary {
    fn degenerate(variable: &str, m_requested: usize) -> Self {
        Self {
            partition_id: 0,
            variable: variable.to_string(),
            lp: vec![0.0; m_requested],
            n_eff: 0,
            degenerate: true,
            truncated: false,
        }
    }

    pub fn in_partition(mut self, partition_id: usize) -> Self {
        self.partition_id = partition_id;
        self
    }

    /// `(lp, n)` of order `j`, with `n = 0` when the order is unavailable.
    pub fn order(&self, j: usize) -> (f64, usize) {
        match j.checked_sub(1).and_then(|idx| self.lp.get(idx)) {
            Some(&lp) if !self.degenerate => (lp, self.n_eff),
            _ => (0.0, 0),
        }
    }
}

/// LP statistics `LP[j; X, Y]`, `j = 1..m`, of predictor `x` against binary `y`.
///
/// Rows where either `x` or `y` is missing are dropped first. If the remaining
/// `x` or `y` is constant the summary is degenerate (all zeros, `n_eff = 0`).
pub fn lp_statistics(x: &MixedColumn, y: &MixedColumn, m_requested: usize) -> Result<SubpopSummary> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            column: x.name().to_string(),
            expected: y.len(),
            found: x.len(),
        });
    }
    if y.declared_type() != DataType::Binary {
        return Err(Error::NotBinary {
            column: y.name().to_string(),
            reason: format!("declared {}", y.declared_type().as_str()),
        });
    }
    if m_requested == 0 {
        return Err(invalid("m", "at least one score function is required"));
    }

    let (xs, ys): (Vec<f64>, Vec<f64>) = x
        .values()
        .iter()
        .zip(y.values())
        .filter_map(|(xv, yv)| Some(((*xv)?, (*yv)?)))
        .unzip();

    let constant = |v: &[f64]| v.iter().all(|&a| a == v[0]);
    if xs.is_empty() || constant(&xs) || constant(&ys) {
        return Ok(SubpopSummary::degenerate(x.name(), m_requested));
    }

    let basis = build_score_basis(&xs, m_requested)?;
    let lp = basis.columns().iter().map(|s| pearson(s, &ys)).collect();
    Ok(SubpopSummary {
        partition_id: 0,
        variable: x.name().to_string(),
        lp,
        n_eff: xs.len(),
        degenerate: false,
        truncated: basis.truncated(),
    })
}
