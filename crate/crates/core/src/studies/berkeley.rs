//! Graduate admissions by gender and department: aggregate data suggest a
//! male advantage that disappears within departments.
//!
//! Gender is coded male = 1 and admission admit = 1, so a positive LP statistic
//! means male preference.

use serde::{Deserialize, Serialize};

use super::{fixture_rows, parse_field};
use crate::column::{DataType, MixedColumn};
use crate::error::{Error, Result};
use crate::meta::{cd_interval, cd_pvalue, meta_analyze, CombinedCD, Method, PartitionEstimate, RemlOptions};
use crate::report::{sig12, sig12_pair};
use crate::score::lp_statistics;

const FIXTURE: &str = include_str!("../../data/berkeley.csv");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Department {
    pub name: String,
    pub male_admitted: u32,
    pub male_applicants: u32,
    pub female_admitted: u32,
    pub female_applicants: u32,
}

impl Department {
    /// `(gender, admitted)` rows, one per applicant.
    pub fn applicants(&self) -> (Vec<f64>, Vec<f64>) {
        let mut gender = Vec::new();
        let mut admit = Vec::new();
        let mut push = |g: f64, admitted: u32, total: u32| {
            for i in 0..total {
                gender.push(g);
                admit.push(f64::from(u8::from(i < admitted)));
            }
        };
        push(1.0, self.male_admitted, self.male_applicants);
        push(0.0, self.female_admitted, self.female_applicants);
        (gender, admit)
    }

    pub fn applicant_count(&self) -> u32 {
        self.male_applicants + self.female_applicants
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerkeleyTable {
    pub departments: Vec<Department>,
}

/// The embedded six-department table.
pub fn berkeley_table() -> Result<BerkeleyTable> {
    let departments = fixture_rows("berkeley.csv", FIXTURE, 5)?
        .into_iter()
        .map(|f| {
            let dept = Department {
                name: f[0].clone(),
                male_admitted: parse_field("berkeley.csv", &f[1])?,
                male_applicants: parse_field("berkeley.csv", &f[2])?,
                female_admitted: parse_field("berkeley.csv", &f[3])?,
                female_applicants: parse_field("berkeley.csv", &f[4])?,
            };
            if dept.male_admitted > dept.male_applicants || dept.female_admitted > dept.female_applicants {
                return Err(Error::Fixture {
                    name: "berkeley.csv",
                    reason: format!("department {} admits more than applied", dept.name),
                });
            }
            Ok(dept)
        })
        .collect::<Result<Vec<_>>>()?;
    if departments.len() != 6 {
        return Err(Error::Fixture {
            name: "berkeley.csv",
            reason: format!("expected 6 departments, found {}", departments.len()),
        });
    }
    Ok(BerkeleyTable { departments })
}

/// Normal confidence distribution `N(lp, 1/n)` of one unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitCd {
    pub name: String,
    #[serde(serialize_with = "sig12")]
    pub lp: f64,
    pub n: usize,
    #[serde(serialize_with = "sig12_pair")]
    pub ci: (f64, f64),
}

impl UnitCd {
    pub fn contains_zero(&self) -> bool {
        self.ci.0 <= 0.0 && 0.0 <= self.ci.1
    }

    fn as_cd(&self) -> CombinedCD {
        CombinedCD {
            mean: self.lp,
            variance: 1.0 / self.n as f64,
            method: Method::Fixed,
            tau2: 0.0,
            q: 0.0,
            k_eff: 1,
            i2_pre: 0.0,
            i2_post: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerkeleyAnalysis {
    pub method: Method,
    #[serde(serialize_with = "sig12")]
    pub level: f64,
    pub departments: Vec<UnitCd>,
    pub combined: CombinedCD,
    #[serde(serialize_with = "sig12_pair")]
    pub combined_ci: (f64, f64),
    /// `H(0)`: support of `H0: LP <= 0` (no male preference).
    #[serde(serialize_with = "sig12")]
    pub p_value: f64,
    /// All applicants pooled as one sample.
    pub aggregate: UnitCd,
    #[serde(serialize_with = "sig12")]
    pub aggregate_p_value: f64,
}

fn unit(name: &str, gender: Vec<f64>, admit: Vec<f64>, level: f64) -> Result<UnitCd> {
    let x = MixedColumn::complete("male", gender, DataType::Binary)?;
    let y = MixedColumn::complete("admitted", admit, DataType::Binary)?;
    let s = lp_statistics(&x, &y, 1)?;
    let mut u = UnitCd {
        name: name.to_string(),
        lp: s.lp[0],
        n: s.n_eff,
        ci: (0.0, 0.0),
    };
    u.ci = cd_interval(&u.as_cd(), level)?;
    Ok(u)
}

/// Department-level CDs meta-combined with `method`, against the pooled one.
pub fn berkeley_analysis(method: Method) -> Result<BerkeleyAnalysis> {
    let level = 0.95;
    let table = berkeley_table()?;
    let departments = table
        .departments
        .iter()
        .map(|d| {
            let (g, a) = d.applicants();
            unit(&d.name, g, a, level)
        })
        .collect::<Result<Vec<_>>>()?;

    let estimates: Vec<PartitionEstimate> = departments
        .iter()
        .enumerate()
        .map(|(i, d)| PartitionEstimate::new(i, d.lp, d.n))
        .collect();
    let combined = meta_analyze(&estimates, method, &RemlOptions::default())?;
    let combined_ci = cd_interval(&combined, level)?;

    let (mut gender, mut admit) = (Vec::new(), Vec::new());
    for d in &table.departments {
        let (g, a) = d.applicants();
        gender.extend(g);
        admit.extend(a);
    }
    let aggregate = unit("All", gender, admit, level)?;

    Ok(BerkeleyAnalysis {
        method,
        level,
        p_value: cd_pvalue(&combined, 0.0),
        aggregate_p_value: cd_pvalue(&aggregate.as_cd(), 0.0),
        departments,
        combined,
        combined_ci,
        aggregate,
    })
}
