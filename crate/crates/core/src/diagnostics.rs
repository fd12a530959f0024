//! Adiabaticity, autoresonance and end-decoupling along a profile.
//!
//! The adiabatic-passage condition compares the rate at which the field axis
//! turns with the precession rate:
//!
//! ```text
//! |kappa d(dk)/dz - dk d(kappa)/dz|  <<  (|kappa|^2 + dk^2)^(3/2)
//! ```
//!
//! Derivatives are central differences on cell-centre values (one-sided at
//! the ends). The report only returns ratios; what counts as "satisfied" is
//! left to [`RapPolicy`].

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::coupled_mode::CmProfile;
use crate::error::{DbrError, Result};
use crate::io::fmt_num;

/// Cells below this coupling are treated as uncoupled.
pub const KAPPA_FLOOR: f64 = 1e-15;
pub const AUTORESONANCE_LIMIT: f64 = 2.0;
pub const DEFAULT_DECOUPLING_THRESHOLD: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RapPolicy {
    /// RAP holds when the largest per-cell ratio is below this.
    pub max_ratio: f64,
    /// An end is decoupled when `|delta_beta / kappa|` exceeds this.
    pub decoupling_threshold: f64,
}

impl Default for RapPolicy {
    fn default() -> Self {
        RapPolicy {
            max_ratio: 1.0,
            decoupling_threshold: DEFAULT_DECOUPLING_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RapRecord {
    #[serde(rename = "M")]
    pub index: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub autoresonance_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RapSummary {
    pub max_ratio: f64,
    /// Longest contiguous run of cells with `|delta_beta / kappa| < 2`, inclusive.
    pub autoresonant_span: Option<(usize, usize)>,
    /// `|delta_beta / kappa|` at the first and last cell.
    pub end_decoupling: (f64, f64),
    pub rap_satisfied: bool,
    pub ends_decoupled: (bool, bool),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RapReport {
    pub records: Vec<RapRecord>,
    pub summary: RapSummary,
}

impl RapReport {
    /// CSV `M,lhs,rhs,ratio,autoresonance_ratio`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["M", "lhs", "rhs", "ratio", "autoresonance_ratio"])?;
        for r in &self.records {
            w.write_record([
                r.index.to_string(),
                fmt_num(r.lhs),
                fmt_num(r.rhs),
                fmt_num(r.ratio),
                fmt_num(r.autoresonance_ratio),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn gradient(values: &[f64], z: &[f64]) -> Vec<f64> {
    let n = values.len();
    (0..n)
        .map(|i| {
            let (a, b) = match i {
                0 => (0, 1),
                _ if i == n - 1 => (n - 2, n - 1),
                _ => (i - 1, i + 1),
            };
            (values[b] - values[a]) / (z[b] - z[a])
        })
        .collect()
}

fn cell_centres(profile: &CmProfile) -> Vec<f64> {
    let mut z = 0.0;
    profile
        .cells
        .iter()
        .map(|c| {
            let centre = z + c.length / 2.0;
            z += c.length;
            centre
        })
        .collect()
}

/// Per-cell `|delta_beta| / |kappa| = 2 |dk| / |kappa|`; `+inf` where uncoupled.
pub fn autoresonance_profile(profile: &CmProfile) -> Vec<f64> {
    profile
        .cells
        .iter()
        .map(|c| {
            let k = c.kappa.norm();
            if k < KAPPA_FLOOR {
                f64::INFINITY
            } else {
                2.0 * c.delta_k.abs() / k
            }
        })
        .collect()
}

/// Longest run of consecutive indices where `ratios[i] < limit`.
pub fn longest_run_below(ratios: &[f64], limit: f64) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let mut start = None;
    for (i, &r) in ratios.iter().enumerate() {
        if r < limit {
            let s = *start.get_or_insert(i);
            if best.is_none_or(|(a, b)| i - s > b - a) {
                best = Some((s, i));
            }
        } else {
            start = None;
        }
    }
    best
}

pub fn end_decoupling(profile: &CmProfile, threshold: f64) -> Result<(bool, bool)> {
    if profile.is_empty() {
        return Err(DbrError::ProfileTooShort { needed: 1, got: 0 });
    }
    let ar = autoresonance_profile(profile);
    Ok((ar[0] > threshold, ar[ar.len() - 1] > threshold))
}

pub fn rap_margin(profile: &CmProfile) -> Result<RapReport> {
    rap_margin_with(profile, &RapPolicy::default())
}

pub fn rap_margin_with(profile: &CmProfile, policy: &RapPolicy) -> Result<RapReport> {
    if profile.len() < 3 {
        return Err(DbrError::ProfileTooShort {
            needed: 3,
            got: profile.len(),
        });
    }
    let z = cell_centres(profile);
    let kappa: Vec<f64> = profile.cells.iter().map(|c| c.kappa.norm()).collect();
    let dk: Vec<f64> = profile.cells.iter().map(|c| c.delta_k).collect();
    let dkappa = gradient(&kappa, &z);
    let ddk = gradient(&dk, &z);
    let auto = autoresonance_profile(profile);

    let records: Vec<RapRecord> = (0..profile.len())
        .map(|i| {
            let lhs = (kappa[i] * ddk[i] - dk[i] * dkappa[i]).abs();
            let rhs = (kappa[i] * kappa[i] + dk[i] * dk[i]).powf(1.5);
            let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
            RapRecord {
                index: i,
                lhs,
                rhs,
                ratio,
                autoresonance_ratio: auto[i],
            }
        })
        .collect();

    let max_ratio = records.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let ends = (auto[0], auto[auto.len() - 1]);
    let summary = RapSummary {
        max_ratio,
        autoresonant_span: longest_run_below(&auto, AUTORESONANCE_LIMIT),
        end_decoupling: ends,
        rap_satisfied: max_ratio < policy.max_ratio,
        ends_decoupled: (
            ends.0 > policy.decoupling_threshold,
            ends.1 > policy.decoupling_threshold,
        ),
    };
    Ok(RapReport { records, summary })
}
