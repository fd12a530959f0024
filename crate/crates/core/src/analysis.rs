//! Band-gap extraction and design comparisons.
//!
//! A band is a maximal run of grid points whose reflectance stays within
//! `drop_fraction` of the spectrum maximum, i.e. `R >= (1 - drop_fraction) * max(R)`.
//! Edges are placed by linear interpolation between the bracketing samples.

use serde::{Deserialize, Serialize};

use crate::error::{DbrError, Result};
use crate::tmm::{thz_to_nm, AngleMap, Spectrum};

/// Band edges sit where R has fallen 10% below its maximum.
pub const DEFAULT_DROP_FRACTION: f64 = 0.1;
/// Alternative reading: edges where R has fallen to 10% of its maximum.
pub const WIDE_DROP_FRACTION: f64 = 0.9;
/// Runs shorter than this many grid points are treated as noise.
pub const MIN_BAND_POINTS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandGap {
    pub f_low: f64,
    pub f_high: f64,
    pub lambda_low: f64,
    pub lambda_high: f64,
    #[serde(rename = "width_THz")]
    pub width_thz: f64,
    pub width_nm: f64,
    #[serde(rename = "R_max")]
    pub r_max: f64,
}

impl BandGap {
    fn from_edges(f_low: f64, f_high: f64, r_max: f64) -> Self {
        let lambda_low = thz_to_nm(f_high);
        let lambda_high = thz_to_nm(f_low);
        BandGap {
            f_low,
            f_high,
            lambda_low,
            lambda_high,
            width_thz: f_high - f_low,
            width_nm: lambda_high - lambda_low,
            r_max,
        }
    }

    /// Midpoint of the edges in wavelength.
    pub fn centre_nm(&self) -> f64 {
        0.5 * (self.lambda_low + self.lambda_high)
    }

    pub fn centre_thz(&self) -> f64 {
        0.5 * (self.f_low + self.f_high)
    }

    pub fn contains_thz(&self, f: f64) -> bool {
        self.f_low <= f && f <= self.f_high
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreqInterval {
    pub lo_thz: f64,
    pub hi_thz: f64,
}

impl FreqInterval {
    pub fn new(lo_thz: f64, hi_thz: f64) -> Self {
        FreqInterval { lo_thz, hi_thz }
    }

    pub fn width(&self) -> f64 {
        self.hi_thz - self.lo_thz
    }

    pub fn overlaps(&self, lo: f64, hi: f64) -> bool {
        self.lo_thz < hi && lo < self.hi_thz
    }
}

fn lerp_edge(f0: f64, f1: f64, r0: f64, r1: f64, level: f64) -> f64 {
    if r1 == r0 {
        return f0;
    }
    f0 + (level - r0) * (f1 - f0) / (r1 - r0)
}

pub fn extract_pbg(spectrum: &Spectrum, drop_fraction: f64) -> Result<Vec<BandGap>> {
    let f = spectrum.grid.freqs_thz();
    let r = &spectrum.reflectance;
    if f.len() < 10 {
        return Err(DbrError::InvalidGrid(format!(
            "band extraction needs >= 10 points, got {}",
            f.len()
        )));
    }
    if !(drop_fraction > 0.0 && drop_fraction < 1.0) {
        return Err(DbrError::InvalidSpec(format!(
            "drop_fraction must lie in (0, 1), got {drop_fraction}"
        )));
    }
    let max = r.iter().cloned().fold(0.0, f64::max);
    if !(max > 0.0) {
        return Ok(Vec::new());
    }
    let level = (1.0 - drop_fraction) * max;
    let n = f.len();
    let mut bands = Vec::new();
    let mut i = 0;
    while i < n {
        if r[i] < level {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < n && r[i + 1] >= level {
            i += 1;
        }
        let end = i;
        i += 1;
        if end - start + 1 < MIN_BAND_POINTS {
            continue;
        }
        let f_low = if start == 0 {
            f[0]
        } else {
            lerp_edge(f[start - 1], f[start], r[start - 1], r[start], level)
        };
        let f_high = if end == n - 1 {
            f[n - 1]
        } else {
            lerp_edge(f[end], f[end + 1], r[end], r[end + 1], level)
        };
        let r_max = r[start..=end].iter().cloned().fold(0.0, f64::max);
        bands.push(BandGap::from_edges(f_low, f_high, r_max));
    }
    Ok(bands)
}

/// Widest band in wavelength.
pub fn principal_band(bands: &[BandGap]) -> Option<BandGap> {
    bands
        .iter()
        .copied()
        .max_by(|a, b| a.width_nm.total_cmp(&b.width_nm))
}

fn principal(spectrum: &Spectrum, drop_fraction: f64, which: &'static str) -> Result<BandGap> {
    principal_band(&extract_pbg(spectrum, drop_fraction)?).ok_or(DbrError::NoBandGap(which))
}

fn same_grid(a: &Spectrum, b: &Spectrum) -> Result<()> {
    if a.grid.freqs_thz() == b.grid.freqs_thz() {
        Ok(())
    } else {
        Err(DbrError::GridMismatch)
    }
}

/// Principal-band width of `candidate` minus that of `baseline`, in nm.
pub fn pbg_broadening(candidate: &Spectrum, baseline: &Spectrum) -> Result<f64> {
    pbg_broadening_with(candidate, baseline, DEFAULT_DROP_FRACTION)
}

pub fn pbg_broadening_with(candidate: &Spectrum, baseline: &Spectrum, drop_fraction: f64) -> Result<f64> {
    same_grid(candidate, baseline)?;
    let c = principal(candidate, drop_fraction, "candidate")?;
    let b = principal(baseline, drop_fraction, "baseline")?;
    Ok(c.width_nm - b.width_nm)
}

fn max_transmittance(s: &Spectrum, lo: f64, hi: f64) -> Option<f64> {
    s.grid
        .freqs_thz()
        .iter()
        .zip(&s.transmittance)
        .filter(|(f, _)| **f >= lo && **f <= hi)
        .map(|(_, t)| *t)
        .reduce(f64::max)
}

/// `max(T)` over `band` for the candidate minus the same for the baseline.
/// Negative values mean the candidate's transmission peaks there are lower.
///
/// The band must not overlap the baseline's principal gap.
pub fn resonance_suppression(candidate: &Spectrum, baseline: &Spectrum, band: FreqInterval) -> Result<f64> {
    same_grid(candidate, baseline)?;
    let invalid = |reason: &str| DbrError::InvalidBand {
        lo_thz: band.lo_thz,
        hi_thz: band.hi_thz,
        reason: reason.to_string(),
    };
    if !(band.lo_thz < band.hi_thz) {
        return Err(invalid("empty interval"));
    }
    let gap = principal(baseline, DEFAULT_DROP_FRACTION, "baseline")?;
    if band.overlaps(gap.f_low, gap.f_high) {
        return Err(invalid("overlaps the baseline band gap"));
    }
    let tc = max_transmittance(candidate, band.lo_thz, band.hi_thz).ok_or_else(|| invalid("no grid points inside"))?;
    let tb = max_transmittance(baseline, band.lo_thz, band.hi_thz).ok_or_else(|| invalid("no grid points inside"))?;
    Ok(tc - tb)
}

/// Bands of width `fraction * gap width` just below and just above the
/// baseline's principal gap.
pub fn adjacent_bands(baseline: &Spectrum, fraction: f64) -> Result<(FreqInterval, FreqInterval)> {
    let gap = principal(baseline, DEFAULT_DROP_FRACTION, "baseline")?;
    let w = fraction * gap.width_thz;
    // nudge off the edges so the bands do not touch the gap itself
    let eps = 1e-9 * gap.width_thz;
    Ok((
        FreqInterval::new(gap.f_low - w, gap.f_low - eps),
        FreqInterval::new(gap.f_high + eps, gap.f_high + w),
    ))
}

fn intersect(a: &[FreqInterval], b: &[FreqInterval]) -> Vec<FreqInterval> {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            let lo = x.lo_thz.max(y.lo_thz);
            let hi = x.hi_thz.min(y.hi_thz);
            if lo < hi {
                out.push(FreqInterval::new(lo, hi));
            }
        }
    }
    out.sort_by(|p, q| p.lo_thz.total_cmp(&q.lo_thz));
    out
}

/// Frequency intervals that stay inside a band for every angle up to
/// `aoi_limit_deg` in both polarizations.
pub fn omnidirectional_bands(te: &AngleMap, tm: &AngleMap, drop_fraction: f64, aoi_limit_deg: f64) -> Result<Vec<FreqInterval>> {
    let reference = te.grid().freqs_thz();
    if te.rows.iter().chain(&tm.rows).any(|r| r.grid.freqs_thz() != reference) {
        return Err(DbrError::GridMismatch);
    }
    let max_aoi = te.aoi_deg.iter().chain(&tm.aoi_deg).cloned().fold(f64::NEG_INFINITY, f64::max);
    if aoi_limit_deg > max_aoi {
        return Err(DbrError::InvalidAngle(aoi_limit_deg));
    }
    let mut current: Option<Vec<FreqInterval>> = None;
    for map in [te, tm] {
        for (aoi, row) in map.aoi_deg.iter().zip(&map.rows) {
            if *aoi > aoi_limit_deg {
                continue;
            }
            let bands: Vec<FreqInterval> = extract_pbg(row, drop_fraction)?
                .iter()
                .map(|b| FreqInterval::new(b.f_low, b.f_high))
                .collect();
            current = Some(match current {
                None => bands,
                Some(acc) => intersect(&acc, &bands),
            });
        }
    }
    Ok(current.unwrap_or_default())
}

/// Side-by-side numbers for a candidate design against a baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub candidate: String,
    pub baseline: String,
    pub engine: String,
    pub aoi_deg: f64,
    pub pol: String,
    pub drop_fraction: f64,
    pub candidate_band: BandGap,
    pub baseline_band: BandGap,
    pub broadening_nm: f64,
    /// Same comparison with edges at 10% of the maximum.
    pub broadening_nm_wide_reading: Option<f64>,
    pub suppression_below: f64,
    pub suppression_above: f64,
    #[serde(rename = "suppression_dB_below")]
    pub suppression_db_below: f64,
    #[serde(rename = "suppression_dB_above")]
    pub suppression_db_above: f64,
}

fn suppression_db(candidate: &Spectrum, baseline: &Spectrum, band: FreqInterval) -> f64 {
    let tc = max_transmittance(candidate, band.lo_thz, band.hi_thz).unwrap_or(0.0);
    let tb = max_transmittance(baseline, band.lo_thz, band.hi_thz).unwrap_or(0.0);
    10.0 * (tc / tb).log10()
}

/// Fraction of the baseline gap width used for the side bands in [`compare`].
pub const SIDE_BAND_FRACTION: f64 = 0.25;

pub fn compare(candidate: &Spectrum, baseline: &Spectrum, drop_fraction: f64) -> Result<ComparisonReport> {
    same_grid(candidate, baseline)?;
    let c = principal(candidate, drop_fraction, "candidate")?;
    let b = principal(baseline, drop_fraction, "baseline")?;
    let (below, above) = adjacent_bands(baseline, SIDE_BAND_FRACTION)?;
    Ok(ComparisonReport {
        candidate: candidate.meta.label.clone(),
        baseline: baseline.meta.label.clone(),
        engine: candidate.meta.engine.clone(),
        aoi_deg: candidate.meta.aoi_deg,
        pol: candidate.meta.pol.to_string(),
        drop_fraction,
        candidate_band: c,
        baseline_band: b,
        broadening_nm: c.width_nm - b.width_nm,
        broadening_nm_wide_reading: pbg_broadening_with(candidate, baseline, WIDE_DROP_FRACTION).ok(),
        suppression_below: resonance_suppression(candidate, baseline, below)?,
        suppression_above: resonance_suppression(candidate, baseline, above)?,
        suppression_db_below: suppression_db(candidate, baseline, below),
        suppression_db_above: suppression_db(candidate, baseline, above),
    })
}
