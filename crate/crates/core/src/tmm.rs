//! Characteristic-matrix solver for plane waves in stratified media.
//!
//! Each layer contributes `[[cos phi, i sin phi / q], [i q sin phi, cos phi]]`
//! with `phi = 2 pi n d cos(theta) / lambda` and the tilted admittance
//! `q = n cos(theta)` (TE) or `cos(theta) / n` (TM). `cos(theta)` is taken on
//! the principal branch, so evanescent layers and total internal reflection
//! fall out of the same arithmetic.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{DbrError, Result};
use crate::geometry::{build_ict_slice, build_stack, DbrSpec, DbrVariant, LayerStack, Polarization};
use crate::io::fmt_num;
use crate::matrix::Mat2;

/// Speed of light in nm * THz.
pub const SPEED_OF_LIGHT: f64 = 299_792.458;

pub const DEFAULT_F_MIN_THZ: f64 = 100.0;
pub const DEFAULT_F_MAX_THZ: f64 = 800.0;
pub const DEFAULT_POINTS: usize = 2000;

pub fn thz_to_nm(f_thz: f64) -> f64 {
    SPEED_OF_LIGHT / f_thz
}

pub fn nm_to_thz(lambda_nm: f64) -> f64 {
    SPEED_OF_LIGHT / lambda_nm
}

/// Strictly increasing frequency samples with their vacuum wavelengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralGrid {
    freqs_thz: Vec<f64>,
    wavelengths_nm: Vec<f64>,
}

impl SpectralGrid {
    pub fn from_frequencies(freqs_thz: Vec<f64>) -> Result<Self> {
        if freqs_thz.is_empty() {
            return Err(DbrError::InvalidGrid("grid is empty".into()));
        }
        if freqs_thz.iter().any(|f| !(f.is_finite() && *f > 0.0)) {
            return Err(DbrError::InvalidGrid("frequencies must be positive".into()));
        }
        if freqs_thz.windows(2).any(|w| w[1] <= w[0]) {
            return Err(DbrError::InvalidGrid("frequencies must be strictly increasing".into()));
        }
        let wavelengths_nm = freqs_thz.iter().map(|&f| thz_to_nm(f)).collect();
        Ok(SpectralGrid {
            freqs_thz,
            wavelengths_nm,
        })
    }

    pub fn uniform(f_min_thz: f64, f_max_thz: f64, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(DbrError::InvalidGrid(format!("need >= 2 points, got {points}")));
        }
        if !(f_min_thz < f_max_thz) {
            return Err(DbrError::InvalidGrid(format!(
                "f_min ({f_min_thz}) must be below f_max ({f_max_thz})"
            )));
        }
        let step = (f_max_thz - f_min_thz) / (points - 1) as f64;
        let mut freqs: Vec<f64> = (0..points).map(|i| f_min_thz + step * i as f64).collect();
        freqs[points - 1] = f_max_thz;
        Self::from_frequencies(freqs)
    }

    /// 2000 points over 100-800 THz.
    pub fn default_grid() -> Self {
        Self::uniform(DEFAULT_F_MIN_THZ, DEFAULT_F_MAX_THZ, DEFAULT_POINTS).expect("static grid")
    }

    pub fn freqs_thz(&self) -> &[f64] {
        &self.freqs_thz
    }

    pub fn wavelengths_nm(&self) -> &[f64] {
        &self.wavelengths_nm
    }

    pub fn len(&self) -> usize {
        self.freqs_thz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs_thz.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumMeta {
    pub label: String,
    pub engine: String,
    pub aoi_deg: f64,
    pub pol: Polarization,
}

/// Reflectance and transmittance sampled on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub grid: SpectralGrid,
    pub reflectance: Vec<f64>,
    pub transmittance: Vec<f64>,
    pub meta: SpectrumMeta,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// CSV with header `freq_THz,wavelength_nm,R,T`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["freq_THz", "wavelength_nm", "R", "T"])?;
        for i in 0..self.len() {
            w.write_record([
                fmt_num(self.grid.freqs_thz[i]),
                fmt_num(self.grid.wavelengths_nm[i]),
                fmt_num(self.reflectance[i]),
                fmt_num(self.transmittance[i]),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// One reflectance spectrum per angle of incidence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleMap {
    pub aoi_deg: Vec<f64>,
    pub rows: Vec<Spectrum>,
}

impl AngleMap {
    pub fn grid(&self) -> &SpectralGrid {
        &self.rows[0].grid
    }

    /// Long-format CSV `aoi_deg,freq_THz,R`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["aoi_deg", "freq_THz", "R"])?;
        for (aoi, row) in self.aoi_deg.iter().zip(&self.rows) {
            for (f, r) in row.grid.freqs_thz.iter().zip(&row.reflectance) {
                w.write_record([fmt_num(*aoi), fmt_num(*f), fmt_num(*r)])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn check_aoi(aoi_deg: f64) -> Result<()> {
    if aoi_deg.is_finite() && (0.0..90.0).contains(&aoi_deg) {
        Ok(())
    } else {
        Err(DbrError::InvalidAngle(aoi_deg))
    }
}

/// `cos(theta_j)` inside index `n` for in-plane invariant `n0 sin(aoi)`.
fn cos_in(n: f64, transverse: f64) -> Complex64 {
    let s = transverse / n;
    Complex64::new(1.0 - s * s, 0.0).sqrt()
}

fn admittance(n: f64, cos_t: Complex64, pol: Polarization) -> Complex64 {
    match pol {
        Polarization::TE => cos_t * n,
        Polarization::TM => cos_t / n,
    }
}

fn layer_matrix_inner(n: f64, d: f64, wavelength_nm: f64, transverse: f64, pol: Polarization) -> Mat2 {
    let cos_t = cos_in(n, transverse);
    let phi = cos_t * (2.0 * PI * n * d / wavelength_nm);
    let q = admittance(n, cos_t, pol);
    let i = Complex64::i();
    let (c, s) = (phi.cos(), phi.sin());
    let s_over_q = if q.norm() > 0.0 {
        s / q
    } else {
        // grazing limit: sin(phi)/q -> (2 pi d / lambda) * (1 or n^2)
        let base = 2.0 * PI * d / wavelength_nm;
        Complex64::new(
            match pol {
                Polarization::TE => base,
                Polarization::TM => base * n * n,
            },
            0.0,
        )
    };
    Mat2::new(c, i * s_over_q, i * q * s, c)
}

/// Characteristic matrix of one homogeneous layer.
pub fn layer_matrix(n: f64, d_nm: f64, wavelength_nm: f64, aoi_deg: f64, n0: f64, pol: Polarization) -> Mat2 {
    let transverse = n0 * aoi_deg.to_radians().sin();
    layer_matrix_inner(n, d_nm, wavelength_nm, transverse, pol)
}

/// Amplitude and power response of a stack at one wavelength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StackResponse {
    pub r: Complex64,
    pub t: Complex64,
    pub reflectance: f64,
    /// From the transmission coefficient, not `1 - R`.
    pub transmittance: f64,
}

/// Product of the layer matrices in stack order.
pub fn stack_matrix(stack: &LayerStack, wavelength_nm: f64, aoi_deg: f64, pol: Polarization) -> Mat2 {
    let transverse = stack.ambient_n * aoi_deg.to_radians().sin();
    stack
        .layers
        .iter()
        .fold(Mat2::identity(), |acc, l| acc * layer_matrix_inner(l.n, l.thickness, wavelength_nm, transverse, pol))
}

pub fn stack_response(stack: &LayerStack, wavelength_nm: f64, aoi_deg: f64, pol: Polarization) -> Result<StackResponse> {
    check_aoi(aoi_deg)?;
    if !(wavelength_nm.is_finite() && wavelength_nm > 0.0) {
        return Err(DbrError::InvalidGrid(format!("wavelength {wavelength_nm} nm")));
    }
    Ok(response_unchecked(stack, wavelength_nm, aoi_deg, pol))
}

fn response_unchecked(stack: &LayerStack, wavelength_nm: f64, aoi_deg: f64, pol: Polarization) -> StackResponse {
    let transverse = stack.ambient_n * aoi_deg.to_radians().sin();
    let m = stack_matrix(stack, wavelength_nm, aoi_deg, pol);
    let qa = admittance(stack.ambient_n, cos_in(stack.ambient_n, transverse), pol);
    let qs = admittance(stack.substrate_n, cos_in(stack.substrate_n, transverse), pol);
    let front = qa * m.m11 + qa * qs * m.m12;
    let back = m.m21 + qs * m.m22;
    let denom = front + back;
    let r = (front - back) / denom;
    let t = qa * 2.0 / denom;
    StackResponse {
        r,
        t,
        reflectance: r.norm_sqr(),
        transmittance: qs.re / qa.re * t.norm_sqr(),
    }
}

fn meta(label: &str, engine: &str, aoi_deg: f64, pol: Polarization) -> SpectrumMeta {
    SpectrumMeta {
        label: label.to_string(),
        engine: engine.to_string(),
        aoi_deg,
        pol,
    }
}

/// Reflectance and transmittance of `stack` over `grid`.
pub fn spectrum(stack: &LayerStack, grid: &SpectralGrid, aoi_deg: f64, pol: Polarization) -> Result<Spectrum> {
    check_aoi(aoi_deg)?;
    let responses: Vec<StackResponse> = grid
        .wavelengths_nm
        .par_iter()
        .map(|&lam| response_unchecked(stack, lam, aoi_deg, pol))
        .collect();
    Ok(Spectrum {
        grid: grid.clone(),
        reflectance: responses.iter().map(|r| r.reflectance).collect(),
        transmittance: responses.iter().map(|r| r.transmittance).collect(),
        meta: meta("stack", "tmm", aoi_deg, pol),
    })
}

pub fn angle_map(stack: &LayerStack, grid: &SpectralGrid, aoi_grid: &[f64], pol: Polarization) -> Result<AngleMap> {
    if aoi_grid.is_empty() {
        return Err(DbrError::InvalidGrid("empty angle grid".into()));
    }
    let rows = aoi_grid
        .iter()
        .map(|&aoi| spectrum(stack, grid, aoi, pol))
        .collect::<Result<Vec<_>>>()?;
    Ok(AngleMap {
        aoi_deg: aoi_grid.to_vec(),
        rows,
    })
}

/// Transverse positions of the ICT slices: midpoints of `slice_count` equal strips.
pub fn slice_positions(slice_count: usize) -> Vec<f64> {
    (0..slice_count)
        .map(|k| (k as f64 + 0.5) / slice_count as f64)
        .collect()
}

/// Coherent slice average for an ICT reflector: `R = |mean_k r(y_k)|^2`.
/// Power not specularly reflected is reported as transmitted (`T = 1 - R`).
pub fn ict_averaged_spectrum(spec: &DbrSpec, grid: &SpectralGrid, aoi_deg: f64, pol: Polarization) -> Result<Spectrum> {
    check_aoi(aoi_deg)?;
    if spec.variant != DbrVariant::Ict {
        return Err(DbrError::InvalidSpec("slice averaging needs an ICT spec".into()));
    }
    let slices = slice_positions(spec.slice_count)
        .into_iter()
        .map(|y| build_ict_slice(spec, y))
        .collect::<Result<Vec<_>>>()?;
    let weight = 1.0 / slices.len() as f64;
    let reflectance: Vec<f64> = grid
        .wavelengths_nm
        .par_iter()
        .map(|&lam| {
            let mean: Complex64 = slices
                .iter()
                .map(|s| response_unchecked(s, lam, aoi_deg, pol).r)
                .sum::<Complex64>()
                * weight;
            mean.norm_sqr()
        })
        .collect();
    Ok(Spectrum {
        grid: grid.clone(),
        transmittance: reflectance.iter().map(|r| 1.0 - r).collect(),
        reflectance,
        meta: meta("ict", "tmm", aoi_deg, pol),
    })
}

/// TMM spectrum of any DBR description; ICT specs go through the slice average.
pub fn spec_spectrum(spec: &DbrSpec, grid: &SpectralGrid, aoi_deg: f64, pol: Polarization) -> Result<Spectrum> {
    match spec.variant {
        DbrVariant::Ict => ict_averaged_spectrum(spec, grid, aoi_deg, pol),
        _ => {
            let mut s = spectrum(&build_stack(spec)?, grid, aoi_deg, pol)?;
            s.meta.label = format!("{:?}", spec.variant).to_lowercase();
            Ok(s)
        }
    }
}

pub fn spec_angle_map(spec: &DbrSpec, grid: &SpectralGrid, aoi_grid: &[f64], pol: Polarization) -> Result<AngleMap> {
    if aoi_grid.is_empty() {
        return Err(DbrError::InvalidGrid("empty angle grid".into()));
    }
    let rows = aoi_grid
        .iter()
        .map(|&aoi| spec_spectrum(spec, grid, aoi, pol))
        .collect::<Result<Vec<_>>>()?;
    Ok(AngleMap {
        aoi_deg: aoi_grid.to_vec(),
        rows,
    })
}
