//! Two-wave coupled-mode propagation in the rotating frame.
//!
//! The forward/backward amplitude pair obeys
//!
//! ```text
//! i d/dz (a_i, a_r) = [[-dk, kappa], [-conj(kappa), dk]] (a_i, a_r)
//! ```
//!
//! with `kappa` and `dk` held constant inside each unit cell. The generator
//! squares to `(dk^2 - |kappa|^2) I`, so each cell's propagator has a closed
//! form and the whole reflector is an ordered product of 2x2 matrices.
//!
//! Amplitudes and phases are in the rotating frame. Reflectance only depends
//! on magnitudes, which the frame change leaves untouched.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use num_complex::Complex64;

use crate::error::{DbrError, Result};
use crate::geometry::{cell_profiles, CellParams, DbrSpec, Polarization};
use crate::matrix::Mat2;
use crate::tmm::{SpectralGrid, Spectrum, SpectrumMeta};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeAmplitudes {
    /// Forward wave.
    pub a_i: Complex64,
    /// Backward wave.
    pub a_r: Complex64,
}

impl ModeAmplitudes {
    pub fn new(a_i: Complex64, a_r: Complex64) -> Self {
        ModeAmplitudes { a_i, a_r }
    }

    /// All power in the forward wave.
    pub fn forward() -> Self {
        Self::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    /// `|a_i|^2 - |a_r|^2`, conserved by contradirectional coupling.
    pub fn net_flux(&self) -> f64 {
        self.a_i.norm_sqr() - self.a_r.norm_sqr()
    }

    pub fn power(&self) -> f64 {
        self.a_i.norm_sqr() + self.a_r.norm_sqr()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CmCell {
    pub length: f64,
    pub kappa: Complex64,
    pub delta_k: f64,
}

/// Piecewise-constant coupling/detuning profile along the reflector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmProfile {
    pub cells: Vec<CmCell>,
}

impl CmProfile {
    pub fn new(cells: Vec<CmCell>) -> Result<Self> {
        if let Some(i) = cells.iter().position(|c| !(c.length > 0.0 && c.length.is_finite())) {
            return Err(DbrError::InvalidSpec(format!("cell {i} has nonpositive length")));
        }
        Ok(CmProfile { cells })
    }

    /// One cell of length `period` per entry of `params`.
    pub fn from_cell_params(params: &[CellParams], period: f64) -> Result<Self> {
        Self::new(
            params
                .iter()
                .map(|p| CmCell {
                    length: period,
                    kappa: p.kappa,
                    delta_k: p.delta_k,
                })
                .collect(),
        )
    }

    /// Constant coupling over `total_length`, split into `pieces` equal cells.
    pub fn uniform(kappa: Complex64, delta_k: f64, total_length: f64, pieces: usize) -> Result<Self> {
        let pieces = pieces.max(1);
        let length = total_length / pieces as f64;
        Self::new(vec![
            CmCell {
                length,
                kappa,
                delta_k
            };
            pieces
        ])
    }

    pub fn for_spec(spec: &DbrSpec, wavelength_nm: f64, aoi_deg: f64, pol: Polarization) -> Result<Self> {
        let params = cell_profiles(spec, wavelength_nm, aoi_deg, pol)?;
        Self::from_cell_params(&params, spec.period)
    }

    pub fn total_length(&self) -> f64 {
        self.cells.iter().map(|c| c.length).sum()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Every cell cut into `k` equal pieces.
    pub fn subdivided(&self, k: usize) -> Self {
        let k = k.max(1);
        let cells = self
            .cells
            .iter()
            .flat_map(|c| {
                std::iter::repeat_n(
                    CmCell {
                        length: c.length / k as f64,
                        ..*c
                    },
                    k,
                )
            })
            .collect();
        CmProfile { cells }
    }
}

/// `exp(-i H d)` for `H = [[-dk, kappa], [-conj(kappa), dk]]`.
pub fn cell_propagator(kappa: Complex64, delta_k: f64, d: f64) -> Mat2 {
    let s2 = delta_k * delta_k - kappa.norm_sqr();
    // exp(-iHd) = c I - i s H, with H^2 = s2 I
    let (c, s) = if s2 > 0.0 {
        let w = s2.sqrt();
        ((w * d).cos(), (w * d).sin() / w)
    } else if s2 < 0.0 {
        let g = (-s2).sqrt();
        ((g * d).cosh(), (g * d).sinh() / g)
    } else {
        (1.0, d)
    };
    let mi_s = Complex64::new(0.0, -s);
    let h11 = Complex64::new(-delta_k, 0.0);
    let h22 = Complex64::new(delta_k, 0.0);
    Mat2::new(
        Complex64::new(c, 0.0) + mi_s * h11,
        mi_s * kappa,
        mi_s * (-kappa.conj()),
        Complex64::new(c, 0.0) + mi_s * h22,
    )
}

/// Total transfer matrix, entry face to exit face.
pub fn propagate(profile: &CmProfile) -> Result<Mat2> {
    if profile.is_empty() {
        return Err(DbrError::ProfileTooShort { needed: 1, got: 0 });
    }
    Ok(profile
        .cells
        .iter()
        .fold(Mat2::identity(), |acc, c| cell_propagator(c.kappa, c.delta_k, c.length) * acc))
}

/// Amplitudes at every cell boundary when marching `start` as an initial-value problem.
pub fn march(profile: &CmProfile, start: ModeAmplitudes) -> Vec<ModeAmplitudes> {
    let mut out = Vec::with_capacity(profile.len() + 1);
    let mut v = [start.a_i, start.a_r];
    out.push(start);
    for c in &profile.cells {
        v = cell_propagator(c.kappa, c.delta_k, c.length).apply(v);
        out.push(ModeAmplitudes::new(v[0], v[1]));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reflection {
    pub reflectance: f64,
    /// Rotating-frame amplitude reflection coefficient.
    pub r: Complex64,
}

/// Reflectance with unit forward input and no backward wave at the exit.
pub fn reflectivity(profile: &CmProfile) -> Result<Reflection> {
    let t = propagate(profile)?;
    if t.m22.norm() < 1e-14 {
        return Err(DbrError::SingularBoundary(t.m22.norm()));
    }
    let r = -t.m21 / t.m22;
    Ok(Reflection {
        reflectance: r.norm_sqr(),
        r,
    })
}

/// Closed-form reflectance of a uniform grating of length `l`.
pub fn uniform_grating_reflectance(kappa_abs: f64, delta_k: f64, l: f64) -> f64 {
    let k2 = kappa_abs * kappa_abs;
    let s2 = k2 - delta_k * delta_k;
    if s2 > 0.0 {
        let s = s2.sqrt();
        let sh = (s * l).sinh();
        let ch = (s * l).cosh();
        k2 * sh * sh / (s2 * ch * ch + delta_k * delta_k * sh * sh)
    } else if s2 < 0.0 {
        let w = (-s2).sqrt();
        let sn = (w * l).sin();
        let cs = (w * l).cos();
        k2 * sn * sn / (-s2 * cs * cs + delta_k * delta_k * sn * sn)
    } else {
        let x = kappa_abs * l;
        x * x / (1.0 + x * x)
    }
}

/// Coupled-mode reflectance spectrum of a DBR description (`T = 1 - R`).
pub fn cm_spectrum(spec: &DbrSpec, grid: &SpectralGrid, aoi_deg: f64, pol: Polarization) -> Result<Spectrum> {
    spec.validate()?;
    let reflectance = grid
        .wavelengths_nm()
        .par_iter()
        .map(|&lam| {
            let profile = CmProfile::for_spec(spec, lam, aoi_deg, pol)?;
            Ok(reflectivity(&profile)?.reflectance)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(Spectrum {
        grid: grid.clone(),
        transmittance: reflectance.iter().map(|r| 1.0 - r).collect(),
        reflectance,
        meta: SpectrumMeta {
            label: format!("{:?}", spec.variant).to_lowercase(),
            engine: "coupled_mode".into(),
            aoi_deg,
            pol,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ik(k: f64) -> Complex64 {
        Complex64::new(0.0, k)
    }

    /// Classical RK4 on the coupled-mode ODE; independent of the closed form.
    fn rk4(kappa: Complex64, dk: f64, d: f64, start: [Complex64; 2], steps: usize) -> [Complex64; 2] {
        let h = d / steps as f64;
        let mi = Complex64::new(0.0, -1.0);
        let f = |v: [Complex64; 2]| {
            [
                mi * (-dk * v[0] + kappa * v[1]),
                mi * (-kappa.conj() * v[0] + dk * v[1]),
            ]
        };
        let mut v = start;
        for _ in 0..steps {
            let k1 = f(v);
            let k2 = f([v[0] + k1[0] * (h / 2.0), v[1] + k1[1] * (h / 2.0)]);
            let k3 = f([v[0] + k2[0] * (h / 2.0), v[1] + k2[1] * (h / 2.0)]);
            let k4 = f([v[0] + k3[0] * h, v[1] + k3[1] * h]);
            for j in 0..2 {
                v[j] += (k1[j] + k2[j] * 2.0 + k3[j] * 2.0 + k4[j]) * (h / 6.0);
            }
        }
        v
    }

    #[test]
    fn no_coupling_no_detuning_is_identity() {
        let m = cell_propagator(ik(0.0), 0.0, 123.0);
        assert!(m.max_abs_diff(&Mat2::identity()) < 1e-15);
    }

    #[test]
    fn pure_detuning_gives_phases() {
        let (dk, d) = (2.0e-3, 400.0);
        let m = cell_propagator(ik(0.0), dk, d);
        let expected = Mat2::diag(Complex64::from_polar(1.0, dk * d), Complex64::from_polar(1.0, -dk * d));
        assert!(m.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn phase_matched_unit_length() {
        let m = cell_propagator(ik(1.0e-3), 0.0, 1000.0);
        assert!((m.m12.norm() - 1f64.sinh()).abs() < 1e-12);
        assert!((m.m21.norm() - 1f64.sinh()).abs() < 1e-12);
        assert!((m.m11.norm() - 1f64.cosh()).abs() < 1e-12);
        assert!((m.m22.norm() - 1f64.cosh()).abs() < 1e-12);
        assert!((1f64.sinh() - 1.1752).abs() < 1e-4);
    }

    #[test]
    fn closed_form_matches_rk4() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        for (kappa, dk) in [(ik(1.0e-3), 0.0), (ik(1.0e-3), 4.0e-4), (ik(5.0e-4), 1.5e-3), (Complex64::new(3e-4, 6e-4), -1e-3)] {
            let m = cell_propagator(kappa, dk, 1000.0);
            for start in [[one, zero], [zero, one]] {
                let a = m.apply(start);
                let b = rk4(kappa, dk, 1000.0, start, 20_000);
                assert!((a[0] - b[0]).norm() < 1e-10 && (a[1] - b[1]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn degenerate_branch_is_continuous() {
        let k = 1.0e-3;
        let exact = cell_propagator(ik(k), k, 800.0);
        let near = cell_propagator(ik(k), k * (1.0 + 1e-9), 800.0);
        assert!(exact.max_abs_diff(&near) < 1e-6);
    }

    #[test]
    fn single_and_double_cell() {
        let cell = CmCell {
            length: 400.0,
            kappa: ik(7e-4),
            delta_k: 3e-4,
        };
        let one = CmProfile::new(vec![cell]).unwrap();
        let p = cell_propagator(cell.kappa, cell.delta_k, cell.length);
        assert_eq!(propagate(&one).unwrap(), p);
        let two = CmProfile::new(vec![cell, cell]).unwrap();
        assert!(propagate(&two).unwrap().max_abs_diff(&(p * p)) < 1e-15);
    }

    #[test]
    fn semigroup() {
        let kappa = ik(1e-3);
        let whole = cell_propagator(kappa, 0.0, 2000.0);
        for pieces in [1, 3, 7, 40] {
            let m = propagate(&CmProfile::uniform(kappa, 0.0, 2000.0, pieces).unwrap()).unwrap();
            assert!(m.max_abs_diff(&whole) < 1e-12);
        }
    }

    #[test]
    fn uncoupled_profile_does_not_reflect() {
        let p = CmProfile::uniform(ik(0.0), 1e-3, 5000.0, 10).unwrap();
        assert_eq!(reflectivity(&p).unwrap().reflectance, 0.0);
    }

    #[test]
    fn phase_matched_tanh() {
        for kl in [0.3, 1.0, 2.0, 5.0] {
            let l = 10_000.0;
            let p = CmProfile::uniform(ik(kl / l), 0.0, l, 25).unwrap();
            let r = reflectivity(&p).unwrap().reflectance;
            assert!((r - kl.tanh().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn detuned_closed_form() {
        let l = 15_600.0;
        let k = 1.2e-3;
        for dk in [-3e-3, -1.2e-3, -5e-4, 2e-4, 1.2e-3, 2.5e-3] {
            let p = CmProfile::uniform(ik(k), dk, l, 39).unwrap();
            let r = reflectivity(&p).unwrap().reflectance;
            assert!((r - uniform_grating_reflectance(k, dk, l)).abs() < 1e-10, "dk={dk}");
        }
    }

    #[test]
    fn flux_is_conserved_when_marching() {
        let spec = DbrSpec::chirped(400.0, 10.0, 10.0, 39);
        let p = CmProfile::for_spec(&spec, 1649.2, 0.0, Polarization::TE).unwrap();
        for a in march(&p, ModeAmplitudes::forward()) {
            assert!((a.net_flux() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn empty_profile_errors() {
        assert!(propagate(&CmProfile { cells: vec![] }).is_err());
        assert!(CmProfile::new(vec![CmCell {
            length: 0.0,
            kappa: ik(1e-3),
            delta_k: 0.0
        }])
        .is_err());
    }

    #[test]
    fn normal_dbr_band_centre() {
        let spec = DbrSpec::normal(400.0, 200.0, 39);
        let lam = spec.bragg_wavelength();
        assert!((lam - 1649.24).abs() < 0.01);
        let p = CmProfile::for_spec(&spec, lam, 0.0, Polarization::TE).unwrap();
        let k = p.cells[0].kappa.norm();
        assert!(p.cells[0].delta_k.abs() < 1e-15);
        let r = reflectivity(&p).unwrap().reflectance;
        assert!((r - (k * 39.0 * 400.0).tanh().powi(2)).abs() < 1e-12);
        assert!(r > 1.0 - 1e-12);
    }
}
