//! Materials, DBR descriptions and concrete layer stacks.
//!
//! Three reflector families are supported:
//!
//! - `Normal`: N identical two-layer cells `(n1, d1), (n2, period - d1)`.
//! - `Chirped`: the first-layer thickness grows by `delta` per cell while the
//!   period stays fixed, so the cell-average index sweeps monotonically.
//! - `Ict` (intra-cell tilt): the interface inside each cell is tilted by a
//!   cell-dependent angle. The 2-D geometry is approximated by flat 1-D slices
//!   taken at a transverse position `y`, see [`build_ict_slice`].
//!
//! Lengths are in nm, external angles in degrees, coupling and detuning in
//! nm^-1.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{DbrError, Result};
use crate::io::fmt_num;

pub const DEFAULT_N1: f64 = 2.5;
pub const DEFAULT_N2: f64 = 1.5;
pub const DEFAULT_AMBIENT_N: f64 = 1.0;
pub const DEFAULT_SUBSTRATE_N: f64 = 1.5;
/// Transverse extent of the tilted-cell cross-section (4 um).
pub const DEFAULT_TRANSVERSE_EXTENT_NM: f64 = 4000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarization {
    TE,
    TM,
}

impl Polarization {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarization::TE => "TE",
            Polarization::TM => "TM",
        }
    }
}

impl std::fmt::Display for Polarization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub name: String,
    pub n: f64,
}

impl Material {
    pub fn new(name: impl Into<String>, n: f64) -> Self {
        Material {
            name: name.into(),
            n,
        }
    }

    pub fn tio2() -> Self {
        Material::new("TiO2", DEFAULT_N1)
    }

    pub fn sio2() -> Self {
        Material::new("SiO2", DEFAULT_N2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub n: f64,
    pub thickness: f64,
}

impl Layer {
    pub fn new(n: f64, thickness: f64) -> Self {
        Layer { n, thickness }
    }
}

/// A finite 1-D stack between a semi-infinite ambient (incidence side) and a
/// semi-infinite substrate. Layers are listed in the order light meets them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerStack {
    pub ambient_n: f64,
    pub substrate_n: f64,
    pub layers: Vec<Layer>,
}

impl LayerStack {
    pub fn new(ambient_n: f64, substrate_n: f64, layers: Vec<Layer>) -> Self {
        LayerStack {
            ambient_n,
            substrate_n,
            layers,
        }
    }

    /// Bare ambient/substrate interface.
    pub fn bare(ambient_n: f64, substrate_n: f64) -> Self {
        Self::new(ambient_n, substrate_n, Vec::new())
    }

    pub fn total_length(&self) -> f64 {
        self.layers.iter().map(|l| l.thickness).sum()
    }

    /// The same structure seen from the substrate side.
    pub fn reversed(&self) -> Self {
        let mut layers = self.layers.clone();
        layers.reverse();
        LayerStack::new(self.substrate_n, self.ambient_n, layers)
    }

    /// Two-column CSV `n,thickness_nm`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "thickness_nm"])?;
        for l in &self.layers {
            w.write_record([fmt_num(l.n), fmt_num(l.thickness)])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DbrVariant {
    Normal,
    Chirped,
    Ict,
}

/// How the intra-cell tilt angle varies along the stack.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum TiltMode {
    /// Linear ramp from `-theta_max` (first cell) to `+theta_max` (last cell).
    #[default]
    Linear,
    /// `cot(theta) = h / (d1/2 - (M - 1) l)`, with the transverse extent `h`
    /// and the per-cell thickness change `l` in nm.
    Geometric { h: f64, l: f64 },
}

fn default_slice_count() -> usize {
    1
}

fn default_extent() -> f64 {
    DEFAULT_TRANSVERSE_EXTENT_NM
}

/// Parametric description of a normal, chirped or intra-cell-tilt DBR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DbrSpec {
    pub variant: DbrVariant,
    /// Cell period in nm.
    pub period: f64,
    /// Base thickness of the first (n1) layer in nm.
    pub d1: f64,
    #[serde(rename = "N")]
    pub cells: usize,
    /// Per-cell chirp of the first-layer thickness, nm (chirped only).
    #[serde(default)]
    pub delta: f64,
    /// Maximum tilt angle in degrees (ICT only).
    #[serde(default)]
    pub theta_max: f64,
    #[serde(default = "default_slice_count")]
    pub slice_count: usize,
    /// Transverse extent used to turn a tilt into a thickness change, nm.
    #[serde(default = "default_extent")]
    pub transverse_extent: f64,
    #[serde(default)]
    pub tilt_mode: TiltMode,
    pub n1: f64,
    pub n2: f64,
    pub ambient_n: f64,
    pub substrate_n: f64,
}

impl DbrSpec {
    fn base(variant: DbrVariant, period: f64, d1: f64, cells: usize) -> Self {
        DbrSpec {
            variant,
            period,
            d1,
            cells,
            delta: 0.0,
            theta_max: 0.0,
            slice_count: 1,
            transverse_extent: DEFAULT_TRANSVERSE_EXTENT_NM,
            tilt_mode: TiltMode::Linear,
            n1: DEFAULT_N1,
            n2: DEFAULT_N2,
            ambient_n: DEFAULT_AMBIENT_N,
            substrate_n: DEFAULT_SUBSTRATE_N,
        }
    }

    pub fn normal(period: f64, d1: f64, cells: usize) -> Self {
        Self::base(DbrVariant::Normal, period, d1, cells)
    }

    pub fn chirped(period: f64, d1: f64, delta: f64, cells: usize) -> Self {
        DbrSpec {
            delta,
            ..Self::base(DbrVariant::Chirped, period, d1, cells)
        }
    }

    pub fn ict(period: f64, d1: f64, cells: usize, theta_max_deg: f64, slice_count: usize) -> Self {
        DbrSpec {
            theta_max: theta_max_deg,
            slice_count,
            ..Self::base(DbrVariant::Ict, period, d1, cells)
        }
    }

    pub fn with_indices(mut self, n1: f64, n2: f64) -> Self {
        self.n1 = n1;
        self.n2 = n2;
        self
    }

    pub fn with_media(mut self, ambient_n: f64, substrate_n: f64) -> Self {
        self.ambient_n = ambient_n;
        self.substrate_n = substrate_n;
        self
    }

    pub fn with_tilt_mode(mut self, mode: TiltMode) -> Self {
        self.tilt_mode = mode;
        self
    }

    /// Normal DBR with the same period, indices, media and cell count.
    pub fn untilted(&self) -> Self {
        DbrSpec {
            variant: DbrVariant::Normal,
            delta: 0.0,
            theta_max: 0.0,
            slice_count: 1,
            ..self.clone()
        }
    }

    pub fn total_length(&self) -> f64 {
        self.cells as f64 * self.period
    }

    /// First-layer thickness of cell `m` before any clamping.
    pub fn d1_of_cell(&self, m: usize) -> f64 {
        match self.variant {
            DbrVariant::Chirped => self.d1 + m as f64 * self.delta,
            _ => self.d1,
        }
    }

    /// Bragg wavelength `2 n_bar period` of the unchirped cell.
    pub fn bragg_wavelength(&self) -> f64 {
        2.0 * self.period * cell_average_index(self.n1, self.n2, self.d1, self.period)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(DbrError::InvalidSpec(msg));
        if self.cells == 0 {
            return bad("N must be >= 1".into());
        }
        if !(self.period.is_finite() && self.period > 0.0) {
            return bad(format!("period must be positive, got {}", self.period));
        }
        for (name, n) in [
            ("n1", self.n1),
            ("n2", self.n2),
            ("ambient_n", self.ambient_n),
            ("substrate_n", self.substrate_n),
        ] {
            if !(n.is_finite() && n >= 1.0) {
                return bad(format!("{name} must be >= 1, got {n}"));
            }
        }
        match self.variant {
            DbrVariant::Normal | DbrVariant::Chirped => {
                let last = self.cells - 1;
                for m in [0, last] {
                    let d1m = self.d1_of_cell(m);
                    let d2m = self.period - d1m;
                    if !(d1m > 0.0 && d2m > 0.0) {
                        return Err(DbrError::NonpositiveLayer {
                            cell: m,
                            d1_nm: d1m,
                            d2_nm: d2m,
                        });
                    }
                }
            }
            DbrVariant::Ict => {
                if !(self.d1 >= 0.0 && self.d1 <= self.period) {
                    return bad(format!("d1 = {} outside [0, period]", self.d1));
                }
                if !(self.theta_max.abs() < 90.0) {
                    return bad(format!("|theta_max| must be < 90, got {}", self.theta_max));
                }
                if self.slice_count == 0 {
                    return bad("slice_count must be >= 1".into());
                }
                if !(self.transverse_extent.is_finite() && self.transverse_extent >= 0.0) {
                    return bad("transverse_extent must be >= 0".into());
                }
            }
        }
        Ok(())
    }
}

/// Duty-weighted RMS index of a cell: `sqrt((d1 n1^2 + d2 n2^2) / period)`.
pub fn cell_average_index(n1: f64, n2: f64, d1: f64, period: f64) -> f64 {
    let d2 = period - d1;
    ((d1 * n1 * n1 + d2 * n2 * n2) / period).sqrt()
}

/// Concrete stack for the `Normal` and `Chirped` variants.
pub fn build_stack(spec: &DbrSpec) -> Result<LayerStack> {
    spec.validate()?;
    if spec.variant == DbrVariant::Ict {
        return Err(DbrError::InvalidSpec(
            "ICT stacks are built per transverse slice".into(),
        ));
    }
    let mut layers = Vec::with_capacity(2 * spec.cells);
    for m in 0..spec.cells {
        let d1m = spec.d1_of_cell(m);
        let d2m = spec.period - d1m;
        if !(d1m > 0.0 && d2m > 0.0) {
            return Err(DbrError::NonpositiveLayer {
                cell: m,
                d1_nm: d1m,
                d2_nm: d2m,
            });
        }
        layers.push(Layer::new(spec.n1, d1m));
        layers.push(Layer::new(spec.n2, d2m));
    }
    Ok(LayerStack::new(spec.ambient_n, spec.substrate_n, layers))
}

/// Tilt angle of cell `m` in degrees.
pub fn tilt_profile(spec: &DbrSpec, m: usize) -> Result<f64> {
    if m >= spec.cells {
        return Err(DbrError::InvalidSpec(format!(
            "cell index {m} out of range for N = {}",
            spec.cells
        )));
    }
    match spec.tilt_mode {
        TiltMode::Linear => {
            if spec.cells == 1 {
                return Ok(0.0);
            }
            let t = m as f64 / (spec.cells - 1) as f64;
            Ok(-spec.theta_max + 2.0 * spec.theta_max * t)
        }
        TiltMode::Geometric { h, l } => {
            if !(h > 0.0) {
                return Err(DbrError::DegenerateTilt { cell: m });
            }
            // cot(theta) = h / offset
            let offset = 0.5 * spec.d1 - (m as f64 - 1.0) * l;
            Ok(offset.atan2(h).to_degrees())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceCell {
    pub d1: f64,
    pub tilt_deg: f64,
    pub clamped: bool,
}

/// First-layer thicknesses of every cell in the slice at `y_frac`, pivoting
/// about mid-height.
pub fn ict_slice_cells(spec: &DbrSpec, y_frac: f64) -> Result<Vec<SliceCell>> {
    spec.validate()?;
    if spec.variant != DbrVariant::Ict {
        return Err(DbrError::InvalidSpec("slices need an ICT spec".into()));
    }
    if !(0.0..=1.0).contains(&y_frac) {
        return Err(DbrError::InvalidSpec(format!(
            "y_frac = {y_frac} outside [0, 1]"
        )));
    }
    (0..spec.cells)
        .map(|m| {
            let tilt_deg = tilt_profile(spec, m)?;
            let raw = spec.d1 + (y_frac - 0.5) * spec.transverse_extent * tilt_deg.to_radians().tan();
            let d1 = raw.clamp(0.0, spec.period);
            Ok(SliceCell {
                d1,
                tilt_deg,
                clamped: d1 != raw,
            })
        })
        .collect()
}

/// Flat 1-D stack seen at transverse position `y_frac` of an ICT reflector.
/// Cell boundaries stay normal to the axis, so every cell is `period` thick.
pub fn build_ict_slice(spec: &DbrSpec, y_frac: f64) -> Result<LayerStack> {
    let cells = ict_slice_cells(spec, y_frac)?;
    let mut layers = Vec::with_capacity(2 * cells.len());
    for c in cells {
        layers.push(Layer::new(spec.n1, c.d1));
        layers.push(Layer::new(spec.n2, spec.period - c.d1));
    }
    Ok(LayerStack::new(spec.ambient_n, spec.substrate_n, layers))
}

fn check_angle(theta_deg: f64) -> Result<()> {
    if theta_deg.is_finite() && theta_deg.abs() < 90.0 {
        Ok(())
    } else {
        Err(DbrError::InvalidAngle(theta_deg))
    }
}

/// Coupling coefficient of an equal-thickness two-layer grating, nm^-1.
///
/// `kappa_TE = i sqrt(2) (n1^2 - n2^2) / (lambda cos(theta) sqrt(n1^2 + n2^2))`
/// and `kappa_TM = kappa_TE cos(2 theta)`. Purely imaginary.
pub fn kappa_uniform(
    n1: f64,
    n2: f64,
    wavelength_nm: f64,
    theta_deg: f64,
    pol: Polarization,
) -> Result<Complex64> {
    check_angle(theta_deg)?;
    Ok(kappa_uniform_rad(n1, n2, wavelength_nm, theta_deg.to_radians(), pol))
}

fn kappa_uniform_rad(n1: f64, n2: f64, wavelength_nm: f64, theta: f64, pol: Polarization) -> Complex64 {
    let contrast = n1 * n1 - n2 * n2;
    let te = 2f64.sqrt() * contrast / (wavelength_nm * theta.cos() * (n1 * n1 + n2 * n2).sqrt());
    let mag = match pol {
        Polarization::TE => te,
        Polarization::TM => te * (2.0 * theta).cos(),
    };
    Complex64::new(0.0, mag)
}

/// Coupling coefficient of a cell with first-layer thickness `d1m`:
/// `i (1 - cos(2 pi d1m / period)) (n1^2 - n2^2) / (2 lambda n_bar)`.
/// At oblique incidence it carries the same `1/cos` and TM `cos(2 theta)`
/// factors as [`kappa_uniform`].
pub fn kappa_cell(
    n1: f64,
    n2: f64,
    d1m: f64,
    period: f64,
    wavelength_nm: f64,
    theta: f64,
    pol: Polarization,
) -> Complex64 {
    let n_bar = cell_average_index(n1, n2, d1m, period);
    let duty = 1.0 - (2.0 * PI * d1m / period).cos();
    let mut mag = duty * (n1 * n1 - n2 * n2) / (2.0 * wavelength_nm * n_bar * theta.cos());
    if pol == Polarization::TM {
        mag *= (2.0 * theta).cos();
    }
    Complex64::new(0.0, mag)
}

/// Local coupled-mode quantities of one unit cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellParams {
    #[serde(rename = "M")]
    pub index: usize,
    #[serde(rename = "d1M")]
    pub d1: f64,
    #[serde(rename = "d2M")]
    pub d2: f64,
    pub n_bar: f64,
    pub kappa: Complex64,
    pub delta_beta: f64,
    pub delta_k: f64,
    /// Tilt of the internal interface, degrees (zero outside ICT).
    #[serde(default)]
    pub tilt_deg: f64,
    /// Set when a degenerate thickness had to be clamped to `[0, period]`.
    #[serde(default)]
    pub clamped: bool,
}

/// Propagation angle inside a medium of index `n` for light arriving from
/// `ambient_n` at `aoi_deg`, in radians.
fn internal_angle(ambient_n: f64, n: f64, aoi_deg: f64) -> Result<f64> {
    let s = ambient_n * aoi_deg.to_radians().sin() / n;
    if s.abs() >= 1.0 {
        return Err(DbrError::InvalidAngle(aoi_deg));
    }
    Ok(s.asin())
}

/// Per-cell `(n_bar, kappa, delta_beta, delta_k)` in stack order.
///
/// Normal and chirped cells use `delta_k = 2 pi n_bar cos(theta) / lambda - pi / period`
/// and the duty-cycle coupling of [`kappa_cell`]. ICT cells keep the
/// unperturbed duty cycle, take `kappa` from [`kappa_uniform`] and get their
/// detuning from the tilt: `delta_beta = 2 beta cos(theta + tilt) - 2 pi / period`
/// with `beta = 2 pi n_bar / lambda`.
pub fn cell_profiles(
    spec: &DbrSpec,
    wavelength_nm: f64,
    aoi_deg: f64,
    pol: Polarization,
) -> Result<Vec<CellParams>> {
    spec.validate()?;
    if !(wavelength_nm.is_finite() && wavelength_nm > 0.0) {
        return Err(DbrError::InvalidSpec(format!(
            "wavelength must be positive, got {wavelength_nm}"
        )));
    }
    if !(0.0..90.0).contains(&aoi_deg) {
        return Err(DbrError::InvalidAngle(aoi_deg));
    }
    let grating = PI / spec.period;
    match spec.variant {
        DbrVariant::Normal | DbrVariant::Chirped => (0..spec.cells)
            .map(|m| {
                let d1m = spec.d1_of_cell(m);
                let d2m = spec.period - d1m;
                let n_bar = cell_average_index(spec.n1, spec.n2, d1m, spec.period);
                let theta = internal_angle(spec.ambient_n, n_bar, aoi_deg)?;
                let delta_k = 2.0 * PI * n_bar * theta.cos() / wavelength_nm - grating;
                Ok(CellParams {
                    index: m,
                    d1: d1m,
                    d2: d2m,
                    n_bar,
                    kappa: kappa_cell(spec.n1, spec.n2, d1m, spec.period, wavelength_nm, theta, pol),
                    delta_beta: 2.0 * delta_k,
                    delta_k,
                    tilt_deg: 0.0,
                    clamped: false,
                })
            })
            .collect(),
        DbrVariant::Ict => {
            let n_bar = cell_average_index(spec.n1, spec.n2, spec.d1, spec.period);
            let theta = internal_angle(spec.ambient_n, n_bar, aoi_deg)?;
            let kappa = kappa_uniform_rad(spec.n1, spec.n2, wavelength_nm, theta, pol);
            let beta = 2.0 * PI * n_bar / wavelength_nm;
            (0..spec.cells)
                .map(|m| {
                    let tilt_deg = tilt_profile(spec, m)?;
                    let delta_beta = 2.0 * beta * (theta + tilt_deg.to_radians()).cos() - 2.0 * grating;
                    Ok(CellParams {
                        index: m,
                        d1: spec.d1,
                        d2: spec.period - spec.d1,
                        n_bar,
                        kappa,
                        delta_beta,
                        delta_k: delta_beta / 2.0,
                        tilt_deg,
                        clamped: false,
                    })
                })
                .collect()
        }
    }
}

/// Per-cell profile CSV `M,d1M_nm,n_bar,kappa_abs_per_nm,delta_beta_per_nm`.
pub fn write_profile_csv<W: Write>(cells: &[CellParams], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["M", "d1M_nm", "n_bar", "kappa_abs_per_nm", "delta_beta_per_nm"])?;
    for c in cells {
        w.write_record([
            c.index.to_string(),
            fmt_num(c.d1),
            fmt_num(c.n_bar),
            fmt_num(c.kappa.norm()),
            fmt_num(c.delta_beta),
        ])?;
    }
    w.flush()?;
    Ok(())
}
