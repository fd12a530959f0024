//! Modelling of adiabatic distributed Bragg reflectors.
//!
//! Three layered views of the same structure are provided:
//!
//! * [`tmm`]: exact characteristic-matrix spectra of the layer stack.
//! * [`coupled_mode`]: two-wave coupled-mode propagation over a cell profile.
//! * [`bloch`]: the same dynamics as a precessing Stokes vector.
//!
//! [`geometry`] turns a [`geometry::DbrSpec`] into layer stacks and per-cell
//! coupling profiles, [`diagnostics`] checks adiabaticity along a profile,
//! [`analysis`] extracts band gaps and compares designs, and [`run`] drives
//! batch jobs that write CSV/JSON artifacts.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod bloch;
pub mod coupled_mode;
pub mod diagnostics;
pub mod error;
pub mod geometry;
pub mod io;
pub mod matrix;
pub mod run;
pub mod tmm;

pub use error::{DbrError, Result};
pub use geometry::{DbrSpec, DbrVariant, LayerStack, Polarization};
pub use matrix::Mat2;
pub use tmm::{SpectralGrid, Spectrum};
