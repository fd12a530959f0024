//! Stokes/Bloch-sphere picture of the two-wave dynamics.
//!
//! The forward wave sits at the north pole and the backward wave at the
//! south pole. Along the reflector the state vector precesses about the
//! fictitious field `B = (|kappa|, 0, -dk)` according to `dS/dz = B x S`.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coupled_mode::{CmProfile, ModeAmplitudes};
use crate::error::{DbrError, Result};
use crate::io::fmt_num;
use crate::matrix::Mat2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StokesVector {
    #[serde(rename = "Sx")]
    pub x: f64,
    #[serde(rename = "Sy")]
    pub y: f64,
    #[serde(rename = "Sz")]
    pub z: f64,
}

impl StokesVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        StokesVector { x, y, z }
    }

    pub const fn north() -> Self {
        Self::new(0.0, 0.0, 1.0)
    }

    pub const fn south() -> Self {
        Self::new(0.0, 0.0, -1.0)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, o: &StokesVector) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &StokesVector) -> StokesVector {
        StokesVector::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn distance(&self, o: &StokesVector) -> f64 {
        StokesVector::new(self.x - o.x, self.y - o.y, self.z - o.z).norm()
    }
}

/// `B = (|kappa|, 0, -dk)`. Using `|kappa|` only rotates B about z, which
/// leaves `S_z` untouched.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FictitiousField {
    pub bx: f64,
    pub by: f64,
    pub bz: f64,
}

impl FictitiousField {
    pub fn new(kappa: Complex64, delta_k: f64) -> Self {
        FictitiousField {
            bx: kappa.norm(),
            by: 0.0,
            bz: -delta_k,
        }
    }

    pub fn magnitude(&self) -> f64 {
        (self.bx * self.bx + self.by * self.by + self.bz * self.bz).sqrt()
    }

    fn as_vector(&self) -> StokesVector {
        StokesVector::new(self.bx, self.by, self.bz)
    }
}

pub fn stokes_from_amplitudes(a: &ModeAmplitudes) -> Result<StokesVector> {
    let p = a.power();
    if !(p > 0.0) {
        return Err(DbrError::ZeroPower);
    }
    let ai = a.a_i / p.sqrt();
    let ar = a.a_r / p.sqrt();
    let cross = ai * ar.conj();
    Ok(StokesVector::new(
        2.0 * cross.re,
        2.0 * cross.im,
        ai.norm_sqr() - ar.norm_sqr(),
    ))
}

/// Rotate `s` by `angle` (right-handed) about the unit vector `axis`.
fn rotate(s: StokesVector, axis: StokesVector, angle: f64) -> StokesVector {
    let (sin, cos) = angle.sin_cos();
    let kxs = axis.cross(&s);
    let kds = axis.dot(&s) * (1.0 - cos);
    StokesVector::new(
        s.x * cos + kxs.x * sin + axis.x * kds,
        s.y * cos + kxs.y * sin + axis.y * kds,
        s.z * cos + kxs.z * sin + axis.z * kds,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub z: f64,
    pub s: StokesVector,
}

/// Integrates `dS/dz = B x S` cell by cell with exact sub-step rotations.
/// The first point is `s0` at `z = 0`; one point per sub-step follows.
pub fn precess(s0: StokesVector, profile: &CmProfile, steps_per_cell: usize) -> Result<Vec<TrajectoryPoint>> {
    if steps_per_cell == 0 {
        return Err(DbrError::InvalidSpec("steps_per_cell must be >= 1".into()));
    }
    let mut out = Vec::with_capacity(profile.len() * steps_per_cell + 1);
    let mut s = s0;
    let mut z = 0.0;
    out.push(TrajectoryPoint { z, s });
    for cell in &profile.cells {
        let field = FictitiousField::new(cell.kappa, cell.delta_k);
        let mag = field.magnitude();
        let dz = cell.length / steps_per_cell as f64;
        let z0 = z;
        for step in 1..=steps_per_cell {
            if mag > 0.0 {
                let b = field.as_vector();
                let axis = StokesVector::new(b.x / mag, b.y / mag, b.z / mag);
                s = rotate(s, axis, mag * dz);
            }
            z = z0 + dz * step as f64;
            out.push(TrajectoryPoint { z, s });
        }
    }
    Ok(out)
}

/// Fraction of power in the backward wave, `(1 - S_z) / 2`.
pub fn conversion_fraction(s: &StokesVector) -> f64 {
    (1.0 - s.z) / 2.0
}

/// The efficiency as commonly printed, `(S_z + 1) / 2`. This is the
/// forward-wave fraction under the pole convention used here; kept for
/// comparison with published curves.
pub fn printed_efficiency(s: &StokesVector) -> f64 {
    (s.z + 1.0) / 2.0
}

/// Unitary spinor propagator whose Stokes vector follows `dS/dz = B x S`
/// exactly: `exp(-i H d)` with `H = -(1/2) sigma . B`.
pub fn spinor_propagator(kappa: Complex64, delta_k: f64, d: f64) -> Mat2 {
    let b = FictitiousField::new(kappa, delta_k);
    let half = b.magnitude() / 2.0;
    let h11 = Complex64::new(-0.5 * b.bz, 0.0);
    let h12 = Complex64::new(-0.5 * b.bx, 0.5 * b.by);
    let h21 = Complex64::new(-0.5 * b.bx, -0.5 * b.by);
    let (c, s) = if half > 0.0 {
        ((half * d).cos(), (half * d).sin() / half)
    } else {
        (1.0, d)
    };
    let mi_s = Complex64::new(0.0, -s);
    let cc = Complex64::new(c, 0.0);
    Mat2::new(cc + mi_s * h11, mi_s * h12, mi_s * h21, cc - mi_s * h11)
}

/// Trajectory CSV `z_nm,Sx,Sy,Sz,eta` with `eta` the backward-wave fraction.
pub fn write_trajectory_csv<W: Write>(trajectory: &[TrajectoryPoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["z_nm", "Sx", "Sy", "Sz", "eta"])?;
    for p in trajectory {
        w.write_record([
            fmt_num(p.z),
            fmt_num(p.s.x),
            fmt_num(p.s.y),
            fmt_num(p.s.z),
            fmt_num(conversion_fraction(&p.s)),
        ])?;
    }
    w.flush()?;
    Ok(())
}
