//! The coupled-mode engine next to the exact transfer-matrix result, plus
//! the closed-form uniform-grating reflectance.
//!
//! ```text
//! cargo run --release --example coupled_mode_vs_tmm
//! ```

use adiabatic_dbr::analysis::{extract_pbg, principal_band, DEFAULT_DROP_FRACTION};
use adiabatic_dbr::coupled_mode::{cm_spectrum, reflectivity, uniform_grating_reflectance, CmProfile};
use adiabatic_dbr::geometry::kappa_uniform;
use adiabatic_dbr::tmm::spec_spectrum;
use adiabatic_dbr::{DbrSpec, Polarization, Result, SpectralGrid};

fn main() -> Result<()> {
    let spec = DbrSpec::normal(400.0, 200.0, 39);
    let grid = SpectralGrid::uniform(120.0, 260.0, 15)?;
    let exact = spec_spectrum(&spec, &grid, 0.0, Polarization::TE)?;
    let cm = cm_spectrum(&spec, &grid, 0.0, Polarization::TE)?;
    println!("  f/THz   R_tmm    R_cm");
    for i in 0..grid.len() {
        println!("{:7.1} {:7.4} {:7.4}", grid.freqs_thz()[i], exact.reflectance[i], cm.reflectance[i]);
    }

    let full = SpectralGrid::default_grid();
    for (name, s) in [
        ("tmm", spec_spectrum(&spec, &full, 0.0, Polarization::TE)?),
        ("coupled_mode", cm_spectrum(&spec, &full, 0.0, Polarization::TE)?),
    ] {
        let b = principal_band(&extract_pbg(&s, DEFAULT_DROP_FRACTION)?).expect("stop band");
        println!("{name:>12}: band centre {:.1} nm", b.centre_nm());
    }

    // One uniform grating, three ways of getting R.
    let lam = 1600.0;
    let kappa = kappa_uniform(2.5, 1.5, lam, 0.0, Polarization::TE)?;
    let (dk, len) = (2e-4, 8000.0);
    let numeric = reflectivity(&CmProfile::uniform(kappa, dk, len, 20)?)?.reflectance;
    let closed = uniform_grating_reflectance(kappa.norm(), dk, len);
    println!("uniform grating: propagated {numeric:.12}, closed form {closed:.12}");
    Ok(())
}
