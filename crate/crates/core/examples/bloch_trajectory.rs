//! Stokes-vector precession through a chirped reflector, written as CSV.
//!
//! ```text
//! cargo run --release --example bloch_trajectory -- trajectory.csv
//! ```

use std::fs::File;

use adiabatic_dbr::bloch::{conversion_fraction, precess, write_trajectory_csv, StokesVector};
use adiabatic_dbr::coupled_mode::CmProfile;
use adiabatic_dbr::run::design_wavelength;
use adiabatic_dbr::{DbrSpec, Polarization, Result};

fn main() -> Result<()> {
    let spec = DbrSpec::chirped(400.0, 10.0, 10.0, 39);
    let lam = design_wavelength(&spec);
    let profile = CmProfile::for_spec(&spec, lam, 0.0, Polarization::TE)?;
    let traj = precess(StokesVector::north(), &profile, 50)?;

    for p in traj.iter().step_by(50 * 6) {
        println!(
            "z {:7.0} nm  S = ({:+.3}, {:+.3}, {:+.3})  backward fraction {:.3}",
            p.z,
            p.s.x,
            p.s.y,
            p.s.z,
            conversion_fraction(&p.s)
        );
    }
    let drift = traj.iter().map(|p| (p.s.norm() - 1.0).abs()).fold(0.0, f64::max);
    println!("max |S| drift {drift:.1e}");

    if let Some(path) = std::env::args().nth(1) {
        write_trajectory_csv(&traj, File::create(&path)?)?;
        println!("wrote {path}");
    }
    Ok(())
}
