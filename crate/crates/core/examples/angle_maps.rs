//! TE/TM reflectance against angle and the omnidirectional stop bands.
//!
//! ```text
//! cargo run --release --example angle_maps
//! ```

use adiabatic_dbr::analysis::{extract_pbg, omnidirectional_bands, principal_band, DEFAULT_DROP_FRACTION};
use adiabatic_dbr::run::AoiConfig;
use adiabatic_dbr::tmm::spec_angle_map;
use adiabatic_dbr::{DbrSpec, Polarization, Result, SpectralGrid};

fn main() -> Result<()> {
    let grid = SpectralGrid::default_grid();
    let angles = AoiConfig::Sweep { min: 0.0, max: 80.0, steps: 17 }.angles();
    for (name, spec) in [
        ("periodic", DbrSpec::normal(400.0, 200.0, 39)),
        ("chirped", DbrSpec::chirped(400.0, 10.0, 10.0, 39)),
    ] {
        let te = spec_angle_map(&spec, &grid, &angles, Polarization::TE)?;
        let tm = spec_angle_map(&spec, &grid, &angles, Polarization::TM)?;
        for (pol, map) in [("TE", &te), ("TM", &tm)] {
            for idx in [0, 12] {
                let b = principal_band(&extract_pbg(&map.rows[idx], DEFAULT_DROP_FRACTION)?).expect("stop band");
                println!(
                    "{name:>8} {pol} {:4.0} deg: {:6.1}-{:6.1} THz",
                    angles[idx], b.f_low, b.f_high
                );
            }
        }
        for iv in omnidirectional_bands(&te, &tm, DEFAULT_DROP_FRACTION, 80.0)? {
            println!("{name:>8} omnidirectional to 80 deg: {:.1}-{:.1} THz", iv.lo_thz, iv.hi_thz);
        }
    }
    Ok(())
}
