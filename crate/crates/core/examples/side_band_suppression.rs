//! Transmission peaks beside the stop band, chirped against periodic.
//!
//! ```text
//! cargo run --release --example side_band_suppression
//! ```

use adiabatic_dbr::analysis::{adjacent_bands, resonance_suppression, FreqInterval, SIDE_BAND_FRACTION};
use adiabatic_dbr::tmm::spec_spectrum;
use adiabatic_dbr::{DbrSpec, Polarization, Result, SpectralGrid};

fn main() -> Result<()> {
    let grid = SpectralGrid::default_grid();
    let baseline = spec_spectrum(&DbrSpec::normal(400.0, 200.0, 39), &grid, 0.0, Polarization::TE)?;
    let chirped = spec_spectrum(&DbrSpec::chirped(400.0, 10.0, 10.0, 39), &grid, 0.0, Polarization::TE)?;

    let (below, above) = adjacent_bands(&baseline, SIDE_BAND_FRACTION)?;
    for (name, band) in [("below", below), ("above", above), ("custom", FreqInterval { lo_thz: 125.0, hi_thz: 150.0 })] {
        let delta = resonance_suppression(&chirped, &baseline, band)?;
        println!("{name:>6} {:6.1}-{:6.1} THz: change in max T {delta:+.3}", band.lo_thz, band.hi_thz);
    }
    Ok(())
}
