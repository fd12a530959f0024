//! Stop-band broadening of thickness-chirped reflectors against a periodic one.
//!
//! ```text
//! cargo run --release --example chirped_broadening
//! ```

use adiabatic_dbr::analysis::{compare, DEFAULT_DROP_FRACTION};
use adiabatic_dbr::tmm::spec_spectrum;
use adiabatic_dbr::{DbrSpec, Polarization, Result, SpectralGrid};

fn main() -> Result<()> {
    let grid = SpectralGrid::default_grid();
    let baseline = spec_spectrum(&DbrSpec::normal(400.0, 200.0, 39), &grid, 0.0, Polarization::TE)?;

    for (d1, delta) in [(10.0, 10.0), (100.0, 5.0), (150.0, 2.5)] {
        let spec = DbrSpec::chirped(400.0, d1, delta, 39);
        let first = spec.d1_of_cell(0);
        let last = spec.d1_of_cell(spec.cells - 1);
        let s = spec_spectrum(&spec, &grid, 0.0, Polarization::TE)?;
        let rep = compare(&s, &baseline, DEFAULT_DROP_FRACTION)?;
        println!(
            "d1 {first:5.1} -> {last:5.1} nm (step {delta:4.1}): band {:6.1}-{:6.1} nm, broadening {:+6.1} nm, side-band dB {:+.2}/{:+.2}",
            rep.candidate_band.lambda_low,
            rep.candidate_band.lambda_high,
            rep.broadening_nm,
            rep.suppression_db_below,
            rep.suppression_db_above,
        );
    }
    Ok(())
}
