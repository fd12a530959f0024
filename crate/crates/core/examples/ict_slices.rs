//! Interface-tilted cells: tilt profile, per-slice thicknesses and the
//! slice-averaged reflectance.
//!
//! ```text
//! cargo run --release --example ict_slices
//! ```

use adiabatic_dbr::analysis::{compare, DEFAULT_DROP_FRACTION};
use adiabatic_dbr::geometry::{ict_slice_cells, tilt_profile, TiltMode};
use adiabatic_dbr::tmm::{slice_positions, spec_spectrum};
use adiabatic_dbr::{DbrSpec, Polarization, Result, SpectralGrid};

fn main() -> Result<()> {
    let spec = DbrSpec::ict(400.0, 200.0, 21, 0.05, 32);
    for m in [0, 10, 20] {
        println!("cell {m:2}: tilt {:.4} deg", tilt_profile(&spec, m)?);
    }

    let y = slice_positions(spec.slice_count);
    for &yk in [y[0], y[y.len() - 1]].iter() {
        let cells = ict_slice_cells(&spec, yk)?;
        let (lo, hi) = cells
            .iter()
            .fold((f64::MAX, f64::MIN), |(lo, hi), c| (lo.min(c.d1), hi.max(c.d1)));
        println!("slice y = {yk:.4}: d1 spans {lo:.3}-{hi:.3} nm");
    }

    let geometric = spec.clone().with_tilt_mode(TiltMode::Geometric { h: 4000.0, l: 10.0 });
    println!("geometric tilt at cell 0: {:.4} deg", tilt_profile(&geometric, 0)?);

    let grid = SpectralGrid::default_grid();
    let ict = spec_spectrum(&spec, &grid, 0.0, Polarization::TE)?;
    let flat = spec_spectrum(&spec.untilted(), &grid, 0.0, Polarization::TE)?;
    let rep = compare(&ict, &flat, DEFAULT_DROP_FRACTION)?;
    println!("broadening against the untilted stack: {:+.3} nm", rep.broadening_nm);
    Ok(())
}
