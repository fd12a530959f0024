use thiserror::Error;

pub type Result<T> = std::result::Result<T, DbrError>;

#[derive(Debug, Error)]
pub enum DbrError {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("cell {cell}: nonpositive layer thickness ({d1_nm} nm / {d2_nm} nm)")]
    NonpositiveLayer { cell: usize, d1_nm: f64, d2_nm: f64 },

    #[error("degenerate tilt in cell {cell}: interface would be parallel to the optical axis")]
    DegenerateTilt { cell: usize },

    #[error("angle {0} deg is outside [0, 90)")]
    InvalidAngle(f64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("zero-power mode amplitudes")]
    ZeroPower,

    #[error("singular boundary problem: |T22| = {0:e}")]
    SingularBoundary(f64),

    #[error("profile needs at least {needed} cells, got {got}")]
    ProfileTooShort { needed: usize, got: usize },

    #[error("spectra do not share a frequency grid")]
    GridMismatch,

    #[error("no band gap found in {0} spectrum")]
    NoBandGap(&'static str),

    #[error("band {lo_thz}-{hi_thz} THz: {reason}")]
    InvalidBand {
        lo_thz: f64,
        hi_thz: f64,
        reason: String,
    },

    #[error("invalid config field `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl DbrError {
    /// Short machine-readable tag, used in the CLI's error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            DbrError::InvalidSpec(_) | DbrError::NonpositiveLayer { .. } => "invalid_spec",
            DbrError::DegenerateTilt { .. } => "degenerate_tilt",
            DbrError::InvalidAngle(_) => "invalid_angle",
            DbrError::InvalidGrid(_) => "invalid_grid",
            DbrError::ZeroPower => "zero_power",
            DbrError::SingularBoundary(_) => "singular_boundary",
            DbrError::ProfileTooShort { .. } => "profile_too_short",
            DbrError::GridMismatch => "grid_mismatch",
            DbrError::NoBandGap(_) => "no_band_gap",
            DbrError::InvalidBand { .. } => "invalid_band",
            DbrError::InvalidConfig { .. } => "invalid_config",
            DbrError::UnknownPreset(_) => "unknown_preset",
            DbrError::Io(_) => "io",
            DbrError::Json(_) => "json",
            DbrError::Csv(_) => "csv",
        }
    }
}
