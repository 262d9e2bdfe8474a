//! Configuration ingestion, sweep orchestration, verification checks and the
//! CSV/JSON/SVG exporters behind the `flotilla` binary.

pub mod checks;
pub mod config;
pub mod export;
pub mod run;

use thiserror::Error;

pub use checks::CheckRecord;
pub use config::{CheckName, DeltaSpec, Resolved, RunConfig};
pub use export::{read_csv, render_svg, write_csv, ExportRecord, SvgBundle, REPORT_SCHEMA};
pub use run::{carousel_report, execute, write_outputs, CarouselReport, Report, RunOutput};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("check failed: {0}")]
    Check(String),

    #[error("numerical failure: {0}")]
    Numerical(flotilla::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) | CliError::Csv(_) => 2,
            CliError::Check(_) => 1,
            CliError::Numerical(_) => 3,
        }
    }
}

/// Solver and quadrature breakdowns abort a run; every other core error,
/// flat points included, is a property of the input and is reported as a
/// failed check.
pub fn is_numerical(e: &flotilla::Error) -> bool {
    use flotilla::Error::*;
    matches!(e, Solver(_) | Accuracy { .. } | SingularParametrization { .. } | UnsupportedOrder(_))
}
