use std::path::Path;
use std::process::ExitCode;

use msl::io;
use msl::validator::validate;

pub fn run(data_path: &Path, output: Option<&Path>) -> msl::Result<ExitCode> {
    let data_json: io::SpectralDataJson = super::read_json(data_path)?;
    let data = io::spectral_from_json(&data_json)?;
    let report = validate(&data);
    super::emit(&io::validation_to_json(&report), output)?;
    if report.accepted() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(2))
    }
}
