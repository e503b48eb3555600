pub mod forward;
pub mod inverse;
pub mod roundtrip;
pub mod validate;

use std::path::Path;

use msl::Error;

/// Map library errors onto the documented exit codes: 4 for schema/input
/// problems, 3 for numerical failures.
pub fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Json(_)
        | Error::InvalidData { .. }
        | Error::DimensionMismatch { .. }
        | Error::NotHermitian { .. }
        | Error::NotNormalized { .. }
        | Error::Io(_) => 4,
        Error::IntegrationDiverged { .. }
        | Error::GridTooCoarse { .. }
        | Error::NearPole { .. }
        | Error::LocalizationFailure { .. }
        | Error::ContourNotConverged { .. }
        | Error::IllConditioned { .. } => 3,
    }
}

/// Write a serializable value as canonical JSON to a file or stdout.
pub fn emit<T: serde::Serialize>(value: &T, path: Option<&Path>) -> msl::Result<()> {
    let text = msl::io::to_json_string(value)?;
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

pub fn read_json<T: for<'a> serde::Deserialize<'a>>(path: &Path) -> msl::Result<T> {
    let text = std::fs::read_to_string(path)?;
    msl::io::from_json_str(&text)
}
