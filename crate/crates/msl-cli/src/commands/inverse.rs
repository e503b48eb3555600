use std::path::Path;
use std::process::ExitCode;

use serde::Serialize;

use msl::inverse::{reconstruct, DerivativePath, ModelStrategy, ReconstructOptions};
use msl::io;
use msl::validator::validate;

pub struct Args<'a> {
    pub data: &'a Path,
    pub n_trunc: usize,
    pub x_points: usize,
    pub derivative: &'a str,
    pub model: &'a str,
    pub skip_validation: bool,
    pub output: Option<&'a Path>,
    pub diagnostics: Option<&'a Path>,
    pub csv: Option<&'a Path>,
}

#[derive(Serialize)]
struct InverseDiagnostics {
    n_trunc: usize,
    x_points: usize,
    derivative: String,
    passes: usize,
    omega_weight: f64,
    xi: Vec<f64>,
    max_residual: f64,
    max_condition: f64,
    boundary_mismatch: f64,
    hermiticity_defect: f64,
    class_defect: f64,
    tail_ratio: f64,
    truncation_warning: bool,
    validation: io::ValidationReportJson,
}

pub fn parse_derivative(s: &str) -> msl::Result<DerivativePath> {
    match s {
        "analytic" => Ok(DerivativePath::Analytic),
        "fd" => Ok(DerivativePath::FiniteDifference),
        other => Err(msl::Error::InvalidData {
            path: "--derivative".into(),
            message: format!("expected 'analytic' or 'fd', got '{other}'"),
        }),
    }
}

fn parse_model(s: &str) -> msl::Result<ModelStrategy> {
    match s {
        "matched" => Ok(ModelStrategy::BoundaryMatched),
        "canonical" => Ok(ModelStrategy::Canonical),
        other => Err(msl::Error::InvalidData {
            path: "--model".into(),
            message: format!("expected 'matched' or 'canonical', got '{other}'"),
        }),
    }
}

pub fn run(args: Args<'_>) -> msl::Result<ExitCode> {
    let data_json: io::SpectralDataJson = super::read_json(args.data)?;
    let data = io::spectral_from_json(&data_json)?;
    let report = validate(&data);
    if !report.accepted() && !args.skip_validation {
        super::emit(&io::validation_to_json(&report), None)?;
        eprintln!("msl: spectral data failed validation (rerun with --skip-validation to force)");
        return Ok(ExitCode::from(2));
    }
    let n_trunc = if args.n_trunc > data.n_max() {
        log::warn!(
            "N-trunc {} exceeds the data range; clamping to {}",
            args.n_trunc,
            data.n_max()
        );
        data.n_max()
    } else {
        args.n_trunc
    };
    let opts = ReconstructOptions {
        n_trunc,
        x_points: args.x_points,
        derivative: parse_derivative(args.derivative)?,
        model: parse_model(args.model)?,
        ..ReconstructOptions::default()
    };
    let rec = reconstruct(&data, &opts)?;
    super::emit(&io::problem_to_json(&rec.problem), args.output)?;
    if let Some(p) = args.diagnostics {
        let d = &rec.diagnostics;
        super::emit(
            &InverseDiagnostics {
                n_trunc: d.n_trunc,
                x_points: args.x_points,
                derivative: args.derivative.into(),
                passes: d.passes,
                omega_weight: d.omega_weight,
                xi: d.xi.clone(),
                max_residual: d.max_residual,
                max_condition: d.max_condition,
                boundary_mismatch: if d.boundary_mismatch.is_finite() {
                    d.boundary_mismatch
                } else {
                    0.0
                },
                hermiticity_defect: d.hermiticity_defect,
                class_defect: d.class_defect,
                tail_ratio: d.tail_ratio,
                truncation_warning: d.truncation_warning,
                validation: io::validation_to_json(&report),
            },
            Some(p),
        )?;
    }
    if let Some(p) = args.csv {
        crate::csvout::write_inverse_csv(p, &rec)?;
    }
    Ok(ExitCode::SUCCESS)
}
