use std::path::Path;
use std::process::ExitCode;

use serde::Serialize;

use msl::forward::{assemble_with_report, asymptotics_report};
use msl::io;
use msl::Grid;

#[derive(Serialize)]
struct ForwardReport {
    max_alpha_asymmetry: f64,
    min_alpha_eigenvalue: f64,
    multiplicity_rank_mismatches: Vec<(f64, usize, usize)>,
    ambiguous_assignments: Vec<String>,
    kappa_trend_slope: f64,
    kappa_growing: bool,
    max_kappa: f64,
    kappa_l2_partial_sum: f64,
}

pub fn run(
    problem_path: &Path,
    n: usize,
    grid_points: usize,
    output: Option<&Path>,
    report_path: Option<&Path>,
) -> msl::Result<ExitCode> {
    let problem_json: io::ProblemJson = super::read_json(problem_path)?;
    let problem = io::problem_from_json(&problem_json)?;
    let (data, assembly) = assemble_with_report(&problem, n, Grid::new(grid_points))?;
    let asym = asymptotics_report(&data);
    super::emit(&io::spectral_to_json(&data), output)?;
    let report = ForwardReport {
        max_alpha_asymmetry: assembly.max_alpha_asymmetry,
        min_alpha_eigenvalue: assembly.min_alpha_eigenvalue,
        multiplicity_rank_mismatches: assembly.multiplicity_rank_mismatches.clone(),
        ambiguous_assignments: assembly.ambiguous_assignments.clone(),
        kappa_trend_slope: asym.trend_slope,
        kappa_growing: asym.growing,
        max_kappa: asym
            .kappa
            .iter()
            .flatten()
            .fold(0.0f64, |a, k| a.max(k.abs())),
        kappa_l2_partial_sum: asym.partial_l2_kappa.last().copied().unwrap_or(0.0),
    };
    if let Some(p) = report_path {
        super::emit(&report, Some(p))?;
    } else {
        log::info!(
            "forward: max |kappa| = {:.3e}, trend slope {:.3}, residue asymmetry {:.3e}",
            report.max_kappa,
            report.kappa_trend_slope,
            report.max_alpha_asymmetry
        );
    }
    if !assembly.multiplicity_rank_mismatches.is_empty() {
        log::warn!(
            "winding multiplicities and residue ranks disagree at {} eigenvalue(s)",
            assembly.multiplicity_rank_mismatches.len()
        );
    }
    Ok(ExitCode::SUCCESS)
}
