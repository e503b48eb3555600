use std::path::Path;
use std::process::ExitCode;

use serde::Serialize;

use msl::forward::assemble_spectral_data_on;
use msl::inverse::{reconstruct, ReconstructOptions, ReconstructionResult};
use msl::io;
use msl::util;
use msl::{Grid, Problem};

pub struct Args<'a> {
    pub problem: &'a Path,
    pub n: usize,
    pub n_trunc: usize,
    pub grid_points: usize,
    pub x_points: usize,
    pub derivative: &'a str,
    pub output: Option<&'a Path>,
    pub csv: Option<&'a Path>,
}

#[derive(Serialize)]
struct PerTruncation {
    n_trunc: usize,
    q_l2_error: f64,
    q_sup_error: f64,
    h_error: f64,
    #[serde(rename = "H_error")]
    h_pi_error: f64,
}

#[derive(Serialize)]
struct Metrics {
    n: usize,
    per_n: Vec<PerTruncation>,
}

pub fn errors(rec: &ReconstructionResult, truth: &Problem) -> (f64, f64, f64, f64) {
    let h = rec.x_step;
    let mut l2 = 0.0;
    let mut sup: f64 = 0.0;
    for i in 0..rec.x_points() {
        let x = rec.x(i);
        let d = rec.problem.potential().eval(x) - truth.potential().eval(x);
        sup = sup.max(util::max_abs(&d));
        let w = if i == 0 || i + 1 == rec.x_points() { 0.5 } else { 1.0 };
        l2 += w * d.iter().map(|z| z.norm_sqr()).sum::<f64>();
    }
    (
        (l2 * h).sqrt(),
        sup,
        util::max_abs(&(rec.problem.h() - truth.h())),
        util::max_abs(&(rec.problem.h_pi() - truth.h_pi())),
    )
}

pub fn run(args: Args<'_>) -> msl::Result<ExitCode> {
    let problem_json: io::ProblemJson = super::read_json(args.problem)?;
    let problem = io::problem_from_json(&problem_json)?;
    let data = assemble_spectral_data_on(&problem, args.n, Grid::new(args.grid_points))?;
    // Convergence table over halved truncation orders, coarse to fine.
    let mut orders = vec![args.n_trunc];
    while *orders.last().unwrap() > 8 && orders.len() < 3 {
        orders.push(orders.last().unwrap() / 2);
    }
    orders.reverse();
    let mut per_n = Vec::new();
    let mut last: Option<ReconstructionResult> = None;
    for &nt in &orders {
        let opts = ReconstructOptions {
            n_trunc: nt.min(data.n_max()),
            x_points: args.x_points,
            derivative: crate::commands::inverse::parse_derivative(args.derivative)?,
            ..ReconstructOptions::default()
        };
        let rec = reconstruct(&data, &opts)?;
        let (q_l2_error, q_sup_error, h_error, h_pi_error) = errors(&rec, &problem);
        per_n.push(PerTruncation { n_trunc: nt, q_l2_error, q_sup_error, h_error, h_pi_error });
        last = Some(rec);
    }
    super::emit(&Metrics { n: args.n, per_n }, args.output)?;
    if let (Some(p), Some(rec)) = (args.csv, last.as_ref()) {
        crate::csvout::write_roundtrip_csv(p, rec, &problem)?;
    }
    Ok(ExitCode::SUCCESS)
}
