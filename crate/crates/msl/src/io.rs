//! JSON schemas for problems, spectral data, and validation reports.
//!
//! Complex numbers are `[re, im]` pairs; matrices are row-major nested
//! arrays of pairs. Floats are emitted with 17 significant digits so that
//! values round-trip exactly and outputs are byte-stable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{Potential, Term};
use crate::problem::{OmegaClass, Problem};
use crate::spectral::SpectralData;
use crate::validator::{ValidationReport, VerificationReport};
use crate::{CMatrix, Complex};

pub type ComplexPair = [f64; 2];
pub type MatrixJson = Vec<Vec<ComplexPair>>;

pub fn matrix_to_json(a: &CMatrix) -> MatrixJson {
    (0..a.nrows())
        .map(|r| (0..a.ncols()).map(|c| [a[(r, c)].re, a[(r, c)].im]).collect())
        .collect()
}

pub fn matrix_from_json(j: &MatrixJson, m: usize, path: &str) -> Result<CMatrix> {
    if j.len() != m || j.iter().any(|row| row.len() != m) {
        return Err(Error::invalid(path, format!("expected a {m} x {m} matrix")));
    }
    let mut a = CMatrix::zeros(m, m);
    for (r, row) in j.iter().enumerate() {
        for (c, z) in row.iter().enumerate() {
            if !z[0].is_finite() || !z[1].is_finite() {
                return Err(Error::invalid(
                    format!("{path}/{r}/{c}"),
                    "matrix entries must be finite",
                ));
            }
            a[(r, c)] = Complex::new(z[0], z[1]);
        }
    }
    Ok(a)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TermJson {
    Poly { coeff: ComplexPair, degree: u32 },
    Cos { coeff: ComplexPair, freq: f64 },
    Sin { coeff: ComplexPair, freq: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialJson {
    /// Entry `(j, k)` is the sum of `terms[j][k]`.
    ClosedForm { terms: Vec<Vec<Vec<TermJson>>> },
    /// `points` samples on the uniform grid of `[0, pi]`, inclusive.
    Grid { points: usize, values: Vec<MatrixJson> },
}

/// On-disk form of a boundary value problem.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemJson {
    pub m: usize,
    pub h: MatrixJson,
    #[serde(rename = "H")]
    pub h_pi: MatrixJson,
    #[serde(rename = "Q")]
    pub q: PotentialJson,
    pub omega: Vec<f64>,
}

fn term_to_json(t: &Term) -> TermJson {
    match *t {
        Term::Poly { coeff, degree } => TermJson::Poly { coeff: [coeff.re, coeff.im], degree },
        Term::Cos { coeff, freq } => TermJson::Cos { coeff: [coeff.re, coeff.im], freq },
        Term::Sin { coeff, freq } => TermJson::Sin { coeff: [coeff.re, coeff.im], freq },
    }
}

fn term_from_json(t: &TermJson) -> Term {
    match *t {
        TermJson::Poly { coeff, degree } => {
            Term::Poly { coeff: Complex::new(coeff[0], coeff[1]), degree }
        }
        TermJson::Cos { coeff, freq } => {
            Term::Cos { coeff: Complex::new(coeff[0], coeff[1]), freq }
        }
        TermJson::Sin { coeff, freq } => {
            Term::Sin { coeff: Complex::new(coeff[0], coeff[1]), freq }
        }
    }
}

pub fn problem_to_json(p: &Problem) -> ProblemJson {
    let q = match p.potential() {
        Potential::ClosedForm { terms, .. } => PotentialJson::ClosedForm {
            terms: terms
                .iter()
                .map(|row| row.iter().map(|e| e.iter().map(term_to_json).collect()).collect())
                .collect(),
        },
        Potential::Grid { samples, .. } => PotentialJson::Grid {
            points: samples.len(),
            values: samples.iter().map(matrix_to_json).collect(),
        },
    };
    ProblemJson {
        m: p.m(),
        h: matrix_to_json(p.h()),
        h_pi: matrix_to_json(p.h_pi()),
        q,
        omega: p.omega().values().to_vec(),
    }
}

pub fn problem_from_json(j: &ProblemJson) -> Result<Problem> {
    let m = j.m;
    if m == 0 {
        return Err(Error::invalid("/m", "dimension must be positive"));
    }
    let h = matrix_from_json(&j.h, m, "/h")?;
    let h_pi = matrix_from_json(&j.h_pi, m, "/H")?;
    let potential = match &j.q {
        PotentialJson::ClosedForm { terms } => {
            if terms.len() != m || terms.iter().any(|row| row.len() != m) {
                return Err(Error::invalid("/Q/terms", format!("expected {m} x {m} entries")));
            }
            let t = terms
                .iter()
                .map(|row| row.iter().map(|e| e.iter().map(term_from_json).collect()).collect())
                .collect();
            Potential::closed_form(m, t)?
        }
        PotentialJson::Grid { points, values } => {
            if values.len() != *points {
                return Err(Error::invalid(
                    "/Q/values",
                    format!("expected {points} samples, got {}", values.len()),
                ));
            }
            let samples = values
                .iter()
                .enumerate()
                .map(|(i, v)| matrix_from_json(v, m, &format!("/Q/values/{i}")))
                .collect::<Result<Vec<_>>>()?;
            Potential::from_grid(samples)?
        }
    };
    if j.omega.len() != m {
        return Err(Error::invalid("/omega", format!("expected {m} values")));
    }
    let omega = OmegaClass::new(j.omega.clone())?;
    let (problem, _) = Problem::with_declared_omega(potential, h, h_pi, omega)?;
    Ok(problem)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralEntryJson {
    pub n: usize,
    /// 1-based channel index.
    pub q: usize,
    pub lambda: f64,
    pub alpha: MatrixJson,
}

/// On-disk form of spectral data; entries in ascending `(n, q)` order with
/// shared residues duplicated.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralDataJson {
    pub m: usize,
    pub omega: Vec<f64>,
    #[serde(rename = "N_max")]
    pub n_max: usize,
    pub entries: Vec<SpectralEntryJson>,
}

pub fn spectral_to_json(d: &SpectralData) -> SpectralDataJson {
    SpectralDataJson {
        m: d.m(),
        omega: d.omega().values().to_vec(),
        n_max: d.n_max(),
        entries: d
            .entries()
            .iter()
            .map(|e| SpectralEntryJson {
                n: e.n,
                q: e.q + 1,
                lambda: e.lambda,
                alpha: matrix_to_json(&e.alpha),
            })
            .collect(),
    }
}

pub fn spectral_from_json(j: &SpectralDataJson) -> Result<SpectralData> {
    let m = j.m;
    if m == 0 {
        return Err(Error::invalid("/m", "dimension must be positive"));
    }
    if j.omega.len() != m {
        return Err(Error::invalid("/omega", format!("expected {m} values")));
    }
    let omega = OmegaClass::new(j.omega.clone())?;
    let expected = (j.n_max + 1) * m;
    if j.entries.len() != expected {
        return Err(Error::invalid(
            "/entries",
            format!("expected {expected} entries for N_max = {}, got {}", j.n_max, j.entries.len()),
        ));
    }
    let mut lambda = vec![vec![f64::NAN; m]; j.n_max + 1];
    let mut alpha = vec![vec![CMatrix::zeros(m, m); m]; j.n_max + 1];
    let mut seen = vec![vec![false; m]; j.n_max + 1];
    for (i, e) in j.entries.iter().enumerate() {
        let path = format!("/entries/{i}");
        if e.n > j.n_max {
            return Err(Error::invalid(format!("{path}/n"), format!("n must be <= {}", j.n_max)));
        }
        if e.q == 0 || e.q > m {
            return Err(Error::invalid(format!("{path}/q"), format!("q must be in 1..={m}")));
        }
        let q = e.q - 1;
        if seen[e.n][q] {
            return Err(Error::invalid(path, format!("duplicate entry (n={}, q={})", e.n, e.q)));
        }
        seen[e.n][q] = true;
        lambda[e.n][q] = e.lambda;
        alpha[e.n][q] = matrix_from_json(&e.alpha, m, &format!("{path}/alpha"))?;
    }
    SpectralData::new(omega, lambda, alpha)
}

/// On-disk validation report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReportJson {
    pub condition1: String,
    pub condition2: String,
    pub condition3: String,
    pub accepted: bool,
    pub condition1_notes: Vec<String>,
    pub condition2_violation: Option<String>,
    pub condition3_notes: Vec<String>,
    /// Null-vector coefficients when condition 3 fails.
    pub witnesses: Vec<ComplexPair>,
    pub residuals: ResidualsJson,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct ResidualsJson {
    pub max_kappa: Option<f64>,
    pub max_kappa_group: Option<f64>,
    pub trend_slope: Option<f64>,
    pub det_margin: Option<f64>,
}

pub fn validation_to_json(r: &ValidationReport) -> ValidationReportJson {
    let finite = |v: f64| if v.is_finite() { Some(v) } else { None };
    ValidationReportJson {
        condition1: r.condition1.status.as_str().into(),
        condition2: r.condition2.status.as_str().into(),
        condition3: r.condition3.status.as_str().into(),
        accepted: r.accepted(),
        condition1_notes: r.condition1.notes.clone(),
        condition2_violation: r
            .condition2
            .violation
            .as_ref()
            .map(|(n, q, what)| format!("(n={n}, q={}): {what}", q + 1)),
        condition3_notes: r.condition3.notes.clone(),
        witnesses: r
            .condition3
            .witness
            .as_ref()
            .map(|w| w.iter().map(|z| [z.re, z.im]).collect())
            .unwrap_or_default(),
        residuals: ResidualsJson {
            max_kappa: finite(r.condition1.max_kappa),
            max_kappa_group: finite(r.condition1.max_kappa_group),
            trend_slope: finite(r.condition1.trend_slope),
            det_margin: r.condition3.det_margin,
        },
    }
}

/// On-disk verification report (data against a concrete problem).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationJson {
    pub max_self_residual: f64,
    pub max_cross_residual: f64,
    pub max_left_kernel: f64,
    pub flagged: Vec<String>,
}

pub fn verification_to_json(r: &VerificationReport) -> VerificationJson {
    VerificationJson {
        max_self_residual: r.max_self_residual,
        max_cross_residual: r.max_cross_residual,
        max_left_kernel: r.max_left_kernel,
        flagged: r
            .flagged
            .iter()
            .map(|(n, q, res)| format!("(n={n}, q={}): residual {res:.3e}", q + 1))
            .collect(),
    }
}

/// JSON formatter writing every float with 17 significant digits
/// (`d.dddddddddddddddde[sign]exp`), which round-trips `f64` exactly and
/// keeps outputs byte-stable.
struct SigDigits17 {
    indent: usize,
}

impl serde_json::ser::Formatter for SigDigits17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        if !value.is_finite() {
            return Err(std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                "cannot serialize a non-finite float",
            ));
        }
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.write_f64(writer, value as f64)
    }

    // Light pretty-printing: newline-separated top-level structure keeps
    // diffs readable without ballooning nested matrices.
    fn begin_array<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.indent += 1;
        writer.write_all(b"[")
    }

    fn end_array<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.indent -= 1;
        writer.write_all(b"]")
    }

    fn begin_object<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.indent += 1;
        writer.write_all(b"{")
    }

    fn end_object<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.indent -= 1;
        if self.indent == 0 {
            writer.write_all(b"}\n")
        } else {
            writer.write_all(b"}")
        }
    }

    fn begin_object_key<W>(&mut self, writer: &mut W, first: bool) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        if self.indent == 1 {
            if first {
                writer.write_all(b"\n  ")
            } else {
                writer.write_all(b",\n  ")
            }
        } else if first {
            Ok(())
        } else {
            writer.write_all(b",")
        }
    }

    fn begin_array_value<W>(&mut self, writer: &mut W, first: bool) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        if !first {
            writer.write_all(b",")
        } else {
            Ok(())
        }
    }
}

/// Serialize with 17-significant-digit floats.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits17 { indent: 0 });
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json emits utf-8"))
}

/// Deserialize from a JSON string.
pub fn from_json_str<'a, T: Deserialize<'a>>(s: &'a str) -> Result<T> {
    Ok(serde_json::from_str(s)?)
}
