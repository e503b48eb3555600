// scratch: why is fleet data rejected?
use msl::forward::assemble_spectral_data;
use msl::inverse::model_spectral_data;
use msl::potential::{Potential, Term};
use msl::problem::{OmegaClass, Problem};
use msl::validator::validate;
use msl::{CMatrix, Complex};
use std::f64::consts::PI;

fn c(x: f64) -> Complex { Complex::new(x, 0.0) }

fn main() {
    for (name, problem, n) in [
        ("free", Problem::new(Potential::zero(1), CMatrix::zeros(1,1), CMatrix::zeros(1,1)).unwrap(), 20usize),
        ("model2x2", Problem::model(&OmegaClass::new(vec![0.0, PI/2.0]).unwrap()), 16),
    ] {
        let data = assemble_spectral_data(&problem, n).unwrap();
        let rep = validate(&data);
        println!("{name}: c1={:?} c2={:?} c3={:?} n0={:?} margin={:?}", rep.condition1.status, rep.condition2.status, rep.condition3.status, rep.condition3.n0, rep.condition3.det_margin);
        if let Some((n,q,w)) = rep.condition2.violation { println!("  violation ({n},{q}): {w}"); }
        for note in &rep.condition3.notes { println!("  note: {note}"); }
        println!("  c1 notes: {:?} max_kappa {:.2e} slope {:.3}", rep.condition1.notes, rep.condition1.max_kappa, rep.condition1.trend_slope);
    }
    // cos scalar
    let q = Potential::closed_form(1, vec![vec![vec![Term::Cos { coeff: c(1.0), freq: 1.0 }]]]).unwrap();
    let p = Problem::new(q, CMatrix::zeros(1,1), CMatrix::zeros(1,1)).unwrap();
    let data = assemble_spectral_data(&p, 20).unwrap();
    let rep = validate(&data);
    println!("cos: c1={:?} c3={:?} notes={:?}", rep.condition1.status, rep.condition3.status, rep.condition3.notes);
    let model = model_spectral_data(&OmegaClass::new(vec![0.0, PI/2.0]).unwrap(), 20);
    let repm = validate(&model);
    println!("model-data по: c3={:?} n0={:?}", repm.condition3.status, repm.condition3.n0);
}
