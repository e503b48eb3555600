//! Eigenvalue localization: a real-axis scan of the characteristic function
//! backed by argument-principle winding counts on small complex circles.
//!
//! For a self-adjoint problem `Delta(lambda)` is real on the real axis, so
//! sign changes bracket odd-order zeros; even-order zeros (touching minima
//! of `|Delta|`) and unresolved near-pairs are caught by winding counts.
//! First and second log-derivative contour moments recover the position of
//! multiple roots and split resolvable pairs.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operator::Evaluator;
use crate::problem::Problem;
use crate::Complex;

/// Relative tolerance under which two located roots are one eigenvalue.
pub const MERGE_TOL: f64 = 1e-8;

/// A located eigenvalue.
#[derive(Debug, Clone, Copy)]
pub struct LocatedRoot {
    pub lambda: f64,
    pub multiplicity: usize,
}

/// All zeros of the characteristic function below `(n_max + 1/2)^2`, with
/// multiplicities; the total count must be `(n_max + 1) m`.
pub fn locate_eigenvalues(problem: &Problem, n_max: usize) -> Result<Vec<(f64, usize)>> {
    let ev = Evaluator::new(problem, crate::grid::Grid::default_forward());
    Ok(locate_with_evaluator(&ev, n_max)?
        .into_iter()
        .map(|r| (r.lambda, r.multiplicity))
        .collect())
}

pub(crate) fn locate_with_evaluator(ev: &Evaluator, n_max: usize) -> Result<Vec<LocatedRoot>> {
    let problem = ev.problem();
    let m = problem.m();
    let expected = (n_max + 1) * m;
    let cutoff = (n_max as f64 + 0.5).powi(2);

    let omega_min = problem.omega().values().first().copied().unwrap_or(0.0);
    let q_scale = potential_scale(problem);
    let mut lambda_min = (2.0 * omega_min / std::f64::consts::PI - 1.0 - q_scale).min(-1.0);

    let mut density = 1.0;
    for attempt in 0..4 {
        let roots = scan_and_resolve(ev, lambda_min, cutoff, density)?;
        let found: usize = roots.iter().map(|r| r.multiplicity).sum();
        if found == expected {
            return Ok(roots);
        }
        if found < expected {
            // Either the window is too short at the bottom or the scan too
            // coarse; extend first, then densify.
            if attempt == 0 {
                lambda_min = lambda_min * 2.0 - 5.0;
            } else {
                density *= 2.0;
            }
        } else {
            // Over-count means spurious splits; densify to disambiguate.
            density *= 2.0;
        }
        if attempt == 3 {
            return Err(Error::LocalizationFailure {
                lo: lambda_min,
                hi: cutoff,
                expected,
                found,
            });
        }
    }
    unreachable!()
}

fn potential_scale(problem: &Problem) -> f64 {
    let probes = 16;
    let q_max = (0..=probes)
        .map(|i| std::f64::consts::PI * i as f64 / probes as f64)
        .map(|x| crate::util::max_abs(&problem.potential().eval(x)))
        .fold(0.0, f64::max);
    q_max + 2.0 * (crate::util::max_abs(problem.h()) + crate::util::max_abs(problem.h_pi()))
}

/// Scan parameter `s`: `lambda = sign(s) s^2`, so the scan is uniform in
/// `rho` on the positive axis.
fn s_of_lambda(lambda: f64) -> f64 {
    lambda.signum() * lambda.abs().sqrt()
}

fn lambda_of_s(s: f64) -> f64 {
    s.signum() * s * s
}

fn scan_and_resolve(
    ev: &Evaluator,
    lambda_min: f64,
    cutoff: f64,
    density: f64,
) -> Result<Vec<LocatedRoot>> {
    let s_lo = s_of_lambda(lambda_min);
    let s_hi = s_of_lambda(cutoff);
    let ds = (1.0 / 128.0) / density;
    let count = ((s_hi - s_lo) / ds).ceil() as usize + 1;
    let svals: Vec<f64> = (0..count).map(|i| s_lo + (s_hi - s_lo) * i as f64 / (count - 1) as f64).collect();
    let dvals: Vec<f64> = svals
        .par_iter()
        .map(|&s| ev.char_fn(Complex::new(lambda_of_s(s), 0.0)).map(|d| d.re))
        .collect::<Result<Vec<_>>>()?;

    // Candidates: sign-change brackets and small touching minima of |Delta|.
    let mut candidates: Vec<f64> = Vec::new();
    for i in 0..count - 1 {
        if dvals[i] == 0.0 {
            candidates.push(lambda_of_s(svals[i]));
        } else if dvals[i] * dvals[i + 1] < 0.0 {
            let root = bisect(ev, lambda_of_s(svals[i]), lambda_of_s(svals[i + 1]), dvals[i])?;
            candidates.push(root);
        }
    }
    // Interior local minima of |Delta| without a sign change nearby.
    for i in 1..count - 1 {
        let (a, b, c) = (dvals[i - 1].abs(), dvals[i].abs(), dvals[i + 1].abs());
        if b <= a && b <= c && dvals[i - 1] * dvals[i] > 0.0 && dvals[i] * dvals[i + 1] > 0.0 {
            // Parabolic estimate of the minimum value; only deep dips are
            // candidate even-order zeros.
            let local_scale = local_scale(&dvals, i);
            let denom = a - 2.0 * b + c;
            let (v_min, t) = if denom.abs() > 1e-300 {
                let t = 0.5 * (a - c) / denom;
                (b - 0.125 * (a - c) * (a - c) / denom, t.clamp(-1.0, 1.0))
            } else {
                (b, 0.0)
            };
            if v_min < 1e-3 * local_scale {
                let s_est = svals[i] + t * ds;
                candidates.push(lambda_of_s(s_est));
            }
        }
    }
    if dvals.last().copied() == Some(0.0) {
        candidates.push(lambda_of_s(*svals.last().unwrap()));
    }
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    candidates.dedup_by(|a, b| (*a - *b).abs() <= merge_dist(*b));

    // Confirm and resolve every candidate by a winding count.
    let ds_lambda = |l: f64| 2.0 * l.abs().sqrt().max(0.5) * ds;
    let resolved: Vec<Vec<LocatedRoot>> = candidates
        .par_iter()
        .enumerate()
        .map(|(i, &lam)| {
            let mut radius = 3.0 * ds_lambda(lam);
            if i > 0 {
                radius = radius.min(0.45 * (lam - candidates[i - 1]).abs());
            }
            if i + 1 < candidates.len() {
                radius = radius.min(0.45 * (candidates[i + 1] - lam).abs());
            }
            resolve_candidate(ev, lam, radius.max(1e-7), 0)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut roots: Vec<LocatedRoot> = resolved.into_iter().flatten().collect();
    roots.sort_by(|a, b| a.lambda.partial_cmp(&b.lambda).unwrap());
    // Merge coincident positions.
    let mut merged: Vec<LocatedRoot> = Vec::new();
    for r in roots {
        if let Some(last) = merged.last_mut() {
            if (r.lambda - last.lambda).abs() <= merge_dist(last.lambda) {
                let w = (last.multiplicity + r.multiplicity) as f64;
                last.lambda = (last.lambda * last.multiplicity as f64
                    + r.lambda * r.multiplicity as f64)
                    / w;
                last.multiplicity += r.multiplicity;
                continue;
            }
        }
        merged.push(r);
    }
    merged.retain(|r| r.lambda < cutoff);
    Ok(merged)
}

fn merge_dist(lambda: f64) -> f64 {
    MERGE_TOL * lambda.abs().max(1.0)
}

fn local_scale(dvals: &[f64], i: usize) -> f64 {
    let lo = i.saturating_sub(8);
    let hi = (i + 9).min(dvals.len());
    dvals[lo..hi].iter().fold(0.0f64, |a, v| a.max(v.abs()))
}

/// Bracketed root polish: bisection with a secant acceleration step.
fn bisect(ev: &Evaluator, mut lo: f64, mut hi: f64, f_lo_sign: f64) -> Result<f64> {
    let mut f_lo = f_lo_sign;
    let eval = |l: f64| -> Result<f64> { Ok(ev.char_fn(Complex::new(l, 0.0))?.re) };
    let mut f_hi = eval(hi)?;
    for _ in 0..80 {
        let width = hi - lo;
        if width <= 1e-13 * hi.abs().max(1.0) {
            break;
        }
        // Secant proposal, clamped into the central 80% of the bracket.
        let mut mid = if (f_hi - f_lo).abs() > 1e-300 {
            lo - f_lo * width / (f_hi - f_lo)
        } else {
            0.5 * (lo + hi)
        };
        let margin = 0.1 * width;
        if !(lo + margin..hi - margin).contains(&mid) {
            mid = 0.5 * (lo + hi);
        }
        let f_mid = eval(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_lo * f_mid < 0.0 {
            hi = mid;
            f_hi = f_mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Winding count and log-derivative moments on a circle. Returns
/// `(winding, sum of roots, sum of squared roots)`.
///
/// With the winding `w` split off, `log Delta = i w theta + phi(theta)`
/// with `phi` periodic and smooth; integrating the moments by parts
/// reduces them to plain trapezoid sums of `phi`, which converge
/// geometrically:
/// `s1 = w c - (r/P) sum_k e^{i theta_k} phi_k`,
/// `s2 = w c^2 - (2r/P) sum_k z_k e^{i theta_k} phi_k`.
fn contour_moments(
    ev: &Evaluator,
    center: f64,
    radius: f64,
) -> Result<Option<(i64, Complex, Complex)>> {
    let c = Complex::new(center, 0.0);
    let mut nodes = 64usize;
    loop {
        let thetas: Vec<f64> = (0..nodes)
            .map(|k| 2.0 * std::f64::consts::PI * k as f64 / nodes as f64)
            .collect();
        let zs: Vec<Complex> = thetas
            .iter()
            .map(|&th| c + Complex::new(radius * th.cos(), radius * th.sin()))
            .collect();
        let fs: Vec<Complex> = zs
            .par_iter()
            .map(|&z| ev.char_fn(z))
            .collect::<Result<Vec<_>>>()?;
        let fmax = fs.iter().map(|f| f.norm()).fold(0.0, f64::max);
        if fs.iter().any(|f| f.norm() < 1e-13 * fmax) || fmax == 0.0 {
            // A zero (nearly) on the contour; caller should adjust.
            return Ok(None);
        }
        // Unwrap the phase; segments must stay well below pi.
        let mut cum_arg = vec![0.0; nodes + 1];
        let mut ok = true;
        for k in 0..nodes {
            let k1 = (k + 1) % nodes;
            let darg = (fs[k1] / fs[k]).arg();
            if darg.abs() > 0.5 * std::f64::consts::PI {
                ok = false;
                break;
            }
            cum_arg[k + 1] = cum_arg[k] + darg;
        }
        if ok {
            let w = cum_arg[nodes] / (2.0 * std::f64::consts::PI);
            let wr = w.round();
            if (w - wr).abs() <= 0.05 {
                let wi = wr as i64;
                let mut t1 = Complex::new(0.0, 0.0);
                let mut t2 = Complex::new(0.0, 0.0);
                for k in 0..nodes {
                    let phi = Complex::new(
                        fs[k].norm().ln(),
                        cum_arg[k] + fs[0].arg() - wr * thetas[k],
                    );
                    let e = Complex::new(thetas[k].cos(), thetas[k].sin());
                    t1 += e * phi;
                    t2 += zs[k] * e * phi;
                }
                let rp = radius / nodes as f64;
                let s1 = c * wr - t1 * rp;
                let s2 = c * c * wr - t2 * (2.0 * rp);
                return Ok(Some((wi, s1, s2)));
            }
        }
        nodes *= 2;
        if nodes > 1024 {
            return Ok(None);
        }
    }
}

/// Resolve one candidate position into zero or more roots inside a circle.
fn resolve_candidate(
    ev: &Evaluator,
    lambda: f64,
    radius: f64,
    depth: usize,
) -> Result<Vec<LocatedRoot>> {
    let mut r = radius;
    let mut moments = None;
    for _ in 0..4 {
        match contour_moments(ev, lambda, r)? {
            Some(m) => {
                moments = Some(m);
                break;
            }
            None => r *= 0.6,
        }
    }
    let Some((w, s1, s2)) = moments else {
        return Err(Error::LocalizationFailure {
            lo: lambda - radius,
            hi: lambda + radius,
            expected: 1,
            found: 0,
        });
    };
    if w <= 0 {
        return Ok(Vec::new());
    }
    let wf = w as f64;
    let mean = s1.re / wf;
    // Imaginary part of the centroid is quadrature noise for real spectra.
    let spread_sq = (s2 / wf - (s1 / wf) * (s1 / wf)).norm();
    let spread = spread_sq.sqrt();
    let noise_floor = 1e-7 * lambda.abs().max(1.0);
    if w >= 2 && spread > noise_floor.max(4.0 * merge_dist(mean)) && depth < 3 {
        // The second moment of a multiple root is pure quadrature noise
        // (the cancellation amplifies the tiny |Delta| on the contour), so
        // a nonzero spread does not yet prove a split. Discriminate with a
        // probe contour of half the spread around the centroid: a genuine
        // multiple root lies inside it, a separated pair misses it.
        let probe = contour_moments(ev, mean, 0.5 * spread)?;
        match probe {
            Some((0, _, _)) => {
                // Separated cluster: resolve each lobe.
                let sub_r = (0.9 * spread).min(r / 2.0);
                let mut out = resolve_candidate(ev, mean - spread, sub_r, depth + 1)?;
                out.extend(resolve_candidate(ev, mean + spread, sub_r, depth + 1)?);
                let got: usize = out.iter().map(|r| r.multiplicity).sum();
                if got == w as usize {
                    return Ok(out);
                }
                // Miscounted lobes: report the cluster merged.
            }
            Some((inner, _, _)) if inner == w => {
                // Everything sits inside the probe: one multiple root.
            }
            Some((inner, _, _)) if inner > 0 => {
                // Partial cluster: subdivide around the centroid.
                let sub_r = (2.5 * spread).min(r / 2.0);
                let mut out = resolve_candidate(ev, mean - spread, sub_r, depth + 1)?;
                out.extend(resolve_candidate(ev, mean + spread, sub_r, depth + 1)?);
                let got: usize = out.iter().map(|r| r.multiplicity).sum();
                if got == w as usize {
                    return Ok(out);
                }
            }
            // Probe contour unusable (|Delta| at the noise level): the
            // configuration is below resolution; keep the merged root.
            _ => {}
        }
    }
    Ok(vec![LocatedRoot { lambda: mean, multiplicity: w as usize }])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::Potential;
    use crate::problem::OmegaClass;
    use crate::util;
    use std::f64::consts::PI;

    #[test]
    fn free_scalar_eigenvalues() {
        let p = Problem::new(Potential::zero(1), util::zeros(1), util::zeros(1)).unwrap();
        let roots = locate_eigenvalues(&p, 3).unwrap();
        assert_eq!(roots.len(), 4);
        for (n, (lambda, mult)) in roots.iter().enumerate() {
            assert_eq!(*mult, 1);
            assert!(
                (*lambda - (n * n) as f64).abs() < 1e-9,
                "root {n}: {lambda}"
            );
        }
    }

    #[test]
    fn doubly_degenerate_free_matrix() {
        // Two identical decoupled channels: each eigenvalue has
        // multiplicity 2 and no sign change in Delta.
        let omega = OmegaClass::new(vec![0.0, 0.0]).unwrap();
        let p = Problem::model(&omega);
        let roots = locate_eigenvalues(&p, 2).unwrap();
        assert_eq!(roots.len(), 3);
        for (n, (lambda, mult)) in roots.iter().enumerate() {
            assert_eq!(*mult, 2, "lambda = {lambda}");
            assert!((*lambda - (n * n) as f64).abs() < 1e-8);
        }
    }

    #[test]
    fn collision_across_clusters() {
        // omega = diag(0, pi/2): spectrum {0, 1, 1, 2} for n <= 1.
        let omega = OmegaClass::new(vec![0.0, PI / 2.0]).unwrap();
        let p = Problem::model(&omega);
        let roots = locate_eigenvalues(&p, 1).unwrap();
        let flat: Vec<(f64, usize)> = roots;
        assert_eq!(flat.len(), 3);
        assert!((flat[0].0 - 0.0).abs() < 1e-9 && flat[0].1 == 1);
        assert!((flat[1].0 - 1.0).abs() < 1e-9 && flat[1].1 == 2, "{flat:?}");
        assert!((flat[2].0 - 2.0).abs() < 1e-9 && flat[2].1 == 1);
    }

    #[test]
    fn count_invariant_with_boundary_matrices() {
        // h, H shift eigenvalues but the count inside the contour is fixed.
        let mut h = util::zeros(1);
        h[(0, 0)] = Complex::new(0.3, 0.0);
        let mut hp = util::zeros(1);
        hp[(0, 0)] = Complex::new(-0.3, 0.0);
        let p = Problem::new(Potential::zero(1), h, hp).unwrap();
        let roots = locate_eigenvalues(&p, 5).unwrap();
        let total: usize = roots.iter().map(|r| r.1).sum();
        assert_eq!(total, 6);
    }
}
