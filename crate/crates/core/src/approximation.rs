//! Local approximation of exact solutions by Taylor matching, and error/convergence measurement.

use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::construct::{build_basis, plane_wave_basis, q_for, BasisFunction, Family};
use crate::error::{Error, Result};
use crate::eval::{assemble_matrix, evaluate_with_gradient, BasisMatrix};
use crate::exact::{solution_taylor, solution_value_gradient, CaseId, TestCase};
use crate::linalg::{normal_condition, solve_normal_equations, solve_qr, Solve};
use crate::multiindex::count_up_to;
use crate::taylor::TaylorTable;

/// Errors outside this window are ignored by slope fits.
pub const FIT_WINDOW: (f64, f64) = (1e-13, 1e-2);
/// Directions per radius used on each ball.
pub const DEFAULT_SAMPLES: usize = 64;

/// The four kinds of basis compared in the experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisKind {
    Amplitude,
    Phase,
    Polynomial,
    /// Classical plane waves, only meaningful for constant coefficients.
    PlaneWave,
}

impl BasisKind {
    pub const ALL: [BasisKind; 4] = [BasisKind::Amplitude, BasisKind::Phase, BasisKind::Polynomial, BasisKind::PlaneWave];

    /// Column prefix in data files.
    pub fn column(self) -> &'static str {
        match self {
            BasisKind::Amplitude => "errAbG",
            BasisKind::Phase => "errPbG",
            BasisKind::Polynomial => "errPst",
            BasisKind::PlaneWave => "errPWf",
        }
    }

    pub fn parse(s: &str) -> Option<BasisKind> {
        match s.to_ascii_lowercase().as_str() {
            "amplitude" | "abg" => Some(BasisKind::Amplitude),
            "phase" | "pbg" => Some(BasisKind::Phase),
            "polynomial" | "pst" | "poly" => Some(BasisKind::Polynomial),
            "pw" | "planewave" | "plane-wave" => Some(BasisKind::PlaneWave),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BasisKind::Amplitude => "amplitude",
            BasisKind::Phase => "phase",
            BasisKind::Polynomial => "polynomial",
            BasisKind::PlaneWave => "pw",
        }
    }
}

/// Basis of the given kind for `tc` at `center`.
pub fn case_basis(tc: &TestCase, kind: BasisKind, n: usize, center: [f64; 3]) -> Result<Vec<BasisFunction>> {
    let coeffs = tc.operator(center, q_for(n) + 1);
    match kind {
        BasisKind::Amplitude => build_basis(&coeffs, n, Family::Amplitude, None),
        BasisKind::Phase => build_basis(&coeffs, n, Family::Phase, None),
        BasisKind::Polynomial => build_basis(&coeffs, n, Family::Polynomial, None),
        BasisKind::PlaneWave => {
            if tc.id != CaseId::Tc1 {
                return Err(Error::Config("plane waves are only offered for tc1".into()));
            }
            Ok(plane_wave_basis(center, n, tc.kappa))
        }
    }
}

/// `F_{N(i)} = T_u[i]` for `|i| <= n`.
pub fn solution_rhs(u: &TaylorTable, n: usize) -> Result<DVector<Complex64>> {
    if u.order() < n {
        return Err(Error::OrderTooLow { needed: n, have: u.order() });
    }
    Ok(DVector::from_column_slice(&u.as_slice()[..count_up_to(n)]))
}

/// Weights from the normal equations.
pub fn fit(m: &BasisMatrix, f: &DVector<Complex64>) -> Solve {
    solve_normal_equations(&m.entries, f)
}

/// Weights from a QR factorization of `M`, falling back to the normal equations
/// when `M` is rank deficient.
pub fn fit_qr(m: &BasisMatrix, f: &DVector<Complex64>) -> Solve {
    solve_qr(&m.entries, f).filter(|s| s.x.iter().all(|v| v.is_finite())).unwrap_or_else(|| fit(m, f))
}

pub fn condition_number(m: &BasisMatrix) -> f64 {
    normal_condition(&m.entries)
}

/// Deterministic sample points: the center plus a Fibonacci sphere of
/// `samples` directions at radii `h`, `h/2`, `h/4`.
pub fn ball_points(center: [f64; 3], h: f64, samples: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut pts = vec![center];
    for r in [h, h / 2.0, h / 4.0] {
        for k in 0..samples {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / samples as f64;
            let rho = (1.0 - z * z).sqrt();
            let a = golden * k as f64;
            pts.push([center[0] + r * rho * a.cos(), center[1] + r * rho * a.sin(), center[2] + r * z]);
        }
    }
    pts
}

fn combination(basis: &[BasisFunction], w: &DVector<Complex64>, x: [f64; 3]) -> (Complex64, [Complex64; 3]) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut g = [v; 3];
    for (b, &c) in basis.iter().zip(w.iter()) {
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let (bv, bg) = evaluate_with_gradient(b, x);
        v += c * bv;
        for k in 0..3 {
            g[k] += c * bg[k];
        }
    }
    (v, g)
}

/// `max |u - Σ w_l b_l|` over the sample points of the ball of radius `h`.
pub fn max_error_on_ball(
    u: &dyn Fn([f64; 3]) -> Complex64,
    basis: &[BasisFunction],
    weights: &DVector<Complex64>,
    center: [f64; 3],
    h: f64,
    samples: usize,
) -> f64 {
    ball_points(center, h, samples)
        .into_iter()
        .map(|x| (u(x) - combination(basis, weights, x).0).norm())
        .fold(0.0, f64::max)
}

/// Same as [`max_error_on_ball`] for the Euclidean norm of the gradient error.
pub fn gradient_error_on_ball(
    grad: &dyn Fn([f64; 3]) -> [Complex64; 3],
    basis: &[BasisFunction],
    weights: &DVector<Complex64>,
    center: [f64; 3],
    h: f64,
    samples: usize,
) -> f64 {
    ball_points(center, h, samples)
        .into_iter()
        .map(|x| {
            let g = grad(x);
            let a = combination(basis, weights, x).1;
            (0..3).map(|k| (g[k] - a[k]).norm_sqr()).sum::<f64>().sqrt()
        })
        .fold(0.0, f64::max)
}

/// Consecutive window points whose local slope falls below this value mark
/// the start of the round-off plateau.
pub const MIN_LOCAL_SLOPE: f64 = 0.5;

/// Errors within this factor of a repeated minimum count as the round-off plateau.
pub const PLATEAU_MARGIN: f64 = 2.0;

/// Least-squares slope of `log err` against `log h`.
///
/// Only errors inside [`FIT_WINDOW`] are used, and of those only the run from
/// the largest `h` down to the first stall (local slope below
/// [`MIN_LOCAL_SLOPE`]). If the sequence levels off, with two or more errors
/// within [`PLATEAU_MARGIN`] of the smallest, those errors are dropped too.
pub fn fit_convergence_order(h: &[f64], err: &[f64]) -> Result<f64> {
    let mut window: Vec<(f64, f64)> = h
        .iter()
        .zip(err)
        .filter(|(&hh, &e)| hh > 0.0 && e > FIT_WINDOW.0 && e < FIT_WINDOW.1)
        .map(|(&hh, &e)| (hh.ln(), e.ln()))
        .collect();
    window.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut run: Vec<(f64, f64)> = Vec::with_capacity(window.len());
    for p in window {
        if let Some(last) = run.last() {
            if (last.1 - p.1) < MIN_LOCAL_SLOPE * (last.0 - p.0) {
                break;
            }
        }
        run.push(p);
    }
    let floor = err.iter().copied().filter(|e| e.is_finite() && *e > 0.0).fold(f64::INFINITY, f64::min);
    let plateau = err.iter().filter(|&&e| e <= PLATEAU_MARGIN * floor).count() >= 2;
    let cut = if plateau { (PLATEAU_MARGIN * floor).ln() } else { f64::NEG_INFINITY };
    let pts: Vec<(f64, f64)> = run.into_iter().filter(|p| p.1 > cut).collect();
    if pts.len() < 3 {
        return Err(Error::TooFewPoints(pts.len()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Result of one local approximation at one center.
#[derive(Clone, Debug)]
pub struct LocalFit {
    pub basis: Vec<BasisFunction>,
    pub matrix: BasisMatrix,
    pub solve: Solve,
}

/// Build the basis at `center`, match the Taylor expansion of the exact solution up to order `n`.
pub fn local_fit(tc: &TestCase, kind: BasisKind, n: usize, center: [f64; 3]) -> Result<LocalFit> {
    let basis = case_basis(tc, kind, n, center)?;
    let matrix = assemble_matrix(&basis, n)?;
    let f = solution_rhs(&solution_taylor(tc, center, n)?, n)?;
    let solve = fit(&matrix, &f);
    Ok(LocalFit { basis, matrix, solve })
}

/// Worst-over-centers errors of one basis kind and order.
#[derive(Clone, Debug)]
pub struct ApproxReport {
    pub case: CaseId,
    pub kind: BasisKind,
    pub n: usize,
    pub h: Vec<f64>,
    pub max_errors: Vec<f64>,
    pub gradient_errors: Vec<f64>,
    /// Worst condition number of `MᴴM` over the centers.
    pub cond: f64,
    /// Number of centers where the normal matrix had to be truncated.
    pub truncated: usize,
    pub fitted_order: Option<f64>,
    pub gradient_order: Option<f64>,
}

/// Run the approximation at every center (in parallel) and aggregate worst-case errors per `h`.
pub fn approximation_report(tc: &TestCase, kind: BasisKind, n: usize, centers: &[[f64; 3]], h: &[f64], samples: usize) -> Result<ApproxReport> {
    let per_center: Vec<(Vec<f64>, Vec<f64>, f64, bool)> = centers
        .par_iter()
        .map(|&c| {
            let lf = local_fit(tc, kind, n, c)?;
            let u = |x: [f64; 3]| solution_value_gradient(tc, x).map(|v| v.0).unwrap_or(Complex64::new(f64::NAN, 0.0));
            let g = |x: [f64; 3]| solution_value_gradient(tc, x).map(|v| v.1).unwrap_or([Complex64::new(f64::NAN, 0.0); 3]);
            let e: Vec<f64> = h.iter().map(|&hh| max_error_on_ball(&u, &lf.basis, &lf.solve.x, c, hh, samples)).collect();
            let ge: Vec<f64> = h.iter().map(|&hh| gradient_error_on_ball(&g, &lf.basis, &lf.solve.x, c, hh, samples)).collect();
            Ok((e, ge, condition_number(&lf.matrix), lf.solve.truncated()))
        })
        .collect::<Result<_>>()?;
    let worst = |sel: &dyn Fn(&(Vec<f64>, Vec<f64>, f64, bool)) -> &Vec<f64>| -> Vec<f64> {
        (0..h.len()).map(|k| per_center.iter().map(|r| sel(r)[k]).fold(0.0, f64::max)).collect()
    };
    let max_errors = worst(&|r| &r.0);
    let gradient_errors = worst(&|r| &r.1);
    let cond = per_center.iter().map(|r| r.2).fold(0.0, f64::max);
    let truncated = per_center.iter().filter(|r| r.3).count();
    Ok(ApproxReport {
        case: tc.id,
        kind,
        n,
        h: h.to_vec(),
        fitted_order: fit_convergence_order(h, &max_errors).ok(),
        gradient_order: fit_convergence_order(h, &gradient_errors).ok(),
        max_errors,
        gradient_errors,
        cond,
        truncated,
    })
}

/// `h_k = 2·4^{-k}`, `k = 0..count-1`.
pub fn h_grid(count: usize) -> Vec<f64> {
    (0..count).map(|k| 2.0 * 4f64.powi(-(k as i32))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_examples() {
        let h = h_grid(6);
        let e: Vec<f64> = h.iter().map(|x| x * x * 1e-3).collect();
        assert!((fit_convergence_order(&h, &e).unwrap() - 2.0).abs() < 1e-12);
        let floor = vec![1e-16; 6];
        assert!(matches!(fit_convergence_order(&h, &floor), Err(Error::TooFewPoints(0))));
        // decay h^3 that levels off at 2e-12 with jitter
        let e: Vec<f64> = h_grid(12).iter().enumerate().map(|(k, x)| (x.powi(3) * 1e-3).max(2e-12 * (1.0 + 0.3 * (k % 2) as f64))).collect();
        assert!((fit_convergence_order(&h_grid(12), &e).unwrap() - 3.0).abs() < 0.05);
    }

    #[test]
    fn ball_has_center_and_radii() {
        let p = ball_points([1.0, 2.0, 3.0], 0.5, 10);
        assert_eq!(p.len(), 31);
        assert_eq!(p[0], [1.0, 2.0, 3.0]);
        let r = |x: [f64; 3]| ((x[0] - 1.0).powi(2) + (x[1] - 2.0).powi(2) + (x[2] - 3.0).powi(2)).sqrt();
        assert!((r(p[1]) - 0.5).abs() < 1e-14);
        assert!((r(p[30]) - 0.125).abs() < 1e-14);
    }

    #[test]
    fn rhs_length() {
        let u = TaylorTable::constant([0.0; 3], 3, Complex64::new(1.0, 0.0));
        let f = solution_rhs(&u, 3).unwrap();
        assert_eq!(f.len(), 20);
        assert_eq!(f[0], Complex64::new(1.0, 0.0));
        assert!(f.iter().skip(1).all(|v| *v == Complex64::new(0.0, 0.0)));
    }
}
