//! Experiment drivers behind the command-line tool: convergence data,
//! conditioning tables, a self-check suite and basis dumps.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::approximation::{approximation_report, case_basis, condition_number, h_grid, ApproxReport, BasisKind, DEFAULT_SAMPLES};
use crate::construct::{basis_to_text, build_basis, generate_directions, q_for, BasisFunction, Family};
use crate::error::{Error, Result};
use crate::eval::{assemble_matrix, reference_matrix_e, reference_matrix_r};
use crate::exact::{solution_taylor, CaseId, TestCase, CENTER_SEED};
use crate::linalg::{numerical_rank, RANK_TOL};
use crate::multiindex::MultiIndex;
use crate::operator::{apply_operator_taylor, check_hypothesis, residual_magnitude};
use crate::pde::{coefficients_from_flow, PdeCoefficients};
use crate::taylor::TaylorTable;

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub case: TestCase,
    pub kinds: Vec<BasisKind>,
    pub n_range: Vec<usize>,
    /// Strictly decreasing ball radii.
    pub h: Vec<f64>,
    pub centers: usize,
    pub seed: u64,
    pub samples: usize,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// CI-sized defaults: `n <= 6`, 10 centers, `h_k = 2·4^{-k}` for `k = 0..10`.
    pub fn desk(case: CaseId) -> Self {
        let kinds = if case == CaseId::Tc1 {
            BasisKind::ALL.to_vec()
        } else {
            BasisKind::ALL[..3].to_vec()
        };
        RunConfig {
            case: TestCase::new(case),
            kinds,
            n_range: (1..=6).collect(),
            h: h_grid(11),
            centers: 10,
            seed: CENTER_SEED,
            samples: DEFAULT_SAMPLES,
            out: None,
        }
    }

    /// `n <= 8` and 50 centers.
    pub fn full(case: CaseId) -> Self {
        RunConfig { n_range: (1..=8).collect(), centers: 50, ..Self::desk(case) }
    }

    pub fn validate(&self) -> Result<()> {
        if self.kinds.is_empty() {
            return Err(Error::Config("no basis family selected".into()));
        }
        if self.case.id != CaseId::Tc1 && self.kinds.contains(&BasisKind::PlaneWave) {
            return Err(Error::Config("plane waves are only offered for tc1".into()));
        }
        if self.n_range.is_empty() || self.n_range.iter().any(|&n| !(1..=8).contains(&n)) {
            return Err(Error::Config("n must lie in 1..=8".into()));
        }
        if self.h.is_empty() || self.h.windows(2).any(|w| w[1] >= w[0]) || self.h.iter().any(|&h| h <= 0.0) {
            return Err(Error::Config("h values must be positive and strictly decreasing".into()));
        }
        if self.centers == 0 || self.samples == 0 {
            return Err(Error::Config("need at least one center and one sample direction".into()));
        }
        Ok(())
    }

    fn ordered_kinds(&self) -> Vec<BasisKind> {
        BasisKind::ALL.into_iter().filter(|k| self.kinds.contains(k)).collect()
    }

    pub fn center_points(&self) -> Vec<[f64; 3]> {
        self.case.centers(self.centers, self.seed)
    }
}

/// Convergence data: the reports plus the rendered data files.
#[derive(Clone, Debug)]
pub struct ConvergenceOutput {
    pub reports: Vec<ApproxReport>,
    pub errors: String,
    pub gradients: String,
}

fn render_table(h: &[f64], reports: &[ApproxReport], prefix_swap: Option<&str>, sel: impl Fn(&ApproxReport) -> &Vec<f64>) -> String {
    let mut s = String::from("h");
    for r in reports {
        let col = r.kind.column();
        let col = match prefix_swap {
            Some(p) => col.replacen("err", p, 1),
            None => col.to_string(),
        };
        let _ = write!(s, " {col}n{}", r.n);
    }
    s.push('\n');
    for (k, hh) in h.iter().enumerate() {
        let _ = write!(s, "{hh:.6e}");
        for r in reports {
            let _ = write!(s, " {:.6e}", sel(r)[k]);
        }
        s.push('\n');
    }
    s
}

/// Sibling path for gradient data: `foo.dat` becomes `foo.grad.dat`.
pub fn gradient_path(out: &Path) -> PathBuf {
    match (out.file_stem(), out.extension()) {
        (Some(stem), Some(ext)) => out.with_file_name(format!("{}.grad.{}", stem.to_string_lossy(), ext.to_string_lossy())),
        _ => out.with_extension("grad"),
    }
}

/// Worst-over-centers errors for every family and `n`, one column each.
pub fn cmd_convergence(cfg: &RunConfig) -> Result<ConvergenceOutput> {
    cfg.validate()?;
    let centers = cfg.center_points();
    let mut reports = Vec::new();
    for kind in cfg.ordered_kinds() {
        for &n in &cfg.n_range {
            reports.push(approximation_report(&cfg.case, kind, n, &centers, &cfg.h, cfg.samples)?);
        }
    }
    let errors = render_table(&cfg.h, &reports, None, |r| &r.max_errors);
    let gradients = render_table(&cfg.h, &reports, Some("grad"), |r| &r.gradient_errors);
    if let Some(out) = &cfg.out {
        std::fs::write(out, &errors)?;
        std::fs::write(gradient_path(out), &gradients)?;
    }
    Ok(ConvergenceOutput { reports, errors, gradients })
}

/// Worst `cond(MᴴM)` over centers, per family and `n`.
#[derive(Clone, Debug)]
pub struct ConditioningTable {
    pub kinds: Vec<BasisKind>,
    pub n_range: Vec<usize>,
    /// `values[i][j]` for `n_range[i]` and `kinds[j]`.
    pub values: Vec<Vec<f64>>,
}

impl ConditioningTable {
    pub fn get(&self, kind: BasisKind, n: usize) -> Option<f64> {
        let i = self.n_range.iter().position(|&m| m == n)?;
        let j = self.kinds.iter().position(|&k| k == kind)?;
        Some(self.values[i][j])
    }

    /// Whitespace-separated data with header `n condAbG ...`.
    pub fn to_data(&self) -> String {
        let mut s = String::from("n");
        for k in &self.kinds {
            let _ = write!(s, " {}", k.column().replacen("err", "cond", 1));
        }
        s.push('\n');
        for (i, n) in self.n_range.iter().enumerate() {
            let _ = write!(s, "{n}");
            for v in &self.values[i] {
                let _ = write!(s, " {v:.6e}");
            }
            s.push('\n');
        }
        s
    }

    /// Aligned table for terminals.
    pub fn to_pretty(&self) -> String {
        let mut s = format!("{:>3}", "n");
        for k in &self.kinds {
            let _ = write!(s, " {:>12}", k.name());
        }
        s.push('\n');
        for (i, n) in self.n_range.iter().enumerate() {
            let _ = write!(s, "{n:>3}");
            for v in &self.values[i] {
                let _ = write!(s, " {v:>12.3e}");
            }
            s.push('\n');
        }
        s
    }
}

pub fn cmd_conditioning(cfg: &RunConfig) -> Result<ConditioningTable> {
    use rayon::prelude::*;
    cfg.validate()?;
    let centers = cfg.center_points();
    let kinds = cfg.ordered_kinds();
    let mut values = Vec::new();
    for &n in &cfg.n_range {
        let row = kinds
            .iter()
            .map(|&kind| {
                let conds: Vec<f64> = centers
                    .par_iter()
                    .map(|&c| Ok(condition_number(&assemble_matrix(&case_basis(&cfg.case, kind, n, c)?, n)?)))
                    .collect::<Result<_>>()?;
                Ok(conds.into_iter().fold(0.0, f64::max))
            })
            .collect::<Result<Vec<f64>>>()?;
        values.push(row);
    }
    let table = ConditioningTable { kinds, n_range: cfg.n_range.clone(), values };
    if let Some(out) = &cfg.out {
        std::fs::write(out, table.to_data())?;
    }
    Ok(table)
}

/// One line of the self-check report.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
}

impl std::fmt::Display for CheckResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}] {:<28} value {:.3e}  tol {:.1e}", if self.pass { "PASS" } else { "FAIL" }, self.name, self.value, self.tol)
    }
}

pub const VERIFY_CHECKS: [&str; 8] = [
    "residual",
    "plane-wave-reduction",
    "seed-invariant",
    "matrix-rank",
    "polynomial-dimension",
    "exact-solutions",
    "taylor-product",
    "subsonic-determinant",
];

fn check(name: &'static str, value: f64, tol: f64) -> CheckResult {
    CheckResult { name, value, tol, pass: value <= tol }
}

/// Shift one constructed coefficient (the pivot slot `2e1`) by `delta`.
pub fn perturb_constructed(b: &mut BasisFunction, delta: f64) {
    let i = MultiIndex::new(2, 0, 0);
    let v = b.poly().get(i);
    b.poly_mut().set(i, v + delta);
}

/// Run the self-check suite. With `perturb`, every basis function gets a
/// corrupted coefficient before the residual check, which must then fail.
pub fn cmd_verify(perturb: bool) -> Result<Vec<CheckResult>> {
    let cases = [CaseId::Tc1, CaseId::Tc2, CaseId::Tc3].map(TestCase::new);
    let families = [Family::Amplitude, Family::Phase, Family::Polynomial];
    let centers: Vec<[f64; 3]> = cases.iter().map(|tc| tc.centers(1, CENTER_SEED)[0]).collect();
    let mut out = Vec::new();

    let mut worst: f64 = 0.0;
    for (tc, &c) in cases.iter().zip(&centers) {
        for n in 1..=4 {
            let coeffs = tc.operator(c, q_for(n) + 1);
            for fam in families {
                for mut b in build_basis(&coeffs, n, fam, None)? {
                    if perturb {
                        perturb_constructed(&mut b, 1e-3);
                    }
                    worst = worst.max(residual_magnitude(&coeffs, &b, b.q())? / coeffs.magnitude());
                }
            }
        }
    }
    out.push(check("residual", worst, 1e-10));

    let tc1 = &cases[0];
    let mut worst: f64 = 0.0;
    for n in 1..=5 {
        let coeffs = tc1.operator(centers[0], q_for(n) + 1);
        for fam in [Family::Amplitude, Family::Phase] {
            for b in build_basis(&coeffs, n, fam, None)? {
                for (i, v) in b.poly().iter() {
                    if i.degree() >= 2 {
                        worst = worst.max(v.norm());
                    }
                }
            }
        }
    }
    out.push(check("plane-wave-reduction", worst, 1e-13));

    let mut worst: f64 = 0.0;
    for (tc, &c) in cases.iter().zip(&centers) {
        let coeffs = tc.operator(c, 3);
        let st = check_hypothesis(&coeffs)?;
        for b in build_basis(&coeffs, 3, Family::Amplitude, None)? {
            let l = b.lambda().expect("amplitude");
            let mut v = Complex64::new(0.0, 0.0);
            for r in 0..3 {
                for s in 0..3 {
                    v += l[r] * st.c[r][s] * l[s];
                }
            }
            let s = b.meta().expect("seeded").s;
            worst = worst.max((v - s * s).norm() / (s * s).norm());
        }
    }
    out.push(check("seed-invariant", worst, 1e-12));

    let mut mismatch = 0usize;
    for (tc, &c) in cases.iter().zip(&centers) {
        for n in 1..=4 {
            let target = (n + 1) * (n + 1);
            let coeffs = tc.operator(c, q_for(n) + 1);
            let st = check_hypothesis(&coeffs)?;
            let dirs = generate_directions(n);
            let s = crate::construct::default_s(&coeffs);
            let mut ranks = vec![
                numerical_rank(&reference_matrix_e(n, &dirs, s, &st).entries, RANK_TOL),
                numerical_rank(&reference_matrix_r(n, &dirs).entries, RANK_TOL),
            ];
            for fam in families {
                ranks.push(numerical_rank(&assemble_matrix(&build_basis(&coeffs, n, fam, None)?, n)?.entries, RANK_TOL));
            }
            mismatch += ranks.iter().filter(|&&r| r != target).count();
        }
    }
    out.push(check("matrix-rank", mismatch as f64, 0.0));

    let mut mismatch = 0usize;
    for (tc, &c) in cases.iter().zip(&centers) {
        for q in 1..=5 {
            let coeffs = tc.operator(c, q + 1);
            let seeds = crate::construct::polynomial_seeds(q);
            let basis: Vec<BasisFunction> = seeds
                .iter()
                .map(|&s| crate::construct::construct_polynomial_qt(&coeffs, q, s))
                .collect::<Result<_>>()?;
            let m = assemble_matrix(&basis, q + 1)?;
            if numerical_rank(&m.entries, RANK_TOL) != (q + 2) * (q + 2) {
                mismatch += 1;
            }
        }
    }
    out.push(check("polynomial-dimension", mismatch as f64, 0.0));

    let mut worst: f64 = 0.0;
    for tc in &cases {
        for c in tc.centers(5, CENTER_SEED + 1) {
            let order = 8;
            let u = solution_taylor(tc, c, order)?;
            let r = apply_operator_taylor(&tc.operator(c, order), &u, order - 2)?;
            worst = worst.max(r.max_abs() / u.max_abs().max(1e-300));
        }
    }
    out.push(check("exact-solutions", worst, 1e-11));

    let mut rng = ChaCha8Rng::seed_from_u64(CENTER_SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let z = [0.0; 3];
        let mut rand_table = || TaylorTable::from_fn(z, 5, |_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let (a, b) = (rand_table(), rand_table());
        let p = a.product(&b)?;
        // term-by-term expansion of the two polynomials, truncated afterwards
        let mut full = std::collections::HashMap::new();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                *full.entry(i + j).or_insert(Complex64::new(0.0, 0.0)) += x * y;
            }
        }
        for (i, v) in p.iter() {
            worst = worst.max((v - full[&i]).norm());
        }
    }
    out.push(check("taylor-product", worst, 1e-12));

    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let m = random_subsonic(&mut rng);
        let z = [0.0; 3];
        let tabs: Vec<TaylorTable> = m.iter().map(|&v| TaylorTable::constant(z, 1, Complex64::new(v, 0.0))).collect();
        let coeffs = coefficients_from_flow(&TaylorTable::constant(z, 1, Complex64::new(1.0, 0.0)), [&tabs[0], &tabs[1], &tabs[2]], 1.0)?;
        worst = worst.max(check_hypothesis(&coeffs)?.det());
    }
    out.push(CheckResult { name: "subsonic-determinant", value: worst, tol: 0.0, pass: worst < 0.0 });

    Ok(out)
}

/// Uniform draw from the open unit ball.
pub fn random_subsonic(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let m = [0, 1, 2].map(|_| rng.gen_range(-1.0..1.0));
        if m.iter().map(|v| v * v).sum::<f64>() < 1.0 {
            return m;
        }
    }
}

/// Text dump of a basis for a built-in case or for coefficients loaded from a file.
pub fn cmd_dump_basis(coeffs: &PdeCoefficients, family: Family, n: usize) -> Result<String> {
    Ok(basis_to_text(&build_basis(coeffs, n, family, None)?))
}
