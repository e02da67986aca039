//! Dense complex linear algebra for basis matrices: ranks, conditioning, normal-equation solves.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Default relative SVD cutoff for rank decisions.
pub const RANK_TOL: f64 = 1e-8;

/// Singular values, largest first.
pub fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values above `tol · σ_1`.
pub fn numerical_rank(m: &DMatrix<Complex64>, tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&s1) if s1 > 0.0 => s.iter().filter(|&&v| v > tol * s1).count(),
        _ => 0,
    }
}

/// `σ_max / σ_min` of the normal matrix `MᴴM`, formed explicitly.
pub fn normal_condition(m: &DMatrix<Complex64>) -> f64 {
    let a = m.adjoint() * m;
    let s = singular_values(&a);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Outcome of a least-squares solve.
#[derive(Clone, Debug, PartialEq)]
pub struct Solve {
    pub x: DVector<Complex64>,
    /// Pivots kept; below the column count when the normal matrix was
    /// numerically singular and the trailing directions were dropped.
    pub rank: usize,
}

impl Solve {
    pub fn truncated(&self) -> bool {
        self.rank < self.x.len()
    }
}

/// Least squares `min ‖Mx - f‖` through `MᴴM x = Mᴴf`, factored by Cholesky
/// with diagonal pivoting. Factorization stops once the largest remaining pivot
/// falls below `p·ε` times the largest diagonal entry; unresolved weights are zero.
pub fn solve_normal_equations(m: &DMatrix<Complex64>, f: &DVector<Complex64>) -> Solve {
    let p = m.ncols();
    let mut a = m.adjoint() * m;
    let rhs = m.adjoint() * f;
    let mut perm: Vec<usize> = (0..p).collect();
    let dmax = (0..p).map(|k| a[(k, k)].re).fold(0.0f64, f64::max);
    let cutoff = p as f64 * f64::EPSILON * dmax;
    let zero = Complex64::new(0.0, 0.0);

    // in-place pivoted Cholesky, A[perm, perm] = L Lᴴ, L stored in the lower triangle
    let mut rank = 0;
    for k in 0..p {
        let (piv, val) = (k..p).map(|j| (j, a[(j, j)].re)).fold((k, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b });
        if !(val > cutoff) {
            break;
        }
        if piv != k {
            a.swap_rows(k, piv);
            a.swap_columns(k, piv);
            perm.swap(k, piv);
        }
        let d = a[(k, k)].re.sqrt();
        a[(k, k)] = Complex64::new(d, 0.0);
        for i in (k + 1)..p {
            a[(i, k)] /= d;
        }
        // full trailing update keeps the block Hermitian for later symmetric swaps
        for j in (k + 1)..p {
            let ljk = a[(j, k)].conj();
            for i in (k + 1)..p {
                let v = a[(i, k)] * ljk;
                a[(i, j)] -= v;
            }
            a[(j, j)].im = 0.0;
        }
        rank += 1;
    }

    // forward then backward substitution on the leading rank×rank block
    let mut y = vec![zero; rank];
    for i in 0..rank {
        let mut s = rhs[perm[i]];
        for j in 0..i {
            s -= a[(i, j)] * y[j];
        }
        y[i] = s / a[(i, i)].re;
    }
    let mut z = vec![zero; rank];
    for i in (0..rank).rev() {
        let mut s = y[i];
        for j in (i + 1)..rank {
            s -= a[(j, i)].conj() * z[j];
        }
        z[i] = s / a[(i, i)].re;
    }
    let mut x = DVector::from_element(p, zero);
    for i in 0..rank {
        x[perm[i]] = z[i];
    }
    Solve { x, rank }
}

/// Least squares by Householder QR on `M` directly; diagnostic alternative to
/// [`solve_normal_equations`]. Requires full column rank.
pub fn solve_qr(m: &DMatrix<Complex64>, f: &DVector<Complex64>) -> Option<Solve> {
    let p = m.ncols();
    if m.nrows() < p {
        return None;
    }
    let qr = m.clone().qr();
    let qtf = qr.q().adjoint() * f;
    let r = qr.r();
    let x = r.solve_upper_triangular(&qtf.rows(0, p).into_owned())?;
    Some(Solve { x, rank: p })
}
