//! Principal part of the operator and the Taylor-table residual oracle.

use num_complex::Complex64;

use crate::construct::{BasisFunction, Family};
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::pde::{second, PdeCoefficients, OPERATOR_INDICES};
use crate::taylor::TaylorTable;

pub type Mat3 = [[f64; 3]; 3];

/// Relative tolerance for the principal-part checks.
pub const HYPOTHESIS_TOL: f64 = 1e-12;

/// Principal-part matrix `C` at the center with `C = P diag(D) Pᵀ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SecondOrderStructure {
    pub c: Mat3,
    /// Orthogonal; column `k` is the eigenvector for `d[k]`.
    pub p: Mat3,
    pub d: [f64; 3],
}

impl SecondOrderStructure {
    pub fn det(&self) -> f64 {
        det3(&self.c)
    }

    /// `P D^{-1/2} v`, with the principal branch for negative eigenvalues.
    pub fn seed_direction(&self, v: [f64; 3]) -> [Complex64; 3] {
        let w: Vec<Complex64> = (0..3).map(|k| Complex64::new(self.d[k], 0.0).sqrt().inv() * v[k]).collect();
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (r, o) in out.iter_mut().enumerate() {
            for k in 0..3 {
                *o += w[k] * self.p[r][k];
            }
        }
        out
    }

    /// `‖C - P D Pᵀ‖_max`.
    pub fn reconstruction_error(&self) -> f64 {
        let mut e: f64 = 0.0;
        for r in 0..3 {
            for s in 0..3 {
                let v: f64 = (0..3).map(|k| self.p[r][k] * self.d[k] * self.p[s][k]).sum();
                e = e.max((v - self.c[r][s]).abs());
            }
        }
        e
    }
}

pub fn det3(a: &Mat3) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

/// Principal-part matrix: `C_kk = c_{2e_k}(x_C)`, `C_kl = c_{e_k+e_l}(x_C)/2`.
/// Imaginary parts are returned separately.
pub fn principal_matrix(coeffs: &PdeCoefficients) -> (Mat3, f64) {
    let mut c = [[0.0; 3]; 3];
    let mut imag: f64 = 0.0;
    for k in 0..3 {
        for l in k..3 {
            let v = coeffs.coef(second(k, l), MultiIndex::ZERO);
            let v = if k == l { v } else { v * 0.5 };
            c[k][l] = v.re;
            c[l][k] = v.re;
            imag = imag.max(v.im.abs());
        }
    }
    (c, imag)
}

/// Validate the principal part and diagonalize it.
pub fn check_hypothesis(coeffs: &PdeCoefficients) -> Result<SecondOrderStructure> {
    let (c, imag) = principal_matrix(coeffs);
    let scale = c.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Err(Error::HypothesisViolation("principal part vanishes at the center".into()));
    }
    if imag > HYPOTHESIS_TOL * scale {
        return Err(Error::HypothesisViolation(format!("principal coefficients are not real (|Im| = {imag:e})")));
    }
    if c[0][0].abs() <= HYPOTHESIS_TOL * scale {
        return Err(Error::HypothesisViolation("c_{2e1}(x_C) = 0".into()));
    }
    if det3(&c).abs() <= HYPOTHESIS_TOL * scale.powi(3) {
        return Err(Error::HypothesisViolation("principal matrix is singular".into()));
    }
    let (p, d) = symmetric_eigen(&c);
    Ok(SecondOrderStructure { c, p, d })
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn normalize(a: [f64; 3]) -> [f64; 3] {
    let n = dot(&a, &a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

fn mat_vec(a: &Mat3, v: &[f64; 3]) -> [f64; 3] {
    [dot(&a[0], v), dot(&a[1], v), dot(&a[2], v)]
}

/// Unit vector orthogonal to `v` (assumed unit).
fn any_orthogonal(v: &[f64; 3]) -> [f64; 3] {
    let k = (0..3).min_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs())).unwrap();
    let mut e = [0.0; 3];
    e[k] = 1.0;
    normalize(cross(v, &e))
}

/// Eigen-decomposition of a real symmetric 3×3 matrix.
///
/// Eigenvalues come from the trigonometric solution of the characteristic
/// cubic, polished by one Newton step. The eigenvector of the best separated
/// eigenvalue is a cross product of rows of `A - λI`; the remaining pair is
/// obtained by an exact rotation of the 2×2 block on its orthogonal
/// complement, which keeps repeated eigenvalues well-behaved.
pub fn symmetric_eigen(a: &Mat3) -> (Mat3, [f64; 3]) {
    let off = a[0][1].abs() + a[0][2].abs() + a[1][2].abs();
    if off == 0.0 {
        let id = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        return (id, [a[0][0], a[1][1], a[2][2]]);
    }
    let lam = eigenvalues(a);

    // most isolated eigenvalue
    let gap = |i: usize| (0..3).filter(|&j| j != i).map(|j| (lam[i] - lam[j]).abs()).fold(f64::INFINITY, f64::min);
    let i0 = (0..3).max_by(|&x, &y| gap(x).total_cmp(&gap(y))).unwrap();
    let l0 = lam[i0];
    let rows: Vec<[f64; 3]> = (0..3)
        .map(|r| {
            let mut row = a[r];
            row[r] -= l0;
            row
        })
        .collect();
    let candidates = [cross(&rows[0], &rows[1]), cross(&rows[0], &rows[2]), cross(&rows[1], &rows[2])];
    let best = candidates.iter().max_by(|x, y| dot(x, x).total_cmp(&dot(y, y))).unwrap();
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let v0 = if dot(best, best).sqrt() > 1e-10 * scale * scale {
        normalize(*best)
    } else {
        // A - λI has rank <= 1: any vector orthogonal to its row space works
        let r = rows.iter().max_by(|x, y| dot(x, x).total_cmp(&dot(y, y))).unwrap();
        if dot(r, r).sqrt() > 0.0 {
            any_orthogonal(&normalize(*r))
        } else {
            [1.0, 0.0, 0.0]
        }
    };

    let u = any_orthogonal(&v0);
    let w = cross(&v0, &u);
    let (au, aw) = (mat_vec(a, &u), mat_vec(a, &w));
    let (b11, b12, b22) = (dot(&u, &au), dot(&u, &aw), dot(&w, &aw));
    // Jacobi rotation diagonalizing [[b11, b12], [b12, b22]]
    let (cs, sn) = if b12 == 0.0 {
        (1.0, 0.0)
    } else {
        let tau = (b22 - b11) / (2.0 * b12);
        let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
        let t = if tau == 0.0 { 1.0 } else { t };
        let cs = 1.0 / (1.0 + t * t).sqrt();
        (cs, t * cs)
    };
    let v1 = normalize([cs * u[0] - sn * w[0], cs * u[1] - sn * w[1], cs * u[2] - sn * w[2]]);
    let v2 = normalize(cross(&v0, &v1));

    let vecs = [v0, v1, v2];
    let mut pairs: Vec<(f64, [f64; 3])> = vecs.iter().map(|v| (dot(v, &mat_vec(a, v)), *v)).collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut p = [[0.0; 3]; 3];
    let mut d = [0.0; 3];
    for (k, (val, v)) in pairs.iter().enumerate() {
        d[k] = *val;
        for r in 0..3 {
            p[r][k] = v[r];
        }
    }
    (p, d)
}

fn eigenvalues(a: &Mat3) -> [f64; 3] {
    let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    let p1 = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
    let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let mut b = *a;
    for (r, row) in b.iter_mut().enumerate() {
        for (s, v) in row.iter_mut().enumerate() {
            *v = (*v - if r == s { q } else { 0.0 }) / p;
        }
    }
    let r = (det3(&b) / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::FRAC_PI_3).cos();
    let e2 = 3.0 * q - e1 - e3;

    // Newton polish on det(A - λI)
    let c2 = a[0][0] + a[1][1] + a[2][2];
    let c1 = a[0][0] * a[1][1] + a[0][0] * a[2][2] + a[1][1] * a[2][2] - p1;
    let c0 = det3(a);
    let polish = |l: f64| {
        let f = -l * l * l + c2 * l * l - c1 * l + c0;
        let df = -3.0 * l * l + 2.0 * c2 * l - c1;
        if df.abs() > 1e-8 * (1.0 + c1.abs()) {
            l - f / df
        } else {
            l
        }
    };
    [polish(e1), polish(e2), polish(e3)]
}

/// `T_{Lf}[β]` for `|β| <= out_order`, from generic shifts and Cauchy products.
pub fn apply_operator_taylor(coeffs: &PdeCoefficients, f: &TaylorTable, out_order: usize) -> Result<TaylorTable> {
    if f.center() != coeffs.center() {
        return Err(Error::CenterMismatch(f.center(), coeffs.center()));
    }
    if f.order() < out_order + 2 {
        return Err(Error::OrderTooLow { needed: out_order + 2, have: f.order() });
    }
    coeffs.require_order(out_order)?;
    let mut out = TaylorTable::zeros(f.center(), out_order);
    for j in OPERATOR_INDICES {
        let df = f.derivative(j)?.truncate(out_order);
        let cj = coeffs.table(j).truncate(out_order);
        out.axpy(Complex64::new(1.0, 0.0), &cj.product(&df)?)?;
    }
    Ok(out)
}

/// Coefficients of `L^Λ` with `L(Q e^{Λ·(x-x_C)}) = (L^Λ Q) e^{Λ·(x-x_C)}`.
pub fn conjugated_operator(coeffs: &PdeCoefficients, lambda: [Complex64; 3]) -> Result<PdeCoefficients> {
    let mut tables: Vec<TaylorTable> = OPERATOR_INDICES.iter().map(|&j| coeffs.table(j).clone()).collect();
    for k in 0..3 {
        let ek = MultiIndex::unit(k).numbering();
        tables[ek].axpy(2.0 * lambda[k], coeffs.table(second(k, k)))?;
        for l in 0..3 {
            if l != k {
                tables[ek].axpy(lambda[l], coeffs.table(second(k, l)))?;
            }
        }
        tables[0].axpy(lambda[k], coeffs.table(MultiIndex::unit(k)))?;
        tables[0].axpy(lambda[k] * lambda[k], coeffs.table(second(k, k)))?;
        for l in (k + 1)..3 {
            tables[0].axpy(lambda[k] * lambda[l], coeffs.table(second(k, l)))?;
        }
    }
    PdeCoefficients::new(coeffs.center(), tables)
}

/// `T_{L^{Ph} P}` for `|β| <= out_order`, where `L e^P = (L^{Ph} P) e^P` and
/// `L^{Ph} P = Σ_j c_j ∂^j P + Σ_{|j|=2} c_j ∂^{j_a}P ∂^{j_b}P`.
pub fn phase_operator_taylor(coeffs: &PdeCoefficients, p: &TaylorTable, out_order: usize) -> Result<TaylorTable> {
    let mut out = apply_operator_taylor(coeffs, p, out_order)?;
    // zeroth-order coefficient enters once, not multiplied by P
    let c0p = coeffs.table(MultiIndex::ZERO).truncate(out_order).product(&p.truncate(out_order))?;
    out.axpy(Complex64::new(-1.0, 0.0), &c0p)?;
    out.axpy(Complex64::new(1.0, 0.0), &coeffs.table(MultiIndex::ZERO).truncate(out_order))?;
    let grads: Vec<TaylorTable> = (0..3)
        .map(|k| p.derivative(MultiIndex::unit(k)).map(|t| t.truncate(out_order)))
        .collect::<Result<_>>()?;
    for k in 0..3 {
        for l in k..3 {
            let cj = coeffs.table(second(k, l)).truncate(out_order);
            out.axpy(Complex64::new(1.0, 0.0), &cj.product(&grads[k].product(&grads[l])?)?)?;
        }
    }
    Ok(out)
}

/// `max_{|β|<q} |T_{Lb}[β]|`, exact up to roundoff. Zero when `q = 0`.
pub fn residual_magnitude(coeffs: &PdeCoefficients, b: &BasisFunction, q: usize) -> Result<f64> {
    if q == 0 {
        return Ok(0.0);
    }
    let out = q - 1;
    let poly = b.poly().truncate(out + 2);
    let res = match b.family() {
        Family::Polynomial => apply_operator_taylor(coeffs, &poly, out)?,
        Family::Amplitude => {
            let lambda = b.lambda().expect("amplitude function without exponent");
            let conj = conjugated_operator(coeffs, lambda)?;
            let r = apply_operator_taylor(&conj, &poly, out)?;
            r.product(&TaylorTable::exp_linear(b.center(), out, lambda))?
        }
        Family::Phase => {
            let r = phase_operator_taylor(coeffs, &poly, out)?;
            r.product(&poly.truncate(out).exp())?
        }
    };
    Ok(res.max_abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pde::{builtin_operator, BuiltinCase};

    #[test]
    fn helmholtz_structure_is_identity() {
        let h = builtin_operator(BuiltinCase::HelmholtzConst, 3.0, 0.0, [0.0; 3], 2);
        let s = check_hypothesis(&h).unwrap();
        let id = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert_eq!(s.c, id);
        assert_eq!(s.p, id);
        assert_eq!(s.d, [1.0; 3]);
    }

    #[test]
    fn convected_structure() {
        let v = builtin_operator(BuiltinCase::ConvectedAiry, 2.0, 0.2, [0.0; 3], 2);
        let s = check_hypothesis(&v).unwrap();
        assert!((s.c[2][2] - 0.96).abs() < 1e-15);
        assert_eq!(s.c[0][1], 0.0);
    }

    #[test]
    fn rejects_degenerate_principal_parts() {
        let mut t: Vec<TaylorTable> = OPERATOR_INDICES
            .iter()
            .map(|&j| builtin_operator(BuiltinCase::HelmholtzConst, 1.0, 0.0, [0.0; 3], 2).table(j).clone())
            .collect();
        t[second(0, 0).numbering()] = TaylorTable::zeros([0.0; 3], 2);
        let c = PdeCoefficients::new([0.0; 3], t).unwrap();
        assert!(matches!(check_hypothesis(&c), Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn eigen_handles_repeated_values() {
        // 2·I plus a rank-one update: eigenvalues {2, 2, 2 + |v|²}
        let v = [0.3, -0.4, 1.2];
        let mut a = [[0.0; 3]; 3];
        for r in 0..3 {
            for s in 0..3 {
                a[r][s] = v[r] * v[s] + if r == s { 2.0 } else { 0.0 };
            }
        }
        let (p, d) = symmetric_eigen(&a);
        let st = SecondOrderStructure { c: a, p, d };
        assert!(st.reconstruction_error() < 1e-14);
    }

    #[test]
    fn hand_computed_operator_application() {
        let h = builtin_operator(BuiltinCase::HelmholtzConst, 3.0, 0.0, [0.0; 3], 4);
        let f = TaylorTable::monomial([0.0; 3], 4, MultiIndex::new(2, 0, 0), Complex64::new(1.0, 0.0));
        let r = apply_operator_taylor(&h, &f, 2).unwrap();
        for (i, v) in r.iter() {
            let want = if i.is_zero() {
                2.0
            } else if i == MultiIndex::new(2, 0, 0) {
                9.0
            } else {
                0.0
            };
            assert_eq!(v, Complex64::new(want, 0.0));
        }
    }
}
