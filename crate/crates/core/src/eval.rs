//! Point evaluation, Taylor tables and Taylor-coefficient matrices of basis functions.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::construct::{BasisFunction, DirectionSet, Family};
use crate::error::{Error, Result};
use crate::multiindex::{count_up_to, MultiIndex};
use crate::operator::SecondOrderStructure;
use crate::taylor::TaylorTable;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Horner step carrying the first derivative.
#[inline]
fn horner(coeffs: &[Complex64], y: f64) -> (Complex64, Complex64) {
    let (mut p, mut dp) = (ZERO, ZERO);
    for &c in coeffs.iter().rev() {
        dp = dp * y + p;
        p = p * y + c;
    }
    (p, dp)
}

#[inline]
fn horner_plain(coeffs: &[Complex64], y: f64) -> Complex64 {
    coeffs.iter().rev().fold(ZERO, |p, &c| p * y + c)
}

/// Value and gradient of the polynomial `Σ T[i] y^i`, nested over `y3`, `y2`, `y1`.
pub fn poly_value_gradient(t: &TaylorTable, y: [f64; 3]) -> (Complex64, [Complex64; 3]) {
    let n = t.order();
    let mut a1 = Vec::with_capacity(n + 1);
    let mut a1_y2 = Vec::with_capacity(n + 1);
    let mut a1_y3 = Vec::with_capacity(n + 1);
    let mut buf = Vec::with_capacity(n + 1);
    for i1 in 0..=n {
        let mut v = Vec::with_capacity(n + 1 - i1);
        let mut v3 = Vec::with_capacity(n + 1 - i1);
        for i2 in 0..=(n - i1) {
            buf.clear();
            buf.extend((0..=(n - i1 - i2)).map(|i3| t.get(MultiIndex::new(i1 as u8, i2 as u8, i3 as u8))));
            let (p, dp) = horner(&buf, y[2]);
            v.push(p);
            v3.push(dp);
        }
        let (w, w2) = horner(&v, y[1]);
        a1.push(w);
        a1_y2.push(w2);
        a1_y3.push(horner_plain(&v3, y[1]));
    }
    let (val, d1) = horner(&a1, y[0]);
    (val, [d1, horner_plain(&a1_y2, y[0]), horner_plain(&a1_y3, y[0])])
}

fn offset(b: &BasisFunction, x: [f64; 3]) -> [f64; 3] {
    let c = b.center();
    [x[0] - c[0], x[1] - c[1], x[2] - c[2]]
}

pub fn evaluate(b: &BasisFunction, x: [f64; 3]) -> Complex64 {
    evaluate_with_gradient(b, x).0
}

pub fn evaluate_gradient(b: &BasisFunction, x: [f64; 3]) -> [Complex64; 3] {
    evaluate_with_gradient(b, x).1
}

/// Value and gradient together.
pub fn evaluate_with_gradient(b: &BasisFunction, x: [f64; 3]) -> (Complex64, [Complex64; 3]) {
    let y = offset(b, x);
    let (p, g) = poly_value_gradient(b.poly(), y);
    match b.family() {
        Family::Polynomial => (p, g),
        Family::Phase => {
            let e = p.exp();
            (e, g.map(|gk| gk * e))
        }
        Family::Amplitude => {
            let lam = b.lambda().expect("amplitude function without exponent");
            let e = (lam[0] * y[0] + lam[1] * y[1] + lam[2] * y[2]).exp();
            (p * e, [0, 1, 2].map(|k| (g[k] + lam[k] * p) * e))
        }
    }
}

/// Taylor coefficients of the full basis function at its center.
pub fn taylor_table(b: &BasisFunction, order: usize) -> TaylorTable {
    let poly = b.poly().truncate(order);
    match b.family() {
        Family::Polynomial => poly,
        Family::Phase => poly.exp(),
        Family::Amplitude => {
            let lam = b.lambda().expect("amplitude function without exponent");
            poly.product(&TaylorTable::exp_linear(b.center(), order, lam)).expect("same center")
        }
    }
}

/// Taylor-coefficient matrix: entry `(N(i), l) = T_{b_l}[i]` for `|i| <= n`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisMatrix {
    pub n: usize,
    pub entries: DMatrix<Complex64>,
}

impl BasisMatrix {
    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn cols(&self) -> usize {
        self.entries.ncols()
    }

    /// Append the columns of `other` (same `n`).
    pub fn hstack(&self, other: &BasisMatrix) -> BasisMatrix {
        assert_eq!(self.n, other.n);
        let (r, c1, c2) = (self.rows(), self.cols(), other.cols());
        let entries = DMatrix::from_fn(r, c1 + c2, |i, j| {
            if j < c1 {
                self.entries[(i, j)]
            } else {
                other.entries[(i, j - c1)]
            }
        });
        BasisMatrix { n: self.n, entries }
    }
}

pub fn assemble_matrix(basis: &[BasisFunction], n: usize) -> Result<BasisMatrix> {
    if let Some(first) = basis.first() {
        if basis.iter().any(|b| b.center() != first.center()) {
            return Err(Error::MixedCenters);
        }
    }
    let rows = count_up_to(n);
    let mut entries = DMatrix::from_element(rows, basis.len(), ZERO);
    for (l, b) in basis.iter().enumerate() {
        let t = taylor_table(b, n);
        for (r, v) in t.as_slice().iter().enumerate() {
            entries[(r, l)] = *v;
        }
    }
    Ok(BasisMatrix { n, entries })
}

/// Matrix of `v_l^i / i!` for exponent vectors `v_l`.
pub fn exponential_matrix(n: usize, vectors: &[[Complex64; 3]]) -> BasisMatrix {
    let rows = count_up_to(n);
    let mut entries = DMatrix::from_element(rows, vectors.len(), ZERO);
    for (l, v) in vectors.iter().enumerate() {
        let t = TaylorTable::exp_linear([0.0; 3], n, *v);
        for (r, x) in t.as_slice().iter().enumerate() {
            entries[(r, l)] = *x;
        }
    }
    BasisMatrix { n, entries }
}

/// Entries `(𝔰 P D^{-1/2} d_l)^i / i!`.
pub fn reference_matrix_e(n: usize, dirs: &DirectionSet, s: Complex64, structure: &SecondOrderStructure) -> BasisMatrix {
    let v: Vec<[Complex64; 3]> = dirs.entries.iter().map(|d| structure.seed_direction(d.d).map(|c| c * s)).collect();
    exponential_matrix(n, &v)
}

/// Entries `d_l^i / i!`.
pub fn reference_matrix_r(n: usize, dirs: &DirectionSet) -> BasisMatrix {
    let v: Vec<[Complex64; 3]> = dirs.entries.iter().map(|d| d.d.map(|c| Complex64::new(c, 0.0))).collect();
    exponential_matrix(n, &v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner_matches_direct_sum() {
        let t = TaylorTable::from_fn([0.0; 3], 5, |i| Complex64::new(i.numbering() as f64 * 0.1, 1.0 / (1.0 + i.degree() as f64)));
        let y = [0.3, -0.7, 0.45];
        let (v, g) = poly_value_gradient(&t, y);
        assert!((v - t.eval(y)).norm() < 1e-13);
        for k in 0..3 {
            let d = t.derivative(MultiIndex::unit(k)).unwrap();
            assert!((g[k] - d.eval(y)).norm() < 1e-13);
        }
    }

    #[test]
    fn r_matrix_first_row_is_ones() {
        let dirs = crate::construct::generate_directions(2);
        let r = reference_matrix_r(0, &dirs);
        assert_eq!(r.rows(), 1);
        assert!(r.entries.iter().all(|v| *v == Complex64::new(1.0, 0.0)));
    }
}
