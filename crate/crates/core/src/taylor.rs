//! Truncated trivariate Taylor tables, `T_f[i] = ∂^i f(x_C) / i!`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multiindex::{count_up_to, factorial, MultiIndex};

/// Dense Taylor coefficients of a function at `center`, for all `|i| <= order`.
///
/// Storage follows the global numbering of multi-indices. Reads past `order`
/// return zero.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorTable {
    center: [f64; 3],
    order: usize,
    coeffs: Vec<Complex64>,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl TaylorTable {
    pub fn zeros(center: [f64; 3], order: usize) -> Self {
        TaylorTable { center, order, coeffs: vec![ZERO; count_up_to(order)] }
    }

    pub fn constant(center: [f64; 3], order: usize, value: Complex64) -> Self {
        let mut t = Self::zeros(center, order);
        t.coeffs[0] = value;
        t
    }

    /// `value * (x - x_C)^i`.
    pub fn monomial(center: [f64; 3], order: usize, i: MultiIndex, value: Complex64) -> Self {
        let mut t = Self::zeros(center, order);
        t.set(i, value);
        t
    }

    pub fn from_fn(center: [f64; 3], order: usize, mut f: impl FnMut(MultiIndex) -> Complex64) -> Self {
        let coeffs = MultiIndex::all_up_to(order).into_iter().map(&mut f).collect();
        TaylorTable { center, order, coeffs }
    }

    /// Build from a dense vector in numbering order. Its length fixes the order.
    pub fn from_vec(center: [f64; 3], coeffs: Vec<Complex64>) -> Result<Self> {
        let mut order = 0;
        while count_up_to(order) < coeffs.len() {
            order += 1;
        }
        if count_up_to(order) != coeffs.len() {
            return Err(Error::Config(format!("{} is not a table length", coeffs.len())));
        }
        Ok(TaylorTable { center, order, coeffs })
    }

    /// Table of `exp(Λ·(x - x_C))`, i.e. `Λ^i / i!`.
    pub fn exp_linear(center: [f64; 3], order: usize, lambda: [Complex64; 3]) -> Self {
        Self::from_fn(center, order, |i| {
            let mut v = Complex64::new(1.0 / i.factorial(), 0.0);
            for k in 0..3 {
                v *= lambda[k].powu(i.get(k) as u32);
            }
            v
        })
    }

    pub fn center(&self) -> [f64; 3] {
        self.center
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.coeffs
    }

    #[inline]
    pub fn get(&self, i: MultiIndex) -> Complex64 {
        if i.degree() > self.order {
            ZERO
        } else {
            self.coeffs[i.numbering()]
        }
    }

    /// Panics if `|i| > order`.
    #[inline]
    pub fn set(&mut self, i: MultiIndex, value: Complex64) {
        assert!(i.degree() <= self.order, "index {i:?} beyond table order {}", self.order);
        self.coeffs[i.numbering()] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = (MultiIndex, Complex64)> + '_ {
        self.coeffs.iter().enumerate().map(|(k, &c)| (MultiIndex::from_numbering(k), c))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Keep `|i| <= order` (zero-padding if `order` exceeds the current one).
    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = vec![ZERO; count_up_to(order)];
        let n = coeffs.len().min(self.coeffs.len());
        coeffs[..n].copy_from_slice(&self.coeffs[..n]);
        TaylorTable { center: self.center, order, coeffs }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        TaylorTable {
            center: self.center,
            order: self.order,
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    fn check_center(&self, other: &TaylorTable) -> Result<()> {
        if self.center != other.center {
            return Err(Error::CenterMismatch(self.center, other.center));
        }
        Ok(())
    }

    /// Sum, truncated to the smaller order.
    pub fn add(&self, other: &TaylorTable) -> Result<Self> {
        self.check_center(other)?;
        let order = self.order.min(other.order);
        let n = count_up_to(order);
        let coeffs = (0..n).map(|k| self.coeffs[k] + other.coeffs[k]).collect();
        Ok(TaylorTable { center: self.center, order, coeffs })
    }

    /// `self += s * other` over the common range; entries of `other` beyond
    /// `self.order` are dropped.
    pub fn axpy(&mut self, s: Complex64, other: &TaylorTable) -> Result<()> {
        self.check_center(other)?;
        let n = self.coeffs.len().min(other.coeffs.len());
        for k in 0..n {
            self.coeffs[k] += s * other.coeffs[k];
        }
        Ok(())
    }

    /// Cauchy product `T_fg[β] = Σ_{γ<=β} T_f[β-γ] T_g[γ]`, truncated to the smaller order.
    pub fn product(&self, other: &TaylorTable) -> Result<Self> {
        self.check_center(other)?;
        let order = self.order.min(other.order);
        let mut out = Self::zeros(self.center, order);
        let idx = MultiIndex::all_up_to(order);
        for (ka, a) in idx.iter().enumerate() {
            let ca = self.coeffs[ka];
            if ca == ZERO {
                continue;
            }
            let rest = count_up_to(order - a.degree());
            for (kb, b) in idx[..rest].iter().enumerate() {
                let cb = other.coeffs[kb];
                if cb != ZERO {
                    out.coeffs[(*a + *b).numbering()] += ca * cb;
                }
            }
        }
        Ok(out)
    }

    /// Table of `∂^α f`: `T[β] = (α+β)!/β! · T_f[α+β]`, of order `order - |α|`.
    pub fn derivative(&self, alpha: MultiIndex) -> Result<Self> {
        let da = alpha.degree();
        if da > self.order {
            return Err(Error::OrderTooLow { needed: da, have: self.order });
        }
        Ok(Self::from_fn(self.center, self.order - da, |b| {
            self.get(alpha + b) * shift_factor(alpha, b)
        }))
    }

    /// Power-series exponential `exp(f)`, exact to the table order.
    ///
    /// With `f = Σ_j f_j` split into homogeneous parts, the parts of `S = exp f`
    /// satisfy `m S_m = Σ_{j=1..m} j f_j S_{m-j}` and `S_0 = exp(f_0)`.
    pub fn exp(&self) -> Self {
        let order = self.order;
        let mut s = Self::zeros(self.center, order);
        s.coeffs[0] = self.coeffs[0].exp();
        let layers: Vec<Vec<MultiIndex>> = (0..=order).map(MultiIndex::layer_in_numbering).collect();
        for m in 1..=order {
            let inv_m = 1.0 / m as f64;
            for j in 1..=m {
                let w = j as f64 * inv_m;
                for a in &layers[j] {
                    let fa = self.coeffs[a.numbering()];
                    if fa == ZERO {
                        continue;
                    }
                    for b in &layers[m - j] {
                        let sb = s.coeffs[b.numbering()];
                        s.coeffs[(*a + *b).numbering()] += fa * sb * w;
                    }
                }
            }
        }
        s
    }

    /// Evaluate the truncated polynomial at `x`.
    pub fn eval(&self, x: [f64; 3]) -> Complex64 {
        let y = [x[0] - self.center[0], x[1] - self.center[1], x[2] - self.center[2]];
        self.iter()
            .map(|(i, c)| c * (0..3).map(|k| y[k].powi(i.get(k) as i32)).product::<f64>())
            .sum()
    }
}

/// `(α+β)!/β!` componentwise.
#[inline]
pub fn shift_factor(alpha: MultiIndex, beta: MultiIndex) -> f64 {
    let mut f = 1.0;
    for k in 0..3 {
        for t in 1..=alpha.get(k) {
            f *= (beta.get(k) + t) as f64;
        }
    }
    f
}

/// 1D Taylor coefficients `∂^m g(t0)/m!` from raw derivatives.
pub fn scaled_1d(derivs: &[f64]) -> Vec<f64> {
    derivs.iter().enumerate().map(|(m, d)| d / factorial(m)).collect()
}
