//! Coefficients of `L = Σ_{|j|<=2} c_j(x) ∂^j`, stored as Taylor tables at a center.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::taylor::TaylorTable;

/// The ten derivative multi-indices `|j| <= 2`, in numbering order.
pub const OPERATOR_INDICES: [MultiIndex; 10] = [
    MultiIndex::new(0, 0, 0),
    MultiIndex::new(1, 0, 0),
    MultiIndex::new(0, 1, 0),
    MultiIndex::new(0, 0, 1),
    MultiIndex::new(2, 0, 0),
    MultiIndex::new(1, 1, 0),
    MultiIndex::new(1, 0, 1),
    MultiIndex::new(0, 2, 0),
    MultiIndex::new(0, 1, 1),
    MultiIndex::new(0, 0, 2),
];

/// `e_k + e_l` for `k, l` in `0..3`.
pub fn second(k: usize, l: usize) -> MultiIndex {
    MultiIndex::unit(k) + MultiIndex::unit(l)
}

/// Taylor tables of the ten coefficient functions at a common center.
#[derive(Clone, Debug, PartialEq)]
pub struct PdeCoefficients {
    center: [f64; 3],
    order: usize,
    tables: Vec<TaylorTable>,
}

/// The operators of the three reference test cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinCase {
    /// `Δ + κ²`
    HelmholtzConst,
    /// `Δ + κ²(1 - x1)`
    HelmholtzAiry,
    /// `∂11 + ∂22 + (1 - M0²)∂33 + 2iκM0 ∂3 + κ²(1 - x3)`
    ConvectedAiry,
}

impl PdeCoefficients {
    /// `tables[k]` is the coefficient of `∂^{OPERATOR_INDICES[k]}`. All tables
    /// must share the center; they are truncated to the smallest order.
    pub fn new(center: [f64; 3], tables: Vec<TaylorTable>) -> Result<Self> {
        if tables.len() != 10 {
            return Err(Error::Config(format!("expected 10 coefficient tables, got {}", tables.len())));
        }
        for t in &tables {
            if t.center() != center {
                return Err(Error::CenterMismatch(center, t.center()));
            }
        }
        let order = tables.iter().map(|t| t.order()).min().unwrap_or(0);
        let tables = tables.into_iter().map(|t| t.truncate(order)).collect();
        Ok(PdeCoefficients { center, order, tables })
    }

    pub fn center(&self) -> [f64; 3] {
        self.center
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Table of `c_j`. Panics unless `|j| <= 2`.
    pub fn table(&self, j: MultiIndex) -> &TaylorTable {
        assert!(j.degree() <= 2, "operator index {j:?} has length > 2");
        &self.tables[j.numbering()]
    }

    /// `T_{c_j}[i]`, zero beyond the stored order.
    #[inline]
    pub fn coef(&self, j: MultiIndex, i: MultiIndex) -> Complex64 {
        self.tables[j.numbering()].get(i)
    }

    /// Largest coefficient magnitude over all tables.
    pub fn magnitude(&self) -> f64 {
        self.tables.iter().map(|t| t.max_abs()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        PdeCoefficients {
            center: self.center,
            order: self.order,
            tables: self.tables.iter().map(|t| t.scale(s)).collect(),
        }
    }

    /// Truncate or zero-pad every table to `order`. Padding is exact for
    /// coefficients that are polynomials of degree at most the current order.
    pub fn with_order(&self, order: usize) -> Self {
        PdeCoefficients {
            center: self.center,
            order,
            tables: self.tables.iter().map(|t| t.truncate(order)).collect(),
        }
    }

    pub fn require_order(&self, needed: usize) -> Result<()> {
        if self.order < needed {
            return Err(Error::OrderTooLow { needed, have: self.order });
        }
        Ok(())
    }

    /// Parse lines `j1 j2 j3 | i1 i2 i3 | re im`; `#` starts a comment.
    /// Missing entries are zero and the order is the largest `|i|` present.
    pub fn from_text(text: &str, center: [f64; 3]) -> Result<Self> {
        let mut entries = Vec::new();
        let mut order = 0;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: &str| Error::Parse { line: n + 1, msg: msg.to_string() };
            let parts: Vec<&str> = line.split('|').collect();
            if parts.len() != 3 {
                return Err(perr("expected three '|'-separated fields"));
            }
            let j = parse_index(parts[0]).ok_or_else(|| perr("bad operator index"))?;
            let i = parse_index(parts[1]).ok_or_else(|| perr("bad Taylor index"))?;
            if j.degree() > 2 {
                return Err(perr("operator index must have length <= 2"));
            }
            let v: Vec<f64> = parts[2]
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| perr("bad complex value"))?;
            if v.len() != 2 {
                return Err(perr("expected 're im'"));
            }
            order = order.max(i.degree());
            entries.push((j, i, Complex64::new(v[0], v[1])));
        }
        let mut tables = vec![TaylorTable::zeros(center, order); 10];
        for (j, i, v) in entries {
            tables[j.numbering()].set(i, v);
        }
        Self::new(center, tables)
    }

    /// Inverse of [`PdeCoefficients::from_text`]; zero entries are skipped.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for j in OPERATOR_INDICES {
            for (i, v) in self.table(j).iter() {
                if v != Complex64::new(0.0, 0.0) {
                    let _ = writeln!(s, "{j} | {i} | {:e} {:e}", v.re, v.im);
                }
            }
        }
        s
    }
}

fn parse_index(s: &str) -> Option<MultiIndex> {
    let v: Vec<u8> = s.split_whitespace().map(|t| t.parse().ok()).collect::<Option<_>>()?;
    (v.len() == 3).then(|| MultiIndex::new(v[0], v[1], v[2]))
}

/// Coefficients of a built-in test operator at `center`, exact to `order`.
pub fn builtin_operator(case: BuiltinCase, kappa: f64, m0: f64, center: [f64; 3], order: usize) -> PdeCoefficients {
    let one = Complex64::new(1.0, 0.0);
    let k2 = kappa * kappa;
    let mut tables = vec![TaylorTable::zeros(center, order); 10];
    for k in 0..3 {
        tables[second(k, k).numbering()] = TaylorTable::constant(center, order, one);
    }
    // affine zeroth-order term κ²(1 - x_axis)
    let mut affine = |axis: usize| {
        let mut c0 = TaylorTable::constant(center, order, Complex64::new(k2 * (1.0 - center[axis]), 0.0));
        if order >= 1 {
            c0.set(MultiIndex::unit(axis), Complex64::new(-k2, 0.0));
        }
        tables[0] = c0;
    };
    match case {
        BuiltinCase::HelmholtzConst => {
            tables[0] = TaylorTable::constant(center, order, Complex64::new(k2, 0.0));
        }
        BuiltinCase::HelmholtzAiry => affine(0),
        BuiltinCase::ConvectedAiry => {
            affine(2);
            tables[second(2, 2).numbering()] = TaylorTable::constant(center, order, Complex64::new(1.0 - m0 * m0, 0.0));
            tables[MultiIndex::unit(2).numbering()] =
                TaylorTable::constant(center, order, Complex64::new(0.0, 2.0 * kappa * m0));
        }
    }
    PdeCoefficients { center, order, tables }
}

/// Coefficients of the convected Helmholtz operator from Taylor tables of the
/// density `ρ` and Mach vector `M`. The result has order `order - 1`, since
/// first derivatives of the flow enter.
///
/// This uses the sign convention `-∇·(ρ(∇φ - (M·∇φ)M + iκφM)) - ρ(κ²φ + iκM·∇φ)`,
/// the opposite overall sign of the built-ins.
pub fn coefficients_from_flow(rho: &TaylorTable, mach: [&TaylorTable; 3], kappa: f64) -> Result<PdeCoefficients> {
    let center = rho.center();
    let r0 = rho.get(MultiIndex::ZERO);
    if r0.im != 0.0 || r0.re <= 0.0 {
        return Err(Error::NonPositiveDensity(r0.re));
    }
    let speed = mach.iter().map(|m| m.get(MultiIndex::ZERO).norm_sqr()).sum::<f64>().sqrt();
    if speed >= 1.0 {
        return Err(Error::Supersonic(speed));
    }
    let base = mach.iter().map(|m| m.order()).chain([rho.order()]).min().unwrap_or(0);
    if base == 0 {
        return Err(Error::OrderTooLow { needed: 1, have: 0 });
    }
    let order = base - 1;
    let rho = rho.truncate(base);
    let m: Vec<TaylorTable> = mach.iter().map(|t| t.truncate(base)).collect();
    let d = |t: &TaylorTable, k: usize| t.derivative(MultiIndex::unit(k));
    let one = Complex64::new(1.0, 0.0);
    let ik = Complex64::new(0.0, kappa);

    let rm: Vec<TaylorTable> = m.iter().map(|mk| rho.product(mk)).collect::<Result<_>>()?;
    let mut div = TaylorTable::zeros(center, order);
    for (k, rmk) in rm.iter().enumerate() {
        div.axpy(one, &d(rmk, k)?)?;
    }

    let mut tables = vec![TaylorTable::zeros(center, order); 10];
    for k in 0..3 {
        let mut mk2 = m[k].product(&m[k])?;
        mk2.axpy(-one, &TaylorTable::constant(center, base, one))?;
        tables[second(k, k).numbering()] = rho.product(&mk2)?.truncate(order);
        for l in (k + 1)..3 {
            tables[second(k, l).numbering()] = rm[k].product(&m[l])?.truncate(order);
        }
        let mut ck = TaylorTable::zeros(center, order);
        for l in 0..3 {
            ck.axpy(one, &rm[l].product(&d(&m[k], l)?)?)?;
        }
        ck.axpy(one, &div.product(&m[k])?)?;
        ck.axpy(-one, &d(&rho, k)?)?;
        ck.axpy(-2.0 * ik, &rm[k])?;
        tables[MultiIndex::unit(k).numbering()] = ck;
    }
    let mut c0 = div.scale(-ik);
    c0.axpy(Complex64::new(-kappa * kappa, 0.0), &rho)?;
    tables[0] = c0;
    PdeCoefficients::new(center, tables)
}
