//! Closed-form solutions of the three reference problems.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::airy::airy_derivs;
use crate::error::{Error, Result};
use crate::multiindex::factorial;
use crate::pde::{builtin_operator, BuiltinCase, PdeCoefficients};
use crate::taylor::TaylorTable;

pub const MAX_TAYLOR_ORDER: usize = 12;
pub const CENTER_SEED: u64 = 0x5EED;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseId {
    /// `Δu + κ²u = 0`, `u = exp(iκy)`
    Tc1,
    /// `Δu + κ²(1-x)u = 0`, `u = Ai(κ^{2/3}x) exp(iκ(y+z)/√2)`
    Tc2,
    /// convected variant with Airy profile in `z`
    Tc3,
}

impl CaseId {
    pub fn parse(s: &str) -> Option<CaseId> {
        match s.to_ascii_lowercase().as_str() {
            "tc1" | "1" => Some(CaseId::Tc1),
            "tc2" | "2" => Some(CaseId::Tc2),
            "tc3" | "3" => Some(CaseId::Tc3),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CaseId::Tc1 => "tc1",
            CaseId::Tc2 => "tc2",
            CaseId::Tc3 => "tc3",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestCase {
    pub id: CaseId,
    pub kappa: f64,
    pub m0: f64,
    /// `[lo, hi]` per axis.
    pub bounds: [[f64; 2]; 3],
}

impl TestCase {
    pub fn new(id: CaseId) -> Self {
        match id {
            CaseId::Tc1 => TestCase { id, kappa: 3.0, m0: 0.0, bounds: [[-1.0, 1.0], [0.0, 2.0 * PI], [-1.0, 1.0]] },
            CaseId::Tc2 => TestCase { id, kappa: 2.0, m0: 0.0, bounds: [[-2.0, 2.0]; 3] },
            CaseId::Tc3 => TestCase { id, kappa: 2.0, m0: 0.2, bounds: [[-2.0, 2.0]; 3] },
        }
    }

    pub fn builtin(&self) -> BuiltinCase {
        match self.id {
            CaseId::Tc1 => BuiltinCase::HelmholtzConst,
            CaseId::Tc2 => BuiltinCase::HelmholtzAiry,
            CaseId::Tc3 => BuiltinCase::ConvectedAiry,
        }
    }

    pub fn operator(&self, center: [f64; 3], order: usize) -> PdeCoefficients {
        builtin_operator(self.builtin(), self.kappa, self.m0, center, order)
    }

    /// `count` points drawn uniformly in the box.
    pub fn centers(&self, count: usize, seed: u64) -> Vec<[f64; 3]> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| [0, 1, 2].map(|k| rng.gen_range(self.bounds[k][0]..self.bounds[k][1])))
            .collect()
    }

    fn s3(&self) -> f64 {
        1.0 - self.m0 * self.m0
    }

    /// Airy scaling and axis, and the wave numbers of the three exponential factors.
    fn factors(&self) -> (f64, usize, [f64; 3]) {
        let k = self.kappa;
        match self.id {
            CaseId::Tc1 => (0.0, 0, [0.0, k, 0.0]),
            CaseId::Tc2 => (k.powf(2.0 / 3.0), 0, [0.0, k / SQRT_2, k / SQRT_2]),
            CaseId::Tc3 => {
                let s = self.s3();
                let b = k / (2.0 * s).sqrt();
                ((k * k / s).cbrt(), 2, [b, b, -k * self.m0 / s])
            }
        }
    }
}

/// `u(x)`.
pub fn solution_value(tc: &TestCase, x: [f64; 3]) -> Result<Complex64> {
    Ok(solution_value_gradient(tc, x)?.0)
}

/// `∇u(x)`.
pub fn solution_gradient(tc: &TestCase, x: [f64; 3]) -> Result<[Complex64; 3]> {
    Ok(solution_value_gradient(tc, x)?.1)
}

pub fn solution_value_gradient(tc: &TestCase, x: [f64; 3]) -> Result<(Complex64, [Complex64; 3])> {
    let (a, axis, w) = tc.factors();
    let phase = Complex64::new(0.0, w[0] * x[0] + w[1] * x[1] + w[2] * x[2]).exp();
    let (amp, damp) = if tc.id == CaseId::Tc1 {
        (1.0, 0.0)
    } else {
        let d = airy_derivs(a * x[axis], 1)?;
        (d[0], a * d[1])
    };
    let u = phase * amp;
    let mut g = w.map(|wk| Complex64::new(0.0, wk) * u);
    g[axis] += phase * damp;
    Ok((u, g))
}

fn exp_1d(x0: f64, w: f64, order: usize) -> Vec<Complex64> {
    let iw = Complex64::new(0.0, w);
    let base = (iw * x0).exp();
    (0..=order).map(|k| base * iw.powu(k as u32) / factorial(k)).collect()
}

/// Taylor table of `u` at `center`, `order <= 12`.
pub fn solution_taylor(tc: &TestCase, center: [f64; 3], order: usize) -> Result<TaylorTable> {
    if order > MAX_TAYLOR_ORDER {
        return Err(Error::OrderTooLow { needed: order, have: MAX_TAYLOR_ORDER });
    }
    let (a, axis, w) = tc.factors();
    let mut one_d: Vec<Vec<Complex64>> = (0..3).map(|k| exp_1d(center[k], w[k], order)).collect();
    if tc.id != CaseId::Tc1 {
        let d = airy_derivs(a * center[axis], order)?;
        let airy: Vec<f64> = d.iter().enumerate().map(|(k, v)| v * a.powi(k as i32) / factorial(k)).collect();
        let e = &one_d[axis];
        let conv: Vec<Complex64> = (0..=order).map(|m| (0..=m).map(|j| e[m - j] * airy[j]).sum()).collect();
        one_d[axis] = conv;
    }
    Ok(TaylorTable::from_fn(center, order, |i| one_d[0][i.get(0)] * one_d[1][i.get(1)] * one_d[2][i.get(2)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex::MultiIndex;

    #[test]
    fn point_values() {
        let t1 = TestCase::new(CaseId::Tc1);
        assert!((solution_value(&t1, [0.0; 3]).unwrap() - 1.0).norm() < 1e-15);
        let v = solution_value(&t1, [0.3, PI / 2.0, -0.2]).unwrap();
        assert!((v - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        let t2 = TestCase::new(CaseId::Tc2);
        assert!((solution_value(&t2, [0.0; 3]).unwrap() - 0.355_028_053_887_817_2).norm() < 1e-15);
    }

    #[test]
    fn tc1_table() {
        let t1 = TestCase::new(CaseId::Tc1);
        let t = solution_taylor(&t1, [0.0; 3], 5).unwrap();
        assert!((t.get(MultiIndex::new(0, 2, 0)) + 4.5).norm() < 1e-14);
        for (i, v) in t.iter() {
            if i.get(0) + i.get(2) > 0 {
                assert_eq!(v, Complex64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn centers_are_deterministic_and_inside() {
        let tc = TestCase::new(CaseId::Tc1);
        let a = tc.centers(20, CENTER_SEED);
        assert_eq!(a, tc.centers(20, CENTER_SEED));
        for c in a {
            for k in 0..3 {
                assert!(c[k] >= tc.bounds[k][0] && c[k] < tc.bounds[k][1]);
            }
        }
    }

    #[test]
    fn order_limit() {
        let tc = TestCase::new(CaseId::Tc2);
        assert!(solution_taylor(&tc, [0.0; 3], 13).is_err());
    }
}
