//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use num_complex::Complex64;
use qtrefftz::multiindex::MultiIndex;
use qtrefftz::taylor::TaylorTable;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Poly = HashMap<[u32; 3], Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_c(r: &mut impl Rng) -> Complex64 {
    c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

pub fn random_table(r: &mut impl Rng, center: [f64; 3], order: usize) -> TaylorTable {
    TaylorTable::from_fn(center, order, |_| random_c(r))
}

/// Sparse polynomial in `y = x - x_C` from a table.
pub fn to_poly(t: &TaylorTable) -> Poly {
    t.iter().map(|(i, v)| (i.as_array().map(u32::from), v)).collect()
}

pub fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, va) in a {
        for (eb, vb) in b {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
            *out.entry(e).or_insert(c(0.0, 0.0)) += va * vb;
        }
    }
    out
}

/// Partial derivative `∂^α` of a polynomial, term by term.
pub fn poly_diff(a: &Poly, alpha: [u32; 3]) -> Poly {
    let mut out = Poly::new();
    for (e, v) in a {
        if (0..3).any(|k| e[k] < alpha[k]) {
            continue;
        }
        let mut f = 1.0;
        for k in 0..3 {
            for t in 0..alpha[k] {
                f *= (e[k] - t) as f64;
            }
        }
        let ne = [e[0] - alpha[0], e[1] - alpha[1], e[2] - alpha[2]];
        *out.entry(ne).or_insert(c(0.0, 0.0)) += v * f;
    }
    out
}

pub fn poly_get(a: &Poly, i: MultiIndex) -> Complex64 {
    a.get(&i.as_array().map(u32::from)).copied().unwrap_or(c(0.0, 0.0))
}

/// Coefficient of `y^i` in `exp(P)` for `P(0) = p0`, from the multiset-partition
/// form of Faa di Bruno: `e^{p0} Σ Π_k P_k^{m_k} / m_k!` over ways of writing
/// `i` as a sum of nonzero multi-indices `k` with multiplicities `m_k`.
pub fn faa_di_bruno_exp(p: &TaylorTable, i: MultiIndex) -> Complex64 {
    let parts: Vec<MultiIndex> = MultiIndex::all_up_to(i.degree()).into_iter().filter(|k| !k.is_zero() && k.le(&i)).collect();
    fn rec(parts: &[MultiIndex], idx: usize, rest: MultiIndex, p: &TaylorTable) -> Complex64 {
        if rest.is_zero() {
            return c(1.0, 0.0);
        }
        if idx == parts.len() {
            return c(0.0, 0.0);
        }
        let k = parts[idx];
        let mut total = rec(parts, idx + 1, rest, p);
        let mut rem = rest;
        let mut weight = c(1.0, 0.0);
        let mut m = 0.0;
        while let Some(r) = rem.checked_sub(&k) {
            m += 1.0;
            weight = weight * p.get(k) / m;
            rem = r;
            total += weight * rec(parts, idx + 1, rem, p);
        }
        total
    }
    p.get(MultiIndex::ZERO).exp() * rec(&parts, 0, i, p)
}

/// Mixed partial derivative `∂^i f(x)` by nested central differences with step `h`.
pub fn fd_derivative(f: &dyn Fn([f64; 3]) -> Complex64, x: [f64; 3], i: MultiIndex, h: f64) -> Complex64 {
    fn rec(f: &dyn Fn([f64; 3]) -> Complex64, x: [f64; 3], counts: [usize; 3], h: f64) -> Complex64 {
        match (0..3).find(|&k| counts[k] > 0) {
            None => f(x),
            Some(k) => {
                let mut less = counts;
                less[k] -= 1;
                let (mut xp, mut xm) = (x, x);
                xp[k] += h;
                xm[k] -= h;
                (rec(f, xp, less, h) - rec(f, xm, less, h)) / (2.0 * h)
            }
        }
    }
    rec(f, x, [i.get(0), i.get(1), i.get(2)], h)
}

/// Gradient by fourth-order central differences.
pub fn fd_gradient(f: &dyn Fn([f64; 3]) -> Complex64, x: [f64; 3], h: f64) -> [Complex64; 3] {
    let mut g = [c(0.0, 0.0); 3];
    for k in 0..3 {
        let at = |s: f64| {
            let mut y = x;
            y[k] += s * h;
            f(y)
        };
        g[k] = (at(-2.0) - 8.0 * at(-1.0) + 8.0 * at(1.0) - at(2.0)) / (12.0 * h);
    }
    g
}
