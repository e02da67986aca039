//! Quasi-Trefftz constructions: layer-by-layer substitution for the amplitude
//! GPW, phase GPW and polynomial families, plus their initialization.
//!
//! Every family fixes the unknowns with `i1 ∈ {0,1}` freely and solves one
//! triangular subsystem per layer `ℓ = 0..q-1` for the remaining unknowns of
//! layer `ℓ + 2`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multiindex::{layer_size, MultiIndex};
use crate::operator::check_hypothesis;
use crate::pde::{second, PdeCoefficients};
use crate::taylor::TaylorTable;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `Q(x - x_C) exp(Λ·(x - x_C))`
    Amplitude,
    /// `exp(P(x - x_C))`
    Phase,
    /// `R(x - x_C)`
    Polynomial,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Amplitude => "AMPLITUDE",
            Family::Phase => "PHASE",
            Family::Polynomial => "POLYNOMIAL",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s.to_ascii_uppercase().as_str() {
            "AMPLITUDE" => Some(Family::Amplitude),
            "PHASE" => Some(Family::Phase),
            "POLYNOMIAL" => Some(Family::Polynomial),
            _ => None,
        }
    }
}

/// Angles and scaling used to seed a wave-like function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirectionMeta {
    pub theta: f64,
    pub phi: f64,
    pub s: Complex64,
}

/// One quasi-Trefftz basis function.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisFunction {
    family: Family,
    q: usize,
    poly: TaylorTable,
    lambda: Option<[Complex64; 3]>,
    meta: Option<DirectionMeta>,
}

impl BasisFunction {
    /// Assemble from parts. `poly` is truncated or padded to order `q + 1`.
    pub fn from_parts(family: Family, q: usize, poly: TaylorTable, lambda: Option<[Complex64; 3]>) -> Result<Self> {
        if (family == Family::Amplitude) != lambda.is_some() {
            return Err(Error::Config("an exponent vector is required exactly for the amplitude family".into()));
        }
        Ok(BasisFunction { family, q, poly: poly.truncate(q + 1), lambda, meta: None })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn center(&self) -> [f64; 3] {
        self.poly.center()
    }

    /// Coefficients `μ`, `λ` or `ν` depending on the family.
    pub fn poly(&self) -> &TaylorTable {
        &self.poly
    }

    pub fn poly_mut(&mut self) -> &mut TaylorTable {
        &mut self.poly
    }

    /// Exponent vector `Λ` of the amplitude family.
    pub fn lambda(&self) -> Option<[Complex64; 3]> {
        self.lambda
    }

    pub fn meta(&self) -> Option<DirectionMeta> {
        self.meta
    }
}

/// A direction `d = (sinθ cosφ, sinθ sinφ, cosθ)` labelled by `(l, m)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction {
    pub l: usize,
    pub m: i64,
    pub theta: f64,
    pub phi: f64,
    pub d: [f64; 3],
}

impl Direction {
    pub fn new(l: usize, m: i64, theta: f64, phi: f64) -> Self {
        let d = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
        Direction { l, m, theta, phi, d }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DirectionSet {
    pub n: usize,
    pub entries: Vec<Direction>,
}

/// `(n+1)²` directions with `θ_l = π(l+1)/(n+2)` and `φ_lm = 2π(m+l)/(2l+1)`,
/// `l = 0..n`, `m = -l..l`.
pub fn generate_directions(n: usize) -> DirectionSet {
    let mut entries = Vec::with_capacity((n + 1) * (n + 1));
    for l in 0..=n {
        let theta = PI * (l + 1) as f64 / (n + 2) as f64;
        for m in -(l as i64)..=(l as i64) {
            let phi = 2.0 * PI * (m + l as i64) as f64 / (2 * l + 1) as f64;
            entries.push(Direction::new(l, m, theta, phi));
        }
    }
    DirectionSet { n, entries }
}

/// Values `T_{c_j}[0]` for `|j| = 2`: `c2[k]` for `2e_k` and `cross[k][l]`
/// (`k < l`) for `e_k + e_l`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrincipalPart {
    pub c2: [Complex64; 3],
    pub cross: [[Complex64; 3]; 3],
}

impl PrincipalPart {
    pub fn from_coeffs(coeffs: &PdeCoefficients) -> Result<Self> {
        let mut c2 = [ZERO; 3];
        let mut cross = [[ZERO; 3]; 3];
        for k in 0..3 {
            c2[k] = coeffs.coef(second(k, k), MultiIndex::ZERO);
            for l in (k + 1)..3 {
                cross[k][l] = coeffs.coef(second(k, l), MultiIndex::ZERO);
            }
        }
        if c2[0] == ZERO {
            return Err(Error::HypothesisViolation("c_{2e1}(x_C) = 0".into()));
        }
        Ok(PrincipalPart { c2, cross })
    }

    /// Helmholtz-type principal part: identity, no cross terms.
    pub fn laplacian() -> Self {
        let one = Complex64::new(1.0, 0.0);
        PrincipalPart { c2: [one; 3], cross: [[ZERO; 3]; 3] }
    }
}

/// Solve the layer-`ℓ` subsystem for the unknowns of layer `ℓ + 2`.
///
/// `rhs` is indexed by the in-layer numbering of `|β| = ℓ`; `fixed` and the
/// result by that of `|i| = ℓ + 2`. Only the entries of `fixed` with
/// `i1 ∈ {0,1}` are read. Each remaining unknown `ξ_{β+2e1}` is written exactly
/// once, in an order where everything on the right-hand side is known.
pub fn solve_subsystem(l: usize, rhs: &[Complex64], principal: &PrincipalPart, fixed: &[Complex64]) -> Result<Vec<Complex64>> {
    if rhs.len() != layer_size(l) || fixed.len() != layer_size(l + 2) {
        return Err(Error::Config("subsystem vectors have the wrong length".into()));
    }
    if principal.c2[0] == ZERO {
        return Err(Error::ZeroPivot);
    }
    let mut xi: Vec<Option<Complex64>> = vec![None; layer_size(l + 2)];
    for i in MultiIndex::layer(l + 2) {
        if i.get(0) <= 1 {
            xi[i.layer_position()] = Some(fixed[i.layer_position()]);
        }
    }
    let known = |xi: &[Option<Complex64>], i: MultiIndex| xi[i.layer_position()].expect("unknown read before it was solved");
    let pc = &principal;
    for b1 in 0..=l {
        for b2 in 0..=(l - b1) {
            let beta = MultiIndex::new(b1 as u8, b2 as u8, (l - b1 - b2) as u8);
            let mut acc = rhs[beta.layer_position()];
            for k in 1..3 {
                let bk = beta.get(k) as f64;
                acc -= (bk + 2.0) * (bk + 1.0) * pc.c2[k] * known(&xi, beta + second(k, k));
            }
            for k in 0..3 {
                for kk in (k + 1)..3 {
                    let c = pc.cross[k][kk];
                    if c != ZERO {
                        let f = (beta.get(k) as f64 + 1.0) * (beta.get(kk) as f64 + 1.0);
                        acc -= f * c * known(&xi, beta + second(k, kk));
                    }
                }
            }
            let b1f = b1 as f64;
            let target = (beta + second(0, 0)).layer_position();
            assert!(xi[target].is_none(), "unknown written twice");
            xi[target] = Some(acc / ((b1f + 2.0) * (b1f + 1.0) * pc.c2[0]));
        }
    }
    Ok(xi.into_iter().map(|v| v.expect("unknown left unsolved")).collect())
}

/// Right-hand side `B_β` of the linear families: the amplitude family with
/// exponent `Λ`, or the polynomial family when `Λ = 0`. Terms of layer
/// `|β| + 2`, which form the subsystem itself, are left out.
fn linear_rhs(coeffs: &PdeCoefficients, u: &TaylorTable, lam: &[Complex64; 3], beta: MultiIndex) -> Complex64 {
    let mut sum = ZERO;
    for gamma in beta.lower_set() {
        let rest = beta.checked_sub(&gamma).unwrap();
        let top = gamma == beta;
        let g = |k: usize| gamma.get(k) as f64;
        let ug = u.get(gamma);
        for k in 0..3 {
            let c = coeffs.coef(second(k, k), rest);
            if c != ZERO {
                let mut t = 2.0 * lam[k] * (g(k) + 1.0) * u.get(gamma + MultiIndex::unit(k)) + lam[k] * lam[k] * ug;
                if !top {
                    t += (g(k) + 2.0) * (g(k) + 1.0) * u.get(gamma + second(k, k));
                }
                sum += c * t;
            }
            for kk in (k + 1)..3 {
                let c = coeffs.coef(second(k, kk), rest);
                if c != ZERO {
                    let mut t = lam[k] * (g(kk) + 1.0) * u.get(gamma + MultiIndex::unit(kk))
                        + lam[kk] * (g(k) + 1.0) * u.get(gamma + MultiIndex::unit(k))
                        + lam[k] * lam[kk] * ug;
                    if !top {
                        t += (g(k) + 1.0) * (g(kk) + 1.0) * u.get(gamma + second(k, kk));
                    }
                    sum += c * t;
                }
            }
            let c = coeffs.coef(MultiIndex::unit(k), rest);
            if c != ZERO {
                sum += c * ((g(k) + 1.0) * u.get(gamma + MultiIndex::unit(k)) + lam[k] * ug);
            }
        }
        sum += coeffs.coef(MultiIndex::ZERO, rest) * ug;
    }
    -sum
}

/// Right-hand side `B_β` of the phase family.
fn phase_rhs(coeffs: &PdeCoefficients, u: &TaylorTable, beta: MultiIndex) -> Complex64 {
    // T_{∂_k P}[η] = (η_k + 1) λ_{η+e_k}
    let grad = |k: usize, eta: MultiIndex| (eta.get(k) as f64 + 1.0) * u.get(eta + MultiIndex::unit(k));
    let mut sum = ZERO;
    for gamma in beta.lower_set() {
        let rest = beta.checked_sub(&gamma).unwrap();
        let top = gamma == beta;
        let g = |k: usize| gamma.get(k) as f64;
        let quad = |k: usize, kk: usize| -> Complex64 {
            gamma.lower_set().map(|eta| grad(kk, gamma.checked_sub(&eta).unwrap()) * grad(k, eta)).sum()
        };
        for k in 0..3 {
            let c = coeffs.coef(second(k, k), rest);
            if c != ZERO {
                let mut t = quad(k, k);
                if !top {
                    t += (g(k) + 2.0) * (g(k) + 1.0) * u.get(gamma + second(k, k));
                }
                sum += c * t;
            }
            for kk in (k + 1)..3 {
                let c = coeffs.coef(second(k, kk), rest);
                if c != ZERO {
                    let mut t = quad(k, kk);
                    if !top {
                        t += (g(k) + 1.0) * (g(kk) + 1.0) * u.get(gamma + second(k, kk));
                    }
                    sum += c * t;
                }
            }
            let c = coeffs.coef(MultiIndex::unit(k), rest);
            if c != ZERO {
                sum += c * grad(k, gamma);
            }
        }
    }
    -sum - coeffs.coef(MultiIndex::ZERO, beta)
}

/// Run the layer loop on a table whose free slots are already initialized.
fn fill_layers(
    coeffs: &PdeCoefficients,
    q: usize,
    u: &mut TaylorTable,
    rhs: impl Fn(&TaylorTable, MultiIndex) -> Complex64,
) -> Result<()> {
    let principal = PrincipalPart::from_coeffs(coeffs)?;
    for l in 0..q {
        let mut b = vec![ZERO; layer_size(l)];
        for beta in MultiIndex::layer(l) {
            b[beta.layer_position()] = rhs(u, beta);
        }
        let upper = MultiIndex::layer_in_numbering(l + 2);
        let fixed: Vec<Complex64> = upper.iter().map(|&i| u.get(i)).collect();
        let xi = solve_subsystem(l, &b, &principal, &fixed)?;
        for i in upper {
            u.set(i, xi[i.layer_position()]);
        }
    }
    Ok(())
}

fn check_order(coeffs: &PdeCoefficients, q: usize) -> Result<()> {
    if q == 0 {
        return Err(Error::Config("quasi-Trefftz order q must be at least 1".into()));
    }
    coeffs.require_order(q + 1)
}

/// Exponent `𝔰 P D^{-1/2} d` for a unit direction `d`.
pub fn seed_exponent(coeffs: &PdeCoefficients, s: Complex64, d: [f64; 3]) -> Result<[Complex64; 3]> {
    let st = check_hypothesis(coeffs)?;
    Ok(st.seed_direction(d).map(|v| v * s))
}

/// Default scaling `𝔰 = i sqrt|c_0(x_C)|`, or `i` where `c_0` vanishes.
pub fn default_s(coeffs: &PdeCoefficients) -> Complex64 {
    let c0 = coeffs.coef(MultiIndex::ZERO, MultiIndex::ZERO).norm();
    if c0 > 0.0 {
        Complex64::new(0.0, c0.sqrt())
    } else {
        Complex64::new(0.0, 1.0)
    }
}

/// Amplitude GPW with `μ_0 = 1`, `Λ = 𝔰 P D^{-1/2} d` and all other free slots zero.
pub fn construct_amplitude_gpw(coeffs: &PdeCoefficients, q: usize, s: Complex64, d: [f64; 3]) -> Result<BasisFunction> {
    check_order(coeffs, q)?;
    let lam = seed_exponent(coeffs, s, d)?;
    let mut u = TaylorTable::constant(coeffs.center(), q + 1, Complex64::new(1.0, 0.0));
    fill_layers(coeffs, q, &mut u, |u, beta| linear_rhs(coeffs, u, &lam, beta))?;
    Ok(BasisFunction { family: Family::Amplitude, q, poly: u, lambda: Some(lam), meta: None })
}

/// Phase GPW with `λ_0 = 0`, `(λ_{e_k})_k = 𝔰 P D^{-1/2} d` and other free slots zero.
pub fn construct_phase_gpw(coeffs: &PdeCoefficients, q: usize, s: Complex64, d: [f64; 3]) -> Result<BasisFunction> {
    check_order(coeffs, q)?;
    let lam = seed_exponent(coeffs, s, d)?;
    let mut u = TaylorTable::zeros(coeffs.center(), q + 1);
    for k in 0..3 {
        u.set(MultiIndex::unit(k), lam[k]);
    }
    fill_layers(coeffs, q, &mut u, |u, beta| phase_rhs(coeffs, u, beta))?;
    Ok(BasisFunction { family: Family::Phase, q, poly: u, lambda: None, meta: None })
}

/// Canonical polynomial quasi-Trefftz function: `ν_i = δ_{i,seed}` on the free slots.
pub fn construct_polynomial_qt(coeffs: &PdeCoefficients, q: usize, seed: MultiIndex) -> Result<BasisFunction> {
    check_order(coeffs, q)?;
    if seed.get(0) > 1 || seed.degree() > q + 1 {
        return Err(Error::InvalidSeed(seed.as_array(), q + 1));
    }
    let mut u = TaylorTable::monomial(coeffs.center(), q + 1, seed, Complex64::new(1.0, 0.0));
    let zero = [ZERO; 3];
    fill_layers(coeffs, q, &mut u, |u, beta| linear_rhs(coeffs, u, &zero, beta))?;
    Ok(BasisFunction { family: Family::Polynomial, q, poly: u, lambda: None, meta: None })
}

/// Free slots `|i| <= q+1`, `i1 ∈ {0,1}`, sorted by `≺`.
pub fn polynomial_seeds(q: usize) -> Vec<MultiIndex> {
    (0..=q + 1).flat_map(MultiIndex::layer).filter(|i| i.get(0) <= 1).collect()
}

/// Quasi-Trefftz order used for approximation order `n`.
pub fn q_for(n: usize) -> usize {
    n.saturating_sub(1).max(1)
}

/// The `(n+1)²` functions of one family, with `q = max(n-1, 1)`. For the
/// polynomial family at `n = 1` the first four seeds in `≺` order are used.
pub fn build_basis(coeffs: &PdeCoefficients, n: usize, family: Family, s: Option<Complex64>) -> Result<Vec<BasisFunction>> {
    if n == 0 {
        return Err(Error::Config("n must be at least 1".into()));
    }
    let q = q_for(n);
    let p = (n + 1) * (n + 1);
    match family {
        Family::Polynomial => {
            polynomial_seeds(q).into_iter().take(p).map(|seed| construct_polynomial_qt(coeffs, q, seed)).collect()
        }
        Family::Amplitude | Family::Phase => {
            let s = s.unwrap_or_else(|| default_s(coeffs));
            generate_directions(n)
                .entries
                .iter()
                .map(|dir| {
                    let mut b = if family == Family::Amplitude {
                        construct_amplitude_gpw(coeffs, q, s, dir.d)?
                    } else {
                        construct_phase_gpw(coeffs, q, s, dir.d)?
                    };
                    b.meta = Some(DirectionMeta { theta: dir.theta, phi: dir.phi, s });
                    Ok(b)
                })
                .collect()
        }
    }
}

/// Classical plane waves `exp(iκ d·(x - x_C))` over the standard direction set,
/// stored as amplitude functions with `Q ≡ 1`.
pub fn plane_wave_basis(center: [f64; 3], n: usize, kappa: f64) -> Vec<BasisFunction> {
    let q = q_for(n);
    generate_directions(n)
        .entries
        .iter()
        .map(|dir| BasisFunction {
            family: Family::Amplitude,
            q,
            poly: TaylorTable::constant(center, q + 1, Complex64::new(1.0, 0.0)),
            lambda: Some(dir.d.map(|v| Complex64::new(0.0, kappa * v))),
            meta: Some(DirectionMeta { theta: dir.theta, phi: dir.phi, s: Complex64::new(0.0, kappa) }),
        })
        .collect()
}

/// Text dump: a `CENTER x y z` line, then per function a line
/// `FAMILY q | i1 i2 i3 re im | ...` and, for amplitude functions,
/// `LAMBDA re im re im re im`.
pub fn basis_to_text(basis: &[BasisFunction]) -> String {
    let mut s = String::new();
    if let Some(b) = basis.first() {
        let c = b.center();
        let _ = writeln!(s, "CENTER {:e} {:e} {:e}", c[0], c[1], c[2]);
    }
    for b in basis {
        let _ = write!(s, "{} {}", b.family.name(), b.q);
        for (i, v) in b.poly.iter() {
            let _ = write!(s, " | {i} {:e} {:e}", v.re, v.im);
        }
        s.push('\n');
        if let Some(l) = b.lambda {
            let _ = writeln!(s, "LAMBDA {:e} {:e} {:e} {:e} {:e} {:e}", l[0].re, l[0].im, l[1].re, l[1].im, l[2].re, l[2].im);
        }
    }
    s
}

/// Inverse of [`basis_to_text`].
pub fn basis_from_text(text: &str) -> Result<Vec<BasisFunction>> {
    let mut center = [0.0; 3];
    let mut out: Vec<BasisFunction> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let perr = |msg: &str| Error::Parse { line: n + 1, msg: msg.to_string() };
        let nums = |s: &str| -> Result<Vec<f64>> {
            s.split_whitespace().map(|t| t.parse::<f64>().map_err(|_| perr("bad number"))).collect()
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("CENTER") {
            let v = nums(rest)?;
            center = v.try_into().map_err(|_| perr("CENTER needs three values"))?;
        } else if let Some(rest) = line.strip_prefix("LAMBDA") {
            let v = nums(rest)?;
            if v.len() != 6 {
                return Err(perr("LAMBDA needs six values"));
            }
            let b = out.last_mut().filter(|b| b.family == Family::Amplitude).ok_or_else(|| perr("LAMBDA without amplitude function"))?;
            b.lambda = Some([0, 1, 2].map(|k| Complex64::new(v[2 * k], v[2 * k + 1])));
        } else {
            let mut parts = line.split('|');
            let head: Vec<&str> = parts.next().unwrap_or("").split_whitespace().collect();
            if head.len() != 2 {
                return Err(perr("expected 'FAMILY q'"));
            }
            let family = Family::parse(head[0]).ok_or_else(|| perr("unknown family"))?;
            let q: usize = head[1].parse().map_err(|_| perr("bad q"))?;
            let mut poly = TaylorTable::zeros(center, q + 1);
            for entry in parts {
                let v = nums(entry)?;
                if v.len() != 5 || v[..3].iter().any(|x| *x < 0.0 || x.fract() != 0.0) {
                    return Err(perr("expected 'i1 i2 i3 re im'"));
                }
                let i = MultiIndex::new(v[0] as u8, v[1] as u8, v[2] as u8);
                if i.degree() > q + 1 {
                    return Err(perr("coefficient beyond degree q+1"));
                }
                poly.set(i, Complex64::new(v[3], v[4]));
            }
            out.push(BasisFunction { family, q, poly, lambda: None, meta: None });
        }
    }
    if out.iter().any(|b| b.family == Family::Amplitude && b.lambda.is_none()) {
        return Err(Error::Parse { line: 0, msg: "amplitude function without LAMBDA line".into() });
    }
    Ok(out)
}
