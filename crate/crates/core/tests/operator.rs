mod common;

use common::*;
use proptest::prelude::*;
use qtrefftz::operator::{apply_operator_taylor, check_hypothesis, det3, symmetric_eigen, Mat3};
use qtrefftz::pde::{builtin_operator, coefficients_from_flow, BuiltinCase, PdeCoefficients, OPERATOR_INDICES};
use qtrefftz::taylor::TaylorTable;
use qtrefftz::Error;

fn flow_constant(m: [f64; 3], rho: f64, order: usize) -> PdeCoefficients {
    let z = [0.3, -0.1, 0.2];
    let ms: Vec<TaylorTable> = m.iter().map(|&v| TaylorTable::constant(z, order, c(v, 0.0))).collect();
    coefficients_from_flow(&TaylorTable::constant(z, order, c(rho, 0.0)), [&ms[0], &ms[1], &ms[2]], 2.5).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn eigen_reconstructs_random_symmetric(v in prop::array::uniform6(-3.0..3.0f64)) {
        let a: Mat3 = [[v[0], v[1], v[2]], [v[1], v[3], v[4]], [v[2], v[4], v[5]]];
        prop_assume!(det3(&a).abs() > 1e-6);
        let (p, d) = symmetric_eigen(&a);
        let norm = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
        for r in 0..3 {
            for s in 0..3 {
                let rec: f64 = (0..3).map(|k| p[r][k] * d[k] * p[s][k]).sum();
                prop_assert!((rec - a[r][s]).abs() <= 1e-12 * norm, "reconstruction {} vs {}", rec, a[r][s]);
                let gram: f64 = (0..3).map(|k| p[k][r] * p[k][s]).sum();
                let delta = f64::from(u8::from(r == s));
                prop_assert!((gram - delta).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn constant_flow_has_no_spatial_variation(m in prop::array::uniform3(-0.55..0.55f64), rho in 0.1..5.0f64) {
        let f = flow_constant(m, rho, 4);
        for j in OPERATOR_INDICES {
            for (i, v) in f.table(j).iter() {
                if !i.is_zero() {
                    prop_assert_eq!(v, c(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn operator_oracle_matches_symbolic_expansion(seed in any::<u64>()) {
        let mut r = rng(seed);
        let z = [0.5, 0.25, -0.75];
        let tables: Vec<TaylorTable> = (0..10).map(|_| random_table(&mut r, z, 5)).collect();
        let coeffs = PdeCoefficients::new(z, tables).unwrap();
        let f = TaylorTable::from_fn(z, 7, |i| if i.degree() <= 5 { random_c(&mut r) } else { c(0.0, 0.0) });
        let out = apply_operator_taylor(&coeffs, &f, 5).unwrap();
        let fp = to_poly(&f);
        let mut sum = Poly::new();
        for j in OPERATOR_INDICES {
            for (e, v) in poly_mul(&to_poly(coeffs.table(j)), &poly_diff(&fp, j.as_array().map(u32::from))) {
                *sum.entry(e).or_insert(c(0.0, 0.0)) += v;
            }
        }
        for (i, v) in out.iter() {
            let want = poly_get(&sum, i);
            prop_assert!((v - want).norm() <= 1e-12 * (1.0 + want.norm()));
        }
    }
}

#[test]
fn subsonic_flows_give_negative_determinant() {
    let mut r = rng(2024);
    for _ in 0..1000 {
        let m = qtrefftz::experiment::random_subsonic(&mut r);
        let st = check_hypothesis(&flow_constant(m, 1.0, 1)).unwrap();
        assert!(st.det() < 0.0, "M = {m:?}, det = {}", st.det());
    }
}

#[test]
fn axial_flow_principal_matrix() {
    let st = check_hypothesis(&flow_constant([0.5, 0.0, 0.0], 1.0, 2)).unwrap();
    let want = [[-0.75, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]];
    assert_eq!(st.c, want);
    assert!((st.det() + 0.75).abs() < 1e-15);
    assert!(st.reconstruction_error() < 1e-15);
}

#[test]
fn flow_input_is_validated() {
    let z = [0.0; 3];
    let one = TaylorTable::constant(z, 2, c(1.0, 0.0));
    let fast = TaylorTable::constant(z, 2, c(1.2, 0.0));
    let zero = TaylorTable::zeros(z, 2);
    assert!(matches!(coefficients_from_flow(&one, [&fast, &zero, &zero], 1.0), Err(Error::Supersonic(_))));
    let neg = TaylorTable::constant(z, 2, c(-1.0, 0.0));
    assert!(matches!(coefficients_from_flow(&neg, [&zero, &zero, &zero], 1.0), Err(Error::NonPositiveDensity(_))));
}

#[test]
fn plane_wave_is_annihilated() {
    let z = [0.0; 3];
    let coeffs = builtin_operator(BuiltinCase::HelmholtzConst, 3.0, 0.0, z, 4);
    let f = TaylorTable::exp_linear(z, 6, [c(0.0, 0.0), c(0.0, 3.0), c(0.0, 0.0)]);
    let out = apply_operator_taylor(&coeffs, &f, 4).unwrap();
    assert!(out.max_abs() < 1e-14);
}

#[test]
fn oracle_requires_enough_order() {
    let z = [0.0; 3];
    let coeffs = builtin_operator(BuiltinCase::HelmholtzConst, 3.0, 0.0, z, 4);
    let f = TaylorTable::zeros(z, 3);
    assert!(matches!(apply_operator_taylor(&coeffs, &f, 2), Err(Error::OrderTooLow { .. })));
    let g = TaylorTable::zeros([1.0, 0.0, 0.0], 6);
    assert!(matches!(apply_operator_taylor(&coeffs, &g, 2), Err(Error::CenterMismatch(..))));
}
