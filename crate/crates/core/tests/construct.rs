mod common;

use common::*;
use proptest::prelude::*;
use qtrefftz::construct::*;
use qtrefftz::eval::assemble_matrix;
use qtrefftz::exact::{CaseId, TestCase};
use qtrefftz::linalg::{numerical_rank, RANK_TOL};
use qtrefftz::multiindex::MultiIndex;
use qtrefftz::operator::{check_hypothesis, residual_magnitude};
use qtrefftz::pde::{builtin_operator, coefficients_from_flow, second, BuiltinCase, PdeCoefficients, OPERATOR_INDICES};
use qtrefftz::taylor::TaylorTable;
use qtrefftz::Error;

const FAMILIES: [Family; 3] = [Family::Amplitude, Family::Phase, Family::Polynomial];

/// Random operator with a real, nonsingular principal part at the center and
/// complex variable coefficients everywhere else.
fn random_operator(seed: u64, order: usize) -> PdeCoefficients {
    let mut r = rng(seed);
    let z = [0.2, -0.4, 0.1];
    loop {
        let mut tables: Vec<TaylorTable> = (0..10).map(|_| random_table(&mut r, z, order)).collect();
        let mut principal = [[0.0; 3]; 3];
        for k in 0..3 {
            for l in k..3 {
                let v = if k == l { 1.0 + rand::Rng::gen_range(&mut r, 0.0..1.0) } else { rand::Rng::gen_range(&mut r, -0.6..0.6) };
                tables[second(k, l).numbering()].set(MultiIndex::ZERO, c(v, 0.0));
                let half = if k == l { v } else { v / 2.0 };
                principal[k][l] = half;
                principal[l][k] = half;
            }
        }
        if qtrefftz::operator::det3(&principal).abs() > 1e-2 {
            return PdeCoefficients::new(z, tables).unwrap();
        }
    }
}

/// Smooth subsonic flow with random Taylor data around a base state.
fn random_flow(seed: u64, order: usize) -> PdeCoefficients {
    let mut r = rng(seed);
    let z = [0.0, 0.5, -0.5];
    let perturbed = |r: &mut rand_chacha::ChaCha8Rng, base: f64| {
        TaylorTable::from_fn(z, order, |i| if i.is_zero() { c(base, 0.0) } else { c(0.2 * rand::Rng::gen_range(r, -1.0..1.0), 0.0) })
    };
    let rho = perturbed(&mut r, 1.3);
    let m = qtrefftz::experiment::random_subsonic(&mut r).map(|v| 0.9 * v);
    let ms: Vec<TaylorTable> = m.iter().map(|&v| perturbed(&mut r, v)).collect();
    coefficients_from_flow(&rho, [&ms[0], &ms[1], &ms[2]], 1.8).unwrap()
}

fn worst_residual(coeffs: &PdeCoefficients, basis: &[BasisFunction]) -> f64 {
    basis.iter().map(|b| residual_magnitude(coeffs, b, b.q()).unwrap()).fold(0.0, f64::max) / coeffs.magnitude()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_operators_give_quasi_trefftz_functions(seed in any::<u64>(), n in 1usize..=5) {
        let coeffs = random_operator(seed, q_for(n) + 1);
        for fam in FAMILIES {
            let basis = build_basis(&coeffs, n, fam, None).unwrap();
            prop_assert_eq!(basis.len(), (n + 1) * (n + 1));
            let res = worst_residual(&coeffs, &basis);
            prop_assert!(res <= 1e-10, "{:?} n={} residual {:e}", fam, n, res);
        }
    }

    #[test]
    fn flow_operators_give_quasi_trefftz_functions(seed in any::<u64>(), n in 1usize..=5) {
        let coeffs = random_flow(seed, q_for(n) + 2);
        let st = check_hypothesis(&coeffs).unwrap();
        prop_assert!(st.det() < 0.0);
        for fam in FAMILIES {
            let basis = build_basis(&coeffs, n, fam, None).unwrap();
            let res = worst_residual(&coeffs, &basis);
            prop_assert!(res <= 1e-10, "{:?} n={} residual {:e}", fam, n, res);
        }
    }

    #[test]
    fn seed_invariant_holds_for_any_direction(seed in any::<u64>(), theta in 0.0..std::f64::consts::PI, phi in 0.0..6.3f64) {
        let coeffs = random_flow(seed, 3);
        let st = check_hypothesis(&coeffs).unwrap();
        let s = default_s(&coeffs);
        let d = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
        let lam = seed_exponent(&coeffs, s, d).unwrap();
        let mut v = c(0.0, 0.0);
        for r in 0..3 {
            for t in 0..3 {
                v += lam[r] * st.c[r][t] * lam[t];
            }
        }
        prop_assert!((v - s * s).norm() <= 1e-12 * (s * s).norm());
    }

    #[test]
    fn positive_scaling_leaves_tables_unchanged(seed in any::<u64>(), scale in 0.1..10.0f64, n in 1usize..=4) {
        let coeffs = random_operator(seed, q_for(n) + 1);
        let scaled = coeffs.scale(c(scale, 0.0));
        for fam in FAMILIES {
            let a = build_basis(&coeffs, n, fam, None).unwrap();
            let b = build_basis(&scaled, n, fam, None).unwrap();
            for (fa, fb) in a.iter().zip(&b) {
                for (i, v) in fa.poly().iter() {
                    prop_assert!((v - fb.poly().get(i)).norm() <= 1e-10 * (1.0 + v.norm()));
                }
            }
        }
    }

    #[test]
    fn polynomial_family_is_invariant_under_complex_scaling(seed in any::<u64>(), re in -3.0..3.0f64, im in -3.0..3.0f64) {
        let s = c(re, im);
        prop_assume!(s.norm() > 0.1);
        let coeffs = random_operator(seed, 4);
        let a = build_basis(&coeffs, 4, Family::Polynomial, None).unwrap();
        let b = build_basis(&coeffs.scale(s), 4, Family::Polynomial, None).unwrap();
        for (fa, fb) in a.iter().zip(&b) {
            for (i, v) in fa.poly().iter() {
                prop_assert!((v - fb.poly().get(i)).norm() <= 1e-10 * (1.0 + v.norm()));
            }
        }
    }
}

#[test]
fn test_case_operators_on_grid() {
    let mut worst: f64 = 0.0;
    for id in [CaseId::Tc1, CaseId::Tc2, CaseId::Tc3] {
        let tc = TestCase::new(id);
        for center in tc.centers(3, 11) {
            for n in 1..=6 {
                let coeffs = tc.operator(center, q_for(n) + 1);
                for fam in FAMILIES {
                    worst = worst.max(worst_residual(&coeffs, &build_basis(&coeffs, n, fam, None).unwrap()));
                }
            }
        }
    }
    assert!(worst <= 1e-10, "worst residual {worst:e}");
}

#[test]
fn helmholtz_gpws_are_plane_waves() {
    for center in [[0.0; 3], [0.3, 4.0, -0.7]] {
        for n in 1..=6 {
            let coeffs = builtin_operator(BuiltinCase::HelmholtzConst, 3.0, 0.0, center, q_for(n) + 1);
            for fam in [Family::Amplitude, Family::Phase] {
                for b in build_basis(&coeffs, n, fam, Some(c(0.0, 3.0))).unwrap() {
                    for (i, v) in b.poly().iter() {
                        let init = match fam {
                            Family::Amplitude if i.is_zero() => c(1.0, 0.0),
                            Family::Phase if i.degree() == 1 => v,
                            _ => c(0.0, 0.0),
                        };
                        assert!((v - init).norm() <= 1e-13, "{fam:?} n={n} {i:?}: {v}");
                    }
                }
            }
        }
    }
}

#[test]
fn airy_operator_layer_zero_examples() {
    let coeffs = builtin_operator(BuiltinCase::HelmholtzAiry, 2.0, 0.0, [0.0; 3], 3);
    let s = c(0.0, 2.0);
    let e3 = [0.0, 0.0, 1.0];
    let a = construct_amplitude_gpw(&coeffs, 1, s, e3).unwrap();
    assert!(a.poly().get(MultiIndex::new(2, 0, 0)).norm() < 1e-15);
    assert!(residual_magnitude(&coeffs, &a, 1).unwrap() < 1e-14);
    let p = construct_phase_gpw(&coeffs, 2, s, e3).unwrap();
    assert!(p.poly().get(MultiIndex::new(2, 0, 0)).norm() < 1e-15);
    // c_0 = 4 - 4x: the x-slope forces λ_{3e1} = 4/6
    assert!((p.poly().get(MultiIndex::new(3, 0, 0)) - c(4.0 / 6.0, 0.0)).norm() < 1e-14);
    assert!(residual_magnitude(&coeffs, &p, 2).unwrap() < 1e-13);
}

#[test]
fn polynomial_seed_examples() {
    let coeffs = random_operator(5, 2);
    let b = construct_polynomial_qt(&coeffs, 1, MultiIndex::new(0, 1, 0)).unwrap();
    assert_eq!(b.poly().get(MultiIndex::new(0, 1, 0)), c(1.0, 0.0));
    assert_eq!(b.poly().get(MultiIndex::ZERO), c(0.0, 0.0));
    assert!(residual_magnitude(&coeffs, &b, 1).unwrap() < 1e-14);
    assert!(matches!(construct_polynomial_qt(&coeffs, 1, MultiIndex::new(2, 0, 0)), Err(Error::InvalidSeed(..))));
    assert!(matches!(construct_polynomial_qt(&coeffs, 1, MultiIndex::new(0, 3, 0)), Err(Error::InvalidSeed(..))));
}

#[test]
fn polynomial_space_dimension() {
    let coeffs = random_operator(9, 7);
    for q in 1..=6 {
        let seeds = polynomial_seeds(q);
        assert_eq!(seeds.len(), (q + 2) * (q + 2));
        let basis: Vec<BasisFunction> = seeds.iter().map(|&s| construct_polynomial_qt(&coeffs, q, s).unwrap()).collect();
        let m = assemble_matrix(&basis, q + 1).unwrap();
        assert_eq!(numerical_rank(&m.entries, RANK_TOL), (q + 2) * (q + 2), "q = {q}");
    }
}

#[test]
fn construction_errors() {
    let low = random_operator(3, 1);
    assert!(matches!(build_basis(&low, 3, Family::Polynomial, None), Err(Error::OrderTooLow { .. })));

    let z = [0.0; 3];
    let mut tables: Vec<TaylorTable> = OPERATOR_INDICES.iter().map(|_| TaylorTable::zeros(z, 3)).collect();
    tables[second(1, 1).numbering()] = TaylorTable::constant(z, 3, c(1.0, 0.0));
    tables[second(2, 2).numbering()] = TaylorTable::constant(z, 3, c(1.0, 0.0));
    let degenerate = PdeCoefficients::new(z, tables).unwrap();
    for fam in FAMILIES {
        assert!(matches!(build_basis(&degenerate, 2, fam, None), Err(Error::HypothesisViolation(_))));
    }
}

#[test]
fn negative_scaling_keeps_the_property() {
    // the flow convention differs from the built-ins by a factor -1
    let z = [0.1, 0.2, 0.3];
    let ones = TaylorTable::constant(z, 4, c(1.0, 0.0));
    let zero = TaylorTable::zeros(z, 4);
    let flow = coefficients_from_flow(&ones, [&zero, &zero, &zero], 3.0).unwrap();
    let helm = builtin_operator(BuiltinCase::HelmholtzConst, 3.0, 0.0, z, 3);
    let a = build_basis(&flow, 3, Family::Polynomial, None).unwrap();
    let b = build_basis(&helm, 3, Family::Polynomial, None).unwrap();
    assert_eq!(a.len(), b.len());
    for (fa, fb) in a.iter().zip(&b) {
        for (i, v) in fa.poly().iter() {
            assert!((v - fb.poly().get(i)).norm() < 1e-14);
        }
    }
    for fam in [Family::Amplitude, Family::Phase] {
        let basis = build_basis(&flow, 3, fam, None).unwrap();
        assert!(worst_residual(&flow, &basis) < 1e-12);
    }
}

#[test]
fn dump_round_trip_preserves_tables() {
    let coeffs = random_operator(21, 3);
    for fam in FAMILIES {
        let basis = build_basis(&coeffs, 3, fam, None).unwrap();
        let back = basis_from_text(&basis_to_text(&basis)).unwrap();
        assert_eq!(back.len(), basis.len());
        for (a, b) in basis.iter().zip(&back) {
            assert_eq!(a.family(), b.family());
            assert_eq!(a.q(), b.q());
            assert_eq!(a.poly(), b.poly());
            assert_eq!(a.lambda(), b.lambda());
        }
    }
}
