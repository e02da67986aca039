//! Convected Helmholtz coefficients from a variable subsonic flow, with a
//! phase-based basis built on them.
use qtrefftz::construct::{build_basis, Family};
use qtrefftz::operator::{check_hypothesis, residual_magnitude};
use qtrefftz::pde::coefficients_from_flow;
use qtrefftz::{Complex64, MultiIndex, TaylorTable};

fn main() {
    let center = [0.0, 0.0, 0.0];
    // first-order coefficients differentiate ρM, which costs one order
    let order = 5;
    let linear = |base: f64, slope: [f64; 3]| {
        let mut t = TaylorTable::constant(center, order, Complex64::new(base, 0.0));
        for k in 0..3 {
            t.set(MultiIndex::unit(k), Complex64::new(slope[k], 0.0));
        }
        t
    };
    let rho = linear(1.2, [0.1, 0.0, -0.05]);
    let mach = [linear(0.3, [0.0, 0.1, 0.0]), linear(-0.2, [0.05, 0.0, 0.0]), linear(0.4, [0.0, 0.0, 0.1])];
    let coeffs = coefficients_from_flow(&rho, [&mach[0], &mach[1], &mach[2]], 4.0).unwrap();
    let st = check_hypothesis(&coeffs).unwrap();
    println!("principal part eigenvalues {:.4?}, det {:.4}", st.d, st.det());
    let basis = build_basis(&coeffs, 4, Family::Phase, None).unwrap();
    let worst = basis.iter().map(|b| residual_magnitude(&coeffs, b, b.q()).unwrap()).fold(0.0, f64::max);
    println!("{} phase functions, worst residual {worst:.2e} (operator scale {:.2})", basis.len(), coeffs.magnitude());
}
