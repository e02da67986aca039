//! Local approximation of the Airy solution: worst error over a few centers
//! for shrinking balls, and the fitted orders.
use qtrefftz::approximation::{approximation_report, h_grid, BasisKind, DEFAULT_SAMPLES};
use qtrefftz::exact::{CaseId, TestCase, CENTER_SEED};

fn main() {
    let tc = TestCase::new(CaseId::Tc2);
    let centers = tc.centers(4, CENTER_SEED);
    let h = h_grid(11);
    for kind in [BasisKind::Phase, BasisKind::Polynomial] {
        for n in [2, 4, 6] {
            let r = approximation_report(&tc, kind, n, &centers, &h, DEFAULT_SAMPLES).unwrap();
            let floor = r.max_errors.iter().copied().fold(f64::INFINITY, f64::min);
            let order = r.fitted_order.map_or("-".into(), |o| format!("{o:.2}"));
            println!("{:<10} n={n}: order {order:>5} (expected {}), smallest error {floor:.1e}, cond {:.1e}", kind.name(), n + 1, r.cond);
        }
    }
}
