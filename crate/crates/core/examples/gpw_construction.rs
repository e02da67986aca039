//! Amplitude and phase generalized plane waves for the convected Airy operator,
//! with their quasi-Trefftz residuals.
use qtrefftz::construct::{build_basis, Family};
use qtrefftz::exact::{CaseId, TestCase};
use qtrefftz::operator::residual_magnitude;

fn main() {
    let tc = TestCase::new(CaseId::Tc3);
    let center = [0.3, -0.2, 0.5];
    let n = 4;
    let coeffs = tc.operator(center, n);
    for fam in [Family::Amplitude, Family::Phase] {
        let basis = build_basis(&coeffs, n, fam, None).unwrap();
        let worst = basis.iter().map(|b| residual_magnitude(&coeffs, b, b.q()).unwrap()).fold(0.0, f64::max);
        let b = &basis[0];
        println!("{:<9} {} functions, q = {}, worst residual {worst:.2e}", fam.name(), basis.len(), b.q());
        if let Some(l) = b.lambda() {
            println!("          first exponent Λ = ({:.4}, {:.4}, {:.4})", l[0], l[1], l[2]);
        }
        let top: Vec<String> = b.poly().iter().filter(|(i, _)| i.degree() == b.q() + 1).take(4).map(|(i, v)| format!("{i}: {v:.3e}")).collect();
        println!("          top layer starts {}", top.join(", "));
    }
}
