//! The Airy function and its derivatives, plus the Airy-type exact solution.
use qtrefftz::airy::{airy_ai, airy_derivs};
use qtrefftz::exact::{solution_value, CaseId, TestCase};

fn main() {
    for t in [-10.0, -2.0, 0.0, 1.0, 5.0, 12.0] {
        let d = airy_derivs(t, 3).unwrap();
        println!("t = {t:>6}: Ai = {:+.15e}, Ai' = {:+.15e}, Ai''' = {:+.6e}", d[0], d[1], d[3]);
    }
    println!("out of range: {}", airy_ai(20.0).unwrap_err());
    let tc = TestCase::new(CaseId::Tc2);
    println!("tc2 solution at (0.5, 0.1, -0.3): {:.12}", solution_value(&tc, [0.5, 0.1, -0.3]).unwrap());
}
