//! Ranks of the Taylor-coefficient matrices of every family against the
//! exponential reference matrices.
use qtrefftz::construct::{build_basis, default_s, generate_directions, q_for, Family};
use qtrefftz::eval::{assemble_matrix, reference_matrix_e, reference_matrix_r};
use qtrefftz::exact::{CaseId, TestCase};
use qtrefftz::linalg::{numerical_rank, RANK_TOL};
use qtrefftz::operator::check_hypothesis;

fn main() {
    let tc = TestCase::new(CaseId::Tc3);
    let center = [0.1, 0.2, 0.3];
    println!("{:>2} {:>6} {:>4} {:>4} {:>4} {:>4} {:>4}", "n", "(n+1)²", "E", "R", "A", "P", "Q");
    for n in 1..=5 {
        let coeffs = tc.operator(center, q_for(n) + 1);
        let st = check_hypothesis(&coeffs).unwrap();
        let dirs = generate_directions(n);
        let rank = |m: &nalgebra::DMatrix<qtrefftz::Complex64>| numerical_rank(m, RANK_TOL);
        let fam = |f| rank(&assemble_matrix(&build_basis(&coeffs, n, f, None).unwrap(), n).unwrap().entries);
        println!(
            "{n:>2} {:>6} {:>4} {:>4} {:>4} {:>4} {:>4}",
            (n + 1) * (n + 1),
            rank(&reference_matrix_e(n, &dirs, default_s(&coeffs), &st).entries),
            rank(&reference_matrix_r(n, &dirs).entries),
            fam(Family::Amplitude),
            fam(Family::Phase),
            fam(Family::Polynomial),
        );
    }
}
