//! Canonical polynomial quasi-Trefftz functions and the dimension of their span.
use qtrefftz::construct::{construct_polynomial_qt, polynomial_seeds};
use qtrefftz::eval::assemble_matrix;
use qtrefftz::exact::{CaseId, TestCase};
use qtrefftz::linalg::{numerical_rank, RANK_TOL};

fn main() {
    let tc = TestCase::new(CaseId::Tc2);
    let center = [0.5, 0.0, -0.5];
    for q in 1..=5 {
        let coeffs = tc.operator(center, q + 1);
        let seeds = polynomial_seeds(q);
        let basis: Vec<_> = seeds.iter().map(|&s| construct_polynomial_qt(&coeffs, q, s).unwrap()).collect();
        let m = assemble_matrix(&basis, q + 1).unwrap();
        println!("q = {q}: {} seeds, rank {} (expected {})", seeds.len(), numerical_rank(&m.entries, RANK_TOL), (q + 2) * (q + 2));
    }
}
