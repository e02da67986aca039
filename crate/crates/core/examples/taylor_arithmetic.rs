//! Truncated Taylor tables: products, derivatives and the series exponential.
use qtrefftz::{Complex64, MultiIndex, TaylorTable};

fn main() {
    let z = [0.0; 3];
    let one = Complex64::new(1.0, 0.0);
    // p(y) = y1 + y1^2
    let mut p = TaylorTable::zeros(z, 6);
    p.set(MultiIndex::unit(0), one);
    p.set(MultiIndex::new(2, 0, 0), one);
    let e = p.exp();
    print!("exp(y1 + y1²) =");
    for k in 0..=6u8 {
        print!(" {:+.5}·y1^{k}", e.get(MultiIndex::new(k, 0, 0)).re);
    }
    println!();

    let sq = p.product(&p).unwrap();
    println!("(y1 + y1²)² has y1³ coefficient {}", sq.get(MultiIndex::new(3, 0, 0)).re);
    let d = e.derivative(MultiIndex::unit(0)).unwrap();
    println!("∂1 exp(p) at the center: {}", d.get(MultiIndex::ZERO).re);
    println!("exp(p) at y = (0.1, 0, 0): {:.12} (exact {:.12})", e.eval([0.1, 0.0, 0.0]).re, (0.1f64 + 0.01).exp());
}
