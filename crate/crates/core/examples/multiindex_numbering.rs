//! Multi-index numbering and the layer order used by the constructions.
use qtrefftz::multiindex::{count_up_to, MultiIndex};

fn main() {
    for len in 0..=3 {
        let layer: Vec<String> = MultiIndex::layer(len).iter().map(|i| format!("{i}→{}", i.numbering())).collect();
        println!("|i| = {len}: {}", layer.join("  "));
    }
    println!("indices with |i| <= 8: {}", count_up_to(8));
    let i = MultiIndex::from_numbering(57);
    println!("index number 57 is {i} (|i| = {})", i.degree());
}
