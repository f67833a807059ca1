//! The transformer gate: its matrix, unitarity, and what double application
//! does to |00>.
//!
//! ```bash
//! cargo run -p qdel --example transformer
//! ```

use qdel::linalg::PureState;
use qdel::machines::Transformer;

fn main() {
    let t = Transformer::new();
    let m = t.gate().matrix();

    println!("transformer matrix (basis order 00, 01, 10, 11):");
    for i in 0..4 {
        let row: Vec<String> = (0..4).map(|j| format!("{:+.4}", m.get(i, j).re)).collect();
        println!("  [ {} ]", row.join("  "));
    }
    println!("max |T^dagger T - I| = {:.3e}", m.unitarity_deviation());

    let zz = PureState::basis(vec![2, 2], &[0, 0]).unwrap();
    let once = t.gate().apply(&zz).unwrap();
    let twice = t.squared().apply(&zz).unwrap();

    println!("\nT |00>   amplitudes: {}", fmt_amps(&once));
    println!("T^2 |00> amplitudes: {}", fmt_amps(&twice));
    println!("(T^2 computed by literal matrix squaring)");
}

fn fmt_amps(s: &PureState) -> String {
    s.amplitudes()
        .iter()
        .map(|z| format!("{:+.4}", z.re))
        .collect::<Vec<_>>()
        .join(", ")
}
