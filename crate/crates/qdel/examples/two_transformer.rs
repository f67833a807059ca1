//! The two-transformer machine in the limit: one fixed output operator for
//! every input, fidelity set by the blank alone, measured against
//! |Sigma'> = (|Sigma> + |Sigma_perp>)/sqrt(2).
//!
//! ```bash
//! cargo run -p qdel --example two_transformer
//! ```

use qdel::limits::{f_two_transformer, f_two_transformer_vs_sigma, rho2_two_transformer_limit};
use qdel::linalg::hermitian_eigenvalues;
use qdel::machines::BlankState;

fn main() {
    let rho = rho2_two_transformer_limit();
    println!("limiting mode-2 operator:");
    for i in 0..2 {
        let row: Vec<String> = (0..2).map(|j| format!("{:+.6}", rho.entry(i, j).re)).collect();
        println!("  [ {} ]", row.join("  "));
    }
    println!("trace = {:.12}", rho.trace().re);
    let eigs = hermitian_eigenvalues(rho.matrix()).unwrap();
    println!("eigenvalues = {:.6}, {:.6} (positive semidefinite)", eigs[0], eigs[1]);

    println!("\nfidelity against |Sigma'> as the blank varies:");
    for m1_sq in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let pos = BlankState::from_m1_sq(m1_sq, false).unwrap();
        let neg = BlankState::from_m1_sq(m1_sq, true).unwrap();
        println!(
            "  m1^2 = {m1_sq:.2}   F(+) = {:.4}   F(-) = {:.4}",
            f_two_transformer(&pos),
            f_two_transformer(&neg)
        );
    }

    let blank = BlankState::real(1.0, 0.0).unwrap();
    println!("\nreference-state comparison at blank (1, 0):");
    println!("  against |Sigma'> : {:.6}", f_two_transformer(&blank));
    println!("  against |Sigma>  : {:.6}", f_two_transformer_vs_sigma(&blank));
    println!("(both are reported; neither substitutes for the other)");
}
