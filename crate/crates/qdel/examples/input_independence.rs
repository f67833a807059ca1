//! At the blank (1/sqrt(2), -1/sqrt(2)) the deleter + transformer machine
//! deletes every input with the same fidelity. Sweep alpha and some beta
//! phases to watch the fidelity stay put.
//!
//! ```bash
//! cargo run -p qdel --example input_independence
//! ```

use qdel::machines::{
    pb_with_transformer_fidelity, special_blank, InputQubit, SPECIAL_BLANK_FIDELITY,
};

fn main() {
    let blank = special_blank();
    println!(
        "blank m1 = {:+.7}, m2 = {:+.7}; expected fidelity {:.12}",
        blank.m1(),
        blank.m2().re,
        SPECIAL_BLANK_FIDELITY
    );

    println!("\nalpha sweep:");
    let mut spread: f64 = 0.0;
    for i in 0..=10 {
        let alpha = i as f64 / 10.0;
        let input = InputQubit::from_alpha(alpha).unwrap();
        let f = pb_with_transformer_fidelity(&input, &blank).fidelity;
        spread = spread.max((f - SPECIAL_BLANK_FIDELITY).abs());
        println!("  alpha = {alpha:.1}   F2 = {f:.12}");
    }

    println!("\nbeta phase sweep at alpha = 0.6:");
    for k in 0..5 {
        let phi = k as f64 * std::f64::consts::TAU / 5.0;
        let input = InputQubit::with_phase(0.6, phi).unwrap();
        let f = pb_with_transformer_fidelity(&input, &blank).fidelity;
        spread = spread.max((f - SPECIAL_BLANK_FIDELITY).abs());
        println!("  phase = {phi:.3}   F2 = {f:.12}");
    }

    println!("\nmax deviation from the constant: {spread:.3e}");
}
