//! Sweep the blank state for the deleter + transformer machine and watch
//! where the fidelity becomes input independent.
//!
//! For each blank the fidelity is evaluated on an alpha grid; the spread
//! (max - min over inputs) collapses to zero at m1^2 = 0.5 with a negative
//! product, the blank that also maximizes the worst-case fidelity.
//!
//! ```bash
//! cargo run -p qdel --example blank_sweep
//! ```

use qdel::machines::{pb_with_transformer_fidelity, BlankState, InputQubit};

fn main() {
    println!("  m1^2  branch   F2(min)   F2(max)    spread");
    for negative in [false, true] {
        for i in 0..=10 {
            let m1_sq = i as f64 / 10.0;
            let blank = BlankState::from_m1_sq(m1_sq, negative).unwrap();
            let mut min = f64::INFINITY;
            let mut max = f64::NEG_INFINITY;
            for j in 0..=20 {
                let input = InputQubit::from_alpha(j as f64 / 20.0).unwrap();
                let f = pb_with_transformer_fidelity(&input, &blank).fidelity;
                min = min.min(f);
                max = max.max(f);
            }
            let sign = if negative { "(-)" } else { "(+)" };
            println!(
                "  {m1_sq:>4.1}   {sign}    {min:.6}  {max:.6}  {:.3e}",
                max - min
            );
        }
        println!();
    }
    println!("spread 0 at m1^2 = 0.5, negative product: the input-independent point.");
}
