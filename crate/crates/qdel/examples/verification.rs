//! Run the full verification suite in-process and summarize the outcome.
//!
//! ```bash
//! cargo run -p qdel --example verification
//! ```

use qdel::machines::Transformer;
use qdel::verify::{all_passed, run_verification, Tolerances};

fn main() {
    let outcomes = run_verification(&Transformer::new(), &Tolerances::default());
    let width = outcomes.iter().map(|o| o.check.len()).max().unwrap_or(0);
    for o in &outcomes {
        println!(
            "{:>4}  {:width$}  deviation {:.3e}  (tolerance {:.1e})  [{}]",
            o.status.to_string(),
            o.check,
            o.deviation,
            o.tolerance,
            o.anchor
        );
    }
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    println!("\n{passed}/{} checks passed", outcomes.len());
    std::process::exit(if all_passed(&outcomes) { 0 } else { 1 });
}
