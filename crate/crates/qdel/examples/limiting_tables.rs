//! Regenerate the two limiting-fidelity tables over the standard grid of
//! squared blank magnitudes.
//!
//! ```bash
//! cargo run -p qdel --example limiting_tables
//! ```

use qdel::limits::{table1, table2, TableRow};

fn print_table(title: &str, rows: &[TableRow]) {
    println!("{title}");
    println!("  m1^2   m2^2   diff    F(+)     F(-)");
    for row in rows {
        let marker = if row.fidelity.degenerate { "  (degenerate)" } else { "" };
        println!(
            "  {:>4.1}  {:>5.1}  {:>5.1}  {:.4}   {:.4}{marker}",
            row.m1_sq,
            row.m2_sq,
            row.diff,
            row.fidelity.positive_branch,
            row.fidelity.negative_branch,
        );
    }
}

fn main() {
    print_table("one-transformer machine, limiting fidelity F1:", &table1());
    println!();
    print_table("two-transformer machine, limiting fidelity F:", &table2());
    println!();
    println!("the one-transformer machine favours a positive product m1*m2;");
    println!("with two transformers the ordering of the branches reverses.");
}
