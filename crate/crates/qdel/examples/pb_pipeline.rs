//! Walk one input through the Pati-Braunstein deleter + transformer
//! pipeline and compare the dense simulation against the closed form at
//! every stage.
//!
//! ```bash
//! cargo run -p qdel --example pb_pipeline
//! ```

use qdel::machines::{
    pb_delete, pb_f2_closed_form_real, pb_rho2_closed_form, pb_with_transformer_fidelity,
    pb_with_transformer_rho2, BlankState, InputQubit,
};

fn main() {
    let blank = BlankState::real(0.6, 0.8).unwrap();
    let input = InputQubit::real(0.6, 0.8).unwrap();
    println!(
        "input alpha = {}, beta = {}; blank m1 = {}, m2 = {}",
        input.alpha(),
        input.beta().re,
        blank.m1(),
        blank.m2().re
    );

    let deleted = pb_delete(&input, &blank);
    println!("\ndeleter output on (mode1, mode2, register), nonzero amplitudes:");
    let labels = ["A", "A0", "A1"];
    for q1 in 0..2 {
        for q2 in 0..2 {
            for (c, name) in labels.iter().enumerate() {
                let amp = deleted.amp_at(&[q1, q2, c]);
                if amp.norm() > 1e-14 {
                    println!("  |{q1}>|{q2}>|{name:>2}>  {:+.4}", amp.re);
                }
            }
        }
    }
    println!("  norm = {:.12}", deleted.norm());

    let sim = pb_with_transformer_rho2(&input, &blank);
    let closed = pb_rho2_closed_form(&input, &blank);
    println!("\nreduced mode-2 operator after the transformer:");
    for i in 0..2 {
        for j in 0..2 {
            println!(
                "  rho2[{i}][{j}]  simulated {:+.6}{:+.6}i   closed form {:+.6}{:+.6}i",
                sim.entry(i, j).re,
                sim.entry(i, j).im,
                closed.entry(i, j).re,
                closed.entry(i, j).im
            );
        }
    }
    println!(
        "  max entrywise deviation = {:.3e}",
        sim.matrix().max_abs_diff(closed.matrix())
    );

    let report = pb_with_transformer_fidelity(&input, &blank);
    let poly = pb_f2_closed_form_real(&input, &blank).unwrap();
    println!("\nfidelity of deletion <Sigma|rho2|Sigma>:");
    println!("  simulated   {:.12}", report.fidelity);
    println!("  closed form {poly:.12}");
}
