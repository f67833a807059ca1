//! Average fidelity of deletion over inputs, alpha^2 uniform on [0, 1]:
//! the bare deleter lands on 5/6, adding the transformer at its best blank
//! lifts the average to 0.8536 and makes the integrand constant.
//!
//! ```bash
//! cargo run -p qdel --example average_fidelity
//! ```

use qdel::machines::{
    average_fidelity, average_fidelity_mc, special_blank, BlankState, Machine,
    SPECIAL_BLANK_FIDELITY,
};

fn main() {
    let real_blank = BlankState::real(0.6, 0.8).unwrap();

    let alone = average_fidelity(Machine::PbAlone, &real_blank, 10_001).unwrap();
    println!("bare deleter, quadrature average:        {alone:.10}");
    println!("exact value 5/6:                         {:.10}", 5.0 / 6.0);
    let mc = average_fidelity_mc(Machine::PbAlone, &real_blank, 50_000, 1).unwrap();
    println!("bare deleter, Monte Carlo (seeded):      {mc:.10}");

    let with_t =
        average_fidelity(Machine::PbWithTransformer, &special_blank(), 10_001).unwrap();
    println!("\ndeleter + transformer at its best blank: {with_t:.10}");
    println!("constant integrand value:                {SPECIAL_BLANK_FIDELITY:.10}");

    // At other blanks the transformer does not always help on average.
    let with_t_plain =
        average_fidelity(Machine::PbWithTransformer, &real_blank, 10_001).unwrap();
    println!("deleter + transformer at (0.6, 0.8):     {with_t_plain:.10}");
}
