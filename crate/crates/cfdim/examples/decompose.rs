//! Sum and product decompositions into continued fractions whose odd-order
//! partial quotients are all 1.
//!
//! ```text
//! cargo run --example decompose -- 13/5
//! ```

use cfdim::decompose::{Decomposer, Op};
use cfdim::{product_decompose, sum_decompose, Rational};

fn main() -> cfdim::Result<()> {
    let x: Rational = std::env::args().nth(1).as_deref().unwrap_or("13/5").parse()?;

    let s = sum_decompose(&x, 32)?;
    println!("{x} = {} + {}  ({})", s.first.to_expansion(), s.second.to_expansion(), s.status.name());
    let p = product_decompose(&x, 32)?;
    println!("{x} = {} * {}  ({})", p.first.to_expansion(), p.second.to_expansion(), p.status.name());

    // The same construction, one greedy selection at a time.
    println!("\nsum steps:");
    for step in Decomposer::new(Op::Sum, &x)?.take(8) {
        let (lo, hi) = &step.bracket;
        println!("  k={} {:?} a={} bracket [{lo}, {hi}){}", step.k, step.component, step.quotient,
            if step.exact { "  exact" } else { "" });
    }

    // Irrationals are handled through rational approximations and their brackets.
    let approx = Rational::from_f64(std::f64::consts::E)?;
    let r = sum_decompose(&approx, 6)?;
    println!("\ne ≈ {} : {} after {} steps, bracket width {:.3e}", approx.to_f64(), r.status.name(), r.steps, r.width().to_f64());
    Ok(())
}
