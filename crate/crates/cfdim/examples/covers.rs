//! Łuczak's count S(m,k) and the two series bounding the cover weights of E(b,c).

use cfdim::geometry::{cover_weight_ebc, luczak_count};

fn main() -> cfdim::Result<()> {
    println!("  m    k   S(m,k)   m(2+log m)^(k-1)");
    for (m, k) in [(4, 2), (100, 3), (10_000, 4), (1 << 30, 5)] {
        let s = luczak_count(m, k)?;
        println!("{m:>10} {k}  {:>12}  {:>14.1}", s.count, s.bound);
    }

    // exponent above 1/(1+d²) = 0.2: both series converge
    let w = cover_weight_ebc(1, 60, 2.0, 2.0, 0.25, 1 << 16)?;
    println!("\nI-blocks: partial {:.6e}, last term {:.2e}", w.i_partial, w.last_i_term());
    println!("J-family: partial {:.6e}, last term {:.2e}", w.j_partial, w.last_j_term());
    match cover_weight_ebc(1, 60, 2.0, 2.0, 0.2, 0) {
        Err(e) => println!("at the critical exponent: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
