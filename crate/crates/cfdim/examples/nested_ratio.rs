//! R_k from the nested intervals of E(b,c), converging to 1/(1+b²).

use cfdim::dimension::dim_ebc;
use cfdim::geometry::superexp_growth_check;

fn main() -> cfdim::Result<()> {
    for (b, c) in [(2.0, 2.0), (2.0, 5.0), (1.5, 3.0)] {
        let d = dim_ebc(b, c, 10)?;
        print!("b={b} c={c}  limit {:.5}:", d.value);
        for r in &d.evidence {
            print!(" {:.4}", r.ratio);
        }
        println!("{}", if d.flagged { "  (flagged)" } else { "" });
    }

    // q_{2n+2} outgrows max(q_{2n}^{d²}, c^{d^{2n+2}}) at inserted positions
    for g in superexp_growth_check(2, 3, &[1, 2, 3, 4], 4)? {
        println!("n+1={}: ln q = {:.1} > {:.1}: {}", g.n_plus_one, g.ln_q_next, g.ln_bound, g.holds);
    }
    Ok(())
}
