//! The mass distribution μ on fundamental intervals and the Hölder-type bound
//! μ(J) <= c_I |J|^{t-ε}.

use cfdim::geometry::{child_sum_check, default_s_table, enumerate_dn, holder_scan, measure_mu, EstimationParams, Schedule};
use cfdim::pressure::extrapolate_sb;

fn main() -> cfdim::Result<()> {
    let s = Schedule::from_f64(vec![1, 3], 2.0, 3)?;
    let table = default_s_table(&s, 1e-13)?;
    println!("exponents s_(m,B)(α): {table:?}");

    for w in enumerate_dn(&s, 2, 1 << 16)?.take(6) {
        let node = measure_mu(&s, &w, &table, 1 << 16)?;
        println!("μ(J{w}) = {:.6e}  (± {:.1e})", node.mu, node.error_bound);
    }

    let sums = child_sum_check(&s, &table, 3, 1 << 20)?;
    println!("\nlevel-1 total {}, worst child-sum error {:.2e} over {} parents",
        sums.level1_total, sums.max_relative_error, sums.nodes_checked);

    let sb = extrapolate_sb(2.0, 3, &[1, 2, 3], 1e-10)?.estimate;
    let params = EstimationParams::new(&s, sb, 0.05, 2)?;
    let h = holder_scan(&s, &table, &params, 3, 1 << 20)?;
    println!("t = {:.4}, ln c_I = {:.2}: {} nodes, {} violations, margin {:.3}",
        params.t, params.ln_c_i, h.nodes, h.violations.len(), h.min_margin);
    Ok(())
}
