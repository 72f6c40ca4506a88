//! Pressure sums f_{n,B}(ρ) and their unit crossings s_{n,B}(α), plus the
//! depth extrapolation toward s_B.

use cfdim::pressure::{extrapolate_sb, pressure_sum, sb_curve, solve_s, PressureProblem, SummationMode};

fn main() -> cfdim::Result<()> {
    let p = PressureProblem::bounded(2, 2.0, 1)?;
    println!("f_1,2(1) with α=2: {}", pressure_sum(&p, 1.0)?.value); // 1/16 + 1/36

    let s = solve_s(&p, 1e-12)?;
    println!("s_1,2(2) = {:.12}  residual {:.1e}, {} iterations", s.s_value, s.residual, s.iterations);

    // Certified enclosures at dyadic ρ drive the exact mode.
    let exact = solve_s(&p.clone().with_mode(SummationMode::ExactRational), 1e-6)?;
    println!("exact mode:    {:.6}  bracket {:?}", exact.s_value, exact.bracket);

    let ex = extrapolate_sb(2.0, 4, &[1, 2, 3, 4, 6], 1e-10)?;
    for (n, sol) in &ex.per_depth {
        println!("  n={n:<2} s={:.6}", sol.s_value);
    }
    println!("s_2(4) ≈ {:.5} ± {:.1e}, subadditivity holds: {}", ex.estimate, ex.spread, ex.trend_holds());

    let curve = sb_curve(&[1.5, 2.0, 4.0, 8.0, 16.0], 3, 3, 1e-10)?;
    println!("\n   B      s_3,B(3)");
    for (b, s) in &curve.points {
        println!("{b:5.1}   {s:.6}");
    }
    Ok(())
}
