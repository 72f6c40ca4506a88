//! Fundamental intervals J(w) and the gaps between them, in exact arithmetic.

use cfdim::geometry::{enumerate_dn, fundamental_interval, gaps, GapCase, Schedule};
use cfdim::Rational;

fn main() -> cfdim::Result<()> {
    // σ_2 ∈ [B²]+1..=2[B²] at the scheduled positions 1 and 3, 1..=α elsewhere
    let s = Schedule::new(vec![1, 3], Rational::integer(2), 3)?;

    println!("{:<10} {:>12} {:>12} {:>12}  ratio", "word", "|J|", "g_left", "g_right");
    for n in 1..=2 {
        for w in enumerate_dn(&s, n, 1 << 16)? {
            let j = fundamental_interval(&s, &w);
            let g = gaps(&s, &w);
            let show = |r: &Option<Rational>| r.as_ref().map_or("-".to_string(), |r| r.to_string());
            let ratio = g.g_min.as_ref().map(|m| (m / &j.length).to_f64());
            let need = match g.case {
                GapCase::Free => 2.0 / 3.0,
                GapCase::PreScheduled => 2.0,
            };
            println!(
                "{:<10} {:>12} {:>12} {:>12}  {}",
                w.to_string(),
                j.length.to_string(),
                show(&g.g_left),
                show(&g.g_right),
                ratio.map_or("-".into(), |r| format!("{r:.3} (need >= {need:.3})"))
            );
        }
    }
    Ok(())
}
