//! Which of the five growth regimes a function φ falls into, and the
//! dimension of F(φ) that goes with it.

use cfdim::dimension::{classify_phi, ClassifyOptions, PhiFamily, PhiSpec};

fn main() -> cfdim::Result<()> {
    let opts = ClassifyOptions { alpha: 8, depths: vec![1, 2, 3], tol: 1e-8, ..Default::default() };
    let specs = vec![
        PhiSpec::new(PhiFamily::Power(3.0)),
        PhiSpec::new(PhiFamily::Exponential(3.0)),
        PhiSpec::new(PhiFamily::DoubleExponential { b0: 2.0, c0: 5.0 }),
        // sampled specs supply ln φ(n); the liminf values are estimated
        PhiSpec::expression("e^(n^2)", |n| (n * n) as f64),
        PhiSpec::expression("n! 4^n", |n| (1..=n).map(|k| (k as f64).ln()).sum::<f64>() + n as f64 * 4f64.ln()),
        PhiSpec::expression("e^(e^n)", |n| (n as f64).exp()).with_horizon(40),
    ];
    for spec in &specs {
        let c = classify_phi(spec, &opts)?;
        println!("{:?}\n  {}", spec.family, c.to_json());
    }
    Ok(())
}
