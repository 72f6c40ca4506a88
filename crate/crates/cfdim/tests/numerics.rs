use cfdim::dimension::{classify_phi, dim_ebc, dim_f, CaseTag, ClassifyOptions, DimensionValue, Extended, PhiFamily, PhiSpec};
use cfdim::geometry::{luczak_count, superexp_growth_check, Schedule};
use cfdim::pressure::{
    extrapolate_sb, pressure_sum, pressure_sum_exact, sb_curve, solve_s, Alphabet, Dyadic, PressureProblem,
    SummationMode,
};
use cfdim::{Error, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn pressure_examples() {
    let one = PressureProblem::new(Alphabet::set(vec![1]).unwrap(), Rational::integer(2), 1).unwrap();
    assert_eq!(pressure_sum(&one, 1.0).unwrap().value, 1.0 / 16.0);
    let two = PressureProblem::new(Alphabet::set(vec![1, 2]).unwrap(), Rational::integer(2), 1).unwrap();
    assert!((pressure_sum(&two, 1.0).unwrap().value - 13.0 / 144.0).abs() < 1e-16);
    let e = pressure_sum_exact(&two.clone().with_mode(SummationMode::ExactRational), Dyadic::new(1, 0), 64).unwrap();
    assert!(e.contains(&Rational::frac(13, 144)));

    let p = PressureProblem::bounded(3, 2.0, 3).unwrap();
    assert_eq!(pressure_sum(&p, 0.0).unwrap().value, 27.0);
    let ex = pressure_sum_exact(&p.clone().with_mode(SummationMode::ExactRational), Dyadic::new(0, 0), 64).unwrap();
    assert!(ex.contains(&Rational::integer(27)) && ex.lo == ex.hi);

    let s2 = solve_s(&PressureProblem::bounded(2, 2.0, 1).unwrap(), 1e-12).unwrap().s_value;
    let s4 = solve_s(&PressureProblem::bounded(2, 4.0, 1).unwrap(), 1e-12).unwrap().s_value;
    assert!((s2 - 0.2196).abs() < 1e-3 && s4 < s2);
    assert_eq!(solve_s(&PressureProblem::bounded(1, 7.0, 5).unwrap(), 1e-9).unwrap().s_value, 0.0);
}

#[test]
fn pressure_is_decreasing_and_modes_agree() {
    for (alpha, n) in [(2, 2), (3, 2), (4, 3)] {
        let p = PressureProblem::bounded(alpha, 2.0, n).unwrap();
        let vals: Vec<f64> = (0..10).map(|i| pressure_sum(&p, i as f64 / 9.0).unwrap().value).collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
        let pe = p.clone().with_mode(SummationMode::ExactRational);
        for rho in [Dyadic::new(1, 2), Dyadic::new(1, 1), Dyadic::new(3, 3)] {
            let fl = pressure_sum(&p, rho.to_f64()).unwrap();
            let en = pressure_sum_exact(&pe, rho, 96).unwrap();
            let (lo, hi) = (en.lo.to_f64(), en.hi.to_f64());
            let slack = fl.error_bound + 1e-15 * fl.value;
            assert!(lo - slack <= fl.value && fl.value <= hi + slack, "ρ={} {lo} {} {hi}", rho.to_f64(), fl.value);
        }
    }
    let exact = solve_s(&PressureProblem::bounded(3, 2.0, 2).unwrap().with_mode(SummationMode::ExactRational), 1e-6).unwrap();
    let float = solve_s(&PressureProblem::bounded(3, 2.0, 2).unwrap(), 1e-10).unwrap();
    assert!((exact.s_value - float.s_value).abs() < 2e-6);
}

#[test]
fn extrapolation_and_curves() {
    let ex = extrapolate_sb(2.0, 3, &[1, 2, 3, 4], 1e-10).unwrap();
    assert!(ex.trend_holds());
    assert!(ex.multiple_checks.iter().any(|c| c.0 == 1 && c.1 == 2));
    let big = extrapolate_sb(1000.0, 2, &[1, 2, 3], 1e-10).unwrap();
    assert!(big.per_depth.iter().all(|(_, s)| s.s_value <= 0.55));
    assert_eq!(extrapolate_sb(2.0, 1, &[1, 2], 1e-9).unwrap().estimate, 0.0);

    let c = sb_curve(&[2.0, 4.0, 8.0], 2, 2, 1e-10).unwrap();
    assert!(c.points.windows(2).all(|w| w[1].1 < w[0].1));
    let d = sb_curve(&[3.0, 3.0], 2, 2, 1e-10).unwrap();
    assert_eq!(d.points[0].1, d.points[1].1);
    let e = sb_curve(&[1.1, 1.1 + 1e-6], 2, 2, 1e-10).unwrap();
    assert!((e.points[0].1 - e.points[1].1).abs() < 1e-3);

    let over = PressureProblem::bounded(30, 2.0, 8).unwrap();
    assert!(matches!(solve_s(&over, 1e-6), Err(Error::Resource(_))));
}

#[test]
fn classifier_random_parametric_draws() {
    let opts = ClassifyOptions { alpha: 3, depths: vec![1, 2], tol: 1e-6, surrogate: false, ..Default::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let p = rng.gen_range(0.01..20.0);
        let c = classify_phi(&PhiSpec::new(PhiFamily::Power(p)), &opts).unwrap();
        assert_eq!((c.case, c.big_b), (CaseTag::BEq1, Extended::Finite(1.0)));
        assert!(matches!(c.dimension, DimensionValue::Interval { .. }));

        let b0 = rng.gen_range(1.01..50.0);
        let c = classify_phi(&PhiSpec::new(PhiFamily::Exponential(b0)), &opts).unwrap();
        assert_eq!((c.case, c.big_b), (CaseTag::BFinite, Extended::Finite(b0)));

        let (b0, c0) = (rng.gen_range(1.01..10.0), rng.gen_range(1.01..10.0));
        let c = classify_phi(&PhiSpec::new(PhiFamily::DoubleExponential { b0, c0 }), &opts).unwrap();
        assert_eq!((c.case, c.big_b, c.small_b), (CaseTag::BInfBFinite, Extended::Infinite, Some(Extended::Finite(b0))));
        assert!(matches!(c.dimension, DimensionValue::Value(v) if v == 1.0 / (1.0 + b0 * b0)));
    }
    let json = classify_phi(&PhiSpec::new(PhiFamily::DoubleExponential { b0: 2.0, c0: 5.0 }), &opts).unwrap().to_json();
    assert_eq!(json["case"], "B_inf_b_finite");
    assert_eq!(json["B"], "inf");
    assert_eq!(json["dimension"]["kind"], "value");
    assert_eq!(json["dimension"]["value"], 0.2);
}

#[test]
fn dimension_monotone_and_evidence() {
    let vals: Vec<f64> = [1.5, 2.0, 4.0, 10.0].iter().map(|&b| dim_f(b, 3, &[1, 2, 3], 1e-10).unwrap().estimate).collect();
    assert!(vals.windows(2).all(|w| w[1] <= w[0]) && vals.iter().all(|v| (0.0..=1.0).contains(v)));
    assert!(dim_f(1.0, 3, &[1], 1e-6).is_err());
    for b in [1.5, 2.0, 3.0] {
        for c in [1.5, 2.0, 3.0] {
            let d = dim_ebc(b, c, 8).unwrap();
            let gaps: Vec<f64> = d.evidence[2..].iter().map(|r| (r.ratio - d.value).abs()).collect();
            assert!(gaps.windows(2).all(|w| w[1] < w[0]), "b={b} c={c}");
        }
    }
    let a = dim_ebc(2.0, 2.0, 8).unwrap();
    let b = dim_ebc(2.0, 3.0, 8).unwrap();
    assert_eq!(a.value, b.value);
    assert_ne!(a.evidence[2].ratio, b.evidence[2].ratio);
}

#[test]
fn luczak_and_growth() {
    assert_eq!(luczak_count(1, 4).unwrap().count, 4);
    assert!((luczak_count(1, 4).unwrap().bound - 8.0).abs() < 1e-12);
    for m in [10, 1000, 1_000_000] {
        let s = luczak_count(m, 5).unwrap();
        assert!((s.count as f64) <= s.bound);
    }
    let checks = superexp_growth_check(2, 2, &[1, 2, 3], 3).unwrap();
    assert!(!checks.is_empty() && checks.iter().all(|c| c.holds));
}

#[test]
fn schedule_rejects_degenerate_alphabet() {
    assert!(matches!(Schedule::from_f64(vec![1, 3], 2.0, 1), Err(Error::Domain(_))));
}
