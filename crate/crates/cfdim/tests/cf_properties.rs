use cfdim::cf::{compare, cylinder, expand, CfExpansion, ConvergentTable};
use cfdim::decompose::{decompose, verify_decomposition, Op};
use cfdim::Rational;
use num_bigint::BigInt;
use proptest::prelude::*;

fn q_of(word: &[u64]) -> BigInt {
    ConvergentTable::from_word(0, word).last().q.clone()
}

fn word(max_len: usize, max_a: u64) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1..=max_a, 1..=max_len)
}

proptest! {
    #[test]
    fn determinant_identity(w in word(40, 1_000_000), a0 in -5i64..5) {
        let t = ConvergentTable::from_word(a0, &w);
        prop_assert!(t.determinant_holds());
        for k in 1..=w.len() {
            let floor = 2f64.powf(k as f64 / 2.0 - 1.0);
            prop_assert!(t.q(k).to_string().parse::<f64>().unwrap() >= floor);
        }
    }

    #[test]
    fn quotient_product_bounds(w in word(20, 50)) {
        let q = q_of(&w);
        let lo: BigInt = w.iter().map(|&a| BigInt::from(a)).product();
        let hi: BigInt = w.iter().map(|&a| BigInt::from(a + 1)).product();
        prop_assert!(lo <= q && q <= hi);
    }

    #[test]
    fn deletion_bounds(w in word(12, 30)) {
        let q = q_of(&w);
        for k in 0..w.len() {
            let mut rest = w.clone();
            let a = rest.remove(k);
            let qd = if rest.is_empty() { BigInt::from(1) } else { q_of(&rest) };
            // (a+1)/2 <= q/qd <= a+1
            prop_assert!(BigInt::from(a + 1) * &qd <= BigInt::from(2) * &q);
            prop_assert!(q <= BigInt::from(a + 1) * &qd);
        }
    }

    #[test]
    fn concatenation_bounds(u in word(10, 30), v in word(10, 30)) {
        let mut uv = u.clone();
        uv.extend(&v);
        let (qu, qv, quv) = (q_of(&u), q_of(&v), q_of(&uv));
        prop_assert!(&qu * &qv <= quv && quv <= BigInt::from(2) * &qu * &qv);
    }

    #[test]
    fn expand_evaluate_round_trip(num in -10_000i64..10_000, den in 1i64..10_000) {
        let x = Rational::frac(num, den);
        let e = expand(&x, 1000);
        prop_assert!(e.is_canonical());
        prop_assert_eq!(e.evaluate(), x.clone());
        prop_assert_eq!(expand(&e.evaluate(), 1000), e.clone());
        let text = e.to_string();
        prop_assert_eq!(text.parse::<CfExpansion>().unwrap(), e);
        prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
    }

    #[test]
    fn compare_matches_values(a in word(8, 9), b in word(8, 9)) {
        let (x, y) = (CfExpansion::from_u64s(0, &a), CfExpansion::from_u64s(0, &b));
        prop_assert_eq!(compare(&x, &y), x.evaluate().cmp(&y.evaluate()));
    }

    #[test]
    fn canonicalize_is_idempotent(w in word(8, 4)) {
        let e = CfExpansion::from_u64s(3, &w);
        let c = e.canonicalize();
        prop_assert!(c.is_canonical());
        prop_assert_eq!(c.evaluate(), e.evaluate());
        prop_assert_eq!(c.canonicalize(), c);
    }

    #[test]
    fn decompositions_replay(num in 1i64..2_000_000, den in 2i64..1_000_000, op in prop_oneof![Just(Op::Sum), Just(Op::Product)]) {
        let x = Rational::frac(num, den);
        let f = x.fract();
        prop_assume!(f.is_zero() || f >= Rational::frac(1, 2));
        let r = decompose(op, &x, 32).unwrap();
        prop_assert!(verify_decomposition(&r, &x, op).passed());
        prop_assert!(r.bracket.0 <= x && x <= r.bracket.1);
    }
}

#[test]
fn cylinder_lengths_exhaustive() {
    // every word of length <= 8 over {1..5}
    let mut layer: Vec<Vec<u64>> = vec![vec![]];
    let mut count = 0;
    for _ in 0..8 {
        let mut next = Vec::with_capacity(layer.len() * 5);
        for w in &layer {
            for a in 1..=5 {
                let mut v = w.clone();
                v.push(a);
                let c = cylinder(&v).unwrap();
                assert_eq!(&c.right - &c.left, c.length, "{v:?}");
                let t = ConvergentTable::from_word(0, &v);
                let n = v.len();
                let qn = Rational::integer(t.q(n).clone());
                let qs = Rational::integer(t.q(n) + t.q(n - 1));
                assert_eq!(c.length, (qn * qs).recip().unwrap());
                count += 1;
                next.push(v);
            }
        }
        layer = next;
    }
    assert_eq!(count, (1..=8).map(|k| 5u64.pow(k)).sum::<u64>());
}

#[test]
fn spec_examples() {
    assert_eq!(expand(&Rational::frac(1, 2), 10).to_string(), "[0;2]");
    assert_eq!(expand(&Rational::frac(2, 3), 10).to_string(), "[0;1,2]");
    assert_eq!(expand(&Rational::integer(7), 10).to_string(), "[7;]");
    let t = CfExpansion::from_u64s(0, &[1, 2]).convergents(2).unwrap();
    assert_eq!((t.p(2).clone(), t.q(2).clone()), (BigInt::from(2), BigInt::from(3)));
    assert!(CfExpansion::from_u64s(0, &[1]).convergents(3).is_err());
    assert_eq!(CfExpansion::from_u64s(0, &[1, 14]).evaluate(), Rational::frac(14, 15));
    assert_eq!(CfExpansion::from_u64s(3, &[4, 1]).canonicalize().to_string(), "[3;5]");
    let c = cylinder(&[1, 1]).unwrap();
    assert_eq!((c.left, c.right, c.length), (Rational::frac(1, 2), Rational::frac(2, 3), Rational::frac(1, 6)));
}
