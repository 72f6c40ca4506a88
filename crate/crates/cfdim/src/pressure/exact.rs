//! Certified enclosures of `f_{n,B}(ρ)` for dyadic `ρ = m / 2^j`.
//!
//! Each term `Y^{m/2^j}` with `Y = (B^{2n} q²)^{-1}` is enclosed by taking `j`
//! integer square roots with outward rounding, then raising to the `m`th power
//! by squaring, rounding outward at `P` significant bits after every step.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::{pressure_sum, PressureProblem, PressureSolution, SummationMode};
use crate::error::{Error, Result};
use crate::rational::Rational;

const START_BITS: u64 = 64;
const MAX_BITS: u64 = 1 << 14;

/// `num / 2^log2_den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dyadic {
    pub num: u64,
    pub log2_den: u32,
}

impl Dyadic {
    pub fn new(num: u64, log2_den: u32) -> Self {
        Dyadic { num, log2_den }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / 2f64.powi(self.log2_den as i32)
    }

    pub fn midpoint(self, other: Dyadic) -> Dyadic {
        let j = self.log2_den.max(other.log2_den) + 1;
        let a = self.num << (j - self.log2_den);
        let b = other.num << (j - other.log2_den);
        Dyadic { num: (a + b) / 2, log2_den: j }.reduced()
    }

    fn reduced(mut self) -> Self {
        while self.log2_den > 0 && self.num % 2 == 0 {
            self.num /= 2;
            self.log2_den -= 1;
        }
        self
    }
}

/// `lo <= f <= hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl Enclosure {
    pub fn contains(&self, v: &Rational) -> bool {
        self.lo <= *v && *v <= self.hi
    }
}

// Positive binary floating value mant * 2^exp.
#[derive(Clone, Debug)]
struct Bf {
    mant: BigUint,
    exp: i64,
}

impl Bf {
    fn from_rational(r: &Rational, bits: u64, up: bool) -> Bf {
        let n = r.numer().magnitude();
        let d = r.denom().magnitude();
        // Scale so the quotient has about `bits` bits.
        let shift = bits as i64 - (n.bits() as i64 - d.bits() as i64) + 1;
        let (num, den) = if shift >= 0 { (n << shift as u64, d.clone()) } else { (n.clone(), d << (-shift) as u64) };
        let (q, r) = num_integer::Integer::div_rem(&num, &den);
        let mant = if up && !r.is_zero() { q + 1u32 } else { q };
        Bf { mant, exp: -shift }
    }

    fn to_rational(&self) -> Rational {
        let m = BigInt::from(self.mant.clone());
        if self.exp >= 0 {
            Rational::integer(m << self.exp as u64)
        } else {
            Rational::new(m, BigInt::one() << (-self.exp) as u64).unwrap()
        }
    }

    fn round(self, bits: u64, up: bool) -> Bf {
        let b = self.mant.bits();
        if b <= bits {
            return self;
        }
        let drop = b - bits;
        let mut mant = &self.mant >> drop;
        if up && (&mant << drop) != self.mant {
            mant += 1u32;
        }
        Bf { mant, exp: self.exp + drop as i64 }
    }

    fn mul(&self, o: &Bf, bits: u64, up: bool) -> Bf {
        Bf { mant: &self.mant * &o.mant, exp: self.exp + o.exp }.round(bits, up)
    }

    fn sqrt(&self, bits: u64, up: bool) -> Bf {
        // Make the exponent even and the mantissa about 2*bits wide.
        let mut mant = self.mant.clone();
        let mut exp = self.exp;
        let want = 2 * bits as i64 + 2;
        let mut pad = (want - mant.bits() as i64).max(0);
        if (exp - pad) % 2 != 0 {
            pad += 1;
        }
        mant <<= pad as u64;
        exp -= pad;
        let root = mant.sqrt();
        let root = if up && &root * &root != mant { root + 1u32 } else { root };
        Bf { mant: root, exp: exp / 2 }.round(bits, up)
    }

    fn pow(&self, mut m: u64, bits: u64, up: bool) -> Bf {
        let mut acc = Bf { mant: BigUint::one(), exp: 0 };
        let mut base = self.clone();
        while m > 0 {
            if m & 1 == 1 {
                acc = acc.mul(&base, bits, up);
            }
            m >>= 1;
            if m > 0 {
                base = base.mul(&base, bits, up);
            }
        }
        acc
    }
}

fn term_enclosure(y: &Rational, rho: Dyadic, bits: u64) -> (Bf, Bf) {
    let mut lo = Bf::from_rational(y, bits, false);
    let mut hi = Bf::from_rational(y, bits, true);
    for _ in 0..rho.log2_den {
        lo = lo.sqrt(bits, false);
        hi = hi.sqrt(bits, true);
    }
    (lo.pow(rho.num, bits, false), hi.pow(rho.num, bits, true))
}

/// Certified enclosure of `f_{n,B}(ρ)` at working precision `bits`.
pub fn pressure_sum_exact(p: &PressureProblem, rho: Dyadic, bits: u64) -> Result<Enclosure> {
    p.leaves()?;
    let symbols = p.alphabet.symbols();
    let b2n = p.base.pow(2 * p.depth as i32);
    let mut lo = Rational::zero();
    let mut hi = Rational::zero();
    let mut stack: Vec<(usize, BigUint, BigUint)> = vec![(0, BigUint::one(), BigUint::zero())];
    while let Some((k, q_even, q_odd)) = stack.pop() {
        if k == p.depth {
            if rho.num == 0 {
                lo = lo + Rational::one();
                hi = hi + Rational::one();
                continue;
            }
            let q = BigInt::from(q_even);
            let x = &b2n * &Rational::integer(&q * &q);
            let y = x.recip().expect("positive");
            let (tl, th) = term_enclosure(&y, rho, bits);
            lo = lo + tl.to_rational();
            hi = hi + th.to_rational();
            continue;
        }
        let q_next_odd = &q_even + &q_odd;
        for &a in symbols.iter().rev() {
            let q_next_even = &q_next_odd * a + &q_even;
            stack.push((k + 1, q_next_even, q_next_odd.clone()));
        }
    }
    Ok(Enclosure { lo, hi })
}

/// Sign of `f(ρ) - 1`, raising precision until the enclosure decides it.
fn compare_to_one(p: &PressureProblem, rho: Dyadic) -> Result<std::cmp::Ordering> {
    use std::cmp::Ordering::*;
    let one = Rational::one();
    let mut bits = START_BITS;
    loop {
        let e = pressure_sum_exact(p, rho, bits)?;
        if e.lo > one {
            return Ok(Greater);
        }
        if e.hi < one {
            return Ok(Less);
        }
        if e.lo == one && e.hi == one {
            return Ok(Equal);
        }
        bits *= 2;
        if bits > MAX_BITS {
            return Err(Error::Resource(format!(
                "sign of f(ρ)-1 at ρ={} undecided at {MAX_BITS} bits",
                rho.to_f64()
            )));
        }
    }
}

pub(super) fn solve_exact(p: &PressureProblem, tol: f64, leaves: u64) -> Result<PressureSolution> {
    let mut lo = Dyadic::new(0, 0);
    let mut hi = Dyadic::new(1, 0);
    let mut iterations = 0;
    let width = |lo: Dyadic, hi: Dyadic| hi.to_f64() - lo.to_f64();
    let mut root = None;
    while width(lo, hi) > tol {
        if lo.log2_den.max(hi.log2_den) >= 62 {
            break;
        }
        let mid = lo.midpoint(hi);
        iterations += 1;
        match compare_to_one(p, mid)? {
            std::cmp::Ordering::Greater => lo = mid,
            std::cmp::Ordering::Less => hi = mid,
            std::cmp::Ordering::Equal => {
                root = Some(mid);
                break;
            }
        }
    }
    let s = match root {
        Some(r) => r.to_f64(),
        None => 0.5 * (lo.to_f64() + hi.to_f64()),
    };
    let bracket = match root {
        Some(r) => (r.to_f64(), r.to_f64()),
        None => (lo.to_f64(), hi.to_f64()),
    };
    let float_p = p.clone().with_mode(SummationMode::CompensatedFloat);
    let residual = (pressure_sum(&float_p, s)?.value - 1.0).abs();
    Ok(PressureSolution {
        s_value: s,
        residual,
        iterations,
        bracket,
        tolerance: tol,
        leaves,
        mode: SummationMode::ExactRational,
    })
}

#[cfg(test)]
mod tests {
    use super::super::Alphabet;
    use super::*;

    #[test]
    fn zero_exponent_counts_words() {
        let p = PressureProblem::new(Alphabet::Bound(3), Rational::integer(2), 3).unwrap();
        let e = pressure_sum_exact(&p, Dyadic::new(0, 0), 64).unwrap();
        assert_eq!((e.lo.clone(), e.hi.clone()), (Rational::integer(27), Rational::integer(27)));
    }

    #[test]
    fn integer_exponent_is_tight() {
        let p = PressureProblem::new(Alphabet::Bound(2), Rational::integer(2), 1).unwrap();
        let e = pressure_sum_exact(&p, Dyadic::new(1, 0), 128).unwrap();
        assert!(e.contains(&Rational::frac(13, 144)));
        assert!((&e.hi - &e.lo).to_f64() < 1e-30);
    }

    #[test]
    fn encloses_float_value() {
        let p = PressureProblem::new(Alphabet::Bound(3), Rational::frac(3, 2), 2).unwrap();
        for rho in [Dyadic::new(1, 1), Dyadic::new(3, 2), Dyadic::new(5, 3)] {
            let e = pressure_sum_exact(&p, rho, 96).unwrap();
            let f = pressure_sum(&p, rho.to_f64()).unwrap();
            assert!(e.lo.to_f64() <= f.value + f.error_bound);
            assert!(e.hi.to_f64() >= f.value - f.error_bound);
            assert!((e.hi.to_f64() - e.lo.to_f64()) < 1e-20);
        }
    }

    #[test]
    fn exact_and_float_solvers_agree() {
        let p = PressureProblem::new(Alphabet::Bound(2), Rational::integer(2), 2).unwrap();
        let a = super::super::solve_s(&p, 1e-8).unwrap();
        let b = super::super::solve_s(&p.clone().with_mode(SummationMode::ExactRational), 1e-8).unwrap();
        assert!((a.s_value - b.s_value).abs() < 2e-8, "{} vs {}", a.s_value, b.s_value);
        assert!(b.bracket.0 <= a.s_value + 1e-12 && a.s_value <= b.bracket.1 + 1e-12);
    }
}
