//! Random parameter sets inside the hypothesis region of each lemma.
//!
//! Values are rationals `k/D` with a random denominator, drawn strictly
//! inside open intervals, so every sample is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;

use super::report::LemmaId;
use crate::exponent::{alpha_upper, b_upper, ParamSet};
use crate::rational::{rat, Rational};

const MAX_DEN: i64 = 97;
/// Width used when the upper end of an interval is infinite.
const UNBOUNDED_SPAN: i64 = 6;

/// Uniform-ish rational strictly inside `(lo, hi)`; `hi` may be infinite.
pub fn rational_in<R: Rng + ?Sized>(rng: &mut R, lo: &Rational, hi: &Rational) -> Rational {
    let hi = if hi.is_inf() { lo + UNBOUNDED_SPAN } else { hi.clone() };
    assert!(lo < &hi, "empty interval ({lo}, {hi})");
    let lo_b = lo.as_big().expect("finite").clone();
    let hi_b = hi.as_big().expect("finite").clone();
    let mut d = rng.gen_range(2..=MAX_DEN);
    loop {
        let db = BigRational::from_integer(d.into());
        let k_lo: BigInt = (&lo_b * &db).floor().to_integer() + 1;
        let k_hi: BigInt = (&hi_b * &db).ceil().to_integer() - 1;
        if k_lo <= k_hi {
            let span: i64 = (&k_hi - &k_lo).to_i64().unwrap_or(i64::MAX / 2);
            let k = k_lo + BigInt::from(rng.gen_range(0..=span));
            let (k, d) = (k.to_i64().expect("small numerator"), d);
            let g = k.gcd(&d);
            return rat(k / g, d / g);
        }
        d *= 2;
    }
}

fn pick_b<R: Rng + ?Sized>(rng: &mut R, n: u32) -> Rational {
    rational_in(rng, &Rational::zero(), &b_upper(n))
}

/// `s ∈ (0, hi]`, hitting the endpoint a quarter of the time.
fn pick_s<R: Rng + ?Sized>(rng: &mut R, hi: &Rational, closed: bool) -> Rational {
    if closed && rng.gen_bool(0.25) {
        hi.clone()
    } else {
        rational_in(rng, &Rational::zero(), hi)
    }
}

/// One parameter set satisfying the hypotheses of `id`.
pub fn sample<R: Rng + ?Sized>(id: LemmaId, rng: &mut R) -> ParamSet {
    let zero = Rational::zero();
    let one = Rational::one();
    match id {
        LemmaId::LocalL2 => {
            let n = rng.gen_range(1..=6u32);
            let b = rational_in(rng, &zero, &std::cmp::min(Rational::int(2), Rational::int(n as i64)));
            let alpha = rational_in(rng, &zero, &((4 - &b * 2) / n as i64));
            ParamSet::new(n, alpha, b, zero)
        }
        LemmaId::LocalHs_HighDim => {
            let n = rng.gen_range(3..=6u32);
            let b = pick_b(rng, n);
            let s = pick_s(rng, &one, true);
            let alpha = rational_in(rng, &zero, &alpha_upper(n, &s, &b).expect("s <= N/2"));
            ParamSet::new(n, alpha, b, s)
        }
        LemmaId::LocalHs_LowDim => {
            let n = rng.gen_range(1..=2u32);
            let b = pick_b(rng, n);
            let s = pick_s(rng, &rat(n as i64, 2), false);
            let alpha = rational_in(rng, &zero, &alpha_upper(n, &s, &b).expect("s < N/2"));
            ParamSet::new(n, alpha, b, s)
        }
        LemmaId::LocalHs_HalfDim => {
            let n = rng.gen_range(1..=2u32);
            let b = pick_b(rng, n);
            let alpha = rational_in(rng, &((4 - &b * 2) / n as i64), &Rational::inf());
            ParamSet::new(n, alpha, b, rat(n as i64, 2))
        }
        LemmaId::GlobalBase => {
            let n = rng.gen_range(1..=6u32);
            let b = pick_b(rng, n);
            let s_hi = std::cmp::min(rat(n as i64, 2), one);
            let s = pick_s(rng, &s_hi, true);
            global_alpha(rng, n, b, s)
        }
        LemmaId::GlobalDeriv_HighDim => {
            let n = rng.gen_range(4..=6u32);
            let b = pick_b(rng, n);
            let s = pick_s(rng, &one, true);
            global_alpha(rng, n, b, s)
        }
        LemmaId::GlobalDeriv_3D => {
            let b = pick_b(rng, 3);
            let s = pick_s(rng, &one, true);
            global_alpha(rng, 3, b, s)
        }
        LemmaId::GlobalDeriv_1D => {
            let b = pick_b(rng, 1);
            let s = pick_s(rng, &rat(1, 2), false);
            global_alpha(rng, 1, b, s)
        }
        LemmaId::GlobalDeriv_2D => {
            let b = pick_b(rng, 2);
            let s = pick_s(rng, &one, false);
            global_alpha(rng, 2, b, s)
        }
        LemmaId::GlobalDeriv_HalfDim => {
            let n = rng.gen_range(1..=2u32);
            let b = pick_b(rng, n);
            global_alpha(rng, n, b, rat(n as i64, 2))
        }
    }
}

/// `α ∈ ((4−2b)/N, α_s)`: the intercritical range.
fn global_alpha<R: Rng + ?Sized>(rng: &mut R, n: u32, b: Rational, s: Rational) -> ParamSet {
    let lo = (4 - &b * 2) / n as i64;
    let hi = alpha_upper(n, &s, &b).expect("s <= N/2");
    let alpha = rational_in(rng, &lo, &hi);
    ParamSet::new(n, alpha, b, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_lie_inside_open_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (lo, hi) = (rat(1, 3), rat(1, 2));
        for _ in 0..500 {
            let x = rational_in(&mut rng, &lo, &hi);
            assert!(lo < x && x < hi);
            assert!(x.denom().unwrap() <= &(MAX_DEN * 4).into());
        }
    }

    #[test]
    fn narrow_intervals_still_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = rational_in(&mut rng, &rat(1, 1000), &rat(2, 1999));
        assert!(rat(1, 1000) < x && x < rat(2, 1999));
    }

    #[test]
    fn samples_satisfy_branch_guards() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let p = sample(LemmaId::GlobalDeriv_1D, &mut rng);
            assert_eq!(p.n, 1);
            assert!(p.s < rat(1, 2));
            let p = sample(LemmaId::GlobalDeriv_HalfDim, &mut rng);
            assert_eq!(p.s, rat(p.n as i64, 2));
        }
    }
}
