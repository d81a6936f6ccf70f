//! Univariate polynomials and rational functions over ℚ in the split
//! parameter θ, with Sturm sequences for exact real-root isolation.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Coefficients from the constant term upwards; never has a zero leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    c: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn constant(x: BigRational) -> Self {
        Poly::from_coeffs(vec![x])
    }

    /// The monomial θ.
    pub fn var() -> Self {
        Poly::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn from_coeffs(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.c.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.c[0].clone()),
            _ => None,
        }
    }

    pub fn lead(&self) -> Option<&BigRational> {
        self.c.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        // Fraction-free Horner: carry numerator and denominator separately
        // and reduce once at the end.
        let (p, q) = (x.numer(), x.denom());
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for a in self.c.iter().rev() {
            let (n, d) = (a.numer(), a.denom());
            num = &num * p * d + n * &den * q;
            den = den * q * d;
        }
        BigRational::new(num, den)
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { c: self.c.iter().map(|a| a * k).collect() }
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Number of vanishing low-order coefficients (the multiplicity of the root at 0).
    pub fn low_order(&self) -> usize {
        self.c.iter().take_while(|a| a.is_zero()).count()
    }

    /// Divide by θ^k, assuming the k lowest coefficients vanish.
    pub fn shift_down(&self, k: usize) -> Poly {
        Poly::from_coeffs(self.c.iter().skip(k).cloned().collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dl = d.lead().expect("polynomial division by zero").clone();
        let dd = d.c.len() - 1;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let coef = &r[i + dd] / &dl;
            if !coef.is_zero() {
                for (j, dj) in d.c.iter().enumerate() {
                    r[i + j] -= &coef * dj;
                }
            }
            q[i] = coef;
        }
        r.truncate(dd);
        (Poly::from_coeffs(q), Poly::from_coeffs(r))
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        // A linear argument divides the other exactly when its root is a root there.
        for (lin, other) in [(a, b), (b, a)] {
            match (lin.degree(), other.degree()) {
                (Some(0), _) if !other.is_zero() => return Poly::constant(BigRational::one()),
                (Some(1), Some(_)) => {
                    let root = -&lin.c[0] / &lin.c[1];
                    return if other.eval(&root).is_zero() {
                        lin.monic()
                    } else {
                        Poly::constant(BigRational::one())
                    };
                }
                _ => {}
            }
        }
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = r.monic();
        }
        x.monic()
    }

    /// Sign just to the right of 0: the sign of the lowest nonzero coefficient.
    pub fn sign_at_zero_plus(&self) -> i32 {
        match self.c.iter().find(|a| !a.is_zero()) {
            None => 0,
            Some(a) if a.is_positive() => 1,
            Some(_) => -1,
        }
    }

    /// Upper bound on the modulus of every root (Cauchy).
    pub fn root_bound(&self) -> BigRational {
        let l = match self.lead() {
            Some(l) => l.abs(),
            None => return BigRational::zero(),
        };
        let m = self.c[..self.c.len() - 1]
            .iter()
            .map(|a| a.abs() / &l)
            .max()
            .unwrap_or_else(BigRational::zero);
        m + BigRational::one()
    }

    /// Smallest positive real root, as an exact value when the root is rational
    /// and found directly, otherwise as a strict lower bound within `2^-bits`
    /// relative precision. `None` when there is no positive root.
    pub fn smallest_positive_root(&self, bits: u32) -> Option<RootBound> {
        self.smallest_positive_root_below(None, bits)
    }

    /// Smallest positive root in `(0, cap]`, or `None` when there is none.
    /// A floating-point Sturm bisection proposes a bracket which is then
    /// confirmed exactly; exact bisection is the fallback.
    pub fn smallest_positive_root_below(&self, cap: Option<&BigRational>, bits: u32) -> Option<RootBound> {
        let k = self.low_order();
        let p = self.shift_down(k);
        match p.degree()? {
            0 => None,
            1 => {
                let root = -&p.c[0] / &p.c[1];
                (root.is_positive() && !cap.is_some_and(|c| &root > c)).then_some(RootBound::Exact(root))
            }
            _ => {
                if p.descartes_positive_bound() == 0 {
                    return None;
                }
                if let Some(c) = cap {
                    if p.dominated_on(c) {
                        return None;
                    }
                }
                let sq = p.square_free();
                let st = Sturm::new(&sq);
                let zero = BigRational::zero();
                let mut hi = sq.root_bound();
                if let Some(c) = cap {
                    if c < &hi {
                        hi = c.clone();
                    }
                }
                let v0 = st.variations(&zero);
                if v0.saturating_sub(st.variations(&hi)) == 0 {
                    return None;
                }
                let tol = BigRational::new(BigInt::one(), BigInt::one() << bits);
                if let Some(found) = st.confirm_float_guess(&sq, v0, &hi, &tol) {
                    return Some(found);
                }
                // Shrink the bracket so that (0, lo] has no root and (lo, hi] has one.
                let mut lo = zero;
                let two = BigRational::from_integer(BigInt::from(2));
                loop {
                    if (&hi - &lo) <= &hi * &tol {
                        if sq.eval(&hi).is_zero() {
                            return Some(RootBound::Exact(hi));
                        }
                        return Some(RootBound::Below(lo));
                    }
                    let mid = (&lo + &hi) / &two;
                    if st.variations(&mid) == v0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
            }
        }
    }

    /// True when `|a₀| > Σ_{i≥1} |aᵢ| cⁱ`, so there is no root in `[0, c]`.
    /// Evaluated in floating point with a margin far above rounding error.
    fn dominated_on(&self, c: &BigRational) -> bool {
        const MARGIN: f64 = 1e-6;
        let (Some(c), Some(a0)) = (c.to_f64(), self.c.first().and_then(|a| a.to_f64())) else {
            return false;
        };
        let mut tail = 0.0;
        let mut pow = 1.0;
        for a in &self.c[1..] {
            pow *= c;
            let Some(a) = a.to_f64() else { return false };
            tail += a.abs() * pow;
        }
        let a0 = a0.abs();
        tail.is_finite() && a0.is_normal() && tail * (1.0 + MARGIN) < a0 * (1.0 - MARGIN)
    }

    /// Number of sign changes in the coefficient list, an upper bound on the
    /// number of positive roots.
    pub fn descartes_positive_bound(&self) -> usize {
        let signs: Vec<bool> = self.c.iter().filter(|a| !a.is_zero()).map(|a| a.is_positive()).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    pub fn square_free(&self) -> Poly {
        let g = Poly::gcd(self, &self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            self.clone()
        } else {
            self.div_rem(&g).0
        }
    }
}

/// Where the first positive root of a constraint polynomial sits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootBound {
    /// The root itself.
    Exact(BigRational),
    /// A value strictly below the root with no root in between.
    Below(BigRational),
}

impl RootBound {
    pub fn value(&self) -> &BigRational {
        match self {
            RootBound::Exact(x) | RootBound::Below(x) => x,
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.c.len().max(rhs.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.c.get(i);
            let b = rhs.c.get(i);
            c.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::from_coeffs(c)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { c: self.c.iter().map(|a| -a).collect() }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![BigRational::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::from_coeffs(c)
    }
}

/// Sturm chain of a square-free polynomial.
#[derive(Clone, Debug)]
pub struct Sturm {
    seq: Vec<Poly>,
}

impl Sturm {
    pub fn new(p: &Poly) -> Self {
        let mut seq = vec![p.clone(), p.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(-&r);
        }
        Sturm { seq }
    }

    pub fn variations(&self, x: &BigRational) -> usize {
        let mut count = 0;
        let mut last = 0i32;
        for p in &self.seq {
            let v = p.eval(x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    fn variations_f64(&self, x: f64) -> usize {
        let mut count = 0;
        let mut last = 0.0f64;
        for p in &self.seq {
            let v = p.c.iter().rev().fold(0.0, |acc, a| acc * x + a.to_f64().unwrap_or(f64::NAN));
            if v != 0.0 {
                if last != 0.0 && v.signum() != last.signum() {
                    count += 1;
                }
                last = v;
            }
        }
        count
    }

    /// Bisect in floating point for the first root in `(0, hi]`, then check
    /// exactly that `(0, lo]` is root-free and `(lo, up]` holds a root, with
    /// `up - lo` within the relative tolerance.
    fn confirm_float_guess(&self, sq: &Poly, v0: usize, hi: &BigRational, tol: &BigRational) -> Option<RootBound> {
        let (mut lo_f, mut hi_f) = (0.0f64, hi.to_f64()?);
        for _ in 0..200 {
            let mid = 0.5 * (lo_f + hi_f);
            if mid <= lo_f || mid >= hi_f {
                break;
            }
            if self.variations_f64(mid) == v0 {
                lo_f = mid;
            } else {
                hi_f = mid;
            }
        }
        let x = BigRational::from_float(hi_f)?;
        if !x.is_positive() {
            return None;
        }
        let half_tol = tol / BigRational::from_integer(BigInt::from(4));
        let one = BigRational::one();
        let lo = &x * (&one - &half_tol);
        let mut up = &x * (&one + &half_tol);
        if &up > hi {
            up = hi.clone();
        }
        if lo >= up || self.variations(&lo) != v0 || self.variations(&up) == v0 {
            return None;
        }
        // Prefer an exact rational root when the float lands on it.
        for cand in [&x, &up] {
            if sq.eval(cand).is_zero() {
                return Some(RootBound::Exact(cand.clone()));
            }
        }
        Some(RootBound::Below(lo))
    }

    /// Distinct real roots in the half-open interval `(a, b]`.
    pub fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// Quotient of polynomials in lowest terms with a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn constant(x: BigRational) -> Self {
        RatFn { num: Poly::constant(x), den: Poly::constant(BigRational::one()) }
    }

    pub fn var() -> Self {
        RatFn { num: Poly::var(), den: Poly::constant(BigRational::one()) }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    fn reduced(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFn::constant(BigRational::zero());
        }
        let (num, den) = if den.degree() == Some(0) || num.degree() == Some(0) {
            (num, den)
        } else {
            let g = Poly::gcd(&num, &den);
            if g.degree() == Some(0) {
                (num, den)
            } else {
                (num.div_rem(&g).0, den.div_rem(&g).0)
            }
        };
        RatFn::normalized(num, den)
    }

    /// Make the denominator monic; the caller guarantees lowest terms.
    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFn::constant(BigRational::zero());
        }
        let l = den.lead().expect("zero denominator");
        if l.is_one() {
            return RatFn { num, den };
        }
        let l = l.recip();
        RatFn { num: num.scale(&l), den: den.scale(&l) }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.den.degree() == Some(0) {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn eval(&self, x: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn try_div(&self, rhs: &RatFn) -> Result<RatFn> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFn::reduced(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    /// `num·den`, which has the same sign as the function wherever it is defined.
    pub fn sign_poly(&self) -> Poly {
        &self.num * &self.den
    }
}

impl Add for &RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        if self.den == rhs.den {
            return RatFn::reduced(&self.num + &rhs.num, self.den.clone());
        }
        // With g = gcd(b, d): a/b + c/d = (a (d/g) + c (b/g)) / (b d/g), and
        // only factors of g can cancel.
        let g = Poly::gcd(&self.den, &rhs.den);
        if g.degree() == Some(0) {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            return RatFn::normalized(num, &self.den * &rhs.den);
        }
        let bg = self.den.div_rem(&g).0;
        let dg = rhs.den.div_rem(&g).0;
        let num = &(&self.num * &dg) + &(&rhs.num * &bg);
        let den = &self.den * &dg;
        if num.is_zero() {
            return RatFn::constant(BigRational::zero());
        }
        let h = Poly::gcd(&num, &g);
        if h.degree() == Some(0) {
            RatFn::normalized(num, den)
        } else {
            RatFn::normalized(num.div_rem(&h).0, den.div_rem(&h).0)
        }
    }
}

impl Sub for &RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        // Both factors are in lowest terms, so only cross factors cancel.
        let (a, b) = cancel(&self.num, &rhs.den);
        let (c, d) = cancel(&rhs.num, &self.den);
        RatFn::normalized(&a * &c, &d * &b)
    }
}

/// `(x/g, y/g)` with `g = gcd(x, y)`, skipping the gcd when either side is constant.
fn cancel(x: &Poly, y: &Poly) -> (Poly, Poly) {
    if x.degree().unwrap_or(0) == 0 || y.degree().unwrap_or(0) == 0 {
        return (x.clone(), y.clone());
    }
    let g = Poly::gcd(x, y);
    if g.degree() == Some(0) {
        (x.clone(), y.clone())
    } else {
        (x.div_rem(&g).0, y.div_rem(&g).0)
    }
}

macro_rules! owned_ops {
    ($t:ty, $($tr:ident $f:ident),*) => {$(
        impl $tr<$t> for $t {
            type Output = $t;
            fn $f(self, rhs: $t) -> $t {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&$t> for $t {
            type Output = $t;
            fn $f(self, rhs: &$t) -> $t {
                (&self).$f(rhs)
            }
        }
        impl $tr<$t> for &$t {
            type Output = $t;
            fn $f(self, rhs: $t) -> $t {
                self.$f(&rhs)
            }
        }
    )*};
}

owned_ops!(Poly, Add add, Sub sub, Mul mul);
owned_ops!(RatFn, Add add, Sub sub, Mul mul);

impl Neg for RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        -&self
    }
}

/// Convert a finite extended rational to the underlying big rational.
pub fn big(x: &Rational) -> BigRational {
    x.as_big().expect("finite value expected").clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn poly(c: &[i64]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| r(x, 1)).collect())
    }

    #[test]
    fn arithmetic_and_division() {
        let a = poly(&[-1, 0, 1]); // θ² − 1
        let b = poly(&[1, 1]); // θ + 1
        let (q, rem) = a.div_rem(&b);
        assert_eq!(q, poly(&[-1, 1]));
        assert!(rem.is_zero());
        assert_eq!(&q * &b, a);
        assert_eq!(Poly::gcd(&a, &poly(&[2, 2])), b);
    }

    #[test]
    fn sturm_counts_roots() {
        // (θ − 1)(θ − 2)(θ − 3)
        let p = poly(&[-6, 11, -6, 1]);
        let s = Sturm::new(&p);
        assert_eq!(s.count(&r(0, 1), &r(10, 1)), 3);
        assert_eq!(s.count(&r(0, 1), &r(3, 2)), 1);
        assert_eq!(s.count(&r(1, 1), &r(2, 1)), 1);
    }

    #[test]
    fn smallest_root_linear_and_quadratic() {
        assert_eq!(poly(&[-3, 4]).smallest_positive_root(60), Some(RootBound::Exact(r(3, 4))));
        assert_eq!(poly(&[3, 4]).smallest_positive_root(60), None);
        // θ² − 2: irrational root √2, reported as a lower bound.
        let b = poly(&[-2, 0, 1]).smallest_positive_root(50).unwrap();
        let v = b.value().clone();
        assert!(&v * &v < r(2, 1));
        let f = num_traits::ToPrimitive::to_f64(&v).unwrap();
        assert!((f - 2f64.sqrt()).abs() < 1e-12);
        // a root at the origin is ignored.
        assert_eq!(poly(&[0, -1, 1]).smallest_positive_root(60), Some(RootBound::Exact(r(1, 1))));
        // double root
        let b = poly(&[1, -2, 1]).smallest_positive_root(40).unwrap();
        assert!((num_traits::ToPrimitive::to_f64(b.value()).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ratfn_reduces() {
        let t = RatFn::var();
        let one = RatFn::constant(r(1, 1));
        let a = &(&t * &t) - &one;
        let b = &t + &one;
        let q = a.try_div(&b).unwrap();
        assert_eq!(q, &t - &one);
        assert!((&q - &(&t - &one)).is_zero());
        assert_eq!(q.eval(&r(3, 1)).unwrap(), r(2, 1));
        assert!(one.try_div(&RatFn::constant(r(0, 1))).is_err());
    }
}
