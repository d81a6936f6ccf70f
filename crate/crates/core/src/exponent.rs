//! Admissibility calculus for time-space Lebesgue pairs.
//!
//! A pair `(q, r)` is L²-admissible when `2/q = N/2 − N/r` with `r` in the
//! L² window, Ḣ^s-admissible when `2/q = N/2 − N/r − s` with `r` in the
//! Ḣ^s window, and Ḣ^{−s}-admissible when `2/q = N/2 − N/r + s` with `r` in
//! the dual window. Endpoints written as `a⁻` or `a⁺` are realized as `a − ε`
//! and `a + ε`, so a tie with the unshrunk endpoint is rejected.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{rat, Rational};

/// Largest dimension covered by the test matrices.
pub const MAX_DIM: u32 = 6;

/// Default endpoint shrink for `a⁻`/`a⁺`.
pub fn default_epsilon() -> Rational {
    rat(1, 1000)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pair {
    pub q: Rational,
    pub r: Rational,
}

impl Pair {
    pub fn new(q: Rational, r: Rational) -> Self {
        Pair { q, r }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.q, self.r)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PairClass {
    L2Admissible,
    HsAdmissible(Rational),
    HsDualAdmissible(Rational),
    NotAdmissible(String),
}

impl PairClass {
    pub fn is_admissible(&self) -> bool {
        !matches!(self, PairClass::NotAdmissible(_))
    }
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairClass::L2Admissible => f.write_str("L2Admissible"),
            PairClass::HsAdmissible(s) => write!(f, "HsAdmissible({s})"),
            PairClass::HsDualAdmissible(s) => write!(f, "HsDualAdmissible({s})"),
            PairClass::NotAdmissible(why) => write!(f, "NotAdmissible({why})"),
        }
    }
}

impl FromStr for PairClass {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "L2Admissible" {
            return Ok(PairClass::L2Admissible);
        }
        let inner = |prefix: &str| -> Option<&str> {
            t.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')
        };
        if let Some(s) = inner("HsAdmissible") {
            return Ok(PairClass::HsAdmissible(s.parse()?));
        }
        if let Some(s) = inner("HsDualAdmissible") {
            return Ok(PairClass::HsDualAdmissible(s.parse()?));
        }
        if let Some(why) = inner("NotAdmissible") {
            return Ok(PairClass::NotAdmissible(why.to_string()));
        }
        Err(Error::Parse(format!("unknown pair class {text:?}")))
    }
}

impl Serialize for PairClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PairClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    Ball,
    BallComplement,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Ball => f.write_str("Ball"),
            Region::BallComplement => f.write_str("BallComplement"),
        }
    }
}

/// Parameters shared by every exponent system.
///
/// `theta`, `epsilon` and `mu` are optional: each lemma fills in its own
/// default when they are absent, and reports carry the resolved values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamSet {
    pub n: u32,
    pub alpha: Rational,
    pub b: Rational,
    pub s: Rational,
    pub lambda_sign: i8,
    pub theta: Option<Rational>,
    pub epsilon: Option<Rational>,
    pub mu: Option<Rational>,
}

impl ParamSet {
    pub fn new(n: u32, alpha: Rational, b: Rational, s: Rational) -> Self {
        ParamSet { n, alpha, b, s, lambda_sign: 1, theta: None, epsilon: None, mu: None }
    }

    pub fn with_theta(mut self, theta: Rational) -> Self {
        self.theta = Some(theta);
        self
    }

    pub fn with_epsilon(mut self, eps: Rational) -> Self {
        self.epsilon = Some(eps);
        self
    }

    pub fn with_mu(mut self, mu: Rational) -> Self {
        self.mu = Some(mu);
        self
    }

    pub fn with_lambda(mut self, sign: i8) -> Self {
        self.lambda_sign = sign;
        self
    }

    pub fn eps(&self) -> Rational {
        self.epsilon.clone().unwrap_or_else(default_epsilon)
    }

    pub fn critical_index(&self) -> Result<Rational> {
        critical_index(self.n, &self.alpha, &self.b)
    }

    pub fn n_rat(&self) -> Rational {
        Rational::int(self.n as i64)
    }
}

/// Range window for the spatial exponent `r`, bounds inclusive unless
/// `hi_open` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: Rational,
    pub hi: Rational,
    pub hi_open: bool,
}

impl Window {
    pub fn contains(&self, r: &Rational) -> bool {
        if r < &self.lo {
            return false;
        }
        if self.hi_open {
            r < &self.hi
        } else {
            r <= &self.hi
        }
    }

    pub fn is_empty(&self) -> bool {
        if self.hi_open {
            self.lo >= self.hi
        } else {
            self.lo > self.hi
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let close = if self.hi_open { ')' } else { ']' };
        write!(f, "[{}, {}{}", self.lo, self.hi, close)
    }
}

/// `s_c = N/2 − (2−b)/α`.
pub fn critical_index(n: u32, alpha: &Rational, b: &Rational) -> Result<Rational> {
    if !alpha.is_positive() || alpha.is_inf() {
        return Err(Error::UndefinedCriticalIndex);
    }
    Ok(rat(n as i64, 2) - (2 - b) / alpha)
}

/// `α_s = (4−2b)/(N−2s)`, infinite at `s = N/2`.
pub fn alpha_upper(n: u32, s: &Rational, b: &Rational) -> Result<Rational> {
    let gap = Rational::int(n as i64) - s * 2;
    if gap.is_negative() {
        return Err(Error::RegularityAboveHalfDim);
    }
    if s.is_negative() {
        return Err(Error::InvalidArgument("negative regularity".into()));
    }
    if gap.is_zero() {
        return Ok(Rational::inf());
    }
    Ok((4 - b * 2) / gap)
}

/// Upper bound for `b` in the Ḣ^s theory: `N/3` for `N ≤ 3`, otherwise 2.
pub fn b_upper(n: u32) -> Rational {
    if n <= 3 {
        rat(n as i64, 3)
    } else {
        Rational::int(2)
    }
}

/// `2* = (4−2b)/(N−2)` for `N ≥ 3`, infinite for `N = 1, 2`.
pub fn two_star(n: u32, b: &Rational) -> Rational {
    if n <= 2 {
        Rational::inf()
    } else {
        (4 - b * 2) / Rational::int(n as i64 - 2)
    }
}

/// Hölder conjugate `x' = x/(x−1)` with `1' = ∞` and `∞' = 1`.
pub fn conjugate(x: &Rational) -> Rational {
    assert!(*x >= Rational::one(), "Hölder conjugate needs an exponent >= 1, got {x}");
    match x {
        Rational::PosInf => Rational::one(),
        _ if *x == Rational::one() => Rational::inf(),
        _ => x / (x - 1),
    }
}

/// Componentwise Hölder conjugates. Panics on components below 1.
pub fn dual_pair(pair: &Pair) -> Pair {
    Pair::new(conjugate(&pair.q), conjugate(&pair.r))
}

/// `(a⁺)' = (a+ε)·a/ε`, so that `1/a = 1/(a⁺)' + 1/a⁺`.
pub fn plus_conjugate(a: &Rational, eps: &Rational) -> Result<Rational> {
    if !eps.is_positive() || eps.is_inf() {
        return Err(Error::InvalidArgument(format!("epsilon must be a positive finite value, got {eps}")));
    }
    if !a.is_finite() || *a <= Rational::one() {
        return Err(Error::InvalidArgument(format!("plus conjugate needs a finite a > 1, got {a}")));
    }
    Ok((a + eps) * a / eps)
}

/// Finiteness of `‖|x|^{−b}‖_{L^γ}` on the unit ball or its complement.
pub fn singular_weight_integrable(gamma: &Rational, b_eff: &Rational, n: u32, region: Region) -> bool {
    let v = Rational::int(n as i64) * gamma.recip().unwrap_or_else(|_| Rational::inf()) - b_eff;
    match region {
        Region::Ball => v.is_positive(),
        Region::BallComplement => v.is_negative(),
    }
}

/// Reciprocal with `1/∞ = 0`, used on exponents already known to be positive.
pub(crate) fn inv(x: &Rational) -> Rational {
    x.recip().expect("exponent must be nonzero")
}

pub fn l2_window(n: u32) -> Window {
    match n {
        1 => Window { lo: Rational::int(2), hi: Rational::inf(), hi_open: false },
        2 => Window { lo: Rational::int(2), hi: Rational::inf(), hi_open: true },
        _ => Window { lo: Rational::int(2), hi: rat(2 * n as i64, n as i64 - 2), hi_open: false },
    }
}

/// ε-realized Ḣ^s window, or `None` when `s ≥ N/2` leaves no window.
pub fn hs_window(n: u32, s: &Rational, eps: &Rational) -> Option<Window> {
    let nn = Rational::int(n as i64);
    if s * 2 >= nn || s.is_negative() {
        return None;
    }
    Some(match n {
        1 => Window { lo: 2 / (1 - s * 2), hi: Rational::inf(), hi_open: false },
        2 => {
            let a = 2 / (1 - s);
            let hi = plus_conjugate(&a, eps).ok()?;
            Window { lo: a, hi, hi_open: false }
        }
        _ => Window {
            lo: &nn * 2 / (&nn - s * 2),
            hi: rat(2 * n as i64, n as i64 - 2) - eps,
            hi_open: false,
        },
    })
}

/// ε-realized Ḣ^{−s} window, or `None` when `s ≥ N/2` leaves no window.
pub fn hs_dual_window(n: u32, s: &Rational, eps: &Rational) -> Option<Window> {
    let nn = Rational::int(n as i64);
    if s * 2 >= nn || s.is_negative() {
        return None;
    }
    Some(match n {
        1 => Window { lo: 2 / (1 - s * 2) + eps, hi: Rational::inf(), hi_open: false },
        2 => {
            let hi = plus_conjugate(&(2 / (1 + s)), eps).ok()?;
            Window { lo: 2 / (1 - s) + eps, hi, hi_open: false }
        }
        _ => Window {
            lo: &nn * 2 / (&nn - s * 2) + eps,
            hi: rat(2 * n as i64, n as i64 - 2) - eps,
            hi_open: false,
        },
    })
}

/// `N/2 − N/r − 2/q`; zero exactly when the L² scaling relation holds,
/// `s` when the Ḣ^s relation holds and `−s` for the dual relation.
pub fn scaling_defect(pair: &Pair, n: u32) -> Rational {
    let nn = Rational::int(n as i64);
    &nn / 2 - &nn * inv(&pair.r) - inv(&pair.q) * 2
}

/// Classify a pair against the L², Ḣ^s and Ḣ^{−s} definitions, in that order.
pub fn classify_pair(pair: &Pair, n: u32, s: &Rational, eps: &Rational) -> PairClass {
    let one = Rational::one();
    if pair.q < one || pair.r < one {
        return PairClass::NotAdmissible("pair component below 1".into());
    }
    if n == 0 {
        return PairClass::NotAdmissible("dimension must be positive".into());
    }
    let defect = scaling_defect(pair, n);
    let mut reason = None;
    if defect.is_zero() {
        let w = l2_window(n);
        if w.contains(&pair.r) {
            return PairClass::L2Admissible;
        }
        reason = Some(format!("r = {} outside L2 window {w}", pair.r));
    }
    if s.is_positive() {
        let hs = hs_window(n, s, eps);
        if defect == *s {
            match &hs {
                None => return PairClass::NotAdmissible("no Hs window for s >= N/2".into()),
                Some(w) if w.contains(&pair.r) => return PairClass::HsAdmissible(s.clone()),
                Some(w) => reason = Some(format!("r = {} outside Hs window {w}", pair.r)),
            }
        }
        if defect == -s {
            match hs_dual_window(n, s, eps) {
                None => return PairClass::NotAdmissible("no Hs window for s >= N/2".into()),
                Some(w) if w.contains(&pair.r) => return PairClass::HsDualAdmissible(s.clone()),
                Some(w) => reason = Some(format!("r = {} outside dual Hs window {w}", pair.r)),
            }
        }
    }
    PairClass::NotAdmissible(reason.unwrap_or_else(|| format!("scaling relation fails: N/2 - N/r - 2/q = {defect}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(q: Rational, r: Rational) -> Pair {
        Pair::new(q, r)
    }

    fn eps() -> Rational {
        default_epsilon()
    }

    #[test]
    fn critical_index_examples() {
        assert_eq!(critical_index(3, &rat(2, 3), &Rational::one()).unwrap(), Rational::zero());
        assert_eq!(critical_index(3, &Rational::int(2), &Rational::one()).unwrap(), Rational::one());
        assert_eq!(critical_index(2, &Rational::int(4), &Rational::zero()).unwrap(), rat(1, 2));
        assert!(matches!(
            critical_index(3, &Rational::zero(), &Rational::one()),
            Err(Error::UndefinedCriticalIndex)
        ));
    }

    #[test]
    fn alpha_upper_examples() {
        assert_eq!(alpha_upper(3, &Rational::one(), &Rational::one()).unwrap(), Rational::int(2));
        assert_eq!(alpha_upper(1, &rat(1, 2), &rat(1, 4)).unwrap(), Rational::inf());
        assert_eq!(alpha_upper(4, &Rational::one(), &Rational::zero()).unwrap(), Rational::int(2));
        assert!(matches!(alpha_upper(1, &Rational::one(), &rat(1, 4)), Err(Error::RegularityAboveHalfDim)));
    }

    #[test]
    fn b_upper_and_two_star() {
        assert_eq!(b_upper(2), rat(2, 3));
        assert_eq!(b_upper(3), Rational::one());
        assert_eq!(b_upper(5), Rational::int(2));
        assert_eq!(two_star(3, &Rational::one()), Rational::int(2));
        assert_eq!(two_star(2, &rat(1, 3)), Rational::inf());
        assert_eq!(two_star(4, &Rational::zero()), Rational::int(2));
    }

    #[test]
    fn classify_examples() {
        for n in 1..=MAX_DIM {
            assert_eq!(classify_pair(&p(Rational::inf(), Rational::int(2)), n, &Rational::zero(), &eps()), PairClass::L2Admissible);
        }
        assert_eq!(classify_pair(&p(Rational::int(2), Rational::int(6)), 3, &Rational::zero(), &eps()), PairClass::L2Admissible);
        assert_eq!(classify_pair(&p(rat(8, 3), Rational::int(4)), 3, &Rational::zero(), &eps()), PairClass::L2Admissible);
        assert!(!classify_pair(&p(Rational::int(2), Rational::int(7)), 3, &Rational::zero(), &eps()).is_admissible());
    }

    #[test]
    fn l2_windows_by_dimension() {
        // (4, inf) satisfies the 1D scaling relation and the closed endpoint r = inf.
        assert_eq!(classify_pair(&p(Rational::int(4), Rational::inf()), 1, &Rational::zero(), &eps()), PairClass::L2Admissible);
        // (2, inf) in 2D is the excluded endpoint.
        assert!(!classify_pair(&p(Rational::int(2), Rational::inf()), 2, &Rational::zero(), &eps()).is_admissible());
        // r below 2 is outside every L2 window.
        assert!(!classify_pair(&p(Rational::int(4), rat(3, 2)), 3, &Rational::zero(), &eps()).is_admissible());
    }

    #[test]
    fn hs_windows_reject_open_endpoints() {
        let s = rat(1, 2);
        // N = 3, r = 2N/(N-2) = 6 is open on the right for Hs.
        let r = Rational::int(6);
        let q = 2 / (rat(3, 2) - rat(1, 2) - s.clone());
        assert_eq!(q, Rational::int(4));
        let c = classify_pair(&p(q, r), 3, &s, &eps());
        assert!(!c.is_admissible(), "{c}");
        // N = 3, s = 1/2: lower endpoint r = 3 is closed, q = inf.
        let c = classify_pair(&p(Rational::inf(), Rational::int(3)), 3, &s, &eps());
        assert_eq!(c, PairClass::HsAdmissible(s.clone()));
        // the dual class rejects the unshrunk lower endpoint.
        let r = Rational::int(3);
        let q = 2 / (rat(3, 2) - Rational::one() + s.clone());
        let c = classify_pair(&p(q, r), 3, &s, &eps());
        assert!(!c.is_admissible(), "{c}");
    }

    #[test]
    fn hs_dual_interior_point() {
        let s = rat(1, 2);
        let r = Rational::int(4);
        let q = 2 / (rat(3, 2) - rat(3, 4) + s.clone());
        assert_eq!(classify_pair(&p(q, r), 3, &s, &eps()), PairClass::HsDualAdmissible(s));
    }

    #[test]
    fn no_hs_window_at_half_dimension() {
        let s = Rational::one();
        // In 2D with s = 1 only (inf, inf) meets the scaling relation, and there is no window.
        let c = classify_pair(&p(Rational::inf(), Rational::inf()), 2, &s, &eps());
        assert_eq!(c, PairClass::NotAdmissible("no Hs window for s >= N/2".into()));
        assert!(hs_window(2, &s, &eps()).is_none());
        assert!(hs_window(1, &rat(1, 2), &eps()).is_none());
    }

    #[test]
    fn dual_pair_examples() {
        assert_eq!(dual_pair(&p(Rational::inf(), Rational::int(2))), p(Rational::one(), Rational::int(2)));
        assert_eq!(dual_pair(&p(Rational::int(2), Rational::int(6))), p(Rational::int(2), rat(6, 5)));
        assert_eq!(dual_pair(&p(rat(8, 3), Rational::int(4))), p(rat(8, 5), rat(4, 3)));
    }

    #[test]
    fn plus_conjugate_examples() {
        assert_eq!(plus_conjugate(&Rational::int(2), &rat(1, 2)).unwrap(), Rational::int(10));
        assert_eq!(plus_conjugate(&Rational::int(4), &Rational::one()).unwrap(), Rational::int(20));
        let big = plus_conjugate(&Rational::int(2), &rat(1, 4)).unwrap();
        assert!(big > Rational::int(10));
        assert!(plus_conjugate(&Rational::int(2), &Rational::zero()).is_err());
    }

    #[test]
    fn integrability_examples() {
        assert!(singular_weight_integrable(&Rational::int(3), &rat(1, 2), 3, Region::Ball));
        assert!(singular_weight_integrable(&Rational::int(3), &Rational::int(2), 3, Region::BallComplement));
        let b = rat(3, 4);
        let gamma = Rational::int(3) / &b;
        assert!(!singular_weight_integrable(&gamma, &b, 3, Region::Ball));
        assert!(!singular_weight_integrable(&gamma, &b, 3, Region::BallComplement));
        assert!(singular_weight_integrable(&Rational::inf(), &b, 3, Region::BallComplement));
    }

    #[test]
    fn pair_class_round_trip() {
        for c in [
            PairClass::L2Admissible,
            PairClass::HsAdmissible(rat(3, 4)),
            PairClass::HsDualAdmissible(rat(1, 16)),
            PairClass::NotAdmissible("r = 7 outside (x)".into()),
        ] {
            assert_eq!(c.to_string().parse::<PairClass>().unwrap(), c);
        }
    }
}
