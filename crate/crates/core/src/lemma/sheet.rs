//! Symbolic worksheet of one exponent construction.
//!
//! Every quantity is a rational function of the split parameter θ (a
//! constant for the local lemmas). Exponents are stored through their
//! reciprocals so that `∞` is simply the value `0`. A worksheet can be
//! evaluated at a concrete θ, which yields a [`LemmaReport`], or analysed
//! symbolically, which yields the largest θ* such that every condition holds
//! on `(0, θ*)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use super::poly::{big, Poly, RatFn};
use super::report::{
    ExponentSystem, FreeChoiceRecord, IdentityRecord, LemmaId, LemmaReport, PairRecord, SignCondition, SignRecord,
    SymbolValue, ThetaExponents,
};
use crate::error::{Error, Result};
use crate::exponent::{classify_pair, hs_dual_window, hs_window, l2_window, Pair, PairClass, ParamSet, Region};
use crate::rational::Rational;

/// Bits of relative precision used when a window endpoint is irrational.
const ROOT_BITS: u32 = 48;

/// Class a constructed pair is claimed to have.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Claim {
    L2,
    Hs(Rational),
    HsDual(Rational),
}

impl Claim {
    fn class(&self) -> PairClass {
        match self {
            Claim::L2 => PairClass::L2Admissible,
            Claim::Hs(s) => PairClass::HsAdmissible(s.clone()),
            Claim::HsDual(s) => PairClass::HsDualAdmissible(s.clone()),
        }
    }

    fn s(&self) -> Rational {
        match self {
            Claim::L2 => Rational::zero(),
            Claim::Hs(s) | Claim::HsDual(s) => s.clone(),
        }
    }
}

#[derive(Clone, Debug)]
struct SPair {
    name: String,
    q_inv: RatFn,
    r_inv: RatFn,
    claim: Claim,
}

#[derive(Clone, Debug)]
struct SSystem {
    name: String,
    region: Option<Region>,
    symbols: Vec<(String, RatFn)>,
}

#[derive(Clone, Debug)]
struct SIdentity {
    name: String,
    lhs: RatFn,
    rhs: RatFn,
}

#[derive(Clone, Debug)]
struct SSign {
    expr: String,
    value: RatFn,
    cond: SignCondition,
}

#[derive(Clone, Debug)]
struct SChoice {
    symbol: String,
    lo: RatFn,
    hi: Option<RatFn>,
    value: RatFn,
}

/// Worksheet under construction. The builders in `local` and `global` fill
/// it and hand it to [`Sheet::evaluate`] or [`Sheet::theta_window`].
#[derive(Clone, Debug)]
pub struct Sheet {
    pub lemma: LemmaId,
    pub params: ParamSet,
    pairs: Vec<SPair>,
    systems: Vec<SSystem>,
    identities: Vec<SIdentity>,
    signs: Vec<SSign>,
    choices: Vec<SChoice>,
    theta: (RatFn, RatFn),
    pub notes: Vec<String>,
    pub corollary_term: Option<String>,
}

/// Constant rational function.
pub fn k(x: &Rational) -> RatFn {
    RatFn::constant(big(x))
}

/// Integer constant.
pub fn ki(n: i64) -> RatFn {
    RatFn::constant(BigRational::from_integer(BigInt::from(n)))
}

/// `a / b`, an error when `b` vanishes identically.
pub fn dv(a: &RatFn, b: &RatFn) -> Result<RatFn> {
    a.try_div(b).map_err(|_| Error::Arithmetic("vanishing denominator in exponent formula".into()))
}

/// `1/x` for an exponent given through its reciprocal, with `1/0 = ∞` mapped back to `0`.
pub fn inv(x: &RatFn) -> Result<RatFn> {
    dv(&ki(1), x)
}

/// Reciprocal of the Hölder conjugate: `1/x' = 1 − 1/x`.
pub fn conj(x_inv: &RatFn) -> RatFn {
    ki(1) - x_inv
}

impl Sheet {
    pub fn new(lemma: LemmaId, params: ParamSet) -> Self {
        Sheet {
            lemma,
            params,
            pairs: Vec::new(),
            systems: Vec::new(),
            identities: Vec::new(),
            signs: Vec::new(),
            choices: Vec::new(),
            theta: (ki(0), ki(0)),
            notes: Vec::new(),
            corollary_term: None,
        }
    }

    /// Record a pair through the reciprocals `1/q`, `1/r`.
    pub fn pair(&mut self, name: &str, q_inv: &RatFn, r_inv: &RatFn, claim: Claim) {
        self.pairs.push(SPair { name: name.into(), q_inv: q_inv.clone(), r_inv: r_inv.clone(), claim });
    }

    /// Record an exponent system through the reciprocals of its symbols.
    pub fn system(&mut self, name: &str, region: Option<Region>, symbols: &[(&str, &RatFn)]) {
        self.systems.push(SSystem {
            name: name.into(),
            region,
            symbols: symbols.iter().map(|(n, v)| ((*n).into(), (*v).clone())).collect(),
        });
    }

    pub fn identity(&mut self, name: &str, lhs: &RatFn, rhs: &RatFn) {
        self.identities.push(SIdentity { name: name.into(), lhs: lhs.clone(), rhs: rhs.clone() });
    }

    pub fn sign(&mut self, expr: &str, value: &RatFn, cond: SignCondition) {
        self.signs.push(SSign { expr: expr.into(), value: value.clone(), cond });
    }

    /// Free exponent chosen inside the open interval `(lo, hi)`; `hi = None` means `+∞`.
    pub fn choice(&mut self, symbol: &str, lo: &RatFn, hi: Option<&RatFn>, value: &RatFn) {
        self.choices.push(SChoice { symbol: symbol.into(), lo: lo.clone(), hi: hi.cloned(), value: value.clone() });
    }

    pub fn set_theta(&mut self, t1: &RatFn, t2: &RatFn) {
        self.theta = (t1.clone(), t2.clone());
    }

    pub fn note(&mut self, text: &str) {
        self.notes.push(text.into());
    }

    /// Evaluate every entry at `θ = theta` and run the independent checks.
    pub fn evaluate(&self, theta: &Rational) -> Result<LemmaReport> {
        let t = big(theta);
        let ev = |f: &RatFn| -> Result<Rational> {
            f.eval(&t).map(Rational::from).map_err(|_| theta_error(theta, None))
        };
        let exp = |f: &RatFn| -> Result<Rational> {
            let x = ev(f)?;
            if x.is_zero() {
                Ok(Rational::inf())
            } else {
                x.recip()
            }
        };
        let n = self.params.n;
        let eps = self.params.eps();

        let mut pairs = Vec::with_capacity(self.pairs.len());
        for p in &self.pairs {
            let q_inv = ev(&p.q_inv)?;
            let r_inv = ev(&p.r_inv)?;
            let claimed = p.claim.class();
            let (q, r, classified) = if q_inv.is_negative() || r_inv.is_negative() {
                (
                    exp(&p.q_inv)?,
                    exp(&p.r_inv)?,
                    PairClass::NotAdmissible("negative exponent".into()),
                )
            } else {
                let q = exp(&p.q_inv)?;
                let r = exp(&p.r_inv)?;
                let c = classify_pair(&Pair::new(q.clone(), r.clone()), n, &p.claim.s(), &eps);
                (q, r, c)
            };
            let verified = classified == claimed;
            pairs.push(PairRecord { name: p.name.clone(), q, r, claimed_class: claimed, classified, verified });
        }

        let mut systems = Vec::with_capacity(self.systems.len());
        for s in &self.systems {
            let mut symbols = Vec::with_capacity(s.symbols.len());
            let mut all_positive = true;
            for (name, v) in &s.symbols {
                let x = ev(v)?;
                if x.is_negative() {
                    all_positive = false;
                    symbols.push(SymbolValue { name: name.clone(), value: x.recip()? });
                } else {
                    symbols.push(SymbolValue { name: name.clone(), value: exp(v)? });
                }
            }
            systems.push(ExponentSystem { name: s.name.clone(), region: s.region, symbols, all_positive });
        }

        let mut identities = Vec::with_capacity(self.identities.len());
        for i in &self.identities {
            let lhs = ev(&i.lhs)?;
            let rhs = ev(&i.rhs)?;
            let pass = lhs == rhs;
            identities.push(IdentityRecord { name: i.name.clone(), lhs, rhs, pass });
        }

        let mut signs = Vec::with_capacity(self.signs.len());
        for s in &self.signs {
            let value = ev(&s.value)?;
            let pass = s.cond.holds(&value);
            signs.push(SignRecord { expr: s.expr.clone(), value, condition: s.cond, pass });
        }

        let mut free_choices = Vec::with_capacity(self.choices.len());
        for c in &self.choices {
            let lo = ev(&c.lo)?;
            let hi = match &c.hi {
                Some(h) => ev(h)?,
                None => Rational::inf(),
            };
            let value = ev(&c.value)?;
            let pass = lo < value && value < hi;
            free_choices.push(FreeChoiceRecord { symbol: c.symbol.clone(), lo, hi, value, pass });
        }

        let theta_exp = ThetaExponents { t1: ev(&self.theta.0)?, t2: ev(&self.theta.1)? };
        let mut report = LemmaReport {
            lemma: self.lemma,
            params: self.params.clone(),
            pairs,
            systems,
            identities,
            signs,
            free_choices,
            theta: theta_exp,
            theta_window: None,
            corollary_term: self.corollary_term.clone(),
            notes: self.notes.clone(),
            pass: false,
        };
        report.pass = report.all_checks_pass();
        Ok(report)
    }

    /// Every condition as a rational function that must be positive
    /// (`strict`) or nonnegative on `(0, θ*)`.
    fn constraints(&self) -> Result<Vec<(String, RatFn, bool)>> {
        let n = self.params.n;
        let eps = self.params.eps();
        let mut out = Vec::new();
        for p in &self.pairs {
            let name = &p.name;
            out.push((format!("{name}: 1/q >= 0"), p.q_inv.clone(), false));
            out.push((format!("{name}: q >= 1"), conj(&p.q_inv), false));
            let window = match &p.claim {
                Claim::L2 => Some(l2_window(n)),
                Claim::Hs(s) => hs_window(n, s, &eps),
                Claim::HsDual(s) => hs_dual_window(n, s, &eps),
            }
            .ok_or_else(|| Error::EpsilonTooLarge(format!("{name}: no window for the claimed class")))?;
            // lo <= r  <=>  1/r <= 1/lo, and r <= hi  <=>  1/r >= 1/hi.
            let lo_inv = k(&window.lo.recip()?);
            let hi_inv = k(&window.hi.recip()?);
            out.push((format!("{name}: r >= {}", window.lo), lo_inv - &p.r_inv, false));
            let upper = &p.r_inv - hi_inv;
            out.push((format!("{name}: r below {}", window.hi), upper, window.hi_open));
            let defect = k(&(self.params.n_rat() / 2)) - k(&self.params.n_rat()) * &p.r_inv - ki(2) * &p.q_inv;
            let target = match &p.claim {
                Claim::L2 => ki(0),
                Claim::Hs(s) => k(s),
                Claim::HsDual(s) => -k(s),
            };
            if !(defect - target).is_zero() {
                return Err(Error::NoThetaWindow(format!("{name}: scaling relation fails identically")));
            }
        }
        for s in &self.systems {
            for (sym, v) in &s.symbols {
                out.push((format!("{}: {sym} > 0", s.name), v.clone(), false));
            }
        }
        for i in &self.identities {
            if !(&i.lhs - &i.rhs).is_zero() {
                return Err(Error::NoThetaWindow(format!("identity {} fails identically", i.name)));
            }
        }
        for s in &self.signs {
            let v = match s.cond {
                SignCondition::Neg => -&s.value,
                _ => s.value.clone(),
            };
            out.push((s.expr.clone(), v, s.cond != SignCondition::NonNeg));
        }
        for c in &self.choices {
            out.push((format!("{} above lower end", c.symbol), &c.value - &c.lo, true));
            if let Some(h) = &c.hi {
                out.push((format!("{} below upper end", c.symbol), h - &c.value, true));
            }
        }
        out.push(("theta < alpha".into(), k(&self.params.alpha) - RatFn::var(), true));
        Ok(out)
    }

    /// Largest θ* such that every condition holds for all θ in `(0, θ*)`,
    /// capped at α. Irrational endpoints are rounded down to a dyadic value.
    pub fn theta_window(&self) -> Result<Rational> {
        // θ < α is itself a constraint, so α starts as the bound and every
        // root search only looks below the best bound found so far.
        let mut best = big(&self.params.alpha);
        let mut seen: Vec<Poly> = Vec::new();
        for (name, f, strict) in self.constraints()? {
            if f.is_zero() {
                if strict {
                    return Err(Error::NoThetaWindow(format!("{name} vanishes identically")));
                }
                continue;
            }
            if f.den().sign_at_zero_plus() * f.num().sign_at_zero_plus() < 0 {
                return Err(Error::NoThetaWindow(format!("{name} fails as theta -> 0+")));
            }
            for poly in [f.num(), f.den()] {
                if poly.degree().unwrap_or(0) == 0 || seen.contains(poly) {
                    continue;
                }
                seen.push(poly.clone());
                if let Some(root) = poly.smallest_positive_root_below(Some(&best), ROOT_BITS) {
                    let v = root.value().clone();
                    if v < best {
                        best = v;
                    }
                }
            }
        }
        if !best.is_positive() {
            return Err(Error::NoThetaWindow("empty window".into()));
        }
        Ok(Rational::from(best))
    }
}

pub(crate) fn theta_error(theta: &Rational, window: Option<&Rational>) -> Error {
    Error::ThetaOutsideWindow {
        theta: theta.to_string(),
        window: window.map_or_else(|| "?".to_string(), |w| w.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn params() -> ParamSet {
        ParamSet::new(3, rat(5, 2), rat(1, 2), Rational::one())
    }

    #[test]
    fn window_from_linear_constraint() {
        let mut sh = Sheet::new(LemmaId::GlobalBase, params());
        // 1/2 − θ > 0
        sh.sign("1/2 - theta", &(k(&rat(1, 2)) - RatFn::var()), SignCondition::Pos);
        assert_eq!(sh.theta_window().unwrap(), rat(1, 2));
    }

    #[test]
    fn window_capped_by_alpha() {
        let sh = Sheet::new(LemmaId::GlobalBase, params());
        assert_eq!(sh.theta_window().unwrap(), rat(5, 2));
    }

    #[test]
    fn negative_at_origin_is_error() {
        let mut sh = Sheet::new(LemmaId::GlobalBase, params());
        sh.sign("theta - 1", &(RatFn::var() - ki(1)), SignCondition::Pos);
        assert!(matches!(sh.theta_window(), Err(Error::NoThetaWindow(_))));
    }

    #[test]
    fn pole_limits_window() {
        let mut sh = Sheet::new(LemmaId::GlobalBase, params());
        // 1/(1 − 3θ) is positive until its pole at 1/3.
        let f = dv(&ki(1), &(ki(1) - ki(3) * RatFn::var())).unwrap();
        sh.sign("pole", &f, SignCondition::Pos);
        assert_eq!(sh.theta_window().unwrap(), rat(1, 3));
        assert!(matches!(sh.evaluate(&rat(1, 3)), Err(Error::ThetaOutsideWindow { .. })));
    }

    #[test]
    fn evaluation_classifies_pairs() {
        let mut sh = Sheet::new(LemmaId::GlobalBase, params());
        sh.pair("(2, 6)", &k(&rat(1, 2)), &k(&rat(1, 6)), Claim::L2);
        sh.pair("(2, 7)", &k(&rat(1, 2)), &k(&rat(1, 7)), Claim::L2);
        let rep = sh.evaluate(&rat(1, 100)).unwrap();
        assert!(rep.pairs[0].verified);
        assert!(!rep.pairs[1].verified);
        assert!(!rep.pass);
    }
}
