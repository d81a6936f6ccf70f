//! Exponent systems of the local theory: the L² estimate and the three
//! Ḣ^s dimension branches. None of these depend on θ, so every entry of the
//! worksheet is a constant.

use super::poly::RatFn;
use super::report::{LemmaId, LemmaReport, SignCondition::*};
use super::sheet::{conj, dv, k, ki, Claim, Sheet};
use crate::error::{Error, Result};
use crate::exponent::{alpha_upper, b_upper, ParamSet, Region, MAX_DIM};
use crate::rational::Rational;

/// Parameters lifted to constant rational functions.
pub(crate) struct Consts {
    pub n: RatFn,
    pub a: RatFn,
    pub b: RatFn,
    pub s: RatFn,
}

impl Consts {
    pub fn new(p: &ParamSet) -> Self {
        Consts { n: ki(p.n as i64), a: k(&p.alpha), b: k(&p.b), s: k(&p.s) }
    }
}

pub(crate) fn check_dimension(p: &ParamSet) -> Result<()> {
    if p.n == 0 || p.n > MAX_DIM {
        return Err(Error::Hypothesis(format!("1 <= N <= {MAX_DIM}")));
    }
    Ok(())
}

fn check_positive(name: &str, x: &Rational) -> Result<()> {
    if !x.is_positive() || x.is_inf() {
        return Err(Error::Hypothesis(format!("{name} > 0 (finite)")));
    }
    Ok(())
}

/// Larger of two constant rational functions.
fn cmax(x: RatFn, y: RatFn) -> RatFn {
    match (x.as_constant(), y.as_constant()) {
        (Some(a), Some(b)) if b > a => y,
        _ => x,
    }
}

/// Harmonic midpoint of `(lo, hi)`: the value whose reciprocal is the mean of the reciprocals.
pub(crate) fn harmonic_mid(lo: &RatFn, hi: &RatFn) -> Result<RatFn> {
    let s = dv(&ki(1), lo)? + dv(&ki(1), hi)?;
    dv(&ki(2), &s)
}

pub fn local_l2_system(p: &ParamSet) -> Result<LemmaReport> {
    build_local_l2(p)?.evaluate(&Rational::zero())
}

pub(crate) fn build_local_l2(p: &ParamSet) -> Result<Sheet> {
    check_dimension(p)?;
    check_positive("alpha", &p.alpha)?;
    check_positive("b", &p.b)?;
    let nq = p.n_rat();
    let two = Rational::int(2);
    if p.b >= std::cmp::min(two.clone(), nq.clone()) {
        return Err(Error::Hypothesis("b < min(2, N)".into()));
    }
    let bound = (4 - &p.b * 2) / &nq;
    if p.alpha > bound {
        return Err(Error::Hypothesis(format!("alpha <= (4-2b)/N = {bound}")));
    }
    let Consts { n, a, b, .. } = Consts::new(p);
    let mut sh = Sheet::new(LemmaId::LocalL2, p.clone());
    let top = ki(4) - ki(2) * &b + ki(2) * &n;

    let r_inv = dv(&(&n - &b), &top)?;
    let q_inv = dv(&n, &top)?;
    sh.pair("(q, r)", &q_inv, &r_inv, Claim::L2);

    let gamma = ki(1) - (&a + ki(2)) * &r_inv;
    let r1 = &a * &r_inv;
    let q1 = ki(1) - (&a + ki(2)) * &q_inv;
    let q2 = &a * &q_inv;
    sh.system("interior", Some(Region::Ball), &[("gamma", &gamma), ("r1", &r1), ("q1", &q1), ("q2", &q2)]);
    sh.identity("1/r' = 1/gamma + 1/r1 + 1/r", &conj(&r_inv), &(&gamma + &r1 + &r_inv));
    sh.identity("1/q' = 1/q1 + 1/q2 + 1/q", &conj(&q_inv), &(&q1 + &q2 + &q_inv));
    let closed = dv(&(ki(4) - ki(2) * &b - &a * &n), &top)?;
    sh.identity("1/q1 = (4-2b-alpha N)/(4-2b+2N)", &q1, &closed);
    sh.sign("N/gamma - b (Ball)", &(&n * &gamma - &b), Pos);

    // Exterior of the ball: unweighted subcritical pair, since |x|^-b <= 1 there.
    let re_inv = dv(&ki(1), &(&a + ki(2)))?;
    let qe_inv = dv(&(&n * &a), &(ki(4) * (&a + ki(2))))?;
    sh.pair("exterior (q_e, r_e)", &qe_inv, &re_inv, Claim::L2);
    let theta1 = ki(1) - (&a + ki(2)) * &qe_inv;
    sh.system("exterior", Some(Region::BallComplement), &[("q1", &theta1)]);
    sh.identity("1/r_e' = (alpha+1)/r_e", &conj(&re_inv), &((&a + ki(1)) * &re_inv));
    sh.identity("theta1 = 1 - N alpha/4", &theta1, &(ki(1) - dv(&(&n * &a), &ki(4))?));
    sh.sign("theta1", &theta1, Pos);
    sh.sign("theta2", &q1, Pos);
    sh.set_theta(&theta1, &q1);
    sh.note("theta1 is implementation-chosen: exterior estimate uses the unweighted pair (4(alpha+2)/(N alpha), alpha+2)");
    Ok(sh)
}

fn check_local_hs(p: &ParamSet) -> Result<()> {
    check_dimension(p)?;
    check_positive("alpha", &p.alpha)?;
    check_positive("b", &p.b)?;
    if p.b >= b_upper(p.n) {
        return Err(Error::Hypothesis(format!("b < {}", b_upper(p.n))));
    }
    let au = alpha_upper(p.n, &p.s, &p.b)?;
    if !p.s.is_positive() || p.s > Rational::one() {
        return Err(Error::Hypothesis("0 < s <= min(N/2, 1)".into()));
    }
    if p.alpha >= au {
        return Err(Error::Hypothesis(format!("alpha < alpha_s = {au}")));
    }
    Ok(())
}

/// Ḣ^s local estimate, dispatched on `(N, s)`.
pub fn local_hs_system(p: &ParamSet) -> Result<LemmaReport> {
    check_local_hs(p)?;
    let half = p.n_rat() / 2;
    let id = if p.n >= 3 {
        LemmaId::LocalHs_HighDim
    } else if p.s < half {
        LemmaId::LocalHs_LowDim
    } else {
        LemmaId::LocalHs_HalfDim
    };
    build_local_hs(id, p)?.evaluate(&Rational::zero())
}

pub(crate) fn build_local_hs(id: LemmaId, p: &ParamSet) -> Result<Sheet> {
    check_local_hs(p)?;
    let half = p.n_rat() / 2;
    match id {
        LemmaId::LocalHs_HighDim if p.n >= 3 => high_dim(p),
        LemmaId::LocalHs_LowDim if p.n <= 2 && p.s < half => low_dim(p),
        LemmaId::LocalHs_HalfDim if p.n <= 2 && p.s == half => half_dim(p),
        _ => Err(Error::WrongBranch(format!("{id} does not cover N = {}, s = {}", p.n, p.s))),
    }
}

/// Exterior estimate shared by the N ≥ 3 and N = 1, 2 branches.
fn exterior(sh: &mut Sheet, c: &Consts) -> Result<RatFn> {
    let Consts { n, a, b, s } = c;
    let r0 = dv(&(n + a * s), &(n * (a + ki(2))))?;
    let q0 = dv(&(a * (n - ki(2) * s)), &(ki(4) * (a + ki(2))))?;
    sh.pair("(q0, r0)", &q0, &r0, Claim::L2);
    let sob = dv(&(n * &r0 - s), n)?;
    let r1 = a * &sob;
    let gamma = ki(1) - ki(2) * &r0 - &r1;
    let beta = &r1 + &r0;
    let e = (a + ki(1)) * &sob;
    let d = ki(1) - &r0 - &e;
    let q1 = ki(1) - (a + ki(2)) * &q0;
    sh.system(
        "exterior",
        Some(Region::BallComplement),
        &[("gamma", &gamma), ("r1", &r1), ("beta", &beta), ("d", &d), ("e", &e), ("q1", &q1)],
    );
    sh.identity("1/gamma = 0", &gamma, &ki(0));
    sh.identity("1/r0' = 1/gamma + 1/beta", &conj(&r0), &(&gamma + &beta));
    sh.identity("1/r0' = 1/d + 1/e", &conj(&r0), &(&d + &e));
    sh.identity("1/(alpha r1) = 1/r0 - s/N", &dv(&r1, a)?, &(&r0 - dv(s, n)?));
    sh.identity("theta1 = (4 - alpha(N-2s))/4", &q1, &dv(&(ki(4) - a * (n - ki(2) * s)), &ki(4))?);
    sh.sign("N/gamma - b (BallComplement)", &(n * &gamma - b), Neg);
    sh.sign("N/d - b - s (BallComplement)", &(n * &d - b - s), Neg);
    sh.sign("N/r0 - s", &(n * &r0 - s), Pos);
    sh.sign("theta1", &q1, Pos);
    Ok(q1)
}

fn high_dim(p: &ParamSet) -> Result<Sheet> {
    let c = Consts::new(p);
    let mut sh = Sheet::new(LemmaId::LocalHs_HighDim, p.clone());
    let theta1 = exterior(&mut sh, &c)?;
    let Consts { n, a, b, s } = &c;
    let m = n - b + ki(2) - ki(2) * s;
    let r = dv(&(n * (n - ki(2) * s) + ki(4) * s - b * n), &(ki(2) * n * &m))?;
    let q = dv(&(n - ki(2) * s), &(ki(2) * &m))?;
    sh.pair("(q, r)", &q, &r, Claim::L2);
    let sob = dv(&(n * &r - s), n)?;
    let r1 = a * &sob;
    let gamma = ki(1) - ki(2) * &r - &r1;
    let beta = &r1 + &r;
    let e = (a + ki(1)) * &sob;
    let d = ki(1) - &r - &e;
    let q1 = ki(1) - (a + ki(2)) * &q;
    sh.system(
        "interior",
        Some(Region::Ball),
        &[("gamma", &gamma), ("r1", &r1), ("beta", &beta), ("d", &d), ("e", &e), ("q1", &q1)],
    );
    sh.identity("1/r' = 1/gamma + 1/beta", &conj(&r), &(&gamma + &beta));
    sh.identity("1/r' = 1/d + 1/e", &conj(&r), &(&d + &e));
    let closed = dv(&(ki(4) - ki(2) * b - a * (n - ki(2) * s)), &(ki(2) * &m))?;
    sh.identity("theta2 = (4-2b-alpha(N-2s))/(2(N-b+2-2s))", &q1, &closed);
    sh.sign("N/gamma - b (Ball)", &(n * &gamma - b), Pos);
    sh.sign("N/d - b - s (Ball)", &(n * &d - b - s), Pos);
    sh.sign("N/r - s", &(n * &r - s), Pos);
    sh.sign("theta2", &q1, Pos);
    sh.set_theta(&theta1, &q1);
    Ok(sh)
}

fn low_dim(p: &ParamSet) -> Result<Sheet> {
    let c = Consts::new(p);
    let mut sh = Sheet::new(LemmaId::LocalHs_LowDim, p.clone());
    let theta1 = exterior(&mut sh, &c)?;
    let Consts { n, a, b, s } = &c;
    let rbar = dv(s, &(ki(4) * n))?;
    let qbar = dv(&(ki(2) * n - s), &ki(8))?;
    sh.pair("(qbar, rbar)", &qbar, &rbar, Claim::L2);
    let m = n - ki(2) * s + ki(4) - ki(2) * b;
    let r = dv(
        &(ki(4) * s * (ki(4) - ki(2) * b) + (n - ki(2) * s) * (ki(4) * n - ki(4) * b - s)),
        &(ki(4) * n * &m),
    )?;
    let w = ki(8) - ki(2) * n + s;
    let q = dv(&(&w * (n - ki(2) * s)), &(ki(8) * &m))?;
    sh.pair("(q, r)", &q, &r, Claim::L2);
    let sob = dv(&(n * &r - s), n)?;
    let r1 = a * &sob;
    let gamma = conj(&rbar) - &r1 - &r;
    let beta = &r1 + &r;
    let e = (a + ki(1)) * &sob;
    let d = conj(&rbar) - &e;
    let q1 = conj(&qbar) - (a + ki(1)) * &q;
    sh.system(
        "interior",
        Some(Region::Ball),
        &[("gamma", &gamma), ("r1", &r1), ("beta", &beta), ("d", &d), ("e", &e), ("q1", &q1)],
    );
    sh.identity("1/rbar' = 1/gamma + 1/beta", &conj(&rbar), &(&gamma + &beta));
    sh.identity("1/rbar' = 1/d + 1/e", &conj(&rbar), &(&d + &e));
    sh.identity("N/d = N/gamma + s", &(n * &d), &(n * &gamma + s));
    let closed = dv(&w, &ki(8))? * dv(&(ki(4) - ki(2) * b - a * (n - ki(2) * s)), &m)?;
    sh.identity("theta2 = ((8-2N+s)/8)((4-2b-alpha(N-2s))/(N-2s+4-2b))", &q1, &closed);
    sh.sign("N/gamma - b (Ball)", &(n * &gamma - b), Pos);
    sh.sign("N/d - b - s (Ball)", &(n * &d - b - s), Pos);
    sh.sign("N/r - s", &(n * &r - s), Pos);
    sh.sign("theta2", &q1, Pos);
    sh.set_theta(&theta1, &q1);
    sh.note("time exponent uses 1/qbar' = (8-2N+s)/8");
    Ok(sh)
}

fn half_dim(p: &ParamSet) -> Result<Sheet> {
    let c = Consts::new(p);
    let mut sh = Sheet::new(LemmaId::LocalHs_HalfDim, p.clone());
    let Consts { n, a, b, s } = &c;
    let nb = n - ki(2) * b;
    let half = dv(&ki(1), &ki(2))?;

    // (i): L² data against the Ḣ^{N/2} norm of u.
    let r = dv(&nb, &(n * (a + ki(2))))?;
    let q = dv(&(n * a + ki(4) * b), &(ki(4) * (a + ki(2))))?;
    sh.pair("(q, r) (i)", &q, &r, Claim::L2);
    let big_l = dv(&(ki(2) * n * (a + ki(2))), &nb)?;
    let target = dv(&(a * &nb), &(ki(2) * (a + ki(2))))?;

    let ar1 = ki(2) * &big_l;
    sh.choice("alpha r1 (i, Ball)", &big_l, None, &ar1);
    let r1 = dv(a, &ar1)?;
    let gamma = &half - &r - &r1;
    sh.system("(i) interior", Some(Region::Ball), &[("gamma", &gamma), ("r1", &r1)]);
    sh.identity("(i) N/gamma - b = alpha(N-2b)/(2(alpha+2)) - N/r1 (Ball)", &(n * &gamma - b), &(&target - n * &r1));
    sh.sign("N/gamma - b (i, Ball)", &(n * &gamma - b), Pos);

    // Keep 1/gamma >= 0 by starting the exterior interval where 1/gamma vanishes.
    let g = dv(&(ki(2) * n * a * (a + ki(2))), &(n * a + ki(4) * b))?;
    let ar1 = harmonic_mid(&cmax(ki(2), g), &big_l)?;
    sh.choice("alpha r1 (i, BallComplement)", &ki(2), Some(&big_l), &ar1);
    let r1 = dv(a, &ar1)?;
    let gamma = &half - &r - &r1;
    sh.system("(i) exterior", Some(Region::BallComplement), &[("gamma", &gamma), ("r1", &r1)]);
    sh.identity(
        "(i) N/gamma - b = alpha(N-2b)/(2(alpha+2)) - N/r1 (BallComplement)",
        &(n * &gamma - b),
        &(&target - n * &r1),
    );
    sh.sign("N/gamma - b (i, BallComplement)", &(n * &gamma - b), Neg);
    let theta1 = conj(&q);
    sh.identity("theta1 = ((4-N)alpha + 8 - 4b)/(4(alpha+2))", &theta1, &dv(&((ki(4) - n) * a + ki(8) - ki(4) * b), &(ki(4) * (a + ki(2))))?);
    sh.sign("theta1", &theta1, Pos);

    // (ii): derivative estimate.
    let r = dv(&(n - b - s), &(n * (a + ki(2))))?;
    let q = dv(&(a * n + ki(2) * b + ki(2) * s), &(ki(4) * (a + ki(2))))?;
    sh.pair("(q, r) (ii)", &q, &r, Claim::L2);
    let target = dv(&((a + ki(1)) * &nb), &(ki(2) * (a + ki(2))))?;
    let l2 = dv(&(ki(2) * n * (a + ki(2))), &((a + ki(1)) * &nb))?;

    let r1_lo = cmax(l2.clone(), dv(&ki(2), a)?);
    let r1v = ki(2) * &r1_lo;
    sh.choice("r1 (ii, Ball)", &r1_lo, None, &r1v);
    let e_lo = cmax(l2, dv(&ki(2), &(a + ki(1)))?);
    let ev = ki(2) * &e_lo;
    sh.choice("e (ii, Ball)", &e_lo, None, &ev);
    let r1 = dv(&ki(1), &r1v)?;
    let e = dv(&ki(1), &ev)?;
    let beta = &r1 + &half;
    let gamma = conj(&r) - &beta;
    let d = conj(&r) - &e;
    sh.system(
        "(ii) interior",
        Some(Region::Ball),
        &[("gamma", &gamma), ("r1", &r1), ("beta", &beta), ("d", &d), ("e", &e)],
    );
    sh.identity("(ii) N/gamma - b = (alpha+1)(N-2b)/(2(alpha+2)) - N/r1 (Ball)", &(n * &gamma - b), &(&target - n * &r1));
    sh.identity("(ii) N/d - b - s = (alpha+1)(N-2b)/(2(alpha+2)) - N/e (Ball)", &(n * &d - b - s), &(&target - n * &e));
    sh.sign("N/gamma - b (ii, Ball)", &(n * &gamma - b), Pos);
    sh.sign("N/d - b - s (ii, Ball)", &(n * &d - b - s), Pos);

    let u1 = dv(&(ki(2) * n * a * (a + ki(2))), &((a + ki(1)) * &nb))?;
    let g1 = dv(&(ki(2) * n * a * (a + ki(2))), &(n * a + n + ki(2) * b))?;
    let ar1 = harmonic_mid(&cmax(ki(2), g1), &u1)?;
    sh.choice("alpha r1 (ii, BallComplement)", &ki(2), Some(&u1), &ar1);
    sh.sign("alpha r1 window upper end - 2 (ii, BallComplement)", &(&u1 - ki(2)), Pos);
    let u2 = ki(2) * n * (a + ki(2));
    let u2 = dv(&u2, &nb)?;
    let g2 = dv(
        &(ki(2) * n * (a + ki(1)) * (a + ki(2))),
        &(ki(2) * n * (a + ki(2)) - n + ki(2) * b),
    )?;
    let ae = harmonic_mid(&cmax(ki(2), g2), &u2)?;
    sh.choice("(alpha+1) e (ii, BallComplement)", &ki(2), Some(&u2), &ae);
    let r1 = dv(a, &ar1)?;
    let e = dv(&(a + ki(1)), &ae)?;
    let beta = &r1 + &half;
    let gamma = conj(&r) - &beta;
    let d = conj(&r) - &e;
    sh.system(
        "(ii) exterior",
        Some(Region::BallComplement),
        &[("gamma", &gamma), ("r1", &r1), ("beta", &beta), ("d", &d), ("e", &e)],
    );
    sh.sign("N/gamma - b (ii, BallComplement)", &(n * &gamma - b), Neg);
    sh.sign("N/d - b - s (ii, BallComplement)", &(n * &d - b - s), Neg);
    let theta2 = conj(&q);
    sh.sign("theta2", &theta2, Pos);
    sh.set_theta(&theta1, &theta2);
    sh.note("exterior free exponents start where 1/gamma or 1/d vanishes, keeping both nonnegative");
    Ok(sh)
}

/// θ₂ of the L² estimate; vanishes exactly at `α = (4−2b)/N`.
pub fn local_l2_theta2(n: u32, alpha: &Rational, b: &Rational) -> Rational {
    let nq = Rational::int(n as i64);
    (4 - b * 2 - alpha * &nq) / (4 - b * 2 + nq * 2)
}

/// θ₂ of the N ≥ 3 Ḣ^s estimate; vanishes exactly at `α = α_s`.
pub fn high_dim_theta2(n: u32, alpha: &Rational, b: &Rational, s: &Rational) -> Rational {
    let nq = Rational::int(n as i64);
    (4 - b * 2 - alpha * (&nq - s * 2)) / ((&nq - b + 2 - s * 2) * 2)
}

/// θ₂ of the N = 1, 2 Ḣ^s estimate; vanishes exactly at `α = α_s`.
pub fn low_dim_theta2(n: u32, alpha: &Rational, b: &Rational, s: &Rational) -> Rational {
    let nq = Rational::int(n as i64);
    let w = (8 - &nq * 2 + s) / 8;
    w * (4 - b * 2 - alpha * (&nq - s * 2)) / (&nq - s * 2 + 4 - b * 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn l2_worked_example() {
        let rep = local_l2_system(&ParamSet::new(2, Rational::one(), rat(1, 2), Rational::zero())).unwrap();
        let pair = rep.pair("(q, r)").unwrap();
        assert_eq!(pair.r, rat(14, 3));
        assert_eq!(pair.q, rat(7, 2));
        assert_eq!(rep.theta.t2, rat(1, 7));
        assert!(rep.pass, "{:?}", rep.failures());
    }

    #[test]
    fn l2_mass_critical_fails_positivity() {
        let rep = local_l2_system(&ParamSet::new(3, rat(2, 3), Rational::one(), Rational::zero())).unwrap();
        assert_eq!(rep.theta.t2, Rational::zero());
        assert!(!rep.sign("theta2").unwrap().pass);
        assert!(!rep.pass);
    }

    #[test]
    fn l2_subcritical_example() {
        let rep = local_l2_system(&ParamSet::new(3, rat(1, 3), Rational::one(), Rational::zero())).unwrap();
        assert_eq!(rep.theta.t2, rat(1, 8));
        assert!(rep.pass, "{:?}", rep.failures());
    }

    #[test]
    fn l2_rejects_alpha_above_bound() {
        let err = local_l2_system(&ParamSet::new(3, Rational::one(), Rational::one(), Rational::zero())).unwrap_err();
        assert!(err.to_string().contains("alpha <= (4-2b)/N"));
    }

    #[test]
    fn high_dim_example() {
        let p = ParamSet::new(3, Rational::one(), rat(1, 2), Rational::one());
        let rep = local_hs_system(&p).unwrap();
        assert_eq!(rep.lemma, LemmaId::LocalHs_HighDim);
        assert_eq!(rep.theta.t2, rat(2, 5));
        assert!(rep.pass, "{:?}", rep.failures());
        assert_eq!(rep.system("exterior").unwrap().get("gamma"), Some(&Rational::inf()));
    }

    #[test]
    fn half_dim_example() {
        let p = ParamSet::new(2, Rational::int(4), rat(1, 3), Rational::one());
        let rep = local_hs_system(&p).unwrap();
        assert_eq!(rep.lemma, LemmaId::LocalHs_HalfDim);
        let pair = rep.pair("(q, r) (i)").unwrap();
        assert_eq!(pair.r, Rational::int(9));
        assert_eq!(pair.q, rat(18, 7));
        assert!(rep.pass, "{:?}", rep.failures());
    }

    #[test]
    fn low_dim_example() {
        let p = ParamSet::new(1, Rational::int(2), rat(1, 4), rat(1, 4));
        let rep = local_hs_system(&p).unwrap();
        assert_eq!(rep.lemma, LemmaId::LocalHs_LowDim);
        assert!(rep.pass, "{:?}", rep.failures());
    }

    #[test]
    fn critical_alpha_is_rejected() {
        let p = ParamSet::new(3, Rational::int(3), rat(1, 2), Rational::one());
        let err = local_hs_system(&p).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));
        assert!(err.to_string().contains("alpha < alpha_s"));
    }

    #[test]
    fn wrong_branch_guard() {
        let p = ParamSet::new(2, Rational::one(), rat(1, 3), rat(1, 2));
        assert!(matches!(build_local_hs(LemmaId::LocalHs_HighDim, &p), Err(Error::WrongBranch(_))));
    }

    #[test]
    fn boundary_formulas_vanish() {
        let b = rat(1, 3);
        assert!(local_l2_theta2(2, &((4 - &b * 2) / 2), &b).is_zero());
        let s = rat(1, 2);
        let au = alpha_upper(4, &s, &b).unwrap();
        assert!(high_dim_theta2(4, &au, &b, &s).is_zero());
        let au = alpha_upper(2, &s, &b).unwrap();
        assert!(low_dim_theta2(2, &au, &b, &s).is_zero());
    }
}
