//! Exponent systems of the global theory. Everything except the
//! three-dimensional branch is a rational function of the split θ; the θ
//! window is the largest interval `(0, θ*)` on which every condition holds.

use num_traits::Signed;

use super::local::{check_dimension, harmonic_mid, Consts};
use super::poly::RatFn;
use super::report::{LemmaId, LemmaReport, SignCondition::*};
use super::sheet::{conj, dv, k, ki, theta_error, Claim, Sheet};
use crate::error::{Error, Result};
use crate::exponent::{alpha_upper, b_upper, default_epsilon, hs_dual_window, hs_window, ParamSet, Region};
use crate::rational::{rat, Rational};

/// `‖u‖^θ_{L∞Hs} ‖u‖^{α−θ}_{S(Ḣ^{sc})} ‖D^s u‖_{S(L²)}`.
pub const TERM_DERIVATIVE: &str = "c ||u||^theta_{L^inf H^s} ||u||^{alpha-theta}_{S(H^sc)} ||D^s u||_{S(L^2)}";
/// `‖u‖^{θ+1}_{L∞Hs} ‖u‖^{α−θ}_{S(Ḣ^{sc})}`.
pub const TERM_SUP: &str = "c ||u||^{theta+1}_{L^inf H^s} ||u||^{alpha-theta}_{S(H^sc)}";
/// `‖u‖^{1−μ}_{L∞Hs} ‖u‖^θ_{S(Ḣ^{sc})} ‖D^s u‖^{α−θ+μ}_{S(L²)}`.
pub const TERM_MU: &str = "c ||u||^{1-mu}_{L^inf H^s} ||u||^theta_{S(H^sc)} ||D^s u||^{alpha-theta+mu}_{S(L^2)}";

/// Default cap on the split parameter.
pub fn default_theta_cap() -> Rational {
    rat(1, 100)
}

fn check_global(p: &ParamSet) -> Result<()> {
    check_dimension(p)?;
    if !p.b.is_positive() {
        return Err(Error::Hypothesis("b > 0".into()));
    }
    if p.b >= b_upper(p.n) {
        return Err(Error::Hypothesis(format!("b < {}", b_upper(p.n))));
    }
    let au = alpha_upper(p.n, &p.s, &p.b)?;
    if !p.s.is_positive() || p.s > Rational::one() {
        return Err(Error::Hypothesis("0 < s <= min(N/2, 1)".into()));
    }
    let lower = (4 - &p.b * 2) / p.n_rat();
    if p.alpha <= lower {
        return Err(Error::Hypothesis(format!("alpha > (4-2b)/N = {lower}")));
    }
    if p.alpha >= au {
        return Err(Error::Hypothesis(format!("alpha < alpha_s = {au}")));
    }
    if let Some(e) = &p.epsilon {
        if !e.is_positive() {
            return Err(Error::InvalidArgument("epsilon > 0".into()));
        }
    }
    Ok(())
}

/// Both ε-shrunk windows at the critical index must be nonempty.
pub fn check_epsilon_windows(p: &ParamSet) -> Result<()> {
    let sc = p.critical_index()?;
    let eps = p.eps();
    let ok = |w: Option<crate::exponent::Window>| w.is_some_and(|w| !w.is_empty());
    if !ok(hs_window(p.n, &sc, &eps)) || !ok(hs_dual_window(p.n, &sc, &eps)) {
        return Err(Error::EpsilonTooLarge(format!("epsilon = {eps} empties a window at s_c = {sc}")));
    }
    Ok(())
}

/// Which global construction a lemma id uses; guards the dimension branch.
fn check_branch(id: LemmaId, p: &ParamSet) -> Result<()> {
    let half = p.n_rat() / 2;
    let ok = match id {
        LemmaId::GlobalBase => true,
        LemmaId::GlobalDeriv_HighDim => p.n >= 4,
        LemmaId::GlobalDeriv_3D => p.n == 3,
        LemmaId::GlobalDeriv_1D => p.n == 1 && p.s < half,
        LemmaId::GlobalDeriv_2D => p.n == 2 && p.s < half,
        LemmaId::GlobalDeriv_HalfDim => p.n <= 2 && p.s == half,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::WrongBranch(format!("{id} does not cover N = {}, s = {}", p.n, p.s)))
    }
}

/// Branch of the derivative estimate for the given `(N, s)`.
pub fn deriv_branch(p: &ParamSet) -> LemmaId {
    let half = p.n_rat() / 2;
    match p.n {
        3 => LemmaId::GlobalDeriv_3D,
        n if n >= 4 => LemmaId::GlobalDeriv_HighDim,
        _ if p.s == half => LemmaId::GlobalDeriv_HalfDim,
        1 => LemmaId::GlobalDeriv_1D,
        _ => LemmaId::GlobalDeriv_2D,
    }
}

struct G {
    c: Consts,
    t: RatFn,
    eps: RatFn,
    sc: RatFn,
    /// `(2−b)/α`.
    w: RatFn,
}

impl G {
    fn new(p: &ParamSet, theta: RatFn) -> Result<Self> {
        let sc = p.critical_index()?;
        Ok(G {
            c: Consts::new(p),
            t: theta,
            eps: k(&p.eps()),
            sc: k(&sc),
            w: k(&((2 - &p.b) / &p.alpha)),
        })
    }

    /// `α − θ`.
    fn at(&self) -> RatFn {
        &self.c.a - &self.t
    }
}

/// Shared pairs `(q̂, r̂)`, `(â, r̂)`, `(ã, r̂)` and their time identities.
fn base_pairs(sh: &mut Sheet, g: &G, with_dual: bool) -> Result<(RatFn, RatFn, RatFn)> {
    let Consts { n, a, b, .. } = &g.c;
    let t = &g.t;
    let big = a + ki(2) - t;
    let qh = dv(&(a * (n * a + ki(2) * b) - t * (n * a - ki(4) + ki(2) * b)), &(ki(4) * a * &big))?;
    let rh = dv(&(a * (n - b) - t * (ki(2) - b)), &(n * a * &big))?;
    let at_ = dv(
        &(a * (n * (a + ki(1) - t) - ki(2) + ki(2) * b) - (ki(4) - ki(2) * b) * (ki(1) - t)),
        &(ki(2) * a * &big),
    )?;
    let ah = dv(&(ki(4) - ki(2) * b - (n - ki(2)) * a), &(ki(2) * a * &big))?;
    let sc = g.sc.as_constant().map(Rational::from).expect("constant critical index");
    sh.pair("(qhat, rhat)", &qh, &rh, Claim::L2);
    sh.pair("(ahat, rhat)", &ah, &rh, Claim::Hs(sc.clone()));
    if with_dual {
        sh.pair("(atilde, rhat)", &at_, &rh, Claim::HsDual(sc));
        sh.identity("1/ahat + 1/atilde = 2/qhat", &(&ah + &at_), &(ki(2) * &qh));
        sh.identity("1/atilde' = (alpha-theta)/ahat + 1/ahat", &conj(&at_), &(g.at() * &ah + &ah));
    }
    sh.identity("1/qhat' = (alpha-theta)/ahat + 1/qhat", &conj(&qh), &(g.at() * &ah + &qh));
    Ok((qh, rh, ah))
}

/// `θ r₁` on the ball for the generic construction.
fn ball_theta_r1(g: &G, s_is_half: bool) -> Result<RatFn> {
    let Consts { n, s, .. } = &g.c;
    if s_is_half {
        // midpoint rule for (Nα/(2−b), ∞): twice the lower end
        Ok(ki(2) * dv(n, &g.w)?)
    } else {
        dv(&(ki(2) * n), &(n - ki(2) * s))
    }
}

/// `θ r₁` outside the ball: harmonic midpoint of `(2, Nα/(2−b))`.
fn exterior_theta_r1(g: &G) -> Result<RatFn> {
    harmonic_mid(&ki(2), &dv(&g.c.n, &g.w)?)
}

/// Weight system `1/r̂' = 1/γ + 1/r₁ + 1/r₂ + 1/r̂` with `r̂ = (α−θ) r₂`.
fn gamma_system(sh: &mut Sheet, g: &G, rh: &RatFn, region: Region, tr1: &RatFn, label: &str) -> Result<RatFn> {
    let Consts { n, b, s, .. } = &g.c;
    let t = &g.t;
    let r1 = dv(t, tr1)?;
    let r2 = g.at() * rh;
    let beta = &r1 + &r2 + rh;
    let gamma = conj(rh) - &beta;
    sh.system(label, Some(region), &[("gamma", &gamma), ("beta", &beta), ("r1", &r1), ("r2", &r2)]);
    let lhs = n * &gamma - b;
    sh.identity(&format!("{label}: N/gamma - b = theta(2-b)/alpha - N/r1"), &lhs, &(t * &g.w - n * &r1));
    match region {
        Region::Ball => {
            if sh.params.s < sh.params.n_rat() / 2 {
                sh.identity(&format!("{label}: N/gamma - b = theta(s - s_c)"), &lhs, &(t * (s - &g.sc)));
            }
            sh.sign(&format!("{label}: N/gamma - b"), &lhs, Pos);
        }
        Region::BallComplement => sh.sign(&format!("{label}: N/gamma - b"), &lhs, Neg),
    }
    Ok(gamma)
}

fn record_choices(sh: &mut Sheet, g: &G, s_is_half: bool) -> Result<(RatFn, RatFn)> {
    let Consts { n, s, .. } = &g.c;
    let top = dv(n, &g.w)?;
    let ball = ball_theta_r1(g, s_is_half)?;
    if s_is_half {
        sh.choice("theta r1 (Ball)", &top, None, &ball);
    } else {
        sh.sign("N alpha/(2-b) < 2N/(N-2s)", &(dv(&(ki(2) * n), &(n - ki(2) * s))? - &top), Pos);
    }
    let ext = exterior_theta_r1(g)?;
    sh.choice("theta r1 (BallComplement)", &ki(2), Some(&top), &ext);
    Ok((ball, ext))
}

fn build_base(p: &ParamSet, theta: RatFn) -> Result<Sheet> {
    let g = G::new(p, theta)?;
    let mut sh = Sheet::new(LemmaId::GlobalBase, p.clone());
    let (_, rh, _) = base_pairs(&mut sh, &g, true)?;
    let s_is_half = p.s == p.n_rat() / 2;
    let (ball, ext) = record_choices(&mut sh, &g, s_is_half)?;
    gamma_system(&mut sh, &g, &rh, Region::Ball, &ball, "interior")?;
    gamma_system(&mut sh, &g, &rh, Region::BallComplement, &ext, "exterior")?;
    sh.set_theta(&g.t, &g.at());
    Ok(sh)
}

fn build_high_dim(p: &ParamSet, theta: RatFn) -> Result<Sheet> {
    let g = G::new(p, theta)?;
    let mut sh = Sheet::new(LemmaId::GlobalDeriv_HighDim, p.clone());
    let (_, rh, _) = base_pairs(&mut sh, &g, false)?;
    let (ball, ext) = record_choices(&mut sh, &g, false)?;
    gamma_system(&mut sh, &g, &rh, Region::Ball, &ball, "N1 interior")?;
    gamma_system(&mut sh, &g, &rh, Region::BallComplement, &ext, "N1 exterior")?;
    let Consts { n, b, s, .. } = &g.c;
    let t = &g.t;
    let r3 = &rh - dv(s, n)?;
    sh.sign("N/rhat - s", &(n * &rh - s), Pos);
    for (region, tr1, label) in [(Region::Ball, ball, "N2 interior"), (Region::BallComplement, ki(2), "N2 exterior")] {
        let r1 = dv(t, &tr1)?;
        let r2 = g.at() * &rh;
        let e = &r1 + &r2 + &r3;
        let d = conj(&rh) - &e;
        sh.system(label, Some(region), &[("d", &d), ("e", &e), ("r1", &r1), ("r2", &r2), ("r3", &r3)]);
        let lhs = n * &d - b - s;
        sh.identity(&format!("{label}: N/d - b - s = theta(2-b)/alpha - N/r1"), &lhs, &(t * &g.w - n * &r1));
        match region {
            Region::Ball => {
                sh.identity(&format!("{label}: N/d - b - s = theta(s - s_c)"), &lhs, &(t * (s - &g.sc)));
                sh.sign(&format!("{label}: N/d - b - s"), &lhs, Pos);
            }
            Region::BallComplement => {
                sh.identity(&format!("{label}: N/d - b - s = -theta s_c"), &lhs, &(-(t * &g.sc)));
                sh.sign(&format!("{label}: N/d - b - s"), &lhs, Neg);
            }
        }
    }
    sh.set_theta(t, &g.at());
    sh.corollary_term = Some(TERM_DERIVATIVE.into());
    Ok(sh)
}

fn build_1d(p: &ParamSet, theta: RatFn) -> Result<Sheet> {
    let g = G::new(p, theta)?;
    let mut sh = Sheet::new(LemmaId::GlobalDeriv_1D, p.clone());
    let Consts { a, b, s, .. } = &g.c;
    let t = &g.t;
    let sc = &g.sc;
    let scr = Rational::from(sc.as_constant().expect("constant critical index"));
    let a1 = a + ki(1) - t;
    let ks = dv(&((ki(4) - ki(2) * b) * (g.at() + ki(1)) - a), &(ki(4) * a * &a1))?;
    let ls = dv(&g.at(), &(ki(4) * &a1))?;
    let ps = dv(&ki(1), &(ki(2) * &a1))?;
    let q0 = dv(&(a * b + t * (ki(2) - b)), &(ki(2) * a))?;
    let r0 = dv(&(a * (ki(1) - ki(2) * b) - t * (ki(4) - ki(2) * b)), &(ki(2) * a))?;
    sh.pair("(q0, r0)", &q0, &r0, Claim::L2);
    sh.pair("(l*, p*)", &ls, &ps, Claim::L2);
    sh.pair("(k*, p*)", &ks, &ps, Claim::Hs(scr.clone()));
    sh.pair("(4/(1-2s_c), inf)", &dv(&(ki(1) - ki(2) * sc), &ki(4))?, &ki(0), Claim::Hs(scr));
    sh.identity("1/q0' = (alpha-theta)/k* + 1/l*", &conj(&q0), &(g.at() * &ks + &ls));
    sh.identity(
        "(alpha-theta) q0' = 4/(1-2s_c)",
        &conj(&q0),
        &(g.at() * dv(&(ki(1) - ki(2) * sc), &ki(4))?),
    );
    let half = dv(&ki(1), &ki(2))?;
    for (region, label) in [(Region::Ball, "interior"), (Region::BallComplement, "exterior")] {
        let (r1, e) = match region {
            Region::Ball => (t * (ki(1) - ki(2) * s) * &half, (t + ki(1)) * (ki(1) - ki(2) * s) * &half),
            Region::BallComplement => (t * &half, (t + ki(1)) * &half),
        };
        let r2 = g.at() * &ps;
        let beta = &r1 + &r2 + &ps;
        let gamma = conj(&r0) - &beta;
        sh.system(&format!("P1 {label}"), Some(region), &[("gamma", &gamma), ("beta", &beta), ("r1", &r1), ("r2", &r2)]);
        let lhs = &gamma - b;
        sh.identity(&format!("P1 {label}: 1/gamma - b = theta(2-b)/alpha - 1/r1"), &lhs, &(t * &g.w - &r1));
        let d = conj(&r0) - &e;
        sh.system(&format!("P2 {label}"), Some(region), &[("d", &d), ("e", &e)]);
        sh.identity(&format!("P2 {label}: 1/d - b = 1/2 + theta(2-b)/alpha - 1/e"), &(&d - b), &(&half + t * &g.w - &e));
        let lhs2 = &d - b - s;
        match region {
            Region::Ball => {
                sh.identity(&format!("P1 {label}: 1/gamma - b = theta(s - s_c)"), &lhs, &(t * (s - sc)));
                sh.sign(&format!("P1 {label}: 1/gamma - b"), &lhs, Pos);
                sh.identity(&format!("P2 {label}: 1/d - b - s = theta(s - s_c)"), &lhs2, &(t * (s - sc)));
                sh.sign(&format!("P2 {label}: 1/d - b - s"), &lhs2, Pos);
            }
            Region::BallComplement => {
                sh.identity(&format!("P1 {label}: 1/gamma - b = -theta s_c"), &lhs, &(-(t * sc)));
                sh.sign(&format!("P1 {label}: 1/gamma - b"), &lhs, Neg);
                sh.identity(&format!("P2 {label}: 1/d - b - s = -theta s_c - s"), &lhs2, &(-(t * sc) - s));
                sh.sign(&format!("P2 {label}: 1/d - b - s"), &lhs2, Neg);
            }
        }
    }
    sh.set_theta(t, &g.at());
    sh.corollary_term = Some(TERM_SUP.into());
    Ok(sh)
}

fn build_2d(p: &ParamSet, theta: RatFn) -> Result<Sheet> {
    let g = G::new(p, theta)?;
    let mut sh = Sheet::new(LemmaId::GlobalDeriv_2D, p.clone());
    let Consts { a, b, s, .. } = &g.c;
    let (t, eps, sc) = (&g.t, &g.eps, &g.sc);
    let scr = Rational::from(sc.as_constant().expect("constant critical index"));
    let at = g.at();
    let a1 = a + ki(1) - t;
    let shift = ki(2) * eps * &at;
    let qt = dv(&(a * (b + &shift) + t * (ki(2) - b)), &(ki(2) * a))?;
    let rt = dv(&(a * (ki(1) - b - &shift) - t * (ki(2) - b)), &(ki(2) * a))?;
    let l0 = dv(&(&at * (ki(1) - ki(2) * eps)), &(ki(2) * &a1))?;
    let p0 = dv(&(ki(1) + &shift), &(ki(2) * &a1))?;
    let k0 = dv(&(a * (ki(1) - b - &shift) + (ki(2) - b) * (ki(1) - t)), &(ki(2) * a * &a1))?;
    let qe = dv(&(ki(2) - b - ki(2) * eps * a), &(ki(2) * a))?;
    sh.pair("(qtilde, rtilde)", &qt, &rt, Claim::L2);
    sh.pair("(l0, p0)", &l0, &p0, Claim::L2);
    sh.pair("(k0, p0)", &k0, &p0, Claim::Hs(scr.clone()));
    sh.pair("(2alpha/(2-b-2 eps alpha), 1/eps)", &qe, eps, Claim::Hs(scr));
    sh.identity("1/qtilde' = (alpha-theta)/k0 + 1/l0", &conj(&qt), &(&at * &k0 + &l0));
    sh.identity("(alpha-theta) qtilde' = 2alpha/(2-b-2 eps alpha)", &conj(&qt), &(&at * &qe));
    let half = dv(&ki(1), &ki(2))?;
    for (region, label) in [(Region::Ball, "interior"), (Region::BallComplement, "exterior")] {
        let (r1, r1p) = match region {
            Region::Ball => (t * (ki(1) - s) * &half, (t + ki(1)) * (ki(1) - s) * &half),
            Region::BallComplement => (t * &half, (t + ki(1)) * &half),
        };
        let r2 = &at * &p0;
        let beta = &r1 + &r2 + &p0;
        let gamma = conj(&rt) - &beta;
        sh.system(&format!("P1 {label}"), Some(region), &[("gamma", &gamma), ("beta", &beta), ("r1", &r1), ("r2", &r2)]);
        let lhs = ki(2) * &gamma - b;
        sh.identity(&format!("P1 {label}: 2/gamma - b = theta(2-b)/alpha - 2/r1"), &lhs, &(t * &g.w - ki(2) * &r1));
        let r2p = eps * &at;
        let e = &r1p + &r2p;
        let d = conj(&rt) - &e;
        sh.system(&format!("P2 {label}"), Some(region), &[("d", &d), ("e", &e), ("r1", &r1p), ("r2", &r2p)]);
        sh.identity(
            &format!("P2 {label}: 2/d = 1 + b + theta(2-b)/alpha - 2/r1"),
            &(ki(2) * &d),
            &(ki(1) + b + t * &g.w - ki(2) * &r1p),
        );
        let lhs2 = ki(2) * &d - b - s;
        match region {
            Region::Ball => {
                sh.identity(&format!("P1 {label}: 2/gamma - b = theta(s - s_c)"), &lhs, &(t * (s - sc)));
                sh.sign(&format!("P1 {label}: 2/gamma - b"), &lhs, Pos);
                sh.identity(&format!("P2 {label}: 2/d - b - s = theta(s - s_c)"), &lhs2, &(t * (s - sc)));
                sh.sign(&format!("P2 {label}: 2/d - b - s"), &lhs2, Pos);
            }
            Region::BallComplement => {
                sh.identity(&format!("P1 {label}: 2/gamma - b = -theta s_c"), &lhs, &(-(t * sc)));
                sh.sign(&format!("P1 {label}: 2/gamma - b"), &lhs, Neg);
                sh.identity(&format!("P2 {label}: 2/d - b - s = -theta s_c - s"), &lhs2, &(-(t * sc) - s));
                sh.sign(&format!("P2 {label}: 2/d - b - s"), &lhs2, Neg);
            }
        }
    }
    sh.set_theta(t, &at);
    sh.corollary_term = Some(TERM_SUP.into());
    Ok(sh)
}

fn build_half_dim(p: &ParamSet, theta: RatFn) -> Result<Sheet> {
    let g = G::new(p, theta)?;
    let mut sh = Sheet::new(LemmaId::GlobalDeriv_HalfDim, p.clone());
    let Consts { n, b, s, .. } = &g.c;
    let (t, sc) = (&g.t, &g.sc);
    let scr = Rational::from(sc.as_constant().expect("constant critical index"));
    let at = g.at();
    let a1 = &at + ki(1);
    let a1sq = &a1 * &a1;
    let abar = dv(&(ki(2) - sc), &(ki(2) * &a1))?;
    let qbar = dv(&(ki(2) + sc * &at), &(ki(2) * &a1))?;
    let rbar = dv(&(n * &a1 - ki(2) * sc * &at - ki(4)), &(ki(2) * n * &a1))?;
    let kbar = dv(&(ki(2) * &at * (ki(1) - sc) - sc), &(ki(2) * &a1sq))?;
    let lbar = dv(&(ki(2) * &at * (ki(1) - sc) + sc * (&a1sq - ki(1))), &(ki(2) * &a1sq))?;
    let pbar = dv(
        &((n - ki(2) * sc) * &a1sq - ki(4) * &at * (ki(1) - sc) + ki(2) * sc),
        &(ki(2) * n * &a1sq),
    )?;
    sh.pair("(qbar, rbar)", &qbar, &rbar, Claim::L2);
    sh.pair("(lbar, pbar)", &lbar, &pbar, Claim::L2);
    sh.pair("(abar, rbar)", &abar, &rbar, Claim::Hs(scr.clone()));
    sh.pair("(kbar, pbar)", &kbar, &pbar, Claim::Hs(scr));
    sh.identity("1/qbar' = (alpha-theta)/kbar + 1/lbar", &conj(&qbar), &(&at * &kbar + &lbar));
    sh.identity("abar = (alpha-theta) qbar'", &(&at * &abar), &conj(&qbar));
    let (ball, ext) = record_choices(&mut sh, &g, true)?;
    for (region, tr1, label) in [(Region::Ball, ball, "interior"), (Region::BallComplement, ext, "exterior")] {
        let r1 = dv(t, &tr1)?;
        let r2 = &at * &pbar;
        let beta = &r1 + &r2 + &pbar;
        let gamma = conj(&rbar) - &beta;
        sh.system(&format!("P1 {label}"), Some(region), &[("gamma", &gamma), ("beta", &beta), ("r1", &r1), ("r2", &r2)]);
        let lhs = n * &gamma - b;
        let rhs = t * &g.w - n * &r1;
        sh.identity(&format!("P1 {label}: N/gamma - b = theta(2-b)/alpha - N/r1"), &lhs, &rhs);
        let r2p = &at * &rbar;
        let e = &r1 + &r2p;
        let d = conj(&rbar) - &e;
        sh.system(&format!("P2 {label}"), Some(region), &[("d", &d), ("e", &e), ("r1", &r1), ("r2", &r2p)]);
        let lhs2 = n * &d - b - s;
        sh.identity(&format!("P2 {label}: N/d - b - s = theta(2-b)/alpha - N/r1"), &lhs2, &rhs);
        let cond = if region == Region::Ball { Pos } else { Neg };
        sh.sign(&format!("P1 {label}: N/gamma - b"), &lhs, cond);
        sh.sign(&format!("P2 {label}: N/d - b - s"), &lhs2, cond);
    }
    sh.set_theta(t, &at);
    sh.corollary_term = Some(TERM_SUP.into());
    Ok(sh)
}

/// Smaller of two constant rational functions.
fn cmin(x: RatFn, y: RatFn) -> RatFn {
    match (x.as_constant(), y.as_constant()) {
        (Some(a), Some(b)) if b < a => y,
        _ => x,
    }
}

/// Resolved `(μ, ε)` for the three-dimensional branch.
pub fn mu_epsilon(p: &ParamSet) -> Result<(Rational, Rational)> {
    let mu = p.mu.clone().unwrap_or_else(|| (1 + &p.b) / 2);
    if mu <= p.b || mu >= Rational::one() {
        return Err(Error::MuOutside);
    }
    let eps = p.epsilon.clone().unwrap_or_else(|| (&mu - &p.b) / 4);
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("epsilon > 0".into()));
    }
    if eps >= &mu - &p.b {
        return Err(Error::EpsilonTooLarge(format!("epsilon = {eps} must be below mu - b = {}", &mu - &p.b)));
    }
    Ok((mu, eps))
}

/// The forced split `θ = Fα` of the three-dimensional branch.
pub fn forced_theta_3d(p: &ParamSet) -> Result<Rational> {
    let (mu, eps) = mu_epsilon(p)?;
    let f = (2 - &eps + &mu - &p.b * 2) / (4 - &p.b * 2);
    Ok(f * &p.alpha)
}

fn build_3d(p: &ParamSet) -> Result<Sheet> {
    let (mu_r, eps_r) = mu_epsilon(p)?;
    let theta = forced_theta_3d(p)?;
    if let Some(given) = &p.theta {
        if *given != theta {
            return Err(Error::InvalidArgument(format!("theta is forced to F alpha = {theta} in 3D")));
        }
    }
    let params = p.clone().with_mu(mu_r.clone()).with_epsilon(eps_r).with_theta(theta.clone());
    let g = G::new(&params, k(&theta))?;
    let mut sh = Sheet::new(LemmaId::GlobalDeriv_3D, params.clone());
    let Consts { a, b, s, .. } = &g.c;
    let (t, eps, sc) = (&g.t, &g.eps, &g.sc);
    let scr = Rational::from(sc.as_constant().expect("constant critical index"));
    let mu = k(&mu_r);
    let at = g.at();
    let a1 = a + ki(1) - t;
    let dd = &at + &mu;
    let kk = dv(&(ki(4) - ki(2) * b - a), &(ki(4) * a * &a1))?;
    let pp = dv(&((ki(4) - ki(2) * b) * &at + a), &(ki(6) * a * &a1))?;
    let ll = dv(&(a * (ki(3) * a - ki(2) + ki(2) * b) - t * (ki(3) * a - ki(4) + ki(2) * b)), &(ki(4) * a * &a1))?;
    let mm = dv(&(&dd - eps), &(ki(4) * &dd))?;
    let nn = dv(&(ki(2) * &dd + eps), &(ki(6) * &dd))?;
    let gap = ki(2) + eps - &dd;
    let astar = dv(&gap, &(ki(4) * t))?;
    let rstar = dv(&((ki(4) - ki(2) * b) * t - &gap * a), &(ki(6) * a * t))?;
    let half = dv(&ki(1), &ki(2))?;
    let sixth = dv(&ki(1), &ki(6))?;
    sh.pair("(2, 6)", &half, &sixth, Claim::L2);
    sh.pair("(l, p)", &ll, &pp, Claim::L2);
    sh.pair("(k, p)", &kk, &pp, Claim::Hs(scr.clone()));
    sh.pair("(m, n)", &mm, &nn, Claim::L2);
    sh.pair("(a*, r*)", &astar, &rstar, Claim::Hs(scr));
    sh.identity("1/2' = (alpha-theta)/k + 1/l", &half, &(&at * &kk + &ll));
    sh.identity("1/2' = theta/a* + (alpha-theta+mu)/m", &half, &(t * &astar + &dd * &mm));
    sh.sign("2 + eps - D", &gap, Pos);
    sh.sign("(4-2b)theta - (2+eps-D)alpha", &((ki(4) - ki(2) * b) * t - &gap * a), Pos);
    sh.sign("(s - s_c)(alpha - theta)", &((s - sc) * &at), Pos);
    sh.sign("-theta s_c", &(-(t * sc)), Neg);
    let six_p = conj(&sixth);

    // Outside the ball θ r1 = 2 keeps 1/γ >= 0 only while θ s_c <= b. Since
    // θ = Fα is not small, fall back to 3/r1 inside the interval where
    // 0 <= 3/γ < b and θ r1 stays in the Sobolev range [2, 6/(3-2s)].
    let ext_r1 = if !(b - t * sc).as_constant().is_some_and(|v| v.is_negative()) {
        t * &half
    } else {
        let lo = dv(&(t * &g.w), &ki(3))?;
        let top = cmin(&lo + dv(b, &ki(3))?, t * &half);
        let mid = (&lo + &top) * &half;
        sh.choice("1/r1 (exterior)", &lo, Some(&top), &mid);
        sh.note("theta r1 = 2 outside the ball would make 1/gamma negative; 1/r1 is the midpoint of its admissible interval");
        mid
    };
    let standard_exterior = ext_r1 == t * &half;

    // M1: weight times |u|^θ |u|^{α−θ} D^s u.
    for (region, r1, label) in [
        (Region::Ball, t * (ki(3) - ki(2) * s) * &sixth, "M1 interior"),
        (Region::BallComplement, ext_r1.clone(), "M1 exterior"),
    ] {
        let r2 = &at * &pp;
        let beta = &r1 + &r2 + &pp;
        let gamma = &six_p - &beta;
        sh.system(label, Some(region), &[("gamma", &gamma), ("beta", &beta), ("r1", &r1), ("r2", &r2)]);
        let lhs = ki(3) * &gamma - b;
        sh.identity(&format!("{label}: 3/gamma - b = theta(2-b)/alpha - 3/r1"), &lhs, &(t * &g.w - ki(3) * &r1));
        match region {
            Region::Ball => {
                sh.identity(&format!("{label}: 3/gamma - b = theta(s - s_c)"), &lhs, &(t * (s - sc)));
                sh.sign(&format!("{label}: 3/gamma - b"), &lhs, Pos);
            }
            Region::BallComplement => {
                if standard_exterior {
                    sh.identity(&format!("{label}: 3/gamma - b = -theta s_c"), &lhs, &(-(t * sc)));
                }
                sh.sign(&format!("{label}: 3/gamma - b"), &lhs, Neg);
            }
        }
    }

    // M2 outside the ball: same splitting and the same r1.
    let r1 = ext_r1;
    let r2 = &at * &pp;
    let e = &r1 + &r2 + &pp;
    let d = &six_p - &e;
    sh.system("M2 exterior", Some(Region::BallComplement), &[("d", &d), ("e", &e), ("r1", &r1), ("r2", &r2)]);
    let lhs = ki(3) * &d - b;
    sh.identity("M2 exterior: 3/d - b = theta(2-b)/alpha - 3/r1", &lhs, &(t * &g.w - ki(3) * &r1));
    if standard_exterior {
        sh.identity("M2 exterior: 3/d - b = -theta s_c", &lhs, &(-(t * sc)));
    }
    sh.sign("M2 exterior: 3/d - b - s", &(&lhs - s), Neg);

    // M2 on the ball: the μ-split.
    let sob = &nn - dv(s, &ki(3))?;
    let r1 = t * &rstar;
    let r2 = &at * &sob;
    let r3 = &mu * &sob;
    let r4 = (ki(1) - &mu) * (ki(3) - ki(2) * s) * &sixth;
    let e = &r1 + &r2 + &r3 + &r4;
    let d = &six_p - &e;
    sh.system(
        "M2 interior",
        Some(Region::Ball),
        &[("d", &d), ("e", &e), ("r1", &r1), ("r2", &r2), ("r3", &r3), ("r4", &r4)],
    );
    let lhs = ki(3) * &d - b - s;
    sh.identity("M2 interior: 3/d - b - s = (s - s_c)(alpha - theta)", &lhs, &((s - sc) * &at));
    sh.sign("M2 interior: 3/d - b - s", &lhs, Pos);
    sh.sign("s < 3/n", &(ki(3) * &nn - s), Pos);
    sh.set_theta(t, &at);
    sh.corollary_term = Some(TERM_MU.into());
    sh.note("theta is forced to F alpha with F = (2-eps+mu-2b)/(4-2b)");
    Ok(sh)
}

fn symbolic(id: LemmaId, p: &ParamSet) -> Result<Sheet> {
    let t = RatFn::var();
    match id {
        LemmaId::GlobalBase => build_base(p, t),
        LemmaId::GlobalDeriv_HighDim => build_high_dim(p, t),
        LemmaId::GlobalDeriv_1D => build_1d(p, t),
        LemmaId::GlobalDeriv_2D => build_2d(p, t),
        LemmaId::GlobalDeriv_HalfDim => build_half_dim(p, t),
        _ => Err(Error::WrongBranch(format!("{id} has no theta window"))),
    }
}

/// Largest θ* such that the named global construction holds for every `θ ∈ (0, θ*)`.
pub fn theta_window_for(id: LemmaId, p: &ParamSet) -> Result<Rational> {
    check_global(p)?;
    check_branch(id, p)?;
    check_epsilon_windows(p)?;
    symbolic(id, p)?.theta_window()
}

/// θ window of the shared global pairs.
pub fn theta_window(p: &ParamSet) -> Result<Rational> {
    theta_window_for(LemmaId::GlobalBase, p)
}

/// Halvings of ε tried before giving up.
const MAX_EPS_HALVINGS: u32 = 60;

/// Run a global construction with the window guard. Without an explicit ε
/// the default is halved until the construction passes.
pub fn global_report(id: LemmaId, p: &ParamSet) -> Result<LemmaReport> {
    check_global(p)?;
    check_branch(id, p)?;
    if id == LemmaId::GlobalDeriv_3D {
        if p.epsilon.is_some() || p.theta.is_some() {
            return report_3d(p);
        }
        // ε must be small enough for the shrunk windows; halve the default.
        let (_, mut eps) = mu_epsilon(p)?;
        let mut rep = report_3d(p)?;
        for _ in 0..MAX_EPS_HALVINGS {
            if rep.pass {
                break;
            }
            eps = eps / 2;
            rep = report_3d(&p.clone().with_epsilon(eps.clone()))?;
        }
        return Ok(rep);
    }
    if p.epsilon.is_some() {
        report_at_epsilon(id, p)
    } else {
        fit_epsilon(id, p)
    }
}

/// Halve ε from the default until the construction has a window and passes.
pub fn fit_epsilon(id: LemmaId, p: &ParamSet) -> Result<LemmaReport> {
    let mut eps = default_epsilon();
    let mut last = None;
    for _ in 0..MAX_EPS_HALVINGS {
        let q = p.clone().with_epsilon(eps.clone());
        match report_at_epsilon(id, &q) {
            Ok(rep) if rep.pass => return Ok(rep),
            Ok(rep) => last = Some(Ok(rep)),
            Err(e @ (Error::EpsilonTooLarge(_) | Error::NoThetaWindow(_))) => last = Some(Err(e)),
            Err(e) => return Err(e),
        }
        eps = eps / 2;
    }
    last.expect("at least one attempt")
}

fn report_3d(p: &ParamSet) -> Result<LemmaReport> {
    build_3d(p)?.evaluate(&forced_theta_3d(p)?)
}

fn report_at_epsilon(id: LemmaId, p: &ParamSet) -> Result<LemmaReport> {
    check_epsilon_windows(p)?;
    let sheet = symbolic(id, p)?;
    let star = sheet.theta_window()?;
    let theta = match &p.theta {
        Some(t) => t.clone(),
        None => std::cmp::min(&star / 2, default_theta_cap()),
    };
    if !theta.is_positive() || theta >= star {
        return Err(theta_error(&theta, Some(&star)));
    }
    let mut rep = sheet.evaluate(&theta)?;
    rep.params.theta = Some(theta);
    rep.params.epsilon = Some(p.eps());
    rep.theta_window = Some(star);
    Ok(rep)
}

/// Shared global pairs with the θ-window guard.
pub fn global_pairs(p: &ParamSet) -> Result<LemmaReport> {
    global_report(LemmaId::GlobalBase, p)
}

/// Shared global pairs at a fixed θ without the window guard; a vanishing
/// denominator is still an error.
pub fn global_pairs_at(p: &ParamSet, theta: &Rational) -> Result<LemmaReport> {
    check_global(p)?;
    let (a, b, n) = (&p.alpha, &p.b, p.n_rat());
    if a * (&n * a + b * 2) == theta * (&n * a - 4 + b * 2) {
        return Err(theta_error(theta, None));
    }
    let mut rep = build_base(p, k(theta))?.evaluate(theta).map_err(|e| match e {
        Error::Arithmetic(_) => theta_error(theta, None),
        other => other,
    })?;
    rep.params.theta = Some(theta.clone());
    rep.params.epsilon = Some(p.eps());
    Ok(rep)
}

/// Derivative estimate, dispatched on `(N, s)`.
pub fn global_deriv_system(p: &ParamSet) -> Result<LemmaReport> {
    check_global(p)?;
    global_report(deriv_branch(p), p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ParamSet {
        ParamSet::new(3, rat(5, 2), rat(1, 2), Rational::one())
    }

    #[test]
    fn global_pairs_example() {
        let rep = global_pairs(&base().with_theta(rat(1, 100))).unwrap();
        assert!(rep.pass, "{:?}", rep.failures());
        assert!(rep.identities.iter().any(|i| i.name.starts_with("1/ahat + 1/atilde") && i.pass));
    }

    #[test]
    fn theta_zero_limit_keeps_edp() {
        let p = base();
        let rep = global_pairs_at(&p, &Rational::zero()).unwrap();
        let a = &p.alpha;
        let qh = a * (a + 2) * 4 / (a * (a * 3 + &p.b * 2));
        assert_eq!(rep.pair("(qhat, rhat)").unwrap().q, qh);
        assert_eq!(rep.pair("(qhat, rhat)").unwrap().r, (a + 2) * 3 / (3 - &p.b));
        assert!(rep.identities[0].pass);
    }

    #[test]
    fn vanishing_denominator_is_error() {
        // α(Nα+2b) = θ(Nα−4+2b) with N=3, α=5/2, b=1/2: θ = (5/2)(17/2)/(9/2) = 85/18
        let err = global_pairs_at(&base(), &rat(85, 18)).unwrap_err();
        assert!(matches!(err, Error::ThetaOutsideWindow { .. }));
    }

    #[test]
    fn theta_window_brackets() {
        let p = base();
        let star = theta_window(&p).unwrap();
        assert!(star <= p.alpha);
        assert!(global_pairs(&p.clone().with_theta(&star / 2)).unwrap().pass);
        assert!(global_pairs(&p.clone().with_theta(&star * 2)).is_err());
    }

    #[test]
    fn three_d_example() {
        let p = ParamSet::new(3, Rational::int(2), rat(1, 2), Rational::one()).with_mu(rat(3, 4)).with_epsilon(rat(1, 8));
        assert_eq!(forced_theta_3d(&p).unwrap(), rat(13, 12));
        let rep = global_deriv_system(&p).unwrap();
        assert_eq!(rep.lemma, LemmaId::GlobalDeriv_3D);
        assert_eq!(rep.params.theta, Some(rat(13, 12)));
        assert!(rep.identities.iter().filter(|i| i.name.starts_with("1/2'")).all(|i| i.pass));
        assert!(rep.pass, "{:?}", rep.failures());
        assert_eq!(rep.corollary_term.as_deref(), Some(TERM_MU));
    }

    #[test]
    fn three_d_mu_guard() {
        let p = ParamSet::new(3, Rational::int(2), rat(1, 2), Rational::one()).with_mu(rat(1, 2));
        assert!(matches!(global_deriv_system(&p), Err(Error::MuOutside)));
        assert_eq!(Error::MuOutside.to_string(), "mu outside (b,1)");
    }

    #[test]
    fn half_dim_example() {
        let p = ParamSet::new(1, Rational::int(4), rat(1, 4), rat(1, 2)).with_theta(rat(1, 100));
        let rep = global_deriv_system(&p).unwrap();
        assert_eq!(rep.lemma, LemmaId::GlobalDeriv_HalfDim);
        assert_eq!(p.critical_index().unwrap(), rat(1, 16));
        assert!(rep.pass, "{:?}", rep.failures());
        let abar = rep.identities.iter().find(|i| i.name == "abar = (alpha-theta) qbar'").unwrap();
        assert!(abar.pass);
    }

    #[test]
    fn branch_guard() {
        let p = ParamSet::new(2, Rational::int(2), rat(1, 3), rat(1, 2));
        assert!(matches!(global_report(LemmaId::GlobalDeriv_1D, &p), Err(Error::WrongBranch(_))));
    }
}
