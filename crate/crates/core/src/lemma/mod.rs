//! Catalog of exponent systems behind the local and global estimates.
//!
//! Each lemma builds a symbolic [`sheet::Sheet`] of rational functions of
//! the split parameter θ and evaluates it exactly; nothing here rounds.

pub mod global;
pub mod local;
pub mod poly;
pub mod region;
pub mod report;
pub mod sheet;
pub mod time;

pub use global::{
    check_epsilon_windows, deriv_branch, fit_epsilon, forced_theta_3d, global_deriv_system, global_pairs,
    global_pairs_at, global_report, theta_window, theta_window_for,
};
pub use local::{high_dim_theta2, local_hs_system, local_l2_system, local_l2_theta2, low_dim_theta2};
pub use report::{LemmaId, LemmaReport, SignCondition};
pub use time::{contraction_time, TimeBound};

use crate::error::Result;
use crate::exponent::ParamSet;
use crate::rational::Rational;

/// Run the named lemma with its hypothesis and branch guards.
pub fn verify_lemma(id: LemmaId, p: &ParamSet) -> Result<LemmaReport> {
    match id {
        LemmaId::LocalL2 => local_l2_system(p),
        LemmaId::LocalHs_HighDim | LemmaId::LocalHs_LowDim | LemmaId::LocalHs_HalfDim => {
            local::build_local_hs(id, p)?.evaluate(&Rational::zero())
        }
        _ => global_report(id, p),
    }
}
