//! Machine-checkable records emitted by the lemma catalog.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exponent::{PairClass, ParamSet, Region};
use crate::rational::Rational;

#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LemmaId {
    LocalL2,
    LocalHs_HighDim,
    LocalHs_LowDim,
    LocalHs_HalfDim,
    GlobalBase,
    GlobalDeriv_HighDim,
    GlobalDeriv_3D,
    GlobalDeriv_1D,
    GlobalDeriv_2D,
    GlobalDeriv_HalfDim,
}

impl LemmaId {
    pub const ALL: [LemmaId; 10] = [
        LemmaId::LocalL2,
        LemmaId::LocalHs_HighDim,
        LemmaId::LocalHs_LowDim,
        LemmaId::LocalHs_HalfDim,
        LemmaId::GlobalBase,
        LemmaId::GlobalDeriv_HighDim,
        LemmaId::GlobalDeriv_3D,
        LemmaId::GlobalDeriv_1D,
        LemmaId::GlobalDeriv_2D,
        LemmaId::GlobalDeriv_HalfDim,
    ];

    /// Kebab-case name used on the command line.
    pub fn cli_name(self) -> &'static str {
        match self {
            LemmaId::LocalL2 => "local-l2",
            LemmaId::LocalHs_HighDim => "local-hs-high-dim",
            LemmaId::LocalHs_LowDim => "local-hs-low-dim",
            LemmaId::LocalHs_HalfDim => "local-hs-half-dim",
            LemmaId::GlobalBase => "global-base",
            LemmaId::GlobalDeriv_HighDim => "global-deriv-high-dim",
            LemmaId::GlobalDeriv_3D => "global-deriv-3d",
            LemmaId::GlobalDeriv_1D => "global-deriv-1d",
            LemmaId::GlobalDeriv_2D => "global-deriv-2d",
            LemmaId::GlobalDeriv_HalfDim => "global-deriv-half-dim",
        }
    }

    pub fn is_global(self) -> bool {
        !matches!(
            self,
            LemmaId::LocalL2 | LemmaId::LocalHs_HighDim | LemmaId::LocalHs_LowDim | LemmaId::LocalHs_HalfDim
        )
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for LemmaId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        LemmaId::ALL
            .into_iter()
            .find(|id| id.cli_name() == s || id.to_string() == s)
            .ok_or_else(|| Error::Parse(format!("unknown lemma `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignCondition {
    Pos,
    Neg,
    NonNeg,
}

impl SignCondition {
    pub fn holds(self, v: &Rational) -> bool {
        match self {
            SignCondition::Pos => v.is_positive(),
            SignCondition::Neg => v.is_negative(),
            SignCondition::NonNeg => !v.is_negative(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub name: String,
    pub q: Rational,
    pub r: Rational,
    pub claimed_class: PairClass,
    pub classified: PairClass,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolValue {
    pub name: String,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentSystem {
    pub name: String,
    pub region: Option<Region>,
    pub symbols: Vec<SymbolValue>,
    pub all_positive: bool,
}

impl ExponentSystem {
    pub fn get(&self, name: &str) -> Option<&Rational> {
        self.symbols.iter().find(|s| s.name == name).map(|s| &s.value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub name: String,
    pub lhs: Rational,
    pub rhs: Rational,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignRecord {
    pub expr: String,
    pub value: Rational,
    pub condition: SignCondition,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeChoiceRecord {
    pub symbol: String,
    pub lo: Rational,
    pub hi: Rational,
    pub value: Rational,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaExponents {
    pub t1: Rational,
    pub t2: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: LemmaId,
    pub params: ParamSet,
    pub pairs: Vec<PairRecord>,
    pub systems: Vec<ExponentSystem>,
    pub identities: Vec<IdentityRecord>,
    pub signs: Vec<SignRecord>,
    pub free_choices: Vec<FreeChoiceRecord>,
    pub theta: ThetaExponents,
    pub theta_window: Option<Rational>,
    pub corollary_term: Option<String>,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl LemmaReport {
    /// Recompute the overall verdict from the individual records.
    pub fn all_checks_pass(&self) -> bool {
        self.pairs.iter().all(|p| p.verified)
            && self.systems.iter().all(|s| s.all_positive)
            && self.identities.iter().all(|i| i.pass)
            && self.signs.iter().all(|s| s.pass)
            && self.free_choices.iter().all(|c| c.pass)
    }

    /// Descriptions of every failed check, empty when the report passes.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for p in self.pairs.iter().filter(|p| !p.verified) {
            out.push(format!("pair {} = ({}, {}) classified {}", p.name, p.q, p.r, p.classified));
        }
        for s in self.systems.iter().filter(|s| !s.all_positive) {
            out.push(format!("system {} has a nonpositive symbol", s.name));
        }
        for i in self.identities.iter().filter(|i| !i.pass) {
            out.push(format!("identity {}: {} != {}", i.name, i.lhs, i.rhs));
        }
        for s in self.signs.iter().filter(|s| !s.pass) {
            out.push(format!("sign {} = {} ({:?})", s.expr, s.value, s.condition));
        }
        for c in self.free_choices.iter().filter(|c| !c.pass) {
            out.push(format!("choice {} = {} outside ({}, {})", c.symbol, c.value, c.lo, c.hi));
        }
        out
    }

    pub fn pair(&self, name: &str) -> Option<&PairRecord> {
        self.pairs.iter().find(|p| p.name == name)
    }

    pub fn system(&self, name: &str) -> Option<&ExponentSystem> {
        self.systems.iter().find(|s| s.name == name)
    }

    pub fn sign(&self, expr: &str) -> Option<&SignRecord> {
        self.signs.iter().find(|s| s.expr == expr)
    }
}
