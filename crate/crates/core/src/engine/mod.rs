//! Global assembly of the vanishing homology: Euler characteristics, the
//! diagonal-intersection computation of the top group, corollary fast paths
//! and consequences for the absolute homology of `V`.

mod absolute;
mod euler;
mod top;

use std::fmt;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

pub use absolute::{absolute_report, AbsoluteReport, ComponentsCheck, DegreeRank};
pub use euler::{smooth_euler, vanishing_euler, SmoothBaseline};
pub use top::{
    component_kernel, corollary_checks, vanishing_top, vanishing_top_with, ComponentFlags, CorollaryFlags, Mode,
    TopHomology,
};

use crate::lattice::LatticeError;
use crate::local::LocalError;
use crate::model::{derived_counts, ComponentCounts, HypersurfaceConfig};
use crate::oracle::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("exact mode needs a relative cycle lattice at special points: {}", points.join(", "))]
    ExactModeUnavailable { points: Vec<String> },
    #[error("inconsistent local data: b∨_(n+1) would be {value}")]
    NegativeMidRank { value: i64 },
    #[error("surface with {r} irreducible components needs b∨_4 = {}, but the local data give {found}", r - 1)]
    ComponentsContradiction { r: u32, found: RankValue },
    #[error("surface with {r} irreducible components needs r - 1 <= Σ μ = {total_mu}")]
    ComponentsBound { r: u32, total_mu: u64 },
    #[error("the assumption that Φ is injective is impossible here: {0}")]
    PhiAssumption(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeRequest {
    #[default]
    Auto,
    Exact,
    Rank,
}

/// A rank that is either known or only bounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankValue {
    Exact(u64),
    Interval { lo: u64, hi: u64 },
}

impl RankValue {
    /// `[lo, hi]`, collapsed to an exact value when the ends meet.
    pub fn interval(lo: u64, hi: u64) -> Self {
        assert!(lo <= hi);
        if lo == hi {
            Self::Exact(lo)
        } else {
            Self::Interval { lo, hi }
        }
    }

    pub fn exact(&self) -> Option<u64> {
        match *self {
            Self::Exact(v) => Some(v),
            Self::Interval { .. } => None,
        }
    }

    pub fn lo(&self) -> u64 {
        match *self {
            Self::Exact(v) => v,
            Self::Interval { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> u64 {
        match *self {
            Self::Exact(v) => v,
            Self::Interval { hi, .. } => hi,
        }
    }

    pub fn contains(&self, v: u64) -> bool {
        self.lo() <= v && v <= self.hi()
    }
}

impl fmt::Display for RankValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exact(v) => write!(f, "{v}"),
            Self::Interval { lo, hi } => write!(f, "[{lo}, {hi}]"),
        }
    }
}

impl Serialize for RankValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(1))?;
        match *self {
            Self::Exact(v) => map.serialize_entry("exact", &v)?,
            Self::Interval { lo, hi } => map.serialize_entry("interval", &[lo, hi])?,
        }
        map.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TorsionStatus {
    Free,
    Undetermined,
}

/// The vanishing part of the report: everything about `H_*(V_Δ, V_ε)`.
#[derive(Clone, Debug)]
pub struct VanishingHomology {
    pub chi: i64,
    pub top: TopHomology,
    pub mid: RankValue,
    pub mid_torsion: TorsionStatus,
    pub corollaries: CorollaryFlags,
}

/// Ranks of the vanishing homology, which is concentrated in degrees
/// `n + 1` and `n + 2`.
pub fn vanishing_betti(config: &HypersurfaceConfig, request: ModeRequest) -> Result<VanishingHomology, EngineError> {
    let chi = vanishing_euler(config);
    let mut top = vanishing_top_with(config, request)?;
    let corollaries = corollary_checks(config)?;

    // χ = (−1)^{n+1} b_{n+1} + (−1)^{n+2} b_{n+2}
    let shift = euler::sign(config.n + 1) * chi;
    let mid = match top.rank {
        RankValue::Exact(b_top) => {
            let value = b_top as i64 + shift;
            if value < 0 {
                return Err(EngineError::NegativeMidRank { value });
            }
            RankValue::Exact(value as u64)
        }
        RankValue::Interval { lo, hi } => {
            let value = hi as i64 + shift;
            if value < 0 {
                return Err(EngineError::NegativeMidRank { value });
            }
            // b_{n+1} >= 0 also raises the floor on b_{n+2}
            let lo = lo.max((-shift).max(0) as u64);
            top.rank = RankValue::interval(lo, hi);
            RankValue::interval((lo as i64 + shift) as u64, value as u64)
        }
    };

    if let (Some(formula), Some(b_mid)) = (corollaries.betti_formula, mid.exact()) {
        if formula != b_mid as i64 || top.rank != RankValue::Exact(0) {
            return Err(EngineError::Internal(format!(
                "closed-form b∨_(n+1) = {formula} disagrees with b∨_(n+2) + (−1)^(n+1) χ = {b_mid}"
            )));
        }
    }

    let mid_torsion = if config.components.is_empty() {
        TorsionStatus::Free
    } else {
        TorsionStatus::Undetermined
    };
    Ok(VanishingHomology {
        chi,
        top,
        mid,
        mid_torsion,
        corollaries,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AnalysisOptions {
    pub mode: ModeRequest,
    pub assume_phi_injective: bool,
}

/// Everything computed for one configuration.
#[derive(Clone, Debug, Serialize)]
pub struct HomologyReport {
    pub label: String,
    pub n: u32,
    pub d: u32,
    pub config: serde_json::Value,
    pub mode_requested: ModeRequest,
    pub mode: Mode,
    pub counts: Vec<ComponentCounts>,
    pub chi_vanishing: i64,
    pub top_degree: u32,
    pub b_top: RankValue,
    #[serde(serialize_with = "crate::serde_util::opt_bigint_rows")]
    pub b_top_basis: Option<Vec<Vec<BigInt>>>,
    pub b_top_bound: u64,
    pub mid_degree: u32,
    pub b_mid: RankValue,
    pub mid_torsion: TorsionStatus,
    pub top_torsion: TorsionStatus,
    pub corollaries: CorollaryFlags,
    pub smooth_baseline: SmoothBaseline,
    pub absolute: AbsoluteReport,
    pub oracle_verdicts: Option<Vec<Verdict>>,
}

/// Runs the engine on a validated configuration.
pub fn analyze(config: &HypersurfaceConfig, options: AnalysisOptions) -> Result<HomologyReport, EngineError> {
    let vanishing = vanishing_betti(config, options.mode)?;
    let smooth = smooth_euler(config.n, config.d);
    let absolute = absolute_report(config, &vanishing, &smooth, options.assume_phi_injective)?;
    let echo = crate::model::config_value(config).map_err(|e| EngineError::Internal(e.to_string()))?;
    Ok(HomologyReport {
        label: config.label.clone(),
        n: config.n,
        d: config.d,
        config: echo,
        mode_requested: options.mode,
        mode: vanishing.top.mode,
        counts: derived_counts(config).components,
        chi_vanishing: vanishing.chi,
        top_degree: config.n + 2,
        b_top: vanishing.top.rank,
        b_top_basis: vanishing.top.basis.as_ref().map(|b| b.basis_vectors()),
        b_top_bound: vanishing.top.bound,
        mid_degree: config.n + 1,
        b_mid: vanishing.mid,
        mid_torsion: vanishing.mid_torsion,
        top_torsion: TorsionStatus::Free,
        corollaries: vanishing.corollaries,
        smooth_baseline: smooth,
        absolute,
        oracle_verdicts: None,
    })
}
