use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use super::{EngineError, RankValue, SmoothBaseline, VanishingHomology};
use crate::model::HypersurfaceConfig;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeRank {
    pub degree: u32,
    pub rank: u64,
}

/// The identity `b∨_4 = r − 1` for surfaces with `r` irreducible components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentsCheck {
    pub r: u32,
    pub expected_top: u64,
}

/// Consequences for the homology of `V` itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbsoluteReport {
    /// `H_k(V) ≅ H_k(P^n)` for `k ∉ {n, n+1, n+2}`.
    pub stable_degrees: Vec<DegreeRank>,
    /// Upper bound `1 + Σ μ_i` on `b_{n+2}(V)`.
    pub b_top_upper_bound: u64,
    /// Upper bound `b_n(V_ε)` on `b_n(V)`.
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub b_n_upper_bound: BigInt,
    /// `b_{n+2}(V)`, exact for even `n`.
    pub b_top: RankValue,
    /// The remaining ranks, written in terms of the unresolved maps Φ.
    pub relations: Vec<String>,
    pub assumed_phi_injective: bool,
    /// `b_{n+1}(V)` under the injectivity assumption.
    pub b_mid: Option<u64>,
    /// `b_n(V)` under the injectivity assumption.
    #[serde(serialize_with = "opt_bigint")]
    pub b_n: Option<BigInt>,
    pub components_check: Option<ComponentsCheck>,
}

fn opt_bigint<S: serde::Serializer>(x: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => crate::serde_util::bigint(v, s),
        None => s.serialize_none(),
    }
}

/// Reads off what the vanishing homology determines about `H_*(V)` through
/// the exact sequence of the pair `(V_Δ, V_ε)`.
pub fn absolute_report(
    config: &HypersurfaceConfig,
    vanishing: &VanishingHomology,
    smooth: &SmoothBaseline,
    assume_phi_injective: bool,
) -> Result<AbsoluteReport, EngineError> {
    let n = config.n;
    let total_mu = config.total_mu_perp() as u64;
    let top = vanishing.top.rank;
    let mid = vanishing.mid;
    let even = n.is_multiple_of(2);

    let stable_degrees = (0..=2 * n)
        .filter(|k| !(n..=n + 2).contains(k))
        .map(|k| DegreeRank {
            degree: k,
            rank: u64::from(k % 2 == 0),
        })
        .collect();

    // For even n, H_{n+2}(V_ε) = Z injects and H_{n+1}(V_ε) = 0; for odd n
    // the roles flip and Φ_{n+1} lands in H_{n+1}(V_ε) = Z.
    let b_top_abs = if even {
        RankValue::interval(top.lo() + 1, top.hi() + 1)
    } else {
        RankValue::interval(top.lo().saturating_sub(1), top.hi())
    };

    let b_mid_text = mid.to_string();
    let relations = if even {
        vec![
            format!("b_{}(V) = 1 + b∨_{} = {}", n + 2, n + 2, b_top_abs),
            format!("b_{}(V) = rank ker Φ_{}", n + 1, n),
            format!(
                "b_{}(V) = b_{}(V_ε) − b∨_{} + rank ker Φ_{} = {} − {} + rank ker Φ_{}",
                n, n, n + 1, n, smooth.b_n, b_mid_text, n
            ),
        ]
    } else {
        vec![
            format!("b_{}(V) = b∨_{} − rank Φ_{} = {} − rank Φ_{}", n + 2, n + 2, n + 1, top, n + 1),
            format!("b_{}(V) = 1 − rank Φ_{} + rank ker Φ_{}", n + 1, n + 1, n),
            format!(
                "b_{}(V) = b_{}(V_ε) − b∨_{} + rank ker Φ_{} = {} − {} + rank ker Φ_{}",
                n, n, n + 1, n, smooth.b_n, b_mid_text, n
            ),
        ]
    };

    let (b_mid_abs, b_n_abs) = if assume_phi_injective {
        resolve_with_injective_phi(n, top, mid, &smooth.b_n)?
    } else {
        (None, None)
    };

    let components_check = match (n, config.num_irreducible_components) {
        (2, Some(r)) => {
            let expected_top = u64::from(r) - 1;
            if expected_top > total_mu {
                return Err(EngineError::ComponentsBound { r, total_mu });
            }
            if !top.contains(expected_top) {
                return Err(EngineError::ComponentsContradiction { r, found: top });
            }
            Some(ComponentsCheck { r, expected_top })
        }
        _ => None,
    };

    Ok(AbsoluteReport {
        stable_degrees,
        b_top_upper_bound: 1 + total_mu,
        b_n_upper_bound: smooth.b_n.clone(),
        b_top: b_top_abs,
        relations,
        assumed_phi_injective: assume_phi_injective,
        b_mid: b_mid_abs,
        b_n: b_n_abs,
        components_check,
    })
}

/// With `Φ_n` (and, for odd `n`, `Φ_{n+1}`) injective the sequence splits
/// into rank identities.
fn resolve_with_injective_phi(
    n: u32,
    top: RankValue,
    mid: RankValue,
    b_n_smooth: &BigInt,
) -> Result<(Option<u64>, Option<BigInt>), EngineError> {
    let b_n = mid.exact().map(|m| b_n_smooth - BigInt::from(m));
    if let Some(b) = &b_n {
        if b.is_negative() {
            return Err(EngineError::PhiAssumption(format!(
                "Φ_{n} cannot embed a rank-{mid} group into H_{n}(V_ε) of rank {b_n_smooth}"
            )));
        }
    }
    let b_mid = if n.is_multiple_of(2) {
        Some(0)
    } else {
        if top.lo() > 1 {
            return Err(EngineError::PhiAssumption(format!(
                "Φ_{} cannot embed a rank-{top} group into H_{}(V_ε) = Z",
                n + 1,
                n + 1
            )));
        }
        top.exact().map(|t| 1 - t)
    };
    Ok((b_mid, b_n))
}
