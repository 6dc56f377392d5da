//! Chain-level cross-check. Each component's bundle over its loop bouquet
//! is presented as a two-term cellular complex: `μ` base cells in degree `n`
//! and `μ` cells over every loop in degree `n + 1`, with boundary the block
//! row `[A_1 − I | … | A_w − I]`. Its homology is recomputed directly and
//! compared against the closed-form statements used by the engine.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::lattice::{cokernel_invariants, kernel_basis, CokernelInvariants, IntMatrix, LatticeError};
use crate::local::wang_contribution;
use crate::model::{derived_counts, HypersurfaceConfig};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("loop operator {index} is {rows}x{cols}, expected {mu}x{mu}")]
    OperatorSize { index: usize, rows: usize, cols: usize, mu: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Debug)]
pub struct PairComplex {
    pub mu_perp: usize,
    pub loop_operators: Vec<IntMatrix>,
    /// `μ x (|W|·μ)`.
    pub boundary: IntMatrix,
}

pub fn build_pair_complex(mu_perp: usize, loop_operators: Vec<IntMatrix>) -> Result<PairComplex, OracleError> {
    let mut boundary = IntMatrix::zeros(mu_perp, loop_operators.len() * mu_perp);
    for (j, a) in loop_operators.iter().enumerate() {
        if a.rows() != mu_perp || a.cols() != mu_perp {
            return Err(OracleError::OperatorSize {
                index: j,
                rows: a.rows(),
                cols: a.cols(),
                mu: mu_perp,
            });
        }
        boundary.set_block(0, j * mu_perp, &a.minus_identity()?);
    }
    Ok(PairComplex {
        mu_perp,
        loop_operators,
        boundary,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairHomology {
    /// Rank of `H_{n+1}`, the kernel of the boundary.
    pub h_top: usize,
    /// `H_n`, the cokernel of the boundary.
    pub h_mid: CokernelInvariants,
}

pub fn pair_homology(complex: &PairComplex) -> PairHomology {
    PairHomology {
        h_top: kernel_basis(&complex.boundary).rank(),
        h_mid: cokernel_invariants(&complex.boundary),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    BlockStructure,
    ConcentrationRank,
    EulerCharacteristic,
    SingleLoop,
    KernelEmbedding,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::BlockStructure => "block-structure",
            Self::ConcentrationRank => "concentration-rank",
            Self::EulerCharacteristic => "euler-characteristic",
            Self::SingleLoop => "single-loop",
            Self::KernelEmbedding => "kernel-embedding",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub check: Check,
    pub subject: String,
    pub passed: bool,
    pub witness: Option<String>,
}

impl Verdict {
    fn new(check: Check, subject: &str, failure: Option<String>) -> Self {
        Self {
            check,
            subject: subject.to_string(),
            passed: failure.is_none(),
            witness: failure,
        }
    }
}

fn sign(k: u32) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn fmt_vec(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Runs every check on one complex. `loops` is `2g + ν + γ` as counted from
/// the configuration and `n` fixes the degrees.
pub fn verify_complex(subject: &str, n: u32, loops: u64, complex: &PairComplex) -> Result<Vec<Verdict>, OracleError> {
    let mu = complex.mu_perp;
    let w = complex.loop_operators.len();
    let homology = pair_homology(complex);
    let mut verdicts = Vec::new();

    let mismatch = complex.loop_operators.iter().enumerate().find_map(|(j, a)| {
        let expected = a.minus_identity().ok()?;
        let block = complex.boundary.block(0, j * mu, mu, mu);
        (block != expected).then(|| format!("loop {j}: boundary block {block} but A - I = {expected}"))
    });
    let shape = (complex.boundary.rows(), complex.boundary.cols()) != (mu, w * mu);
    verdicts.push(Verdict::new(
        Check::BlockStructure,
        subject,
        if shape {
            Some(format!(
                "boundary is {}x{}, expected {mu}x{}",
                complex.boundary.rows(),
                complex.boundary.cols(),
                w * mu
            ))
        } else {
            mismatch
        },
    ));
    if shape {
        return Ok(verdicts);
    }

    // rank H_{n+1} = (|W| − 1) μ + rank H_n
    let predicted = (w as i64 - 1) * mu as i64 + homology.h_mid.free_rank as i64;
    verdicts.push(Verdict::new(
        Check::ConcentrationRank,
        subject,
        (homology.h_top as i64 != predicted)
            .then(|| format!("rank H_(n+1) = {} but (|W|-1)μ + rank H_n = {predicted}", homology.h_top)),
    ));

    let chain_chi = sign(n + 1) * homology.h_top as i64 + sign(n) * homology.h_mid.free_rank as i64;
    let formula_chi = sign(n + 1) * (loops as i64 - 1) * mu as i64;
    verdicts.push(Verdict::new(
        Check::EulerCharacteristic,
        subject,
        (chain_chi != formula_chi)
            .then(|| format!("χ from homology = {chain_chi}, from loop count = {formula_chi}")),
    ));

    let boundary_kernel = kernel_basis(&complex.boundary);
    let mut single = None;
    let mut embedding = None;
    for (j, a) in complex.loop_operators.iter().enumerate() {
        let local = wang_contribution(a).map_err(|_| OracleError::OperatorSize {
            index: j,
            rows: a.rows(),
            cols: a.cols(),
            mu,
        })?;
        let one_loop = PairComplex {
            mu_perp: mu,
            loop_operators: vec![a.clone()],
            boundary: complex.boundary.block(0, j * mu, mu, mu),
        };
        let h = pair_homology(&one_loop);
        if single.is_none() && (h.h_top != local.h_top.rank() || h.h_mid != local.h_mid) {
            single = Some(format!(
                "loop {j}: one-loop complex gives ({}, {:?}), Wang sequence gives ({}, {:?})",
                h.h_top,
                h.h_mid,
                local.h_top.rank(),
                local.h_mid
            ));
        }
        if embedding.is_none() {
            for v in local.h_top.basis_vectors() {
                let mut lifted = vec![BigInt::from(0); w * mu];
                lifted[j * mu..(j + 1) * mu].clone_from_slice(&v);
                if !boundary_kernel.contains(&lifted)? {
                    let image = complex.boundary.mul_vec(&lifted)?;
                    embedding = Some(format!(
                        "loop {j}: fixed vector {} maps to {} under the boundary",
                        fmt_vec(&v),
                        fmt_vec(&image)
                    ));
                    break;
                }
            }
        }
    }
    verdicts.push(Verdict::new(Check::SingleLoop, subject, single));
    verdicts.push(Verdict::new(Check::KernelEmbedding, subject, embedding));
    Ok(verdicts)
}

/// Loop operators of a component in bouquet order: identity for each axis
/// point, then the branch monodromies, then the genus loops.
pub fn component_loops(config: &HypersurfaceConfig, index: usize) -> Vec<IntMatrix> {
    let c = &config.components[index];
    let nu = config.nu(c) as usize;
    std::iter::repeat_with(|| IntMatrix::identity(c.mu_perp))
        .take(nu)
        .chain(config.branches_of(&c.id).cloned())
        .chain(c.genus_loop_monodromies.iter().cloned())
        .collect()
}

/// Rebuilds each component's complex from its full loop set and verifies it.
pub fn oracle_check(config: &HypersurfaceConfig) -> Result<Vec<Verdict>, OracleError> {
    let counts = derived_counts(config);
    let mut verdicts = Vec::new();
    for (i, c) in config.components.iter().enumerate() {
        let complex = build_pair_complex(c.mu_perp, component_loops(config, i))?;
        verdicts.extend(verify_complex(&c.id, config.n, counts.components[i].loops(), &complex)?);
    }
    Ok(verdicts)
}
