//! Local homological contributions: loop bundles over punctured circles
//! (via the Wang sequence), special points, and isolated points.

use num_bigint::BigInt;

use crate::lattice::{cokernel_invariants, kernel_basis, CokernelInvariants, IntMatrix, LatticeError, Sublattice};
use crate::model::{HypersurfaceConfig, IsolatedPoint, SpecialPoint};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LocalError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("special point `{point}` references unknown component `{component}`")]
    UnknownComponent { point: String, component: String },
    #[error("special point `{point}`: relative cycle lattice has ambient dimension {found}, expected {expected}")]
    Ambient { point: String, expected: usize, found: usize },
    #[error("special point `{point}`: relative cycle lattice has rank {rank} but b_fiber_free = {b_free}")]
    Rank { point: String, rank: usize, b_free: usize },
    #[error("special point `{point}`: relative cycle generator {generator} has a block outside ker(A - I)")]
    Containment { point: String, generator: usize },
}

/// Relative homology of the bundle over a punctured disc with vertical
/// monodromy `A`: the fixed lattice `ker(A - I)` in the top degree and
/// `coker(A - I)` one degree lower.
#[derive(Clone, Debug)]
pub struct LoopContribution {
    pub h_top: Sublattice,
    pub h_mid: CokernelInvariants,
}

pub fn wang_contribution(a: &IntMatrix) -> Result<LoopContribution, LocalError> {
    let shifted = a.minus_identity()?;
    Ok(LoopContribution {
        h_top: kernel_basis(&shifted),
        h_mid: cokernel_invariants(&shifted),
    })
}

/// Local data of a special point, laid out over all incident branches in
/// declaration order.
#[derive(Clone, Debug)]
pub struct SpecialPointLocalData {
    pub id: String,
    /// `ker(A_s - I)` for each branch.
    pub branch_kernels: Vec<Sublattice>,
    /// Component index of each branch.
    pub branch_components: Vec<usize>,
    /// Sum of the branch fibre ranks.
    pub ambient: usize,
    pub relative_cycles: Option<Sublattice>,
    /// `χ(A_q) - 1`.
    pub chi_term: i64,
    pub b_free: usize,
}

impl SpecialPointLocalData {
    /// The relative cycle lattice, taking the zero lattice when it is forced
    /// by `b_free = 0`. `None` when unknown.
    pub fn effective_relative_cycles(&self) -> Option<Sublattice> {
        match &self.relative_cycles {
            Some(l) => Some(l.clone()),
            None if self.b_free == 0 => Some(Sublattice::zero(self.ambient)),
            None => None,
        }
    }

    /// Offset of each branch block in the ambient direct sum.
    pub fn block_offsets(&self) -> Vec<usize> {
        self.branch_kernels
            .iter()
            .scan(0, |acc, k| {
                let start = *acc;
                *acc += k.ambient_dim();
                Some(start)
            })
            .collect()
    }
}

pub fn special_point_data(q: &SpecialPoint, config: &HypersurfaceConfig) -> Result<SpecialPointLocalData, LocalError> {
    let mut branch_kernels = Vec::new();
    let mut branch_components = Vec::new();
    for inc in &q.incidences {
        let ci = config
            .component_index(&inc.component)
            .ok_or_else(|| LocalError::UnknownComponent {
                point: q.id.clone(),
                component: inc.component.clone(),
            })?;
        for a in &inc.branch_monodromies {
            branch_kernels.push(wang_contribution(a)?.h_top);
            branch_components.push(ci);
        }
    }
    let ambient = branch_kernels.iter().map(Sublattice::ambient_dim).sum();

    let relative_cycles = match &q.relative_cycle_lattice {
        None => None,
        Some(rows) => {
            if let Some(r) = rows.iter().find(|r| r.len() != ambient) {
                return Err(LocalError::Ambient {
                    point: q.id.clone(),
                    expected: ambient,
                    found: r.len(),
                });
            }
            let lattice = Sublattice::from_vectors(ambient, rows)?;
            if lattice.rank() != q.b_fiber_free {
                return Err(LocalError::Rank {
                    point: q.id.clone(),
                    rank: lattice.rank(),
                    b_free: q.b_fiber_free,
                });
            }
            for (k, v) in rows.iter().enumerate() {
                if !blockwise_fixed(v, &branch_kernels)? {
                    return Err(LocalError::Containment {
                        point: q.id.clone(),
                        generator: k,
                    });
                }
            }
            Some(lattice)
        }
    };

    Ok(SpecialPointLocalData {
        id: q.id.clone(),
        branch_kernels,
        branch_components,
        ambient,
        relative_cycles,
        chi_term: q.chi_fiber - 1,
        b_free: q.b_fiber_free,
    })
}

fn blockwise_fixed(v: &[BigInt], kernels: &[Sublattice]) -> Result<bool, LatticeError> {
    let mut offset = 0;
    for k in kernels {
        let end = offset + k.ambient_dim();
        if !k.contains(&v[offset..end])? {
            return Ok(false);
        }
        offset = end;
    }
    Ok(true)
}

/// Rank of the free summand an isolated singular point adds to the
/// vanishing homology in degree `n + 1`. It contributes nothing elsewhere.
pub fn isolated_contribution(r: &IsolatedPoint) -> u64 {
    r.milnor_number
}
