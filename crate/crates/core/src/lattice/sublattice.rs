use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{smith_normal_form, IntMatrix, LatticeError};

/// Subgroup of `Z^m` spanned by the columns of a generator matrix.
///
/// Generators are reduced to a basis on construction, so `generators()`
/// always has exactly `rank()` columns.
#[derive(Clone, Debug)]
pub struct Sublattice {
    ambient_dim: usize,
    basis: IntMatrix,
}

impl Sublattice {
    pub fn from_generators(generators: &IntMatrix) -> Self {
        let ambient_dim = generators.rows();
        let s = smith_normal_form(generators);
        // im(G) = im(G V) = im(U^-1 D); the first `rank` columns of U^-1 D
        // form a basis.
        let columns: Vec<Vec<BigInt>> = (0..s.rank())
            .map(|k| {
                let d = s.d.get(k, k);
                (0..ambient_dim).map(|i| s.u_inv.get(i, k) * d).collect()
            })
            .collect();
        let basis = IntMatrix::from_columns(ambient_dim, &columns).expect("column lengths agree");
        Self { ambient_dim, basis }
    }

    /// Lattice spanned by the given vectors, each of length `ambient_dim`.
    pub fn from_vectors(ambient_dim: usize, vectors: &[Vec<BigInt>]) -> Result<Self, LatticeError> {
        Ok(Self::from_generators(&IntMatrix::from_columns(ambient_dim, vectors)?))
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: IntMatrix::identity(ambient_dim),
        }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: IntMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    /// Basis vectors as the columns of an `ambient_dim x rank` matrix.
    pub fn generators(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<BigInt>> {
        self.basis.columns().collect()
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool, LatticeError> {
        lattice_membership(self, v)
    }

    /// Mutual containment of bases.
    pub fn same_span(&self, other: &Self) -> Result<bool, LatticeError> {
        Ok(self.is_contained_in(other)? && other.is_contained_in(self)?)
    }

    pub fn is_contained_in(&self, other: &Self) -> Result<bool, LatticeError> {
        for v in self.basis.columns() {
            if !other.contains(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True when the lattice is a direct summand of `Z^m`, i.e. every
    /// invariant factor of the basis matrix is 1.
    pub fn is_saturated(&self) -> bool {
        smith_normal_form(&self.basis)
            .invariant_factors()
            .iter()
            .all(One::is_one)
    }
}

/// Rank and torsion of the cokernel `Z^rows / A Z^cols`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CokernelInvariants {
    pub free_rank: usize,
    /// Invariant factors greater than one, each dividing the next.
    #[serde(serialize_with = "crate::serde_util::bigint_seq")]
    pub torsion: Vec<BigInt>,
}

impl CokernelInvariants {
    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

/// Saturated basis of `{x : A x = 0}` inside `Z^cols`.
pub fn kernel_basis(a: &IntMatrix) -> Sublattice {
    let s = smith_normal_form(a);
    let cols = a.cols();
    let columns: Vec<Vec<BigInt>> = (s.rank()..cols).map(|j| s.v.column(j)).collect();
    Sublattice {
        ambient_dim: cols,
        basis: IntMatrix::from_columns(cols, &columns).expect("column lengths agree"),
    }
}

pub fn cokernel_invariants(a: &IntMatrix) -> CokernelInvariants {
    let s = smith_normal_form(a);
    CokernelInvariants {
        free_rank: a.rows() - s.rank(),
        torsion: s
            .invariant_factors()
            .into_iter()
            .filter(|d| !d.is_one())
            .collect(),
    }
}

/// Integer rank of `A` (equal to its rational rank).
pub fn rank(a: &IntMatrix) -> usize {
    smith_normal_form(a).rank()
}

/// `L1 ∩ L2`, read off the kernel of `[G1 | -G2]`.
pub fn lattice_intersection(l1: &Sublattice, l2: &Sublattice) -> Result<Sublattice, LatticeError> {
    if l1.ambient_dim != l2.ambient_dim {
        return Err(LatticeError::DimensionMismatch {
            expected: l1.ambient_dim,
            found: l2.ambient_dim,
        });
    }
    let stacked = l1.basis.hstack(&l2.basis.neg())?;
    let kernel = kernel_basis(&stacked);
    let k1 = l1.rank();
    let x_part = kernel
        .basis
        .select_rows(&(0..k1).collect::<Vec<_>>())?;
    Ok(Sublattice::from_generators(&l1.basis.checked_mul(&x_part)?))
}

/// Whether `v` is an integer combination of the generators of `L`.
pub fn lattice_membership(l: &Sublattice, v: &[BigInt]) -> Result<bool, LatticeError> {
    if v.len() != l.ambient_dim {
        return Err(LatticeError::DimensionMismatch {
            expected: l.ambient_dim,
            found: v.len(),
        });
    }
    // G x = v  <=>  D y = U v  with  y = V^-1 x
    let s = smith_normal_form(&l.basis);
    let uv = s.u.mul_vec(v)?;
    Ok(uv.iter().enumerate().all(|(i, x)| {
        if i < s.rank() {
            (x % s.d.get(i, i)).is_zero()
        } else {
            x.is_zero()
        }
    }))
}

/// Image of `L` under the projection onto the listed coordinates.
pub fn project_lattice(l: &Sublattice, coords: &[usize]) -> Result<Sublattice, LatticeError> {
    Ok(Sublattice::from_generators(&l.basis.select_rows(coords)?))
}
