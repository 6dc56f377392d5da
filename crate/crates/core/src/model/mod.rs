//! Declarative description of a hypersurface's singularity configuration:
//! the curve components of the singular locus, special points on them and
//! isolated singular points.

mod document;
mod validate;

pub(crate) use document::config_value;
pub use document::{parse_config, serialize_config, ParseError};
pub use validate::{validate, Violation, ViolationKind};

use num_bigint::BigInt;

use crate::lattice::IntMatrix;

/// Hypersurface `V ⊂ P^{n+1}` of degree `d` whose singular locus has
/// dimension at most one.
#[derive(Clone, Debug, PartialEq)]
pub struct HypersurfaceConfig {
    pub n: u32,
    pub d: u32,
    pub label: String,
    pub components: Vec<CurveComponent>,
    pub special_points: Vec<SpecialPoint>,
    pub isolated_points: Vec<IsolatedPoint>,
    /// Number of irreducible components of `V` itself, when known.
    pub num_irreducible_components: Option<u32>,
}

/// How the number of axis points on a component is given.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxisPoints {
    Count(u64),
    /// Degree of the curve; a generic pencil axis meets it in `d * degree` points.
    CurveDegree(u64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveComponent {
    pub id: String,
    /// Genus of the normalization.
    pub genus: u32,
    pub axis_points: AxisPoints,
    /// Transversal Milnor number.
    pub mu_perp: usize,
    /// One operator per genus loop, `2 * genus` in total.
    pub genus_loop_monodromies: Vec<IntMatrix>,
}

/// The local branches of one component passing through a special point.
#[derive(Clone, Debug, PartialEq)]
pub struct Incidence {
    pub component: String,
    /// Vertical monodromy around each local branch.
    pub branch_monodromies: Vec<IntMatrix>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpecialPoint {
    pub id: String,
    pub incidences: Vec<Incidence>,
    /// Euler characteristic of the local Milnor fibre.
    pub chi_fiber: i64,
    /// Free rank of `H_{n-1}` of the local Milnor fibre.
    pub b_fiber_free: usize,
    /// Generators (as rows) of the relative cycle lattice inside the direct
    /// sum of the branch fibres, in incidence/branch declaration order.
    pub relative_cycle_lattice: Option<Vec<Vec<BigInt>>>,
}

impl SpecialPoint {
    /// All branches through the point, paired with their component id.
    pub fn branches(&self) -> impl Iterator<Item = (&str, &IntMatrix)> {
        self.incidences.iter().flat_map(|inc| {
            inc.branch_monodromies
                .iter()
                .map(move |m| (inc.component.as_str(), m))
        })
    }

    pub fn branch_count(&self) -> usize {
        self.incidences.iter().map(|i| i.branch_monodromies.len()).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedPoint {
    pub id: String,
    pub milnor_number: u64,
}

/// Counts attached to one component: axis points, branch punctures and the
/// size of the loop bouquet `#W = 2g + ν + γ`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ComponentCounts {
    pub id: String,
    pub genus: u32,
    pub nu: u64,
    pub gamma: u64,
    pub mu_perp: usize,
}

impl ComponentCounts {
    pub fn loops(&self) -> u64 {
        2 * u64::from(self.genus) + self.nu + self.gamma
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedCounts {
    pub components: Vec<ComponentCounts>,
    pub special_points: usize,
}

impl HypersurfaceConfig {
    pub fn component(&self, id: &str) -> Option<&CurveComponent> {
        self.components.iter().find(|c| c.id == id)
    }

    pub fn component_index(&self, id: &str) -> Option<usize> {
        self.components.iter().position(|c| c.id == id)
    }

    /// Number of axis points on a component.
    pub fn nu(&self, component: &CurveComponent) -> u64 {
        match component.axis_points {
            AxisPoints::Count(nu) => nu,
            AxisPoints::CurveDegree(deg) => u64::from(self.d) * deg,
        }
    }

    /// Branch monodromies of the given component at every special point,
    /// grouped by point.
    pub fn branches_of<'a>(&'a self, component_id: &'a str) -> impl Iterator<Item = &'a IntMatrix> + 'a {
        self.special_points
            .iter()
            .flat_map(|q| q.incidences.iter())
            .filter(move |inc| inc.component == component_id)
            .flat_map(|inc| inc.branch_monodromies.iter())
    }

    /// Special points lying on the given component.
    pub fn points_on<'a>(&'a self, component_id: &'a str) -> impl Iterator<Item = &'a SpecialPoint> + 'a {
        self.special_points
            .iter()
            .filter(move |q| q.incidences.iter().any(|inc| inc.component == component_id))
    }

    pub fn total_mu_perp(&self) -> usize {
        self.components.iter().map(|c| c.mu_perp).sum()
    }
}

/// Resolves `ν_i` and counts only the branches of `Σ_i` itself in `γ_i`.
pub fn derived_counts(config: &HypersurfaceConfig) -> DerivedCounts {
    let components = config
        .components
        .iter()
        .map(|c| ComponentCounts {
            id: c.id.clone(),
            genus: c.genus,
            nu: config.nu(c),
            gamma: config.branches_of(&c.id).count() as u64,
            mu_perp: c.mu_perp,
        })
        .collect();
    DerivedCounts {
        components,
        special_points: config.special_points.len(),
    }
}
