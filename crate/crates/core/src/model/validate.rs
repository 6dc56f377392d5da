use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use super::HypersurfaceConfig;
use crate::lattice::{kernel_basis, IntMatrix, Sublattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    OutOfRange,
    DuplicateId,
    UnknownComponent,
    DuplicateIncidence,
    MonodromyCount,
    DimensionMismatch,
    NotUnimodular,
    NoAxisPoints,
    LatticeAmbient,
    LatticeRank,
    LatticeContainment,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub location: String,
    pub kind: ViolationKind,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

struct Collector(Vec<Violation>);

impl Collector {
    fn push(&mut self, location: impl Into<String>, kind: ViolationKind, message: impl Into<String>) {
        self.0.push(Violation {
            location: location.into(),
            kind,
            message: message.into(),
        });
    }

    /// Square of size `mu` and invertible over the integers.
    fn check_operator(&mut self, location: String, m: &IntMatrix, mu: usize) {
        if m.rows() != mu || m.cols() != mu {
            self.push(
                location,
                ViolationKind::DimensionMismatch,
                format!("monodromy is {}x{}, expected {mu}x{mu}", m.rows(), m.cols()),
            );
        } else if !m.is_unimodular() {
            self.push(location, ViolationKind::NotUnimodular, "monodromy must have determinant ±1");
        }
    }
}

/// Checks every structural invariant of a configuration. An empty result
/// means the configuration is valid.
pub fn validate(config: &HypersurfaceConfig) -> Vec<Violation> {
    let mut out = Collector(Vec::new());
    if config.n < 2 {
        out.push("n", ViolationKind::OutOfRange, format!("n = {} but n >= 2 is required", config.n));
    }
    if config.d < 1 {
        out.push("d", ViolationKind::OutOfRange, "degree must be at least 1");
    }
    if config.num_irreducible_components == Some(0) {
        out.push(
            "num_irreducible_components_of_V",
            ViolationKind::OutOfRange,
            "a hypersurface has at least one irreducible component",
        );
    }

    let mut ids = HashSet::new();
    for (ci, c) in config.components.iter().enumerate() {
        let loc = format!("components[{ci}]");
        if !ids.insert(c.id.as_str()) {
            out.push(&loc, ViolationKind::DuplicateId, format!("duplicate component id `{}`", c.id));
        }
        if c.mu_perp < 1 {
            out.push(&loc, ViolationKind::OutOfRange, "mu_perp must be at least 1");
        }
        if config.nu(c) < 1 {
            out.push(&loc, ViolationKind::NoAxisPoints, "every component meets the axis in at least one point");
        }
        let expected = 2 * c.genus as usize;
        if c.genus_loop_monodromies.len() != expected {
            out.push(
                &loc,
                ViolationKind::MonodromyCount,
                format!(
                    "expected 2·g = {expected} genus-loop matrices, found {}",
                    c.genus_loop_monodromies.len()
                ),
            );
        }
        for (j, m) in c.genus_loop_monodromies.iter().enumerate() {
            out.check_operator(format!("{loc}.genus_loop_monodromies[{j}]"), m, c.mu_perp);
        }
    }

    let mut point_ids = HashSet::new();
    for (qi, q) in config.special_points.iter().enumerate() {
        let loc = format!("special_points[{qi}]");
        if !point_ids.insert(q.id.as_str()) {
            out.push(&loc, ViolationKind::DuplicateId, format!("duplicate special point id `{}`", q.id));
        }
        if q.incidences.is_empty() {
            out.push(&loc, ViolationKind::OutOfRange, "a special point lies on at least one component");
        }
        let mut seen = HashSet::new();
        // per-branch transversal sizes and operators, in declaration order
        let mut blocks: Vec<(usize, &IntMatrix)> = Vec::new();
        let mut blocks_ok = true;
        for (ii, inc) in q.incidences.iter().enumerate() {
            let iloc = format!("{loc}.incidences[{ii}]");
            if !seen.insert(inc.component.as_str()) {
                out.push(
                    &iloc,
                    ViolationKind::DuplicateIncidence,
                    format!("component `{}` listed twice; list all its branches in one incidence", inc.component),
                );
            }
            if inc.branch_monodromies.is_empty() {
                out.push(&iloc, ViolationKind::OutOfRange, "an incidence needs at least one branch");
            }
            let Some(component) = config.component(&inc.component) else {
                out.push(&iloc, ViolationKind::UnknownComponent, format!("no component `{}`", inc.component));
                blocks_ok = false;
                continue;
            };
            for (s, m) in inc.branch_monodromies.iter().enumerate() {
                let before = out.0.len();
                out.check_operator(format!("{iloc}.branch_monodromies[{s}]"), m, component.mu_perp);
                blocks_ok &= out.0.len() == before;
                blocks.push((component.mu_perp, m));
            }
        }

        let Some(rows) = &q.relative_cycle_lattice else {
            continue;
        };
        let lloc = format!("{loc}.relative_cycle_lattice");
        if !blocks_ok {
            continue;
        }
        let ambient: usize = blocks.iter().map(|(mu, _)| mu).sum();
        if let Some((k, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != ambient) {
            out.push(
                &lloc,
                ViolationKind::LatticeAmbient,
                format!("generator {k} has length {}, expected {ambient} (sum of branch mu_perp)", r.len()),
            );
            continue;
        }
        let lattice = Sublattice::from_vectors(ambient, rows).expect("lengths checked");
        if lattice.rank() != q.b_fiber_free {
            out.push(
                &lloc,
                ViolationKind::LatticeRank,
                format!(
                    "rank {} differs from b_fiber_free = {}: the relative cycle lattice is isomorphic to the free part of H_(n-1) of the Milnor fibre",
                    lattice.rank(),
                    q.b_fiber_free
                ),
            );
        }
        let kernels: Vec<Sublattice> = blocks
            .iter()
            .map(|(_, m)| kernel_basis(&m.minus_identity().expect("square")))
            .collect();
        for (k, v) in rows.iter().enumerate() {
            if let Some(s) = outside_kernels(v, &blocks, &kernels) {
                out.push(
                    &lloc,
                    ViolationKind::LatticeContainment,
                    format!(
                        "generator {k} is not in the sum of ker(A_s - I): its block for branch {s} is not fixed by the monodromy"
                    ),
                );
            }
        }
    }

    let mut iso_ids = HashSet::new();
    for (ri, r) in config.isolated_points.iter().enumerate() {
        let loc = format!("isolated_points[{ri}]");
        if !iso_ids.insert(r.id.as_str()) {
            out.push(&loc, ViolationKind::DuplicateId, format!("duplicate isolated point id `{}`", r.id));
        }
        if r.milnor_number < 1 {
            out.push(&loc, ViolationKind::OutOfRange, "milnor_number must be at least 1");
        }
    }
    out.0
}

/// Index of the first branch block of `v` lying outside its kernel.
fn outside_kernels(v: &[BigInt], blocks: &[(usize, &IntMatrix)], kernels: &[Sublattice]) -> Option<usize> {
    let mut offset = 0;
    for (s, ((mu, _), kernel)) in blocks.iter().zip(kernels).enumerate() {
        let block = &v[offset..offset + mu];
        offset += mu;
        if !kernel.contains(block).expect("block length matches") {
            return Some(s);
        }
    }
    None
}
