use num_traits::Zero;
use serde::Serialize;

use super::{EngineError, ModeRequest, RankValue};
use crate::lattice::{kernel_basis, project_lattice, IntMatrix, Sublattice};
use crate::local::{special_point_data, wang_contribution, SpecialPointLocalData};
use crate::model::{derived_counts, CurveComponent, HypersurfaceConfig};

/// Loop operators of a component other than the (identity) axis loops:
/// branch loops at special points followed by genus loops.
fn loop_operators<'a>(component: &'a CurveComponent, config: &'a HypersurfaceConfig) -> Vec<&'a IntMatrix> {
    config
        .branches_of(&component.id)
        .chain(component.genus_loop_monodromies.iter())
        .collect()
}

/// Stacks `A - I` for every operator into one `(k·μ) x μ` matrix.
fn stacked_shifts(operators: &[&IntMatrix], mu: usize) -> Result<IntMatrix, EngineError> {
    let mut m = IntMatrix::zeros(operators.len() * mu, mu);
    for (k, a) in operators.iter().enumerate() {
        m.set_block(k * mu, 0, &a.minus_identity()?);
    }
    Ok(m)
}

/// Vectors of the transversal fibre fixed by every branch and genus-loop
/// monodromy of the component.
pub fn component_kernel(component: &CurveComponent, config: &HypersurfaceConfig) -> Result<Sublattice, EngineError> {
    let ops = loop_operators(component, config);
    if ops.is_empty() {
        return Ok(Sublattice::full(component.mu_perp));
    }
    Ok(kernel_basis(&stacked_shifts(&ops, component.mu_perp)?))
}

/// `min` over loops of `rank ker(A - I)`, or `μ` when there are none.
fn component_bound(component: &CurveComponent, config: &HypersurfaceConfig) -> Result<u64, EngineError> {
    let mut bound = component.mu_perp as u64;
    for a in loop_operators(component, config) {
        bound = bound.min(wang_contribution(a)?.h_top.rank() as u64);
    }
    Ok(bound)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentFlags {
    pub component: String,
    /// Some loop monodromy on the component has no eigenvalue 1.
    pub no_eigenvalue_one: bool,
    /// Some special point on the component has a Milnor fibre with
    /// `H_{n-1}` of rank zero.
    pub rank_zero_fibre: bool,
}

impl ComponentFlags {
    pub fn annihilated(&self) -> bool {
        self.no_eigenvalue_one || self.rank_zero_fibre
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryFlags {
    pub components: Vec<ComponentFlags>,
    /// The singular curve is irreducible.
    pub irreducible_sigma: bool,
    /// Every component carries one of the two flags, forcing the top
    /// vanishing group to vanish.
    pub top_vanishes: bool,
    /// Closed-form `b_{n+1}` when every component has a rank-zero fibre.
    pub betti_formula: Option<i64>,
}

pub fn corollary_checks(config: &HypersurfaceConfig) -> Result<CorollaryFlags, EngineError> {
    let mut components = Vec::with_capacity(config.components.len());
    for c in &config.components {
        let mut no_eigenvalue_one = false;
        for a in loop_operators(c, config) {
            if !a.minus_identity()?.determinant()?.is_zero() {
                no_eigenvalue_one = true;
                break;
            }
        }
        let rank_zero_fibre = config.points_on(&c.id).any(|q| q.b_fiber_free == 0);
        components.push(ComponentFlags {
            component: c.id.clone(),
            no_eigenvalue_one,
            rank_zero_fibre,
        });
    }
    let top_vanishes = components.iter().all(ComponentFlags::annihilated);
    let betti_formula = components
        .iter()
        .all(|f| f.rank_zero_fibre)
        .then(|| betti_formula(config));
    Ok(CorollaryFlags {
        irreducible_sigma: config.components.len() == 1,
        components,
        top_vanishes,
        betti_formula,
    })
}

/// `Σ_i (ν_i + γ_i + 2g_i − 2) μ_i + (−1)^n Σ_q (χ(A_q) − 1) + Σ_r μ_r`.
fn betti_formula(config: &HypersurfaceConfig) -> i64 {
    let counts = derived_counts(config);
    let curves: i64 = counts
        .components
        .iter()
        .map(|c| (c.loops() as i64 - 2) * c.mu_perp as i64)
        .sum();
    let points: i64 = config.special_points.iter().map(|q| q.chi_fiber - 1).sum();
    let isolated: i64 = config.isolated_points.iter().map(|r| r.milnor_number as i64).sum();
    curves + super::euler::sign(config.n) * points + isolated
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    RankBound,
}

#[derive(Clone, Debug)]
pub struct TopHomology {
    pub mode: Mode,
    pub rank: RankValue,
    /// Basis of the top vanishing group inside `⊕_i Z^{μ_i}` (exact mode).
    pub basis: Option<Sublattice>,
    /// `Σ_i min_loops rank ker(A − I)`.
    pub bound: u64,
}

/// Special points whose relative cycle lattice is needed but missing.
fn missing_lattices(points: &[SpecialPointLocalData]) -> Vec<String> {
    points
        .iter()
        .filter(|q| q.effective_relative_cycles().is_none())
        .map(|q| q.id.clone())
        .collect()
}

pub fn vanishing_top(config: &HypersurfaceConfig) -> Result<TopHomology, EngineError> {
    vanishing_top_with(config, ModeRequest::Auto)
}

pub fn vanishing_top_with(config: &HypersurfaceConfig, request: ModeRequest) -> Result<TopHomology, EngineError> {
    let points = config
        .special_points
        .iter()
        .map(|q| special_point_data(q, config))
        .collect::<Result<Vec<_>, _>>()?;
    let flags = corollary_checks(config)?;
    let mut bound = 0;
    for c in &config.components {
        bound += component_bound(c, config)?;
    }

    let missing = missing_lattices(&points);
    let mode = match request {
        ModeRequest::Exact if !missing.is_empty() => {
            return Err(EngineError::ExactModeUnavailable { points: missing })
        }
        ModeRequest::Exact => Mode::Exact,
        ModeRequest::Auto if missing.is_empty() => Mode::Exact,
        ModeRequest::Auto | ModeRequest::Rank => Mode::RankBound,
    };

    let top = match mode {
        Mode::Exact => {
            let basis = diagonal_solve(config, &points)?;
            let rank = basis.rank() as u64;
            if flags.top_vanishes && rank != 0 {
                return Err(EngineError::Internal(format!(
                    "corollary forces a vanishing top group but the diagonal solve has rank {rank}"
                )));
            }
            TopHomology {
                mode,
                rank: RankValue::Exact(rank),
                basis: Some(basis),
                bound,
            }
        }
        Mode::RankBound => {
            let mut hi = 0;
            for (c, f) in config.components.iter().zip(&flags.components) {
                if !f.annihilated() {
                    hi += component_kernel(c, config)?.rank() as u64;
                }
            }
            TopHomology {
                mode,
                rank: RankValue::interval(0, hi),
                basis: None,
                bound,
            }
        }
    };
    if top.rank.hi() > top.bound || top.bound > config.total_mu_perp() as u64 {
        return Err(EngineError::Internal(format!(
            "top rank {} exceeds the bound {} (total μ = {})",
            top.rank,
            top.bound,
            config.total_mu_perp()
        )));
    }
    Ok(top)
}

/// Solves for `w ∈ ⊕_i Z^{μ_i}` fixed by every loop of its component and
/// with `diag_q(w) ∈ L_q` at every special point; returns the `w`-part.
fn diagonal_solve(config: &HypersurfaceConfig, points: &[SpecialPointLocalData]) -> Result<Sublattice, EngineError> {
    let w_offsets: Vec<usize> = config
        .components
        .iter()
        .scan(0, |acc, c| {
            let start = *acc;
            *acc += c.mu_perp;
            Some(start)
        })
        .collect();
    let w_dim = config.total_mu_perp();

    let lattices: Vec<Sublattice> = points
        .iter()
        .map(|q| q.effective_relative_cycles().expect("exact mode has every lattice"))
        .collect();
    let aux_dim: usize = lattices.iter().map(Sublattice::rank).sum();

    let fixed_rows: usize = config
        .components
        .iter()
        .map(|c| loop_operators(c, config).len() * c.mu_perp)
        .sum();
    let diag_rows: usize = points.iter().map(|q| q.ambient).sum();
    let mut system = IntMatrix::zeros(fixed_rows + diag_rows, w_dim + aux_dim);

    let mut row = 0;
    for (c, &offset) in config.components.iter().zip(&w_offsets) {
        for a in loop_operators(c, config) {
            system.set_block(row, offset, &a.minus_identity()?);
            row += c.mu_perp;
        }
    }
    let mut aux = w_dim;
    for (q, lattice) in points.iter().zip(&lattices) {
        for (&ci, block_offset) in q.branch_components.iter().zip(q.block_offsets()) {
            let mu = config.components[ci].mu_perp;
            system.set_block(row + block_offset, w_offsets[ci], &IntMatrix::identity(mu));
        }
        system.set_block(row, aux, &lattice.generators().neg());
        row += q.ambient;
        aux += lattice.rank();
    }

    let kernel = kernel_basis(&system);
    Ok(project_lattice(&kernel, &(0..w_dim).collect::<Vec<_>>())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_config;

    fn config(doc: &str) -> HypersurfaceConfig {
        parse_config(doc).unwrap()
    }

    const CUBIC: &str = r#"{"n": 2, "d": 3, "components": [{"id": "l", "genus": 0, "nu": 3, "mu_perp": 1}],
        "special_points": [
            {"id": "q1", "incidences": [{"component": "l", "branch_monodromies": [[[-1]]]}], "chi_fiber": 2, "b_fiber_free": 0},
            {"id": "q2", "incidences": [{"component": "l", "branch_monodromies": [[[-1]]]}], "chi_fiber": 2, "b_fiber_free": 0}]}"#;

    const XY: &str = r#"{"n": 2, "d": 2, "components": [{"id": "l", "genus": 0, "degree": 1, "mu_perp": 1}]}"#;

    const XYZ: &str = r#"{"n": 2, "d": 3, "components": [
            {"id": "a", "genus": 0, "degree": 1, "mu_perp": 1},
            {"id": "b", "genus": 0, "degree": 1, "mu_perp": 1},
            {"id": "c", "genus": 0, "degree": 1, "mu_perp": 1}],
        "special_points": [{"id": "q", "incidences": [
            {"component": "a", "branch_monodromies": [[[1]]]},
            {"component": "b", "branch_monodromies": [[[1]]]},
            {"component": "c", "branch_monodromies": [[[1]]]}],
        "chi_fiber": 0, "b_fiber_free": 2, "relative_cycle_lattice": [[1, -1, 0], [0, 1, -1]]}]}"#;

    #[test]
    fn component_kernels() {
        let c = config(CUBIC);
        assert_eq!(component_kernel(&c.components[0], &c).unwrap().rank(), 0);
        let c = config(XY);
        assert_eq!(component_kernel(&c.components[0], &c).unwrap().rank(), 1);
        let c = config(
            r#"{"n": 2, "d": 4, "components": [{"id": "e", "genus": 1, "nu": 4, "mu_perp": 2,
                "genus_loop_monodromies": [[[1, 0], [0, 1]], [[1, 0], [0, 1]]]}]}"#,
        );
        assert_eq!(component_kernel(&c.components[0], &c).unwrap().rank(), 2);
    }

    #[test]
    fn genus_loops_cut_the_kernel() {
        // a unipotent loop fixes only the first basis vector
        let c = config(
            r#"{"n": 2, "d": 4, "components": [{"id": "e", "genus": 1, "nu": 4, "mu_perp": 2,
                "genus_loop_monodromies": [[[1, 1], [0, 1]], [[1, 0], [0, 1]]]}]}"#,
        );
        let k = component_kernel(&c.components[0], &c).unwrap();
        assert_eq!(k.rank(), 1);
        assert_eq!(vanishing_top(&c).unwrap().rank, RankValue::Exact(1));
    }

    #[test]
    fn top_rank_examples() {
        let top = vanishing_top(&config(XYZ)).unwrap();
        assert_eq!(top.mode, Mode::Exact);
        assert_eq!(top.rank, RankValue::Exact(2));
        assert!(top.basis.unwrap().is_saturated());

        assert_eq!(vanishing_top(&config(CUBIC)).unwrap().rank, RankValue::Exact(0));

        let top = vanishing_top(&config(XY)).unwrap();
        assert_eq!(top.rank, RankValue::Exact(1));
        assert!(top.basis.unwrap().same_span(&Sublattice::full(1)).unwrap());
    }

    #[test]
    fn rank_mode_without_lattice() {
        let doc = XYZ.replace(r#", "relative_cycle_lattice": [[1, -1, 0], [0, 1, -1]]"#, "");
        let c = config(&doc);
        let top = vanishing_top(&c).unwrap();
        assert_eq!(top.mode, Mode::RankBound);
        assert_eq!(top.rank, RankValue::interval(0, 3));
        assert!(matches!(
            vanishing_top_with(&c, ModeRequest::Exact),
            Err(EngineError::ExactModeUnavailable { .. })
        ));
    }

    #[test]
    fn forced_rank_mode_uses_corollaries() {
        let top = vanishing_top_with(&config(CUBIC), ModeRequest::Rank).unwrap();
        assert_eq!(top.mode, Mode::RankBound);
        assert_eq!(top.rank, RankValue::Exact(0));
    }

    #[test]
    fn corollary_flags() {
        let f = corollary_checks(&config(CUBIC)).unwrap();
        assert!(f.components[0].no_eigenvalue_one && f.components[0].rank_zero_fibre);
        assert!(f.top_vanishes && f.irreducible_sigma);
        // (3 + 2 - 2) + (1 + 1)
        assert_eq!(f.betti_formula, Some(5));

        let f = corollary_checks(&config(XYZ)).unwrap();
        assert!(!f.top_vanishes);
        assert!(f.components.iter().all(|c| !c.annihilated()));
        assert_eq!(f.betti_formula, None);
    }

    #[test]
    fn isolated_only_config() {
        let c = config(r#"{"n": 2, "d": 4, "isolated_points": [{"id": "r", "milnor_number": 3}]}"#);
        let top = vanishing_top(&c).unwrap();
        assert_eq!(top.rank, RankValue::Exact(0));
        assert_eq!(top.bound, 0);
    }
}
