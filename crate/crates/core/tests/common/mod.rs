//! Random matrices, operators and configurations shared by the property,
//! CLI and acceptance targets.
#![allow(dead_code)]

pub mod oracles;

use std::path::PathBuf;

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use vanishing_homology::engine::{vanishing_betti, EngineError, ModeRequest};
use vanishing_homology::lattice::{kernel_basis, smith_normal_form, IntMatrix, Sublattice};
use vanishing_homology::model::{
    AxisPoints, CurveComponent, HypersurfaceConfig, Incidence, IsolatedPoint, SpecialPoint,
};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples")
}

/// The golden fixtures with the ranks `(b∨_{n+2}, b∨_{n+1})` they must produce.
pub const GOLDEN: &[(&str, u64, u64)] = &[
    ("cubic-dinfty", 0, 5),
    ("cubic-threefold", 0, 10),
    ("cubic-fourfold", 0, 20),
    ("isolated-a3", 0, 21),
    ("two-lines", 0, 20),
    ("j2-infinity", 0, 6),
    ("xyz", 2, 7),
    ("xy", 1, 1),
    ("quintic", 0, 38),
];

pub fn fixture(name: &str) -> PathBuf {
    fixtures_dir().join(format!("{name}.json"))
}

pub fn load_fixture(name: &str) -> HypersurfaceConfig {
    let text = std::fs::read_to_string(fixture(name)).expect("fixture readable");
    vanishing_homology::model::parse_config(&text).expect("fixture parses")
}

/// The exact-mode top lattice of a fixture.
pub fn load_fixture_top(name: &str) -> Sublattice {
    let c = load_fixture(name);
    vanishing_betti(&c, ModeRequest::Exact).unwrap().top.basis.unwrap()
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data = (0..rows * cols).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
    IntMatrix::from_vec(rows, cols, data).unwrap()
}

/// A random matrix of given rank at most `r`, as a product of two thin factors.
pub fn random_low_rank(rng: &mut impl Rng, rows: usize, cols: usize, r: usize) -> IntMatrix {
    let a = random_matrix(rng, rows, r, 3);
    let b = random_matrix(rng, r, cols, 3);
    &a * &b
}

pub fn int(x: i64) -> BigInt {
    BigInt::from(x)
}

/// A unimodular matrix together with its inverse, as a product of
/// elementary operations.
pub fn random_gl(rng: &mut impl Rng, k: usize, steps: usize) -> (IntMatrix, IntMatrix) {
    let mut p = IntMatrix::identity(k);
    let mut p_inv = IntMatrix::identity(k);
    if k < 2 {
        if rng.gen_bool(0.5) {
            p = p.neg();
            p_inv = p_inv.neg();
        }
        return (p, p_inv);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..k);
        let mut j = rng.gen_range(0..k - 1);
        if j >= i {
            j += 1;
        }
        let c = *[-2i64, -1, 1, 2].choose(rng).unwrap();
        // E = I + c e_ij, E^{-1} = I - c e_ij
        let mut e = IntMatrix::identity(k);
        e.set(i, j, int(c));
        let mut e_inv = IntMatrix::identity(k);
        e_inv.set(i, j, int(-c));
        p = &p * &e;
        p_inv = &e_inv * &p_inv;
    }
    (p, p_inv)
}

fn signed_permutation(rng: &mut impl Rng, k: usize) -> IntMatrix {
    let mut perm: Vec<usize> = (0..k).collect();
    perm.shuffle(rng);
    let mut m = IntMatrix::zeros(k, k);
    for (i, &j) in perm.iter().enumerate() {
        m.set(i, j, int(if rng.gen_bool(0.7) { 1 } else { -1 }));
    }
    m
}

/// Block diagonal matrix assembled from small finite-order and unipotent blocks.
fn block_operator(rng: &mut impl Rng, k: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(k, k);
    let mut t = 0;
    while t < k {
        let blocks: &[&[&[i64]]] = if k - t >= 2 {
            &[&[&[1]], &[&[-1]], &[&[0, 1], &[-1, -1]], &[&[0, -1], &[1, 0]], &[&[1, 1], &[0, 1]], &[&[0, 1], &[1, 0]]]
        } else {
            &[&[&[1]], &[&[-1]]]
        };
        let b = IntMatrix::from_rows(blocks.choose(rng).unwrap()).unwrap();
        m.set_block(t, t, &b);
        t += b.rows();
    }
    m
}

/// Random monodromy operator: identity, −I, a signed permutation, a product
/// of elementary matrices, or a conjugate of a block operator.
pub fn random_unimodular(rng: &mut impl Rng, k: usize) -> IntMatrix {
    match rng.gen_range(0..6) {
        0 => IntMatrix::identity(k),
        1 => IntMatrix::identity(k).neg(),
        2 => signed_permutation(rng, k),
        3 => random_gl(rng, k, 3).0,
        _ => {
            let (p, p_inv) = random_gl(rng, k, 2);
            &(&p * &block_operator(rng, k)) * &p_inv
        }
    }
}

/// Draws a saturated sublattice of `⊕ ker(A_s − I)` over the given
/// branches. Returns `None` when the draw is the zero lattice.
fn random_relative_cycles(rng: &mut impl Rng, branches: &[IntMatrix]) -> Option<Sublattice> {
    let ambient: usize = branches.iter().map(IntMatrix::rows).sum();
    let mut fixed = Vec::new();
    let mut offset = 0;
    for a in branches {
        let k = kernel_basis(&a.minus_identity().unwrap());
        for v in k.basis_vectors() {
            let mut lifted = vec![int(0); ambient];
            lifted[offset..offset + v.len()].clone_from_slice(&v);
            fixed.push(lifted);
        }
        offset += a.rows();
    }
    if fixed.is_empty() {
        return None;
    }
    let count = rng.gen_range(0..=fixed.len());
    let gens: Vec<Vec<BigInt>> = (0..count)
        .map(|_| {
            let mut g = vec![int(0); ambient];
            for f in &fixed {
                let c = int(rng.gen_range(-2..=2));
                for (x, y) in g.iter_mut().zip(f) {
                    *x += &c * y;
                }
            }
            g
        })
        .collect();
    let l = Sublattice::from_vectors(ambient, &gens).unwrap();
    (l.rank() > 0).then(|| saturation(&l))
}

/// The smallest direct summand containing `l`: the leading columns of
/// `U^{-1}` from the Smith form of its generators.
pub fn saturation(l: &Sublattice) -> Sublattice {
    let s = smith_normal_form(l.generators());
    let cols: Vec<Vec<BigInt>> = (0..s.rank()).map(|j| s.u_inv.column(j)).collect();
    Sublattice::from_vectors(l.ambient_dim(), &cols).unwrap()
}

#[derive(Clone, Copy, Debug)]
pub struct ConfigShape {
    /// Attach a relative cycle lattice wherever one is needed, so exact
    /// mode is available.
    pub with_lattices: bool,
    pub max_components: usize,
    pub max_mu: usize,
    pub max_loops: u64,
}

impl Default for ConfigShape {
    fn default() -> Self {
        Self {
            with_lattices: true,
            max_components: 3,
            max_mu: 4,
            max_loops: 6,
        }
    }
}

fn draw_config(rng: &mut impl Rng, shape: ConfigShape) -> HypersurfaceConfig {
    let n = rng.gen_range(2..=4);
    let d = rng.gen_range(2..=5);
    let rho = rng.gen_range(1..=shape.max_components);
    let mut components = Vec::new();
    // loop budget left for branches on each component
    let mut budget = Vec::new();
    for i in 0..rho {
        let mu = rng.gen_range(1..=shape.max_mu);
        let genus = if shape.max_loops >= 4 && rng.gen_bool(0.25) { 1 } else { 0 };
        let nu = rng.gen_range(1..=(shape.max_loops - 2 * u64::from(genus)).min(3));
        components.push(CurveComponent {
            id: format!("s{i}"),
            genus,
            axis_points: AxisPoints::Count(nu),
            mu_perp: mu,
            genus_loop_monodromies: (0..2 * genus).map(|_| random_unimodular(rng, mu)).collect(),
        });
        budget.push(shape.max_loops - nu - 2 * u64::from(genus));
    }

    let mut special_points = Vec::new();
    for q in 0..rng.gen_range(0..=3) {
        let mut incidences = Vec::new();
        for (i, c) in components.iter().enumerate() {
            if budget[i] == 0 || !rng.gen_bool(0.5) {
                continue;
            }
            let branches = rng.gen_range(1..=budget[i].min(2));
            budget[i] -= branches;
            incidences.push(Incidence {
                component: c.id.clone(),
                branch_monodromies: (0..branches).map(|_| random_unimodular(rng, c.mu_perp)).collect(),
            });
        }
        if incidences.is_empty() {
            continue;
        }
        let ops: Vec<IntMatrix> = incidences.iter().flat_map(|i| i.branch_monodromies.clone()).collect();
        let lattice = if shape.with_lattices || rng.gen_bool(0.5) {
            random_relative_cycles(rng, &ops)
        } else {
            None
        };
        let (b_fiber_free, relative_cycle_lattice) = match lattice {
            Some(l) if shape.with_lattices || rng.gen_bool(0.5) => (l.rank(), Some(l.basis_vectors())),
            Some(l) => (l.rank(), None),
            None => (0, None),
        };
        special_points.push(SpecialPoint {
            id: format!("q{q}"),
            incidences,
            chi_fiber: rng.gen_range(-1..=4),
            b_fiber_free,
            relative_cycle_lattice,
        });
    }

    let isolated_points = (0..rng.gen_range(0..=2))
        .map(|k| IsolatedPoint {
            id: format!("r{k}"),
            milnor_number: rng.gen_range(1..=5),
        })
        .collect();

    HypersurfaceConfig {
        n,
        d,
        label: "random".into(),
        components,
        special_points,
        isolated_points,
        num_irreducible_components: None,
    }
}

/// A valid random configuration whose local data are globally consistent
/// (non-negative `b∨_{n+1}`); inconsistent draws are redrawn.
pub fn random_config(rng: &mut impl Rng, shape: ConfigShape) -> HypersurfaceConfig {
    loop {
        let c = draw_config(rng, shape);
        assert!(vanishing_homology::model::validate(&c).is_empty(), "generator produced an invalid config");
        match vanishing_betti(&c, ModeRequest::Auto) {
            Err(EngineError::NegativeMidRank { .. }) => continue,
            Err(e) => panic!("engine failed on a generated config: {e}\n{c:#?}"),
            Ok(_) => return c,
        }
    }
}
