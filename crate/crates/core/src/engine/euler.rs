use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, Zero};
use serde::Serialize;

use crate::model::{derived_counts, HypersurfaceConfig};

/// Euler characteristic and middle Betti number of a smooth hypersurface
/// of degree `d` in `P^{n+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothBaseline {
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub chi: BigInt,
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub b_n: BigInt,
}

pub(crate) fn sign(k: u32) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn smooth_euler(n: u32, d: u32) -> SmoothBaseline {
    assert!(d >= 1, "degree must be positive");
    let d_big = BigInt::from(d);
    let power: BigInt = Pow::pow(BigInt::from(d) - 1u32, n + 2);
    let bracket = BigInt::from(1) + BigInt::from(sign(n + 1)) * power;
    let (quotient, remainder) = bracket.div_rem(&d_big);
    assert!(remainder.is_zero(), "1 + (-1)^(n+1) (d-1)^(n+2) must be divisible by d");
    let chi = BigInt::from(n + 2) - quotient;
    // H_k(V) = H_k(P^n) away from the middle degree
    let chi_pn = BigInt::from(n + 1);
    let b_n_pn = BigInt::from(if n.is_multiple_of(2) { 1 } else { 0 });
    let b_n = BigInt::from(sign(n)) * (&chi - chi_pn) + b_n_pn;
    SmoothBaseline { chi, b_n }
}

/// Euler characteristic of the pair `(V_Δ, V_ε)` from the local data alone.
pub fn vanishing_euler(config: &HypersurfaceConfig) -> i64 {
    let counts = derived_counts(config);
    let s = sign(config.n + 1);
    let curves: i64 = counts
        .components
        .iter()
        .map(|c| (c.loops() as i64 - 2) * c.mu_perp as i64)
        .sum();
    let points: i64 = config.special_points.iter().map(|q| q.chi_fiber - 1).sum();
    let isolated: i64 = config.isolated_points.iter().map(|r| r.milnor_number as i64).sum();
    s * curves - points + s * isolated
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_config;

    #[test]
    fn smooth_surfaces() {
        assert_eq!(
            smooth_euler(2, 5),
            SmoothBaseline { chi: 55.into(), b_n: 53.into() }
        );
        assert_eq!(smooth_euler(2, 1), SmoothBaseline { chi: 3.into(), b_n: 1.into() });
        assert_eq!(smooth_euler(2, 3), SmoothBaseline { chi: 9.into(), b_n: 7.into() });
    }

    #[test]
    fn smooth_odd_dimension() {
        // cubic threefold: b_3 = 10, chi = 1 + 1 + 1 + 1 - 10
        assert_eq!(smooth_euler(3, 3), SmoothBaseline { chi: (-6).into(), b_n: 10.into() });
        // quadric threefold has no middle homology
        assert_eq!(smooth_euler(3, 2), SmoothBaseline { chi: 4.into(), b_n: 0.into() });
    }

    #[test]
    fn large_degree_does_not_overflow() {
        let s = smooth_euler(12, 1000);
        assert!(s.b_n > BigInt::from(i64::MAX));
    }

    #[test]
    fn euler_of_smooth_config_is_zero() {
        let c = parse_config(r#"{"n": 2, "d": 4}"#).unwrap();
        assert_eq!(vanishing_euler(&c), 0);
    }

    #[test]
    fn euler_of_cubic_with_two_dinfty_points() {
        let c = parse_config(
            r#"{"n": 2, "d": 3, "components": [{"id": "l", "genus": 0, "nu": 3, "mu_perp": 1}],
            "special_points": [
                {"id": "q1", "incidences": [{"component": "l", "branch_monodromies": [[[-1]]]}], "chi_fiber": 2, "b_fiber_free": 0},
                {"id": "q2", "incidences": [{"component": "l", "branch_monodromies": [[[-1]]]}], "chi_fiber": 2, "b_fiber_free": 0}]}"#,
        )
        .unwrap();
        assert_eq!(vanishing_euler(&c), -5);
    }

    #[test]
    fn euler_ignores_monodromies() {
        let with = |a: i64| {
            parse_config(&format!(
                r#"{{"n": 2, "d": 3, "components": [{{"id": "l", "genus": 0, "nu": 3, "mu_perp": 1}}],
                "special_points": [{{"id": "q", "incidences": [{{"component": "l", "branch_monodromies": [[[{a}]]]}}],
                "chi_fiber": 2, "b_fiber_free": 0}}]}}"#
            ))
            .unwrap()
        };
        assert_eq!(vanishing_euler(&with(1)), vanishing_euler(&with(-1)));
    }
}
