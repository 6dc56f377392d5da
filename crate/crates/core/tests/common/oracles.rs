//! Checks that do not go through the code under test.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use vanishing_homology::lattice::{cokernel_invariants, kernel_basis, smith_normal_form, IntMatrix};

/// Every structural property of the Smith form of `a`; the error names the
/// first one that fails.
pub fn check_smith(a: &IntMatrix) -> Result<(), String> {
    let s = smith_normal_form(a);
    let (m, k) = (a.rows(), a.cols());
    if &(&s.u * a) * &s.v != s.d {
        return Err(format!("U·A·V != D for {a}"));
    }
    for (name, x, x_inv, dim) in [("U", &s.u, &s.u_inv, m), ("V", &s.v, &s.v_inv, k)] {
        let det = x.determinant().unwrap();
        if det.abs() != BigInt::one() {
            return Err(format!("det {name} = {det} for {a}"));
        }
        if x * x_inv != IntMatrix::identity(dim) {
            return Err(format!("{name} inverse is wrong for {a}"));
        }
    }
    let mut prev = BigInt::one();
    for i in 0..m {
        for j in 0..k {
            let x = s.d.get(i, j);
            if i != j && !x.is_zero() {
                return Err(format!("D has off-diagonal entry at ({i}, {j}) for {a}"));
            }
        }
        if i < k {
            let x = s.d.get(i, i);
            if x.is_negative() {
                return Err(format!("negative invariant factor for {a}"));
            }
            if i < s.rank() {
                if x.is_zero() || !x.is_multiple_of(&prev) {
                    return Err(format!("divisibility chain broken at {i} for {a}"));
                }
                prev = x.clone();
            } else if !x.is_zero() {
                return Err(format!("nonzero entry past the rank for {a}"));
            }
        }
    }
    if s.rank() != a.rational_rank() {
        return Err(format!("SNF rank {} but rational rank {} for {a}", s.rank(), a.rational_rank()));
    }
    let ker = kernel_basis(a);
    if ker.rank() + s.rank() != k {
        return Err(format!("rank-nullity fails: {} + {} != {k} for {a}", s.rank(), ker.rank()));
    }
    for v in ker.basis_vectors() {
        if a.mul_vec(&v).unwrap().iter().any(|x| !x.is_zero()) {
            return Err(format!("kernel vector not in kernel for {a}"));
        }
    }
    if !ker.is_saturated() {
        return Err(format!("kernel not saturated for {a}"));
    }
    Ok(())
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|k| n.is_multiple_of(*k)).collect()
}

/// For `Q = Z^m / A Z^m` with `A` square and `D = |det A| > 0`, enumerates
/// `(Z/D)^m` and returns `|Q[k]| = #{x ∈ Q : k x = 0}` for each divisor `k`
/// of `D`. These counts determine `Q` up to isomorphism.
pub fn brute_force_torsion_counts(a: &IntMatrix) -> Vec<(u64, u64)> {
    let m = a.rows();
    let det = a.determinant().unwrap().abs().to_u64().unwrap();
    assert!(det > 0);
    let modp = |x: &BigInt| x.mod_floor(&BigInt::from(det)).to_u64().unwrap();
    let total = det.pow(m as u32) as usize;
    let encode = |v: &[u64]| v.iter().rev().fold(0u64, |acc, x| acc * det + x) as usize;
    let decode = |mut idx: usize, out: &mut [u64]| {
        for slot in out.iter_mut() {
            *slot = idx as u64 % det;
            idx /= det as usize;
        }
    };
    let cols: Vec<Vec<u64>> = a.columns().map(|c| c.iter().map(modp).collect()).collect();

    // the image H of A in (Z/D)^m, closed under adding generators
    let mut image = vec![false; total];
    image[0] = true;
    let mut frontier = vec![0usize];
    let mut x = vec![0u64; m];
    let mut h = 1u64;
    while let Some(idx) = frontier.pop() {
        decode(idx, &mut x);
        for c in &cols {
            let y: Vec<u64> = x.iter().zip(c).map(|(a, b)| (a + b) % det).collect();
            let j = encode(&y);
            if !image[j] {
                image[j] = true;
                h += 1;
                frontier.push(j);
            }
        }
    }

    let mut counts = Vec::new();
    let mut y = vec![0u64; m];
    for k in divisors(det) {
        let mut hits = 0u64;
        for idx in 0..total {
            decode(idx, &mut y);
            let ky = y.iter().rev().fold(0u64, |acc, v| acc * det + v * k % det) as usize;
            if image[ky] {
                hits += 1;
            }
        }
        counts.push((k, hits / h));
    }
    counts
}

/// Compares the library's cokernel of a square nonsingular `a` against the
/// brute-force enumeration.
pub fn check_cokernel_brute_force(a: &IntMatrix) -> Result<(), String> {
    let inv = cokernel_invariants(a);
    if inv.free_rank != 0 {
        return Err(format!("nonsingular {a} has free cokernel rank {}", inv.free_rank));
    }
    for (k, expected) in brute_force_torsion_counts(a) {
        let predicted: u64 = inv
            .torsion
            .iter()
            .map(|t| t.gcd(&BigInt::from(k)).to_u64().unwrap())
            .product();
        if predicted != expected {
            return Err(format!(
                "{a}: torsion {:?} predicts |Q[{k}]| = {predicted}, enumeration gives {expected}",
                inv.torsion
            ));
        }
    }
    Ok(())
}
