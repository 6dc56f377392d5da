use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Smith normal form `U * A * V = D`, with `U`, `V` unimodular and the
/// diagonal of `D` nonnegative, each entry dividing the next.
///
/// The inverses of both transforms are carried along since kernels, images
/// and membership tests all need them.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    rank: usize,
}

impl SmithForm {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The nonzero invariant factors `d_1 | d_2 | ... | d_r`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }
}

struct Reducer {
    m: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.m.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.m.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.m.add_row_multiple(dst, src, k);
        self.u.add_row_multiple(dst, src, k);
        self.u_inv.add_col_multiple(src, dst, &-k);
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.m.add_col_multiple(dst, src, k);
        self.v.add_col_multiple(dst, src, k);
        self.v_inv.add_row_multiple(src, dst, &-k);
    }

    fn negate_row(&mut self, i: usize) {
        self.m.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// Smallest nonzero entry (by absolute value) in the trailing submatrix.
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.m.rows() {
            for j in t..self.m.cols() {
                let x = self.m.get(i, j);
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.m.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    /// Reduces column and row `t` against the pivot with nearest-integer
    /// quotients. Returns whether both are now clear outside the pivot.
    fn reduce_cross(&mut self, t: usize) -> bool {
        let mut clear = true;
        for i in t + 1..self.m.rows() {
            if self.m.get(i, t).is_zero() {
                continue;
            }
            let q = nearest_quotient(self.m.get(i, t), self.m.get(t, t));
            self.add_row(i, t, &-q);
            clear &= self.m.get(i, t).is_zero();
        }
        for j in t + 1..self.m.cols() {
            if self.m.get(t, j).is_zero() {
                continue;
            }
            let q = nearest_quotient(self.m.get(t, j), self.m.get(t, t));
            self.add_col(j, t, &-q);
            clear &= self.m.get(t, j).is_zero();
        }
        clear
    }

    /// Finds a row whose trailing entries are not all divisible by the pivot.
    fn divisibility_violation(&self, t: usize) -> Option<usize> {
        let p = self.m.get(t, t);
        (t + 1..self.m.rows()).find(|&i| {
            (t + 1..self.m.cols()).any(|j| !(self.m.get(i, j) % p).is_zero())
        })
    }
}

/// `round(a / p)`, so that `|a - q p| <= |p| / 2`.
fn nearest_quotient(a: &BigInt, p: &BigInt) -> BigInt {
    // floor division leaves r with the sign of p
    let (q, r) = a.div_mod_floor(p);
    if (&r * 2u32).abs() > p.abs() {
        q + 1u32
    } else {
        q
    }
}

/// Computes the Smith normal form of an arbitrary integer matrix.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (rows, cols) = (a.rows(), a.cols());
    let mut r = Reducer {
        m: a.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    let mut rank = 0;
    for t in 0..rows.min(cols) {
        if r.min_pivot(t).is_none() {
            break;
        }
        // Re-pick the smallest entry every round: remainders become the
        // next pivots, which keeps intermediate entries from blowing up.
        while let Some((pi, pj)) = r.min_pivot(t) {
            r.swap_rows(t, pi);
            r.swap_cols(t, pj);
            if !r.reduce_cross(t) {
                continue;
            }
            match r.divisibility_violation(t) {
                Some(i) => r.add_row(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if r.m.get(t, t).is_negative() {
            r.negate_row(t);
        }
        rank += 1;
    }
    SmithForm {
        d: r.m,
        u: r.u,
        v: r.v,
        u_inv: r.u_inv,
        v_inv: r.v_inv,
        rank,
    }
}
