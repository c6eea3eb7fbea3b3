use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// `u · m · v = s` with `s` diagonal, `s[i][i]` positive for `i < rank`,
/// each diagonal entry dividing the next. The inverses are tracked alongside
/// so unimodularity is witnessed by `u · u_inv = 1` rather than assumed.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s.get(i, i).clone()).collect()
    }

    /// Checks `u·m·v = s`, both inverse pairs, diagonal shape and the divisibility chain.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        let reconstructs = &(&self.u * m) * &self.v == self.s;
        let unimodular = (&self.u * &self.u_inv).is_identity()
            && (&self.u_inv * &self.u).is_identity()
            && (&self.v * &self.v_inv).is_identity()
            && (&self.v_inv * &self.v).is_identity();
        let diagonal = (0..self.s.rows())
            .all(|i| (0..self.s.cols()).all(|j| i == j || self.s.get(i, j).is_zero()));
        let d = self.invariant_factors();
        let chain = d.iter().all(|x| x.is_positive())
            && d.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
            && (self.rank..self.s.rows().min(self.s.cols())).all(|i| self.s.get(i, i).is_zero());
        reconstructs && unimodular && diagonal && chain
    }
}

struct Tracker {
    s: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Tracker {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.s.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.s.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// `row[dst] += k·row[src]`.
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.s.add_row_multiple(dst, src, k);
        self.u.add_row_multiple(dst, src, k);
        self.u_inv.add_col_multiple(src, dst, &-k);
    }

    /// `col[dst] += k·col[src]`.
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.s.add_col_multiple(dst, src, k);
        self.v.add_col_multiple(dst, src, k);
        self.v_inv.add_row_multiple(src, dst, &-k);
    }

    fn negate_row(&mut self, r: usize) {
        self.s.negate_row(r);
        self.u.negate_row(r);
        self.u_inv.negate_col(r);
    }

    /// Position of the smallest nonzero entry (by absolute value) among `cells`.
    fn min_abs(&self, cells: impl Iterator<Item = (usize, usize)>) -> Option<(usize, usize)> {
        cells
            .filter(|&(i, j)| !self.s.get(i, j).is_zero())
            .min_by(|&(a, b), &(c, d)| self.s.get(a, b).abs().cmp(&self.s.get(c, d).abs()))
    }
}

/// Smith normal form with smallest-absolute-value pivoting.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut t = Tracker {
        s: m.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    let mut p = 0;
    while p < rows.min(cols) {
        let Some((i, j)) = t.min_abs((p..rows).flat_map(|i| (p..cols).map(move |j| (i, j)))) else {
            break;
        };
        t.swap_rows(p, i);
        t.swap_cols(p, j);
        loop {
            let pivot = t.s.get(p, p).clone();
            for i in p + 1..rows {
                let q = t.s.get(i, p).div_floor(&pivot);
                if !q.is_zero() {
                    t.add_row(i, p, &-q);
                }
            }
            for j in p + 1..cols {
                let q = t.s.get(p, j).div_floor(&pivot);
                if !q.is_zero() {
                    t.add_col(j, p, &-q);
                }
            }
            let line = (p + 1..rows).map(|i| (i, p)).chain((p + 1..cols).map(|j| (p, j)));
            if let Some((i, j)) = t.min_abs(line) {
                // A nonzero remainder is strictly smaller than the pivot.
                if i == p {
                    t.swap_cols(p, j);
                } else {
                    t.swap_rows(p, i);
                }
                continue;
            }
            let offender = (p + 1..rows)
                .flat_map(|i| (p + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(t.s.get(i, j) % &pivot).is_zero());
            match offender {
                Some((i, _)) => t.add_row(p, i, &BigInt::from(1)),
                None => break,
            }
        }
        if t.s.get(p, p).is_negative() {
            t.negate_row(p);
        }
        p += 1;
    }
    SmithForm { u: t.u, u_inv: t.u_inv, s: t.s, v: t.v, v_inv: t.v_inv, rank: p }
}

/// Integer kernel basis: the columns of `v` past the rank. The basis spans a
/// saturated sublattice.
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    (snf.rank..m.cols()).map(|j| snf.v.column(j)).collect()
}

/// Some integer `x` with `m·x = b`, if one exists.
pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    solve_with(&snf, m.cols(), b)
}

pub(crate) fn solve_with(snf: &SmithForm, cols: usize, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let ub = snf.u.mul_vec(b);
    let mut z = vec![BigInt::zero(); cols];
    for (i, x) in ub.iter().enumerate() {
        if i < snf.rank {
            let (q, r) = x.div_rem(snf.s.get(i, i));
            if !r.is_zero() {
                return None;
            }
            z[i] = q;
        } else if !x.is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&z))
}

/// Basis of the lattice spanned by the columns of `gens`.
pub fn lattice_basis(gens: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(gens);
    (0..snf.rank)
        .map(|i| {
            let d = snf.s.get(i, i);
            snf.u_inv.column(i).into_iter().map(|x| x * d).collect()
        })
        .collect()
}
