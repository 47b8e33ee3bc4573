//! Smith normal form over the integers.
//!
//! The reduction pivots on an entry of minimal absolute value in the active
//! submatrix (ties broken by lowest row, then lowest column), which keeps
//! intermediate entries small on the incidence-like matrices this crate
//! produces. Unit pivots skip the divisibility sweep entirely.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// `u * m * v = d` with `u`, `v` unimodular and `d` diagonal, `d[i] | d[i+1]`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

struct Transforms {
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

struct Reducer {
    a: IntMatrix,
    t: Option<Transforms>,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_rows(i, j);
        if let Some(t) = &mut self.t {
            t.u.swap_rows(i, j);
            t.u_inv.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_cols(i, j);
        if let Some(t) = &mut self.t {
            t.v.swap_cols(i, j);
            t.v_inv.swap_rows(i, j);
        }
    }

    /// row[dst] += c * row[src]
    fn row_op(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_row_multiple(dst, src, c);
        if let Some(t) = &mut self.t {
            t.u.add_row_multiple(dst, src, c);
            t.u_inv.add_col_multiple(src, dst, &-c);
        }
    }

    /// col[dst] += c * col[src]
    fn col_op(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_col_multiple(dst, src, c);
        if let Some(t) = &mut self.t {
            t.v.add_col_multiple(dst, src, c);
            t.v_inv.add_row_multiple(src, dst, &-c);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(t) = &mut self.t {
            t.u.negate_row(i);
            t.u_inv.negate_col(i);
        }
    }

    /// Minimal nonzero |entry| in the active block, lowest row then column.
    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                let better = match &best {
                    None => true,
                    Some((_, _, b)) => ax < *b,
                };
                if better {
                    let unit = ax.is_one();
                    best = Some((i, j, ax));
                    if unit {
                        return best.map(|(i, j, _)| (i, j));
                    }
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    /// Minimal nonzero |entry| in row t / column t of the active block.
    fn find_cross_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        let mut consider = |i: usize, j: usize, x: &BigInt| {
            if x.is_zero() {
                return;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                best = Some((i, j, ax));
            }
        };
        for i in t..self.a.rows() {
            consider(i, t, &self.a[(i, t)]);
        }
        for j in t + 1..self.a.cols() {
            consider(t, j, &self.a[(t, j)]);
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn run(mut self) -> (IntMatrix, Option<Transforms>, usize) {
        let rows = self.a.rows();
        let cols = self.a.cols();
        let mut t = 0;
        while t < rows.min(cols) {
            let Some((pi, pj)) = self.find_pivot(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                // clear column t
                let mut remainder = false;
                for i in t + 1..rows {
                    if self.a[(i, t)].is_zero() {
                        continue;
                    }
                    let q = self.a[(i, t)].div_floor(&self.a[(t, t)]);
                    self.row_op(i, t, &-q);
                    if !self.a[(i, t)].is_zero() {
                        remainder = true;
                    }
                }
                for j in t + 1..cols {
                    if self.a[(t, j)].is_zero() {
                        continue;
                    }
                    let q = self.a[(t, j)].div_floor(&self.a[(t, t)]);
                    self.col_op(j, t, &-q);
                    if !self.a[(t, j)].is_zero() {
                        remainder = true;
                    }
                }
                if remainder {
                    let (pi, pj) = self
                        .find_cross_pivot(t)
                        .expect("pivot row/column cannot vanish");
                    self.swap_rows(t, pi);
                    self.swap_cols(t, pj);
                    continue;
                }
                if self.a[(t, t)].abs().is_one() {
                    break;
                }
                // divisibility of the remaining block by the pivot
                let p = self.a[(t, t)].clone();
                let offender = (t + 1..rows).find(|&i| {
                    (t + 1..cols).any(|j| !self.a[(i, j)].is_multiple_of(&p))
                });
                match offender {
                    Some(i) => self.row_op(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[(t, t)].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        (self.a, self.t, t)
    }
}

/// Full Smith normal form with both transforms and their inverses.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let reducer = Reducer {
        a: m.clone(),
        t: Some(Transforms {
            u: IntMatrix::identity(m.rows()),
            u_inv: IntMatrix::identity(m.rows()),
            v: IntMatrix::identity(m.cols()),
            v_inv: IntMatrix::identity(m.cols()),
        }),
    };
    let (d, t, rank) = reducer.run();
    let t = t.expect("transforms requested");
    SmithForm {
        u: t.u,
        d,
        v: t.v,
        u_inv: t.u_inv,
        v_inv: t.v_inv,
        rank,
    }
}

/// Invariant factors only (no transforms tracked).
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let reducer = Reducer { a: m.clone(), t: None };
    let (d, _, rank) = reducer.run();
    (0..rank).map(|i| d[(i, i)].clone()).collect()
}

pub fn rank(m: &IntMatrix) -> usize {
    invariant_factors(m).len()
}
