//! Integer lattices given by generating columns: kernels, exact solving and
//! subquotient presentations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::group::{present_quotient, GroupPresentation, Normalized};
use super::matrix::IntMatrix;
use super::snf::smith_normal_form;

/// Basis of the integer kernel `{x : m x = 0}` as columns.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(m);
    let cols: Vec<usize> = (s.rank..m.cols()).collect();
    s.v.select_cols(&cols)
}

/// Some integer solution of `a x = b`, if one exists.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len());
    let s = smith_normal_form(a);
    let ub = s.u.mul_vec(b).ok()?;
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, c) in ub.iter().enumerate() {
        if i < s.rank {
            let d = &s.d[(i, i)];
            if !c.is_multiple_of(d) {
                return None;
            }
            y[i] = c / d;
        } else if !c.is_zero() {
            return None;
        }
    }
    s.v.mul_vec(&y).ok()
}

/// A sublattice of `Z^n` with a chosen basis and a coordinate map.
#[derive(Clone, Debug)]
pub struct Lattice {
    /// `n x r` basis columns.
    pub basis: IntMatrix,
    u: IntMatrix,
    divisors: Vec<BigInt>,
}

impl Lattice {
    /// Lattice spanned by the columns of `generators` (`n x k`).
    pub fn spanned_by(generators: &IntMatrix) -> Self {
        let s = smith_normal_form(generators);
        let n = generators.rows();
        let mut basis = IntMatrix::zeros(n, s.rank);
        let mut divisors = Vec::with_capacity(s.rank);
        for j in 0..s.rank {
            let d = s.d[(j, j)].clone();
            for i in 0..n {
                basis[(i, j)] = &s.u_inv[(i, j)] * &d;
            }
            divisors.push(d);
        }
        let u = s.u.select_rows(&(0..s.rank).collect::<Vec<_>>());
        Lattice { basis, u, divisors }
    }

    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    pub fn ambient(&self) -> usize {
        self.basis.rows()
    }

    /// Coordinates of `x` in the basis, or `None` if `x` is not in the lattice.
    pub fn coords(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let ux = self.u.mul_vec(x).ok()?;
        let mut c = Vec::with_capacity(self.rank());
        for (v, d) in ux.iter().zip(&self.divisors) {
            if !v.is_multiple_of(d) {
                return None;
            }
            c.push(v / d);
        }
        // the coordinates must reproduce x exactly
        let back = self.basis.mul_vec(&c).ok()?;
        (back == x).then_some(c)
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.coords(x).is_some()
    }

    pub fn contains_all(&self, generators: &IntMatrix) -> bool {
        (0..generators.cols()).all(|j| self.contains(&generators.col(j)))
    }
}

/// Whether two generating sets span the same lattice.
pub fn same_lattice(a: &IntMatrix, b: &IntMatrix) -> bool {
    Lattice::spanned_by(a).contains_all(b) && Lattice::spanned_by(b).contains_all(a)
}

/// The subquotient `span(sub) / span(rel)` (requires `rel ⊂ sub`).
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub sub: Lattice,
    pub normalized: Normalized,
}

impl Subquotient {
    pub fn new(sub: &IntMatrix, rel: &IntMatrix) -> Option<Self> {
        let lattice = Lattice::spanned_by(sub);
        let r = lattice.rank();
        let mut rel_coords = IntMatrix::zeros(r, rel.cols());
        for j in 0..rel.cols() {
            let c = lattice.coords(&rel.col(j))?;
            for (i, v) in c.into_iter().enumerate() {
                rel_coords[(i, j)] = v;
            }
        }
        let normalized = present_quotient(r, &rel_coords);
        Some(Subquotient { sub: lattice, normalized })
    }

    pub fn group(&self) -> &GroupPresentation {
        &self.normalized.group
    }

    /// Coordinates of an ambient vector lying in `sub`.
    pub fn coords(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let c = self.sub.coords(x)?;
        Some(self.normalized.coords(&c))
    }

    /// Ambient representatives of the generators (`n x g`).
    pub fn generators(&self) -> IntMatrix {
        self.sub
            .basis
            .mul(&self.normalized.to_old)
            .expect("basis and lift shapes agree")
    }
}

/// Kernel of a homomorphism `f: A -> B` between presented groups, as a lattice
/// of `Z^{gens(A)}` containing the relations of `A`.
pub fn homomorphism_kernel_lattice(
    f: &IntMatrix,
    source: &GroupPresentation,
    target: &GroupPresentation,
) -> IntMatrix {
    let ga = source.generator_count();
    let stacked = f.hcat(&target.relations()).expect("shape");
    let k = kernel_basis(&stacked);
    let first: Vec<usize> = (0..ga).collect();
    let proj = k.select_rows(&first);
    proj.hcat(&source.relations()).expect("shape")
}

/// Kernel and cokernel of `f: A -> B` as presented groups.
pub fn kernel_and_cokernel(
    f: &IntMatrix,
    source: &GroupPresentation,
    target: &GroupPresentation,
) -> (GroupPresentation, GroupPresentation) {
    let kernel_lattice = homomorphism_kernel_lattice(f, source, target);
    let kernel = Subquotient::new(&kernel_lattice, &source.relations())
        .expect("relations lie in kernel")
        .group()
        .clone();
    let coker_rel = f.hcat(&target.relations()).expect("shape");
    let coker = present_quotient(target.generator_count(), &coker_rel).group;
    (kernel, coker)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn solve_simple() {
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(solve(&a, &v(&[4, 9])), Some(v(&[2, 3])));
        assert_eq!(solve(&a, &v(&[1, 0])), None);
    }

    #[test]
    fn lattice_membership() {
        let g = IntMatrix::from_rows(&[vec![2, 0], vec![2, 4]]);
        let l = Lattice::spanned_by(&g);
        assert!(l.contains(&v(&[2, 2])));
        assert!(l.contains(&v(&[0, 4])));
        assert!(l.contains(&v(&[4, 0])));
        assert!(!l.contains(&v(&[2, 0])));
    }

    #[test]
    fn times_two_kernel_cokernel() {
        let f = IntMatrix::from_rows(&[vec![2]]);
        let z = GroupPresentation::free(1);
        let (k, c) = kernel_and_cokernel(&f, &z, &z);
        assert!(k.is_trivial());
        assert_eq!(c, GroupPresentation { rank: 0, torsion: vec![BigInt::from(2)] });
    }
}
