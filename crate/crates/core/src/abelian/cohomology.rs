//! Cohomology of integer cochain complexes with explicit generators.

use num_bigint::BigInt;

use super::group::GroupPresentation;
use super::lattice::{kernel_basis, Subquotient};
use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// `ker(d_out) / im(d_in)` together with cocycle representatives and a
/// coordinate map for cocycles.
#[derive(Clone, Debug)]
pub struct CohomologyBasis {
    quotient: Subquotient,
    cochain_dim: usize,
}

impl CohomologyBasis {
    /// `d_in: C^{n-1} -> C^n` is `dim C^n x dim C^{n-1}`; `d_out: C^n -> C^{n+1}`
    /// is `dim C^{n+1} x dim C^n`.
    pub fn new(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<Self> {
        if d_in.rows() != d_out.cols() {
            return Err(Error::DimensionMismatch(format!(
                "incoming differential has {} rows, outgoing has {} columns",
                d_in.rows(),
                d_out.cols()
            )));
        }
        let comp = d_out.mul(d_in)?;
        if !comp.is_zero() {
            return Err(Error::CompositionNotZero);
        }
        let cocycles = kernel_basis(d_out);
        let quotient = Subquotient::new(&cocycles, d_in)
            .expect("image of incoming differential lies in the cocycles");
        Ok(CohomologyBasis { quotient, cochain_dim: d_in.rows() })
    }

    pub fn group(&self) -> &GroupPresentation {
        self.quotient.group()
    }

    pub fn cochain_dim(&self) -> usize {
        self.cochain_dim
    }

    /// Cocycle representatives of the generators, as columns.
    pub fn representatives(&self) -> IntMatrix {
        self.quotient.generators()
    }

    /// Class of a cocycle in generator coordinates.
    pub fn class_of(&self, cocycle: &[BigInt]) -> Result<Vec<BigInt>> {
        if cocycle.len() != self.cochain_dim {
            return Err(Error::DimensionMismatch(format!(
                "cochain of length {} in degree of dimension {}",
                cocycle.len(),
                self.cochain_dim
            )));
        }
        self.quotient.coords(cocycle).ok_or(Error::NotACocycle)
    }

    /// Matrix of the map on cohomology induced by a cochain map `f` from the
    /// complex of `self` to the complex of `target`.
    pub fn induced_map(&self, f: &IntMatrix, target: &CohomologyBasis) -> Result<IntMatrix> {
        if f.cols() != self.cochain_dim || f.rows() != target.cochain_dim {
            return Err(Error::DimensionMismatch(format!(
                "cochain map is {}x{}, expected {}x{}",
                f.rows(),
                f.cols(),
                target.cochain_dim,
                self.cochain_dim
            )));
        }
        let reps = self.representatives();
        let images = f.mul(&reps)?;
        let g = target.group().generator_count();
        let mut out = IntMatrix::zeros(g, reps.cols());
        for j in 0..reps.cols() {
            let c = target.class_of(&images.col(j))?;
            for (i, v) in c.into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        Ok(out)
    }
}

/// `ker(d_out) / im(d_in)` in normal form.
pub fn cohomology_at(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<GroupPresentation> {
    Ok(CohomologyBasis::new(d_in, d_out)?.group().clone())
}

/// All cohomology groups of a complex `0 -> C^0 -> ... -> C^top -> 0` given by
/// its differentials `d[n]: C^n -> C^{n+1}` and cochain dimensions.
pub fn complex_cohomology(dims: &[usize], d: &[IntMatrix]) -> Result<Vec<CohomologyBasis>> {
    if dims.is_empty() {
        return Ok(Vec::new());
    }
    if d.len() + 1 != dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} cochain groups need {} differentials, got {}",
            dims.len(),
            dims.len() - 1,
            d.len()
        )));
    }
    let mut out = Vec::with_capacity(dims.len());
    for n in 0..dims.len() {
        let d_in = if n == 0 { IntMatrix::zeros(dims[0], 0) } else { d[n - 1].clone() };
        let d_out = if n + 1 == dims.len() { IntMatrix::zeros(0, dims[n]) } else { d[n].clone() };
        out.push(CohomologyBasis::new(&d_in, &d_out)?);
    }
    Ok(out)
}
