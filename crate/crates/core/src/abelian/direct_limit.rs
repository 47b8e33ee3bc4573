//! Direct limits of finitely generated abelian groups along eventually
//! isomorphic systems.

use num_bigint::BigInt;
use serde::Serialize;

use super::group::GroupPresentation;
use super::lattice::kernel_and_cokernel;
use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// `groups[0] -> groups[1] -> ...`; `maps[l]` is written on the normal-form
/// generators of `groups[l]` (columns) and `groups[l+1]` (rows).
#[derive(Clone, Debug)]
pub struct DirectSystem {
    pub groups: Vec<GroupPresentation>,
    pub maps: Vec<IntMatrix>,
    pub stabilization_window: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LimitStatus {
    Stabilized,
    NotStabilized,
}

/// Kernel and cokernel of one connecting map.
#[derive(Clone, Debug, Serialize)]
pub struct MapReport {
    pub level: usize,
    pub matrix: IntMatrix,
    pub kernel: GroupPresentation,
    pub cokernel: GroupPresentation,
    pub isomorphism: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DirectLimit {
    pub limit: GroupPresentation,
    pub status: LimitStatus,
    /// First level of the trailing run of isomorphisms, when stabilized.
    pub stable_from: Option<usize>,
    pub maps: Vec<MapReport>,
}

impl DirectSystem {
    pub fn new(groups: Vec<GroupPresentation>, maps: Vec<IntMatrix>, window: usize) -> Self {
        DirectSystem { groups, maps, stabilization_window: window }
    }

    /// Checks shapes and that every map sends relations to zero.
    pub fn validate(&self) -> Result<()> {
        if self.groups.is_empty() {
            return Err(Error::EmptySystem);
        }
        if self.maps.len() + 1 != self.groups.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} groups need {} maps, got {}",
                self.groups.len(),
                self.groups.len() - 1,
                self.maps.len()
            )));
        }
        for (l, m) in self.maps.iter().enumerate() {
            let (a, b) = (&self.groups[l], &self.groups[l + 1]);
            if m.cols() != a.generator_count() || m.rows() != b.generator_count() {
                return Err(Error::DimensionMismatch(format!(
                    "map {l} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    b.generator_count(),
                    a.generator_count()
                )));
            }
            for (i, d) in a.torsion.iter().enumerate() {
                let image: Vec<BigInt> = m.col(i).iter().map(|x| x * d).collect();
                if !b.is_zero_element(&image) {
                    return Err(Error::InvalidMap(format!(
                        "map {l} does not respect the order of generator {i}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Direct limit of a system, stabilized when the trailing run of isomorphic
/// connecting maps has length at least the stabilization window.
pub fn direct_limit_fg(sys: &DirectSystem) -> Result<DirectLimit> {
    sys.validate()?;
    let maps: Vec<MapReport> = sys
        .maps
        .iter()
        .enumerate()
        .map(|(l, m)| {
            let (kernel, cokernel) = kernel_and_cokernel(m, &sys.groups[l], &sys.groups[l + 1]);
            let isomorphism = kernel.is_trivial() && cokernel.is_trivial();
            MapReport { level: l, matrix: m.clone(), kernel, cokernel, isomorphism }
        })
        .collect();
    let run = maps.iter().rev().take_while(|r| r.isomorphism).count();
    let last = sys.groups.last().expect("validated nonempty").clone();
    let stabilized = run > 0 && run >= sys.stabilization_window.max(1);
    Ok(DirectLimit {
        limit: last,
        status: if stabilized { LimitStatus::Stabilized } else { LimitStatus::NotStabilized },
        stable_from: stabilized.then(|| maps.len() - run),
        maps,
    })
}
