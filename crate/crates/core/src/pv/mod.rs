//! PV cohomology: discrete transversals of an approximant over the prototile
//! space, the θ operators, the PV differential and its direct limit over a
//! proper sequence.

mod cantor;

pub use cantor::{
    cantor_circle_h1_rank, cantor_circle_normal_form, frequency_module, Arc, CantorCircleFunction,
    FrequencyModule,
};

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::abelian::{
    complex_cohomology, direct_limit_fg, CohomologyBasis, DirectLimit, DirectSystem,
    GroupPresentation, IntMatrix,
};
use crate::approximants::{cech_cohomology_of_hull, ProperSequence};
use crate::delta_complex::{CellularMap, DeltaComplex};
use crate::error::{Error, Result};

/// A cell of the approximant together with the base simplex under it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Atom {
    pub base: usize,
    pub cell: usize,
}

/// The acceptance zones of the cells of an approximant, grouped by the base
/// simplex they lie over.
#[derive(Clone, Debug)]
pub struct DiscreteTransversal {
    pub level: DeltaComplex,
    pub base: DeltaComplex,
    pub projection: CellularMap,
    /// Per degree, atoms sorted by base simplex, then by cell.
    pub atoms: Vec<Vec<Atom>>,
    /// `partition[n][σ]` lists the indices of the atoms over `σ`.
    pub partition: Vec<Vec<Vec<usize>>>,
    atom_of_cell: Vec<Vec<usize>>,
}

pub fn discrete_transversal(
    level: &DeltaComplex,
    base: &DeltaComplex,
    projection: Option<&CellularMap>,
) -> Result<DiscreteTransversal> {
    let projection = projection.ok_or(Error::MissingConnectingMap)?;
    projection.check(level, base)?;
    let mut atoms = Vec::new();
    let mut partition = Vec::new();
    let mut atom_of_cell = Vec::new();
    for n in 0..=level.dim() {
        let mut a: Vec<Atom> = (0..level.count(n))
            .map(|cell| Atom { base: projection.images[n][cell], cell })
            .collect();
        a.sort();
        let mut part = vec![Vec::new(); base.count(n)];
        let mut of_cell = vec![0; level.count(n)];
        for (k, atom) in a.iter().enumerate() {
            part[atom.base].push(k);
            of_cell[atom.cell] = k;
        }
        if let Some(s) = part.iter().position(Vec::is_empty) {
            return Err(Error::InvalidMap(format!(
                "no cell lies over the base simplex {}",
                base.names[n][s]
            )));
        }
        atoms.push(a);
        partition.push(part);
        atom_of_cell.push(of_cell);
    }
    Ok(DiscreteTransversal {
        level: level.clone(),
        base: base.clone(),
        projection: projection.clone(),
        atoms,
        partition,
        atom_of_cell,
    })
}

impl DiscreteTransversal {
    /// Transversal of level `l` of a proper sequence over its `B_0`.
    pub fn of_sequence(seq: &ProperSequence, l: usize) -> Result<Self> {
        let level = seq.levels.get(l).ok_or(Error::MissingConnectingMap)?;
        discrete_transversal(&level.complex, &seq.levels[0].complex, Some(&seq.map_to_base(l)))
    }

    pub fn dim(&self) -> usize {
        self.level.dim()
    }

    pub fn atom_counts(&self) -> Vec<usize> {
        self.atoms.iter().map(Vec::len).collect()
    }

    /// `ρ_n`: cochains of the approximant to functions on the atoms.
    pub fn rho(&self, n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.atoms[n].len(), self.level.count(n));
        for (k, a) in self.atoms[n].iter().enumerate() {
            m[(k, a.cell)] = BigInt::from(1);
        }
        m
    }

    fn check_face(&self, n: usize, sigma: usize, i: usize) -> Result<()> {
        if n == 0 || n > self.dim() {
            return Err(Error::DegreeOutOfRange { degree: n, max: self.dim() });
        }
        if sigma >= self.base.count(n) {
            return Err(Error::Invalid(format!("no base {n}-simplex {sigma}")));
        }
        if i > n {
            return Err(Error::FaceOutOfRange { index: i, dim: n });
        }
        Ok(())
    }
}

/// `θ_{στ}` for `τ = ∂_i σ`, as a matrix from the atoms over `τ` to the atoms
/// over `σ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaOperator {
    pub dim: usize,
    pub sigma: usize,
    pub face_index: usize,
    pub tau: usize,
    /// Symbolic translation from the puncture of the face to the puncture of
    /// the cell.
    pub translation: String,
    pub matrix: IntMatrix,
}

pub fn theta_matrix(dt: &DiscreteTransversal, n: usize, sigma: usize, i: usize) -> Result<ThetaOperator> {
    dt.check_face(n, sigma, i)?;
    let tau = dt.base.face(n, sigma, i);
    let rows = &dt.partition[n][sigma];
    let cols = &dt.partition[n - 1][tau];
    let mut m = IntMatrix::zeros(rows.len(), cols.len());
    for (r, &a) in rows.iter().enumerate() {
        let face = dt.level.face(n, dt.atoms[n][a].cell, i);
        let k = dt.atom_of_cell[n - 1][face];
        let c = cols.iter().position(|&x| x == k).expect("faces lie over faces");
        m[(r, c)] = BigInt::from(1);
    }
    Ok(ThetaOperator {
        dim: n,
        sigma,
        face_index: i,
        tau,
        translation: format!(
            "x({} -> {})",
            dt.base.names[n - 1][tau],
            dt.base.names[n][sigma]
        ),
        matrix: m,
    })
}

/// `θ χ_τ = χ_σ` for every base simplex and face index: each atom over `σ`
/// has exactly one `i`-th face. At a finite level two atoms may share a
/// face, so `θ` is a partial isometry only through the refinement checked by
/// [`check_theta_partial_isometries`].
pub fn check_theta_ranges(dt: &DiscreteTransversal) -> Result<()> {
    for n in 1..=dt.dim() {
        for sigma in 0..dt.base.count(n) {
            for i in 0..=n {
                let t = theta_matrix(dt, n, sigma, i)?;
                let ones = IntMatrix::from_rows(&vec![vec![1]; t.matrix.cols()]);
                if t.matrix.mul(&ones)? != IntMatrix::from_rows(&vec![vec![1]; t.matrix.rows()]) {
                    return Err(Error::Invalid(format!(
                        "theta for face {i} of {} does not cover its atoms",
                        dt.base.names[n][sigma]
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Refinement of functions on the atoms over `σ` from a coarse transversal
/// to a fine one, along `f` from the fine level onto the coarse one.
fn refinement_block(coarse: &DiscreteTransversal, fine: &DiscreteTransversal, f: &CellularMap, n: usize, sigma: usize) -> IntMatrix {
    let rows = &fine.partition[n][sigma];
    let cols = &coarse.partition[n][sigma];
    let mut m = IntMatrix::zeros(rows.len(), cols.len());
    for (r, &a) in rows.iter().enumerate() {
        let img = coarse.atom_of_cell[n][f.images[n][fine.atoms[n][a].cell]];
        let c = cols.iter().position(|&x| x == img).expect("projection respects the base");
        m[(r, c)] = BigInt::from(1);
    }
    m
}

/// `θ*_{στ}` from functions on the coarse atoms over `σ` to functions on the
/// fine atoms over `τ = ∂_i σ`: a fine atom over `τ` is sent to the coarse
/// atom of the `σ`-cell having it as `i`-th face.
fn theta_star(
    coarse: &DiscreteTransversal,
    fine: &DiscreteTransversal,
    f: &CellularMap,
    n: usize,
    sigma: usize,
    i: usize,
) -> Result<IntMatrix> {
    let tau = coarse.base.face(n, sigma, i);
    let rows = &fine.partition[n - 1][tau];
    let cols = &coarse.partition[n][sigma];
    let mut m = IntMatrix::zeros(rows.len(), cols.len());
    for &a in &fine.partition[n][sigma] {
        let cell = fine.atoms[n][a].cell;
        let face = fine.atom_of_cell[n - 1][fine.level.face(n, cell, i)];
        let r = rows.iter().position(|&x| x == face).expect("faces lie over faces");
        let img = coarse.atom_of_cell[n][f.images[n][cell]];
        let c = cols.iter().position(|&x| x == img).expect("projection respects the base");
        for (cc, _) in cols.iter().enumerate() {
            if cc != c && m[(r, cc)] != BigInt::from(0) {
                return Err(Error::Invalid(format!(
                    "theta* for face {i} of {} is not determined at this level",
                    coarse.base.names[n][sigma]
                )));
            }
        }
        m[(r, c)] = BigInt::from(1);
    }
    Ok(m)
}

/// The partial-isometry relations between consecutive levels, where `θ*` of
/// a coarse function is a fine function: `θ_fine θ* = χ_σ` and, for each
/// face index `i`, `Σ_{σ: ∂_i σ = τ} θ* θ_coarse = χ_τ`, both read through
/// the refinement.
pub fn check_theta_partial_isometries(
    coarse: &DiscreteTransversal,
    fine: &DiscreteTransversal,
    f: &CellularMap,
) -> Result<()> {
    f.check(&fine.level, &coarse.level)?;
    for n in 1..=coarse.dim() {
        for i in 0..=n {
            let mut sums: Vec<Option<IntMatrix>> = vec![None; coarse.base.count(n - 1)];
            for sigma in 0..coarse.base.count(n) {
                let tau = coarse.base.face(n, sigma, i);
                let star = theta_star(coarse, fine, f, n, sigma, i)?;
                let theta_fine = theta_matrix(fine, n, sigma, i)?.matrix;
                if theta_fine.mul(&star)? != refinement_block(coarse, fine, f, n, sigma) {
                    return Err(Error::Invalid(format!(
                        "theta theta* differs from the refinement on {}",
                        coarse.base.names[n][sigma]
                    )));
                }
                let term = star.mul(&theta_matrix(coarse, n, sigma, i)?.matrix)?;
                sums[tau] = Some(match sums[tau].take() {
                    None => term,
                    Some(s) => s.add(&term)?,
                });
            }
            for (tau, s) in sums.into_iter().enumerate() {
                let Some(s) = s else { continue };
                if s != refinement_block(coarse, fine, f, n - 1, tau) {
                    return Err(Error::Invalid(format!(
                        "coface sum for face {i} differs from the refinement on {}",
                        coarse.base.names[n - 1][tau]
                    )));
                }
            }
        }
    }
    Ok(())
}

/// `d_PV^n = Σ_σ Σ_i (-1)^i θ_{σ ∂_i σ}` from functions on `(n-1)`-atoms to
/// functions on `n`-atoms.
pub fn pv_differential(dt: &DiscreteTransversal, n: usize) -> Result<IntMatrix> {
    if n == 0 || n > dt.dim() {
        return Err(Error::DegreeOutOfRange { degree: n, max: dt.dim() });
    }
    let mut d = IntMatrix::zeros(dt.atoms[n].len(), dt.atoms[n - 1].len());
    for sigma in 0..dt.base.count(n) {
        for i in 0..=n {
            let t = theta_matrix(dt, n, sigma, i)?;
            let sign = BigInt::from(if i % 2 == 0 { 1 } else { -1 });
            for (r, &a) in dt.partition[n][sigma].iter().enumerate() {
                for (c, &b) in dt.partition[n - 1][t.tau].iter().enumerate() {
                    if t.matrix[(r, c)] != BigInt::from(0) {
                        d[(a, b)] += &sign * &t.matrix[(r, c)];
                    }
                }
            }
        }
    }
    Ok(d)
}

fn pv_differentials(dt: &DiscreteTransversal) -> Result<Vec<IntMatrix>> {
    (1..=dt.dim()).map(|n| pv_differential(dt, n)).collect()
}

/// `d_PV^n ∘ ρ_{n-1} = ρ_n ∘ δ^n` in every degree.
pub fn check_rho_chain_map(dt: &DiscreteTransversal) -> Result<()> {
    for n in 1..=dt.dim() {
        let lhs = pv_differential(dt, n)?.mul(&dt.rho(n - 1))?;
        let rhs = dt.rho(n).mul(&dt.level.coboundary_matrix(n)?)?;
        if lhs != rhs {
            return Err(Error::Invalid(format!("rho is not a chain map in degree {n}")));
        }
    }
    Ok(())
}

/// `d_PV^{n+1} d_PV^n = 0` in every degree.
pub fn check_pv_square_zero(dt: &DiscreteTransversal) -> Result<()> {
    let d = pv_differentials(dt)?;
    for w in d.windows(2) {
        if !w[1].mul(&w[0])?.is_zero() {
            return Err(Error::CompositionNotZero);
        }
    }
    Ok(())
}

fn pv_bases(dt: &DiscreteTransversal) -> Result<Vec<CohomologyBasis>> {
    complex_cohomology(&dt.atom_counts(), &pv_differentials(dt)?)
}

pub fn pv_cohomology_level(dt: &DiscreteTransversal) -> Result<Vec<GroupPresentation>> {
    Ok(pv_bases(dt)?.iter().map(|b| b.group().clone()).collect())
}

/// Checks run on a proper sequence alongside the PV limit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PvCertificates {
    /// Per level: `d_PV ∘ ρ = ρ ∘ δ`.
    pub rho_chain_map: Vec<bool>,
    /// Per level: `d_PV d_PV = 0`.
    pub square_zero: Vec<bool>,
    /// Per level: `θ χ_τ = χ_σ`.
    pub theta_range: Vec<bool>,
    /// Per pair of consecutive levels: `θ θ* = χ_σ` and the coface sum.
    pub theta_partial_isometry: Vec<bool>,
    /// The PV limit equals the Čech limit in every degree.
    pub agrees_with_cech: bool,
}

impl PvCertificates {
    pub fn all_pass(&self) -> bool {
        self.agrees_with_cech
            && [&self.rho_chain_map, &self.square_zero, &self.theta_range, &self.theta_partial_isometry]
                .iter()
                .all(|v| v.iter().all(|&b| b))
    }
}

#[derive(Clone, Debug)]
pub struct PvHull {
    /// `level_groups[l][n]` is the PV cohomology of level `l`.
    pub level_groups: Vec<Vec<GroupPresentation>>,
    pub degrees: Vec<DirectLimit>,
    pub certificates: PvCertificates,
}

impl PvHull {
    pub fn groups(&self) -> Vec<GroupPresentation> {
        self.degrees.iter().map(|d| d.limit.clone()).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "levels": self.level_groups,
            "connecting_maps": self.degrees.iter().map(|d| d.maps.iter().map(|m| &m.matrix).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "limit": self.degrees.iter().map(|d| json!({
                "group": d.limit,
                "status": d.status,
                "stable_from": d.stable_from,
            })).collect::<Vec<_>>(),
            "certificates": self.certificates,
        })
    }
}

/// Direct limit of the per-level PV cohomologies along the refinements
/// `ρ f^# ρ^{-1}`, with the chain-level certificates and the comparison with
/// the Čech route.
pub fn pv_cohomology_hull(seq: &ProperSequence) -> Result<PvHull> {
    if seq.len() < 2 {
        return Err(Error::Invalid("the direct limit needs at least two levels".into()));
    }
    let dts: Vec<DiscreteTransversal> =
        (0..seq.len()).map(|l| DiscreteTransversal::of_sequence(seq, l)).collect::<Result<_>>()?;
    let bases: Vec<Vec<CohomologyBasis>> = dts.iter().map(pv_bases).collect::<Result<_>>()?;
    let dim = dts.iter().map(DiscreteTransversal::dim).max().unwrap_or(0);
    let mut maps: Vec<Vec<IntMatrix>> = vec![Vec::new(); dim + 1];
    for (l, f) in seq.connecting_maps.iter().enumerate() {
        let (coarse, fine) = (&dts[l], &dts[l + 1]);
        for (n, per_degree) in maps.iter_mut().enumerate() {
            let refine = fine
                .rho(n)
                .mul(&f.pullback(n, coarse.level.count(n)))?
                .mul(&coarse.rho(n).transpose())?;
            per_degree.push(bases[l][n].induced_map(&refine, &bases[l + 1][n])?);
        }
    }
    let level_groups: Vec<Vec<GroupPresentation>> =
        bases.iter().map(|b| b.iter().map(|x| x.group().clone()).collect()).collect();
    let window = seq.connecting_maps.len().min(2);
    let degrees: Vec<DirectLimit> = maps
        .into_iter()
        .enumerate()
        .map(|(n, m)| {
            direct_limit_fg(&DirectSystem::new(
                level_groups.iter().map(|g| g[n].clone()).collect(),
                m,
                window,
            ))
        })
        .collect::<Result<_>>()?;
    let cech = cech_cohomology_of_hull(seq)?;
    let agrees_with_cech = cech.degrees.len() == degrees.len()
        && cech.degrees.iter().zip(&degrees).all(|(c, p)| c.limit == p.limit && c.status == p.status);
    let certificates = PvCertificates {
        rho_chain_map: dts.iter().map(|d| check_rho_chain_map(d).is_ok()).collect(),
        square_zero: dts.iter().map(|d| check_pv_square_zero(d).is_ok()).collect(),
        theta_range: dts.iter().map(|d| check_theta_ranges(d).is_ok()).collect(),
        theta_partial_isometry: seq
            .connecting_maps
            .iter()
            .enumerate()
            .map(|(l, f)| check_theta_partial_isometries(&dts[l], &dts[l + 1], f).is_ok())
            .collect(),
        agrees_with_cech,
    };
    Ok(PvHull { level_groups, degrees, certificates })
}
