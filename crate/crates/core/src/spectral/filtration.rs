//! Couples of a finite Δ-complex: the skeleton filtration, the skeleton
//! cofiltration, the trivial couple between them, and direct limits along
//! cellular maps.
//!
//! With 2-periodic point coefficients the cochains form a Z/2-graded complex
//! `A^n = ⊕_{r ≡ n} C^r`. The filtration is `F^p = ⊕_{r >= p} C^r` (cochains
//! vanishing on the `(p-1)`-skeleton) and the cofiltration is
//! `G_q = A / F^{q+1}` (cochains on the `q`-skeleton).

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::{exact_at, flip, gens, Bidegree, Boundary, CoupleMorphism, ExactCouple};
use crate::abelian::{direct_limit_fg, CohomologyBasis, DirectLimit, DirectSystem, IntMatrix, LimitStatus};
use crate::delta_complex::{CellularMap, DeltaComplex};
use crate::error::{Error, Result};

/// The Z/2-graded cochain complex of a Δ-complex.
struct Graded {
    dims: Vec<usize>,
    /// `deltas[r]: C^r -> C^{r+1}`.
    deltas: Vec<IntMatrix>,
}

impl Graded {
    fn new(k: &DeltaComplex) -> Result<Self> {
        k.validate().into_result()?;
        Ok(Graded { dims: k.counts(), deltas: k.coboundaries()? })
    }

    fn top(&self) -> i64 {
        self.dims.len() as i64 - 1
    }

    /// Degrees `r` of parity `n` with `lo <= r <= hi`.
    fn blocks(&self, n: u8, lo: i64, hi: i64) -> Vec<usize> {
        (lo.max(0)..=hi.min(self.top())).filter(|r| r.rem_euclid(2) == n as i64).map(|r| r as usize).collect()
    }

    fn size(&self, blocks: &[usize]) -> usize {
        blocks.iter().map(|&r| self.dims[r]).sum()
    }

    fn offset(&self, blocks: &[usize], r: usize) -> Option<usize> {
        let pos = blocks.iter().position(|&x| x == r)?;
        Some(blocks[..pos].iter().map(|&x| self.dims[x]).sum())
    }

    /// The coboundary from the span of `src` to the span of `dst`, dropping
    /// components outside `dst`.
    fn delta(&self, src: &[usize], dst: &[usize]) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.size(dst), self.size(src));
        for &r in src {
            if let (Some(c), Some(row)) = (self.offset(src, r), self.offset(dst, r + 1)) {
                m.set_block(row, c, &self.deltas[r]);
            }
        }
        m
    }

    /// Inclusion of the span of `sub` into the span of `big`.
    fn embed(&self, sub: &[usize], big: &[usize]) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.size(big), self.size(sub));
        for &r in sub {
            if let (Some(c), Some(row)) = (self.offset(sub, r), self.offset(big, r)) {
                m.set_block(row, c, &IntMatrix::identity(self.dims[r]));
            }
        }
        m
    }

    /// Cohomology in parity `n` of the subquotient spanned by degrees
    /// `lo..=hi`.
    fn cohomology(&self, n: u8, lo: i64, hi: i64) -> Result<CohomologyBasis> {
        let (prev, here, next) = (self.blocks(flip(n), lo, hi), self.blocks(n, lo, hi), self.blocks(flip(n), lo, hi));
        CohomologyBasis::new(&self.delta(&prev, &here), &self.delta(&here, &next))
    }

    fn e_rank(&self, (p, n): Bidegree) -> usize {
        if p >= 0 && p <= self.top() && p.rem_euclid(2) == n as i64 {
            self.dims[p as usize]
        } else {
            0
        }
    }
}

fn classes(basis: &CohomologyBasis, cocycles: &IntMatrix) -> Result<IntMatrix> {
    let mut out = IntMatrix::zeros(basis.group().generator_count(), cocycles.cols());
    for c in 0..cocycles.cols() {
        for (r, v) in basis.class_of(&cocycles.col(c))?.into_iter().enumerate() {
            out[(r, c)] = v;
        }
    }
    Ok(out)
}

fn free_e(g: &Graded, lo: i64, hi: i64) -> BTreeMap<Bidegree, crate::abelian::GroupPresentation> {
    let mut e = BTreeMap::new();
    for p in lo..=hi {
        for n in 0..2u8 {
            e.insert((p, n), crate::abelian::GroupPresentation::free(g.e_rank((p, n))));
        }
    }
    e
}

/// The filtration data: `D^{p,n} = H^n(F^p)`.
struct FiltrationData {
    graded: Graded,
    bases: BTreeMap<Bidegree, CohomologyBasis>,
}

impl FiltrationData {
    fn new(k: &DeltaComplex) -> Result<Self> {
        let graded = Graded::new(k)?;
        let m = graded.top();
        let mut bases = BTreeMap::new();
        for p in -1..=m + 1 {
            for n in 0..2u8 {
                bases.insert((p, n), graded.cohomology(n, p, m)?);
            }
        }
        Ok(FiltrationData { graded, bases })
    }

    fn f_blocks(&self, (p, n): Bidegree) -> Vec<usize> {
        self.graded.blocks(n, p, self.graded.top())
    }

    fn couple(&self) -> Result<ExactCouple> {
        let g = &self.graded;
        let m = g.top();
        let (lo, hi) = (-1, m + 1);
        let mut t = ExactCouple {
            page: 1,
            p_lo: lo,
            p_hi: hi,
            below: Boundary::Stable,
            above: Boundary::Zero,
            d: self.bases.iter().map(|(&b, x)| (b, x.group().clone())).collect(),
            e: free_e(g, lo, hi),
            i: BTreeMap::new(),
            j: BTreeMap::new(),
            k: BTreeMap::new(),
        };
        for p in lo..=hi {
            for n in 0..2u8 {
                let b = (p, n);
                let here = &self.bases[&b];
                if p > lo {
                    let incl = g.embed(&self.f_blocks(b), &self.f_blocks((p - 1, n)));
                    t.i.insert(b, here.induced_map(&incl, &self.bases[&(p - 1, n)])?);
                }
                let e_rank = g.e_rank(b);
                let j = if e_rank > 0 {
                    g.embed(&[p as usize], &self.f_blocks(b)).transpose().mul(&here.representatives())?
                } else {
                    IntMatrix::zeros(0, here.group().generator_count())
                };
                t.j.insert(b, j);
                let target = (p + 1, flip(n));
                let k = if e_rank > 0 && p < m {
                    let de = g.delta(&[p as usize], &self.f_blocks(target));
                    classes(&self.bases[&target], &de)?
                } else {
                    IntMatrix::zeros(gens(&t.d_group(target)), e_rank)
                };
                t.k.insert(b, k);
            }
        }
        t.validate()?;
        Ok(t)
    }
}

/// The couple of the skeleton filtration: `D_1^{p,n} = H^n(F^p)`,
/// `E_1^{p,n} = C^p` when `p ≡ n` and `0` otherwise; `d_1` is the coboundary.
pub fn couple_from_skeleton_filtration(k: &DeltaComplex) -> Result<ExactCouple> {
    FiltrationData::new(k)?.couple()
}

/// The cofiltration data: `D^{p,n} = H^{n-1}(G_{p-1})`.
struct CofiltrationData {
    graded: Graded,
    bases: BTreeMap<Bidegree, CohomologyBasis>,
}

impl CofiltrationData {
    fn new(k: &DeltaComplex) -> Result<Self> {
        let graded = Graded::new(k)?;
        let m = graded.top();
        let mut bases = BTreeMap::new();
        for p in 0..=m + 1 {
            for n in 0..2u8 {
                bases.insert((p, n), graded.cohomology(flip(n), 0, p - 1)?);
            }
        }
        Ok(CofiltrationData { graded, bases })
    }

    fn g_blocks(&self, (p, n): Bidegree) -> Vec<usize> {
        self.graded.blocks(flip(n), 0, p - 1)
    }

    fn couple(&self) -> Result<ExactCouple> {
        let g = &self.graded;
        let m = g.top();
        let (lo, hi) = (0, m + 1);
        let mut t = ExactCouple {
            page: 1,
            p_lo: lo,
            p_hi: hi,
            below: Boundary::Zero,
            above: Boundary::Stable,
            d: self.bases.iter().map(|(&b, x)| (b, x.group().clone())).collect(),
            e: free_e(g, lo, hi),
            i: BTreeMap::new(),
            j: BTreeMap::new(),
            k: BTreeMap::new(),
        };
        for p in lo..=hi {
            for n in 0..2u8 {
                let b = (p, n);
                let here = &self.bases[&b];
                if p > lo {
                    let restrict = g.embed(&self.g_blocks((p - 1, n)), &self.g_blocks(b)).transpose();
                    t.i.insert(b, here.induced_map(&restrict, &self.bases[&(p - 1, n)])?);
                }
                let e_rank = g.e_rank(b);
                let j = if e_rank > 0 {
                    g.delta(&self.g_blocks(b), &[p as usize]).mul(&here.representatives())?
                } else {
                    IntMatrix::zeros(0, here.group().generator_count())
                };
                t.j.insert(b, j);
                let target = (p + 1, flip(n));
                let k = if e_rank > 0 {
                    classes(&self.bases[&target], &g.embed(&[p as usize], &self.g_blocks(target)))?
                } else {
                    IntMatrix::zeros(gens(&t.d_group(target)), e_rank)
                };
                t.k.insert(b, k);
            }
        }
        t.validate()?;
        Ok(t)
    }
}

/// The couple of the skeleton cofiltration
/// `0 -> F^p/F^{p+1} -> G_p -> G_{p-1} -> 0`, indexed so that its maps have
/// the same degrees as the filtration couple: `D^{p,n} = H^{n-1}(G_{p-1})`.
pub fn cofiltration_couple(k: &DeltaComplex) -> Result<ExactCouple> {
    CofiltrationData::new(k)?.couple()
}

/// `(H^*(A), 0, id, 0, 0)`.
pub fn trivial_couple_of(k: &DeltaComplex) -> Result<ExactCouple> {
    let g = Graded::new(k)?;
    let m = g.top();
    let groups = (0..2u8).map(|n| Ok((n, g.cohomology(n, 0, m)?.group().clone()))).collect::<Result<_>>()?;
    let t = ExactCouple::trivial(groups);
    t.validate()?;
    Ok(t)
}

/// The filtration and cofiltration couples linked through the trivial
/// couple: `D_I -> D_A -> D_F[1] -> D_I[1]` is exact, and the connecting map
/// `Φ: T_F -> T_I` is a morphism that is an isomorphism on `E` at every page.
#[derive(Clone, Debug)]
pub struct Equivalence {
    pub filtration: ExactCouple,
    pub cofiltration: ExactCouple,
    pub trivial: ExactCouple,
    /// `T_F -> T_I` at page 1.
    pub morphism: CoupleMorphism,
    /// `T_I -> T_A`.
    pub to_trivial: CoupleMorphism,
    pub triangle_exact: bool,
    /// The `E` components of the derived morphisms, page by page.
    pub e_isomorphisms: Vec<BTreeMap<Bidegree, IntMatrix>>,
}

impl Equivalence {
    pub fn to_json(&self) -> Value {
        json!({
            "triangle_exact": self.triangle_exact,
            "trivial_couple_is_trivial": self.trivial.is_trivial(),
            "pages": self.e_isomorphisms.iter().enumerate().map(|(r, m)| json!({
                "page": r + 1,
                "e_isomorphism": m.iter().filter(|(_, x)| x.rows() + x.cols() > 0)
                    .map(|((p, n), x)| (format!("({p},{n})"), json!(x))).collect::<serde_json::Map<_, _>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn filtration_cofiltration_equivalence(k: &DeltaComplex, max_page: usize) -> Result<Equivalence> {
    let fi = FiltrationData::new(k)?;
    let co = CofiltrationData::new(k)?;
    let (t_i, t_f, t_a) = (fi.couple()?, co.couple()?, trivial_couple_of(k)?);
    let g = &fi.graded;
    let m = g.top();
    let all = |n: u8| g.blocks(n, 0, m);
    let a_bases: Vec<CohomologyBasis> = (0..2u8).map(|n| g.cohomology(n, 0, m)).collect::<Result<_>>()?;

    let mut phi = CoupleMorphism { d: BTreeMap::new(), e: BTreeMap::new() };
    let mut psi = CoupleMorphism { d: BTreeMap::new(), e: BTreeMap::new() };
    let mut triangle_exact = true;
    for p in -1..=m + 1 {
        for n in 0..2u8 {
            let b = (p, n);
            // Φ: lift a cocycle of G_{p-1}, apply δ, land in F^p
            let phi_d = if p >= 0 {
                let cb = &co.bases[&b];
                let cob = g.delta(&co.g_blocks(b), &fi.f_blocks(b)).mul(&cb.representatives())?;
                classes(&fi.bases[&b], &cob)?
            } else {
                IntMatrix::zeros(gens(&t_i.d_group(b)), 0)
            };
            phi.d.insert(b, phi_d.clone());
            phi.e.insert(b, IntMatrix::identity(g.e_rank(b)));
            let incl = g.embed(&fi.f_blocks(b), &all(n));
            let psi_d = fi.bases[&b].induced_map(&incl, &a_bases[n as usize])?;
            psi.d.insert(b, psi_d.clone());
            psi.e.insert(b, IntMatrix::zeros(0, g.e_rank(b)));
            // χ: restrict a cocycle of A to the (p-1)-skeleton
            let fb = (p, flip(n));
            let chi_d = if p >= 0 {
                let restrict = g.embed(&co.g_blocks(fb), &all(n)).transpose();
                a_bases[n as usize].induced_map(&restrict, &co.bases[&fb])?
            } else {
                IntMatrix::zeros(0, gens(a_bases[n as usize].group()))
            };
            let phi_next = if p >= 0 {
                let cb = &co.bases[&fb];
                let cob = g.delta(&co.g_blocks(fb), &fi.f_blocks(fb)).mul(&cb.representatives())?;
                classes(&fi.bases[&fb], &cob)?
            } else {
                IntMatrix::zeros(gens(&t_i.d_group(fb)), 0)
            };
            let a_group = a_bases[n as usize].group();
            let (d_i, d_f, d_i_next) = (t_i.d_group(b), t_f.d_group(fb), t_i.d_group(fb));
            let a_next = a_bases[flip(n) as usize].group();
            let psi_next = fi.bases[&fb].induced_map(&g.embed(&fi.f_blocks(fb), &all(flip(n))), &a_bases[flip(n) as usize])?;
            triangle_exact &= exact_at(&psi_d, &chi_d, &d_i, a_group, &d_f)?
                && exact_at(&chi_d, &phi_next, a_group, &d_f, &d_i_next)?
                && exact_at(&phi_next, &psi_next, &d_f, &d_i_next, a_next)?;
        }
    }
    if !triangle_exact {
        return Err(Error::NotExact("the triangle through the trivial couple is not exact".into()));
    }
    psi.check(&t_i, &t_a)?;
    if !t_a.is_trivial() {
        return Err(Error::NotExact("the middle couple is not trivial".into()));
    }
    let (mut src, mut dst, mut f) = (t_f.clone(), t_i.clone(), phi.clone());
    f.check(&src, &dst)?;
    let mut e_isomorphisms = Vec::new();
    loop {
        if !f.is_e_isomorphism(&src, &dst) {
            return Err(Error::NotAMorphism(format!("page {}: E components are not isomorphisms", src.page)));
        }
        e_isomorphisms.push(f.e.clone());
        if src.page >= max_page {
            break;
        }
        let (s, d, g2) = super::derive_morphism(&f, &src, &dst)?;
        src = s;
        dst = d;
        f = g2;
    }
    Ok(Equivalence {
        filtration: t_i,
        cofiltration: t_f,
        trivial: t_a,
        morphism: phi,
        to_trivial: psi,
        triangle_exact,
        e_isomorphisms,
    })
}

/// The morphism of filtration couples `T(target) -> T(source)` induced by the
/// pullback of a cellular map `source -> target`.
pub fn skeleton_couple_morphism(f: &CellularMap, source: &DeltaComplex, target: &DeltaComplex) -> Result<CoupleMorphism> {
    f.check(source, target)?;
    let (s, t) = (FiltrationData::new(source)?, FiltrationData::new(target)?);
    let top = s.graded.top().max(t.graded.top());
    let pull = |r: usize| f.pullback(r, target.count(r));
    let mut out = CoupleMorphism { d: BTreeMap::new(), e: BTreeMap::new() };
    for p in -1..=top + 1 {
        for n in 0..2u8 {
            let b = (p, n);
            let (tb, sb) = (t.f_blocks(b), s.f_blocks(b));
            let mut cochain = IntMatrix::zeros(s.graded.size(&sb), t.graded.size(&tb));
            for &r in &tb {
                if let (Some(c), Some(row)) = (t.graded.offset(&tb, r), s.graded.offset(&sb, r)) {
                    cochain.set_block(row, c, &pull(r));
                }
            }
            match (t.bases.get(&b), s.bases.get(&b)) {
                (Some(tb), Some(sb)) => {
                    out.d.insert(b, tb.induced_map(&cochain, sb)?);
                }
                (src, dst) => {
                    let rows = dst.map_or(0, |x| x.group().generator_count());
                    let cols = src.map_or(0, |x| x.group().generator_count());
                    out.d.insert(b, IntMatrix::zeros(rows, cols));
                }
            }
            let (re, ce) = (s.graded.e_rank(b), t.graded.e_rank(b));
            out.e.insert(b, if re > 0 && ce > 0 { pull(p as usize) } else { IntMatrix::zeros(re, ce) });
        }
    }
    Ok(out)
}

/// The direct limit of `T_0 -> T_1 -> ...`, computed bidegree by bidegree.
#[derive(Clone, Debug)]
pub struct CoupleLimit {
    /// A stage isomorphic to the limit when every bidegree stabilized; the
    /// last stage otherwise.
    pub couple: ExactCouple,
    pub d: BTreeMap<Bidegree, DirectLimit>,
    pub e: BTreeMap<Bidegree, DirectLimit>,
    pub status: LimitStatus,
}

pub fn direct_limit_couples(couples: &[ExactCouple], morphisms: &[CoupleMorphism]) -> Result<CoupleLimit> {
    if couples.is_empty() {
        return Err(Error::EmptySystem);
    }
    if morphisms.len() + 1 != couples.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} couples need {} morphisms, got {}",
            couples.len(),
            couples.len() - 1,
            morphisms.len()
        )));
    }
    for (l, f) in morphisms.iter().enumerate() {
        f.check(&couples[l], &couples[l + 1])
            .map_err(|e| Error::NotAMorphism(format!("morphism {l}: {e}")))?;
    }
    let lo = couples.iter().map(|t| t.p_lo).min().expect("nonempty");
    let hi = couples.iter().map(|t| t.p_hi).max().expect("nonempty");
    let mut d = BTreeMap::new();
    let mut e = BTreeMap::new();
    for p in lo..=hi {
        for n in 0..2u8 {
            let b = (p, n);
            let dg = couples.iter().map(|t| t.d_group(b)).collect();
            let dm = morphisms.iter().enumerate().map(|(l, f)| f.d_map(b, &couples[l], &couples[l + 1])).collect();
            d.insert(b, direct_limit_fg(&DirectSystem::new(dg, dm, 2))?);
            let eg = couples.iter().map(|t| t.e_group(b)).collect();
            let em = morphisms.iter().enumerate().map(|(l, f)| f.e_map(b, &couples[l], &couples[l + 1])).collect();
            e.insert(b, direct_limit_fg(&DirectSystem::new(eg, em, 2))?);
        }
    }
    let stabilized = d.values().chain(e.values()).all(|x| x.status == LimitStatus::Stabilized);
    let couple = couples.last().expect("nonempty").clone();
    couple.validate()?;
    Ok(CoupleLimit {
        couple,
        d,
        e,
        status: if stabilized { LimitStatus::Stabilized } else { LimitStatus::NotStabilized },
    })
}
