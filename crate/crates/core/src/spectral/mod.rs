//! Exact couples of finitely generated abelian groups, their derived couples
//! and spectral pages.
//!
//! Bidegrees are `(p, n)` with `p` the filtration index and `n ∈ {0, 1}` the
//! total degree mod 2 (coefficients in the K-theory of a point are
//! 2-periodic). The maps have degrees
//!
//! ```text
//! i: D^{p,n} -> D^{p-1,n}      j: D^{p,n} -> E^{p+r-1,n}      k: E^{p,n} -> D^{p+1,n+1}
//! ```
//!
//! at page `r`. Groups are stored for `p_lo <= p <= p_hi`; beyond each end
//! `D` is either zero or constant with `i` the identity, and `E` is zero.

mod filtration;

pub use filtration::{
    cofiltration_couple, couple_from_skeleton_filtration, direct_limit_couples,
    filtration_cofiltration_equivalence, skeleton_couple_morphism, trivial_couple_of, CoupleLimit,
    Equivalence,
};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::abelian::lattice::homomorphism_kernel_lattice;
use crate::abelian::{kernel_and_cokernel, same_lattice, solve, GroupPresentation, IntMatrix, Subquotient};
use crate::error::{Error, Result};

/// `(p, n mod 2)`.
pub type Bidegree = (i64, u8);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Boundary {
    /// `D` vanishes beyond this end.
    Zero,
    /// `D` is constant beyond this end, with `i` the identity.
    Stable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactCouple {
    pub page: usize,
    pub p_lo: i64,
    pub p_hi: i64,
    pub below: Boundary,
    pub above: Boundary,
    pub d: BTreeMap<Bidegree, GroupPresentation>,
    pub e: BTreeMap<Bidegree, GroupPresentation>,
    /// Keyed by source, for `p_lo < p <= p_hi`.
    pub i: BTreeMap<Bidegree, IntMatrix>,
    /// Keyed by source, for `p_lo <= p <= p_hi`.
    pub j: BTreeMap<Bidegree, IntMatrix>,
    /// Keyed by source, for `p_lo <= p <= p_hi`.
    pub k: BTreeMap<Bidegree, IntMatrix>,
}

pub(crate) fn flip(n: u8) -> u8 {
    1 - n
}

fn zero_group() -> GroupPresentation {
    GroupPresentation::zero()
}

pub(crate) fn gens(g: &GroupPresentation) -> usize {
    g.generator_count()
}

/// Whether `f - g` vanishes in the target group.
fn equal_in(f: &IntMatrix, g: &IntMatrix, target: &GroupPresentation) -> Result<bool> {
    let mut diff = f.sub(g)?;
    target.reduce_matrix(&mut diff);
    Ok(diff.is_zero())
}

/// Exactness of `a -f-> x -g-> y` at `x`.
pub(crate) fn exact_at(
    f: &IntMatrix,
    g: &IntMatrix,
    a: &GroupPresentation,
    x: &GroupPresentation,
    y: &GroupPresentation,
) -> Result<bool> {
    if f.cols() != gens(a) || f.rows() != gens(x) || g.cols() != gens(x) || g.rows() != gens(y) {
        return Err(Error::DimensionMismatch("couple map has the wrong shape".into()));
    }
    let image = f.hcat(&x.relations())?;
    let kernel = homomorphism_kernel_lattice(g, x, y);
    Ok(same_lattice(&image, &kernel))
}

fn node_name(kind: &str, (p, n): Bidegree) -> String {
    format!("{kind}^({p},{n})")
}

impl ExactCouple {
    pub fn in_range(&self, p: i64) -> bool {
        self.p_lo <= p && p <= self.p_hi
    }

    pub fn d_group(&self, (p, n): Bidegree) -> GroupPresentation {
        if p < self.p_lo {
            match self.below {
                Boundary::Zero => zero_group(),
                Boundary::Stable => self.d[&(self.p_lo, n)].clone(),
            }
        } else if p > self.p_hi {
            match self.above {
                Boundary::Zero => zero_group(),
                Boundary::Stable => self.d[&(self.p_hi, n)].clone(),
            }
        } else {
            self.d[&(p, n)].clone()
        }
    }

    pub fn e_group(&self, b: Bidegree) -> GroupPresentation {
        self.e.get(&b).cloned().unwrap_or_default()
    }

    /// `i: D^{p,n} -> D^{p-1,n}`.
    pub fn i_map(&self, (p, n): Bidegree) -> IntMatrix {
        if let Some(m) = self.i.get(&(p, n)) {
            return m.clone();
        }
        let (src, dst) = (self.d_group((p, n)), self.d_group((p - 1, n)));
        let stable = (p <= self.p_lo && self.below == Boundary::Stable)
            || (p > self.p_hi && self.above == Boundary::Stable);
        if stable {
            IntMatrix::identity(gens(&src))
        } else {
            IntMatrix::zeros(gens(&dst), gens(&src))
        }
    }

    /// `j: D^{p,n} -> E^{p+page-1,n}`.
    pub fn j_map(&self, (p, n): Bidegree) -> IntMatrix {
        self.j.get(&(p, n)).cloned().unwrap_or_else(|| {
            IntMatrix::zeros(gens(&self.e_group((p + self.page as i64 - 1, n))), gens(&self.d_group((p, n))))
        })
    }

    /// `k: E^{p,n} -> D^{p+1,n+1}`.
    pub fn k_map(&self, (p, n): Bidegree) -> IntMatrix {
        self.k.get(&(p, n)).cloned().unwrap_or_else(|| {
            IntMatrix::zeros(gens(&self.d_group((p + 1, flip(n)))), gens(&self.e_group((p, n))))
        })
    }

    /// `d = j k: E^{p,n} -> E^{p+page,n+1}`.
    pub fn differential(&self, (p, n): Bidegree) -> Result<IntMatrix> {
        self.j_map((p + 1, flip(n))).mul(&self.k_map((p, n)))
    }

    fn shift(&self) -> i64 {
        self.page as i64 - 1
    }

    /// Exactness at every node of the triangle, plus `d d = 0`.
    pub fn validate(&self) -> Result<()> {
        for p in self.p_lo - 1..=self.p_hi + 1 {
            for n in 0..2u8 {
                let (dg, eg) = (self.d_group((p, n)), self.e_group((p, n)));
                // D^{p+1} -i-> D^p -j-> E^{p+r-1}
                if !exact_at(
                    &self.i_map((p + 1, n)),
                    &self.j_map((p, n)),
                    &self.d_group((p + 1, n)),
                    &dg,
                    &self.e_group((p + self.shift(), n)),
                )? {
                    return Err(Error::NotExact(format!("{} (image of i, kernel of j)", node_name("D", (p, n)))));
                }
                // E^{p-1} -k-> D^p -i-> D^{p-1}
                if !exact_at(
                    &self.k_map((p - 1, flip(n))),
                    &self.i_map((p, n)),
                    &self.e_group((p - 1, flip(n))),
                    &dg,
                    &self.d_group((p - 1, n)),
                )? {
                    return Err(Error::NotExact(format!("{} (image of k, kernel of i)", node_name("D", (p, n)))));
                }
                // D^{p-r+1} -j-> E^p -k-> D^{p+1}
                let src = (p - self.shift(), n);
                if !exact_at(
                    &self.j_map(src),
                    &self.k_map((p, n)),
                    &self.d_group(src),
                    &eg,
                    &self.d_group((p + 1, flip(n))),
                )? {
                    return Err(Error::NotExact(format!("{} (image of j, kernel of k)", node_name("E", (p, n)))));
                }
            }
        }
        for p in self.p_lo..=self.p_hi {
            for n in 0..2u8 {
                let d1 = self.differential((p, n))?;
                let d2 = self.differential((p + self.page as i64, flip(n)))?;
                let target = self.e_group((p + 2 * self.page as i64, n));
                if !equal_in(&d2.mul(&d1)?, &IntMatrix::zeros(d2.rows(), d1.cols()), &target)? {
                    return Err(Error::NotExact(format!("d d is not zero at {}", node_name("E", (p, n)))));
                }
            }
        }
        Ok(())
    }

    /// `E = 0` and every `i` an isomorphism.
    pub fn is_trivial(&self) -> bool {
        self.e.values().all(GroupPresentation::is_trivial)
            && self.i.iter().all(|(&b, m)| {
                let (ker, coker) = kernel_and_cokernel(m, &self.d_group(b), &self.d_group((b.0 - 1, b.1)));
                ker.is_trivial() && coker.is_trivial()
            })
    }

    /// The couple `(D, 0, id, 0, 0)` on the given groups.
    pub fn trivial(d: BTreeMap<u8, GroupPresentation>) -> Self {
        let groups: BTreeMap<Bidegree, GroupPresentation> = d.into_iter().map(|(n, g)| ((0, n), g)).collect();
        let e = groups.keys().map(|&b| (b, zero_group())).collect();
        let j = groups.iter().map(|(&b, g)| (b, IntMatrix::zeros(0, gens(g)))).collect();
        let k = groups.keys().map(|&(p, n)| ((p, n), IntMatrix::zeros(gens(&groups[&(p, flip(n))]), 0))).collect();
        ExactCouple {
            page: 1,
            p_lo: 0,
            p_hi: 0,
            below: Boundary::Stable,
            above: Boundary::Stable,
            d: groups,
            e,
            i: BTreeMap::new(),
            j,
            k,
        }
    }

    /// Drops end nodes that the boundary convention already describes.
    pub fn trim(&mut self) {
        let both = |t: &Self, f: &dyn Fn(u8) -> bool| t.p_lo < t.p_hi && (0..2u8).all(f);
        loop {
            let lo = self.p_lo;
            let drop = match self.below {
                Boundary::Stable => both(self, &|n| {
                    self.e_group((lo, n)).is_trivial()
                        && self.e_group((lo + 1, n)).is_trivial()
                        && self.d[&(lo, n)] == self.d[&(lo + 1, n)]
                        && self.i[&(lo + 1, n)] == IntMatrix::identity(gens(&self.d[&(lo, n)]))
                }),
                Boundary::Zero => both(self, &|n| {
                    self.e_group((lo, n)).is_trivial() && self.d[&(lo + 1, n)].is_trivial()
                }),
            };
            if !drop {
                break;
            }
            self.remove_node(lo);
            self.p_lo += 1;
            self.i.retain(|&(p, _), _| p > lo + 1);
        }
        loop {
            let hi = self.p_hi;
            let drop = match self.above {
                Boundary::Stable => both(self, &|n| {
                    self.e_group((hi, n)).is_trivial()
                        && self.e_group((hi - 1, n)).is_trivial()
                        && self.d[&(hi, n)] == self.d[&(hi - 1, n)]
                        && self.i[&(hi, n)] == IntMatrix::identity(gens(&self.d[&(hi, n)]))
                }),
                Boundary::Zero => both(self, &|n| {
                    self.e_group((hi, n)).is_trivial() && self.d[&(hi - 1, n)].is_trivial()
                }),
            };
            if !drop {
                break;
            }
            self.remove_node(hi);
            self.p_hi -= 1;
        }
    }

    fn remove_node(&mut self, p: i64) {
        for n in 0..2u8 {
            self.d.remove(&(p, n));
            self.e.remove(&(p, n));
            self.i.remove(&(p, n));
            self.j.remove(&(p, n));
            self.k.remove(&(p, n));
        }
    }

    pub fn to_json(&self) -> Value {
        let key = |(p, n): &Bidegree| format!("({p},{n})");
        json!({
            "page": self.page,
            "range": [self.p_lo, self.p_hi],
            "below": self.below,
            "above": self.above,
            "D": self.d.iter().map(|(b, g)| (key(b), json!(g))).collect::<serde_json::Map<_, _>>(),
            "E": self.e.iter().map(|(b, g)| (key(b), json!(g))).collect::<serde_json::Map<_, _>>(),
        })
    }
}

/// New coordinates on a subquotient of a node group.
#[derive(Clone, Debug)]
struct Reindex {
    group: GroupPresentation,
    /// Old-coordinate representatives of the new generators.
    gens: IntMatrix,
    quotient: Option<Subquotient>,
}

impl Reindex {
    /// `span(sub) / span(rel)` inside `old`, where both spans contain the
    /// relations of `old`. Keeps the old coordinates when nothing changes.
    fn new(old: &GroupPresentation, sub: &IntMatrix, rel: &IntMatrix, node: &str) -> Result<Self> {
        let g = gens(old);
        let full = IntMatrix::identity(g);
        if same_lattice(sub, &full) && same_lattice(rel, &old.relations()) {
            return Ok(Reindex { group: old.clone(), gens: full, quotient: None });
        }
        let q = Subquotient::new(sub, rel)
            .ok_or_else(|| Error::NotExact(format!("{node}: boundaries are not cycles")))?;
        Ok(Reindex { group: q.group().clone(), gens: q.generators(), quotient: Some(q) })
    }

    fn coords(&self, x: &[BigInt], node: &str) -> Result<Vec<BigInt>> {
        match &self.quotient {
            None => {
                let mut c = x.to_vec();
                self.group.reduce(&mut c);
                Ok(c)
            }
            Some(q) => q.coords(x).ok_or_else(|| Error::NotExact(format!("{node}: element outside the subgroup"))),
        }
    }

    /// Matrix of `f` (old coordinates of the source to old coordinates of
    /// this node) on the generators of `source`.
    fn matrix_of(&self, f: &IntMatrix, source: &Reindex, node: &str) -> Result<IntMatrix> {
        let images = f.mul(&source.gens)?;
        let mut out = IntMatrix::zeros(gens(&self.group), images.cols());
        for c in 0..images.cols() {
            for (r, v) in self.coords(&images.col(c), node)?.into_iter().enumerate() {
                out[(r, c)] = v;
            }
        }
        Ok(out)
    }
}

struct Derived {
    couple: ExactCouple,
    d_index: BTreeMap<Bidegree, Reindex>,
    e_index: BTreeMap<Bidegree, Reindex>,
}

impl Derived {
    /// Reindex of a node outside the stored range: the whole group when `D`
    /// is constant there, nothing otherwise.
    fn d_at(&self, old: &ExactCouple, b: Bidegree) -> Reindex {
        self.d_index.get(&b).cloned().unwrap_or_else(|| {
            let g = old.d_group(b);
            Reindex { gens: IntMatrix::identity(gens(&g)), group: g, quotient: None }
        })
    }

    fn e_at(&self, b: Bidegree) -> Reindex {
        self.e_index
            .get(&b)
            .cloned()
            .unwrap_or(Reindex { group: zero_group(), gens: IntMatrix::zeros(0, 0), quotient: None })
    }
}

fn derive(t: &ExactCouple) -> Result<Derived> {
    t.validate()?;
    let r = t.page as i64;
    let p_lo = if t.below == Boundary::Stable { t.p_lo - 1 } else { t.p_lo };
    let p_hi = t.p_hi;
    let mut d_index = BTreeMap::new();
    let mut e_index = BTreeMap::new();
    for p in p_lo..=p_hi {
        for n in 0..2u8 {
            let old = t.d_group((p, n));
            let rel = old.relations();
            let sub = t.i_map((p + 1, n)).hcat(&rel)?;
            d_index.insert((p, n), Reindex::new(&old, &sub, &rel, &node_name("D", (p, n)))?);
            let eg = t.e_group((p, n));
            let d_out = t.differential((p, n))?;
            let d_in = t.differential((p - r, flip(n)))?;
            let cycles = homomorphism_kernel_lattice(&d_out, &eg, &t.e_group((p + r, flip(n))));
            let boundaries = d_in.hcat(&eg.relations())?;
            e_index.insert((p, n), Reindex::new(&eg, &cycles, &boundaries, &node_name("E", (p, n)))?);
        }
    }
    let mut out = Derived {
        couple: ExactCouple {
            page: t.page + 1,
            p_lo,
            p_hi,
            below: t.below,
            above: t.above,
            d: d_index.iter().map(|(&b, x)| (b, x.group.clone())).collect(),
            e: e_index.iter().map(|(&b, x)| (b, x.group.clone())).collect(),
            i: BTreeMap::new(),
            j: BTreeMap::new(),
            k: BTreeMap::new(),
        },
        d_index,
        e_index,
    };
    let mut i_maps = BTreeMap::new();
    let mut j_maps = BTreeMap::new();
    let mut k_maps = BTreeMap::new();
    for p in p_lo..=p_hi {
        for n in 0..2u8 {
            let here = out.d_at(t, (p, n));
            let name = node_name("D", (p, n));
            if p > p_lo {
                i_maps.insert((p, n), out.d_at(t, (p - 1, n)).matrix_of(&t.i_map((p, n)), &here, &name)?);
            }
            // j'(i x) = j x
            let below = t.d_group((p + 1, n));
            let lift_system = t.i_map((p + 1, n)).hcat(&t.d_group((p, n)).relations())?;
            let target = out.e_at((p + r, n));
            let mut j = IntMatrix::zeros(gens(&target.group), here.gens.cols());
            for c in 0..here.gens.cols() {
                let y = here.gens.col(c);
                let z = solve(&lift_system, &y)
                    .ok_or_else(|| Error::NotExact(format!("{name}: generator is not in the image of i")))?;
                let x = &z[..gens(&below)];
                let image = t.j_map((p + 1, n)).mul_vec(x)?;
                for (row, v) in target.coords(&image, &node_name("E", (p + r, n)))?.into_iter().enumerate() {
                    j[(row, c)] = v;
                }
            }
            j_maps.insert((p, n), j);
            let e_here = out.e_at((p, n));
            let k = out.d_at(t, (p + 1, flip(n))).matrix_of(&t.k_map((p, n)), &e_here, &name)?;
            k_maps.insert((p, n), k);
        }
    }
    out.couple.i = i_maps;
    out.couple.j = j_maps;
    out.couple.k = k_maps;
    out.couple.validate()?;
    out.couple.trim();
    Ok(out)
}

/// The derived couple: `D' = i(D)`, `E' = ker d / im d`, `i' = i|`,
/// `j'(i x) = j x + im d`, `k'[e] = k e`.
pub fn derive_couple(t: &ExactCouple) -> Result<ExactCouple> {
    Ok(derive(t)?.couple)
}

/// Maps `D -> D'` and `E -> E'` between two couples of the same page.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoupleMorphism {
    pub d: BTreeMap<Bidegree, IntMatrix>,
    pub e: BTreeMap<Bidegree, IntMatrix>,
}

impl CoupleMorphism {
    pub fn identity(t: &ExactCouple) -> Self {
        CoupleMorphism {
            d: t.d.iter().map(|(&b, g)| (b, IntMatrix::identity(gens(g)))).collect(),
            e: t.e.iter().map(|(&b, g)| (b, IntMatrix::identity(gens(g)))).collect(),
        }
    }

    pub(crate) fn d_map(&self, b: Bidegree, src: &ExactCouple, dst: &ExactCouple) -> IntMatrix {
        if let Some(m) = self.d.get(&b) {
            return m.clone();
        }
        let (gs, gd) = (src.d_group(b), dst.d_group(b));
        // constant on both sides: continue with the nearest stored map
        let nearest = if b.0 < src.p_lo.min(dst.p_lo) {
            self.d.range(..).find(|(k, _)| k.1 == b.1).map(|(_, m)| m)
        } else {
            self.d.range(..).rev().find(|(k, _)| k.1 == b.1).map(|(_, m)| m)
        };
        match nearest {
            Some(m) if m.cols() == gens(&gs) && m.rows() == gens(&gd) && !gs.is_trivial() && !gd.is_trivial() => m.clone(),
            _ => IntMatrix::zeros(gens(&gd), gens(&gs)),
        }
    }

    pub(crate) fn e_map(&self, b: Bidegree, src: &ExactCouple, dst: &ExactCouple) -> IntMatrix {
        self.e
            .get(&b)
            .cloned()
            .unwrap_or_else(|| IntMatrix::zeros(gens(&dst.e_group(b)), gens(&src.e_group(b))))
    }

    /// Commutation with `i`, `j` and `k` at every node.
    pub fn check(&self, src: &ExactCouple, dst: &ExactCouple) -> Result<()> {
        if src.page != dst.page {
            return Err(Error::NotAMorphism("couples are on different pages".into()));
        }
        let s = src.page as i64 - 1;
        let lo = src.p_lo.min(dst.p_lo) - 1;
        let hi = src.p_hi.max(dst.p_hi) + 1;
        for p in lo..=hi {
            for n in 0..2u8 {
                let b = (p, n);
                let fd = self.d_map(b, src, dst);
                let lhs = self.d_map((p - 1, n), src, dst).mul(&src.i_map(b))?;
                let rhs = dst.i_map(b).mul(&fd)?;
                if !equal_in(&lhs, &rhs, &dst.d_group((p - 1, n)))? {
                    return Err(Error::NotAMorphism(format!("square with i at {}", node_name("D", b))));
                }
                let lhs = self.e_map((p + s, n), src, dst).mul(&src.j_map(b))?;
                let rhs = dst.j_map(b).mul(&fd)?;
                if !equal_in(&lhs, &rhs, &dst.e_group((p + s, n)))? {
                    return Err(Error::NotAMorphism(format!("square with j at {}", node_name("D", b))));
                }
                let lhs = self.d_map((p + 1, flip(n)), src, dst).mul(&src.k_map(b))?;
                let rhs = dst.k_map(b).mul(&self.e_map(b, src, dst))?;
                if !equal_in(&lhs, &rhs, &dst.d_group((p + 1, flip(n))))? {
                    return Err(Error::NotAMorphism(format!("square with k at {}", node_name("E", b))));
                }
            }
        }
        Ok(())
    }

    /// Whether every `E` component is an isomorphism.
    pub fn is_e_isomorphism(&self, src: &ExactCouple, dst: &ExactCouple) -> bool {
        let keys: std::collections::BTreeSet<Bidegree> = src.e.keys().chain(dst.e.keys()).copied().collect();
        keys.into_iter().all(|b| {
            let (ker, coker) = kernel_and_cokernel(&self.e_map(b, src, dst), &src.e_group(b), &dst.e_group(b));
            ker.is_trivial() && coker.is_trivial()
        })
    }
}

/// Derivation applied to a morphism: the derived couples and the induced
/// morphism between them.
pub fn derive_morphism(
    f: &CoupleMorphism,
    src: &ExactCouple,
    dst: &ExactCouple,
) -> Result<(ExactCouple, ExactCouple, CoupleMorphism)> {
    f.check(src, dst)?;
    let (ds, dd) = (derive(src)?, derive(dst)?);
    let lo = ds.couple.p_lo.min(dd.couple.p_lo);
    let hi = ds.couple.p_hi.max(dd.couple.p_hi);
    let mut out = CoupleMorphism { d: BTreeMap::new(), e: BTreeMap::new() };
    for p in lo..=hi {
        for n in 0..2u8 {
            let b = (p, n);
            let name = node_name("D", b);
            out.d.insert(b, dd.d_at(dst, b).matrix_of(&f.d_map(b, src, dst), &ds.d_at(src, b), &name)?);
            out.e.insert(b, dd.e_at(b).matrix_of(&f.e_map(b, src, dst), &ds.e_at(b), &node_name("E", b))?);
        }
    }
    out.check(&ds.couple, &dd.couple)?;
    Ok((ds.couple, dd.couple, out))
}

/// One page `E_r` with its differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Page {
    pub page: usize,
    /// Keyed by `(p, s)` with `s = n - p mod 2`.
    pub entries: BTreeMap<(i64, u8), GroupPresentation>,
    /// `d_r` keyed by source `(p, s)`, on nonzero source and target.
    pub differentials: BTreeMap<(i64, u8), IntMatrix>,
}

impl Page {
    pub fn to_json(&self) -> Value {
        json!({
            "page": self.page,
            "entries": self.entries.iter().map(|((p, s), g)| (format!("({p},{s})"), json!(g))).collect::<serde_json::Map<_, _>>(),
            "differentials": self.differentials.iter().map(|((p, s), m)| (format!("({p},{s})"), json!(m))).collect::<serde_json::Map<_, _>>(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralPages {
    pub pages: Vec<Page>,
    /// First page from which every differential vanishes, once the
    /// computed pages reach past the width of the support.
    pub converged_at: Option<usize>,
    pub final_couple: ExactCouple,
}

fn s_of(p: i64, n: u8) -> u8 {
    (n as i64 - p).rem_euclid(2) as u8
}

impl SpectralPages {
    pub fn last(&self) -> &Page {
        self.pages.last().expect("at least one page")
    }

    /// `K^0` and `K^1` as direct sums along the filtration, when the last
    /// page is free and its odd row vanishes.
    pub fn assemble_k_groups(&self) -> Option<[GroupPresentation; 2]> {
        self.converged_at?;
        let last = self.last();
        if last.entries.iter().any(|(&(_, s), g)| !g.is_free() || (s == 1 && !g.is_trivial())) {
            return None;
        }
        let mut k = [0usize; 2];
        for (&(p, _), g) in &last.entries {
            k[p.rem_euclid(2) as usize] += g.rank;
        }
        Some([GroupPresentation::free(k[0]), GroupPresentation::free(k[1])])
    }

    pub fn to_json(&self) -> Value {
        let mut out = json!({
            "pages": self.pages.iter().map(Page::to_json).collect::<Vec<_>>(),
            "converged_at": self.converged_at,
        });
        if let Some([k0, k1]) = self.assemble_k_groups() {
            out["k_groups"] = json!({"K0": k0, "K1": k1});
        }
        out
    }
}

fn page_of(t: &ExactCouple, support: (i64, i64)) -> Result<Page> {
    let mut entries = BTreeMap::new();
    let mut differentials = BTreeMap::new();
    for p in support.0..=support.1 {
        for n in 0..2u8 {
            let g = t.e_group((p, n));
            let d = t.differential((p, n))?;
            let target = t.e_group((p + t.page as i64, flip(n)));
            let mut reduced = d.clone();
            target.reduce_matrix(&mut reduced);
            if !reduced.is_zero() {
                differentials.insert((p, s_of(p, n)), reduced);
            }
            entries.insert((p, s_of(p, n)), g);
        }
    }
    Ok(Page { page: t.page, entries, differentials })
}

/// Successive derived couples of `t` until every later differential is known
/// to vanish, or `max_page` pages have been computed.
pub fn pages(t: &ExactCouple, max_page: usize) -> Result<SpectralPages> {
    if max_page == 0 {
        return Err(Error::Invalid("max_page must be positive".into()));
    }
    t.validate()?;
    let nonzero: Vec<i64> = t.e.iter().filter(|(_, g)| !g.is_trivial()).map(|(&(p, _), _)| p).collect();
    let support = match (nonzero.iter().min(), nonzero.iter().max()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => (t.p_lo, t.p_lo),
    };
    let width = (support.1 - support.0) as usize;
    let mut current = t.clone();
    let mut out = Vec::new();
    let mut last_nonzero = 0;
    loop {
        let page = page_of(&current, support)?;
        if !page.differentials.is_empty() {
            last_nonzero = page.page;
        }
        out.push(page);
        // d_r shifts p by r, so nothing can move once r exceeds the width
        if current.page > width && current.page > last_nonzero {
            break;
        }
        if current.page >= max_page {
            break;
        }
        current = derive_couple(&current)?;
        check_homology(&out[out.len() - 1], &current, support)?;
    }
    let converged_at = (current.page > width).then_some(last_nonzero + 1);
    let pages: Vec<Page> = match converged_at {
        Some(c) => out.into_iter().filter(|pg| pg.page <= c.max(1)).collect(),
        None => out,
    };
    Ok(SpectralPages { pages, converged_at, final_couple: current })
}

/// `E_{r+1}` is the homology of `(E_r, d_r)`, computed from the page alone.
fn check_homology(prev: &Page, next: &ExactCouple, support: (i64, i64)) -> Result<()> {
    let r = prev.page as i64;
    for p in support.0..=support.1 {
        for n in 0..2u8 {
            let key = (p, s_of(p, n));
            let g = &prev.entries[&key];
            let zero_out = |q: i64, m: u8| {
                IntMatrix::zeros(
                    prev.entries.get(&(q, s_of(q, m))).map_or(0, gens),
                    gens(g),
                )
            };
            let d_out = prev.differentials.get(&key).cloned().unwrap_or_else(|| zero_out(p + r, flip(n)));
            let src = (p - r, s_of(p - r, flip(n)));
            let src_group = prev.entries.get(&src).cloned().unwrap_or_default();
            let d_in = prev.differentials.get(&src).cloned().unwrap_or_else(|| IntMatrix::zeros(gens(g), gens(&src_group)));
            let target = prev.entries.get(&(p + r, s_of(p + r, flip(n)))).cloned().unwrap_or_default();
            let cycles = homomorphism_kernel_lattice(&d_out, g, &target);
            let homology = Subquotient::new(&cycles, &d_in.hcat(&g.relations())?)
                .ok_or_else(|| Error::NotExact(format!("page {}: d d is not zero", prev.page)))?;
            if homology.group() != &next.e_group((p, n)) {
                return Err(Error::NotExact(format!(
                    "page {} is not the homology of page {} at ({p},{})",
                    prev.page + 1,
                    prev.page,
                    key.1
                )));
            }
        }
    }
    Ok(())
}
