//! The Z^d PV complex `C(X, Z) ⊗ Λ* Z^d` of a Cantor Z^d system presented by
//! its allowed box patterns, its torus-cell form, and their cohomology along
//! increasing resolutions.
//!
//! At resolution `R`, the component `e_S` of degree `|S|` consists of
//! cylinder functions on the box `[0, R]^d` enlarged by one in each direction
//! of `S`. Then `α_i^*` and the refinement both map the `e_S` box onto the
//! `e_{S ∪ {i}}` box, so `d = Σ_i (α_i^* - 1) ⊗ e_i ∧` is an exact integer
//! matrix with `d d = 0`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::abelian::{
    complex_cohomology, direct_limit_fg, CohomologyBasis, DirectLimit, DirectSystem,
    GroupPresentation, IntMatrix,
};
use crate::error::{Error, Result};
use crate::tiling::{factors, TilingSpec};

/// A box pattern, flattened in row-major order (last axis fastest).
pub type BoxPattern = Vec<u32>;

/// Largest dimension accepted from system files.
pub const MAX_DIM: usize = 8;

const MAX_PRODUCT_ALPHABET: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Language {
    /// The one-point system.
    Point,
    /// A one-dimensional subshift read off a sample word; box patterns are
    /// its factors.
    Word { letters: Vec<char> },
    /// Explicit allowed patterns on cubes, keyed by side length.
    Cubes { alphabet: Vec<char>, by_side: BTreeMap<usize, BTreeSet<BoxPattern>> },
    /// Product of systems acting on complementary coordinates.
    Product(Vec<CantorZdSystem>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CantorZdSystem {
    pub d: usize,
    pub language: Language,
}

fn box_len(sizes: &[usize]) -> usize {
    sizes.iter().product()
}

fn for_each_point(sizes: &[usize], mut f: impl FnMut(&[usize])) {
    if sizes.contains(&0) {
        return;
    }
    let mut m = vec![0; sizes.len()];
    loop {
        f(&m);
        let mut a = sizes.len();
        loop {
            if a == 0 {
                return;
            }
            a -= 1;
            m[a] += 1;
            if m[a] < sizes[a] {
                break;
            }
            m[a] = 0;
        }
    }
}

fn flat_index(m: &[usize], sizes: &[usize]) -> usize {
    m.iter().zip(sizes).fold(0, |acc, (&x, &s)| acc * s + x)
}

/// The sub-box of `p` (on a box of `sizes`) with corner `offset` and sizes
/// `sub`.
pub fn restrict(p: &[u32], sizes: &[usize], offset: &[usize], sub: &[usize]) -> BoxPattern {
    let mut out = Vec::with_capacity(box_len(sub));
    let mut shifted = vec![0; sizes.len()];
    for_each_point(sub, |m| {
        for a in 0..m.len() {
            shifted[a] = m[a] + offset[a];
        }
        out.push(p[flat_index(&shifted, sizes)]);
    });
    out
}

impl CantorZdSystem {
    pub fn point(d: usize) -> Self {
        CantorZdSystem { d, language: Language::Point }
    }

    pub fn from_word(letters: Vec<char>) -> Self {
        CantorZdSystem { d: 1, language: Language::Word { letters } }
    }

    pub fn product(factors: Vec<CantorZdSystem>) -> Self {
        CantorZdSystem { d: factors.iter().map(|f| f.d).sum(), language: Language::Product(factors) }
    }

    /// Explicit system from allowed cube patterns; checks that restricting
    /// each side's patterns to every unit-shifted smaller cube gives one and
    /// the same set.
    pub fn from_cubes(d: usize, alphabet: Vec<char>, by_side: BTreeMap<usize, BTreeSet<BoxPattern>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        if by_side.is_empty() {
            return Err(Error::Invalid("no allowed patterns".into()));
        }
        for (&side, pats) in &by_side {
            if side == 0 || pats.is_empty() {
                return Err(Error::Invalid(format!("side {side} has no patterns")));
            }
            for p in pats {
                if p.len() != side.pow(d as u32) || p.iter().any(|&x| x as usize >= alphabet.len()) {
                    return Err(Error::Invalid(format!("malformed pattern of side {side}")));
                }
            }
            if side > 1 {
                let sizes = vec![side; d];
                let sub = vec![side - 1; d];
                let mut sets = Vec::new();
                for_each_point(&[2; 16][..d], |o| {
                    sets.push(pats.iter().map(|p| restrict(p, &sizes, o, &sub)).collect::<BTreeSet<_>>());
                });
                if sets.windows(2).any(|w| w[0] != w[1]) {
                    return Err(Error::Invalid(format!("patterns of side {side} are not shift invariant")));
                }
                if let Some(smaller) = by_side.get(&(side - 1)) {
                    if smaller != &sets[0] {
                        return Err(Error::Invalid(format!(
                            "patterns of side {side} do not restrict to those of side {}",
                            side - 1
                        )));
                    }
                }
            }
        }
        Ok(CantorZdSystem { d, language: Language::Cubes { alphabet, by_side } })
    }

    pub fn alphabet_size(&self) -> usize {
        match &self.language {
            Language::Point => 1,
            Language::Word { letters } => letters.iter().collect::<BTreeSet<_>>().len(),
            Language::Cubes { alphabet, .. } => alphabet.len(),
            Language::Product(fs) => {
                fs.iter().map(CantorZdSystem::alphabet_size).fold(1usize, usize::saturating_mul)
            }
        }
    }

    /// All allowed patterns on the box `[0, sizes)`, sorted.
    pub fn box_patterns(&self, sizes: &[usize]) -> Result<Vec<BoxPattern>> {
        if sizes.len() != self.d {
            return Err(Error::DimensionMismatch(format!("box of dimension {} in a Z^{} system", sizes.len(), self.d)));
        }
        match &self.language {
            Language::Point => Ok(vec![vec![0; box_len(sizes)]]),
            Language::Word { letters } => {
                let n = sizes[0];
                let alphabet: Vec<char> = letters.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
                let all = factors(letters, n);
                if letters.len() < 4 * n.max(1) || factors(&letters[..letters.len() / 2], n).len() != all.len() {
                    return Err(Error::InsufficientSample(format!("factors of length {n} are not certified")));
                }
                Ok(all
                    .keys()
                    .map(|w| w.iter().map(|c| alphabet.binary_search(c).expect("letter") as u32).collect())
                    .collect())
            }
            Language::Cubes { by_side, .. } => {
                let need = sizes.iter().copied().max().unwrap_or(0);
                let (&side, pats) = by_side
                    .range(need..)
                    .next()
                    .ok_or(Error::ResolutionUnavailable(need))?;
                let full = vec![side; self.d];
                let zero = vec![0; self.d];
                let set: BTreeSet<BoxPattern> = pats.iter().map(|p| restrict(p, &full, &zero, sizes)).collect();
                Ok(set.into_iter().collect())
            }
            Language::Product(fs) => {
                let mut parts: Vec<(Vec<BoxPattern>, Vec<usize>, usize)> = Vec::new();
                let mut start = 0;
                for f in fs {
                    let s = sizes[start..start + f.d].to_vec();
                    parts.push((f.box_patterns(&s)?, s, start));
                    start += f.d;
                }
                let radices: Vec<u32> = fs.iter().map(|f| f.alphabet_size() as u32).collect();
                let mut out = Vec::new();
                let mut choice = vec![0usize; parts.len()];
                loop {
                    let mut p = Vec::with_capacity(box_len(sizes));
                    for_each_point(sizes, |m| {
                        let mut sym = 0u32;
                        for (j, (pats, s, st)) in parts.iter().enumerate() {
                            let local = &m[*st..*st + s.len()];
                            sym = sym * radices[j] + pats[choice[j]][flat_index(local, s)];
                        }
                        p.push(sym);
                    });
                    out.push(p);
                    let mut j = parts.len();
                    loop {
                        if j == 0 {
                            out.sort();
                            return Ok(out);
                        }
                        j -= 1;
                        choice[j] += 1;
                        if choice[j] < parts[j].0.len() {
                            break;
                        }
                        choice[j] = 0;
                    }
                }
            }
        }
    }

    /// System file: `{"d", "alphabet", "allowed_patterns": {"side": [...]}}`,
    /// `{"from_tiling": <tiling spec>, "d": 1}` or `{"product": [...]}`.
    /// A pattern is a string for `d = 1` and nested arrays of strings
    /// (last axis innermost) otherwise.
    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("system must be an object".into()))?;
        if let Some(fs) = obj.get("product") {
            let fs = fs.as_array().ok_or_else(|| Error::Parse("product must be a list".into()))?;
            if fs.is_empty() {
                return Err(Error::Parse("empty product".into()));
            }
            let sys = Self::product(fs.iter().map(Self::from_json).collect::<Result<_>>()?);
            if sys.d > MAX_DIM {
                return Err(Error::Parse(format!("product has d = {} > {MAX_DIM}", sys.d)));
            }
            // product symbols are packed into a u32
            if sys.alphabet_size() > MAX_PRODUCT_ALPHABET {
                return Err(Error::Parse("product alphabet is too large".into()));
            }
            return Ok(sys);
        }
        if obj.get("point").is_some() {
            let d = obj.get("d").map_or(Some(1), Value::as_u64).unwrap_or(0);
            if d == 0 || d > MAX_DIM as u64 {
                return Err(Error::Parse(format!("d must be between 1 and {MAX_DIM}")));
            }
            return Ok(Self::point(d as usize));
        }
        if let Some(spec) = obj.get("from_tiling") {
            if obj.get("d").and_then(Value::as_u64).unwrap_or(1) != 1 {
                return Err(Error::Parse("tiling systems have d = 1".into()));
            }
            let sample = TilingSpec::parse(&spec.to_string())?.generate()?;
            return Ok(Self::from_word(sample.letters));
        }
        let d = obj.get("d").and_then(Value::as_u64).ok_or_else(|| Error::Parse("missing d".into()))? as usize;
        if d == 0 || d > MAX_DIM {
            return Err(Error::Parse(format!("d must be between 1 and {MAX_DIM}")));
        }
        let alphabet: Vec<char> = obj
            .get("alphabet")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing alphabet".into()))?
            .iter()
            .map(|x| {
                let s = x.as_str().unwrap_or_default();
                let mut it = s.chars();
                match (it.next(), it.next()) {
                    (Some(c), None) => Ok(c),
                    _ => Err(Error::Parse(format!("alphabet entry {x} is not a single character"))),
                }
            })
            .collect::<Result<_>>()?;
        if alphabet.is_empty() || alphabet.iter().collect::<BTreeSet<_>>().len() != alphabet.len() {
            return Err(Error::Parse("alphabet must be nonempty and without repeats".into()));
        }
        let allowed = obj
            .get("allowed_patterns")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("missing allowed_patterns".into()))?;
        let mut by_side = BTreeMap::new();
        for (k, list) in allowed {
            let side: usize = k.parse().map_err(|_| Error::Parse(format!("bad side {k:?}")))?;
            if side == 0 || side > 64 {
                return Err(Error::Parse(format!("side {side} out of range")));
            }
            let list = list.as_array().ok_or_else(|| Error::Parse("patterns must be a list".into()))?;
            let mut set = BTreeSet::new();
            for p in list {
                let mut flat = Vec::new();
                flatten_pattern(p, d, side, &alphabet, &mut flat)?;
                set.insert(flat);
            }
            by_side.insert(side, set);
        }
        Self::from_cubes(d, alphabet, by_side)
    }
}

fn flatten_pattern(v: &Value, depth: usize, side: usize, alphabet: &[char], out: &mut Vec<u32>) -> Result<()> {
    if depth == 1 {
        let s = v.as_str().ok_or_else(|| Error::Parse("pattern rows must be strings".into()))?;
        if s.chars().count() != side {
            return Err(Error::Parse(format!("pattern row {s:?} should have length {side}")));
        }
        for c in s.chars() {
            let i = alphabet
                .iter()
                .position(|&a| a == c)
                .ok_or_else(|| Error::Parse(format!("letter {c:?} is not in the alphabet")))?;
            out.push(i as u32);
        }
        return Ok(());
    }
    let rows = v.as_array().filter(|r| r.len() == side).ok_or_else(|| {
        Error::Parse(format!("pattern must nest {depth} levels of length {side}"))
    })?;
    for r in rows {
        flatten_pattern(r, depth - 1, side, alphabet, out)?;
    }
    Ok(())
}

/// Subsets of `{0..d}` of size `k` in lexicographic order, as sorted lists.
fn subsets(d: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << d) {
        if mask.count_ones() as usize == k {
            out.push((0..d).filter(|&i| mask & (1 << i) != 0).collect::<Vec<_>>());
        }
    }
    out.sort();
    out
}

fn box_for(d: usize, r: usize, s: &[usize]) -> Vec<usize> {
    (0..d).map(|i| r + 1 + usize::from(s.contains(&i))).collect()
}

/// `e_i ∧ e_S = sign · e_{S ∪ {i}}` for `i ∉ S`.
pub fn wedge_sign(i: usize, s: &[usize]) -> i64 {
    if s.iter().filter(|&&j| j < i).count() % 2 == 0 {
        1
    } else {
        -1
    }
}

fn lookup(pats: &[BoxPattern], p: &BoxPattern) -> Result<usize> {
    pats.binary_search(p)
        .map_err(|_| Error::Invalid("a sub-box pattern is not allowed; the language is not factorial".into()))
}

/// Matrix of the pullback along restriction to the sub-box at `offset`: a
/// function on the small box becomes a function on the large one.
fn restriction_matrix(
    big: &[BoxPattern],
    big_sizes: &[usize],
    small: &[BoxPattern],
    small_sizes: &[usize],
    offset: &[usize],
) -> Result<IntMatrix> {
    let mut m = IntMatrix::zeros(big.len(), small.len());
    for (r, q) in big.iter().enumerate() {
        let c = lookup(small, &restrict(q, big_sizes, offset, small_sizes))?;
        m[(r, c)] = BigInt::from(1);
    }
    Ok(m)
}

/// One cochain block per subset `S`, with its box and patterns.
#[derive(Clone, Debug, Serialize)]
pub struct Component {
    pub subset: Vec<usize>,
    pub sizes: Vec<usize>,
    pub rank: usize,
    #[serde(skip)]
    patterns: Vec<BoxPattern>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KoszulComplex {
    pub d: usize,
    pub resolution: usize,
    /// `components[k]` lists the blocks of degree `k` in order.
    pub components: Vec<Vec<Component>>,
    pub ranks: Vec<usize>,
    /// `differentials[k]: C^k -> C^{k+1}`.
    pub differentials: Vec<IntMatrix>,
}

fn components(sys: &CantorZdSystem, r: usize, order: &dyn Fn(usize, usize) -> Vec<Vec<usize>>) -> Result<Vec<Vec<Component>>> {
    (0..=sys.d)
        .map(|k| {
            order(sys.d, k)
                .into_iter()
                .map(|s| {
                    let sizes = box_for(sys.d, r, &s);
                    let patterns = sys.box_patterns(&sizes)?;
                    Ok(Component { subset: s, rank: patterns.len(), sizes, patterns })
                })
                .collect()
        })
        .collect()
}

fn offsets(blocks: &[Component]) -> Vec<usize> {
    let mut acc = 0;
    blocks
        .iter()
        .map(|b| {
            let o = acc;
            acc += b.rank;
            o
        })
        .collect()
}

/// `(α_i^* - 1)` from the box of `S` to the box of `S ∪ {i}`.
fn shift_minus_one(sys: &CantorZdSystem, from: &Component, to: &Component, i: usize) -> Result<IntMatrix> {
    let zero = vec![0; sys.d];
    let mut unit = zero.clone();
    unit[i] = 1;
    let shift = restriction_matrix(&to.patterns, &to.sizes, &from.patterns, &from.sizes, &unit)?;
    let refine = restriction_matrix(&to.patterns, &to.sizes, &from.patterns, &from.sizes, &zero)?;
    shift.sub(&refine)
}

pub fn build_koszul_complex(sys: &CantorZdSystem, r: usize) -> Result<KoszulComplex> {
    let comps = components(sys, r, &subsets)?;
    let ranks: Vec<usize> = comps.iter().map(|c| c.iter().map(|b| b.rank).sum()).collect();
    let mut differentials = Vec::new();
    for k in 0..sys.d {
        let mut dk = IntMatrix::zeros(ranks[k + 1], ranks[k]);
        let (src_off, dst_off) = (offsets(&comps[k]), offsets(&comps[k + 1]));
        for (a, from) in comps[k].iter().enumerate() {
            for i in (0..sys.d).filter(|i| !from.subset.contains(i)) {
                let mut t = from.subset.clone();
                t.push(i);
                t.sort();
                let b = comps[k + 1].iter().position(|c| c.subset == t).expect("subset present");
                let block = shift_minus_one(sys, from, &comps[k + 1][b], i)?.scale(&BigInt::from(wedge_sign(i, &from.subset)));
                dk.set_block(dst_off[b], src_off[a], &block);
            }
        }
        differentials.push(dk);
    }
    Ok(KoszulComplex { d: sys.d, resolution: r, components: comps, ranks, differentials })
}

impl KoszulComplex {
    pub fn check_square_zero(&self) -> Result<()> {
        for w in self.differentials.windows(2) {
            if !w[1].mul(&w[0])?.is_zero() {
                return Err(Error::CompositionNotZero);
            }
        }
        Ok(())
    }

    fn bases(&self) -> Result<Vec<CohomologyBasis>> {
        complex_cohomology(&self.ranks, &self.differentials)
    }

    pub fn cohomology(&self) -> Result<Vec<GroupPresentation>> {
        Ok(self.bases()?.iter().map(|b| b.group().clone()).collect())
    }

    /// Refinement from this resolution to `finer`, block by block.
    pub fn refinement_to(&self, finer: &KoszulComplex) -> Result<Vec<IntMatrix>> {
        let zero = vec![0; self.d];
        (0..=self.d)
            .map(|k| {
                let mut m = IntMatrix::zeros(finer.ranks[k], self.ranks[k]);
                let (so, fo) = (offsets(&self.components[k]), offsets(&finer.components[k]));
                for (a, c) in self.components[k].iter().enumerate() {
                    let b = finer.components[k].iter().position(|x| x.subset == c.subset).ok_or_else(|| {
                        Error::DimensionMismatch("complexes have different blocks".into())
                    })?;
                    let f = &finer.components[k][b];
                    m.set_block(fo[b], so[a], &restriction_matrix(&f.patterns, &f.sizes, &c.patterns, &c.sizes, &zero)?);
                }
                Ok(m)
            })
            .collect()
    }
}

/// The cube-cell form: one cochain block per open face of the unit cube at
/// the origin (ordered by the bitmask of its directions), the boundary read
/// off the cube faces, and covariance `φ(e + e_i) = α_i^* φ(e)`.
pub fn torus_covariant_complex(sys: &CantorZdSystem, r: usize) -> Result<KoszulComplex> {
    let by_mask = |d: usize, k: usize| -> Vec<Vec<usize>> {
        (0u32..(1 << d))
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..d).filter(|&i| m & (1 << i) != 0).collect())
            .collect()
    };
    let comps = components(sys, r, &by_mask)?;
    let ranks: Vec<usize> = comps.iter().map(|c| c.iter().map(|b| b.rank).sum()).collect();
    let mut differentials = Vec::new();
    for k in 0..sys.d {
        let mut dk = IntMatrix::zeros(ranks[k + 1], ranks[k]);
        let (src_off, dst_off) = (offsets(&comps[k]), offsets(&comps[k + 1]));
        for (b, cell) in comps[k + 1].iter().enumerate() {
            // boundary of the face spanned by `cell.subset` at the origin: for
            // its p-th direction i, (-1)^p (front face at e_i - back face at 0)
            for (p, &i) in cell.subset.iter().enumerate() {
                let face: Vec<usize> = cell.subset.iter().copied().filter(|&j| j != i).collect();
                let a = comps[k].iter().position(|c| c.subset == face).expect("face present");
                let sign = BigInt::from(if p % 2 == 0 { 1 } else { -1 });
                let block = shift_minus_one(sys, &comps[k][a], cell, i)?.scale(&sign);
                dk.set_block(dst_off[b], src_off[a], &block);
            }
        }
        differentials.push(dk);
    }
    Ok(KoszulComplex { d: sys.d, resolution: r, components: comps, ranks, differentials })
}

/// The change of basis from the Λ* form to the cube-cell form in each
/// degree, checked to be a chain isomorphism.
pub fn chain_isomorphism(lambda: &KoszulComplex, torus: &KoszulComplex) -> Result<Vec<IntMatrix>> {
    if lambda.ranks != torus.ranks || lambda.d != torus.d {
        return Err(Error::DimensionMismatch("complexes have different ranks".into()));
    }
    let mut maps = Vec::new();
    for k in 0..=lambda.d {
        let mut p = IntMatrix::zeros(torus.ranks[k], lambda.ranks[k]);
        let (lo, to) = (offsets(&lambda.components[k]), offsets(&torus.components[k]));
        for (a, c) in lambda.components[k].iter().enumerate() {
            let b = torus.components[k]
                .iter()
                .position(|x| x.subset == c.subset && x.patterns == c.patterns)
                .ok_or_else(|| Error::NotAMorphism(format!("no cell for e_{:?}", c.subset)))?;
            p.set_block(to[b], lo[a], &IntMatrix::identity(c.rank));
        }
        maps.push(p);
    }
    for k in 0..lambda.d {
        let lhs = torus.differentials[k].mul(&maps[k])?;
        let rhs = maps[k + 1].mul(&lambda.differentials[k])?;
        if lhs != rhs {
            return Err(Error::NotAMorphism(format!("change of basis does not commute in degree {k}")));
        }
    }
    Ok(maps)
}

#[derive(Clone, Debug)]
pub struct KoszulCohomology {
    pub resolutions: Vec<usize>,
    /// `ranks[j][k]` is the rank of the cochain group in degree `k` at
    /// resolution `resolutions[j]`.
    pub ranks: Vec<Vec<usize>>,
    /// `level_groups[j][k]` is `H^k` at resolution `resolutions[j]`.
    pub level_groups: Vec<Vec<GroupPresentation>>,
    pub degrees: Vec<DirectLimit>,
}

impl KoszulCohomology {
    pub fn groups(&self) -> Vec<GroupPresentation> {
        self.degrees.iter().map(|d| d.limit.clone()).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "resolutions": self.resolutions,
            "ranks": self.ranks,
            "levels": self.level_groups,
            "connecting_maps": self.degrees.iter().map(|d| d.maps.iter().map(|m| &m.matrix).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "limit": self.degrees.iter().map(|d| json!({
                "group": d.limit,
                "status": d.status,
                "stable_from": d.stable_from,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Cohomology at resolutions `0..=r_max` and its direct limit along the
/// refinements.
pub fn koszul_cohomology(sys: &CantorZdSystem, r_max: usize) -> Result<KoszulCohomology> {
    if r_max < 2 {
        return Err(Error::Invalid("at least resolutions 0..=2 are needed".into()));
    }
    let complexes: Vec<KoszulComplex> = (0..=r_max).map(|r| build_koszul_complex(sys, r)).collect::<Result<_>>()?;
    let bases: Vec<Vec<CohomologyBasis>> = complexes.iter().map(KoszulComplex::bases).collect::<Result<_>>()?;
    let mut maps: Vec<Vec<IntMatrix>> = vec![Vec::new(); sys.d + 1];
    for (j, w) in complexes.windows(2).enumerate() {
        let refine = w[0].refinement_to(&w[1])?;
        for k in 0..=sys.d {
            maps[k].push(bases[j][k].induced_map(&refine[k], &bases[j + 1][k])?);
        }
    }
    let level_groups: Vec<Vec<GroupPresentation>> =
        bases.iter().map(|b| b.iter().map(|x| x.group().clone()).collect()).collect();
    let degrees = maps
        .into_iter()
        .enumerate()
        .map(|(k, m)| {
            direct_limit_fg(&DirectSystem::new(level_groups.iter().map(|g| g[k].clone()).collect(), m, 2))
        })
        .collect::<Result<_>>()?;
    let ranks = complexes.iter().map(|c| c.ranks.clone()).collect();
    Ok(KoszulCohomology { resolutions: (0..=r_max).collect(), ranks, level_groups, degrees })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_signs() {
        assert_eq!(wedge_sign(0, &[1, 2]), 1);
        assert_eq!(wedge_sign(2, &[0, 1]), 1);
        assert_eq!(wedge_sign(1, &[0, 2]), -1);
    }

    #[test]
    fn restriction_of_a_square() {
        // rows "ab", "cd"
        let p = vec![0, 1, 2, 3];
        assert_eq!(restrict(&p, &[2, 2], &[0, 1], &[2, 1]), vec![1, 3]);
        assert_eq!(restrict(&p, &[2, 2], &[1, 0], &[1, 2]), vec![2, 3]);
    }

    #[test]
    fn point_in_two_dimensions() {
        let k = build_koszul_complex(&CantorZdSystem::point(2), 1).unwrap();
        assert_eq!(k.ranks, vec![1, 2, 1]);
        assert!(k.differentials.iter().all(IntMatrix::is_zero));
    }
}
