//! Prototile spaces, patch spaces and proper sequences of one-dimensional
//! tilings, with the direct-limit cohomology of the hull.
//!
//! Every approximant is a 1-dimensional Δ-complex whose edges are single
//! tiles: an edge is a tile class (the collared patch class containing the
//! tile together with the tile's offset inside the patch), and vertices are
//! the classes of tile endpoints glued along the adjacencies observed in the
//! sample. Patch spaces are thus subdivided so that the projections between
//! levels are cellular.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet};
use std::hash::{Hash, Hasher};

use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::abelian::{direct_limit_fg, DirectLimit, DirectSystem, GroupPresentation, IntMatrix};
use crate::delta_complex::{CellularMap, DeltaComplex};
use crate::error::{Error, Result};
use crate::tiling::{FieldElem, Pattern, Tiling1DSample};

/// Patterns tried per level before giving up.
const MAX_CANDIDATES: usize = 400;
/// Longest pattern (in blocks of the previous level) tried.
const MAX_PATTERN_BLOCKS: usize = 16;

pub const U_INTERIOR_RULE: &str = "u = +1: a puncture on a Voronoi boundary joins the cell on its right";

/// A decomposition of the sample into consecutive blocks of tiles.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Layer {
    /// Block `j` covers tiles `starts[j]..starts[j + 1]`.
    starts: Vec<usize>,
    punctures: Vec<FieldElem>,
    /// Float rational and alpha parts of the punctures.
    approx: Vec<(f64, f64)>,
    /// Blocks cut by the ends of the sample are incomplete.
    complete: Vec<bool>,
}

impl Layer {
    fn tiles(sample: &Tiling1DSample) -> Self {
        let n = sample.len();
        Layer {
            starts: (0..=n).collect(),
            punctures: sample.punctures.clone(),
            approx: sample.punctures.iter().map(float_parts).collect(),
            complete: vec![true; n],
        }
    }

    fn count(&self) -> usize {
        self.complete.len()
    }

    fn range(&self, j: usize) -> std::ops::Range<usize> {
        self.starts[j]..self.starts[j + 1]
    }
}

fn float_parts(x: &FieldElem) -> (f64, f64) {
    (x.p.to_f64().unwrap_or(f64::NAN), x.q.to_f64().unwrap_or(f64::NAN))
}

/// Assigns each point to a Voronoi cell of `centers` (both increasing): the
/// cell whose half-open interval `[m_{k-1}, m_k)` between midpoints contains
/// it, which is the cell the point is u-interior to for `u = +1`.
pub fn assign_u_interior(
    centers: &[FieldElem],
    points: &[FieldElem],
    alpha: Option<&crate::tiling::AlgebraicNumber>,
) -> Result<Vec<usize>> {
    let approx: Vec<(f64, f64)> = points.iter().map(float_parts).collect();
    assign_with_approx(centers, points, &approx, alpha)
}

fn assign_with_approx(
    centers: &[FieldElem],
    points: &[FieldElem],
    approx: &[(f64, f64)],
    alpha: Option<&crate::tiling::AlgebraicNumber>,
) -> Result<Vec<usize>> {
    if centers.is_empty() {
        return Err(Error::PatternNotFound);
    }
    let mids: Vec<FieldElem> =
        centers.windows(2).map(|w| (w[0].clone() + w[1].clone()).half()).collect();
    let (a, radius) = alpha.map_or((0.0, 0.0), |a| a.approx_with_radius());
    let mid_parts: Vec<(f64, f64)> = mids.iter().map(float_parts).collect();
    // float filter with an exact fallback near ties
    let at_or_right = |x: &FieldElem, xp: (f64, f64), k: usize| -> Result<bool> {
        let (dp, dq) = (xp.0 - mid_parts[k].0, xp.1 - mid_parts[k].1);
        let d = dp + dq * a;
        let err = dq.abs() * radius + 1e-9 * (1.0 + dp.abs() + dq.abs());
        if d.is_finite() && d.abs() > err {
            return Ok(d > 0.0);
        }
        Ok(x.cmp_with(&mids[k], alpha)? != Ordering::Less)
    };
    let mut k = 0;
    let mut out = Vec::with_capacity(points.len());
    for (x, &xp) in points.iter().zip(approx) {
        while k < mids.len() && at_or_right(x, xp, k)? {
            k += 1;
        }
        out.push(k);
    }
    Ok(out)
}

/// Coarsens `prev` along the blocks where a pattern occurs: `occ` holds the
/// indices (in `prev`) of the first block of each occurrence.
fn coarsen(prev: &Layer, occ: &[usize], alpha: Option<&crate::tiling::AlgebraicNumber>) -> Result<(Layer, Vec<usize>)> {
    let centers: Vec<FieldElem> = occ.iter().map(|&j| prev.punctures[j].clone()).collect();
    let cell = assign_with_approx(&centers, &prev.punctures, &prev.approx, alpha)?;
    let approx = occ.iter().map(|&j| prev.approx[j]).collect();
    let last = occ.len() - 1;
    let mut starts = Vec::new();
    let mut complete = Vec::new();
    let mut first_block = Vec::new();
    for (j, &k) in cell.iter().enumerate() {
        if j == 0 || cell[j - 1] != k {
            starts.push(prev.starts[j]);
            first_block.push(j);
            // outermost Voronoi cells are unbounded
            complete.push(k != 0 && k != last);
        }
        if !prev.complete[j] {
            *complete.last_mut().expect("block opened") = false;
        }
    }
    starts.push(*prev.starts.last().expect("nonempty layer"));
    first_block.push(prev.count());
    Ok((Layer { starts, punctures: centers, approx, complete }, first_block))
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct EdgeKey {
    /// Indices into the sorted list of block words; `prev` and `next` are
    /// `None` for uncollared spaces.
    prev: Option<usize>,
    cur: usize,
    next: Option<usize>,
    offset: usize,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        // keep the smaller root so class representatives are canonical
        if ra < rb {
            self.parent[rb] = ra;
        } else if rb < ra {
            self.parent[ra] = rb;
        }
    }
}

struct Assembled {
    complex: DeltaComplex,
    edge_at: Vec<Option<usize>>,
    vertex_at: Vec<Option<usize>>,
}

/// Builds the quotient complex from per-tile edge keys, using only the tiles
/// in `range`.
fn assemble(
    keys: &[Option<EdgeKey>],
    range: std::ops::Range<usize>,
    name: &dyn Fn(&EdgeKey) -> String,
) -> Assembled {
    let present: BTreeSet<&EdgeKey> = keys[range.clone()].iter().flatten().collect();
    let id: BTreeMap<&EdgeKey, usize> = present.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let ne = id.len();
    // endpoint 2e is the left end of edge e, 2e + 1 its right end
    let mut uf = UnionFind::new(2 * ne);
    for i in range.start + 1..range.end {
        if let (Some(a), Some(b)) = (&keys[i - 1], &keys[i]) {
            uf.union(2 * id[a] + 1, 2 * id[b]);
        }
    }
    let mut vertex_of_root = BTreeMap::new();
    for x in 0..2 * ne {
        let r = uf.find(x);
        let next = vertex_of_root.len();
        vertex_of_root.entry(r).or_insert(next);
    }
    let mut complex = DeltaComplex::with_dim(1);
    for v in 0..vertex_of_root.len() {
        complex.add_cell(0, format!("v{v}"), vec![]);
    }
    for (k, &e) in &id {
        let head = vertex_of_root[&uf.find(2 * e + 1)];
        let tail = vertex_of_root[&uf.find(2 * e)];
        complex.add_cell(1, name(k), vec![head, tail]);
    }
    let edge_at: Vec<Option<usize>> =
        keys.iter().map(|k| k.as_ref().and_then(|k| id.get(k).copied())).collect();
    let mut vertex_at = vec![None; keys.len() + 1];
    for (i, e) in edge_at.iter().enumerate() {
        if let Some(e) = e {
            vertex_at[i] = Some(vertex_of_root[&uf.find(2 * e)]);
            vertex_at[i + 1] = Some(vertex_of_root[&uf.find(2 * e + 1)]);
        }
    }
    Assembled { complex, edge_at, vertex_at }
}

/// Which construction produced a space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    Prototile,
    CollaredPrototile,
    Patch,
}

/// A prototile or patch space of a sample.
#[derive(Clone, Debug)]
pub struct PatchSpace {
    pub kind: SpaceKind,
    pub level: usize,
    pub complex: DeltaComplex,
    /// Patch-tile class (uncollared) to its word of original tiles.
    pub patches: BTreeMap<String, String>,
    /// The defining pattern, as the words of the previous-level blocks it
    /// consists of.
    pub pattern: Option<Vec<String>>,
    pub puncture_assignment: &'static str,
    sample_id: u64,
    sample_len: usize,
    letters: Vec<char>,
    layer: Layer,
    edge_at: Vec<Option<usize>>,
    vertex_at: Vec<Option<usize>>,
}

/// The prototile space is a patch space built from single tiles.
pub type PrototileSpace = PatchSpace;

fn sample_id(sample: &Tiling1DSample) -> u64 {
    let mut h = DefaultHasher::new();
    sample.letters.hash(&mut h);
    for e in &sample.endpoints {
        e.to_string().hash(&mut h);
    }
    h.finish()
}

impl PatchSpace {
    fn build(
        sample: &Tiling1DSample,
        layer: Layer,
        collared: bool,
        kind: SpaceKind,
        level: usize,
        pattern: Option<Vec<String>>,
    ) -> Result<Self> {
        let n = sample.len();
        let word = |j: usize| sample.letters[layer.range(j)].iter().collect::<String>();
        let usable: Vec<bool> = (0..layer.count())
            .map(|j| {
                if collared {
                    j > 0 && j + 1 < layer.count() && layer.complete[j - 1..=j + 1].iter().all(|&c| c)
                } else {
                    layer.complete[j]
                }
            })
            .collect();
        let mut words: Vec<String> = (0..layer.count())
            .filter(|&j| layer.complete[j])
            .map(word)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        words.shrink_to_fit();
        let id = |j: usize| words.binary_search(&word(j)).expect("complete block word");
        let mut keys: Vec<Option<EdgeKey>> = vec![None; n];
        let mut patches = BTreeMap::new();
        for j in (0..layer.count()).filter(|&j| usable[j]) {
            let cur = id(j);
            let (prev, next) = if collared { (Some(id(j - 1)), Some(id(j + 1))) } else { (None, None) };
            patches.insert(words[cur].clone(), words[cur].clone());
            for (offset, i) in layer.range(j).enumerate() {
                keys[i] = Some(EdgeKey { prev, cur, next, offset });
            }
        }
        if keys.iter().all(Option::is_none) {
            return Err(Error::InsufficientSample("no complete patch in the sample".into()));
        }
        let single_tiles = (0..layer.count()).all(|j| layer.range(j).len() == 1);
        let name = |k: &EdgeKey| {
            let core = match (k.prev, k.next) {
                (Some(p), Some(q)) => format!("{}|{}|{}", words[p], words[k.cur], words[q]),
                _ => words[k.cur].clone(),
            };
            if single_tiles {
                core
            } else {
                format!("{core}:{}", k.offset)
            }
        };
        let full = assemble(&keys, 0..n, &name);
        for half in [0..n / 2, n / 2..n] {
            if assemble(&keys, half, &name).complex != full.complex {
                return Err(Error::InsufficientSample(format!(
                    "level {level}: a half of the sample does not show every patch and adjacency"
                )));
            }
        }
        Ok(PatchSpace {
            kind,
            level,
            complex: full.complex,
            patches,
            pattern,
            puncture_assignment: U_INTERIOR_RULE,
            sample_id: sample_id(sample),
            sample_len: n,
            letters: sample.letters.clone(),
            layer,
            edge_at: full.edge_at,
            vertex_at: full.vertex_at,
        })
    }

    /// Edge cell containing tile `i` of the sample, if determined.
    pub fn edge_of_tile(&self, i: usize) -> Option<usize> {
        self.edge_at.get(i).copied().flatten()
    }

    /// Number of patch-tiles (complete or not) the sample was cut into.
    pub fn block_count(&self) -> usize {
        self.layer.count()
    }

    /// Tile ranges of the complete patch-tiles.
    pub fn complete_blocks(&self) -> Vec<std::ops::Range<usize>> {
        (0..self.layer.count())
            .filter(|&j| self.layer.complete[j])
            .map(|j| self.layer.range(j))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind,
            "level": self.level,
            "complex": self.complex.to_json(),
            "patches": self.patches,
            "pattern": self.pattern,
            "puncture_assignment": self.puncture_assignment,
        })
    }
}

/// `B_0` (uncollared) or its collared version.
pub fn build_prototile_space(sample: &Tiling1DSample, collared: bool) -> Result<PrototileSpace> {
    if sample.len() < 8 {
        return Err(Error::InsufficientSample("need at least 8 tiles".into()));
    }
    let kind = if collared { SpaceKind::CollaredPrototile } else { SpaceKind::Prototile };
    PatchSpace::build(sample, Layer::tiles(sample), collared, kind, 0, None)
}

/// The patch space of a pattern of tiles: Voronoi cells of the occurrence
/// punctures, u-interior assignment of the tile punctures, and gluing of the
/// collared patch-tiles.
pub fn build_patch_space(sample: &Tiling1DSample, pattern: &Pattern) -> Result<PatchSpace> {
    let word: Vec<char> = pattern.collared_word().chars().collect();
    let shift = usize::from(pattern.left_context.is_some());
    let occ: Vec<usize> = sample
        .letters
        .windows(word.len().max(1))
        .enumerate()
        .filter(|(_, w)| *w == word.as_slice())
        .map(|(i, _)| i + shift)
        .collect();
    if occ.is_empty() {
        return Err(Error::PatternNotFound);
    }
    if occ.len() < 2 {
        return Err(Error::InsufficientSample("pattern occurs only once".into()));
    }
    let (layer, _) = coarsen(&Layer::tiles(sample), &occ, sample.alpha.as_ref())?;
    PatchSpace::build(sample, layer, true, SpaceKind::Patch, 1, Some(vec![pattern.collared_word()]))
}

/// Per finer patch-tile: its decomposition into coarser patch-tiles and an
/// interior witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZoomEntry {
    pub patch: String,
    pub decomposition: Vec<String>,
    /// Index in `decomposition` of a coarser patch-tile not touching either
    /// end of the finer patch-tile.
    pub interior_witness: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZoomCertificate {
    pub finer_level: usize,
    pub coarser_level: usize,
    pub entries: Vec<ZoomEntry>,
}

/// Checks that every complete patch-tile of `finer` is a union of patch-tiles
/// of `coarser` (condition i) and contains one of them in its interior
/// (condition ii).
pub fn is_zoomed_out(finer: &PatchSpace, coarser: &PatchSpace) -> Result<ZoomCertificate> {
    if finer.sample_id != coarser.sample_id || finer.sample_len != coarser.sample_len {
        return Err(Error::NotComparable);
    }
    let cl = &coarser.layer;
    let boundaries: BTreeSet<usize> = cl.starts.iter().copied().collect();
    let mut seen = BTreeMap::new();
    for j in 0..finer.layer.count() {
        if !finer.layer.complete[j] {
            continue;
        }
        let r = finer.layer.range(j);
        if !boundaries.contains(&r.start) || !boundaries.contains(&r.end) {
            return Err(Error::NotZoomedOut(format!(
                "patch-tile at tiles {}..{} is not a union of coarser patch-tiles",
                r.start, r.end
            )));
        }
        let first = cl.starts.partition_point(|&s| s < r.start);
        let last = cl.starts.partition_point(|&s| s < r.end);
        let parts: Vec<usize> = (first..last).collect();
        if parts.len() < 3 {
            return Err(Error::NotZoomedOut(format!(
                "patch-tile at tiles {}..{} has no coarser patch-tile in its interior",
                r.start, r.end
            )));
        }
        if parts.iter().any(|&p| !cl.complete[p]) {
            return Err(Error::NotZoomedOut("finer patch-tile covers an incomplete coarser one".into()));
        }
        let name = block_word(finer, r.clone());
        let words: Vec<String> = parts
            .iter()
            .map(|&p| {
                let rr = cl.range(p);
                block_word(coarser, rr)
            })
            .collect();
        seen.entry(name.clone()).or_insert(ZoomEntry {
            patch: name,
            decomposition: words,
            interior_witness: 1,
        });
    }
    Ok(ZoomCertificate {
        finer_level: finer.level,
        coarser_level: coarser.level,
        entries: seen.into_values().collect(),
    })
}

fn block_word(space: &PatchSpace, r: std::ops::Range<usize>) -> String {
    space.letters[r].iter().collect()
}

/// Cell map from `finer` to `coarser` reading both labels off each tile of
/// the common sample; `None` if the labels do not define a map.
fn projection(finer: &PatchSpace, coarser: &PatchSpace) -> Option<CellularMap> {
    let mut images = vec![vec![None; finer.complex.count(0)], vec![None; finer.complex.count(1)]];
    let labels = [(&finer.vertex_at, &coarser.vertex_at), (&finer.edge_at, &coarser.edge_at)];
    for (n, (fine, coarse)) in labels.into_iter().enumerate() {
        for (f, c) in fine.iter().zip(coarse.iter()) {
            if let Some(f) = f {
                let c = (*c)?;
                match images[n][*f] {
                    None => images[n][*f] = Some(c),
                    Some(prev) if prev != c => return None,
                    Some(_) => {}
                }
            }
        }
    }
    let images: Option<Vec<Vec<usize>>> =
        images.into_iter().map(|v| v.into_iter().collect()).collect();
    let map = CellularMap { images: images? };
    map.check(&finer.complex, &coarser.complex).ok()?;
    map.is_surjective(&coarser.complex).then_some(map)
}

/// The projection of `finer` onto `coarser`, read off the tiles of their
/// common sample.
pub fn projection_map(finer: &PatchSpace, coarser: &PatchSpace) -> Result<CellularMap> {
    if finer.sample_id != coarser.sample_id || finer.sample_len != coarser.sample_len {
        return Err(Error::NotComparable);
    }
    projection(finer, coarser)
        .ok_or_else(|| Error::InvalidMap("cell labels do not define a surjective cellular map".into()))
}

/// Tries patterns of `prev`-blocks, shortest first and then in lexicographic
/// order of their block words, until one yields a certified collared patch
/// space zoomed out of `prev` with a well-defined surjective projection.
fn next_level(
    sample: &Tiling1DSample,
    prev: &PatchSpace,
) -> Result<(PatchSpace, CellularMap, ZoomCertificate)> {
    let layer = &prev.layer;
    let words: Vec<String> = (0..layer.count()).map(|j| block_word(prev, layer.range(j))).collect();
    let mut last_err = Error::InsufficientSample(format!("no pattern yields level {}", prev.level + 1));
    let mut tried = 0;
    for m in 1..=MAX_PATTERN_BLOCKS {
        let mut occurrences: BTreeMap<&[String], Vec<usize>> = BTreeMap::new();
        for j in 0..layer.count().saturating_sub(m - 1) {
            if layer.complete[j..j + m].iter().all(|&c| c) {
                occurrences.entry(&words[j..j + m]).or_default().push(j);
            }
        }
        for (pattern, occ) in occurrences {
            if occ.len() < 4 {
                continue;
            }
            tried += 1;
            if tried > MAX_CANDIDATES {
                return Err(last_err);
            }
            let (next, first_block) = coarsen(layer, &occ, sample.alpha.as_ref())?;
            let thin = (0..next.count())
                .any(|k| next.complete[k] && first_block[k + 1] - first_block[k] < 3);
            if thin {
                continue;
            }
            let space = match PatchSpace::build(
                sample,
                next,
                true,
                SpaceKind::Patch,
                prev.level + 1,
                Some(pattern.to_vec()),
            ) {
                Ok(s) => s,
                Err(e) => {
                    last_err = e;
                    continue;
                }
            };
            let Some(map) = projection(&space, prev) else {
                last_err = Error::InsufficientSample(format!(
                    "level {}: projections are not determined by the sample",
                    prev.level + 1
                ));
                continue;
            };
            let cert = is_zoomed_out(&space, prev)?;
            return Ok((space, map, cert));
        }
    }
    Err(last_err)
}

/// `B_0 <- B_1 <- ... <- B_L` with `B_0` the uncollared prototile space.
#[derive(Clone, Debug)]
pub struct ProperSequence {
    pub levels: Vec<PatchSpace>,
    /// `connecting_maps[l]` projects level `l + 1` onto level `l`.
    pub connecting_maps: Vec<CellularMap>,
    pub zoom_certificates: Vec<ZoomCertificate>,
    pub requested_levels: usize,
    /// Why fewer levels than requested were built.
    pub truncated: Option<Error>,
    /// Minimal period (in tiles) of a periodic sample. No pattern of a
    /// periodic tiling has Voronoi cells longer than one period, so such a
    /// sequence repeats its first patch space along identity maps and carries
    /// no zoom certificates.
    pub period: Option<usize>,
}

impl ProperSequence {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.truncated.is_none()
    }

    /// Composite projection of level `l` onto `B_0`.
    pub fn map_to_base(&self, l: usize) -> CellularMap {
        let mut map = CellularMap::identity(&self.levels[l].complex);
        for k in (0..l).rev() {
            map = map.compose(&self.connecting_maps[k]);
        }
        map
    }

    pub fn to_json(&self) -> Value {
        json!({
            "requested_levels": self.requested_levels,
            "complete": self.is_complete(),
            "truncated": self.truncated.as_ref().map(|e| e.to_string()),
            "levels": self.levels.iter().map(PatchSpace::to_json).collect::<Vec<_>>(),
            "connecting_maps": self.connecting_maps,
            "zoom_certificates": self.zoom_certificates,
            "period": self.period,
        })
    }

    pub fn to_dot(&self) -> String {
        self.levels
            .iter()
            .map(|s| s.complex.to_dot(&format!("level{}", s.level)))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Builds up to `n_levels` levels (counting `B_0`); if the sample cannot
/// certify all of them, the levels built so far are returned with the reason.
pub fn build_proper_sequence(sample: &Tiling1DSample, n_levels: usize) -> Result<ProperSequence> {
    if n_levels == 0 {
        return Err(Error::Invalid("a proper sequence has at least one level".into()));
    }
    let mut seq = ProperSequence {
        levels: vec![build_prototile_space(sample, false)?],
        connecting_maps: vec![],
        zoom_certificates: vec![],
        requested_levels: n_levels,
        truncated: None,
        period: minimal_period(&sample.letters),
    };
    if let Some(period) = seq.period {
        if n_levels > 1 {
            let occ: Vec<usize> = (0..sample.len() / period).map(|k| k * period).collect();
            let (layer, _) = coarsen(&seq.levels[0].layer, &occ, sample.alpha.as_ref())?;
            let word: String = sample.letters[..period].iter().collect();
            let space = PatchSpace::build(sample, layer, true, SpaceKind::Patch, 1, Some(vec![word]))?;
            let map = projection(&space, &seq.levels[0]).ok_or_else(|| {
                Error::InsufficientSample("periodic patch space does not project".into())
            })?;
            seq.levels.push(space);
            seq.connecting_maps.push(map);
            while seq.levels.len() < n_levels {
                let mut next = seq.levels.last().expect("nonempty").clone();
                next.level += 1;
                seq.connecting_maps.push(CellularMap::identity(&next.complex));
                seq.levels.push(next);
            }
        }
        return Ok(seq);
    }
    while seq.levels.len() < n_levels {
        match next_level(sample, seq.levels.last().expect("nonempty")) {
            Ok((space, map, cert)) => {
                seq.levels.push(space);
                seq.connecting_maps.push(map);
                seq.zoom_certificates.push(cert);
            }
            Err(e @ Error::InsufficientSample(_)) => {
                seq.truncated = Some(e);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(seq)
}

/// Smallest period of the word if it repeats at least eight times.
fn minimal_period(word: &[char]) -> Option<usize> {
    let n = word.len();
    if n == 0 {
        return None;
    }
    // prefix function
    let mut fail = vec![0usize; n];
    for i in 1..n {
        let mut k = fail[i - 1];
        while k > 0 && word[i] != word[k] {
            k = fail[k - 1];
        }
        if word[i] == word[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let p = n - fail[n - 1];
    (8 * p <= n).then_some(p)
}

/// Per-degree direct limits of the level cohomologies.
#[derive(Clone, Debug)]
pub struct HullCohomology {
    /// `level_groups[l][n]` is `H^n(B_l)`.
    pub level_groups: Vec<Vec<GroupPresentation>>,
    /// `degrees[n]` is the direct limit in degree `n`.
    pub degrees: Vec<DirectLimit>,
}

impl HullCohomology {
    pub fn groups(&self) -> Vec<GroupPresentation> {
        self.degrees.iter().map(|d| d.limit.clone()).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "levels": self.level_groups,
            "limit": self.degrees.iter().map(|d| json!({
                "group": d.limit,
                "status": d.status,
                "stable_from": d.stable_from,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Direct limit of `H^n(B_0) -> H^n(B_1) -> ...` along the pullbacks of the
/// connecting maps.
pub fn cech_cohomology_of_hull(seq: &ProperSequence) -> Result<HullCohomology> {
    limit_of_levels(
        seq.levels.iter().map(|s| &s.complex).collect(),
        &seq.connecting_maps,
    )
}

pub(crate) fn limit_of_levels(
    complexes: Vec<&DeltaComplex>,
    maps: &[CellularMap],
) -> Result<HullCohomology> {
    if complexes.len() < 2 {
        return Err(Error::Invalid("the direct limit needs at least two levels".into()));
    }
    let bases: Vec<_> = complexes.iter().map(|k| k.cohomology_bases()).collect::<Result<_>>()?;
    let induced: Vec<Vec<IntMatrix>> = maps
        .iter()
        .enumerate()
        .map(|(l, f)| f.induced_on_cohomology(complexes[l + 1], complexes[l]))
        .collect::<Result<_>>()?;
    let dim = complexes.iter().map(|k| k.dim()).max().unwrap_or(0);
    let level_groups: Vec<Vec<GroupPresentation>> = bases
        .iter()
        .map(|b| (0..=dim).map(|n| b.get(n).map_or_else(GroupPresentation::zero, |x| x.group().clone())).collect())
        .collect();
    let window = maps.len().min(2);
    let degrees = (0..=dim)
        .map(|n| {
            let sys = DirectSystem::new(
                level_groups.iter().map(|g| g[n].clone()).collect(),
                induced.iter().map(|m| m[n].clone()).collect(),
                window,
            );
            direct_limit_fg(&sys)
        })
        .collect::<Result<_>>()?;
    Ok(HullCohomology { level_groups, degrees })
}
