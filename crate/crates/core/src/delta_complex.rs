//! Finite Δ-complexes with ordered face maps, their signed coboundaries and
//! integer cohomology, and cellular maps between them.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::abelian::{complex_cohomology, CohomologyBasis, GroupPresentation, IntMatrix};
use crate::error::{Error, Result};

/// Face index used for references that did not resolve to a cell.
pub const MISSING: usize = usize::MAX;

/// A finite Δ-complex. `faces[n][c]` lists, for the `c`-th `n`-cell, the
/// indices of its faces `∂_0, ..., ∂_n` among the `(n-1)`-cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaComplex {
    pub names: Vec<Vec<String>>,
    pub faces: Vec<Vec<Vec<usize>>>,
    pub punctures: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    WrongFaceCount { cell: String, expected: usize, found: usize },
    DanglingFace { cell: String, face_index: usize },
    FaceIdentity { cell: String, i: usize, j: usize },
    DuplicateName { cell: String },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidComplex(format!(
                "{} violation(s), first: {}",
                self.violations.len(),
                serde_json::to_string(v).unwrap_or_default()
            ))),
        }
    }
}

pub const BARYCENTER: &str = "barycenter";

impl DeltaComplex {
    /// Empty complex of the given top dimension.
    pub fn with_dim(dim: usize) -> Self {
        DeltaComplex {
            names: vec![Vec::new(); dim + 1],
            faces: vec![Vec::new(); dim + 1],
            punctures: vec![Vec::new(); dim + 1],
        }
    }

    /// Appends a cell and returns its index in its dimension.
    pub fn add_cell(&mut self, dim: usize, name: impl Into<String>, faces: Vec<usize>) -> usize {
        while self.names.len() <= dim {
            self.names.push(Vec::new());
            self.faces.push(Vec::new());
            self.punctures.push(Vec::new());
        }
        self.names[dim].push(name.into());
        self.faces[dim].push(faces);
        self.punctures[dim].push(BARYCENTER.to_string());
        self.names[dim].len() - 1
    }

    pub fn dim(&self) -> usize {
        self.names.len().saturating_sub(1)
    }

    pub fn count(&self, n: usize) -> usize {
        self.names.get(n).map_or(0, Vec::len)
    }

    pub fn counts(&self) -> Vec<usize> {
        (0..=self.dim()).map(|n| self.count(n)).collect()
    }

    pub fn face(&self, n: usize, cell: usize, i: usize) -> usize {
        self.faces[n][cell][i]
    }

    pub fn point() -> Self {
        let mut k = DeltaComplex::with_dim(0);
        k.add_cell(0, "v", vec![]);
        k
    }

    /// One vertex with `k` loops.
    pub fn wedge_of_circles(k: usize) -> Self {
        let mut c = DeltaComplex::with_dim(1);
        c.add_cell(0, "v", vec![]);
        for e in 0..k {
            c.add_cell(1, format!("e{e}"), vec![0, 0]);
        }
        c
    }

    pub fn interval() -> Self {
        let mut c = DeltaComplex::with_dim(1);
        c.add_cell(0, "v0", vec![]);
        c.add_cell(0, "v1", vec![]);
        c.add_cell(1, "e", vec![1, 0]);
        c
    }

    /// The 2-torus from two triangles.
    pub fn torus() -> Self {
        let mut c = DeltaComplex::with_dim(2);
        c.add_cell(0, "v", vec![]);
        let a = c.add_cell(1, "a", vec![0, 0]);
        let b = c.add_cell(1, "b", vec![0, 0]);
        let d = c.add_cell(1, "c", vec![0, 0]);
        // [v0 v1 v2] with edges v0v1 = a, v1v2 = b, v0v2 = c
        c.add_cell(2, "U", vec![b, d, a]);
        c.add_cell(2, "L", vec![a, d, b]);
        c
    }

    /// Checks face counts, references, duplicate names and the simplicial
    /// identities `∂_i ∂_j = ∂_{j-1} ∂_i` for `i < j`.
    pub fn validate(&self) -> ValidationReport {
        let mut v = Vec::new();
        let mut seen = HashMap::new();
        for n in 0..=self.dim() {
            for name in &self.names[n] {
                if seen.insert(name.as_str(), ()).is_some() {
                    v.push(Violation::DuplicateName { cell: name.clone() });
                }
            }
        }
        for n in 0..=self.dim() {
            for (c, fs) in self.faces[n].iter().enumerate() {
                let cell = self.names[n][c].clone();
                let expected = if n == 0 { 0 } else { n + 1 };
                if fs.len() != expected {
                    v.push(Violation::WrongFaceCount { cell, expected, found: fs.len() });
                    continue;
                }
                let mut ok = true;
                for (i, &f) in fs.iter().enumerate() {
                    if n == 0 || f >= self.count(n - 1) {
                        ok = false;
                        v.push(Violation::DanglingFace { cell: cell.clone(), face_index: i });
                    }
                }
                if !ok || n < 2 {
                    continue;
                }
                for j in 0..=n {
                    for i in 0..j {
                        let fj = &self.faces[n - 1][fs[j]];
                        let fi = &self.faces[n - 1][fs[i]];
                        if fj.len() != n || fi.len() != n {
                            continue;
                        }
                        if fj[i] != fi[j - 1] {
                            v.push(Violation::FaceIdentity { cell: cell.clone(), i, j });
                        }
                    }
                }
            }
        }
        ValidationReport { violations: v }
    }

    /// `δ^n: C^{n-1} -> C^n` with entry `(σ, τ) = Σ_{i: ∂_i σ = τ} (-1)^i`.
    pub fn coboundary_matrix(&self, n: usize) -> Result<IntMatrix> {
        if n == 0 || n > self.dim() {
            return Err(Error::DegreeOutOfRange { degree: n, max: self.dim() });
        }
        let mut m = IntMatrix::zeros(self.count(n), self.count(n - 1));
        for (s, fs) in self.faces[n].iter().enumerate() {
            for (i, &t) in fs.iter().enumerate() {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                m[(s, t)] += BigInt::from(sign);
            }
        }
        Ok(m)
    }

    pub fn coboundaries(&self) -> Result<Vec<IntMatrix>> {
        (1..=self.dim()).map(|n| self.coboundary_matrix(n)).collect()
    }

    /// Cohomology with generators, degrees `0..=dim`.
    pub fn cohomology_bases(&self) -> Result<Vec<CohomologyBasis>> {
        self.validate().into_result()?;
        complex_cohomology(&self.counts(), &self.coboundaries()?)
    }

    /// Relabels cells: `perm[n][old] = new`.
    pub fn permuted(&self, perm: &[Vec<usize>]) -> Self {
        let mut out = self.clone();
        for n in 0..=self.dim() {
            for old in 0..self.count(n) {
                let new = perm[n][old];
                out.names[n][new] = self.names[n][old].clone();
                out.punctures[n][new] = self.punctures[n][old].clone();
                out.faces[n][new] = self.faces[n][old]
                    .iter()
                    .map(|&f| if n == 0 { f } else { perm[n - 1][f] })
                    .collect();
            }
        }
        out
    }

    /// `{"dim": d, "cells": {"0": [...], ...}, "faces": {id: [...]}, "punctures": {id: label}}`.
    pub fn to_json(&self) -> Value {
        let mut cells = Map::new();
        let mut faces = Map::new();
        let mut punctures = Map::new();
        for n in 0..=self.dim() {
            cells.insert(n.to_string(), json!(self.names[n]));
            for (c, name) in self.names[n].iter().enumerate() {
                if n > 0 {
                    let ids: Vec<&str> =
                        self.faces[n][c].iter().map(|&f| self.names[n - 1][f].as_str()).collect();
                    faces.insert(name.clone(), json!(ids));
                }
                if self.punctures[n][c] != BARYCENTER {
                    punctures.insert(name.clone(), json!(self.punctures[n][c]));
                }
            }
        }
        let mut out = json!({ "dim": self.dim(), "cells": cells, "faces": faces });
        if !punctures.is_empty() {
            out["punctures"] = Value::Object(punctures);
        }
        out
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&v)
    }

    /// Parses the file format; unresolved face ids become [`MISSING`] and are
    /// reported by [`DeltaComplex::validate`].
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("complex must be an object".into()))?;
        for k in obj.keys() {
            if !matches!(k.as_str(), "dim" | "cells" | "faces" | "punctures") {
                return Err(Error::Parse(format!("unknown key {k:?}")));
            }
        }
        let dim = obj
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing integer \"dim\"".into()))? as usize;
        if dim > 64 {
            return Err(Error::Parse("dimension above 64".into()));
        }
        let cells = obj
            .get("cells")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("missing object \"cells\"".into()))?;
        let mut k = DeltaComplex::with_dim(dim);
        let mut index: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        for (key, list) in cells {
            let n: usize = key
                .parse()
                .ok()
                .filter(|&n| n <= dim)
                .ok_or_else(|| Error::Parse(format!("bad dimension key {key:?}")))?;
            let list = list
                .as_array()
                .ok_or_else(|| Error::Parse(format!("cells of dimension {n} must be a list")))?;
            for id in list {
                let id = id
                    .as_str()
                    .ok_or_else(|| Error::Parse("cell ids must be strings".into()))?;
                let c = k.add_cell(n, id, Vec::new());
                index.entry(id.to_string()).or_insert((n, c));
            }
        }
        let empty = Map::new();
        let faces = match obj.get("faces") {
            None => &empty,
            Some(f) => f.as_object().ok_or_else(|| Error::Parse("\"faces\" must be an object".into()))?,
        };
        for (id, list) in faces {
            let &(n, c) = index
                .get(id)
                .ok_or_else(|| Error::Parse(format!("faces given for unknown cell {id:?}")))?;
            let list = list
                .as_array()
                .ok_or_else(|| Error::Parse(format!("faces of {id:?} must be a list")))?;
            let mut fs = Vec::with_capacity(list.len());
            for f in list {
                let f = f.as_str().ok_or_else(|| Error::Parse("face ids must be strings".into()))?;
                fs.push(match index.get(f) {
                    Some(&(m, i)) if n > 0 && m == n - 1 => i,
                    _ => MISSING,
                });
            }
            k.faces[n][c] = fs;
        }
        if let Some(p) = obj.get("punctures") {
            let p = p.as_object().ok_or_else(|| Error::Parse("\"punctures\" must be an object".into()))?;
            for (id, label) in p {
                let &(n, c) = index
                    .get(id)
                    .ok_or_else(|| Error::Parse(format!("puncture for unknown cell {id:?}")))?;
                k.punctures[n][c] = label
                    .as_str()
                    .ok_or_else(|| Error::Parse("puncture labels must be strings".into()))?
                    .to_string();
            }
        }
        Ok(k)
    }

    /// Graphviz rendering of the 1-skeleton; edges point from `∂_1` to `∂_0`.
    pub fn to_dot(&self, graph_name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{graph_name}\" {{");
        for v in self.names.first().into_iter().flatten() {
            let _ = writeln!(s, "  \"{v}\";");
        }
        if self.dim() >= 1 {
            for (e, fs) in self.faces[1].iter().enumerate() {
                if fs.len() == 2 && fs.iter().all(|&f| f < self.count(0)) {
                    let _ = writeln!(
                        s,
                        "  \"{}\" -> \"{}\" [label=\"{}\"];",
                        self.names[0][fs[1]],
                        self.names[0][fs[0]],
                        self.names[1][e]
                    );
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

pub fn validate_complex(k: &DeltaComplex) -> ValidationReport {
    k.validate()
}

pub fn coboundary_matrix(k: &DeltaComplex, n: usize) -> Result<IntMatrix> {
    k.coboundary_matrix(n)
}

/// `H^0, ..., H^dim` of a valid complex.
pub fn simplicial_cohomology(k: &DeltaComplex) -> Result<Vec<GroupPresentation>> {
    Ok(k.cohomology_bases()?.iter().map(|b| b.group().clone()).collect())
}

/// A dimension-preserving cell map; `images[n][c]` is the image of the
/// `c`-th `n`-cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellularMap {
    pub images: Vec<Vec<usize>>,
}

impl CellularMap {
    pub fn identity(k: &DeltaComplex) -> Self {
        CellularMap { images: (0..=k.dim()).map(|n| (0..k.count(n)).collect()).collect() }
    }

    /// Face commutation `∂_i f(σ) = f(∂_i σ)` on every cell.
    pub fn check(&self, source: &DeltaComplex, target: &DeltaComplex) -> Result<()> {
        if self.images.len() != source.dim() + 1 || source.dim() > target.dim() {
            return Err(Error::InvalidMap("dimensions do not match".into()));
        }
        for n in 0..=source.dim() {
            if self.images[n].len() != source.count(n) {
                return Err(Error::InvalidMap(format!("dimension {n} has the wrong cell count")));
            }
            for (c, &img) in self.images[n].iter().enumerate() {
                if img >= target.count(n) {
                    return Err(Error::InvalidMap(format!(
                        "image of {} is not a cell",
                        source.names[n][c]
                    )));
                }
                if n == 0 {
                    continue;
                }
                for i in 0..=n {
                    let lhs = target.faces[n][img][i];
                    let rhs = self.images[n - 1][source.faces[n][c][i]];
                    if lhs != rhs {
                        return Err(Error::InvalidMap(format!(
                            "face {i} of {} does not commute",
                            source.names[n][c]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_surjective(&self, target: &DeltaComplex) -> bool {
        (0..=target.dim()).all(|n| {
            let mut hit = vec![false; target.count(n)];
            for &i in self.images.get(n).into_iter().flatten() {
                hit[i] = true;
            }
            hit.into_iter().all(|h| h)
        })
    }

    pub fn compose(&self, after: &CellularMap) -> CellularMap {
        CellularMap {
            images: self
                .images
                .iter()
                .enumerate()
                .map(|(n, v)| v.iter().map(|&c| after.images[n][c]).collect())
                .collect(),
        }
    }

    /// Pullback `f^#: C^n(target) -> C^n(source)`.
    pub fn pullback(&self, n: usize, target_count: usize) -> IntMatrix {
        let src = &self.images[n];
        let mut m = IntMatrix::zeros(src.len(), target_count);
        for (c, &img) in src.iter().enumerate() {
            m[(c, img)] = BigInt::from(1);
        }
        m
    }

    /// Induced maps `H^n(target) -> H^n(source)` for every degree.
    pub fn induced_on_cohomology(
        &self,
        source: &DeltaComplex,
        target: &DeltaComplex,
    ) -> Result<Vec<IntMatrix>> {
        self.check(source, target)?;
        let hs = source.cohomology_bases()?;
        let ht = target.cohomology_bases()?;
        (0..=source.dim())
            .map(|n| ht[n].induced_map(&self.pullback(n, target.count(n)), &hs[n]))
            .collect()
    }
}
