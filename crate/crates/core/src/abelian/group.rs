use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::de::{self, Deserialize, Deserializer};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::matrix::{bigint_from_json, bigint_json, IntMatrix};
use super::snf::smith_normal_form;

/// A finitely generated abelian group `Z^rank ⊕ Z/d1 ⊕ ... ⊕ Z/dk` with
/// `d1 | d2 | ... | dk`, every `di >= 2`.
///
/// Whenever a group is used with explicit coordinates, the generators are
/// ordered torsion first (in the order of `torsion`), then free.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GroupPresentation {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl GroupPresentation {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        GroupPresentation { rank, torsion: Vec::new() }
    }

    /// Normalizes an arbitrary list of cyclic orders (0 meaning infinite).
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Self {
        let diag: Vec<BigInt> = orders.to_vec();
        let n = diag.len();
        let m = IntMatrix::diagonal(&diag);
        let normalized = present_quotient(n, &m);
        normalized.group
    }

    pub fn generator_count(&self) -> usize {
        self.torsion.len() + self.rank
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Column relations of the presentation on its own generators.
    pub fn relations(&self) -> IntMatrix {
        let mut r = IntMatrix::zeros(self.generator_count(), self.torsion.len());
        for (i, d) in self.torsion.iter().enumerate() {
            r[(i, i)] = d.clone();
        }
        r
    }

    /// Reduces torsion coordinates into `[0, d)`.
    pub fn reduce(&self, coords: &mut [BigInt]) {
        for (c, d) in coords.iter_mut().zip(&self.torsion) {
            *c = c.mod_floor(d);
        }
    }

    pub fn reduce_matrix(&self, m: &mut IntMatrix) {
        for (i, d) in self.torsion.iter().enumerate() {
            for j in 0..m.cols() {
                let v = m[(i, j)].mod_floor(d);
                m[(i, j)] = v;
            }
        }
    }

    pub fn is_zero_element(&self, coords: &[BigInt]) -> bool {
        coords.iter().enumerate().all(|(i, c)| match self.torsion.get(i) {
            Some(d) => c.is_multiple_of(d),
            None => c.is_zero(),
        })
    }

    pub fn direct_sum(&self, other: &GroupPresentation) -> GroupPresentation {
        let mut orders: Vec<BigInt> = self.torsion.clone();
        orders.extend(other.torsion.iter().cloned());
        orders.extend(std::iter::repeat_n(BigInt::zero(), self.rank + other.rank));
        Self::from_cyclic_orders(&orders)
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

impl Serialize for GroupPresentation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("GroupPresentation", 2)?;
        st.serialize_field("rank", &self.rank)?;
        let torsion: Vec<serde_json::Value> = self.torsion.iter().map(bigint_json).collect();
        st.serialize_field("torsion", &torsion)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for GroupPresentation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        struct Raw {
            rank: usize,
            #[serde(default)]
            torsion: Vec<serde_json::Value>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let mut torsion = Vec::with_capacity(raw.torsion.len());
        for v in &raw.torsion {
            let d = bigint_from_json(v).ok_or_else(|| de::Error::custom("bad torsion entry"))?;
            torsion.push(d);
        }
        let mut orders = torsion;
        orders.extend(std::iter::repeat_n(BigInt::zero(), raw.rank));
        if orders.iter().any(|d| *d < BigInt::zero()) {
            return Err(de::Error::custom("negative torsion coefficient"));
        }
        Ok(GroupPresentation::from_cyclic_orders(&orders))
    }
}

/// A quotient `Z^n / R` brought to normal form, with coordinate changes.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub group: GroupPresentation,
    /// `g x n`: old coordinates to new (reduce with `group.reduce`).
    pub to_new: IntMatrix,
    /// `n x g`: lifts of the new generators in old coordinates.
    pub to_old: IntMatrix,
}

impl Normalized {
    pub fn coords(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut c = self.to_new.mul_vec(x).expect("coordinate length");
        self.group.reduce(&mut c);
        c
    }
}

/// Normal form of `Z^n / span(columns of relations)`.
pub fn present_quotient(n: usize, relations: &IntMatrix) -> Normalized {
    assert_eq!(relations.rows(), n);
    let s = smith_normal_form(relations);
    let mut torsion_idx = Vec::new();
    let mut torsion = Vec::new();
    for i in 0..s.rank {
        let d = &s.d[(i, i)];
        if !d.is_one() {
            torsion_idx.push(i);
            torsion.push(d.clone());
        }
    }
    let free_idx: Vec<usize> = (s.rank..n).collect();
    let order: Vec<usize> = torsion_idx.iter().chain(free_idx.iter()).copied().collect();
    let to_new = s.u.select_rows(&order);
    let to_old = s.u_inv.select_cols(&order);
    Normalized {
        group: GroupPresentation { rank: free_idx.len(), torsion },
        to_new,
        to_old,
    }
}
