//! Finite samples of one-dimensional tilings and Delone sets, with exact
//! endpoints in `Q + Q alpha`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use super::number::AlgebraicNumber;
use crate::error::{Error, Result};

/// `p + q alpha` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElem {
    pub p: BigRational,
    pub q: BigRational,
}

impl FieldElem {
    pub fn zero() -> Self {
        FieldElem { p: BigRational::zero(), q: BigRational::zero() }
    }

    pub fn int(p: i64, q: i64) -> Self {
        FieldElem {
            p: BigRational::from(BigInt::from(p)),
            q: BigRational::from(BigInt::from(q)),
        }
    }

    pub fn rational(p: BigRational) -> Self {
        FieldElem { p, q: BigRational::zero() }
    }

    pub fn half(&self) -> Self {
        let two = BigRational::from(BigInt::from(2));
        FieldElem { p: &self.p / &two, q: &self.q / &two }
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// Sign of the real number, using `alpha` when the alpha part is nonzero.
    pub fn signum(&self, alpha: Option<&AlgebraicNumber>) -> Result<Ordering> {
        if self.q.is_zero() {
            return Ok(self.p.cmp(&BigRational::zero()));
        }
        match alpha {
            Some(a) => a.sign_of(&self.p, &self.q),
            None => Err(Error::Invalid("comparison needs alpha".into())),
        }
    }

    pub fn cmp_with(&self, other: &FieldElem, alpha: Option<&AlgebraicNumber>) -> Result<Ordering> {
        (self.clone() - other.clone()).signum(alpha)
    }

    pub fn approx(&self, alpha: Option<&AlgebraicNumber>) -> f64 {
        use num_traits::ToPrimitive;
        let a = alpha.map(|a| a.to_f64()).unwrap_or(0.0);
        self.p.to_f64().unwrap_or(f64::NAN) + self.q.to_f64().unwrap_or(f64::NAN) * a
    }
}

impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, o: FieldElem) -> FieldElem {
        FieldElem { p: self.p + o.p, q: self.q + o.q }
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, o: FieldElem) -> FieldElem {
        FieldElem { p: self.p - o.p, q: self.q - o.q }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.p.is_zero(), self.q.is_zero()) {
            (_, true) => write!(f, "{}", self.p),
            (true, false) if self.q.is_one() => write!(f, "alpha"),
            (true, false) => write!(f, "{}*alpha", self.q),
            (false, false) => {
                let sign = if self.q.is_negative() { "-" } else { "+" };
                let q = self.q.abs();
                if q.is_one() {
                    write!(f, "{} {} alpha", self.p, sign)
                } else {
                    write!(f, "{} {} {}*alpha", self.p, sign, q)
                }
            }
        }
    }
}

impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Where each tile carries its marked point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PunctureRule {
    LeftEndpoint,
    Barycenter,
    /// The Delone point that generated a Voronoi tile.
    Generator,
}

/// A finite patch of a one-dimensional tiling: consecutive tiles with exact
/// endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tiling1DSample {
    pub letters: Vec<char>,
    pub lengths: BTreeMap<char, FieldElem>,
    /// `letters.len() + 1` increasing endpoints.
    pub endpoints: Vec<FieldElem>,
    pub punctures: Vec<FieldElem>,
    pub puncture_rule: PunctureRule,
    /// Index of the tile whose half-open interval contains 0, if any.
    pub origin_index: Option<usize>,
    pub alpha: Option<AlgebraicNumber>,
    /// Factor by which the geometric lengths were multiplied.
    pub scaling: String,
}

impl Tiling1DSample {
    /// Sample with tiles laid out from `start`, punctured at left endpoints.
    pub fn from_word(
        letters: Vec<char>,
        lengths: BTreeMap<char, FieldElem>,
        start: FieldElem,
        alpha: Option<AlgebraicNumber>,
        scaling: &str,
    ) -> Result<Self> {
        let mut endpoints = Vec::with_capacity(letters.len() + 1);
        endpoints.push(start);
        for c in &letters {
            let l = lengths
                .get(c)
                .ok_or_else(|| Error::Invalid(format!("no length for letter {c:?}")))?;
            let next = endpoints.last().expect("nonempty").clone() + l.clone();
            endpoints.push(next);
        }
        let punctures = endpoints[..letters.len()].to_vec();
        let mut s = Tiling1DSample {
            letters,
            lengths,
            endpoints,
            punctures,
            puncture_rule: PunctureRule::LeftEndpoint,
            origin_index: None,
            alpha,
            scaling: scaling.to_string(),
        };
        s.origin_index = s.locate(&FieldElem::zero())?;
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn word(&self) -> String {
        self.letters.iter().collect()
    }

    pub fn alphabet(&self) -> Vec<char> {
        let mut a: Vec<char> = self.letters.clone();
        a.sort_unstable();
        a.dedup();
        a
    }

    /// Tile whose half-open interval `[left, right)` contains `x`.
    pub fn locate(&self, x: &FieldElem) -> Result<Option<usize>> {
        let alpha = self.alpha.as_ref();
        for i in 0..self.len() {
            let left = x.cmp_with(&self.endpoints[i], alpha)?;
            let right = x.cmp_with(&self.endpoints[i + 1], alpha)?;
            if left != Ordering::Less && right == Ordering::Less {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Checks that tiles abut exactly and have their letter's length.
    pub fn check_abutting(&self) -> Result<()> {
        if self.endpoints.len() != self.letters.len() + 1 {
            return Err(Error::Invalid("endpoint count must be tile count + 1".into()));
        }
        for (i, c) in self.letters.iter().enumerate() {
            let len = self.endpoints[i + 1].clone() - self.endpoints[i].clone();
            if Some(&len) != self.lengths.get(c) {
                return Err(Error::Invalid(format!("tile {i} does not have the length of {c:?}")));
            }
            if len.signum(self.alpha.as_ref())? != Ordering::Greater {
                return Err(Error::Invalid(format!("tile {i} has non-positive length")));
            }
        }
        Ok(())
    }

    /// Same tiles, punctured at barycenters.
    pub fn with_barycenter_punctures(&self) -> Self {
        let mut s = self.clone();
        s.punctures = (0..self.len())
            .map(|i| (self.endpoints[i].clone() + self.endpoints[i + 1].clone()).half())
            .collect();
        s.puncture_rule = PunctureRule::Barycenter;
        s
    }

    /// The first `n` tiles, re-anchored at the same positions.
    pub fn prefix(&self, n: usize) -> Self {
        let n = n.min(self.len());
        let mut s = self.clone();
        s.letters.truncate(n);
        s.endpoints.truncate(n + 1);
        s.punctures.truncate(n);
        s.origin_index = self.origin_index.filter(|&i| i < n);
        s
    }

    pub fn puncture_set(&self) -> Result<DeloneSet1DSample> {
        DeloneSet1DSample::new(self.punctures.clone(), self.alpha.clone())
    }

    pub fn to_json(&self) -> Value {
        let lengths: BTreeMap<String, String> =
            self.lengths.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        json!({
            "letters": self.word(),
            "lengths": lengths,
            "endpoints": self.endpoints.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "punctures": self.punctures.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "puncture_rule": self.puncture_rule,
            "origin_index": self.origin_index,
            "alpha": self.alpha.as_ref().map(|a| a.to_json()),
            "scaling": self.scaling,
        })
    }
}

/// A finite, strictly increasing set of points on the line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeloneSet1DSample {
    pub points: Vec<FieldElem>,
    pub alpha: Option<AlgebraicNumber>,
}

impl DeloneSet1DSample {
    pub fn new(points: Vec<FieldElem>, alpha: Option<AlgebraicNumber>) -> Result<Self> {
        for w in points.windows(2) {
            if w[1].cmp_with(&w[0], alpha.as_ref())? != Ordering::Greater {
                return Err(Error::Invalid("points must be strictly increasing".into()));
            }
        }
        Ok(DeloneSet1DSample { points, alpha })
    }

    pub fn gaps(&self) -> Vec<FieldElem> {
        self.points.windows(2).map(|w| w[1].clone() - w[0].clone()).collect()
    }

    /// `(r, R)`: half the smallest and half the largest gap.
    pub fn radii(&self) -> Result<(FieldElem, FieldElem)> {
        let gaps = self.gaps();
        let alpha = self.alpha.as_ref();
        let mut lo = gaps.first().cloned().ok_or(Error::TooFewPoints)?;
        let mut hi = lo.clone();
        for g in &gaps[1..] {
            if g.cmp_with(&lo, alpha)? == Ordering::Less {
                lo = g.clone();
            }
            if g.cmp_with(&hi, alpha)? == Ordering::Greater {
                hi = g.clone();
            }
        }
        Ok((lo.half(), hi.half()))
    }
}

/// Lattice points `(a1, a2)` with `-alpha <= a2 - a1 alpha < 1`, projected on
/// the line of slope alpha and scaled by `sqrt(1 + alpha^2)`, so that the
/// projection of `a` is `a1 + a2 alpha`: horizontal steps give tiles `a` of
/// length 1, vertical steps tiles `b` of length alpha. The `n_points` points
/// are the origin, `(n_points - 1) / 2` points before it and the rest after.
pub fn cut_and_project_sample(alpha: &AlgebraicNumber, n_points: usize) -> Result<Tiling1DSample> {
    alpha.validate()?;
    if n_points < 2 {
        return Err(Error::TooFewPoints);
    }
    let before = (n_points - 1) / 2;
    let after = n_points - 1 - before;
    let one = BigInt::one();
    // t = a2 - a1 alpha, in window [-alpha, 1)
    let mut back_steps = Vec::with_capacity(before);
    let (mut a1, mut a2) = (BigInt::zero(), BigInt::zero());
    for _ in 0..before {
        // predecessor a - e2 is in the window iff t - 1 >= -alpha
        let s = alpha.sign_of_int(&(&a2 - &one), &(&one - &a1))?;
        if s != Ordering::Less {
            a2 -= &one;
            back_steps.push('b');
        } else {
            a1 -= &one;
            back_steps.push('a');
        }
    }
    let start = FieldElem {
        p: BigRational::from(a1.clone()),
        q: BigRational::from(a2.clone()),
    };
    let mut letters: Vec<char> = back_steps.into_iter().rev().collect();
    let (mut a1, mut a2) = (BigInt::zero(), BigInt::zero());
    for _ in 0..after {
        // successor a + e2 is in the window iff t + 1 < 1, i.e. t < 0
        let s = alpha.sign_of_int(&a2, &-&a1)?;
        if s == Ordering::Less {
            a2 += &one;
            letters.push('b');
        } else {
            a1 += &one;
            letters.push('a');
        }
    }
    let mut lengths = BTreeMap::new();
    lengths.insert('a', FieldElem::int(1, 0));
    lengths.insert('b', FieldElem::int(0, 1));
    let mut s = Tiling1DSample::from_word(
        letters,
        lengths,
        start,
        Some(alpha.clone()),
        "sqrt(1 + alpha^2)",
    )?;
    s.origin_index = Some(before).filter(|&i| i < s.len());
    Ok(s)
}

/// Voronoi tiles of the bounded cells: one tile per point having neighbours
/// on both sides, bounded by the midpoints, punctured at its point. Tile
/// letters name congruence classes (length, then puncture offset), in
/// increasing order.
pub fn voronoi_1d(points: &DeloneSet1DSample) -> Result<Tiling1DSample> {
    if points.points.len() < 3 {
        return Err(Error::TooFewPoints);
    }
    let alpha = points.alpha.as_ref();
    let p = &points.points;
    let mids: Vec<FieldElem> = p.windows(2).map(|w| (w[0].clone() + w[1].clone()).half()).collect();
    let mut shapes: Vec<(FieldElem, FieldElem)> = Vec::new();
    let mut tile_shape = Vec::with_capacity(mids.len() - 1);
    for i in 0..mids.len() - 1 {
        let len = mids[i + 1].clone() - mids[i].clone();
        let off = p[i + 1].clone() - mids[i].clone();
        let key = (len, off);
        let idx = match shapes.iter().position(|s| *s == key) {
            Some(k) => k,
            None => {
                shapes.push(key);
                shapes.len() - 1
            }
        };
        tile_shape.push(idx);
    }
    // order classes by length, then offset
    let mut order: Vec<usize> = (0..shapes.len()).collect();
    let mut err = None;
    order.sort_by(|&x, &y| {
        let c = shapes[x]
            .0
            .cmp_with(&shapes[y].0, alpha)
            .and_then(|o| match o {
                Ordering::Equal => shapes[x].1.cmp_with(&shapes[y].1, alpha),
                o => Ok(o),
            });
        c.unwrap_or_else(|e| {
            err = Some(e);
            Ordering::Equal
        })
    });
    if let Some(e) = err {
        return Err(e);
    }
    const NAMES: &str = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
    if shapes.len() > NAMES.len() {
        return Err(Error::Invalid(format!("more than {} Voronoi tile classes", NAMES.len())));
    }
    let mut letter_of = vec!['?'; shapes.len()];
    for (name, &k) in NAMES.chars().zip(&order) {
        letter_of[k] = name;
    }
    let letters: Vec<char> = tile_shape.iter().map(|&k| letter_of[k]).collect();
    let lengths: BTreeMap<char, FieldElem> =
        (0..shapes.len()).map(|k| (letter_of[k], shapes[k].0.clone())).collect();
    let mut s = Tiling1DSample::from_word(letters, lengths, mids[0].clone(), points.alpha.clone(), "1")?;
    s.punctures = p[1..p.len() - 1].to_vec();
    s.puncture_rule = PunctureRule::Generator;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_points_one_tile() {
        let s = cut_and_project_sample(&AlgebraicNumber::golden(), 2).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.origin_index, Some(0));
        let gap = s.endpoints[1].clone() - s.endpoints[0].clone();
        assert_eq!(&gap, s.lengths.get(&s.letters[0]).unwrap());
        s.check_abutting().unwrap();
    }

    #[test]
    fn golden_has_no_bb_or_aaa() {
        let s = cut_and_project_sample(&AlgebraicNumber::golden(), 2000).unwrap();
        let w = s.word();
        assert!(!w.contains("bb"));
        assert!(!w.contains("aaa"));
        s.check_abutting().unwrap();
    }

    #[test]
    fn voronoi_midpoints() {
        let pts = DeloneSet1DSample::new(
            vec![FieldElem::int(0, 0), FieldElem::int(1, 0), FieldElem::int(3, 0)],
            None,
        )
        .unwrap();
        let v = voronoi_1d(&pts).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v.endpoints[0], FieldElem::rational(BigRational::new(1.into(), 2.into())));
        assert_eq!(v.endpoints[1], FieldElem::int(2, 0));
        assert_eq!(v.punctures, vec![FieldElem::int(1, 0)]);
    }

    #[test]
    fn voronoi_too_few() {
        let pts = DeloneSet1DSample::new(vec![FieldElem::int(0, 0), FieldElem::int(1, 0)], None).unwrap();
        assert_eq!(voronoi_1d(&pts).unwrap_err(), Error::TooFewPoints);
    }

    #[test]
    fn display_forms() {
        assert_eq!(FieldElem::int(3, -1).to_string(), "3 - alpha");
        assert_eq!(FieldElem::int(0, 2).to_string(), "2*alpha");
        assert_eq!(FieldElem::int(-2, 0).to_string(), "-2");
    }
}
