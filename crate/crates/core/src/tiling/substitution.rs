//! Letter substitutions as generators of repetitive samples.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Signed;

use super::sample::{FieldElem, Tiling1DSample};
use crate::error::{Error, Result};

/// Words longer than this are refused rather than materialized.
pub const MAX_SAMPLE_LEN: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionRule {
    pub images: BTreeMap<char, Vec<char>>,
    /// Optional positive integer tile lengths; unit lengths otherwise.
    pub lengths: Option<BTreeMap<char, BigInt>>,
}

impl SubstitutionRule {
    pub fn new(images: &[(char, &str)]) -> Result<Self> {
        let images = images.iter().map(|(c, w)| (*c, w.chars().collect())).collect();
        let rule = SubstitutionRule { images, lengths: None };
        rule.validate()?;
        Ok(rule)
    }

    /// `a -> ab, b -> a`.
    pub fn fibonacci() -> Self {
        Self::new(&[('a', "ab"), ('b', "a")]).expect("valid rule")
    }

    pub fn alphabet(&self) -> Vec<char> {
        self.images.keys().copied().collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.images.is_empty() {
            return Err(Error::Invalid("substitution has no letters".into()));
        }
        for (c, w) in &self.images {
            if w.is_empty() {
                return Err(Error::Invalid(format!("image of {c:?} is empty")));
            }
            if let Some(x) = w.iter().find(|x| !self.images.contains_key(x)) {
                return Err(Error::Invalid(format!("letter {x:?} in image of {c:?} has no image")));
            }
        }
        if let Some(l) = &self.lengths {
            for c in self.images.keys() {
                match l.get(c) {
                    Some(v) if v.is_positive() => {}
                    _ => return Err(Error::Invalid(format!("letter {c:?} needs a positive length"))),
                }
            }
        }
        Ok(())
    }

    /// `m[i][j]` = occurrences of letter `i` in the image of letter `j`.
    pub fn incidence(&self) -> Vec<Vec<u64>> {
        let alpha = self.alphabet();
        let idx = |c: &char| alpha.binary_search(c).expect("validated letter");
        let k = alpha.len();
        let mut m = vec![vec![0u64; k]; k];
        for (j, c) in alpha.iter().enumerate() {
            for x in &self.images[c] {
                m[idx(x)][j] += 1;
            }
        }
        m
    }

    /// Some power of the incidence matrix is strictly positive; by
    /// Wielandt's bound the power `(k-1)^2 + 1` suffices.
    pub fn is_primitive(&self) -> bool {
        let m: Vec<Vec<bool>> = self
            .incidence()
            .into_iter()
            .map(|r| r.into_iter().map(|x| x > 0).collect())
            .collect();
        let k = m.len();
        let mut p = m.clone();
        for _ in 1..(k - 1) * (k - 1) + 1 {
            p = bool_mul(&p, &m);
        }
        p.iter().all(|r| r.iter().all(|&x| x))
    }

    pub fn apply(&self, word: &[char]) -> Vec<char> {
        word.iter().flat_map(|c| self.images[c].iter().copied()).collect()
    }

    pub fn iterate(&self, seed: char, iterations: usize) -> Result<Vec<char>> {
        if !self.images.contains_key(&seed) {
            return Err(Error::Invalid(format!("seed {seed:?} is not in the alphabet")));
        }
        let mut w = vec![seed];
        for _ in 0..iterations {
            let grow: usize = w.iter().map(|c| self.images[c].len()).sum();
            if grow > MAX_SAMPLE_LEN {
                return Err(Error::Invalid(format!(
                    "word would exceed {MAX_SAMPLE_LEN} letters"
                )));
            }
            w = self.apply(&w);
        }
        Ok(w)
    }
}

fn bool_mul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let k = a.len();
    (0..k)
        .map(|i| (0..k).map(|j| (0..k).any(|l| a[i][l] && b[l][j])).collect())
        .collect()
}

/// `rule^iterations(seed)` laid out from 0.
pub fn substitution_sample(
    rule: &SubstitutionRule,
    seed: char,
    iterations: usize,
    require_primitive: bool,
) -> Result<Tiling1DSample> {
    rule.validate()?;
    if require_primitive && !rule.is_primitive() {
        return Err(Error::NonPrimitive);
    }
    let letters = rule.iterate(seed, iterations)?;
    let lengths: BTreeMap<char, FieldElem> = rule
        .alphabet()
        .into_iter()
        .map(|c| {
            let l = rule
                .lengths
                .as_ref()
                .map(|m| FieldElem::rational(m[&c].clone().into()))
                .unwrap_or_else(|| FieldElem::int(1, 0));
            (c, l)
        })
        .collect();
    Tiling1DSample::from_word(letters, lengths, FieldElem::zero(), None, "1")
}
