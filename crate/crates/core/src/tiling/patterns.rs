//! Pattern enumeration with empirical finite-local-complexity certification.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::sample::Tiling1DSample;
use crate::error::{Error, Result};

/// A factor of the sample, optionally with one tile of context on each side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pattern {
    pub word: String,
    pub multiplicity: usize,
    pub collared: bool,
    pub left_context: Option<char>,
    pub right_context: Option<char>,
    /// Start indices of the (uncollared) word in the sample.
    #[serde(skip)]
    pub occurrences: Vec<usize>,
}

impl Pattern {
    pub fn len(&self) -> usize {
        self.word.chars().count()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// The full word including context letters.
    pub fn collared_word(&self) -> String {
        let mut s = String::new();
        s.extend(self.left_context);
        s.push_str(&self.word);
        s.extend(self.right_context);
        s
    }
}

/// Distinct factors of length `n` with their start positions.
pub fn factors(letters: &[char], n: usize) -> BTreeMap<Vec<char>, Vec<usize>> {
    let mut out: BTreeMap<Vec<char>, Vec<usize>> = BTreeMap::new();
    if n == 0 || n > letters.len() {
        return out;
    }
    for (i, w) in letters.windows(n).enumerate() {
        out.entry(w.to_vec()).or_default().push(i);
    }
    out
}

/// All patterns of `radius` consecutive tiles, collared with one extra tile on
/// each side when requested. The set is certified by requiring that the first
/// half of the sample already contains every pattern of the whole sample.
pub fn enumerate_patterns(sample: &Tiling1DSample, radius: usize, collared: bool) -> Result<Vec<Pattern>> {
    if radius == 0 {
        return Err(Error::Invalid("pattern radius must be at least one tile".into()));
    }
    let span = if collared { radius + 2 } else { radius };
    if sample.len() < 4 * span {
        return Err(Error::InsufficientSample(format!(
            "{} tiles cannot certify patterns of {span} tiles (need {})",
            sample.len(),
            4 * span
        )));
    }
    let all = factors(&sample.letters, span);
    let half: BTreeSet<Vec<char>> =
        factors(&sample.letters[..sample.len() / 2], span).into_keys().collect();
    if let Some(w) = all.keys().find(|w| !half.contains(*w)) {
        return Err(Error::InsufficientSample(format!(
            "pattern {:?} first appears in the second half of the sample",
            w.iter().collect::<String>()
        )));
    }
    Ok(all
        .into_iter()
        .map(|(w, occ)| {
            let (left, core, right, occurrences) = if collared {
                let core: String = w[1..w.len() - 1].iter().collect();
                (Some(w[0]), core, Some(w[w.len() - 1]), occ.iter().map(|i| i + 1).collect())
            } else {
                (None, w.iter().collect(), None, occ)
            };
            Pattern {
                word: core,
                multiplicity: occurrences.len(),
                collared,
                left_context: left,
                right_context: right,
                occurrences,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::substitution::{substitution_sample, SubstitutionRule};

    #[test]
    fn fibonacci_length_two() {
        let s = substitution_sample(&SubstitutionRule::fibonacci(), 'a', 12, true).unwrap();
        let p = enumerate_patterns(&s, 2, false).unwrap();
        let words: Vec<&str> = p.iter().map(|x| x.word.as_str()).collect();
        assert_eq!(words, vec!["aa", "ab", "ba"]);
    }

    #[test]
    fn prototiles() {
        let s = substitution_sample(&SubstitutionRule::fibonacci(), 'a', 8, true).unwrap();
        let p = enumerate_patterns(&s, 1, false).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.iter().map(|x| x.multiplicity).sum::<usize>(), s.len());
    }

    #[test]
    fn periodic() {
        let r = SubstitutionRule::new(&[('a', "aa")]).unwrap();
        let s = substitution_sample(&r, 'a', 6, true).unwrap();
        for n in 1..=8 {
            assert_eq!(enumerate_patterns(&s, n, false).unwrap().len(), 1);
        }
    }

    #[test]
    fn too_short() {
        let s = substitution_sample(&SubstitutionRule::fibonacci(), 'a', 3, true).unwrap();
        assert!(matches!(enumerate_patterns(&s, 3, false), Err(Error::InsufficientSample(_))));
    }
}
