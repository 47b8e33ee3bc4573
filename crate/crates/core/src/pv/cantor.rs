//! Integer-valued continuous functions on the Cantor circle `S¹_α` (the
//! circle cut open along the orbit of 0 under the rotation by
//! `α' = α/(1+α)`), their normal form modulo coboundaries of the rotation,
//! and the frequency module.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::abelian::matrix::{bigint_from_json, bigint_json};
use crate::abelian::{smith_normal_form, IntMatrix};
use crate::error::{Error, Result};
use crate::tiling::{AlgebraicNumber, QuadSurd};

/// A generator of the function group.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Arc {
    /// The constant function 1.
    Circle,
    /// Indicator of the arc from `{l α'}` forward to `{m α'}`, that is
    /// `[l α', m α') mod 1`; empty when `l = m`.
    Interval { l: BigInt, m: BigInt },
}

impl Arc {
    pub fn interval(l: i64, m: i64) -> Self {
        Arc::Interval { l: BigInt::from(l), m: BigInt::from(m) }
    }

    /// The image under the rotation by `α'`.
    pub fn rotated(&self) -> Self {
        match self {
            Arc::Circle => Arc::Circle,
            Arc::Interval { l, m } => Arc::Interval { l: l + 1, m: m + 1 },
        }
    }
}

/// A finite integer combination of arcs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CantorCircleFunction {
    pub terms: Vec<(BigInt, Arc)>,
}

impl CantorCircleFunction {
    pub fn constant(c: i64) -> Self {
        CantorCircleFunction { terms: vec![(BigInt::from(c), Arc::Circle)] }
    }

    pub fn arc(coefficient: i64, l: i64, m: i64) -> Self {
        CantorCircleFunction { terms: vec![(BigInt::from(coefficient), Arc::interval(l, m))] }
    }

    /// Equal arcs merged, empty arcs and zero coefficients dropped, sorted.
    pub fn canonical(&self) -> Self {
        let mut acc: BTreeMap<Arc, BigInt> = BTreeMap::new();
        for (c, a) in &self.terms {
            if matches!(a, Arc::Interval { l, m } if l == m) {
                continue;
            }
            *acc.entry(a.clone()).or_default() += c;
        }
        CantorCircleFunction { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(a, c)| (c, a)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        CantorCircleFunction { terms }.canonical()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        CantorCircleFunction { terms: self.terms.iter().map(|(c, a)| (c * k, a.clone())).collect() }.canonical()
    }

    /// `{"terms": [[c, "circle"] | [c, [l, m]], ...]}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Parse("expected {\"terms\": [[coefficient, \"circle\" | [l, m]], ...]}".into());
        let terms = v.get("terms").and_then(Value::as_array).ok_or_else(bad)?;
        let int = |x: &Value| bigint_from_json(x).ok_or_else(bad);
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            let pair = t.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
            let c = int(&pair[0])?;
            let arc = match &pair[1] {
                Value::String(s) if s == "circle" => Arc::Circle,
                Value::Array(lm) if lm.len() == 2 => Arc::Interval { l: int(&lm[0])?, m: int(&lm[1])? },
                _ => return Err(bad()),
            };
            out.push((c, arc));
        }
        Ok(CantorCircleFunction { terms: out })
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(c, a)| match a {
                Arc::Circle => json!([bigint_json(c), "circle"]),
                Arc::Interval { l, m } => json!([bigint_json(c), [bigint_json(l), bigint_json(m)]]),
            })
            .collect();
        json!({ "terms": terms })
    }

    /// `θ_α f`, the function rotated by `α'`.
    pub fn rotated(&self) -> Self {
        CantorCircleFunction { terms: self.terms.iter().map(|(c, a)| (c.clone(), a.rotated())).collect() }
    }

    /// `f - θ_α f`.
    pub fn coboundary(&self) -> Self {
        self.add(&self.rotated().scale(&BigInt::from(-1)))
    }
}

/// Certified `floor(k α')`.
fn floor_multiple(alpha: &AlgebraicNumber, k: &BigInt) -> Result<BigInt> {
    // k α' >= j  iff  -j + (k - j) α >= 0
    let at_least = |j: &BigInt| -> Result<bool> {
        Ok(alpha.sign_of_int(&-j, &(k - j))? != Ordering::Less)
    };
    let a = alpha.to_f64();
    let guess = (k.to_f64().unwrap_or(0.0) * a / (1.0 + a)).floor();
    let mut j = BigInt::from(guess as i64);
    while !at_least(&j)? {
        j -= 1;
    }
    while at_least(&(&j + 1))? {
        j += 1;
    }
    Ok(j)
}

/// The pair `(n_f, m_f)` with `f ≡ n_f χ_{i_01} + m_f` modulo `(1 - θ_α)`.
///
/// Each arc is first written as `G(end) - G(start)` where `G(z)` counts the
/// points of `[0, z)` over each point of the circle; with `z = p + k α'` this
/// is `p + H_k`, `H_k = G(k α')`. The coboundary of `G(k α')` is
/// `H_k - H_{k+1} + H_1`, so `H_k ≡ k H_1` and `H_1 = χ_{i_01}`.
pub fn cantor_circle_normal_form(f: &CantorCircleFunction, alpha: &AlgebraicNumber) -> Result<(BigInt, BigInt)> {
    alpha.validate()?;
    let mut n_f = BigInt::zero();
    let mut m_f = BigInt::zero();
    for (c, arc) in &f.terms {
        match arc {
            Arc::Circle => m_f += c,
            Arc::Interval { l, m } => {
                if l == m {
                    continue;
                }
                let fl = floor_multiple(alpha, l)?;
                let fm = floor_multiple(alpha, m)?;
                // {m α'} - {l α'} has the sign of (m - l) α' - (fm - fl)
                let p = -(&fm - &fl);
                let q = (m - l) - (&fm - &fl);
                let wraps = alpha.sign_of_int(&p, &q)? == Ordering::Less;
                let end_p = -&fm + BigInt::from(u8::from(wraps));
                let start_p = -&fl;
                m_f += c * (end_p - start_p);
                n_f += c * (m - l);
            }
        }
    }
    Ok((n_f, m_f))
}

/// Rank of the subgroup of normal forms reached by the constant function and
/// the arcs `[0, k α')` for `k = 1..=k_max`.
pub fn cantor_circle_h1_rank(alpha: &AlgebraicNumber, k_max: usize) -> Result<usize> {
    let mut fs = vec![CantorCircleFunction::constant(1)];
    fs.extend((1..=k_max as i64).map(|k| CantorCircleFunction::arc(1, 0, k)));
    let mut rows = Vec::new();
    for f in &fs {
        let (n, m) = cantor_circle_normal_form(f, alpha)?;
        rows.push(vec![n, m]);
    }
    Ok(smith_normal_form(&IntMatrix::from_rows(&rows)).rank)
}

/// The integrals of the two generators `1` and `χ_{i_01}` of `H^1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencyModule {
    /// `α' = α/(1+α)` exactly, for quadratic `α`.
    pub alpha_prime: Option<QuadSurd>,
    /// An open interval containing `α'`.
    pub alpha_prime_bounds: (BigRational, BigRational),
}

impl FrequencyModule {
    /// `∫ f = m_f + n_f α'` for a class with normal form `(n_f, m_f)`.
    pub fn integral(&self, n_f: &BigInt, m_f: &BigInt) -> Option<QuadSurd> {
        let ap = self.alpha_prime.as_ref()?;
        let n = BigRational::from(n_f.clone());
        Some(QuadSurd { a: &ap.a * &n + BigRational::from(m_f.clone()), b: &ap.b * &n, n: ap.n.clone() })
    }
}

pub fn frequency_module(alpha: &AlgebraicNumber) -> Result<FrequencyModule> {
    alpha.validate()?;
    let alpha_prime = alpha.as_surd().map(|a| {
        let one_plus = QuadSurd { a: &a.a + BigRational::one(), b: a.b.clone(), n: a.n.clone() };
        a.div(&one_plus).expect("1 + alpha is not zero")
    });
    let bounds = match (&alpha_prime, alpha) {
        (_, AlgebraicNumber::CfPrefix(d)) => {
            let (lo, hi) = AlgebraicNumber::prefix_interval(d);
            let f = |x: BigRational| &x / (BigRational::one() + &x);
            (f(lo), f(hi))
        }
        (Some(ap), _) => surd_bounds(ap),
        (None, _) => unreachable!("quadratic alpha has a surd"),
    };
    Ok(FrequencyModule { alpha_prime, alpha_prime_bounds: bounds })
}

/// Rational bounds within `10^-12` of a real surd, from the integer square
/// root of a scaled radicand.
fn surd_bounds(x: &QuadSurd) -> (BigRational, BigRational) {
    let scale = BigInt::from(10).pow(12u32);
    // sqrt(n) lies in [r/scale, (r+1)/scale] for r = isqrt(n scale^2)
    let r = (&x.n * &scale * &scale).sqrt();
    let lo = BigRational::new(r.clone(), scale.clone());
    let hi = BigRational::new(r + 1, scale);
    let (s_lo, s_hi) = if x.b.is_negative() { (hi, lo) } else { (lo, hi) };
    (&x.a + &x.b * s_lo, &x.a + &x.b * s_hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nf(f: &CantorCircleFunction) -> (i64, i64) {
        let (n, m) = cantor_circle_normal_form(f, &AlgebraicNumber::golden()).unwrap();
        (n.to_i64().unwrap(), m.to_i64().unwrap())
    }

    #[test]
    fn generators() {
        assert_eq!(nf(&CantorCircleFunction::constant(1)), (0, 1));
        assert_eq!(nf(&CantorCircleFunction::arc(1, 0, 1)), (1, 0));
        assert_eq!(nf(&CantorCircleFunction::arc(1, 1, 2)), (1, 0));
    }

    #[test]
    fn wrapping_arc() {
        // golden alpha' = 0.381966...: {3 alpha'} = 0.1459..., and {2 alpha'} = 0.7639... wraps past 0
        assert_eq!(nf(&CantorCircleFunction::arc(1, 0, 3)), (3, -1));
        assert_eq!(nf(&CantorCircleFunction::arc(1, 2, 0)), (-2, 1));
    }

    #[test]
    fn golden_frequency() {
        let fm = frequency_module(&AlgebraicNumber::golden()).unwrap();
        let ap = fm.alpha_prime.unwrap();
        assert_eq!(ap.a, BigRational::new(3.into(), 2.into()));
        assert_eq!(ap.b, BigRational::new((-1).into(), 2.into()));
        assert_eq!(ap.n, BigInt::from(5));
        let (lo, hi) = fm.alpha_prime_bounds;
        assert!(lo.to_f64().unwrap() < 0.3819660113 && 0.3819660112 < hi.to_f64().unwrap());
    }
}
