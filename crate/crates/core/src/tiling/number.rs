//! Exact real numbers used as slopes: quadratic irrationals and continued
//! fraction prefixes, with certified sign tests on `Z + Z alpha`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::abelian::matrix::{bigint_from_json, bigint_json};
use crate::error::{Error, Result};

/// A positive irrational slope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraicNumber {
    /// `(a + b sqrt(n)) / c`.
    Quadratic([BigInt; 4]),
    /// `[a0; a1, a2, ...]`, standing for every irrational with this prefix.
    CfPrefix(Vec<BigInt>),
}

impl AlgebraicNumber {
    pub fn quadratic(a: i64, b: i64, c: i64, n: i64) -> Self {
        AlgebraicNumber::Quadratic([a.into(), b.into(), c.into(), n.into()])
    }

    /// `(sqrt 5 - 1) / 2`.
    pub fn golden() -> Self {
        Self::quadratic(-1, 1, 2, 5)
    }

    /// `sqrt 2 - 1`.
    pub fn silver() -> Self {
        Self::quadratic(-1, 1, 1, 2)
    }

    pub fn cf_prefix(digits: &[i64]) -> Self {
        AlgebraicNumber::CfPrefix(digits.iter().map(|&d| BigInt::from(d)).collect())
    }

    /// Rejects rational or non-positive values and malformed prefixes.
    pub fn validate(&self) -> Result<()> {
        match self {
            AlgebraicNumber::Quadratic([_, b, c, n]) => {
                if c.is_zero() {
                    return Err(Error::Invalid("zero denominator".into()));
                }
                if b.is_zero() || n.is_zero() || is_square(n) {
                    return Err(Error::RationalAlpha);
                }
                if n.is_negative() {
                    return Err(Error::Invalid("negative radicand".into()));
                }
                if self.sign_of_int(&BigInt::zero(), &BigInt::one())? != Ordering::Greater {
                    return Err(Error::Invalid("alpha must be positive".into()));
                }
                Ok(())
            }
            AlgebraicNumber::CfPrefix(d) => {
                if d.is_empty() {
                    return Err(Error::Invalid("empty continued fraction prefix".into()));
                }
                if d[0].is_negative() || d[1..].iter().any(|x| !x.is_positive()) {
                    return Err(Error::Invalid(
                        "continued fraction digits must be a0 >= 0, ai >= 1".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    /// Open interval containing every irrational with the given prefix.
    pub fn prefix_interval(digits: &[BigInt]) -> (BigRational, BigRational) {
        let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
        let (mut p1, mut q1) = (digits[0].clone(), BigInt::one());
        for a in &digits[1..] {
            let p2 = a * &p1 + &p0;
            let q2 = a * &q1 + &q0;
            p0 = std::mem::replace(&mut p1, p2);
            q0 = std::mem::replace(&mut q1, q2);
        }
        let x = BigRational::new(p1.clone(), q1.clone());
        let y = BigRational::new(&p1 + &p0, &q1 + &q0);
        if x < y {
            (x, y)
        } else {
            (y, x)
        }
    }

    /// Exact (or certified) sign of `p + q alpha` for rational `p`, `q`.
    pub fn sign_of(&self, p: &BigRational, q: &BigRational) -> Result<Ordering> {
        let den = p.denom().lcm(q.denom());
        let pi = (p * BigRational::from(den.clone())).to_integer();
        let qi = (q * BigRational::from(den)).to_integer();
        self.sign_of_int(&pi, &qi)
    }

    pub fn sign_of_int(&self, p: &BigInt, q: &BigInt) -> Result<Ordering> {
        if q.is_zero() {
            return Ok(p.cmp(&BigInt::zero()));
        }
        match self {
            AlgebraicNumber::Quadratic([a, b, c, n]) => {
                let big_a = p * c + q * a;
                let big_b = q * b;
                let s = sign_surd(&big_a, &big_b, n);
                Ok(if c.is_negative() { s.reverse() } else { s })
            }
            AlgebraicNumber::CfPrefix(d) => {
                let (lo, hi) = Self::prefix_interval(d);
                let p = BigRational::from(p.clone());
                let q = BigRational::from(q.clone());
                let v_lo = &p + &q * &lo;
                let v_hi = &p + &q * &hi;
                let zero = BigRational::zero();
                let (s_lo, s_hi) = (v_lo.cmp(&zero), v_hi.cmp(&zero));
                // alpha lies in the open interval, so a weak sign on both ends
                // that is strict on one end is certain
                match (s_lo, s_hi) {
                    (Ordering::Less, Ordering::Less | Ordering::Equal)
                    | (Ordering::Equal, Ordering::Less) => Ok(Ordering::Less),
                    (Ordering::Greater, Ordering::Greater | Ordering::Equal)
                    | (Ordering::Equal, Ordering::Greater) => Ok(Ordering::Greater),
                    _ => Err(Error::UncertifiedComparison(format!(
                        "sign of {p} + {q}*alpha is not determined by a prefix of length {}",
                        d.len()
                    ))),
                }
            }
        }
    }

    /// Floating-point approximation, for display only.
    pub fn to_f64(&self) -> f64 {
        match self {
            AlgebraicNumber::Quadratic([a, b, c, n]) => {
                let f = |x: &BigInt| x.to_f64().unwrap_or(f64::NAN);
                (f(a) + f(b) * f(n).sqrt()) / f(c)
            }
            AlgebraicNumber::CfPrefix(d) => {
                let (lo, hi) = Self::prefix_interval(d);
                (lo.to_f64().unwrap_or(f64::NAN) + hi.to_f64().unwrap_or(f64::NAN)) / 2.0
            }
        }
    }

    /// A float approximation together with a bound on its error.
    pub fn approx_with_radius(&self) -> (f64, f64) {
        let v = self.to_f64();
        match self {
            AlgebraicNumber::Quadratic(_) => (v, 1e-12 * v.abs().max(1.0)),
            AlgebraicNumber::CfPrefix(d) => {
                let (lo, hi) = Self::prefix_interval(d);
                let w = (hi - lo).to_f64().unwrap_or(f64::INFINITY);
                (v, w / 2.0 + 1e-12 * v.abs().max(1.0))
            }
        }
    }

    /// Alpha as an exact surd, when quadratic.
    pub fn as_surd(&self) -> Option<QuadSurd> {
        match self {
            AlgebraicNumber::Quadratic([a, b, c, n]) => Some(QuadSurd {
                a: BigRational::new(a.clone(), c.clone()),
                b: BigRational::new(b.clone(), c.clone()),
                n: n.clone(),
            }),
            AlgebraicNumber::CfPrefix(_) => None,
        }
    }
}

impl AlgebraicNumber {
    /// `{"quadratic": [a, b, c, n]}` or `{"cf_prefix": [a0, a1, ...]}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let ints = |v: &Value| -> Result<Vec<BigInt>> {
            v.as_array()
                .ok_or_else(|| Error::Parse("expected an integer array".into()))?
                .iter()
                .map(|x| bigint_from_json(x).ok_or_else(|| Error::Parse(format!("bad integer {x}"))))
                .collect()
        };
        let obj = v
            .as_object()
            .filter(|o| o.len() == 1)
            .ok_or_else(|| Error::Parse("alpha must be an object with one key".into()))?;
        let (k, body) = obj.iter().next().expect("one key");
        let alpha = match k.as_str() {
            "quadratic" => {
                let xs = ints(body)?;
                let arr: [BigInt; 4] = xs
                    .try_into()
                    .map_err(|_| Error::Parse("quadratic alpha needs [a, b, c, n]".into()))?;
                AlgebraicNumber::Quadratic(arr)
            }
            "cf_prefix" => AlgebraicNumber::CfPrefix(ints(body)?),
            other => return Err(Error::Parse(format!("unknown alpha form {other:?}"))),
        };
        alpha.validate()?;
        Ok(alpha)
    }

    /// Command-line form: `golden`, `silver`, `a,b,c,n` (or `quadratic:a,b,c,n`)
    /// for `(a + b sqrt n)/c`, and `[a0;a1,a2,...]` (or `cf:a0,a1,...`) for a
    /// continued fraction prefix.
    pub fn parse_flag(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let ints = |body: &str| -> Result<Vec<BigInt>> {
            if body.len() > 100_000 {
                return Err(Error::Parse("alpha is too long".into()));
            }
            body.split(',')
                .map(|x| x.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad integer {x:?} in alpha"))))
                .collect()
        };
        let alpha = match s.as_str() {
            "golden" => Self::golden(),
            "silver" => Self::silver(),
            _ => {
                if let Some(body) = s.strip_prefix("cf:") {
                    AlgebraicNumber::CfPrefix(ints(body)?)
                } else if let Some(body) = s.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
                    let (head, tail) = body
                        .split_once(';')
                        .ok_or_else(|| Error::Parse("continued fraction needs [a0;a1,...]".into()))?;
                    let mut digits = ints(head)?;
                    if !tail.is_empty() {
                        digits.extend(ints(tail)?);
                    }
                    AlgebraicNumber::CfPrefix(digits)
                } else {
                    let body = s.strip_prefix("quadratic:").unwrap_or(&s);
                    let arr: [BigInt; 4] = ints(body)?.try_into().map_err(|_| {
                        Error::Parse(format!("unknown alpha {text:?}: expected a name, a,b,c,n or [a0;a1,...]"))
                    })?;
                    AlgebraicNumber::Quadratic(arr)
                }
            }
        };
        alpha.validate()?;
        Ok(alpha)
    }

    pub fn to_json(&self) -> Value {
        match self {
            AlgebraicNumber::Quadratic(xs) => {
                json!({ "quadratic": xs.iter().map(bigint_json).collect::<Vec<_>>() })
            }
            AlgebraicNumber::CfPrefix(d) => {
                json!({ "cf_prefix": d.iter().map(bigint_json).collect::<Vec<_>>() })
            }
        }
    }
}

impl Serialize for AlgebraicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgebraicNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        AlgebraicNumber::from_json(&v).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraicNumber::Quadratic([a, b, c, n]) => write!(f, "({a} + {b}*sqrt({n}))/{c}"),
            AlgebraicNumber::CfPrefix(d) => {
                let digits: Vec<String> = d.iter().map(|x| x.to_string()).collect();
                write!(f, "[{}; {}, ...]", digits[0], digits[1..].join(", "))
            }
        }
    }
}

fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

/// Sign of `a + b sqrt(n)` with `n > 0` not a square.
fn sign_surd(a: &BigInt, b: &BigInt, n: &BigInt) -> Ordering {
    let zero = BigInt::zero();
    let sa = a.cmp(&zero);
    let sb = b.cmp(&zero);
    match (sa, sb) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (x, y) if x == y => x,
        _ => {
            // opposite signs: compare a^2 with b^2 n
            let lhs = a * a;
            let rhs = b * b * n;
            match lhs.cmp(&rhs) {
                Ordering::Greater => sa,
                Ordering::Less => sb,
                Ordering::Equal => Ordering::Equal,
            }
        }
    }
}

/// `a + b sqrt(n)` with rational `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadSurd {
    pub a: BigRational,
    pub b: BigRational,
    pub n: BigInt,
}

impl QuadSurd {
    pub fn rational(a: BigRational, n: &BigInt) -> Self {
        QuadSurd { a, b: BigRational::zero(), n: n.clone() }
    }

    pub fn conjugate(&self) -> Self {
        QuadSurd { a: self.a.clone(), b: -self.b.clone(), n: self.n.clone() }
    }

    /// Rational norm `a^2 - n b^2`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from(self.n.clone()) * &self.b * &self.b
    }

    pub fn inverse(&self) -> Option<Self> {
        let nm = self.norm();
        if nm.is_zero() {
            return None;
        }
        let c = self.conjugate();
        Some(QuadSurd { a: &c.a / &nm, b: &c.b / &nm, n: self.n.clone() })
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        Some(self.clone() * other.inverse()?)
    }

    pub fn signum(&self) -> Ordering {
        let den = self.a.denom().lcm(self.b.denom());
        let a = (&self.a * BigRational::from(den.clone())).to_integer();
        let b = (&self.b * BigRational::from(den)).to_integer();
        sign_surd(&a, &b, &self.n)
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN)
            + self.b.to_f64().unwrap_or(f64::NAN) * self.n.to_f64().unwrap_or(f64::NAN).sqrt()
    }
}

impl Add for QuadSurd {
    type Output = QuadSurd;
    fn add(self, o: QuadSurd) -> QuadSurd {
        QuadSurd { a: self.a + o.a, b: self.b + o.b, n: self.n }
    }
}

impl Sub for QuadSurd {
    type Output = QuadSurd;
    fn sub(self, o: QuadSurd) -> QuadSurd {
        QuadSurd { a: self.a - o.a, b: self.b - o.b, n: self.n }
    }
}

impl Neg for QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        QuadSurd { a: -self.a, b: -self.b, n: self.n }
    }
}

impl Mul for QuadSurd {
    type Output = QuadSurd;
    fn mul(self, o: QuadSurd) -> QuadSurd {
        let n = BigRational::from(self.n.clone());
        QuadSurd {
            a: &self.a * &o.a + n * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
            n: self.n,
        }
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let sign = if self.b.is_negative() { "-" } else { "+" };
        write!(f, "{} {} {}*sqrt({})", self.a, sign, self.b.abs(), self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn golden_signs() {
        let g = AlgebraicNumber::golden();
        g.validate().unwrap();
        // 0.618...: 1 - 2 alpha < 0, 2 - 3 alpha > 0
        assert_eq!(g.sign_of(&r(1), &r(-2)).unwrap(), Ordering::Less);
        assert_eq!(g.sign_of(&r(2), &r(-3)).unwrap(), Ordering::Greater);
        // alpha^2 = 1 - alpha is not linear; alpha itself vs 5/8
        assert_eq!(
            g.sign_of(&BigRational::new((-5).into(), 8.into()), &r(1)).unwrap(),
            Ordering::Less
        );
    }

    #[test]
    fn rational_rejected() {
        assert_eq!(AlgebraicNumber::quadratic(1, 1, 2, 4).validate(), Err(Error::RationalAlpha));
        assert_eq!(AlgebraicNumber::quadratic(1, 0, 2, 5).validate(), Err(Error::RationalAlpha));
    }

    #[test]
    fn prefix_certification() {
        // golden ratio conjugate = [0; 1, 1, 1, ...]
        let short = AlgebraicNumber::cf_prefix(&[0, 1, 1]);
        // alpha in (1/2, 2/3): sign of 3 alpha - 2 is uncertified only near 2/3
        assert_eq!(short.sign_of_int(&(-1).into(), &2.into()).unwrap(), Ordering::Greater);
        assert!(short.sign_of_int(&(-3).into(), &5.into()).is_err());
        let long = AlgebraicNumber::cf_prefix(&[0, 1, 1, 1, 1, 1, 1]);
        assert_eq!(long.sign_of_int(&(-3).into(), &5.into()).unwrap(), Ordering::Greater);
    }

    #[test]
    fn surd_arithmetic() {
        let g = AlgebraicNumber::golden().as_surd().unwrap();
        let one = QuadSurd::rational(r(1), &g.n);
        let ratio = g.div(&(one + g.clone())).unwrap();
        assert_eq!(ratio.a, BigRational::new(3.into(), 2.into()));
        assert_eq!(ratio.b, BigRational::new((-1).into(), 2.into()));
        assert!((ratio.to_f64() - 0.381_966_011_250_105).abs() < 1e-12);
    }
    #[test]
    fn flag_forms() {
        let p = AlgebraicNumber::parse_flag;
        assert_eq!(p("golden").unwrap(), AlgebraicNumber::golden());
        assert_eq!(p(" silver ").unwrap(), AlgebraicNumber::silver());
        assert_eq!(p("-1,1,2,5").unwrap(), AlgebraicNumber::golden());
        assert_eq!(p("quadratic:0,1,1,3").unwrap(), AlgebraicNumber::quadratic(0, 1, 1, 3));
        assert_eq!(p("[0;1,2,3]").unwrap(), AlgebraicNumber::cf_prefix(&[0, 1, 2, 3]));
        assert_eq!(p("[2;]").unwrap(), AlgebraicNumber::cf_prefix(&[2]));
        assert_eq!(p("cf:0, 1, 1").unwrap(), AlgebraicNumber::cf_prefix(&[0, 1, 1]));
        for bad in ["", "bronze", "1,2,3", "[0,1]", "cf:", "cf:0,x", "[0;1,,2]"] {
            assert!(matches!(p(bad), Err(Error::Parse(_))), "{bad:?}");
        }
        assert_eq!(p("1,0,1,2"), Err(Error::RationalAlpha));
        assert!(matches!(p("cf:0,0"), Err(Error::Invalid(_))));
    }
}
