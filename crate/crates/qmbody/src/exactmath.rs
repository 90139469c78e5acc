//! Exact rationals, canonical continued fractions and the constants derived
//! from the convergents of an exponent `s = p/q`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Largest partial quotient accepted by [`cf_expand`]. Every partial quotient
/// becomes a block of cluster points, so anything larger is not buildable.
pub const MAX_TERM: u64 = 1 << 40;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn big(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Formats as `p/q`, or `n` for integers.
pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `n`, `p/q`, or a terminating decimal such as `6.3`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = |why: &str| Error::Parse(text.to_string(), why.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad("bad numerator"))?;
        let d: BigInt = d.trim().parse().map_err(|_| bad("bad denominator"))?;
        if d.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let neg = whole.starts_with('-');
        let w: BigInt = if whole.is_empty() || whole == "-" {
            BigInt::zero()
        } else {
            whole.parse().map_err(|_| bad("bad integer part"))?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("bad fractional part"));
        }
        let f: BigInt = frac.parse().map_err(|_| bad("bad fractional part"))?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let f = Rational::new(f, scale);
        let w = Rational::from_integer(w.abs());
        let v = w + f;
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = t.parse().map_err(|_| bad("not a rational"))?;
    Ok(Rational::from_integer(n))
}

/// Exact square root when `x` is the square of a rational.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Compares a nonnegative `x` with `sqrt(s)` without leaving the rationals.
pub fn cmp_with_sqrt(x: &Rational, s: &Rational) -> Ordering {
    if x.is_negative() {
        return Ordering::Less;
    }
    (x * x).cmp(s)
}

/// Floor of a rational as a `BigInt`.
pub fn floor(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

pub fn lcm_denominators<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Lossy conversion, used only for presentation (SVG, logs).
pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// A canonical continued fraction `[n1; n2, ..., nr]` with its convergents.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuedFraction {
    pub terms: Vec<u64>,
    /// `(p_j, q_j)` for `j = 1..=r`.
    #[serde(skip)]
    pub convergents: Vec<(BigInt, BigInt)>,
}

impl ContinuedFraction {
    /// Builds from terms, folding a trailing `1` into its predecessor.
    pub fn from_terms(terms: &[u64]) -> Result<Self> {
        if terms.is_empty() || terms.iter().any(|&n| n == 0) {
            return Err(Error::Degenerate(
                "continued fraction terms must be positive".into(),
            ));
        }
        let mut t = terms.to_vec();
        while t.len() > 1 && *t.last().unwrap() == 1 {
            t.pop();
            *t.last_mut().unwrap() += 1;
        }
        let convergents = convergents(&t);
        Ok(ContinuedFraction { terms: t, convergents })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn value(&self) -> Rational {
        let (p, q) = self.convergents.last().expect("nonempty");
        Rational::new(p.clone(), q.clone())
    }

    /// Partial sums `k_j = n_1 + ... + n_j`.
    pub fn partial_sums(&self) -> Vec<u64> {
        self.terms
            .iter()
            .scan(0u64, |acc, &n| {
                *acc += n;
                Some(*acc)
            })
            .collect()
    }

    /// Total number of points of the associated cluster.
    pub fn cluster_size(&self) -> u64 {
        self.terms.iter().sum()
    }
}

/// Expands `s >= 1` into its canonical continued fraction.
pub fn cf_expand(s: &Rational) -> Result<ContinuedFraction> {
    if s < &Rational::one() {
        return Err(Error::ExponentBelowOne(format_rational(s)));
    }
    let mut a = s.numer().clone();
    let mut b = s.denom().clone();
    let mut terms = Vec::new();
    while !b.is_zero() {
        let (n, rem) = a.div_rem(&b);
        let n = n
            .to_u64()
            .filter(|&n| n <= MAX_TERM)
            .ok_or_else(|| Error::TermTooLarge(format!("partial quotient {n}")))?;
        terms.push(n);
        a = b;
        b = rem;
    }
    ContinuedFraction::from_terms(&terms)
}

/// Convergents `(p_j, q_j)` from the recursion with seeds `p_0 = 1, q_0 = 0`.
pub fn convergents(terms: &[u64]) -> Vec<(BigInt, BigInt)> {
    let (mut p2, mut q2) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut out = Vec::with_capacity(terms.len());
    for &n in terms {
        let n = BigInt::from(n);
        let p = &n * &p1 + &p2;
        let q = &n * &q1 + &q2;
        out.push((p.clone(), q.clone()));
        p2 = std::mem::replace(&mut p1, p);
        q2 = std::mem::replace(&mut q1, q);
    }
    out
}

/// Fibonacci numbers with `F_{-1} = 1`, `F_0 = 0`.
pub fn fibonacci(i: i64) -> BigInt {
    assert!(i >= -1, "Fibonacci index below -1");
    let (mut a, mut b) = (-BigInt::one(), BigInt::one());
    for _ in -1..i {
        let c = &a + &b;
        a = std::mem::replace(&mut b, c);
    }
    b
}

/// Constants attached to `s = p/q` and used by the flag computations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentData {
    pub s: Rational,
    pub cf: ContinuedFraction,
    pub r: usize,
    pub k: Vec<u64>,
    pub p: BigInt,
    pub q: BigInt,
    pub p1: BigInt,
    pub q1: BigInt,
    pub p2: BigInt,
    pub q2: BigInt,
    /// `F_{-1}, F_0, ..., F_N`; index `i` of the vector holds `F_{i-1}`.
    pub fib: Vec<BigInt>,
}

impl ExponentData {
    pub fn fib(&self, i: i64) -> &BigInt {
        &self.fib[(i + 1) as usize]
    }

    /// The value of `q''` that makes the plus-side transfer matrix agree
    /// with the flag geometry. Equal to `q2` except for integer `s`, where the
    /// convention `q' = 1` would break `p q' - q p' = (-1)^r` and the flag
    /// point sits on the strict transform of the curve instead.
    pub fn flag_q2(&self) -> BigInt {
        if self.r == 1 {
            BigInt::zero()
        } else {
            self.q2.clone()
        }
    }
}

pub fn exponent_data(s: &Rational) -> Result<ExponentData> {
    exponent_data_with_fib(s, 30)
}

pub fn exponent_data_with_fib(s: &Rational, fib_max: i64) -> Result<ExponentData> {
    let cf = cf_expand(s)?;
    let r = cf.len();
    let (p, q) = cf.convergents[r - 1].clone();
    let (p1, q1) = if r >= 2 {
        cf.convergents[r - 2].clone()
    } else {
        (BigInt::one(), BigInt::one())
    };
    let (p2, q2) = if r % 2 == 1 {
        (p1.clone(), q1.clone())
    } else {
        (&p - &p1, &q - &q1)
    };
    let fib = (-1..=fib_max).map(fibonacci).collect();
    Ok(ExponentData {
        s: s.clone(),
        k: cf.partial_sums(),
        cf,
        r,
        p,
        q,
        p1,
        q1,
        p2,
        q2,
        fib,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(v: &[(i64, i64)]) -> Vec<(BigInt, BigInt)> {
        v.iter().map(|&(a, b)| (a.into(), b.into())).collect()
    }

    #[test]
    fn expands_known_values() {
        assert_eq!(cf_expand(&rat(48, 7)).unwrap().terms, vec![6, 1, 6]);
        assert_eq!(cf_expand(&int(5)).unwrap().terms, vec![5]);
        assert_eq!(cf_expand(&rat(13, 2)).unwrap().terms, vec![6, 2]);
        assert_eq!(cf_expand(&int(1)).unwrap().terms, vec![1]);
        assert!(cf_expand(&rat(1, 2)).is_err());
    }

    #[test]
    fn convergent_tables() {
        assert_eq!(convergents(&[6, 1, 6]), pairs(&[(6, 1), (7, 1), (48, 7)]));
        assert_eq!(convergents(&[5]), pairs(&[(5, 1)]));
        assert_eq!(convergents(&[3, 2]), pairs(&[(3, 1), (7, 2)]));
    }

    #[test]
    fn trailing_one_is_folded() {
        let cf = ContinuedFraction::from_terms(&[3, 1, 1]).unwrap();
        assert_eq!(cf.terms, vec![3, 2]);
        assert_eq!(cf.value(), rat(7, 2));
    }

    #[test]
    fn exponent_constants() {
        let e = exponent_data(&rat(48, 7)).unwrap();
        let b = |n: i64| BigInt::from(n);
        assert_eq!((e.p1.clone(), e.q1.clone(), e.p2.clone(), e.q2.clone()), (b(7), b(1), b(7), b(1)));
        let e = exponent_data(&int(5)).unwrap();
        assert_eq!((e.p1.clone(), e.q1.clone(), e.p2.clone(), e.q2.clone()), (b(1), b(1), b(1), b(1)));
        assert_eq!(e.flag_q2(), b(0));
        let e = exponent_data(&rat(7, 2)).unwrap();
        assert_eq!((e.p1.clone(), e.q1.clone(), e.p2.clone(), e.q2.clone()), (b(3), b(1), b(4), b(1)));
        assert_eq!(e.k, vec![3, 5]);
    }

    #[test]
    fn fibonacci_seeds() {
        let f: Vec<i64> = (-1..=8).map(|i| fibonacci(i).to_i64().unwrap()).collect();
        assert_eq!(f, vec![1, 0, 1, 1, 2, 3, 5, 8, 13, 21]);
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("48/7").unwrap(), rat(48, 7));
        assert_eq!(parse_rational(" 5 ").unwrap(), int(5));
        assert_eq!(parse_rational("6.3").unwrap(), rat(63, 10));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational("14/4").unwrap(), rat(7, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(format_rational(&rat(48, 7)), "48/7");
        assert_eq!(format_rational(&int(-3)), "-3");
    }

    #[test]
    fn sqrt_helpers() {
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rational_sqrt(&rat(2, 1)), None);
        assert_eq!(cmp_with_sqrt(&rat(55, 21), &rat(48, 7)), Ordering::Greater);
        assert_eq!(cmp_with_sqrt(&int(3), &int(9)), Ordering::Equal);
    }
}
