//! Numbers of the form `a + b*sqrt(r)` with rational `a`, `b`, `r`.
//!
//! Bodies of minimal valuations have vertices involving `sqrt(s)`; this keeps
//! them exact. Two surds can be combined only when their radicands differ by a
//! rational square factor, which is always the case inside one body.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{format_rational, parse_rational, rational_sqrt, to_f64, Rational};

#[derive(Clone)]
pub struct Surd {
    a: Rational,
    b: Rational,
    r: Rational,
}

impl Surd {
    pub fn rational(a: Rational) -> Self {
        Surd { a, b: Rational::zero(), r: Rational::zero() }
    }

    /// `a + b*sqrt(r)`, folded to a rational when `r` is a square.
    pub fn new(a: Rational, b: Rational, r: Rational) -> Self {
        assert!(!r.is_negative(), "negative radicand");
        if b.is_zero() {
            return Surd::rational(a);
        }
        match rational_sqrt(&r) {
            Some(root) => Surd::rational(a + b * root),
            None => {
                let (c, r) = square_free(&r);
                Surd { a, b: b * c, r }
            }
        }
    }

    pub fn sqrt(r: &Rational) -> Self {
        Surd::new(Rational::zero(), Rational::one(), r.clone())
    }

    pub fn zero() -> Self {
        Surd::rational(Rational::zero())
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn parts(&self) -> (&Rational, &Rational, &Rational) {
        (&self.a, &self.b, &self.r)
    }

    pub fn radicand(&self) -> Option<&Rational> {
        (!self.is_rational()).then_some(&self.r)
    }

    /// Rewrites the irrational part over radicand `r`, if possible.
    fn over(&self, r: &Rational) -> Result<(Rational, Rational)> {
        if self.is_rational() {
            return Ok((self.a.clone(), Rational::zero()));
        }
        if &self.r == r {
            return Ok((self.a.clone(), self.b.clone()));
        }
        match rational_sqrt(&(&self.r / r)) {
            Some(c) => Ok((self.a.clone(), &self.b * c)),
            None => Err(Error::Radicand(format_rational(&self.r), format_rational(r))),
        }
    }

    fn common(x: &Surd, y: &Surd) -> Result<(Rational, [Rational; 4])> {
        let r = if !x.is_rational() { x.r.clone() } else { y.r.clone() };
        let (xa, xb) = x.over(&r)?;
        let (ya, yb) = y.over(&r)?;
        Ok((r, [xa, xb, ya, yb]))
    }

    pub fn try_add(&self, o: &Surd) -> Result<Surd> {
        let (r, [xa, xb, ya, yb]) = Surd::common(self, o)?;
        Ok(Surd::new(xa + ya, xb + yb, r))
    }

    pub fn try_mul(&self, o: &Surd) -> Result<Surd> {
        let (r, [xa, xb, ya, yb]) = Surd::common(self, o)?;
        let a = &xa * &ya + &xb * &yb * &r;
        let b = &xa * &yb + &xb * &ya;
        Ok(Surd::new(a, b, r))
    }

    pub fn recip(&self) -> Surd {
        if self.is_rational() {
            return Surd::rational(self.a.recip());
        }
        let den = &self.a * &self.a - &self.b * &self.b * &self.r;
        Surd::new(&self.a / &den, -(&self.b / &den), self.r.clone())
    }

    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        if sb == Ordering::Equal || sa == sb {
            return if sa == Ordering::Equal { sb } else { sa };
        }
        if sa == Ordering::Equal {
            return sb;
        }
        // Opposite signs: compare a^2 with b^2 r.
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * &self.r;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.signum() == Ordering::Equal
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.a) + to_f64(&self.b) * to_f64(&self.r).sqrt()
    }

    /// Rational bounds `lo <= self <= hi` with `hi - lo <= width`.
    pub fn bracket(&self, width: &Rational) -> (Rational, Rational) {
        if self.is_rational() {
            return (self.a.clone(), self.a.clone());
        }
        let (mut lo, mut hi) = sqrt_bracket(&self.r, &(width / self.b.abs()));
        if self.b.is_negative() {
            std::mem::swap(&mut lo, &mut hi);
        }
        (&self.a + &self.b * lo, &self.a + &self.b * hi)
    }

    pub fn parse(text: &str) -> Result<Surd> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(pos) = t.find("sqrt(") else {
            return Ok(Surd::rational(parse_rational(&t)?));
        };
        let bad = || Error::Parse(text.to_string(), "expected a+b*sqrt(r)".into());
        let inner = t[pos + 5..].strip_suffix(')').ok_or_else(bad)?;
        let r = parse_rational(inner)?;
        let head = &t[..pos];
        let head = head.strip_suffix('*').unwrap_or(head);
        // Split `head` into the rational part and the coefficient of the root.
        let split = head
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        let (a, b) = match split {
            Some(i) => (&head[..i], &head[i..]),
            None => ("", head),
        };
        let a = if a.is_empty() { Rational::zero() } else { parse_rational(a)? };
        let b = match b {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            other => parse_rational(other.strip_prefix('+').unwrap_or(other))?,
        };
        Ok(Surd::new(a, b, r))
    }
}

/// Rational interval around `sqrt(r)` of width at most `width`.
pub fn sqrt_bracket(r: &Rational, width: &Rational) -> (Rational, Rational) {
    if let Some(root) = rational_sqrt(r) {
        return (root.clone(), root);
    }
    let mut lo = Rational::zero();
    let mut hi = if r > &Rational::one() { r.clone() } else { Rational::one() };
    let two = Rational::from_integer(2.into());
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / &two;
        if &(&mid * &mid) < r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

impl From<Rational> for Surd {
    fn from(a: Rational) -> Self {
        Surd::rational(a)
    }
}

impl PartialEq for Surd {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl Eq for Surd {}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd { a: -&self.a, b: -&self.b, r: self.r.clone() }
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        -&self
    }
}

macro_rules! surd_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&Surd> for &Surd {
            type Output = Surd;
            fn $m(self, o: &Surd) -> Surd {
                let f: fn(&Surd, &Surd) -> Result<Surd> = $body;
                f(self, o).expect("surd radicands must agree")
            }
        }
        impl $tr<Surd> for Surd {
            type Output = Surd;
            fn $m(self, o: Surd) -> Surd {
                (&self).$m(&o)
            }
        }
        impl $tr<&Surd> for Surd {
            type Output = Surd;
            fn $m(self, o: &Surd) -> Surd {
                (&self).$m(o)
            }
        }
        impl $tr<&Rational> for &Surd {
            type Output = Surd;
            fn $m(self, o: &Rational) -> Surd {
                self.$m(&Surd::rational(o.clone()))
            }
        }
    };
}

surd_binop!(Add, add, |x, y| x.try_add(y));
surd_binop!(Sub, sub, |x, y| x.try_add(&-y));
surd_binop!(Mul, mul, |x, y| x.try_mul(y));
surd_binop!(Div, div, |x, y| x.try_mul(&y.recip()));

/// Writes `r = c^2 * n` with `n` an integer free of small square factors.
fn square_free(r: &Rational) -> (Rational, Rational) {
    let mut n = r.numer() * r.denom();
    let mut c = Rational::new(BigInt::one(), r.denom().clone());
    let mut p = 2u32;
    while p < 1 << 16 {
        let pp = BigInt::from(p * p);
        if pp > n {
            break;
        }
        while (&n % &pp).is_zero() {
            n /= &pp;
            c *= Rational::from_integer(p.into());
        }
        p += 1;
    }
    (c, Rational::from_integer(n))
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", format_rational(&self.a));
        }
        let root = format!("sqrt({})", format_rational(&self.r));
        let coef = if self.b.is_one() {
            root
        } else if self.b == -Rational::one() {
            format!("-{root}")
        } else {
            format!("{}*{root}", format_rational(&self.b))
        };
        if self.a.is_zero() {
            write!(f, "{coef}")
        } else if coef.starts_with('-') {
            write!(f, "{}{coef}", format_rational(&self.a))
        } else {
            write!(f, "{}+{coef}", format_rational(&self.a))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};

    #[test]
    fn arithmetic_in_a_quadratic_field() {
        let s = Surd::sqrt(&rat(7, 2));
        let sq = &s * &s;
        assert_eq!(sq.as_rational(), Some(&rat(7, 2)));
        let inv = s.recip();
        assert_eq!((&s * &inv).as_rational(), Some(&int(1)));
        let two_root_two = Surd::new(int(0), int(2), int(2));
        let root_eight = Surd::sqrt(&int(8));
        assert_eq!(two_root_two, root_eight);
        assert_eq!(Surd::sqrt(&rat(9, 4)).as_rational(), Some(&rat(3, 2)));
    }

    #[test]
    fn ordering_is_exact() {
        let root = Surd::sqrt(&rat(48, 7));
        assert!(Surd::rational(rat(55, 21)) > root);
        assert!(Surd::rational(rat(13, 5)) < root);
        let x = Surd::new(int(3), int(-1), int(9 - 1));
        assert!(x > Surd::zero());
    }

    #[test]
    fn display_round_trip() {
        for x in [
            Surd::sqrt(&int(3)),
            Surd::new(rat(1, 2), rat(-3, 4), int(5)),
            Surd::new(int(2), rat(1, 3), rat(7, 2)),
            Surd::rational(rat(-5, 3)),
        ] {
            let text = x.to_string();
            assert_eq!(Surd::parse(&text).unwrap(), x, "{text}");
        }
    }

    #[test]
    fn brackets_contain_value() {
        let x = Surd::new(int(1), int(-2), int(3));
        let w = rat(1, 1_000_000_000);
        let (lo, hi) = x.bracket(&w);
        assert!(&hi - &lo <= w);
        assert!(Surd::rational(lo) <= x && x <= Surd::rational(hi));
    }
}
