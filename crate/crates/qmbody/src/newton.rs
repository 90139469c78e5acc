//! Newton polygons of expansions in `x` and `y - xi(x)`, the tropical
//! function `s -> v_1(C, s; f)`, the rank-2 values `v_+`/`v_-` and an
//! independent series-substitution oracle.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{floor, format_rational, int, parse_rational, Rational};
use crate::lattice::Side;

/// Sparse bivariate polynomial with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Rational) -> Self {
        Poly::monomial(c, 0, 0)
    }

    pub fn monomial(c: Rational, i: u32, j: u32) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert((i, j), c);
        }
        p
    }

    pub fn x() -> Self {
        Poly::monomial(Rational::one(), 1, 0)
    }

    pub fn y() -> Self {
        Poly::monomial(Rational::one(), 0, 1)
    }

    /// Builds from `(i, j, coefficient)` triples; repeated exponents add up.
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u32, Rational)>) -> Self {
        let mut p = Poly::zero();
        for (i, j, c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    fn add_term(&mut self, i: u32, j: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn support(&self) -> BTreeSet<(u32, u32)> {
        self.terms.keys().copied().collect()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (&(i, j), c) in &o.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(&k, v)| (k, v * c)).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &o.terms {
                out.add_term(i + k, j + l, a * b);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::constant(Rational::one());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Replaces `x` by `gx` and `y` by `gy`.
    pub fn compose(&self, gx: &Poly, gy: &Poly) -> Poly {
        let mut xpow: Vec<Poly> = vec![Poly::constant(Rational::one())];
        let mut ypow: Vec<Poly> = vec![Poly::constant(Rational::one())];
        let mut out = Poly::zero();
        for (&(i, j), c) in &self.terms {
            while xpow.len() <= i as usize {
                let next = xpow.last().unwrap().mul(gx);
                xpow.push(next);
            }
            while ypow.len() <= j as usize {
                let next = ypow.last().unwrap().mul(gy);
                ypow.push(next);
            }
            out = out.add(&xpow[i as usize].mul(&ypow[j as usize]).scale(c));
        }
        out
    }

    /// Parses an infix expression in `x`, `y`, rational literals and
    /// `+ - * / ^ ( )`. Division is only allowed by constants.
    pub fn parse(text: &str) -> Result<Poly> {
        let tokens = tokenize(text)?;
        let mut p = Parser { tokens: &tokens, pos: 0, text };
        let out = p.expr()?;
        if p.pos != tokens.len() {
            return Err(p.err("trailing input"));
        }
        Ok(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), c) in self.terms.iter() {
            let mut mono = String::new();
            for (v, e) in [("x", i), ("y", j)] {
                match e {
                    0 => {}
                    1 => mono.push_str(&format!("*{v}")),
                    e => mono.push_str(&format!("*{v}^{e}")),
                }
            }
            let (neg, mag) = (c.is_negative(), c.abs());
            let body = if mono.is_empty() {
                format_rational(&mag)
            } else if mag.is_one() {
                mono[1..].to_string()
            } else if mag.is_integer() {
                format!("{}{mono}", format_rational(&mag))
            } else {
                format!("({}){mono}", format_rational(&mag))
            };
            match (first, neg) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Var(char),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let lit: String = chars[start..i].iter().collect();
            out.push(Tok::Num(parse_rational(&lit)?));
        } else if c == 'x' || c == 'y' {
            out.push(Tok::Var(c));
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(text.into(), format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Tok],
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(self.text.into(), format!("{msg} at token {}", self.pos))
    }

    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = if op == '*' {
                acc.mul(&rhs)
            } else {
                let c = match rhs.terms.iter().next() {
                    None => return Err(self.err("division by zero")),
                    Some((&(0, 0), c)) if rhs.terms.len() == 1 => c.clone(),
                    _ => return Err(self.err("division by a non-constant")),
                };
                acc.scale(&c.recip())
            };
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            return Ok(self.factor()?.scale(&-Rational::one()));
        }
        if self.peek_op() == Some('+') {
            self.pos += 1;
            return self.factor();
        }
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let e = match self.tokens.get(self.pos) {
                Some(Tok::Num(n)) if n.is_integer() && !n.is_negative() => n.to_integer(),
                _ => return Err(self.err("exponent must be a non-negative integer")),
            };
            self.pos += 1;
            let e = e.to_u32().filter(|&e| e <= 1000).ok_or_else(|| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        let tok = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Num(n)) => Ok(Poly::constant(n)),
            Some(Tok::Var('x')) => Ok(Poly::x()),
            Some(Tok::Var(_)) => Ok(Poly::y()),
            Some(Tok::Op('(')) => {
                let inner = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(self.err("missing `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => {
                self.pos -= 1;
                Err(self.err("expected a number, variable or `(`"))
            }
        }
    }
}

/// The germ `y = xi(x)`, known up to `x^order` (or exactly).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Jet {
    /// `coeffs[n]` multiplies `x^n`.
    pub coeffs: Vec<Rational>,
    /// `None` when `xi` is an exact polynomial.
    pub order: Option<u32>,
}

impl Jet {
    pub fn exact(coeffs: Vec<Rational>) -> Result<Jet> {
        Jet::check(Jet { coeffs, order: None })
    }

    pub fn truncated(mut coeffs: Vec<Rational>, order: u32) -> Result<Jet> {
        coeffs.truncate(order as usize + 1);
        Jet::check(Jet { coeffs, order: Some(order) })
    }

    /// The line `y = 0`.
    pub fn line() -> Jet {
        Jet { coeffs: Vec::new(), order: None }
    }

    /// An exact jet from a polynomial in `x` alone.
    pub fn from_poly(p: &Poly) -> Result<Jet> {
        let mut coeffs = Vec::new();
        for (&(i, j), c) in p.terms() {
            if j != 0 {
                return Err(Error::Parse(p.to_string(), "jet must not involve y".into()));
            }
            if coeffs.len() <= i as usize {
                coeffs.resize(i as usize + 1, Rational::zero());
            }
            coeffs[i as usize] = c.clone();
        }
        Jet::exact(coeffs)
    }

    fn check(j: Jet) -> Result<Jet> {
        if j.coeffs.iter().take(2).any(|c| !c.is_zero()) {
            return Err(Error::NotTangent);
        }
        Ok(j)
    }

    pub fn as_poly(&self) -> Poly {
        Poly::from_terms(self.coeffs.iter().enumerate().map(|(n, c)| (n as u32, 0, c.clone())))
    }
}

/// Jet order needed to evaluate at exponent `s`.
pub fn required_jet_order(s: &Rational) -> u32 {
    floor(s).to_u32().unwrap_or(u32::MAX)
}

/// Coefficients `a_ij` of `f = sum a_ij x^i (y - xi(x))^j`.
pub fn c_expansion(f: &Poly, xi: &Jet) -> Poly {
    let shifted_y = Poly::y().add(&xi.as_poly());
    f.compose(&Poly::x(), &shifted_y)
}

/// Support of the expansion of `f` in `x` and `y - xi(x)`. The jet must be
/// known at least to order `truncation`.
pub fn c_expand(f: &Poly, xi: &Jet, truncation: u32) -> Result<NewtonSupport> {
    if let Some(have) = xi.order {
        if have < truncation {
            return Err(Error::JetTooShort { have, need: truncation });
        }
    }
    NewtonSupport::new(c_expansion(f, xi).support())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonSupport {
    pub pairs: BTreeSet<(u32, u32)>,
}

impl NewtonSupport {
    pub fn new(pairs: BTreeSet<(u32, u32)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(NewtonSupport { pairs })
    }

    pub fn from_pairs(pairs: &[(u32, u32)]) -> Result<Self> {
        NewtonSupport::new(pairs.iter().copied().collect())
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Minkowski sum, the support of a generic product.
    pub fn minkowski(&self, o: &NewtonSupport) -> NewtonSupport {
        let pairs = self
            .pairs
            .iter()
            .flat_map(|&(i, j)| o.pairs.iter().map(move |&(k, l)| (i + k, j + l)))
            .collect();
        NewtonSupport { pairs }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub width: u32,
    pub height: u32,
    #[serde(with = "crate::serial::rational")]
    pub slope: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    /// Left to right.
    pub vertices: Vec<(u32, u32)>,
    pub edges: Vec<Edge>,
}

fn cross(o: (u32, u32), a: (u32, u32), b: (u32, u32)) -> i64 {
    let (ox, oy) = (o.0 as i64, o.1 as i64);
    (a.0 as i64 - ox) * (b.1 as i64 - oy) - (a.1 as i64 - oy) * (b.0 as i64 - ox)
}

/// Compact faces of the boundary of `conv(support) + R_{>=0}^2`.
pub fn newton_polygon(sup: &NewtonSupport) -> NewtonPolygon {
    // Lowest point in each column, then the lower convex chain from the
    // leftmost column down to the lowest row.
    let mut columns: BTreeMap<u32, u32> = BTreeMap::new();
    for &(i, j) in &sup.pairs {
        columns.entry(i).and_modify(|m| *m = (*m).min(j)).or_insert(j);
    }
    let min_j = *columns.values().min().unwrap();
    let mut chain: Vec<(u32, u32)> = Vec::new();
    let mut best_j = u32::MAX;
    for (&i, &j) in &columns {
        if j >= best_j {
            continue;
        }
        best_j = j;
        while chain.len() >= 2 && cross(chain[chain.len() - 2], chain[chain.len() - 1], (i, j)) <= 0 {
            chain.pop();
        }
        chain.push((i, j));
        if j == min_j {
            break;
        }
    }
    let edges = chain
        .windows(2)
        .map(|w| {
            let (width, height) = (w[1].0 - w[0].0, w[0].1 - w[1].1);
            Edge { width, height, slope: -Rational::new(height.into(), width.into()) }
        })
        .collect();
    NewtonPolygon { vertices: chain, edges }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropicalPiece {
    #[serde(with = "crate::serial::rational")]
    pub start: Rational,
    #[serde(with = "crate::serial::rational_opt")]
    pub end: Option<Rational>,
    /// The piece is `i + s*j`.
    pub i: u32,
    pub j: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropicalFunction {
    pub pieces: Vec<TropicalPiece>,
}

impl TropicalFunction {
    pub fn breakpoints(&self) -> Vec<Rational> {
        self.pieces.iter().filter_map(|p| p.end.clone()).collect()
    }

    pub fn eval(&self, s: &Rational) -> Rational {
        let p = self
            .pieces
            .iter()
            .find(|p| p.end.as_ref().is_none_or(|e| s <= e))
            .expect("last piece is unbounded");
        int(p.i as i64) + s * int(p.j as i64)
    }
}

/// `s -> min(i + s*j)` on `[1, oo)` as explicit affine pieces.
pub fn tropical(sup: &NewtonSupport) -> TropicalFunction {
    let np = newton_polygon(sup);
    // Vertex m is optimal on [w_m/h_m, w_{m+1}/h_{m+1}].
    let walls: Vec<Rational> = np
        .edges
        .iter()
        .map(|e| Rational::new(e.width.into(), e.height.into()))
        .collect();
    let one = Rational::one();
    let mut pieces = Vec::new();
    for (m, &(i, j)) in np.vertices.iter().enumerate() {
        let start = if m == 0 { Rational::zero() } else { walls[m - 1].clone() };
        let end = walls.get(m).cloned();
        if end.as_ref().is_some_and(|e| e <= &one) {
            continue;
        }
        pieces.push(TropicalPiece { start: start.max(one.clone()), end, i, j });
    }
    TropicalFunction { pieces }
}

pub fn v1_eval(sup: &NewtonSupport, s: &Rational) -> Rational {
    sup.pairs
        .iter()
        .map(|&(i, j)| int(i as i64) + s * int(j as i64))
        .min()
        .expect("support is nonempty")
}

fn argmin_js(sup: &NewtonSupport, s: &Rational) -> Vec<u32> {
    let v = v1_eval(sup, s);
    sup.pairs
        .iter()
        .filter(|&&(i, j)| int(i as i64) + s * int(j as i64) == v)
        .map(|&(_, j)| j)
        .collect()
}

pub fn d_plus(sup: &NewtonSupport, s: &Rational) -> u32 {
    argmin_js(sup, s).into_iter().min().unwrap()
}

pub fn d_minus(sup: &NewtonSupport, s: &Rational) -> u32 {
    argmin_js(sup, s).into_iter().max().unwrap()
}

/// `v_+ = (v_1, d_+)` and `v_- = (v_1, -d_-)`, compared lexicographically.
pub fn v_pm(sup: &NewtonSupport, s: &Rational, side: Side) -> (Rational, Rational) {
    let v = v1_eval(sup, s);
    match side {
        Side::Plus => (v, int(d_plus(sup, s) as i64)),
        Side::Minus => (v, -int(d_minus(sup, s) as i64)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleMode {
    Order,
    Dplus,
    Dminus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleValues {
    pub order: Rational,
    pub dplus: u32,
    pub dminus: u32,
}

/// Substitutes `x = t^q`, `y = xi(t^q) + theta*t^p` with `theta` a formal
/// variable and reads off the lowest `t`-order coefficient.
pub fn substitution_values(f: &Poly, xi: &Jet, s: &Rational) -> Result<OracleValues> {
    let (p, q) = (s.numer().to_u32(), s.denom().to_u32());
    let (Some(p), Some(q)) = (p, q) else {
        return Err(Error::TermTooLarge(format!("exponent {}", format_rational(s))));
    };
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    // Variables of the result: x plays t, y plays theta.
    let tq = Poly::monomial(Rational::one(), q, 0);
    let xi_t = xi.as_poly().compose(&tq, &Poly::zero());
    let gy = xi_t.add(&Poly::monomial(Rational::one(), p, 1));
    let g = f.compose(&tq, &gy);
    let low = g.terms().map(|(&(a, _), _)| a).min().ok_or(Error::ZeroPolynomial)?;
    let thetas: Vec<u32> = g.terms().filter(|(&(a, _), _)| a == low).map(|(&(_, b), _)| b).collect();
    Ok(OracleValues {
        order: Rational::new(BigInt::from(low), BigInt::from(q)),
        dplus: *thetas.iter().min().unwrap(),
        dminus: *thetas.iter().max().unwrap(),
    })
}

pub fn substitution_oracle(f: &Poly, xi: &Jet, s: &Rational, mode: OracleMode) -> Result<Rational> {
    let v = substitution_values(f, xi, s)?;
    Ok(match mode {
        OracleMode::Order => v.order,
        OracleMode::Dplus => int(v.dplus as i64),
        OracleMode::Dminus => int(v.dminus as i64),
    })
}

/// Intersection multiplicity with the germ when `f` does not contain it:
/// the value of the last tropical piece.
pub fn stable_value(sup: &NewtonSupport) -> Option<u32> {
    let last = *newton_polygon(sup).vertices.last()?;
    (last.1 == 0).then_some(last.0)
}

/// `gcd` of all exponent differences, used to sanity-check supports.
pub fn support_gcd(sup: &NewtonSupport) -> u32 {
    let first = *sup.pairs.iter().next().unwrap();
    sup.pairs.iter().fold(0u32, |g, &(i, j)| {
        let d = (i as i64 - first.0 as i64).unsigned_abs() as u32;
        let e = (j as i64 - first.1 as i64).unsigned_abs() as u32;
        g.gcd(&d).gcd(&e)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    fn example() -> (Poly, Jet) {
        let f = Poly::parse("(x^2+y^2)^3 - 4*x^2*y^2").unwrap();
        let xi = Jet::exact(vec![int(0), int(0), rat(1, 2)]).unwrap();
        (f, xi)
    }

    #[test]
    fn parser_round_trip() {
        let f = Poly::parse("-x^2/2 + 3*x*y - (y - 1)^2").unwrap();
        assert_eq!(f.coeff(2, 0), rat(-1, 2));
        assert_eq!(f.coeff(1, 1), int(3));
        assert_eq!(f.coeff(0, 2), int(-1));
        assert_eq!(f.coeff(0, 1), int(2));
        assert_eq!(f.coeff(0, 0), int(-1));
        assert_eq!(Poly::parse(&f.to_string()).unwrap(), f);
        assert!(Poly::parse("x/y").is_err());
        assert!(Poly::parse("x +").is_err());
        assert!(Poly::parse("2^x").is_err());
    }

    #[test]
    fn quartic_with_four_vertices() {
        let (f, xi) = example();
        let sup = c_expand(&f, &xi, 4).unwrap();
        for v in [(0, 6), (2, 2), (4, 1), (8, 0)] {
            assert!(sup.pairs.contains(&v));
        }
        let np = newton_polygon(&sup);
        assert_eq!(np.vertices, vec![(0, 6), (2, 2), (4, 1), (8, 0)]);
        let slopes: Vec<_> = np.edges.iter().map(|e| e.slope.clone()).collect();
        assert_eq!(slopes, vec![int(-2), rat(-1, 2), rat(-1, 4)]);
        let tr = tropical(&sup);
        let pieces: Vec<_> = tr.pieces.iter().map(|p| (p.i, p.j)).collect();
        assert_eq!(pieces, vec![(2, 2), (4, 1), (8, 0)]);
        assert_eq!(tr.breakpoints(), vec![int(2), int(4)]);
        assert_eq!(v_pm(&sup, &int(3), Side::Plus), (int(7), int(1)));
        assert_eq!(v_pm(&sup, &int(2), Side::Plus), (int(6), int(1)));
        assert_eq!(d_minus(&sup, &int(2)), 2);
        assert_eq!(stable_value(&sup), Some(8));
    }

    #[test]
    fn jets_are_checked() {
        let (f, _) = example();
        let short = Jet::truncated(vec![int(0), int(0), rat(1, 2)], 2).unwrap();
        assert_eq!(c_expand(&f, &short, 4), Err(Error::JetTooShort { have: 2, need: 4 }));
        assert_eq!(Jet::exact(vec![int(0), int(1)]), Err(Error::NotTangent));
        assert_eq!(required_jet_order(&rat(48, 7)), 6);
    }

    #[test]
    fn trivial_supports() {
        let xi = Jet::exact(vec![int(0), int(0), int(3), int(-1)]).unwrap();
        let x = c_expand(&Poly::x(), &xi, 0).unwrap();
        assert_eq!(x.pairs, BTreeSet::from([(1, 0)]));
        assert_eq!(v_pm(&x, &rat(5, 2), Side::Minus), (int(1), int(0)));
        let curve = Poly::y().sub(&xi.as_poly());
        assert_eq!(c_expand(&curve, &xi, 0).unwrap().pairs, BTreeSet::from([(0, 1)]));
        let tr = tropical(&x);
        assert_eq!(tr.eval(&int(9)), int(1));
    }

    #[test]
    fn nodal_support() {
        let sup = NewtonSupport::from_pairs(&[(0, 2), (1, 1), (8, 0)]).unwrap();
        let np = newton_polygon(&sup);
        assert_eq!(np.vertices.len(), 3);
        assert_eq!(np.edges[0].slope, int(-1));
        assert_eq!(np.edges[1].slope, rat(-1, 7));
        let tr = tropical(&sup);
        assert_eq!(tr.pieces.len(), 2);
        assert_eq!((tr.pieces[0].i, tr.pieces[0].j), (1, 1));
        assert_eq!(tr.breakpoints(), vec![int(7)]);
        assert_eq!(tr.eval(&rat(13, 2)), rat(15, 2));
    }

    #[test]
    fn oracle_matches_support() {
        let (f, xi) = example();
        let sup = c_expand(&f, &xi, 8).unwrap();
        for s in [int(1), rat(3, 2), int(2), int(3), rat(7, 2), int(4), rat(11, 2), int(9)] {
            let o = substitution_values(&f, &xi, &s).unwrap();
            assert_eq!(o.order, v1_eval(&sup, &s), "s = {s}");
            assert_eq!(o.dplus, d_plus(&sup, &s));
            assert_eq!(o.dminus, d_minus(&sup, &s));
        }
        let curve = Poly::y().sub(&xi.as_poly());
        assert_eq!(substitution_oracle(&curve, &xi, &rat(7, 3), OracleMode::Order).unwrap(), rat(7, 3));
        assert_eq!(substitution_oracle(&curve, &xi, &rat(7, 3), OracleMode::Dplus).unwrap(), int(1));
        assert_eq!(substitution_oracle(&Poly::x(), &xi, &int(3), OracleMode::Dplus).unwrap(), int(0));
    }
}
