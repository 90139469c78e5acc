//! Exact Zariski decomposition against a finite list of candidate curves, and
//! the chamber sweep of `D - t*A` up to the bigness threshold.
//!
//! Nef and big here always mean "relative to the candidates supplied".

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{format_rational, Rational};
use crate::lattice::DivisorClass;
use crate::serial;
use crate::surd::Surd;

/// A candidate irreducible curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedClass {
    pub name: String,
    pub class: DivisorClass,
}

impl NamedClass {
    pub fn new(name: impl Into<String>, class: DivisorClass) -> Self {
        NamedClass { name: name.into(), class }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportEntry {
    pub name: String,
    #[serde(with = "serial::rational")]
    pub coeff: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZariskiResult {
    #[serde(rename = "P")]
    pub p: DivisorClass,
    #[serde(rename = "N")]
    pub n: DivisorClass,
    pub support: Vec<SupportEntry>,
}

/// `c0 + t*c1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineClass {
    pub c0: DivisorClass,
    pub c1: DivisorClass,
}

impl AffineClass {
    pub fn constant(c: DivisorClass) -> Self {
        let k = c.k();
        AffineClass { c0: c, c1: DivisorClass::zero(k) }
    }

    pub fn at(&self, t: &Rational) -> DivisorClass {
        &self.c0 + &self.c1.scale(t)
    }

    pub fn dot(&self, c: &DivisorClass) -> (Rational, Rational) {
        (self.c0.dot(c), self.c1.dot(c))
    }

    /// Coefficients `(a, b, c)` of `a + 2bt + ct^2` for the self-intersection.
    pub fn square(&self) -> (Rational, Rational, Rational) {
        (self.c0.square(), self.c0.dot(&self.c1), self.c1.square())
    }
}

/// Sign of `a + b*t` just to the right of `t0`.
fn sign_right(a: &Rational, b: &Rational, t0: &Rational) -> Ordering {
    let v = a + b * t0;
    match v.cmp(&Rational::zero()) {
        Ordering::Equal => b.cmp(&Rational::zero()),
        o => o,
    }
}

/// Solves `m x = rhs` exactly; `None` when `m` is singular.
pub fn solve(m: &[Vec<Rational>], rhs: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let cols = rhs.len();
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row = m[i].clone();
            row.extend(rhs.iter().map(|r| r[i].clone()));
            row
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, piv);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let pivot_row = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
    }
    Some((0..cols).map(|j| (0..n).map(|i| a[i][n + j].clone()).collect()).collect())
}

/// Negative definiteness via the pivots of elimination without row swaps,
/// which are the ratios of consecutive leading principal minors.
pub fn is_negative_definite(m: &[Vec<Rational>]) -> bool {
    let n = m.len();
    let mut a = m.to_vec();
    for c in 0..n {
        if !a[c][c].is_negative() {
            return false;
        }
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &a[c][c];
            let pivot_row = a[c].clone();
            for (x, y) in a[r].iter_mut().zip(&pivot_row).skip(c) {
                *x -= &f * y;
            }
        }
    }
    true
}

pub fn gram(classes: &[&DivisorClass]) -> Vec<Vec<Rational>> {
    classes.iter().map(|a| classes.iter().map(|b| a.dot(b)).collect()).collect()
}

/// Decomposition of an affine family on a chamber starting at `t0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineDecomposition {
    pub support: Vec<usize>,
    /// `(a, b)` with coefficient `a + b*t`, parallel to `support`.
    pub coeffs: Vec<(Rational, Rational)>,
    pub p: AffineClass,
}

/// Zariski decomposition of `z(t)` valid on `(t0, t0 + delta)`, growing the
/// support from `seed`.
pub fn decompose_affine(
    z: &AffineClass,
    curves: &[NamedClass],
    t0: &Rational,
    seed: &[usize],
) -> Result<AffineDecomposition> {
    let mut support: Vec<usize> = seed.to_vec();
    loop {
        let classes: Vec<&DivisorClass> = support.iter().map(|&i| &curves[i].class).collect();
        let g = gram(&classes);
        if !is_negative_definite(&g) {
            let names: Vec<_> = support.iter().map(|&i| curves[i].name.as_str()).collect();
            return Err(Error::NotNegativeDefinite(names.join(", ")));
        }
        let b0: Vec<Rational> = classes.iter().map(|c| z.c0.dot(c)).collect();
        let b1: Vec<Rational> = classes.iter().map(|c| z.c1.dot(c)).collect();
        let sol = solve(&g, &[b0, b1]).expect("negative definite matrices are invertible");
        let coeffs: Vec<(Rational, Rational)> =
            sol[0].iter().cloned().zip(sol[1].iter().cloned()).collect();
        let mut p = z.clone();
        for (&i, (a, b)) in support.iter().zip(&coeffs) {
            p.c0 = &p.c0 - &curves[i].class.scale(a);
            p.c1 = &p.c1 - &curves[i].class.scale(b);
        }
        let negative: Vec<usize> = (0..curves.len())
            .filter(|i| !support.contains(i))
            .filter(|&i| {
                let (a, b) = p.dot(&curves[i].class);
                sign_right(&a, &b, t0) == Ordering::Less
            })
            .collect();
        if negative.is_empty() {
            if let Some(pos) = coeffs.iter().position(|(a, b)| sign_right(a, b, t0) == Ordering::Less) {
                return Err(Error::NotPseudoEffective(format!(
                    "negative coefficient on {}",
                    curves[support[pos]].name
                )));
            }
            return Ok(AffineDecomposition { support, coeffs, p });
        }
        support.extend(negative);
        support.sort_unstable();
    }
}

pub fn zariski_decompose(z: &DivisorClass, curves: &[NamedClass]) -> Result<ZariskiResult> {
    let zero = Rational::zero();
    // A constant family: signs to the right of 0 are the signs of the values.
    let fam = AffineClass::constant(z.clone());
    let d = decompose_affine(&fam, curves, &zero, &[])?;
    let mut n = DivisorClass::zero(z.k());
    let mut support = Vec::new();
    for (&i, (a, _)) in d.support.iter().zip(&d.coeffs) {
        n = &n + &curves[i].class.scale(a);
        support.push(SupportEntry { name: curves[i].name.clone(), coeff: a.clone() });
    }
    Ok(ZariskiResult { p: d.p.c0, n, support })
}

pub fn is_nef_relative(z: &DivisorClass, curves: &[NamedClass]) -> bool {
    curves.iter().all(|c| !z.dot(&c.class).is_negative()) && !z.square().is_negative()
}

/// One chamber `[start, end]` of the sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chamber {
    pub start: Rational,
    pub end: Surd,
    pub decomposition: AffineDecomposition,
}

/// Certified value of the threshold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuValue {
    #[serde(with = "serial::surd")]
    pub exact: Surd,
    pub rational: bool,
    #[serde(with = "serial::rational")]
    pub lo: Rational,
    #[serde(with = "serial::rational")]
    pub hi: Rational,
}

impl MuValue {
    fn new(exact: Surd) -> Self {
        let width = Rational::new(1.into(), 1_000_000_000_000u64.into());
        let (lo, hi) = exact.bracket(&width);
        MuValue { rational: exact.is_rational(), exact, lo, hi }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sweep {
    pub chambers: Vec<Chamber>,
    pub mu: MuValue,
}

impl Sweep {
    /// Interior walls (chamber boundaries below `mu`).
    pub fn walls(&self) -> Vec<Rational> {
        self.chambers.iter().skip(1).map(|c| c.start.clone()).collect()
    }

    /// Chamber containing `t` (the left one at a wall).
    pub fn chamber_at(&self, t: &Rational) -> &Chamber {
        let ts = Surd::rational(t.clone());
        self.chambers.iter().find(|c| ts <= c.end).unwrap_or_else(|| self.chambers.last().unwrap())
    }

    pub fn n_at(&self, t: &Rational, curves: &[NamedClass]) -> DivisorClass {
        let d = &self.chamber_at(t).decomposition;
        let mut n = DivisorClass::zero(curves[0].class.k());
        for (&i, (a, b)) in d.support.iter().zip(&d.coeffs) {
            n = &n + &curves[i].class.scale(&(a + b * t));
        }
        n
    }

    pub fn p_at(&self, t: &Rational) -> DivisorClass {
        self.chamber_at(t).decomposition.p.at(t)
    }
}

/// Smallest root above `t0` of `a + 2bt + ct^2`, if any.
fn first_root_after(a: &Rational, b: &Rational, c: &Rational, t0: &Rational) -> Option<Surd> {
    let after = |x: &Surd| *x > Surd::rational(t0.clone());
    if c.is_zero() {
        if b.is_zero() {
            return None;
        }
        let r = Surd::rational(-(a / (b + b)));
        return after(&r).then_some(r);
    }
    let disc = b * b - a * c;
    if disc.is_negative() {
        return None;
    }
    let root = Surd::sqrt(&disc);
    let lo = &(&Surd::rational(-b.clone()) - &root) / &Surd::rational(c.clone());
    let hi = &(&Surd::rational(-b.clone()) + &root) / &Surd::rational(c.clone());
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    [lo, hi].into_iter().find(after)
}

/// Sweeps `start - t*direction` from `t = 0` to the threshold where the
/// positive part stops being big.
pub fn chamber_sweep(start: &DivisorClass, direction: &DivisorClass, curves: &[NamedClass]) -> Result<Sweep> {
    let z = AffineClass { c0: start.clone(), c1: -direction };
    let limit = curves.len() + start.k() + 1;
    let mut t = Rational::zero();
    let mut seed = Vec::new();
    let mut chambers = Vec::new();
    loop {
        if chambers.len() >= limit {
            return Err(Error::ChamberLimit(limit));
        }
        let dec = decompose_affine(&z, curves, &t, &seed)?;
        let (a, b, c) = dec.p.square();
        let end_volume = first_root_after(&a, &b, &c, &t);
        let wall = (0..curves.len())
            .filter(|i| !dec.support.contains(i))
            .filter_map(|i| {
                let (a, b) = dec.p.dot(&curves[i].class);
                (b.is_negative()).then(|| -(a / b)).filter(|w| w > &t)
            })
            .min();
        match (end_volume, wall) {
            (Some(mu), w) if w.as_ref().is_none_or(|w| mu <= Surd::rational(w.clone())) => {
                chambers.push(Chamber { start: t, end: mu.clone(), decomposition: dec });
                return Ok(Sweep { chambers, mu: MuValue::new(mu) });
            }
            (_, Some(w)) => {
                seed = dec.support.clone();
                chambers.push(Chamber { start: t, end: Surd::rational(w.clone()), decomposition: dec });
                t = w;
            }
            _ => {
                return Err(Error::Degenerate(format!(
                    "volume never vanishes after t = {}",
                    format_rational(&t)
                )))
            }
        }
    }
}

/// The threshold `sup{t : start - t*direction is big}` relative to `curves`.
pub fn mu_threshold(start: &DivisorClass, direction: &DivisorClass, curves: &[NamedClass]) -> Result<MuValue> {
    Ok(chamber_sweep(start, direction, curves)?.mu)
}
