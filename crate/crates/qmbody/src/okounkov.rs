//! Newton-Okounkov polygons of the line class with respect to `v_+`/`v_-`:
//! the chamber-sweep route through the blowup, the closed form in terms of
//! `muhat`, and mutation detection along ranges of exponents.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cluster::build_cluster;
use crate::error::{Error, Result};
use crate::exactmath::{cmp_with_sqrt, exponent_data, format_rational, int, lcm_denominators, Rational};
use crate::geometry::{self, Point};
use crate::lattice::{
    applies_to, build_lattice, catalog, catalog_curves, flag_point_extension, passes_through, transfer_matrix,
    CatalogCurve, CatalogOptions, CurveShape, DivisorClass, Neighbor, Side, XPoints,
};
use crate::serial;
use crate::surd::Surd;
use crate::zariski::{chamber_sweep, MuValue, NamedClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    Flag,
    Normalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Sweep,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NOPolygon {
    #[serde(with = "serial::points")]
    pub vertices: Vec<Point>,
    pub side: Side,
    pub frame: Frame,
    #[serde(with = "serial::rational")]
    pub s: Rational,
    pub provenance: Provenance,
}

impl NOPolygon {
    pub fn area(&self) -> Surd {
        geometry::area(&self.vertices)
    }

    pub fn is_rational(&self) -> bool {
        self.vertices.iter().all(|p| p[0].is_rational() && p[1].is_rational())
    }

    pub fn same_shape(&self, o: &NOPolygon) -> bool {
        self.vertices == o.vertices
    }
}

/// Everything the sweep route produces for one exponent and side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagSweep {
    pub polygon: NOPolygon,
    pub q: BigInt,
    pub mu: MuValue,
    pub walls: Vec<Rational>,
    pub x_points: XPoints,
    pub candidates: Vec<String>,
}

fn affine_at(a: &Rational, b: &Rational, t: &Surd) -> Surd {
    &Surd::rational(a.clone()) + &(&Surd::rational(b.clone()) * t)
}

/// Sweeps `D - t A_k` and reads `alpha(t)`, `beta(t)` off the flag
/// `(A_k, x_side)`.
pub fn flag_sweep(s: &Rational, opts: &CatalogOptions, side: Side) -> Result<FlagSweep> {
    let c = build_cluster(s)?;
    let basis = build_lattice(&c);
    let k = basis.k;
    let xs = crate::lattice::x_points(&basis);
    let mut curves: Vec<NamedClass> = basis
        .a
        .iter()
        .enumerate()
        .map(|(i, a)| NamedClass::new(format!("A{}", i + 1), a.clone()))
        .collect();
    let records = catalog(&c, opts);
    for r in &records {
        if r.class.square().is_negative() {
            curves.push(NamedClass::new(r.name.clone(), r.class.clone()));
        }
    }
    let ak = basis.a[k - 1].clone();
    let at = match side {
        Side::Plus => xs.plus,
        Side::Minus => xs.minus,
    };
    let host: Option<usize> = match at {
        Neighbor::Exceptional(j) => Some(j - 1),
        Neighbor::Curve => curves.iter().position(|v| v.name == "C"),
        Neighbor::General => None,
    };
    let extension = flag_point_extension(s, at)?;
    let shapes = catalog_curves(opts);
    let sweep = chamber_sweep(&DivisorClass::line(k), &ak, &curves)?;

    let mut lower: Vec<Point> = Vec::new();
    let mut upper: Vec<Point> = Vec::new();
    for ch in &sweep.chambers {
        let dec = &ch.decomposition;
        if let Some(ext) = &extension {
            for &i in dec.support.iter().filter(|&&i| i >= k) {
                let shape = shapes.iter().find(|v| v.name == curves[i].name);
                if let Some(v) = shape {
                    if passes_through(v, ext, k)? {
                        return Err(Error::FlagIncidence(v.name.clone()));
                    }
                }
            }
        }
        let alpha = host
            .and_then(|h| dec.support.iter().position(|&i| i == h))
            .map(|pos| dec.coeffs[pos].clone())
            .unwrap_or_else(|| (Rational::zero(), Rational::zero()));
        let (p0, p1) = dec.p.dot(&ak);
        for t in [Surd::rational(ch.start.clone()), ch.end.clone()] {
            let a = affine_at(&alpha.0, &alpha.1, &t);
            let b = &a + &affine_at(&p0, &p1, &t);
            lower.push([t.clone(), a]);
            upper.push([t, b]);
        }
    }
    lower.extend(upper);
    let e = exponent_data(s)?;
    Ok(FlagSweep {
        polygon: NOPolygon {
            vertices: geometry::canonical(&lower),
            side,
            frame: Frame::Flag,
            s: s.clone(),
            provenance: Provenance::Sweep,
        },
        q: e.q,
        walls: sweep.walls(),
        mu: sweep.mu,
        x_points: xs,
        candidates: curves.into_iter().map(|v| v.name).collect(),
    })
}

pub fn body_sweep(s: &Rational, opts: &CatalogOptions, side: Side) -> Result<NOPolygon> {
    Ok(flag_sweep(s, opts, side)?.polygon)
}

/// Applies the side's transfer matrix to a flag-frame polygon.
pub fn transform_to_normalized(poly: &NOPolygon) -> Result<NOPolygon> {
    let m = transfer_matrix(&exponent_data(&poly.s)?, poly.side);
    let m: Vec<Vec<Surd>> = m.iter().map(|row| row.iter().map(|x| Surd::rational(x.clone())).collect()).collect();
    let pts: Vec<Point> = poly
        .vertices
        .iter()
        .map(|[t, u]| {
            [
                &(&m[0][0] * t) + &(&m[0][1] * u),
                &(&m[1][0] * t) + &(&m[1][1] * u),
            ]
        })
        .collect();
    Ok(NOPolygon {
        vertices: geometry::canonical(&pts),
        frame: Frame::Normalized,
        ..poly.clone()
    })
}

/// One-sided slope of `sigma -> v_1(C, sigma; V)` at `s`, certified by
/// three collinear samples.
pub fn one_sided_slope(v: &CatalogCurve, s: &Rational, right: bool) -> Result<Rational> {
    if v.shape == CurveShape::FollowsGerm {
        return Ok(Rational::one());
    }
    let one = Rational::one();
    let right = right || s <= &one;
    let scale = lcm_denominators([s]) * BigInt::from(1024);
    let mut eps = Rational::new(BigInt::one(), scale);
    for _ in 0..24 {
        let two_eps = &eps + &eps;
        let (a, b, c) = if right {
            (s.clone(), s + &eps, s + &two_eps)
        } else {
            (s - &two_eps, s - &eps, s.clone())
        };
        if a >= one {
            let (va, vb, vc) = (v.value_at(&a)?, v.value_at(&b)?, v.value_at(&c)?);
            if &vb - &va == &vc - &vb {
                return Ok((vb - va) / &eps);
            }
        }
        eps /= int(2);
    }
    Err(Error::DerivativeUnstable(v.name.clone()))
}

/// `muhat` together with the curve realising it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuHat {
    #[serde(with = "serial::surd")]
    pub value: Surd,
    pub witness: String,
    pub supraminimal: bool,
    /// Another curve with the same value and slope, if any.
    pub tie: Option<String>,
}

/// Catalog curves attaining the largest `v_1/deg` at `s`.
fn leaders(s: &Rational, opts: &CatalogOptions) -> Result<(Rational, Vec<CatalogCurve>)> {
    let mut best: Option<Rational> = None;
    let mut who: Vec<CatalogCurve> = Vec::new();
    for v in catalog_curves(opts) {
        if !applies_to(&v, s)? {
            continue;
        }
        let x = v.value_at(s)? / Rational::from_integer(v.degree.clone());
        match best.as_ref().map(|b| x.cmp(b)) {
            None | Some(Ordering::Greater) => {
                best = Some(x);
                who = vec![v];
            }
            Some(Ordering::Equal) => who.push(v),
            Some(Ordering::Less) => {}
        }
    }
    Ok((best.expect("the curve itself is always in the catalog"), who))
}

/// Among tied leaders, the one that stays largest on the given side.
fn pick_witness(s: &Rational, who: &[CatalogCurve], side: Side) -> Result<(CatalogCurve, Rational, Option<String>)> {
    let right = side == Side::Plus;
    let mut scored = Vec::new();
    for v in who {
        let slope = one_sided_slope(v, s, right)? / Rational::from_integer(v.degree.clone());
        scored.push((v.clone(), slope));
    }
    // Just right of s the largest slope wins; just left, the smallest.
    scored.sort_by(|a, b| if right { b.1.cmp(&a.1) } else { a.1.cmp(&b.1) });
    let tie = scored.get(1).filter(|x| x.1 == scored[0].1).map(|x| x.0.name.clone());
    let (v, slope) = scored.swap_remove(0);
    Ok((v, slope, tie))
}

pub fn muhat(s: &Rational, opts: &CatalogOptions) -> Result<MuHat> {
    muhat_side(s, opts, Side::Plus)
}

fn muhat_side(s: &Rational, opts: &CatalogOptions, side: Side) -> Result<MuHat> {
    let (best, who) = leaders(s, opts)?;
    if cmp_with_sqrt(&best, s) != Ordering::Greater {
        return Ok(MuHat { value: Surd::sqrt(s), witness: "minimal".into(), supraminimal: false, tie: None });
    }
    let (v, _, tie) = pick_witness(s, &who, side)?;
    Ok(MuHat { value: Surd::rational(best), witness: v.name, supraminimal: true, tie })
}

/// `lambda = s / muhat`, which is `sqrt(s)` for minimal valuations.
pub fn lambda(s: &Rational, opts: &CatalogOptions) -> Result<Surd> {
    let m = muhat(s, opts)?;
    Ok(&Surd::rational(s.clone()) / &m.value)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub polygon: NOPolygon,
    pub muhat: MuHat,
    #[serde(with = "serial::surd")]
    pub lambda: Surd,
    /// Slope of the witness divided by its degree, when supraminimal.
    #[serde(with = "serial::rational_opt")]
    pub c: Option<Rational>,
}

/// The polygon determined by `muhat`, `lambda` and the witness slope `c`.
pub fn closed_polygon(s: &Rational, mu: &Rational, c: &Rational, side: Side) -> Vec<Point> {
    let lam = s / mu;
    let z = Rational::zero();
    let p = |t: &Rational, u: Rational| geometry::point(t.clone(), u);
    let sign = side.sign();
    geometry::canonical(&[
        p(&z, z.clone()),
        p(&lam, z.clone()),
        p(mu, &sign * c),
        p(&lam, &sign / mu),
    ])
}

fn minimal_polygon(s: &Rational, side: Side) -> Vec<Point> {
    let r = Surd::sqrt(s);
    let h = &r.recip() * &side.sign();
    geometry::triangle(r.clone(), r, h)
}

pub fn body_closed_form(s: &Rational, opts: &CatalogOptions, side: Side) -> Result<ClosedForm> {
    let m = muhat_side(s, opts, side)?;
    if let Some(other) = &m.tie {
        return Err(Error::WitnessTie(m.witness.clone(), other.clone()));
    }
    let wrap = |vertices| NOPolygon {
        vertices,
        side,
        frame: Frame::Normalized,
        s: s.clone(),
        provenance: Provenance::ClosedForm,
    };
    if !m.supraminimal {
        return Ok(ClosedForm {
            polygon: wrap(minimal_polygon(s, side)),
            lambda: m.value.clone(),
            muhat: m,
            c: None,
        });
    }
    let mu = m.value.as_rational().expect("supraminimal values are rational").clone();
    let (_, who) = leaders(s, opts)?;
    let (_, c, _) = pick_witness(s, &who, side)?;
    Ok(ClosedForm {
        polygon: wrap(closed_polygon(s, &mu, &c, side)),
        lambda: Surd::rational(s / &mu),
        muhat: m,
        c: Some(c),
    })
}

/// Both routes for one exponent, with a comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BodyReport {
    #[serde(with = "serial::rational")]
    pub s: Rational,
    pub d: u32,
    pub side: Side,
    pub flag: NOPolygon,
    pub normalized: NOPolygon,
    pub closed_form: ClosedForm,
    #[serde(with = "serial::surd")]
    pub mu_flag: Surd,
    #[serde(with = "serial::rational_vec")]
    pub walls: Vec<Rational>,
    pub routes_agree: bool,
}

pub fn body_report(s: &Rational, opts: &CatalogOptions, side: Side) -> Result<BodyReport> {
    let fs = flag_sweep(s, opts, side)?;
    let normalized = transform_to_normalized(&fs.polygon)?;
    let closed_form = body_closed_form(s, opts, side)?;
    Ok(BodyReport {
        s: s.clone(),
        d: opts.degree,
        side,
        routes_agree: normalized.same_shape(&closed_form.polygon),
        flag: fs.polygon,
        normalized,
        closed_form,
        mu_flag: fs.mu.exact,
        walls: fs.walls,
    })
}

/// An affine piece `i + j*sigma` of a curve's value function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuePiece {
    pub start: Rational,
    pub end: Rational,
    pub i: Rational,
    pub j: Rational,
}

fn line_at(v: &CatalogCurve, x: &Rational, right: bool) -> Result<(Rational, Rational)> {
    let j = one_sided_slope(v, x, right)?;
    Ok((v.value_at(x)? - &j * x, j))
}

/// Reconstructs the concave piecewise-linear value function of a catalog
/// curve on `[lo, hi]` from exact evaluations.
pub fn value_pieces(v: &CatalogCurve, lo: &Rational, hi: &Rational) -> Result<Vec<ValuePiece>> {
    let la = line_at(v, lo, true)?;
    let lb = line_at(v, hi, false)?;
    let mut out: Vec<ValuePiece> = Vec::new();
    split(v, lo.clone(), hi.clone(), la, lb, &mut out, 0)?;
    Ok(out)
}

fn split(
    v: &CatalogCurve,
    a: Rational,
    b: Rational,
    la: (Rational, Rational),
    lb: (Rational, Rational),
    out: &mut Vec<ValuePiece>,
    depth: usize,
) -> Result<()> {
    let mut push = |start: Rational, end: Rational, (i, j): (Rational, Rational)| {
        match out.last_mut() {
            Some(last) if last.i == i && last.j == j => last.end = end,
            _ => out.push(ValuePiece { start, end, i, j }),
        }
    };
    if la == lb || a == b {
        push(a, b, la);
        return Ok(());
    }
    if depth > 64 || la.1 <= lb.1 {
        return Err(Error::DerivativeUnstable(v.name.clone()));
    }
    let x = (&lb.0 - &la.0) / (&la.1 - &lb.1);
    let on_a = &la.0 + &la.1 * &x;
    if v.value_at(&x)? == on_a {
        push(a, x.clone(), la);
        push(x, b, lb);
        return Ok(());
    }
    let left = line_at(v, &x, false)?;
    let right = line_at(v, &x, true)?;
    split(v, a, x.clone(), la, left, out, depth + 1)?;
    split(v, x, b, right, lb, out, depth + 1)
}

/// Rational roots of `j^2 x^2 + (2ij - deg^2) x + i^2 = 0` in `[lo, hi]`.
fn sqrt_crossings(p: &ValuePiece, deg: &Rational) -> Vec<Rational> {
    let a = &p.j * &p.j;
    let b = int(2) * &p.i * &p.j - deg * deg;
    let c = &p.i * &p.i;
    let roots = if a.is_zero() {
        if b.is_zero() {
            vec![]
        } else {
            vec![-(c / b)]
        }
    } else {
        let disc = &b * &b - int(4) * &a * &c;
        match crate::exactmath::rational_sqrt(&disc) {
            Some(r) if !disc.is_negative() => {
                vec![(-&b - &r) / (int(2) * &a), (-&b + r) / (int(2) * &a)]
            }
            _ => vec![],
        }
    };
    roots.into_iter().filter(|x| x >= &p.start && x <= &p.end).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutationReport {
    #[serde(with = "serial::rational")]
    pub s0: Rational,
    pub left: NOPolygon,
    pub right: NOPolygon,
    /// Largest squared distance from a vertex of one limit to the nearest
    /// vertex of the other.
    #[serde(with = "serial::surd")]
    pub displacement: Surd,
    pub witness_left: String,
    pub witness_right: String,
    pub classification: String,
}

/// Candidate exponents in `(lo, hi)` where the body may change shape.
pub fn mutation_candidates(lo: &Rational, hi: &Rational, opts: &CatalogOptions) -> Result<Vec<Rational>> {
    let mut pieces: Vec<(Rational, Vec<ValuePiece>)> = Vec::new();
    for v in catalog_curves(opts) {
        let deg = Rational::from_integer(v.degree.clone());
        pieces.push((deg, value_pieces(&v, lo, hi)?));
    }
    let mut out: Vec<Rational> = Vec::new();
    for (deg, ps) in &pieces {
        for p in ps {
            out.push(p.start.clone());
            out.push(p.end.clone());
            out.extend(sqrt_crossings(p, deg));
        }
    }
    for (x, (da, pa)) in pieces.iter().enumerate() {
        for (db, pb) in pieces.iter().skip(x + 1) {
            for a in pa {
                for b in pb {
                    let den = &a.j * db - &b.j * da;
                    if den.is_zero() {
                        continue;
                    }
                    let x = (&b.i * da - &a.i * db) / den;
                    let lo_ok = x >= a.start && x >= b.start;
                    let hi_ok = x <= a.end && x <= b.end;
                    if lo_ok && hi_ok {
                        out.push(x);
                    }
                }
            }
        }
    }
    out.retain(|x| x > lo && x < hi);
    out.sort();
    out.dedup();
    Ok(out)
}

/// Left and right limits of the plus-side body at `s0`, if supraminimal.
pub fn limits_at(s0: &Rational, opts: &CatalogOptions) -> Result<Option<(ClosedForm, ClosedForm)>> {
    let (best, who) = leaders(s0, opts)?;
    if cmp_with_sqrt(&best, s0) != Ordering::Greater {
        return Ok(None);
    }
    let build = |side: Side| -> Result<ClosedForm> {
        let (v, c, _) = pick_witness(s0, &who, side)?;
        Ok(ClosedForm {
            polygon: NOPolygon {
                vertices: closed_polygon(s0, &best, &c, Side::Plus),
                side: Side::Plus,
                frame: Frame::Normalized,
                s: s0.clone(),
                provenance: Provenance::ClosedForm,
            },
            muhat: MuHat { value: Surd::rational(best.clone()), witness: v.name, supraminimal: true, tie: None },
            lambda: Surd::rational(s0 / &best),
            c: Some(c),
        })
    };
    Ok(Some((build(Side::Minus)?, build(Side::Plus)?)))
}

pub fn sweep_mutations(lo: &Rational, hi: &Rational, opts: &CatalogOptions) -> Result<Vec<MutationReport>> {
    let mut out = Vec::new();
    for s0 in mutation_candidates(lo, hi, opts)? {
        let Some((left, right)) = limits_at(&s0, opts)? else {
            continue;
        };
        if left.polygon.same_shape(&right.polygon) {
            continue;
        }
        let displacement = std::cmp::max(
            geometry::vertex_displacement(&left.polygon.vertices, &right.polygon.vertices),
            geometry::vertex_displacement(&right.polygon.vertices, &left.polygon.vertices),
        );
        let (wl, wr) = (left.muhat.witness.clone(), right.muhat.witness.clone());
        let classification = if wl == wr {
            format!("supraminimal curve {wr} changes slope at {}", format_rational(&s0))
        } else {
            format!("supraminimal witness passes from {wl} to {wr} at {}", format_rational(&s0))
        };
        out.push(MutationReport {
            s0,
            left: left.polygon,
            right: right.polygon,
            displacement,
            witness_left: wl,
            witness_right: wr,
            classification,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    fn pts(v: &[(Rational, Rational)]) -> Vec<Point> {
        geometry::canonical(&v.iter().map(|(a, b)| geometry::point(a.clone(), b.clone())).collect::<Vec<_>>())
    }

    #[test]
    fn nodal_cubic_quadrilateral() {
        let s = rat(48, 7);
        let opts = CatalogOptions::new(3);
        let expect = pts(&[
            (int(0), int(0)),
            (rat(144, 55), int(0)),
            (rat(144, 55), rat(21, 55)),
            (rat(55, 21), rat(1, 3)),
        ]);
        let cf = body_closed_form(&s, &opts, Side::Plus).unwrap();
        assert_eq!(cf.polygon.vertices, expect);
        assert_eq!(cf.muhat.witness, "D1");
        assert_eq!(cf.c, Some(rat(1, 3)));
        let sweep = transform_to_normalized(&body_sweep(&s, &opts, Side::Plus).unwrap()).unwrap();
        assert_eq!(sweep.vertices, expect);
        assert_eq!(lambda(&s, &opts).unwrap(), Surd::rational(rat(144, 55)));
    }

    #[test]
    fn line_and_conic() {
        for s in [rat(3, 2), int(4), int(10)] {
            let r = body_report(&s, &CatalogOptions::new(1), Side::Plus).unwrap();
            assert!(r.routes_agree, "{s}");
            assert_eq!(r.normalized.vertices, pts(&[(int(0), int(0)), (int(1), int(0)), (s.clone(), int(1))]));
        }
        let r = body_report(&int(3), &CatalogOptions::new(2), Side::Plus).unwrap();
        assert!(r.routes_agree);
        assert_eq!(r.normalized.vertices, pts(&[(int(0), int(0)), (int(2), int(0)), (rat(3, 2), rat(1, 2))]));
    }

    #[test]
    fn minus_side_routes_agree() {
        for (d, s) in [(1, int(3)), (2, rat(9, 2)), (3, rat(48, 7)), (3, rat(13, 2)), (2, rat(3, 2))] {
            let r = body_report(&s, &CatalogOptions::new(d), Side::Minus).unwrap();
            assert!(r.routes_agree, "d = {d}, s = {s}: {:?} vs {:?}", r.normalized.vertices, r.closed_form.polygon.vertices);
            assert_eq!(r.normalized.area(), Surd::rational(rat(1, 2)));
        }
    }

    #[test]
    fn conic_mutation() {
        let m = sweep_mutations(&int(1), &int(5), &CatalogOptions::new(2)).unwrap();
        let at: Vec<_> = m.iter().map(|r| r.s0.clone()).collect();
        assert_eq!(at, vec![int(2)]);
        assert_eq!(m[0].witness_right, "T");
    }

    #[test]
    fn value_pieces_of_nodal_cubic() {
        let d1 = catalog_curves(&CatalogOptions::new(3)).into_iter().find(|v| v.name == "D1").unwrap();
        let ps = value_pieces(&d1, &int(1), &int(9)).unwrap();
        let shape: Vec<_> = ps.iter().map(|p| (p.end.clone(), p.i.clone(), p.j.clone())).collect();
        assert_eq!(shape, vec![(int(7), int(1), int(1)), (int(9), int(8), int(0))]);
    }
}
