//! Weighted clusters of centres of quasimonomial valuations.
//!
//! For `s = [n1; n2, ..., nr]` the cluster has `k = n1 + ... + nr` points.
//! Point `p_i` is free when no partial sum `k_m` satisfies `k_m <= i - 2`;
//! otherwise it is proximate to `p_{i-1}` and to `p_K` with `K` the largest
//! such partial sum. This is the unique pattern compatible with the
//! proximity equality `e_j = sum_{p_i > p_j} e_i`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{cf_expand, format_rational, to_f64, ContinuedFraction, Rational};
use crate::serial;

/// Refuse to materialise clusters larger than this; lazy helpers have no cap.
pub const MAX_CLUSTER_POINTS: u64 = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointKind {
    Free,
    Satellite,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterPoint {
    pub i: usize,
    pub kind: PointKind,
    #[serde(rename = "prox")]
    pub proximate_to: Vec<usize>,
    #[serde(with = "serial::rational")]
    pub weight: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub count: u64,
    #[serde(with = "serial::bigint")]
    pub remainder: BigInt,
    #[serde(with = "serial::rational")]
    pub weight: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cluster {
    #[serde(with = "serial::rational")]
    pub s: Rational,
    pub k: usize,
    pub points: Vec<ClusterPoint>,
    pub blocks: Vec<Block>,
    #[serde(skip)]
    pub cf: ContinuedFraction,
}

impl Cluster {
    pub fn weights(&self) -> Vec<Rational> {
        self.points.iter().map(|p| p.weight.clone()).collect()
    }

    pub fn free_count(&self) -> usize {
        self.points.iter().filter(|p| p.kind == PointKind::Free).count()
    }

    pub fn is_free(&self, i: usize) -> bool {
        self.points[i - 1].kind == PointKind::Free
    }

    /// `true` when `p_i` is proximate to `p_j` (1-based).
    pub fn is_proximate(&self, i: usize, j: usize) -> bool {
        self.points[i - 1].proximate_to.contains(&j)
    }

    /// Indices `i` with `p_i` proximate to `p_j`.
    pub fn proximate_points(&self, j: usize) -> Vec<usize> {
        self.points
            .iter()
            .filter(|p| p.proximate_to.contains(&j))
            .map(|p| p.i)
            .collect()
    }

    pub fn q(&self) -> &BigInt {
        self.s.denom()
    }

    pub fn p(&self) -> &BigInt {
        self.s.numer()
    }
}

/// Euclidean remainders of `(p, q)` with their repetition counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicitySequence {
    /// `(count, value)` pairs.
    #[serde(with = "crate::serial::count_pairs")]
    pub entries: Vec<(u64, BigInt)>,
}

impl MultiplicitySequence {
    /// The multiplicities one point at a time.
    pub fn expand(&self) -> Vec<BigInt> {
        self.entries
            .iter()
            .flat_map(|(n, m)| std::iter::repeat(m.clone()).take(*n as usize))
            .collect()
    }
}

pub fn multiplicity_sequence(p: &BigInt, q: &BigInt) -> Result<MultiplicitySequence> {
    if q < &BigInt::one() || p < q || !p.gcd(q).is_one() {
        return Err(Error::NotCoprime(p.to_string(), q.to_string()));
    }
    let cf = cf_expand(&Rational::new(p.clone(), q.clone()))?;
    let rems = remainders(p, q, &cf.terms);
    let entries = cf
        .terms
        .iter()
        .zip(rems.iter().skip(1))
        .map(|(&n, m)| (n, m.clone()))
        .collect();
    Ok(MultiplicitySequence { entries })
}

/// `m_0 = p, m_1 = q, m_{j+1} = m_{j-1} - n_j m_j`.
fn remainders(p: &BigInt, q: &BigInt, terms: &[u64]) -> Vec<BigInt> {
    let mut m = vec![p.clone(), q.clone()];
    for (j, &n) in terms.iter().enumerate() {
        let next = &m[j] - BigInt::from(n) * &m[j + 1];
        m.push(next);
    }
    m
}

/// Lazy generator of the proximity pattern of the cluster attached to a
/// continued fraction. Never allocates more than the partial sums.
#[derive(Debug, Clone)]
pub struct PatternIter<'a> {
    terms: &'a [u64],
    ks: Vec<u64>,
    i: u64,
    total: u64,
}

impl<'a> PatternIter<'a> {
    pub fn new(cf: &'a ContinuedFraction) -> Self {
        let ks = cf.partial_sums();
        let total = *ks.last().unwrap();
        PatternIter { terms: &cf.terms, ks, i: 0, total }
    }

    /// Pattern of point `i` (1-based) without iterating.
    pub fn pattern_at(ks: &[u64], i: u64) -> (PointKind, Vec<usize>) {
        let limit = i.saturating_sub(2);
        let anchor = if i >= 2 {
            ks.iter().take_while(|&&k| k <= limit).last().copied()
        } else {
            None
        };
        match anchor {
            None if i >= 2 => (PointKind::Free, vec![(i - 1) as usize]),
            None => (PointKind::Free, vec![]),
            Some(kk) => (PointKind::Satellite, vec![kk as usize, (i - 1) as usize]),
        }
    }

    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn terms(&self) -> &[u64] {
        self.terms
    }
}

impl Iterator for PatternIter<'_> {
    type Item = (PointKind, Vec<usize>);

    fn next(&mut self) -> Option<Self::Item> {
        if self.i >= self.total {
            return None;
        }
        self.i += 1;
        Some(Self::pattern_at(&self.ks, self.i))
    }
}

/// Weights `e_1, ..., e_n` of the first `n` points of the cluster of `s`,
/// computed blockwise without materialising the cluster.
pub fn weights_prefix(s: &Rational, n: usize) -> Result<Vec<Rational>> {
    let cf = cf_expand(s)?;
    let (p, q) = (s.numer(), s.denom());
    let rems = remainders(p, q, &cf.terms);
    let mut out = Vec::with_capacity(n);
    for (j, &count) in cf.terms.iter().enumerate() {
        let w = Rational::new(rems[j + 1].clone(), q.clone());
        for _ in 0..count {
            if out.len() == n {
                return Ok(out);
            }
            out.push(w.clone());
        }
    }
    Ok(out)
}

pub fn build_cluster(s: &Rational) -> Result<Cluster> {
    let cf = cf_expand(s)?;
    let size = cf.cluster_size();
    if size > MAX_CLUSTER_POINTS {
        return Err(Error::TermTooLarge(format!(
            "the cluster of {} ({size} points)",
            format_rational(s)
        )));
    }
    let (p, q) = (s.numer().clone(), s.denom().clone());
    let rems = remainders(&p, &q, &cf.terms);
    let blocks: Vec<Block> = cf
        .terms
        .iter()
        .enumerate()
        .map(|(j, &n)| Block {
            count: n,
            remainder: rems[j + 1].clone(),
            weight: Rational::new(rems[j + 1].clone(), q.clone()),
        })
        .collect();
    let weights = blocks
        .iter()
        .flat_map(|b| std::iter::repeat(b.weight.clone()).take(b.count as usize));
    let points = PatternIter::new(&cf)
        .zip(weights)
        .enumerate()
        .map(|(idx, ((kind, proximate_to), weight))| ClusterPoint {
            i: idx + 1,
            kind,
            proximate_to,
            weight,
        })
        .collect::<Vec<_>>();
    Ok(Cluster { s: s.clone(), k: points.len(), points, blocks, cf })
}

/// Longest common prefix of the proximity patterns of two clusters.
pub fn shared_prefix(a: &Cluster, b: &Cluster) -> usize {
    shared_prefix_cf(&a.cf, &b.cf) as usize
}

/// [`shared_prefix`] on continued fractions, without building clusters.
pub fn shared_prefix_cf(a: &ContinuedFraction, b: &ContinuedFraction) -> u64 {
    if a.terms == b.terms {
        return a.cluster_size();
    }
    PatternIter::new(a)
        .zip(PatternIter::new(b))
        .take_while(|(x, y)| x == y)
        .count() as u64
}

/// Where the literal block description ("n_{j+1} + 1 points proximate to
/// p_{k_j}") and the proximity pattern disagree: `(j, literal, actual)`.
pub fn block_count_divergence(c: &Cluster) -> Vec<(usize, u64, u64)> {
    let ks = c.cf.partial_sums();
    let r = ks.len();
    (1..r)
        .filter_map(|j| {
            let literal = c.cf.terms[j] + 1;
            let actual = c.proximate_points(ks[j - 1] as usize).len() as u64;
            (literal != actual).then_some((j, literal, actual))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagramFormat {
    Text,
    Dot,
    Svg,
}

impl std::str::FromStr for DiagramFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "text" | "txt" => Ok(DiagramFormat::Text),
            "dot" => Ok(DiagramFormat::Dot),
            "svg" => Ok(DiagramFormat::Svg),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

pub fn enriques_export(c: &Cluster, format: DiagramFormat) -> String {
    match format {
        DiagramFormat::Text => enriques_text(c),
        DiagramFormat::Dot => enriques_dot(c),
        DiagramFormat::Svg => enriques_svg(c),
    }
}

fn prox_label(p: &ClusterPoint) -> String {
    p.proximate_to
        .iter()
        .map(|j| format!("p{j}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn enriques_text(c: &Cluster) -> String {
    let mut out = format!("cluster s={} k={}\n", format_rational(&c.s), c.k);
    for p in &c.points {
        let kind = match p.kind {
            PointKind::Free => "free",
            PointKind::Satellite => "satellite",
        };
        let _ = write!(out, "p{:<4} {:<9} e={}", p.i, kind, format_rational(&p.weight));
        if !p.proximate_to.is_empty() {
            let _ = write!(out, "  prox {}", prox_label(p));
        }
        out.push('\n');
    }
    out
}

fn enriques_dot(c: &Cluster) -> String {
    let mut out = String::from("digraph enriques {\n  rankdir=LR;\n  node [shape=point];\n  edge [arrowhead=none];\n");
    let _ = writeln!(out, "  label=\"s = {}\";", format_rational(&c.s));
    for p in &c.points {
        let _ = writeln!(
            out,
            "  p{} [xlabel=\"p{} ({})\"];",
            p.i,
            p.i,
            format_rational(&p.weight)
        );
    }
    for p in c.points.iter().skip(1) {
        let class = match p.kind {
            PointKind::Free => "free",
            PointKind::Satellite => "satellite",
        };
        let _ = writeln!(out, "  p{} -> p{} [class=\"{class}\"];", p.i - 1, p.i);
        for &j in p.proximate_to.iter().filter(|&&j| j + 1 != p.i) {
            let _ = writeln!(out, "  p{j} -> p{} [style=dashed, constraint=false];", p.i);
        }
    }
    out.push_str("}\n");
    out
}

/// Directions are in degrees, y axis pointing up; converted when drawing.
fn enriques_layout(c: &Cluster) -> (Vec<(f64, f64)>, Vec<bool>, (f64, f64)) {
    let step = 60.0;
    let mut pos = vec![(0.0, 0.0)];
    let mut curved = vec![false];
    let mut dir: f64 = 45.0;
    let mut turn_right = true;
    let free = c.free_count().max(2) as f64;
    let mut tail_dir = dir;
    for w in c.points.windows(2) {
        let (prev, cur) = (&w[0], &w[1]);
        match cur.kind {
            PointKind::Free => {
                if cur.i > 2 {
                    dir -= 42.0 / free;
                }
                curved.push(true);
            }
            PointKind::Satellite => {
                let anchor = cur.proximate_to[0];
                let continues = prev.kind == PointKind::Satellite && prev.proximate_to[0] == anchor;
                if !continues {
                    dir += if turn_right { -90.0 } else { 90.0 };
                    turn_right = !turn_right;
                }
                curved.push(false);
            }
        }
        if cur.kind == PointKind::Free {
            tail_dir = dir - 42.0 / free;
        }
        let (x, y) = *pos.last().unwrap();
        let rad = dir.to_radians();
        pos.push((x + step * rad.cos(), y + step * rad.sin()));
    }
    // The strict transform of the curve leaves the last free point.
    let last_free = c.free_count().max(1) - 1;
    let (x, y) = pos[last_free];
    let rad = tail_dir.to_radians();
    let tail = (x + 1.5 * step * rad.cos(), y + 1.5 * step * rad.sin());
    (pos, curved, tail)
}

fn enriques_svg(c: &Cluster) -> String {
    let (mut pos, curved, tail) = enriques_layout(c);
    let last_free = c.free_count().max(1) - 1;
    pos.push(tail);
    let pad = 50.0;
    let (minx, maxx) = pos.iter().fold((f64::MAX, f64::MIN), |(a, b), p| (a.min(p.0), b.max(p.0)));
    let (miny, maxy) = pos.iter().fold((f64::MAX, f64::MIN), |(a, b), p| (a.min(p.1), b.max(p.1)));
    let (w, h) = (maxx - minx + 2.0 * pad, maxy - miny + 2.0 * pad);
    let tx = |x: f64| x - minx + pad;
    let ty = |y: f64| maxy - y + pad;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.1}\" height=\"{h:.1}\" viewBox=\"0 0 {w:.1} {h:.1}\">\n"
    );
    let _ = writeln!(out, "<title>Enriques diagram, s = {}</title>", format_rational(&c.s));
    let tail = pos.pop().unwrap();
    let edges = (1..pos.len())
        .map(|i| (pos[i - 1], pos[i], curved[i]))
        .chain(std::iter::once((pos[last_free], tail, true)));
    for (a, b, is_curved) in edges {
        let (x0, y0) = (tx(a.0), ty(a.1));
        let (x1, y1) = (tx(b.0), ty(b.1));
        if is_curved {
            // Bow the edge slightly to the left of its direction.
            let (mx, my) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
            let (dx, dy) = (x1 - x0, y1 - y0);
            let (cx, cy) = (mx + 0.15 * dy, my - 0.15 * dx);
            let _ = writeln!(
                out,
                "<path class=\"free\" d=\"M {x0:.3} {y0:.3} Q {cx:.3} {cy:.3} {x1:.3} {y1:.3}\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>"
            );
        } else {
            let _ = writeln!(
                out,
                "<line class=\"satellite\" x1=\"{x0:.3}\" y1=\"{y0:.3}\" x2=\"{x1:.3}\" y2=\"{y1:.3}\" stroke=\"black\" stroke-width=\"2\"/>"
            );
        }
    }
    let _ = writeln!(
        out,
        "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\" font-style=\"italic\">C</text>",
        tx(tail.0) + 4.0,
        ty(tail.1) - 4.0
    );
    for (p, &(x, y)) in c.points.iter().zip(&pos) {
        let (x, y) = (tx(x), ty(y));
        let _ = writeln!(out, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"4\" fill=\"black\"/>");
        let _ = writeln!(
            out,
            "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\">p{}</text>",
            x + 6.0,
            y - 8.0,
            p.i
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\" font-weight=\"bold\">{}</text>",
            x + 6.0,
            y + 16.0,
            format_rational(&p.weight)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Sum of squared weights; equals `s` for every cluster.
pub fn weight_square_sum(c: &Cluster) -> Rational {
    c.points.iter().map(|p| &p.weight * &p.weight).sum()
}

/// Largest violation `e_j - sum_{i > j} e_i` over `j < k`; zero when the
/// proximity equality holds everywhere.
pub fn proximity_defect(c: &Cluster) -> Rational {
    (1..c.k)
        .map(|j| {
            let rhs: Rational = c.proximate_points(j).iter().map(|&i| c.points[i - 1].weight.clone()).sum();
            let d = &c.points[j - 1].weight - rhs;
            if d < Rational::zero() {
                -d
            } else {
                d
            }
        })
        .max()
        .unwrap_or_else(Rational::zero)
}

pub fn approx_weights(c: &Cluster) -> Vec<f64> {
    c.points.iter().map(|p| to_f64(&p.weight)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn cluster_48_7() {
        let c = build_cluster(&rat(48, 7)).unwrap();
        assert_eq!(c.k, 13);
        assert_eq!(c.free_count(), 7);
        assert_eq!(c.points[7].proximate_to, vec![6, 7]);
        for i in 9..=13 {
            assert_eq!(c.points[i - 1].proximate_to, vec![7, i - 1]);
        }
        let mut expect = vec![int(1); 6];
        expect.push(rat(6, 7));
        expect.extend(vec![rat(1, 7); 6]);
        assert_eq!(c.weights(), expect);
        assert_eq!(weight_square_sum(&c), rat(48, 7));
        assert!(proximity_defect(&c).is_zero());
    }

    #[test]
    fn cluster_small_cases() {
        let c = build_cluster(&int(1)).unwrap();
        assert_eq!(c.k, 1);
        assert_eq!(c.points[0].weight, int(1));
        let c = build_cluster(&rat(7, 2)).unwrap();
        assert_eq!(c.k, 5);
        assert_eq!(c.free_count(), 4);
        assert_eq!(c.points[4].proximate_to, vec![3, 4]);
        assert_eq!(c.weights(), vec![int(1), int(1), int(1), rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn multiplicity_sequences() {
        let m = multiplicity_sequence(&b(48), &b(7)).unwrap();
        assert_eq!(m.entries, vec![(6, b(7)), (1, b(6)), (6, b(1))]);
        let m = multiplicity_sequence(&b(13), &b(2)).unwrap();
        assert_eq!(m.entries, vec![(6, b(2)), (2, b(1))]);
        let m = multiplicity_sequence(&b(5), &b(1)).unwrap();
        assert_eq!(m.entries, vec![(5, b(1))]);
        assert!(multiplicity_sequence(&b(6), &b(4)).is_err());
    }

    #[test]
    fn prefixes() {
        let a = build_cluster(&rat(48, 7)).unwrap();
        let c = build_cluster(&rat(13, 2)).unwrap();
        assert_eq!(shared_prefix(&a, &c), 8);
        assert_eq!(shared_prefix(&a, &a), 13);
        let two = build_cluster(&int(2)).unwrap();
        let three = build_cluster(&int(3)).unwrap();
        assert_eq!(shared_prefix(&two, &three), 2);
    }

    #[test]
    fn lazy_weights_match() {
        let c = build_cluster(&rat(48, 7)).unwrap();
        assert_eq!(weights_prefix(&rat(48, 7), 9).unwrap(), c.weights()[..9].to_vec());
        assert_eq!(weights_prefix(&rat(48, 7), 40).unwrap().len(), 13);
    }

    #[test]
    fn divergence_only_in_last_block() {
        let c = build_cluster(&rat(48, 7)).unwrap();
        assert_eq!(block_count_divergence(&c), vec![(2, 7, 6)]);
    }

    #[test]
    fn exports() {
        let c = build_cluster(&rat(48, 7)).unwrap();
        let svg = enriques_export(&c, DiagramFormat::Svg);
        assert_eq!(svg.matches("class=\"free\"").count(), 7);
        assert_eq!(svg.matches("class=\"satellite\"").count(), 6);
        let c = build_cluster(&rat(7, 2)).unwrap();
        let svg = enriques_export(&c, DiagramFormat::Svg);
        assert_eq!(svg.matches("class=\"free\"").count(), 4);
        assert_eq!(svg.matches("class=\"satellite\"").count(), 1);
        let one = build_cluster(&int(1)).unwrap();
        assert_eq!(enriques_export(&one, DiagramFormat::Svg).matches("<circle").count(), 1);
        assert!("png".parse::<DiagramFormat>().is_err());
        let text = enriques_export(&c, DiagramFormat::Text);
        assert_eq!(text.lines().count(), 6);
    }
}
