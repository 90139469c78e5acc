//! The Picard lattice of the blowup at a cluster: classes over the basis
//! `(D; B_1, ..., B_k)`, exceptional components `A_i`, the weighted class
//! `B_s`, the flag points `x_+`/`x_-` and the catalog of special curves.

use std::collections::VecDeque;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cluster::{
    multiplicity_sequence, shared_prefix_cf, weights_prefix, Cluster, PointKind,
};
use crate::error::Result;
use crate::exactmath::{big, cf_expand, fibonacci, int, rat, ContinuedFraction, ExponentData, Rational};
use crate::serial;

/// The class `d*D - sum m_i B_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DivisorClass {
    #[serde(with = "serial::rational")]
    pub d: Rational,
    #[serde(with = "serial::rational_vec")]
    pub m: Vec<Rational>,
}

impl DivisorClass {
    pub fn zero(k: usize) -> Self {
        DivisorClass { d: Rational::zero(), m: vec![Rational::zero(); k] }
    }

    /// The pulled-back line class `D`.
    pub fn line(k: usize) -> Self {
        DivisorClass { d: Rational::one(), m: vec![Rational::zero(); k] }
    }

    /// `B_i`, 1-based.
    pub fn b(i: usize, k: usize) -> Self {
        let mut c = DivisorClass::zero(k);
        c.m[i - 1] = -Rational::one();
        c
    }

    pub fn k(&self) -> usize {
        self.m.len()
    }

    pub fn dot(&self, o: &DivisorClass) -> Rational {
        debug_assert_eq!(self.k(), o.k());
        let mut acc = &self.d * &o.d;
        for (a, b) in self.m.iter().zip(&o.m) {
            if !a.is_zero() && !b.is_zero() {
                acc -= a * b;
            }
        }
        acc
    }

    pub fn square(&self) -> Rational {
        self.dot(self)
    }

    pub fn scale(&self, c: &Rational) -> DivisorClass {
        DivisorClass { d: &self.d * c, m: self.m.iter().map(|x| x * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.d.is_zero() && self.m.iter().all(Zero::is_zero)
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, o: &DivisorClass) -> DivisorClass {
        DivisorClass {
            d: &self.d + &o.d,
            m: self.m.iter().zip(&o.m).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, o: &DivisorClass) -> DivisorClass {
        DivisorClass {
            d: &self.d - &o.d,
            m: self.m.iter().zip(&o.m).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.scale(&-Rational::one())
    }
}

impl Mul<&DivisorClass> for &Rational {
    type Output = DivisorClass;
    fn mul(self, c: &DivisorClass) -> DivisorClass {
        c.scale(self)
    }
}

/// Exceptional components and the change of basis between `B` and `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentBasis {
    pub k: usize,
    /// `A_1, ..., A_k` as classes.
    pub a: Vec<DivisorClass>,
    /// `gram[i][j] = A_{i+1} . A_{j+1}`.
    pub gram: Vec<Vec<Rational>>,
    /// Row `i` holds the `A`-coordinates of `B_{i+1}`.
    pub b_in_a: Vec<Vec<Rational>>,
    /// Coefficients of the fundamental cycle `E = B_1` over `A`.
    pub fundamental: Vec<Rational>,
    /// Strict transform of the curve germ (degree part ignored).
    pub strict_curve: DivisorClass,
}

impl ComponentBasis {
    /// `A`-coordinates of `sum c_i B_i`.
    pub fn decompose_components(&self, c: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.k];
        for (ci, row) in c.iter().zip(&self.b_in_a) {
            if ci.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(row) {
                if !x.is_zero() {
                    *o += ci * x;
                }
            }
        }
        out
    }

    /// `B`-coordinates of `sum a_i A_i` (inverse of [`Self::decompose_components`]).
    pub fn recompose(&self, a: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.k];
        for (ai, class) in a.iter().zip(&self.a) {
            for (o, m) in out.iter_mut().zip(&class.m) {
                // `class.m` stores coefficients of `-B`.
                *o -= ai * m;
            }
        }
        out
    }

    /// Intersection of the strict transform of the germ with `A_i`.
    pub fn curve_meets(&self, i: usize) -> Rational {
        self.strict_curve.dot(&self.a[i - 1])
    }

    /// Dual-graph neighbours of `A_i` among `A_1..A_k` and the germ (index 0).
    pub fn neighbours(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        if i > 0 && self.curve_meets(i) > Rational::zero() {
            out.push(0);
        }
        for j in 1..=self.k {
            if j == i {
                continue;
            }
            let x = if i == 0 { self.curve_meets(j) } else { self.gram[i - 1][j - 1].clone() };
            if x > Rational::zero() {
                out.push(j);
            }
        }
        out
    }
}

pub fn build_lattice(c: &Cluster) -> ComponentBasis {
    let k = c.k;
    let mut a = Vec::with_capacity(k);
    for i in 1..=k {
        let mut class = DivisorClass::b(i, k);
        for j in c.proximate_points(i) {
            class.m[j - 1] += Rational::one();
        }
        a.push(class);
    }
    let gram = a
        .iter()
        .map(|x| a.iter().map(|y| x.dot(y)).collect())
        .collect();
    // B_i = A_i + sum_{j > i} B_j, solved from the last point backwards.
    let mut b_in_a = vec![vec![Rational::zero(); k]; k];
    for i in (1..=k).rev() {
        let mut row = vec![Rational::zero(); k];
        row[i - 1] = Rational::one();
        for j in c.proximate_points(i) {
            for (r, x) in row.iter_mut().zip(&b_in_a[j - 1]) {
                *r += x;
            }
        }
        b_in_a[i - 1] = row;
    }
    let fundamental = b_in_a[0].clone();
    let mut strict_curve = DivisorClass::zero(k);
    for p in &c.points {
        if p.kind == PointKind::Free {
            strict_curve.m[p.i - 1] = Rational::one();
        }
    }
    ComponentBasis { k, a, gram, b_in_a, fundamental, strict_curve }
}

/// The weighted exceptional class `B_s = sum e_i B_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BsDivisor {
    pub s: Rational,
    pub class: DivisorClass,
}

impl BsDivisor {
    /// Coefficient of `A_k` once `B_s` is written over the `A` basis.
    pub fn order_along_last(&self, basis: &ComponentBasis) -> Rational {
        let coeffs: Vec<Rational> = self.class.m.iter().map(|x| -x).collect();
        basis.decompose_components(&coeffs)[basis.k - 1].clone()
    }
}

pub fn bs_divisor(c: &Cluster) -> BsDivisor {
    let class = DivisorClass { d: Rational::zero(), m: c.points.iter().map(|p| -&p.weight).collect() };
    BsDivisor { s: c.s.clone(), class }
}

/// Component of `A~ + E` meeting `A_k` at a flag point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "index")]
pub enum Neighbor {
    /// The strict transform of the curve germ.
    Curve,
    Exceptional(usize),
    /// No special component: a general point of `A_k`.
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct XPoints {
    pub plus: Neighbor,
    pub minus: Neighbor,
}

/// Labels the two neighbours of `A_k` by connectivity to the germ after
/// deleting `A_k` from the dual graph of `A~ + E`.
pub fn x_points(basis: &ComponentBasis) -> XPoints {
    let k = basis.k;
    let nb = basis.neighbours(k);
    let mut seen = vec![false; k + 1];
    seen[0] = true;
    seen[k] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for w in basis.neighbours(v) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    let label = |v: usize| if v == 0 { Neighbor::Curve } else { Neighbor::Exceptional(v) };
    let plus = nb.iter().copied().find(|&v| seen[v]).map(label).unwrap_or(Neighbor::General);
    let minus = nb.iter().copied().find(|&v| !seen[v]).map(label).unwrap_or(Neighbor::General);
    XPoints { plus, minus }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PullbackMultiplicities {
    #[serde(with = "serial::rational")]
    pub ak_in_cstar: Rational,
    #[serde(with = "serial::rational")]
    pub ak_in_l: Rational,
    #[serde(with = "serial::rational")]
    pub cstar_at_xplus: Rational,
    #[serde(with = "serial::rational")]
    pub l_at_xplus: Rational,
    #[serde(with = "serial::rational")]
    pub cstar_at_xminus: Rational,
    #[serde(with = "serial::rational")]
    pub l_at_xminus: Rational,
}

/// Multiplicity at a flag point of `Z - ord_{A_k}(Z) A_k` restricted to `A_k`,
/// for `Z = (strict part) + sum a_i A_i` where `curve` is the coefficient of
/// the germ's strict transform.
pub fn local_order(coeffs: &[Rational], curve: &Rational, at: Neighbor) -> Rational {
    match at {
        Neighbor::Curve => curve.clone(),
        Neighbor::Exceptional(j) => coeffs[j - 1].clone(),
        Neighbor::General => Rational::zero(),
    }
}

pub fn pullback_multiplicities(c: &Cluster, basis: &ComponentBasis) -> PullbackMultiplicities {
    let xs = x_points(basis);
    let free: Vec<Rational> = c
        .points
        .iter()
        .map(|p| if p.kind == PointKind::Free { Rational::one() } else { Rational::zero() })
        .collect();
    let cstar = basis.decompose_components(&free);
    let l = &basis.fundamental;
    let k = basis.k;
    let one = Rational::one();
    let zero = Rational::zero();
    PullbackMultiplicities {
        ak_in_cstar: cstar[k - 1].clone(),
        ak_in_l: l[k - 1].clone(),
        cstar_at_xplus: local_order(&cstar, &one, xs.plus),
        l_at_xplus: local_order(l, &zero, xs.plus),
        cstar_at_xminus: local_order(&cstar, &one, xs.minus),
        l_at_xminus: local_order(l, &zero, xs.minus),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> Rational {
        match self {
            Side::Plus => Rational::one(),
            Side::Minus => -Rational::one(),
        }
    }
}

impl std::str::FromStr for Side {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Side::Plus),
            "-" | "minus" => Ok(Side::Minus),
            other => Err(crate::error::Error::Parse(other.into(), "side must be + or -".into())),
        }
    }
}

/// Matrix taking flag coordinates to normalized coordinates.
pub fn transfer_matrix(e: &ExponentData, side: Side) -> [[Rational; 2]; 2] {
    let q = big(e.q.clone());
    let q2 = big(e.flag_q2());
    let lower = match side {
        Side::Plus => -q2,
        Side::Minus => &q2 - &q,
    };
    [[q.recip(), Rational::zero()], [lower, q]]
}

pub fn apply(m: &[[Rational; 2]; 2], v: &[Rational; 2]) -> [Rational; 2] {
    [
        &m[0][0] * &v[0] + &m[0][1] * &v[1],
        &m[1][0] * &v[0] + &m[1][1] * &v[1],
    ]
}

pub fn det(m: &[[Rational; 2]; 2]) -> Rational {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

/// How a catalog curve meets clusters of arbitrary exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveShape {
    /// Multiplicity one at every free point: the germ's own curve.
    FollowsGerm,
    /// Multiplicities along the cluster of `exponent`, kept on the shared
    /// prefix with the target cluster and zero beyond.
    Pattern { exponent: Rational, mults: Vec<BigInt> },
}

/// A catalog curve, independent of any particular exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogCurve {
    pub name: String,
    pub degree: BigInt,
    pub shape: CurveShape,
    pub provenance: String,
}

impl CatalogCurve {
    fn pattern(name: &str, degree: i64, exponent: Rational, mults: Vec<BigInt>, provenance: &str) -> Self {
        CatalogCurve {
            name: name.into(),
            degree: degree.into(),
            shape: CurveShape::Pattern { exponent, mults },
            provenance: provenance.into(),
        }
    }

    /// Number of leading points of the cluster of `s` that carry multiplicity.
    pub fn support_len(&self, s: &Rational) -> Result<usize> {
        match &self.shape {
            CurveShape::FollowsGerm => {
                let cf = cf_expand(s)?;
                Ok(if cf.len() == 1 { cf.terms[0] as usize } else { cf.terms[0] as usize + 1 })
            }
            CurveShape::Pattern { exponent, mults } => {
                let shared = shared_prefix_cf(&cf_expand(s)?, &cf_expand(exponent)?);
                Ok((shared as usize).min(mults.len()))
            }
        }
    }

    /// `v_1(C, s; V) = sum e_i mult_i`, evaluated lazily on the prefix.
    pub fn value_at(&self, s: &Rational) -> Result<Rational> {
        match &self.shape {
            CurveShape::FollowsGerm => Ok(s.clone()),
            CurveShape::Pattern { mults, .. } => {
                let n = self.support_len(s)?;
                let w = weights_prefix(s, n)?;
                Ok(w.iter().zip(mults).map(|(e, m)| e * big(m.clone())).sum())
            }
        }
    }

    /// Multiplicity vector on a concrete cluster.
    pub fn mults_on(&self, c: &Cluster) -> Vec<BigInt> {
        match &self.shape {
            CurveShape::FollowsGerm => c
                .points
                .iter()
                .map(|p| if p.kind == PointKind::Free { BigInt::one() } else { BigInt::zero() })
                .collect(),
            CurveShape::Pattern { exponent, mults } => {
                let exp_cf = cf_expand(exponent).expect("catalog exponents are >= 1");
                let n = (shared_prefix_cf(&c.cf, &exp_cf) as usize).min(mults.len());
                (0..c.k)
                    .map(|i| if i < n { mults[i].clone() } else { BigInt::zero() })
                    .collect()
            }
        }
    }

    pub fn record(&self, c: &Cluster) -> CurveRecord {
        let mult = self.mults_on(c);
        let class = DivisorClass { d: big(self.degree.clone()), m: mult.iter().map(|m| big(m.clone())).collect() };
        CurveRecord {
            name: self.name.clone(),
            degree: self.degree.clone(),
            mult,
            class,
            provenance: self.provenance.clone(),
        }
    }

    /// Arithmetic genus defect `(deg-1)(deg-2)/2 - sum m(m-1)/2` over the
    /// curve's own pattern; zero for rational unibranch curves.
    pub fn genus_defect(&self) -> Option<BigInt> {
        let CurveShape::Pattern { mults, .. } = &self.shape else {
            return None;
        };
        let d = &self.degree;
        let lhs = (d - 1) * (d - 2) / 2;
        let rhs: BigInt = mults.iter().map(|m| m * (m - 1) / 2).sum();
        Some(lhs - rhs)
    }
}

/// A catalog curve specialised to one cluster.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub name: String,
    #[serde(with = "serial::bigint")]
    pub degree: BigInt,
    #[serde(serialize_with = "ser_bigints", deserialize_with = "de_bigints")]
    pub mult: Vec<BigInt>,
    pub class: DivisorClass,
    pub provenance: String,
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

fn de_bigints<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigInt>, D::Error> {
    use serde::de::Error as _;
    Vec::<String>::deserialize(d)?
        .iter()
        .map(|t| t.parse().map_err(D::Error::custom))
        .collect()
}

impl CurveRecord {
    /// `mult_j >= sum_{p_i > p_j} mult_i` for all `j`.
    pub fn respects_proximity(&self, c: &Cluster) -> bool {
        (1..=c.k).all(|j| {
            let rhs: BigInt = c.proximate_points(j).iter().map(|&i| self.mult[i - 1].clone()).sum();
            self.mult[j - 1] >= rhs
        })
    }
}

pub fn v1_of_curve(bs: &BsDivisor, v: &CurveRecord) -> Rational {
    bs.class.dot(&v.class)
}

/// Which curves to put in the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogOptions {
    pub degree: u32,
    /// The origin is a general point of the germ's curve.
    pub general: bool,
    /// Largest odd Fibonacci index for the cuspidal curves `C_i`.
    pub max_orevkov: u32,
}

impl CatalogOptions {
    pub fn new(degree: u32) -> Self {
        CatalogOptions { degree, general: true, max_orevkov: 15 }
    }
}

/// Exponent of the degree-24 curve pattern `[7; 9]`.
pub fn v24_exponent() -> Rational {
    rat(64, 9)
}

/// The intrinsic catalog for curves of degree `opts.degree`.
pub fn catalog_curves(opts: &CatalogOptions) -> Vec<CatalogCurve> {
    let d = opts.degree;
    let ones = |n: usize| vec![BigInt::one(); n];
    let mut out = vec![CatalogCurve {
        name: "C".into(),
        degree: d.into(),
        shape: CurveShape::FollowsGerm,
        provenance: format!("the curve itself, degree {d}"),
    }];
    if d >= 2 {
        out.push(CatalogCurve::pattern("T", 1, int(2), ones(2), "tangent line at the origin"));
    }
    if d >= 3 {
        out.push(CatalogCurve::pattern("conic", 2, int(5), ones(5), "osculating conic through five free points"));
    }
    if d >= 3 && opts.general {
        let mut i = 5;
        while i <= opts.max_orevkov as i64 {
            let (num, den) = (fibonacci(i + 2), fibonacci(i - 2));
            let seq = multiplicity_sequence(&num, &den).expect("consecutive Fibonacci ratios are coprime");
            let deg = fibonacci(i);
            out.push(CatalogCurve {
                name: format!("C{i}"),
                degree: deg.clone(),
                shape: CurveShape::Pattern { exponent: Rational::new(num.clone(), den.clone()), mults: seq.expand() },
                provenance: format!("rational cuspidal curve of degree {deg} with exponent {num}/{den}"),
            });
            i += 2;
        }
        let mut nodal = vec![BigInt::from(2)];
        nodal.extend(ones(6));
        out.push(CatalogCurve::pattern("D1", 3, int(7), nodal, "cubic nodal at the origin, branch contact 7"));
        let mut v24 = vec![BigInt::from(9); 7];
        v24.extend(ones(9));
        out.push(CatalogCurve::pattern("V24", 24, v24_exponent(), v24, "genus-one curve of degree 24 along [7;9]"));
    }
    out
}

/// `true` when the catalog curve applies to the exponent `s`. Only the
/// degree-24 curve is restricted: it needs the eight free points of `[7; 9]`.
pub fn applies_to(curve: &CatalogCurve, s: &Rational) -> Result<bool> {
    if curve.name != "V24" {
        return Ok(true);
    }
    Ok(shared_prefix_cf(&cf_expand(s)?, &cf_expand(&v24_exponent())?) >= 8)
}

/// Catalog records specialised to the cluster `c`.
pub fn catalog(c: &Cluster, opts: &CatalogOptions) -> Vec<CurveRecord> {
    catalog_curves(opts)
        .iter()
        .filter(|v| applies_to(v, &c.s).unwrap_or(false))
        .map(|v| v.record(c))
        .collect()
}

/// The exponent whose cluster is `c` followed by the flag point `at` as its
/// next point. Extending the expansion by one term moves onto
/// `A_{k_{r-1}}` (or the germ when `r = 1`); shortening the last term and
/// appending `[1, 2]` moves onto `A_{k-1}`.
pub fn flag_point_extension(s: &Rational, at: Neighbor) -> Result<Option<Rational>> {
    let cf = cf_expand(s)?;
    let r = cf.len();
    let k: u64 = cf.terms.iter().sum();
    let ks = cf.partial_sums();
    let prev_block = if r >= 2 { Some(ks[r - 2] as usize) } else { None };
    let longer = |mut t: Vec<u64>| {
        t.push(2);
        t
    };
    let terms = match at {
        Neighbor::General => return Ok(None),
        Neighbor::Curve if r == 1 => longer(cf.terms.clone()),
        Neighbor::Exceptional(j) if Some(j) == prev_block => longer(cf.terms.clone()),
        Neighbor::Exceptional(j) if j as u64 == k - 1 => {
            let mut t = cf.terms.clone();
            *t.last_mut().unwrap() -= 1;
            t.extend([1, 2]);
            t
        }
        _ => return Ok(None),
    };
    Ok(Some(ContinuedFraction::from_terms(&terms)?.value()))
}

/// Whether the strict transform of a catalog curve passes through the flag
/// point described by `extension` (see [`flag_point_extension`]).
pub fn passes_through(curve: &CatalogCurve, extension: &Rational, k: usize) -> Result<bool> {
    match &curve.shape {
        CurveShape::FollowsGerm => Ok(false),
        CurveShape::Pattern { exponent, mults } => {
            if mults.len() <= k {
                return Ok(false);
            }
            let shared = shared_prefix_cf(&cf_expand(exponent)?, &cf_expand(extension)?);
            Ok(shared as usize > k)
        }
    }
}

/// `nu_{Y_side}(V)` for the pullback `V* = V~ + sum mult_i B_i`.
pub fn flag_value(basis: &ComponentBasis, v: &CurveRecord, side: Side) -> [Rational; 2] {
    let coeffs = basis.decompose_components(&v.class.m);
    let xs = x_points(basis);
    let at = match side {
        Side::Plus => xs.plus,
        Side::Minus => xs.minus,
    };
    [coeffs[basis.k - 1].clone(), local_order(&coeffs, &Rational::zero(), at)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::build_cluster;
    use crate::exactmath::{exponent_data, rat};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn golden_48_7() {
        let c = build_cluster(&rat(48, 7)).unwrap();
        let basis = build_lattice(&c);
        assert_eq!(basis.fundamental, ints(&[1, 1, 1, 1, 1, 1, 1, 2, 3, 4, 5, 6, 7]));
        assert_eq!(basis.gram[5][5], int(-3));
        assert_eq!(basis.gram[6][6], int(-7));
        assert_eq!(basis.gram[12][12], int(-1));
        let free: Vec<Rational> = (0..13).map(|i| if i < 7 { int(1) } else { int(0) }).collect();
        assert_eq!(
            basis.decompose_components(&free),
            ints(&[1, 2, 3, 4, 5, 6, 7, 13, 20, 27, 34, 41, 48])
        );
        let xs = x_points(&basis);
        assert_eq!(xs, XPoints { plus: Neighbor::Exceptional(7), minus: Neighbor::Exceptional(12) });
        let pm = pullback_multiplicities(&c, &basis);
        assert_eq!((pm.ak_in_cstar.clone(), pm.ak_in_l.clone()), (int(48), int(7)));
        assert_eq!((pm.cstar_at_xplus.clone(), pm.l_at_xplus.clone()), (int(7), int(1)));
        // Multiplicities of A_{k-1} and A_{k_{r-1}} in A~ + E.
        assert_eq!(basis.fundamental[11], int(6));
        assert_eq!(basis.fundamental[6], int(1));
    }

    #[test]
    fn bs_identities_48_7() {
        let c = build_cluster(&rat(48, 7)).unwrap();
        let basis = build_lattice(&c);
        let bs = bs_divisor(&c);
        assert_eq!(bs.class.square(), rat(-48, 7));
        assert_eq!(bs.class.dot(&basis.a[12]), rat(-1, 7));
        for i in 0..12 {
            assert!(bs.class.dot(&basis.a[i]).is_zero());
        }
        assert_eq!(bs.order_along_last(&basis), int(48));
    }

    #[test]
    fn nodal_cubic_flag_value() {
        let s = rat(48, 7);
        let c = build_cluster(&s).unwrap();
        let basis = build_lattice(&c);
        let d1 = catalog(&c, &CatalogOptions::new(3)).into_iter().find(|r| r.name == "D1").unwrap();
        assert_eq!(v1_of_curve(&bs_divisor(&c), &d1), rat(55, 7));
        let coeffs = basis.decompose_components(&d1.class.m);
        assert_eq!(coeffs[12], int(55));
        assert_eq!(coeffs[7], int(15));
        let nu = flag_value(&basis, &d1, Side::Plus);
        assert_eq!(nu, [int(55), int(8)]);
        let m = transfer_matrix(&exponent_data(&s).unwrap(), Side::Plus);
        assert_eq!(apply(&m, &nu), [rat(55, 7), int(1)]);
        assert_eq!(det(&m), int(1));
    }

    #[test]
    fn flag_point_extensions() {
        let s = rat(48, 7);
        let c = build_cluster(&s).unwrap();
        let xs = x_points(&build_lattice(&c));
        let plus = flag_point_extension(&s, xs.plus).unwrap().unwrap();
        let minus = flag_point_extension(&s, xs.minus).unwrap().unwrap();
        assert_eq!(cf_expand(&plus).unwrap().terms, vec![6, 1, 6, 2]);
        assert_eq!(cf_expand(&minus).unwrap().terms, vec![6, 1, 5, 1, 2]);
        for ext in [plus, minus] {
            let e = build_cluster(&ext).unwrap();
            assert_eq!(crate::cluster::shared_prefix(&c, &e), 13);
        }
        let c5 = catalog_curves(&CatalogOptions::new(3)).into_iter().find(|v| v.name == "C5").unwrap();
        let conic = catalog_curves(&CatalogOptions::new(3)).into_iter().find(|v| v.name == "conic").unwrap();
        let ext = flag_point_extension(&int(5), Neighbor::Curve).unwrap().unwrap();
        assert!(!passes_through(&conic, &ext, 5).unwrap());
        assert!(passes_through(&c5, &ext, 5).unwrap());
    }

    #[test]
    fn small_cases() {
        let c = build_cluster(&int(1)).unwrap();
        let basis = build_lattice(&c);
        assert_eq!(basis.fundamental, ints(&[1]));
        assert_eq!(bs_divisor(&c).class.square(), int(-1));
        let c = build_cluster(&int(2)).unwrap();
        let xs = x_points(&build_lattice(&c));
        assert_eq!(xs, XPoints { plus: Neighbor::Curve, minus: Neighbor::Exceptional(1) });
        let c = build_cluster(&int(5)).unwrap();
        let pm = pullback_multiplicities(&c, &build_lattice(&c));
        assert_eq!((pm.ak_in_cstar, pm.ak_in_l), (int(5), int(1)));
    }

    #[test]
    fn catalog_contents() {
        let c = build_cluster(&int(3)).unwrap();
        let recs = catalog(&c, &CatalogOptions::new(2));
        let names: Vec<_> = recs.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(names, vec!["C", "T"]);
        let bs = bs_divisor(&c);
        assert_eq!(v1_of_curve(&bs, &recs[1]), int(2));
        assert_eq!(v1_of_curve(&bs, &recs[0]), int(3));
        let c5 = catalog_curves(&CatalogOptions::new(3)).into_iter().find(|v| v.name == "C5").unwrap();
        let CurveShape::Pattern { mults, .. } = &c5.shape else { panic!() };
        let expect: Vec<BigInt> = [2, 2, 2, 2, 2, 2, 1, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(mults, &expect);
        assert_eq!(c5.degree, BigInt::from(5));
        assert_eq!(c5.genus_defect(), Some(BigInt::zero()));
    }

    #[test]
    fn lazy_values_agree_with_records() {
        for s in [rat(48, 7), rat(13, 2), rat(27, 4), rat(57, 8), int(3)] {
            let c = build_cluster(&s).unwrap();
            let bs = bs_divisor(&c);
            for v in catalog_curves(&CatalogOptions::new(3)) {
                assert_eq!(v.value_at(&s).unwrap(), v1_of_curve(&bs, &v.record(&c)), "{} at {s}", v.name);
            }
        }
    }
}
