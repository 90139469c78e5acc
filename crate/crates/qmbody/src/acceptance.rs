//! The acceptance suite: twelve numbered checks run by the `acceptance`
//! integration test and by `qmbody verify`.

use std::fmt;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cluster::{build_cluster, Cluster};
use crate::error::Result;
use crate::exactmath::{cf_expand, exponent_data, format_rational, int, rat, Rational};
use crate::geometry::{self, Point};
use crate::lattice::{
    apply, bs_divisor, build_lattice, catalog, det, flag_value, transfer_matrix, CatalogOptions, Side,
};
use crate::newton::{c_expand, newton_polygon, required_jet_order, tropical, v_pm, Jet, Poly};
use crate::okounkov::{body_report, flag_sweep, muhat, sweep_mutations};
use crate::surd::Surd;

/// Random polynomial pairs for the valuation axioms.
pub const AXIOM_PAIRS: usize = 1000;
pub const AXIOM_SEED: u64 = 4;
/// Random exponents for the half-plane check.
pub const HALF_PLANE_SAMPLES: usize = 200;
pub const HALF_PLANE_SEED: u64 = 17;
/// Largest denominator of the random exponents in the half-plane check.
pub const HALF_PLANE_MAX_DENOM: i64 = 40;
/// Largest degree of the valuative points in the inner-hull check.
pub const INNER_HULL_DEGREE: u32 = 12;
pub const INNER_HULL_SEED: u64 = 29;
pub const INNER_HULL_SAMPLES: usize = 8;
/// Minimal area ratio of the inner hull to the body, in percent.
pub const INNER_HULL_COVERAGE_PERCENT: i64 = 99;

/// Deliberate corruption of inputs, used to check that `verify` notices.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Faults {
    /// Adds `1/1000` to the weight of the first point of every cluster.
    pub perturb_weight: bool,
}

pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    run: fn(&Faults, &mut Checks) -> Result<()>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub id: u8,
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl Verdict {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass() { "PASS" } else { "FAIL" };
        write!(f, "{tag} {:>2} {} ({} checks", self.id, self.name, self.checks)?;
        match self.failures.first() {
            None => write!(f, ")"),
            Some(first) => write!(f, ", {} failed; first: {first})", self.failures.len()),
        }
    }
}

#[derive(Debug, Default)]
pub struct Checks {
    count: usize,
    failures: Vec<String>,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn eq<T: PartialEq + Show>(&mut self, got: &T, want: &T, label: &str) {
        self.check(got == want, || format!("{label}: got {}, want {}", got.show(), want.show()));
    }
}

/// Exact, readable rendering for failure messages.
trait Show {
    fn show(&self) -> String;
}

impl Show for Rational {
    fn show(&self) -> String {
        format_rational(self)
    }
}

impl Show for Surd {
    fn show(&self) -> String {
        self.to_string()
    }
}

impl Show for &str {
    fn show(&self) -> String {
        self.to_string()
    }
}

impl<A: Show, B: Show> Show for (A, B) {
    fn show(&self) -> String {
        format!("({}, {})", self.0.show(), self.1.show())
    }
}

impl<T: Show> Show for [T] {
    fn show(&self) -> String {
        let parts: Vec<String> = self.iter().map(Show::show).collect();
        format!("[{}]", parts.join(", "))
    }
}

impl<T: Show> Show for Vec<T> {
    fn show(&self) -> String {
        self.as_slice().show()
    }
}

impl<T: Show, const N: usize> Show for [T; N] {
    fn show(&self) -> String {
        self.as_slice().show()
    }
}

macro_rules! show_display {
    ($($t:ty),*) => {$(
        impl Show for $t {
            fn show(&self) -> String {
                self.to_string()
            }
        }
    )*};
}

show_display!(u32, u64, usize, String);

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, name: "cluster and lattice golden values at 48/7", run: cluster_golden },
        Criterion { id: 2, name: "B_s identities on the exponent grid", run: bs_identities },
        Criterion { id: 3, name: "Newton polygon golden values", run: newton_golden },
        Criterion { id: 4, name: "rank-2 valuation axioms on random pairs", run: valuation_axioms },
        Criterion { id: 5, name: "flag transfer of the nodal cubic", run: flag_transfer },
        Criterion { id: 6, name: "body golden values (line, conic, cubic)", run: body_golden },
        Criterion { id: 7, name: "sweep and closed-form routes agree", run: route_equivalence },
        Criterion { id: 8, name: "area law in both frames", run: area_law },
        Criterion { id: 9, name: "muhat table with witnesses", run: muhat_table },
        Criterion { id: 10, name: "mutation detection (conic, cubic)", run: mutations },
        Criterion { id: 11, name: "half-plane t + u <= 3 for random exponents", run: half_plane },
        Criterion { id: 12, name: "inner hull of valuative points (line, conic)", run: inner_hull },
    ]
}

/// Criteria whose id or name contains `filter`.
pub fn select(filter: Option<&str>) -> Vec<Criterion> {
    criteria()
        .into_iter()
        .filter(|c| match filter {
            None => true,
            Some(f) => c.id.to_string() == f || c.name.contains(f),
        })
        .collect()
}

pub fn run(c: &Criterion, faults: &Faults) -> Verdict {
    let mut checks = Checks::default();
    if let Err(e) = (c.run)(faults, &mut checks) {
        checks.count += 1;
        checks.failures.push(format!("error: {e}"));
    }
    Verdict { id: c.id, name: c.name, checks: checks.count, failures: checks.failures }
}

pub fn run_all(filter: Option<&str>, faults: &Faults) -> Vec<Verdict> {
    select(filter).iter().map(|c| run(c, faults)).collect()
}

fn cluster_with(s: &Rational, faults: &Faults) -> Result<Cluster> {
    let mut c = build_cluster(s)?;
    if faults.perturb_weight {
        c.points[0].weight += rat(1, 1000);
    }
    Ok(c)
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&n| int(n)).collect()
}

fn cluster_golden(faults: &Faults, ch: &mut Checks) -> Result<()> {
    let s = rat(48, 7);
    ch.eq(&cf_expand(&s)?.terms, &vec![6, 1, 6], "continued fraction");
    let c = cluster_with(&s, faults)?;
    let mut weights = vec![int(1); 6];
    weights.push(rat(6, 7));
    weights.extend(vec![rat(1, 7); 6]);
    ch.eq(&c.weights(), &weights, "weights");
    for i in 2..=13 {
        let mut want = vec![i - 1];
        if i == 8 {
            want = vec![6, 7];
        } else if i >= 9 {
            want = vec![7, i - 1];
        }
        let mut got = c.points[i - 1].proximate_to.clone();
        got.sort();
        ch.eq(&got, &want, &format!("proximities of p{i}"));
    }
    let basis = build_lattice(&c);
    ch.eq(&basis.fundamental, &ints(&[1, 1, 1, 1, 1, 1, 1, 2, 3, 4, 5, 6, 7]), "fundamental cycle");
    let free: Vec<Rational> = c.points.iter().map(|p| if p.i <= 7 { int(1) } else { int(0) }).collect();
    ch.eq(
        &basis.decompose_components(&free),
        &ints(&[1, 2, 3, 4, 5, 6, 7, 13, 20, 27, 34, 41, 48]),
        "pullback of the germ",
    );
    Ok(())
}

fn exponent_grid() -> Vec<Rational> {
    let mut out = Vec::new();
    for q in 1..=9i64 {
        for p in q..=12 * q {
            if p.gcd(&q) == 1 {
                out.push(rat(p, q));
            }
        }
    }
    out.sort();
    out
}

fn bs_identities(faults: &Faults, ch: &mut Checks) -> Result<()> {
    for s in exponent_grid() {
        let c = cluster_with(&s, faults)?;
        let basis = build_lattice(&c);
        let bs = bs_divisor(&c);
        let k = basis.k;
        let fs = format_rational(&s);
        ch.eq(&bs.class.square(), &-s.clone(), &format!("B_s^2 at {fs}"));
        for i in 0..k - 1 {
            ch.eq(&bs.class.dot(&basis.a[i]), &int(0), &format!("B_s.A_{} at {fs}", i + 1));
        }
        let q = Rational::from_integer(c.q().clone());
        ch.eq(&bs.class.dot(&basis.a[k - 1]), &-q.recip(), &format!("B_s.A_k at {fs}"));
        for (kj, (_, qj)) in c.cf.partial_sums().iter().zip(&c.cf.convergents) {
            ch.eq(
                &basis.fundamental[*kj as usize - 1],
                &Rational::from_integer(qj.clone()),
                &format!("fundamental cycle at k_j = {kj} for {fs}"),
            );
        }
    }
    Ok(())
}

fn lemniscate() -> Result<(Poly, Jet)> {
    let f = Poly::parse("(x^2+y^2)^3 - 4*x^2*y^2")?;
    let xi = Jet::exact(vec![int(0), int(0), rat(1, 2)])?;
    Ok((f, xi))
}

fn newton_golden(_: &Faults, ch: &mut Checks) -> Result<()> {
    let (f, xi) = lemniscate()?;
    let sup = c_expand(&f, &xi, required_jet_order(&int(3)))?;
    ch.eq(&newton_polygon(&sup).vertices, &vec![(0, 6), (2, 2), (4, 1), (8, 0)], "vertices");
    let tr = tropical(&sup);
    let pieces: Vec<(u32, u32)> = tr.pieces.iter().map(|p| (p.i, p.j)).collect();
    ch.eq(&pieces, &vec![(2, 2), (4, 1), (8, 0)], "tropical pieces");
    ch.eq(&tr.breakpoints(), &vec![int(2), int(4)], "breakpoints");
    ch.eq(&v_pm(&sup, &int(3), Side::Plus), &(int(7), int(1)), "v_+ at 3");
    Ok(())
}

fn random_poly(rng: &mut ChaCha8Rng) -> Poly {
    let n = rng.gen_range(1..=4);
    let terms: Vec<(u32, u32, Rational)> = (0..n)
        .map(|_| {
            let i = rng.gen_range(0..=4u32);
            let j = rng.gen_range(0..=4 - i);
            let c = loop {
                let c = rng.gen_range(-3i64..=3);
                if c != 0 {
                    break c;
                }
            };
            (i, j, int(c))
        })
        .collect();
    let p = Poly::from_terms(terms);
    if p.is_zero() {
        Poly::x()
    } else {
        p
    }
}

fn valuation_axioms(_: &Faults, ch: &mut Checks) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(AXIOM_SEED);
    let jets = [
        Jet::line(),
        Jet::exact(vec![int(0), int(0), int(1)])?,
        Jet::exact(vec![int(0), int(0), rat(1, 2), int(-1)])?,
    ];
    for n in 0..AXIOM_PAIRS {
        let f = random_poly(&mut rng);
        let g = random_poly(&mut rng);
        let q = rng.gen_range(1..=5i64);
        let s = rat(rng.gen_range(q..=6 * q), q);
        let xi = &jets[n % jets.len()];
        let order = required_jet_order(&s);
        let v = |p: &Poly, side| -> Result<(Rational, Rational)> { Ok(v_pm(&c_expand(p, xi, order)?, &s, side)) };
        for side in [Side::Plus, Side::Minus] {
            let (vf, vg) = (v(&f, side)?, v(&g, side)?);
            let vfg = v(&f.mul(&g), side)?;
            let sum = (&vf.0 + &vg.0, &vf.1 + &vg.1);
            ch.check(vfg == sum, || format!("v(fg) != v(f)+v(g) for {f} and {g} at {s} ({side:?})"));
            let h = f.add(&g);
            if !h.is_zero() {
                let vh = v(&h, side)?;
                ch.check(vh >= std::cmp::min(vf, vg), || format!("v(f+g) < min for {f} and {g} at {s} ({side:?})"));
            }
        }
    }
    Ok(())
}

fn flag_transfer(faults: &Faults, ch: &mut Checks) -> Result<()> {
    let s = rat(48, 7);
    let c = cluster_with(&s, faults)?;
    let basis = build_lattice(&c);
    let d1 = catalog(&c, &CatalogOptions::new(3)).into_iter().find(|r| r.name == "D1");
    ch.check(d1.is_some(), || "nodal cubic missing from the catalog".into());
    if let Some(d1) = d1 {
        let nu = flag_value(&basis, &d1, Side::Plus);
        ch.eq(&nu, &[int(55), int(8)], "flag value of the nodal cubic");
        let m = transfer_matrix(&exponent_data(&s)?, Side::Plus);
        ch.eq(&m, &[[rat(1, 7), int(0)], [int(-1), int(7)]], "transfer matrix");
        ch.eq(&apply(&m, &nu), &[rat(55, 7), int(1)], "normalized value");
    }
    for s in exponent_grid() {
        for side in [Side::Plus, Side::Minus] {
            let m = transfer_matrix(&exponent_data(&s)?, side);
            ch.eq(&det(&m), &int(1), &format!("determinant at {} ({side:?})", format_rational(&s)));
        }
    }
    Ok(())
}

fn poly(pts: &[(Rational, Rational)]) -> Vec<Point> {
    let v: Vec<Point> = pts.iter().map(|(t, u)| geometry::point(t.clone(), u.clone())).collect();
    geometry::canonical(&v)
}

fn delta(a: Rational, b: Rational, c: Rational) -> Vec<Point> {
    poly(&[(int(0), int(0)), (a, int(0)), (b, c)])
}

/// `(degree, exponent, expected plus-side body)`.
fn body_cases() -> Vec<(u32, Rational, Vec<Point>)> {
    let mut out = Vec::new();
    for s in [rat(3, 2), int(4), int(10)] {
        out.push((1, s.clone(), delta(int(1), s, int(1))));
    }
    out.push((2, rat(3, 2), delta(int(1), rat(3, 2), int(1))));
    for s in [int(2), int(3), rat(9, 2)] {
        out.push((2, s.clone(), delta(int(2), &s / int(2), rat(1, 2))));
    }
    out.push((
        3,
        rat(48, 7),
        poly(&[(int(0), int(0)), (rat(144, 55), int(0)), (rat(144, 55), rat(21, 55)), (rat(55, 21), rat(1, 3))]),
    ));
    let s = rat(27, 4);
    let one_plus = &s + int(1);
    let right = int(3) * &s / &one_plus;
    out.push((
        3,
        s.clone(),
        poly(&[
            (int(0), int(0)),
            (right.clone(), int(0)),
            (&one_plus / int(3), rat(1, 3)),
            (right, int(3) / &one_plus),
        ]),
    ));
    let s = rat(57, 8);
    out.push((3, s.clone(), delta(rat(8, 3), rat(3, 8) * &s, rat(3, 8))));
    for s in [int(9), int(10)] {
        out.push((3, s.clone(), delta(int(3), &s / int(3), rat(1, 3))));
    }
    out
}

fn show(v: &[Point]) -> String {
    let parts: Vec<String> = v.iter().map(|p| format!("({}, {})", p[0], p[1])).collect();
    parts.join(" ")
}

fn body_golden(_: &Faults, ch: &mut Checks) -> Result<()> {
    for (d, s, want) in body_cases() {
        let r = body_report(&s, &CatalogOptions::new(d), Side::Plus)?;
        let got = &r.closed_form.polygon.vertices;
        ch.check(got == &want, || {
            format!("d = {d}, s = {}: got {}, want {}", format_rational(&s), show(got), show(&want))
        });
    }
    Ok(())
}

fn route_equivalence(_: &Faults, ch: &mut Checks) -> Result<()> {
    for (d, s, _) in body_cases() {
        for side in [Side::Plus, Side::Minus] {
            let r = body_report(&s, &CatalogOptions::new(d), side)?;
            ch.check(r.routes_agree, || {
                format!(
                    "d = {d}, s = {} ({side:?}): sweep {} vs closed form {}",
                    format_rational(&s),
                    show(&r.normalized.vertices),
                    show(&r.closed_form.polygon.vertices)
                )
            });
        }
    }
    Ok(())
}

fn area_law(_: &Faults, ch: &mut Checks) -> Result<()> {
    let half = Surd::rational(rat(1, 2));
    for (d, s, _) in body_cases() {
        for side in [Side::Plus, Side::Minus] {
            let opts = CatalogOptions::new(d);
            let r = body_report(&s, &opts, side)?;
            let fs = format_rational(&s);
            for (label, p) in [("sweep", &r.normalized), ("closed form", &r.closed_form.polygon)] {
                ch.eq(&p.area(), &half, &format!("{label} area, d = {d}, s = {fs} ({side:?})"));
            }
            let q = flag_sweep(&s, &opts, side)?.q;
            let want = Surd::rational(Rational::new(q, 2.into()));
            ch.eq(&r.flag.area(), &want, &format!("flag-frame area, d = {d}, s = {fs} ({side:?})"));
        }
    }
    Ok(())
}

fn muhat_table(_: &Faults, ch: &mut Checks) -> Result<()> {
    let rows: [(u32, Rational, Rational, Option<&str>); 7] = [
        (1, rat(3, 2), rat(3, 2), Some("C")),
        (1, int(3), int(2), None),
        (2, rat(9, 2), rat(9, 4), Some("C")),
        (2, int(6), rat(5, 2), None),
        (3, rat(13, 2), rat(13, 5), Some("C5")),
        (3, rat(27, 4), rat(31, 12), None),
        (3, rat(50, 7), rat(8, 3), Some("D1")),
    ];
    for (d, s, want, witness) in rows {
        let m = muhat(&s, &CatalogOptions::new(d))?;
        let fs = format_rational(&s);
        ch.eq(&m.value, &Surd::rational(want), &format!("muhat, d = {d}, s = {fs}"));
        if let Some(w) = witness {
            ch.eq(&m.witness.as_str(), &w, &format!("witness, d = {d}, s = {fs}"));
            ch.check(m.supraminimal, || format!("d = {d}, s = {fs} is not supraminimal"));
        }
    }
    Ok(())
}

fn mutations(_: &Faults, ch: &mut Checks) -> Result<()> {
    let at = |d: u32, lo: Rational, hi: Rational| -> Result<Vec<(Rational, String)>> {
        Ok(sweep_mutations(&lo, &hi, &CatalogOptions::new(d))?
            .into_iter()
            .map(|r| (r.s0, r.witness_right))
            .collect())
    };
    let names = |v: &[(Rational, String)]| v.iter().map(|(s, w)| format!("{} ({w})", format_rational(s))).collect::<Vec<_>>();
    let got = at(2, int(1), int(5))?;
    ch.eq(&names(&got), &names(&[(int(2), "T".into())]), "conic on [1, 5]");
    let got = at(3, int(1), rat(63, 10))?;
    ch.eq(&names(&got), &names(&[(int(2), "T".into()), (int(5), "conic".into())]), "cubic on [1, 6.3]");
    let got = at(3, rat(64, 10), rat(69, 10))?;
    for (s, w) in [(rat(13, 2), "C5"), (rat(34, 5), "C7")] {
        let hit = got.iter().any(|(x, v)| x == &s && v == w);
        ch.check(hit, || format!("cubic on [6.4, 6.9] misses {} ({w}): {:?}", format_rational(&s), names(&got)));
    }
    Ok(())
}

fn half_plane(_: &Faults, ch: &mut Checks) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(HALF_PLANE_SEED);
    let opts = CatalogOptions::new(3);
    let three = Surd::rational(int(3));
    for _ in 0..HALF_PLANE_SAMPLES {
        let q = rng.gen_range(1..=HALF_PLANE_MAX_DENOM);
        let s = rat(rng.gen_range(q..=7 * q), q);
        let r = body_report(&s, &opts, Side::Plus)?;
        for body in [&r.normalized, &r.closed_form.polygon] {
            let worst = body.vertices.iter().map(|p| &p[0] + &p[1]).max().unwrap_or_else(Surd::zero);
            ch.check(worst <= three, || format!("s = {}: t + u reaches {worst}", format_rational(&s)));
        }
    }
    Ok(())
}

/// `v_+(f)/deg f` for products `x^a y^b f_C^c` of degree at most the bound.
fn valuative_points(d: u32, s: &Rational) -> Result<Vec<Point>> {
    let (xi, fc) = match d {
        1 => (Jet::line(), Poly::y()),
        _ => (Jet::exact(vec![int(0), int(0), int(1)])?, Poly::parse("y - x^2")?),
    };
    let order = required_jet_order(s);
    let mut out = vec![geometry::point(int(0), int(0))];
    let n = INNER_HULL_DEGREE;
    for c in 0..=n / d {
        for a in 0..=n - d * c {
            for b in 0..=n - d * c - a {
                let deg = a + b + d * c;
                if deg == 0 {
                    continue;
                }
                let f = Poly::monomial(int(1), a, b).mul(&fc.pow(c));
                let (v, u) = v_pm(&c_expand(&f, &xi, order)?, s, Side::Plus);
                let deg = int(deg as i64);
                out.push(geometry::point(v / &deg, u / &deg));
            }
        }
    }
    Ok(out)
}

fn inner_hull(_: &Faults, ch: &mut Checks) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(INNER_HULL_SEED);
    for d in [1u32, 2] {
        let mut samples: Vec<Rational> = vec![rat(3, 2), int(3), rat(9, 2)];
        for _ in 0..INNER_HULL_SAMPLES {
            let q = rng.gen_range(1..=8i64);
            samples.push(rat(rng.gen_range(q..=10 * q), q));
        }
        for s in samples {
            let body = body_report(&s, &CatalogOptions::new(d), Side::Plus)?.normalized.vertices;
            let hull = geometry::canonical(&valuative_points(d, &s)?);
            let fs = format_rational(&s);
            ch.check(geometry::polygon_contains(&body, &hull), || {
                format!("d = {d}, s = {fs}: hull {} leaves the body {}", show(&hull), show(&body))
            });
            let (ha, ba) = (geometry::area(&hull), geometry::area(&body));
            let scaled = |x: &Surd, k: i64| x * &Surd::rational(int(k));
            ch.check(scaled(&ha, 100) >= scaled(&ba, INNER_HULL_COVERAGE_PERCENT), || {
                format!("d = {d}, s = {fs}: hull area {ha} below {INNER_HULL_COVERAGE_PERCENT}% of {ba}")
            });
        }
    }
    Ok(())
}
