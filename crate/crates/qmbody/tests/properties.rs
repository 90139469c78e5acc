use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qmbody::cluster::{build_cluster, multiplicity_sequence, proximity_defect, shared_prefix, weight_square_sum};
use qmbody::exactmath::{cf_expand, int, rat, Rational};
use qmbody::geometry::{self, triangle};
use qmbody::lattice::{bs_divisor, build_lattice, catalog, catalog_curves, CatalogOptions, Side};
use qmbody::newton::{c_expand, d_minus, d_plus, substitution_values, tropical, v1_eval, Jet, Poly};
use qmbody::okounkov::{body_report, muhat};
use qmbody::surd::Surd;
use qmbody::zariski::{chamber_sweep, is_negative_definite, zariski_decompose, NamedClass};
use qmbody::DivisorClass;

fn exponent(max_q: i64, max_s: i64) -> impl Strategy<Value = Rational> {
    (1..=max_q).prop_flat_map(move |q| (q..=max_s * q).prop_map(move |p| rat(p, q)))
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((0u32..=4, 0u32..=4, -3i64..=3), 1..5).prop_map(|terms| {
        let p = Poly::from_terms(terms.into_iter().filter(|t| t.2 != 0).map(|(i, j, c)| (i, j, int(c))));
        if p.is_zero() {
            Poly::x()
        } else {
            p
        }
    })
}

fn jet() -> impl Strategy<Value = Jet> {
    prop_oneof![
        Just(Jet::line()),
        Just(Jet::exact(vec![int(0), int(0), int(1)]).unwrap()),
        Just(Jet::exact(vec![int(0), int(0), rat(1, 2), int(-2)]).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn continued_fractions_round_trip(s in exponent(500, 50)) {
        let cf = cf_expand(&s).unwrap();
        prop_assert_eq!(cf.value(), s);
        if cf.len() > 1 {
            prop_assert!(*cf.terms.last().unwrap() >= 2);
        }
        let mut prev = (BigInt::one(), BigInt::zero());
        for (j, (p, q)) in cf.convergents.iter().enumerate() {
            let sign = if (j + 1) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            prop_assert_eq!(p * &prev.1 - q * &prev.0, sign);
            // q_2 = n_2 q_1 equals q_1 when n_2 = 1.
            if j >= 2 {
                prop_assert!(q > &prev.1);
            }
            prev = (p.clone(), q.clone());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn cluster_invariants(s in exponent(12, 100)) {
        let c = build_cluster(&s).unwrap();
        prop_assert_eq!(weight_square_sum(&c), s.clone());
        prop_assert!(proximity_defect(&c).is_zero());
        prop_assert_eq!(c.points.last().unwrap().weight.clone(), Rational::new(BigInt::one(), c.q().clone()));
        let seq = multiplicity_sequence(c.p(), c.q()).unwrap();
        let q = Rational::from_integer(c.q().clone());
        let blockwise: Vec<Rational> = seq.expand().into_iter().map(|m| Rational::from_integer(m) / &q).collect();
        prop_assert_eq!(blockwise, c.weights());
        let n1 = c.cf.terms[0] as usize;
        let free = if c.cf.len() == 1 { n1 } else { (n1 + 1).min(c.k) };
        prop_assert_eq!(c.free_count(), free);
        prop_assert_eq!(shared_prefix(&c, &c), c.k);
    }

    #[test]
    fn shared_prefix_is_symmetric(a in exponent(9, 12), b in exponent(9, 12)) {
        let (ca, cb) = (build_cluster(&a).unwrap(), build_cluster(&b).unwrap());
        prop_assert_eq!(shared_prefix(&ca, &cb), shared_prefix(&cb, &ca));
    }

    #[test]
    fn lattice_invariants(s in exponent(9, 20)) {
        let c = build_cluster(&s).unwrap();
        let basis = build_lattice(&c);
        let bs = bs_divisor(&c);
        let k = basis.k;
        prop_assert_eq!(bs.class.square(), -s.clone());
        for i in 0..k - 1 {
            prop_assert!(bs.class.dot(&basis.a[i]).is_zero());
        }
        prop_assert_eq!(bs.class.dot(&basis.a[k - 1]), -Rational::new(BigInt::one(), c.q().clone()));
        prop_assert!(is_negative_definite(&basis.gram));
        let germ = catalog(&c, &CatalogOptions::new(3)).into_iter().find(|r| r.name == "C").unwrap();
        prop_assert_eq!(bs.class.dot(&germ.class), s.clone());
        let coords: Vec<Rational> = (0..k).map(|i| rat(i as i64 * 3 - 7, 1 + i as i64 % 4)).collect();
        prop_assert_eq!(basis.recompose(&basis.decompose_components(&coords)), coords.clone());
        prop_assert_eq!(basis.decompose_components(&basis.recompose(&coords)), coords);
    }

    #[test]
    fn valuation_is_multiplicative_and_ultrametric(f in poly(), g in poly(), xi in jet(), s in exponent(6, 8)) {
        let sup = |p: &Poly| c_expand(p, &xi, 0).unwrap();
        let (vf, vg) = (v1_eval(&sup(&f), &s), v1_eval(&sup(&g), &s));
        prop_assert_eq!(v1_eval(&sup(&f.mul(&g)), &s), &vf + &vg);
        let h = f.add(&g);
        if !h.is_zero() {
            prop_assert!(v1_eval(&sup(&h), &s) >= vf.clone().min(vg));
        }
        let sf = sup(&f);
        prop_assert!(v1_eval(&sf, &s) - &s * int(d_plus(&sf, &s) as i64) >= Rational::zero());
        prop_assert!(d_plus(&sf, &s) <= d_minus(&sf, &s));
    }

    #[test]
    fn tropical_function_is_concave_and_nondecreasing(f in poly(), xi in jet()) {
        let tr = tropical(&c_expand(&f, &xi, 0).unwrap());
        let js: Vec<u32> = tr.pieces.iter().map(|p| p.j).collect();
        prop_assert!(js.windows(2).all(|w| w[0] > w[1]));
        let grid: Vec<Rational> = (4..=40).map(|n| rat(n, 4)).collect();
        for w in grid.windows(3) {
            let (a, b, c) = (tr.eval(&w[0]), tr.eval(&w[1]), tr.eval(&w[2]));
            prop_assert!(a <= b);
            prop_assert!(&b + &b >= a + c);
        }
    }

    #[test]
    fn substitution_oracle_agrees(f in poly(), xi in jet(), s in exponent(4, 6)) {
        let sup = c_expand(&f, &xi, 0).unwrap();
        let o = substitution_values(&f, &xi, &s).unwrap();
        prop_assert_eq!(o.order, v1_eval(&sup, &s));
        prop_assert_eq!(o.dplus, d_plus(&sup, &s));
        prop_assert_eq!(o.dminus, d_minus(&sup, &s));
    }
}

fn sweep_curves(s: &Rational) -> (Vec<NamedClass>, DivisorClass, DivisorClass) {
    let c = build_cluster(s).unwrap();
    let basis = build_lattice(&c);
    let mut curves: Vec<NamedClass> =
        basis.a.iter().enumerate().map(|(i, a)| NamedClass::new(format!("A{}", i + 1), a.clone())).collect();
    for r in catalog(&c, &CatalogOptions::new(3)) {
        if r.class.square().is_negative() {
            curves.push(NamedClass::new(r.name, r.class));
        }
    }
    let ak = basis.a[basis.k - 1].clone();
    (curves, DivisorClass::line(basis.k), ak)
}

fn coeffs_by_name(z: &qmbody::zariski::ZariskiResult) -> std::collections::BTreeMap<String, Rational> {
    z.support.iter().map(|e| (e.name.clone(), e.coeff.clone())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn zariski_is_order_independent_idempotent_and_monotone(
        s in exponent(6, 8),
        fracs in (1i64..100, 1i64..100),
        seed in any::<u64>(),
    ) {
        let (mut curves, line, ak) = sweep_curves(&s);
        let sweep = chamber_sweep(&line, &ak, &curves).unwrap();
        let mu = sweep.mu.lo.clone();
        let (a, b) = (fracs.0.min(fracs.1), fracs.0.max(fracs.1));
        let t1 = &mu * rat(a, 100);
        let t2 = &mu * rat(b, 100);
        let at = |t: &Rational| &line - &ak.scale(t);
        let z1 = zariski_decompose(&at(&t1), &curves).unwrap();
        let z2 = zariski_decompose(&at(&t2), &curves).unwrap();
        let idem = zariski_decompose(&z1.p, &curves).unwrap();
        prop_assert!(idem.n.is_zero());
        let (n1, n2) = (coeffs_by_name(&z1), coeffs_by_name(&z2));
        for (name, c) in &n1 {
            prop_assert!(n2.get(name).is_some_and(|d| d >= c), "{} decreased", name);
        }
        prop_assert_eq!(sweep.p_at(&t1), z1.p.clone());
        curves.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let shuffled = zariski_decompose(&at(&t1), &curves).unwrap();
        prop_assert_eq!(&shuffled.p, &z1.p);
        prop_assert_eq!(coeffs_by_name(&shuffled), n1);
    }

    #[test]
    fn bodies_obey_area_wedge_and_containment(s in exponent(12, 8), d in 1u32..=4) {
        let opts = CatalogOptions::new(d);
        let m = muhat(&s, &opts).unwrap();
        let half = Surd::rational(rat(1, 2));
        for side in [Side::Plus, Side::Minus] {
            let r = body_report(&s, &opts, side).unwrap();
            prop_assert!(r.routes_agree);
            prop_assert_eq!(r.normalized.area(), half.clone());
            let n = r.normalized.vertices.len();
            prop_assert!(n == 3 || n == 4);
            if n == 4 {
                prop_assert!(m.supraminimal);
            }
        }
        let body = body_report(&s, &opts, Side::Plus).unwrap().normalized.vertices;
        let sd = Surd::rational(s.clone());
        for p in &body {
            prop_assert!(p[1] >= Surd::zero());
            prop_assert!(&sd * &p[1] <= p[0]);
        }
        let deg = int(d as i64);
        let inner = triangle(Surd::rational(int(1)), Surd::rational(&s / &deg), Surd::rational(deg.recip()));
        prop_assert!(geometry::polygon_contains(&body, &inner));
        let outer = triangle(m.value.clone(), m.value.clone(), &m.value / &s);
        prop_assert!(geometry::polygon_contains(&outer, &body));
    }
}

#[test]
fn orevkov_records_are_rational_unibranch() {
    for v in catalog_curves(&CatalogOptions::new(3)) {
        if v.name.starts_with('C') && v.name.len() > 1 {
            assert_eq!(v.genus_defect(), Some(BigInt::zero()), "{}", v.name);
        }
    }
}
