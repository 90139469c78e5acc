//! Exact convex-polygon helpers over `Surd` coordinates.

use std::cmp::Ordering;

use crate::exactmath::Rational;
use crate::surd::Surd;

pub type Point = [Surd; 2];

pub fn point(t: Rational, u: Rational) -> Point {
    [Surd::rational(t), Surd::rational(u)]
}

/// Twice the signed area of the triangle `o, a, b`.
pub fn cross(o: &Point, a: &Point, b: &Point) -> Surd {
    let ax = &a[0] - &o[0];
    let ay = &a[1] - &o[1];
    let bx = &b[0] - &o[0];
    let by = &b[1] - &o[1];
    &(&ax * &by) - &(&ay * &bx)
}

pub fn orient(o: &Point, a: &Point, b: &Point) -> Ordering {
    cross(o, a, b).signum()
}

/// Signed area (positive for counterclockwise order).
pub fn area(pts: &[Point]) -> Surd {
    let n = pts.len();
    let mut acc = Surd::zero();
    for i in 0..n {
        let (p, q) = (&pts[i], &pts[(i + 1) % n]);
        acc = &acc + &(&(&p[0] * &q[1]) - &(&p[1] * &q[0]));
    }
    &acc / &Rational::from_integer(2.into())
}

/// Drops repeated and collinear vertices of a closed polygon.
pub fn remove_collinear(pts: &[Point]) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    for p in pts {
        if out.last() != Some(p) {
            out.push(p.clone());
        }
    }
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    let mut changed = true;
    while changed && out.len() > 2 {
        changed = false;
        let n = out.len();
        for i in 0..n {
            let (a, b, c) = (&out[(i + n - 1) % n], &out[i], &out[(i + 1) % n]);
            if orient(a, b, c) == Ordering::Equal {
                out.remove(i);
                changed = true;
                break;
            }
        }
    }
    out
}

fn cmp_point(a: &Point, b: &Point) -> Ordering {
    a[0].cmp(&b[0]).then_with(|| a[1].cmp(&b[1]))
}

/// Counterclockwise convex hull without collinear points.
pub fn convex_hull(pts: &[Point]) -> Vec<Point> {
    let mut v: Vec<Point> = pts.to_vec();
    v.sort_by(cmp_point);
    v.dedup();
    if v.len() < 3 {
        return v;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &v {
        while lower.len() >= 2 && orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p) != Ordering::Greater {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in v.iter().rev() {
        while upper.len() >= 2 && orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p) != Ordering::Greater {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Counterclockwise hull rotated to start at the origin when it is a vertex,
/// otherwise at the lexicographically smallest vertex.
pub fn canonical(pts: &[Point]) -> Vec<Point> {
    let mut hull = convex_hull(pts);
    if hull.is_empty() {
        return hull;
    }
    let origin = [Surd::zero(), Surd::zero()];
    let start = hull
        .iter()
        .position(|p| *p == origin)
        .unwrap_or_else(|| (0..hull.len()).min_by(|&i, &j| cmp_point(&hull[i], &hull[j])).unwrap());
    hull.rotate_left(start);
    hull
}

/// `p` inside or on the boundary of the counterclockwise convex polygon.
pub fn contains_point(poly: &[Point], p: &Point) -> bool {
    match poly.len() {
        0 => false,
        1 => poly[0] == *p,
        2 => orient(&poly[0], &poly[1], p) == Ordering::Equal && between(&poly[0], &poly[1], p),
        n => (0..n).all(|i| orient(&poly[i], &poly[(i + 1) % n], p) != Ordering::Less),
    }
}

fn between(a: &Point, b: &Point, p: &Point) -> bool {
    (0..2).all(|c| {
        let (lo, hi) = if a[c] <= b[c] { (&a[c], &b[c]) } else { (&b[c], &a[c]) };
        lo <= &p[c] && &p[c] <= hi
    })
}

pub fn on_boundary(poly: &[Point], p: &Point) -> bool {
    let n = poly.len();
    (0..n).any(|i| {
        let (a, b) = (&poly[i], &poly[(i + 1) % n]);
        orient(a, b, p) == Ordering::Equal && between(a, b, p)
    })
}

pub fn polygon_contains(outer: &[Point], inner: &[Point]) -> bool {
    inner.iter().all(|p| contains_point(outer, p))
}

pub fn squared_distance(a: &Point, b: &Point) -> Surd {
    let dx = &a[0] - &b[0];
    let dy = &a[1] - &b[1];
    &(&dx * &dx) + &(&dy * &dy)
}

/// Largest squared distance from a vertex of `a` to the nearest vertex of `b`.
pub fn vertex_displacement(a: &[Point], b: &[Point]) -> Surd {
    a.iter()
        .map(|p| b.iter().map(|q| squared_distance(p, q)).min().unwrap_or_else(Surd::zero))
        .max()
        .unwrap_or_else(Surd::zero)
}

/// The triangle `Delta_{a,b,c}` with vertices `(0,0), (a,0), (b,c)`.
pub fn triangle(a: Surd, b: Surd, c: Surd) -> Vec<Point> {
    canonical(&[[Surd::zero(), Surd::zero()], [a, Surd::zero()], [b, c]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};

    fn p(t: Rational, u: Rational) -> Point {
        point(t, u)
    }

    #[test]
    fn hull_area_and_containment() {
        let quad = canonical(&[
            p(int(0), int(0)),
            p(rat(144, 55), int(0)),
            p(rat(55, 21), rat(1, 3)),
            p(rat(144, 55), rat(21, 55)),
            p(int(1), rat(1, 10)),
        ]);
        assert_eq!(quad.len(), 4);
        assert_eq!(area(&quad), Surd::rational(rat(1, 2)));
        assert!(contains_point(&quad, &p(int(1), rat(1, 10))));
        assert!(!contains_point(&quad, &p(int(3), int(0))));
        assert!(on_boundary(&quad, &p(int(1), int(0))));
    }

    #[test]
    fn collinear_vertices_are_dropped() {
        let tri = remove_collinear(&[p(int(0), int(0)), p(int(1), int(0)), p(int(3), int(1)), p(int(1), rat(1, 3))]);
        assert_eq!(tri.len(), 3);
    }

    #[test]
    fn irrational_triangle() {
        let r = Surd::sqrt(&int(7));
        let t = triangle(r.clone(), r.clone(), r.recip());
        assert_eq!(area(&t), Surd::rational(rat(1, 2)));
        assert!(contains_point(&t, &p(int(1), int(0))));
    }
}
