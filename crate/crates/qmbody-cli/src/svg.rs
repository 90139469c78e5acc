//! Static SVG for polygons. Coordinates are exact until this point; they are
//! printed with 12 significant digits.

use std::fmt::Write;

use qmbody::geometry::Point;

pub const VERSION_COMMENT: &str = concat!("<!-- qmbody ", env!("CARGO_PKG_VERSION"), " -->");

/// `x` rounded to 12 significant digits, printed without exponent.
pub fn num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".into();
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    let s = format!("{rounded}");
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

pub struct Panel {
    pub title: String,
    pub polygons: Vec<Vec<Point>>,
}

struct Bounds {
    t0: f64,
    t1: f64,
    u0: f64,
    u1: f64,
}

fn bounds(panels: &[Panel]) -> Bounds {
    let mut b = Bounds { t0: 0.0, t1: 1.0, u0: 0.0, u1: 0.0 };
    for p in panels.iter().flat_map(|p| &p.polygons).flatten() {
        let (t, u) = (p[0].to_f64(), p[1].to_f64());
        b.t0 = b.t0.min(t);
        b.t1 = b.t1.max(t);
        b.u0 = b.u0.min(u);
        b.u1 = b.u1.max(u);
    }
    b
}

fn path(poly: &[Point], scale: f64, ox: f64, oy: f64) -> String {
    let mut d = String::new();
    for (n, p) in poly.iter().enumerate() {
        let x = ox + p[0].to_f64() * scale;
        let y = oy - p[1].to_f64() * scale;
        let _ = write!(d, "{}{} {} ", if n == 0 { "M" } else { "L" }, num(x), num(y));
    }
    d.push('Z');
    d
}

/// Panels side by side, each with its polygons and exact vertex labels.
pub fn panels(panels: &[Panel], scale: f64) -> String {
    let b = bounds(panels);
    let margin = 60.0;
    let w = (b.t1 - b.t0) * scale + 2.0 * margin + 160.0;
    let h = (b.u1 - b.u0) * scale + 2.0 * margin;
    let mut out = String::new();
    let total_w = w * panels.len().max(1) as f64;
    let _ = writeln!(out, "{VERSION_COMMENT}");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}" font-family="sans-serif" font-size="11">"#,
        num(total_w),
        num(h),
        num(total_w),
        num(h)
    );
    for (i, panel) in panels.iter().enumerate() {
        let ox = i as f64 * w + margin - b.t0 * scale;
        let oy = margin + b.u1 * scale;
        let _ = writeln!(out, r#"<g>"#);
        let _ = writeln!(out, r#"<text x="{}" y="20">{}</text>"#, num(i as f64 * w + margin), escape(&panel.title));
        let _ = writeln!(
            out,
            r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#999"/>"##,
            num(ox),
            num(oy),
            num(ox + b.t1 * scale),
            num(oy)
        );
        for poly in &panel.polygons {
            let _ = writeln!(
                out,
                r##"<path d="{}" fill="#bbb" fill-opacity="0.6" stroke="#000"/>"##,
                path(poly, scale, ox, oy)
            );
            for p in poly {
                let (x, y) = (ox + p[0].to_f64() * scale, oy - p[1].to_f64() * scale);
                let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="2"/>"#, num(x), num(y));
                let _ = writeln!(
                    out,
                    r#"<text x="{}" y="{}">({}, {})</text>"#,
                    num(x + 4.0),
                    num(y - 4.0),
                    escape(&p[0].to_string()),
                    escape(&p[1].to_string())
                );
            }
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}

/// One frame per polygon, shown in turn.
pub fn animation(frames: &[(String, Vec<Point>)], scale: f64, seconds_per_frame: f64) -> String {
    let panel = [Panel { title: String::new(), polygons: frames.iter().map(|f| f.1.clone()).collect() }];
    let b = bounds(&panel);
    let margin = 60.0;
    let w = (b.t1 - b.t0) * scale + 2.0 * margin;
    let h = (b.u1 - b.u0) * scale + 2.0 * margin;
    let ox = margin - b.t0 * scale;
    let oy = margin + b.u1 * scale;
    let total = seconds_per_frame * frames.len() as f64;
    let mut out = String::new();
    let _ = writeln!(out, "{VERSION_COMMENT}");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}" font-family="sans-serif" font-size="11">"#,
        num(w),
        num(h),
        num(w),
        num(h)
    );
    for (i, (label, poly)) in frames.iter().enumerate() {
        let begin = seconds_per_frame * i as f64;
        let _ = writeln!(out, r#"<g visibility="hidden">"#);
        let _ = writeln!(
            out,
            r#"<set attributeName="visibility" to="visible" begin="{}s;anim.end+{}s" dur="{}s"/>"#,
            num(begin),
            num(begin),
            num(seconds_per_frame)
        );
        let _ = writeln!(out, r#"<text x="{}" y="20">{}</text>"#, num(margin), escape(label));
        let _ = writeln!(out, r##"<path d="{}" fill="#bbb" stroke="#000"/>"##, path(poly, scale, ox, oy));
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(
        out,
        r#"<animate id="anim" attributeName="opacity" from="1" to="1" begin="0s;anim.end" dur="{}s"/>"#,
        num(total)
    );
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(num(144.0 / 55.0), "2.61818181818");
        assert_eq!(num(2.0), "2");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(1.0 / 3.0 * 1e-3), "0.000333333333333");
    }
}
