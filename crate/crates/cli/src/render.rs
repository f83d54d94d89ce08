//! Static SVG output. Coordinates are converted to floating point here and
//! nowhere else.

use std::fmt::Write;

use num_traits::ToPrimitive;
use seglink::gadget::{template, Role, TransformReport};
use seglink::geom::{rat, Point, Rat};
use seglink::{Linking, SegmentFamily};

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 20.0;

pub struct RenderOptions<'a> {
    pub witness: Option<&'a Linking>,
    pub report: Option<&'a TransformReport>,
    /// Display-only magnification of every `a1'` displacement.
    pub zoom_delta: Option<u64>,
}

fn f(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(0.0)
}

/// Segments as drawn, with `a1'` points pushed out when zooming.
fn display_segments(family: &SegmentFamily, opts: &RenderOptions) -> Vec<[(f64, f64); 2]> {
    let mut pts: Vec<[Point; 2]> = family.segments.iter().map(|s| [s.p.clone(), s.q.clone()]).collect();
    if let (Some(rep), Some(k)) = (opts.report, opts.zoom_delta) {
        let scale = &rep.params.final_scale;
        for g in &rep.gadgets {
            let Some(&i) = g.roles.get(&Role::A1) else { continue };
            let a1 = g.world(&template::a1(), scale);
            let shift = &(&pts[i][0] - &a1) * &rat(k as i64);
            pts[i][0] = &a1 + &shift;
        }
    }
    pts.iter()
        .map(|[p, q]| [(f(&p.x), f(&p.y)), (f(&q.x), f(&q.y))])
        .collect()
}

pub fn render_svg(family: &SegmentFamily, opts: &RenderOptions) -> String {
    let segs = display_segments(family, opts);
    let xs = segs.iter().flat_map(|s| [s[0].0, s[1].0]);
    let ys = segs.iter().flat_map(|s| [s[0].1, s[1].1]);
    let (x0, x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    let (y0, y1) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
    let (x0, x1, y0, y1) = if segs.is_empty() { (0.0, 1.0, 0.0, 1.0) } else { (x0, x1, y0, y1) };
    let span = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    let k = (WIDTH - 2.0 * MARGIN) / span;
    let height = (y1 - y0) * k + 2.0 * MARGIN;
    // SVG y grows downward.
    let map = |(x, y): (f64, f64)| (MARGIN + (x - x0) * k, height - MARGIN - (y - y0) * k);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH:.0}" height="{height:.0}" viewBox="0 0 {WIDTH:.0} {height:.0}">
<rect width="100%" height="100%" fill="white"/>"#
    );
    if let Some(w) = opts.witness {
        out.push_str("<g stroke=\"#1f77b4\" stroke-width=\"1\" stroke-dasharray=\"4 3\" fill=\"none\">\n");
        for (a, b) in w.added_edges() {
            let (p, q) = (family.point(a), family.point(b));
            if p == q {
                continue;
            }
            let (u, v) = (map(segs[a.seg][a.end]), map(segs[b.seg][b.end]));
            let _ = writeln!(out, r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#, u.0, u.1, v.0, v.1);
        }
        out.push_str("</g>\n");
    }
    out.push_str("<g stroke=\"black\" stroke-width=\"2\" stroke-linecap=\"round\">\n");
    for (i, s) in segs.iter().enumerate() {
        let (u, v) = (map(s[0]), map(s[1]));
        let _ = writeln!(
            out,
            r#"<line id="s{i}" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
            u.0, u.1, v.0, v.1
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use seglink::gadget::transform_circuit;
    use seglink::linker::decide_circuit;
    use seglink::corpus;

    fn opts<'a>(w: Option<&'a Linking>, r: Option<&'a TransformReport>, z: Option<u64>) -> RenderOptions<'a> {
        RenderOptions { witness: w, report: r, zoom_delta: z }
    }

    #[test]
    fn gadget_renders_seven_segments() {
        let (out, _) = transform_circuit(&corpus::l_instance()).unwrap();
        let svg = render_svg(&out, &opts(None, None, None));
        assert_eq!(svg.matches("<line id=").count(), 7);
        assert!(!svg.contains("stroke-dasharray"));
        assert_eq!(svg, render_svg(&out, &opts(None, None, None)));
    }

    #[test]
    fn witness_edges_are_dashed() {
        let (out, _) = transform_circuit(&corpus::l_instance()).unwrap();
        let d = decide_circuit(&out);
        let svg = render_svg(&out, &opts(d.witness(), None, None));
        assert!(svg.contains("stroke-dasharray"));
        assert_eq!(svg.matches("<line").count(), 14);
    }

    #[test]
    fn zoom_moves_only_a1_prime() {
        let (out, rep) = transform_circuit(&corpus::l_instance()).unwrap();
        let plain = display_segments(&out, &opts(None, Some(&rep), None));
        let zoomed = display_segments(&out, &opts(None, Some(&rep), Some(1000)));
        let a1 = rep.gadgets[0].segment(Role::A1);
        let moved: Vec<usize> = (0..plain.len()).filter(|&i| plain[i] != zoomed[i]).collect();
        assert_eq!(moved, vec![a1]);
        // delta times the final scale is one unit.
        let gap = (plain[a1][0].1 - zoomed[a1][0].1).abs();
        assert!((gap - 999.0).abs() < 1e-6, "gap {gap}");
    }
}
