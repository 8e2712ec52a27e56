//! Deterministic SVG rendering of a canvas.
//!
//! All geometry is converted to paper millimetres first: model-space
//! elements are multiplied by the scale in force when they were created,
//! paper-space elements are used as they are. The drawing's Y axis points
//! up, so every Y coordinate is negated on output. Numbers are written with
//! three fractional digits.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use crate::canvas::geometry::{
    arc_through, dim_layout, height_mark_triangle, pipe_break_points, HEIGHT_MARK_LEG,
};
use crate::canvas::{string_width, Canvas, Element, Font, LineType, Point, Shape};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    pub margin: f64,
    pub thin: f64,
    pub thick: f64,
    pub background: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            margin: 5.0,
            thin: 0.25,
            thick: 0.5,
            background: true,
        }
    }
}

/// Classic 16-color text-mode palette, indexed by color number.
pub const PALETTE: [&str; 16] = [
    "#000000", "#0000aa", "#00aa00", "#00aaaa", "#aa0000", "#aa00aa", "#aa5500", "#aaaaaa",
    "#555555", "#5555ff", "#55ff55", "#55ffff", "#ff5555", "#ff55ff", "#ffff55", "#ffffff",
];

/// Dash pattern in paper mm, `None` for solid lines.
pub fn dash_pattern(lt: LineType) -> Option<&'static str> {
    match lt {
        LineType::SolidThick | LineType::SolidThin => None,
        LineType::DashThick | LineType::Dash => Some("4 1.5"),
        LineType::DashDotThin | LineType::DashDotThick => Some("8 1.5 1 1.5"),
        LineType::Open => Some("12 3"),
    }
}

/// Fixed three-digit formatting without negative zero.
fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[derive(Default)]
struct Bounds {
    min: Option<(f64, f64)>,
    max: (f64, f64),
}

impl Bounds {
    fn add(&mut self, p: Point) {
        match &mut self.min {
            None => {
                self.min = Some((p.x, p.y));
                self.max = (p.x, p.y);
            }
            Some(m) => {
                m.0 = m.0.min(p.x);
                m.1 = m.1.min(p.y);
                self.max.0 = self.max.0.max(p.x);
                self.max.1 = self.max.1.max(p.y);
            }
        }
    }
}

/// One output node in paper mm, Y up.
enum Node {
    Rect { origin: Point, w: f64, h: f64 },
    Line(Point, Point),
    Polyline { points: Vec<Point>, closed: bool, filled: bool },
    Arc { center: Point, r: f64, start: f64, end: f64 },
    Text { at: Point, text: String, font: Font, rotation: f64, centered: bool },
}

impl Node {
    fn extend(&self, b: &mut Bounds) {
        match self {
            Node::Rect { origin, w, h } => {
                b.add(*origin);
                b.add(Point::new(origin.x + w, origin.y + h));
            }
            Node::Line(p, q) => {
                b.add(*p);
                b.add(*q);
            }
            Node::Polyline { points, .. } => points.iter().for_each(|p| b.add(*p)),
            Node::Arc { center, r, start, end } => {
                let n = 64;
                for i in 0..=n {
                    let a = start + (end - start) * i as f64 / n as f64;
                    b.add(Point::new(center.x + r * a.cos(), center.y + r * a.sin()));
                }
            }
            Node::Text { at, text, font, rotation, centered } => {
                let w = string_width(text, font);
                let x0 = if *centered { -w / 2.0 } else { 0.0 };
                let (s, c) = rotation.to_radians().sin_cos();
                for (dx, dy) in [(x0, 0.0), (x0 + w, 0.0), (x0, font.height), (x0 + w, font.height)] {
                    b.add(Point::new(at.x + dx * c - dy * s, at.y + dx * s + dy * c));
                }
            }
        }
    }

    fn write(&self, out: &mut String) {
        let p = |q: &Point| format!("{} {}", num(q.x), num(-q.y));
        match self {
            Node::Rect { origin, w, h } => {
                let x = origin.x.min(origin.x + w);
                let y = origin.y.max(origin.y + h);
                writeln!(
                    out,
                    r#"<rect x="{}" y="{}" width="{}" height="{}"/>"#,
                    num(x),
                    num(-y),
                    num(w.abs()),
                    num(h.abs())
                )
                .unwrap();
            }
            Node::Line(a, b) => {
                writeln!(
                    out,
                    r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                    num(a.x),
                    num(-a.y),
                    num(b.x),
                    num(-b.y)
                )
                .unwrap();
            }
            Node::Polyline { points, closed, filled } => {
                let pts: Vec<String> = points.iter().map(|q| p(q).replace(' ', ",")).collect();
                let tag = if *closed { "polygon" } else { "polyline" };
                let fill = if *filled { r#" fill="currentColor""# } else { "" };
                writeln!(out, r#"<{tag} points="{}"{fill}/>"#, pts.join(" ")).unwrap();
            }
            Node::Arc { center, r, start, end } => {
                let at = |a: f64| Point::new(center.x + r * a.cos(), center.y + r * a.sin());
                let sweep = end - start;
                let mut d = format!("M {}", p(&at(*start)));
                if sweep >= TAU - 1e-12 {
                    let mid = start + TAU / 2.0;
                    write!(d, " A {0} {0} 0 0 0 {1}", num(*r), p(&at(mid))).unwrap();
                    write!(d, " A {0} {0} 0 0 0 {1}", num(*r), p(&at(*start))).unwrap();
                } else {
                    let large = (sweep > TAU / 2.0) as u8;
                    write!(d, " A {0} {0} 0 {large} 0 {1}", num(*r), p(&at(*end))).unwrap();
                }
                writeln!(out, r#"<path d="{d}"/>"#).unwrap();
            }
            Node::Text { at, text, font, rotation, centered } => {
                let mut transform = String::new();
                if *rotation != 0.0 {
                    write!(transform, "rotate({} {} {})", num(-rotation), num(at.x), num(-at.y)).unwrap();
                }
                if font.slant != 0.0 {
                    if !transform.is_empty() {
                        transform.push(' ');
                    }
                    write!(
                        transform,
                        "translate({} {}) skewX({}) translate({} {})",
                        num(at.x),
                        num(-at.y),
                        num(-font.slant),
                        num(-at.x),
                        num(at.y)
                    )
                    .unwrap();
                }
                let transform = if transform.is_empty() {
                    String::new()
                } else {
                    format!(r#" transform="{transform}""#)
                };
                let anchor = if *centered { "middle" } else { "start" };
                writeln!(
                    out,
                    r#"<text x="{}" y="{}" font-size="{}" textLength="{}" lengthAdjust="spacingAndGlyphs" text-anchor="{anchor}"{transform}>{}</text>"#,
                    num(at.x),
                    num(-at.y),
                    num(font.height),
                    num(string_width(text, font)),
                    esc(text)
                )
                .unwrap();
            }
        }
    }
}

fn nodes(e: &Element) -> Vec<Node> {
    let f = e.paper_factor();
    let m = |q: Point| Point::new(q.x * f, q.y * f);
    match &e.shape {
        Shape::Segment { p1, p2 } => vec![Node::Line(m(*p1), m(*p2))],
        Shape::Rectangle { origin, width, height } => vec![Node::Rect {
            origin: m(*origin),
            w: width * f,
            h: height * f,
        }],
        Shape::Arc { center, radius, start, end } => {
            let mut end = *end;
            while end <= *start {
                end += TAU;
            }
            vec![Node::Arc {
                center: m(*center),
                r: radius * f,
                start: *start,
                end,
            }]
        }
        Shape::Polyline { points } => vec![Node::Polyline {
            points: points.iter().map(|q| m(*q)).collect(),
            closed: false,
            filled: false,
        }],
        Shape::Text { anchor, lines, font, line_step, leader } => {
            let at = m(*anchor);
            let mut out: Vec<Node> = lines
                .iter()
                .enumerate()
                .map(|(i, l)| Node::Text {
                    at: Point::new(at.x, at.y - i as f64 * line_step),
                    text: l.clone(),
                    font: *font,
                    rotation: 0.0,
                    centered: false,
                })
                .collect();
            if *leader {
                let d = font.height;
                out.push(Node::Line(Point::new(at.x, at.y - d / 2.0), Point::new(at.x - d, at.y - 1.5 * d)));
            }
            out
        }
        Shape::LinearDim { orientation, p1, p2, offset, text, settings } => {
            let l = dim_layout(*orientation, m(*p1), m(*p2), offset * f, settings, 1.0);
            let mut out = vec![
                Node::Line(l.line.0, l.line.1),
                Node::Line(l.extensions[0].0, l.extensions[0].1),
                Node::Line(l.extensions[1].0, l.extensions[1].1),
            ];
            for a in l.arrows {
                out.push(Node::Polyline {
                    points: a.to_vec(),
                    closed: true,
                    filled: true,
                });
            }
            out.push(Node::Text {
                at: l.text_at,
                text: text.clone(),
                font: settings.font,
                rotation: l.text_rotation,
                centered: true,
            });
            out
        }
        Shape::HeightMark { at, text, font } => {
            let at = m(*at);
            let tri = height_mark_triangle(at, 1.0);
            let d = HEIGHT_MARK_LEG / std::f64::consts::SQRT_2;
            vec![
                Node::Polyline {
                    points: tri.to_vec(),
                    closed: true,
                    filled: false,
                },
                Node::Text {
                    at: Point::new(at.x + d, at.y + d + 0.5),
                    text: text.clone(),
                    font: *font,
                    rotation: 0.0,
                    centered: false,
                },
            ]
        }
        Shape::PipeBreak { center, angle, size } => vec![Node::Polyline {
            points: pipe_break_points(m(*center), *angle, size * f),
            closed: false,
            filled: false,
        }],
        Shape::ArcBreak { p1, p2, sagitta } => {
            let a = arc_through(m(*p1), m(*p2), sagitta * f);
            vec![Node::Arc {
                center: a.center,
                r: a.radius,
                start: a.start,
                end: a.end,
            }]
        }
    }
}

/// Renders the visible elements in id order.
pub fn render(canvas: &Canvas, opts: &RenderOptions) -> String {
    let margin = opts.margin.max(0.0);
    let rendered: Vec<(&Element, Vec<Node>)> = canvas.visible().map(|e| (e, nodes(e))).collect();
    let mut b = Bounds::default();
    for (_, ns) in &rendered {
        ns.iter().for_each(|n| n.extend(&mut b));
    }
    let (lo, hi) = match b.min {
        Some(min) => (min, b.max),
        None => ((0.0, 0.0), (0.0, 0.0)),
    };
    let x = lo.0 - margin;
    let y = -hi.1 - margin;
    let w = hi.0 - lo.0 + 2.0 * margin;
    let h = hi.1 - lo.1 + 2.0 * margin;

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{0}mm" height="{1}mm" viewBox="{2} {3} {0} {1}">"#,
        num(w),
        num(h),
        num(x),
        num(y)
    )
    .unwrap();
    if opts.background {
        writeln!(
            out,
            r##"<path class="background" d="M {0} {1} h {2} v {3} h -{2} Z" fill="#ffffff" stroke="none"/>"##,
            num(x),
            num(y),
            num(w),
            num(h)
        )
        .unwrap();
    }
    for (e, ns) in &rendered {
        let a = e.attribute;
        let color = PALETTE[a.color as usize];
        let width = if a.line_type.is_thick() { opts.thick } else { opts.thin };
        let dash = dash_pattern(a.line_type)
            .map(|d| format!(r#" stroke-dasharray="{d}""#))
            .unwrap_or_default();
        writeln!(
            out,
            r#"<g id="e{}" class="{} layer{}" color="{color}" stroke="{color}" stroke-width="{}"{dash} fill="none" font-family="monospace">"#,
            e.id,
            e.shape.kind(),
            a.layer,
            num(width)
        )
        .unwrap();
        for n in ns {
            if let Node::Text { .. } = n {
                // glyphs are filled, never stroked
                let mut s = String::new();
                n.write(&mut s);
                out.push_str(&s.replacen("<text ", r#"<text stroke="none" fill="currentColor" "#, 1));
            } else {
                n.write(&mut out);
            }
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canvas::{Attribute, Scale, Units};

    fn attr() -> Attribute {
        Attribute::default()
    }

    #[test]
    fn empty_canvas_has_frame_only() {
        let svg = render(&Canvas::new(), &RenderOptions::default());
        assert!(svg.starts_with("<?xml"));
        assert!(svg.contains(r#"viewBox="-5.000 -5.000 10.000 10.000""#));
        assert!(!svg.contains("<g "));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn y_axis_is_flipped_and_scaled() {
        let mut c = Canvas::new();
        c.set_scale(Scale::new(1, 10).unwrap());
        c.add_rectangle(attr(), Point::new(0.0, 0.0), 100.0, 50.0).unwrap();
        let svg = render(&c, &RenderOptions { margin: 0.0, ..Default::default() });
        assert!(svg.contains(r#"<rect x="0.000" y="-5.000" width="10.000" height="5.000"/>"#), "{svg}");
        assert!(svg.contains(r#"viewBox="0.000 -5.000 10.000 5.000""#), "{svg}");
    }

    #[test]
    fn paper_units_ignore_scale() {
        let mut c = Canvas::new();
        c.set_scale(Scale::new(1, 10).unwrap());
        let mut a = attr();
        a.units = Units::Paper;
        c.add_segment(a, Point::new(0.0, 0.0), Point::new(20.0, 0.0)).unwrap();
        let svg = render(&c, &RenderOptions::default());
        assert!(svg.contains(r#"x2="20.000""#), "{svg}");
    }

    #[test]
    fn removed_elements_are_skipped() {
        let mut c = Canvas::new();
        let a = c.add_segment(attr(), Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap();
        c.add_segment(attr(), Point::new(0.0, 0.0), Point::new(2.0, 2.0)).unwrap();
        c.remove_element(a as i64).unwrap();
        let svg = render(&c, &RenderOptions::default());
        assert!(!svg.contains(r#"id="e1""#));
        assert!(svg.contains(r#"id="e2""#));
    }

    #[test]
    fn every_visible_element_produces_a_node() {
        let mut c = Canvas::new();
        c.add_segment(attr(), Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap();
        c.add_arc(attr(), Point::new(0.0, 0.0), 5.0, 0.0, 1.0).unwrap();
        c.add_polyline(attr(), vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.0)]).unwrap();
        c.add_pipe_break(attr(), Point::new(0.0, 0.0), 0.0, 10.0).unwrap();
        c.add_arc_break(attr(), Point::new(0.0, 0.0), Point::new(10.0, 0.0), 2.0).unwrap();
        c.add_height_mark(attr(), Point::new(0.0, 0.0), "+0.000").unwrap();
        c.add_linear_dim(attr(), crate::canvas::Orientation::Horizontal, Point::new(0.0, 0.0), Point::new(50.0, 0.0), 10.0)
            .unwrap();
        c.begin_text("a & b");
        c.append_line("<c>").unwrap();
        c.commit_text(attr(), Point::new(0.0, 0.0)).unwrap();
        let svg = render(&c, &RenderOptions::default());
        for e in c.elements() {
            let start = svg.find(&format!(r#"id="e{}""#, e.id)).unwrap();
            let body = &svg[start..start + svg[start..].find("</g>").unwrap()];
            assert!(body.matches('<').count() >= 1, "{body}");
        }
        assert!(svg.contains("a &amp; b"));
        assert!(svg.contains("&lt;c&gt;"));
    }

    #[test]
    fn line_types_and_colors_are_total() {
        for lt in LineType::ALL {
            let _ = dash_pattern(lt);
        }
        assert_eq!(dash_pattern(LineType::SolidThick), None);
        assert_eq!(dash_pattern(LineType::Open), Some("12 3"));
        assert_eq!(PALETTE.len(), 16);
    }

    #[test]
    fn no_negative_zero() {
        assert_eq!(num(-0.0001), "0.000");
        assert_eq!(num(2.0 / 3.0), "0.667");
    }

    #[test]
    fn render_is_deterministic() {
        let mut c = Canvas::new();
        c.add_rectangle(attr(), Point::new(1.0 / 3.0, 0.0), 10.0, 5.0).unwrap();
        let o = RenderOptions::default();
        assert_eq!(render(&c, &o), render(&c.clone(), &o));
    }
}
