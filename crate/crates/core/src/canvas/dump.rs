//! Line-oriented canvas fixture format.
//!
//! ```text
//! # pgen canvas v1
//! <id> <kind> [removed] layer=<n> color=<n> ltype=<n> units=<n> scale=<num>:<den> <kind fields>
//! ```
//!
//! Kind fields, in order:
//!
//! | kind          | fields                                                   |
//! |---------------|----------------------------------------------------------|
//! | `segment`     | `x1 y1 x2 y2`                                            |
//! | `rect`        | `x y w h`                                                |
//! | `arc`         | `cx cy r a1 a2` (radians, counter-clockwise)             |
//! | `polyline`    | `n pts` (`pts` = `x,y;x,y;…`)                            |
//! | `text`        | `x y h slant wf step leader lines` (`lines` JSON array)  |
//! | `dim`         | `o x1 y1 x2 y2 off prec text` (`o` = `H`/`V`)            |
//! | `height-mark` | `x y h text`                                             |
//! | `pipe-break`  | `x y angle size`                                         |
//! | `arc-break`   | `x1 y1 x2 y2 s`                                          |
//!
//! Numbers use the shortest representation that round-trips an `f64`
//! (`-0` is written as `0`); strings are JSON-quoted.

use std::fmt::Write;

use super::{Canvas, Orientation, Shape};

pub const HEADER: &str = "# pgen canvas v1";

fn num(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v}")
    }
}

fn quoted(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization cannot fail")
}

/// Serializes every element (removed ones included, flagged) one per line.
pub fn dump(canvas: &Canvas) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for el in canvas.elements() {
        let a = el.attribute;
        let _ = write!(out, "{} {}", el.id, el.shape.kind());
        if el.removed {
            out.push_str(" removed");
        }
        let _ = write!(
            out,
            " layer={} color={} ltype={} units={} scale={}:{}",
            a.layer, a.color, a.line_type as u8, a.units as u8, el.scale.num, el.scale.den
        );
        let fields: Vec<(&str, String)> = match &el.shape {
            Shape::Segment { p1, p2 } => vec![
                ("x1", num(p1.x)),
                ("y1", num(p1.y)),
                ("x2", num(p2.x)),
                ("y2", num(p2.y)),
            ],
            Shape::Rectangle {
                origin,
                width,
                height,
            } => vec![
                ("x", num(origin.x)),
                ("y", num(origin.y)),
                ("w", num(*width)),
                ("h", num(*height)),
            ],
            Shape::Arc {
                center,
                radius,
                start,
                end,
            } => vec![
                ("cx", num(center.x)),
                ("cy", num(center.y)),
                ("r", num(*radius)),
                ("a1", num(*start)),
                ("a2", num(*end)),
            ],
            Shape::Polyline { points } => vec![
                ("n", points.len().to_string()),
                (
                    "pts",
                    points
                        .iter()
                        .map(|p| format!("{},{}", num(p.x), num(p.y)))
                        .collect::<Vec<_>>()
                        .join(";"),
                ),
            ],
            Shape::Text {
                anchor,
                lines,
                font,
                line_step,
                leader,
            } => vec![
                ("x", num(anchor.x)),
                ("y", num(anchor.y)),
                ("h", num(font.height)),
                ("slant", num(font.slant)),
                ("wf", num(font.width_factor)),
                ("step", num(*line_step)),
                ("leader", (*leader as u8).to_string()),
                (
                    "lines",
                    serde_json::to_string(lines).expect("string list serializes"),
                ),
            ],
            Shape::LinearDim {
                orientation,
                p1,
                p2,
                offset,
                text,
                settings,
            } => vec![
                (
                    "o",
                    match orientation {
                        Orientation::Horizontal => "H",
                        Orientation::Vertical => "V",
                    }
                    .to_string(),
                ),
                ("x1", num(p1.x)),
                ("y1", num(p1.y)),
                ("x2", num(p2.x)),
                ("y2", num(p2.y)),
                ("off", num(*offset)),
                ("prec", settings.precision.to_string()),
                ("text", quoted(text)),
            ],
            Shape::HeightMark { at, text, font } => vec![
                ("x", num(at.x)),
                ("y", num(at.y)),
                ("h", num(font.height)),
                ("text", quoted(text)),
            ],
            Shape::PipeBreak {
                center,
                angle,
                size,
            } => vec![
                ("x", num(center.x)),
                ("y", num(center.y)),
                ("angle", num(*angle)),
                ("size", num(*size)),
            ],
            Shape::ArcBreak { p1, p2, sagitta } => vec![
                ("x1", num(p1.x)),
                ("y1", num(p1.y)),
                ("x2", num(p2.x)),
                ("y2", num(p2.y)),
                ("s", num(*sagitta)),
            ],
        };
        for (k, v) in fields {
            let _ = write!(out, " {k}={v}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canvas::{Attribute, Point};

    #[test]
    fn dump_lines() {
        let mut c = Canvas::new();
        c.add_rectangle(Attribute::default(), Point::new(0.0, 0.0), 880.0, 450.0)
            .unwrap();
        c.add_segment(Attribute::default(), Point::new(-0.0, 1.5), Point::new(2.0, 0.1))
            .unwrap();
        c.remove_element(2).unwrap();
        c.begin_text("Ф0 \"1\"");
        c.commit_text(Attribute::default(), Point::default()).unwrap();
        let text = dump(&c);
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], HEADER);
        assert_eq!(
            lines[1],
            "1 rect layer=0 color=0 ltype=0 units=0 scale=1:1 x=0 y=0 w=880 h=450"
        );
        assert_eq!(
            lines[2],
            "2 segment removed layer=0 color=0 ltype=0 units=0 scale=1:1 x1=0 y1=1.5 x2=2 y2=0.1"
        );
        assert!(lines[3].ends_with(r#"lines=["Ф0 \"1\""]"#), "{}", lines[3]);
    }
}
