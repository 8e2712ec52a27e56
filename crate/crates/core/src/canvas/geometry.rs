//! Derived geometry for composite elements: dimensions, break symbols and
//! height marks. Everything is computed in the element's own coordinates;
//! paper-mm sizes from the settings are converted with `paper_factor`.

use std::f64::consts::TAU;

use super::element::{Orientation, Point};
use super::settings::DimSettings;

/// Number of vertices of a pipe-break S-curve.
pub const PIPE_BREAK_POINTS: usize = 13;

/// S-shaped break line across a pipe whose axis points along `angle`.
///
/// Across the axis the curve spans exactly `size`; along the axis it swings
/// `±size/4` as one full sine period.
pub fn pipe_break_points(center: Point, angle: f64, size: f64) -> Vec<Point> {
    let (sin, cos) = angle.sin_cos();
    let along = Point::new(cos, sin);
    let across = Point::new(-sin, cos);
    (0..PIPE_BREAK_POINTS)
        .map(|i| {
            let t = i as f64 / (PIPE_BREAK_POINTS - 1) as f64;
            let u = size / 4.0 * (TAU * t).sin();
            let v = size * (t - 0.5);
            Point::new(
                center.x + along.x * u + across.x * v,
                center.y + along.y * u + across.y * v,
            )
        })
        .collect()
}

/// Circle arc through two points, counter-clockwise from `start` to `end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcGeometry {
    pub center: Point,
    pub radius: f64,
    pub start: f64,
    pub end: f64,
}

impl ArcGeometry {
    pub fn point_at(&self, angle: f64) -> Point {
        Point::new(
            self.center.x + self.radius * angle.cos(),
            self.center.y + self.radius * angle.sin(),
        )
    }

    pub fn sweep(&self) -> f64 {
        self.end - self.start
    }

    /// `n + 1` points evenly spaced along the arc.
    pub fn sample(&self, n: usize) -> Vec<Point> {
        (0..=n)
            .map(|i| self.point_at(self.start + self.sweep() * i as f64 / n as f64))
            .collect()
    }
}

/// Arc through `p1` and `p2` whose midpoint is `sagitta` away from the chord.
/// A positive sagitta bulges to the left of the direction `p1 → p2`.
pub fn arc_through(p1: Point, p2: Point, sagitta: f64) -> ArcGeometry {
    let chord = Point::new(p2.x - p1.x, p2.y - p1.y);
    let len = chord.x.hypot(chord.y);
    let half = len / 2.0;
    let mid = Point::new((p1.x + p2.x) / 2.0, (p1.y + p2.y) / 2.0);
    let normal = Point::new(-chord.y / len, chord.x / len);
    let radius = (half * half + sagitta * sagitta) / (2.0 * sagitta.abs());
    let shift = sagitta - sagitta.signum() * radius;
    let center = Point::new(mid.x + normal.x * shift, mid.y + normal.y * shift);
    let angle = |p: Point| (p.y - center.y).atan2(p.x - center.x);
    let (from, to) = if sagitta > 0.0 { (p2, p1) } else { (p1, p2) };
    let start = angle(from);
    let mut end = angle(to);
    while end <= start {
        end += TAU;
    }
    ArcGeometry {
        center,
        radius,
        start,
        end,
    }
}

/// Leg length of the height-mark triangle, paper mm.
pub const HEIGHT_MARK_LEG: f64 = 3.0;

/// Triangle of a height mark: right angle at `at`, opening upwards.
pub fn height_mark_triangle(at: Point, paper_to_local: f64) -> [Point; 3] {
    let d = HEIGHT_MARK_LEG * paper_to_local / std::f64::consts::SQRT_2;
    [at, Point::new(at.x - d, at.y + d), Point::new(at.x + d, at.y + d)]
}

/// Fully laid-out linear dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct DimLayout {
    pub line: (Point, Point),
    pub extensions: [(Point, Point); 2],
    pub arrows: [[Point; 3]; 2],
    /// Centre of the text baseline.
    pub text_at: Point,
    /// Text rotation in degrees, counter-clockwise.
    pub text_rotation: f64,
}

/// Distance of the text baseline from the dimension line, paper mm.
pub const DIM_TEXT_LIFT: f64 = 1.0;

/// Lays out a linear dimension.
///
/// The dimension line sits `offset` from `p1` across the measured axis.
/// Extension lines start `gap` away from each measured point and run
/// `extension` past the dimension line. The dimension line itself runs
/// `overhang` past the extension lines. Arrowheads are isosceles triangles
/// with length `len` and base `len / ratio`, tips on the extension lines.
pub fn dim_layout(
    orientation: Orientation,
    p1: Point,
    p2: Point,
    offset: f64,
    settings: &DimSettings,
    paper_to_local: f64,
) -> DimLayout {
    let k = paper_to_local;
    let ext = settings.extension;
    let ar = settings.arrows;
    // Work in (along, across) coordinates, then map back.
    let (a1, c1, a2, c2) = match orientation {
        Orientation::Horizontal => (p1.x, p1.y, p2.x, p2.y),
        Orientation::Vertical => (p1.y, p1.x, p2.y, p2.x),
    };
    let line_at = c1 + offset;
    let lo = a1.min(a2);
    let hi = a1.max(a2);
    let map = |along: f64, across: f64| match orientation {
        Orientation::Horizontal => Point::new(along, across),
        Orientation::Vertical => Point::new(across, along),
    };
    let ext_line = |along: f64, from: f64| {
        let dir = (line_at - from).signum();
        let dir = if dir == 0.0 { 1.0 } else { dir };
        (
            map(along, from + dir * ext.gap * k),
            map(along, line_at + dir * ext.extension * k),
        )
    };
    let arrow = |tip: f64, inward: f64, len: f64, ratio: f64| {
        let half_width = len / ratio / 2.0 * k;
        let base = tip + inward * len * k;
        [
            map(tip, line_at),
            map(base, line_at - half_width),
            map(base, line_at + half_width),
        ]
    };
    let (from_lo, from_hi) = if a1 <= a2 { (c1, c2) } else { (c2, c1) };
    let mid = (lo + hi) / 2.0;
    let (text_at, text_rotation) = match orientation {
        Orientation::Horizontal => (map(mid, line_at + DIM_TEXT_LIFT * k), 0.0),
        Orientation::Vertical => (map(mid, line_at - DIM_TEXT_LIFT * k), 90.0),
    };
    DimLayout {
        line: (
            map(lo - ext.overhang * k, line_at),
            map(hi + ext.overhang * k, line_at),
        ),
        extensions: [ext_line(lo, from_lo), ext_line(hi, from_hi)],
        arrows: [
            arrow(lo, 1.0, ar.len1, ar.ratio1),
            arrow(hi, -1.0, ar.len2, ar.ratio2),
        ],
        text_at,
        text_rotation,
    }
}

/// Measured extent of a linear dimension along its axis.
pub fn dim_extent(orientation: Orientation, p1: Point, p2: Point) -> f64 {
    match orientation {
        Orientation::Horizontal => (p2.x - p1.x).abs(),
        Orientation::Vertical => (p2.y - p1.y).abs(),
    }
}

pub fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if (r - TAU).abs() < 1e-15 {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bbox(points: &[Point]) -> (f64, f64) {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for p in points {
            x0 = x0.min(p.x);
            x1 = x1.max(p.x);
            y0 = y0.min(p.y);
            y1 = y1.max(p.y);
        }
        (x1 - x0, y1 - y0)
    }

    #[test]
    fn pipe_break_spans_size_across_axis() {
        // axis along X: the break runs along Y and spans exactly `size`
        let pts = pipe_break_points(Point::new(0.0, 0.0), 0.0, 10.0);
        let (w, h) = bbox(&pts);
        assert!((h - 10.0).abs() < 1e-12);
        assert!(w <= 5.0 + 1e-12);
        assert!(pts.len() <= crate::types::MAX_POLYLINE_POINTS);
    }

    #[test]
    fn arc_through_half_circle() {
        let arc = arc_through(Point::new(-1.0, 0.0), Point::new(1.0, 0.0), 1.0);
        assert!(arc.center.distance(Point::new(0.0, 0.0)) < 1e-12);
        assert!((arc.radius - 1.0).abs() < 1e-12);
        let apex = arc.point_at((arc.start + arc.end) / 2.0);
        assert!(apex.distance(Point::new(0.0, 1.0)) < 1e-12);
    }

    #[test]
    fn arc_through_mirror_symmetry() {
        let p1 = Point::new(3.0, -2.0);
        let p2 = Point::new(17.0, 5.0);
        for s in [0.5, 2.0, -3.0, 20.0] {
            let a = arc_through(p1, p2, s);
            let b = arc_through(p2, p1, -s);
            assert!(a.center.distance(b.center) < 1e-9);
            assert!((a.radius - b.radius).abs() < 1e-9);
            for (x, y) in a.sample(8).iter().zip(b.sample(8)) {
                assert!(x.distance(y) < 1e-9);
            }
            // endpoints are the chord ends and the midpoint is `|s|` off the chord
            let ends = [a.point_at(a.start), a.point_at(a.end)];
            assert!(ends.iter().any(|e| e.distance(p1) < 1e-9));
            assert!(ends.iter().any(|e| e.distance(p2) < 1e-9));
        }
    }

    #[test]
    fn horizontal_dim_layout() {
        let settings = crate::canvas::GlobalSettings::default().dim;
        let lay = dim_layout(
            Orientation::Horizontal,
            Point::new(0.0, 0.0),
            Point::new(880.0, 0.0),
            -50.0,
            &settings,
            1.0,
        );
        assert_eq!(lay.line.0.y, -50.0);
        assert_eq!(lay.arrows[0][0], Point::new(0.0, -50.0));
        assert_eq!(lay.arrows[1][0], Point::new(880.0, -50.0));
        // extension line goes down from the measured point
        assert!(lay.extensions[0].0.y < 0.0 && lay.extensions[0].1.y < -50.0);
        assert_eq!(lay.text_at.x, 440.0);
    }
}
