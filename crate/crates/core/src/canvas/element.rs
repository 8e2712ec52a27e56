use serde::{Deserialize, Serialize};

use super::settings::{Attribute, DimSettings, Font, Scale};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn translate(&self, by: Point) -> Point {
        Point::new(self.x + by.x, self.y + by.y)
    }

    pub fn distance(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Shape {
    Segment {
        p1: Point,
        p2: Point,
    },
    Rectangle {
        origin: Point,
        width: f64,
        height: f64,
    },
    /// Counter-clockwise arc from `start` to `end` (radians).
    Arc {
        center: Point,
        radius: f64,
        start: f64,
        end: f64,
    },
    Polyline {
        points: Vec<Point>,
    },
    Text {
        anchor: Point,
        lines: Vec<String>,
        font: Font,
        line_step: f64,
        leader: bool,
    },
    LinearDim {
        orientation: Orientation,
        p1: Point,
        p2: Point,
        offset: f64,
        text: String,
        settings: DimSettings,
    },
    HeightMark {
        at: Point,
        text: String,
        font: Font,
    },
    PipeBreak {
        center: Point,
        angle: f64,
        size: f64,
    },
    ArcBreak {
        p1: Point,
        p2: Point,
        sagitta: f64,
    },
}

impl Shape {
    pub fn kind(&self) -> &'static str {
        match self {
            Shape::Segment { .. } => "segment",
            Shape::Rectangle { .. } => "rect",
            Shape::Arc { .. } => "arc",
            Shape::Polyline { .. } => "polyline",
            Shape::Text { .. } => "text",
            Shape::LinearDim { .. } => "dim",
            Shape::HeightMark { .. } => "height-mark",
            Shape::PipeBreak { .. } => "pipe-break",
            Shape::ArcBreak { .. } => "arc-break",
        }
    }

    pub fn translate(&mut self, by: Point) {
        match self {
            Shape::Segment { p1, p2 }
            | Shape::LinearDim { p1, p2, .. }
            | Shape::ArcBreak { p1, p2, .. } => {
                *p1 = p1.translate(by);
                *p2 = p2.translate(by);
            }
            Shape::Rectangle { origin: p, .. }
            | Shape::Arc { center: p, .. }
            | Shape::Text { anchor: p, .. }
            | Shape::HeightMark { at: p, .. }
            | Shape::PipeBreak { center: p, .. } => *p = p.translate(by),
            Shape::Polyline { points } => {
                for p in points {
                    *p = p.translate(by);
                }
            }
        }
    }
}

/// A drawing element. `attribute` and `scale` are the values in force when
/// the element was created; later setting changes never touch it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Element {
    pub id: u32,
    pub attribute: Attribute,
    pub scale: Scale,
    pub removed: bool,
    pub shape: Shape,
}

impl Element {
    /// Multiplier from this element's coordinates to paper millimetres.
    pub fn paper_factor(&self) -> f64 {
        match self.attribute.units {
            super::Units::Model => self.scale.factor(),
            super::Units::Paper => 1.0,
        }
    }
}
