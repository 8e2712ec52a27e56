//! Drawing model: elements with stable integer ids, the global default
//! settings that drawing operations read and mutate, and the fixture dump.

mod dump;
mod element;
pub mod geometry;
mod settings;

pub use dump::dump;
pub use element::{Element, Orientation, Point, Shape};
pub use settings::{
    string_width, Arrows, Attribute, DimSettings, Extension, Font, GlobalSettings, LineType,
    Scale, TextSettings, Units, CHAR_ADVANCE, MAX_COLOR, MAX_LAYER, STANDARD_SCALES,
};

use thiserror::Error;

use crate::types::MAX_POLYLINE_POINTS;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CanvasError {
    #[error("{field} = {value} is outside {lo}..{hi}")]
    Range {
        field: &'static str,
        value: i64,
        lo: i64,
        hi: i64,
    },
    #[error("{field} = {value} is outside {range}")]
    RealRange {
        field: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("{0} must be finite")]
    NotFinite(&'static str),
    #[error("degenerate geometry: {0}")]
    Degenerate(&'static str),
    #[error("polyline has {0} points, at most 16 allowed")]
    TooManyPoints(usize),
    #[error("no element with number {0}")]
    UnknownElement(i64),
    #[error("element {0} is already removed")]
    AlreadyRemoved(u32),
    #[error("no text is open; start one first")]
    NoOpenText,
    #[error("element limit of {0} reached")]
    ElementLimit(usize),
}

type Result<T> = std::result::Result<T, CanvasError>;

/// Setting groups changed by the dimension/text setting operations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SettingChange {
    DimPrecision(i64),
    DimExtension { gap: f64, extension: f64, overhang: f64 },
    DimFont { height: f64, slant: f64, width_factor: f64 },
    DimArrows { len1: f64, ratio1: f64, len2: f64, ratio2: f64 },
    DimLeaders(bool),
    TextLeader(bool),
    TextFont { height: f64, slant: f64, width_factor: f64, line_step: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Canvas {
    elements: Vec<Element>,
    next_id: u32,
    settings: GlobalSettings,
    batch: Vec<u32>,
    pending_text: Option<Vec<String>>,
    max_elements: usize,
}

impl Default for Canvas {
    fn default() -> Self {
        Self::new()
    }
}

fn finite(what: &'static str, values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(CanvasError::NotFinite(what))
    }
}

fn positive(what: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CanvasError::NonPositive(what))
    }
}

impl Canvas {
    pub fn new() -> Self {
        Self::with_settings(GlobalSettings::default())
    }

    pub fn with_settings(settings: GlobalSettings) -> Self {
        Self {
            elements: Vec::new(),
            next_id: 1,
            settings,
            batch: Vec::new(),
            pending_text: None,
            max_elements: usize::MAX,
        }
    }

    pub fn set_element_limit(&mut self, limit: usize) {
        self.max_elements = limit;
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// Elements not marked removed, in id order.
    pub fn visible(&self) -> impl Iterator<Item = &Element> {
        self.elements.iter().filter(|e| !e.removed)
    }

    pub fn element(&self, id: u32) -> Option<&Element> {
        // ids are dense and start at 1
        self.elements.get((id as usize).checked_sub(1)?)
    }

    pub fn settings(&self) -> &GlobalSettings {
        &self.settings
    }

    pub fn get_global_attr(&self) -> Attribute {
        self.settings.attribute
    }

    pub fn set_attr(&mut self, attr: Attribute) {
        self.settings.attribute = attr;
    }

    pub fn set_scale(&mut self, scale: Scale) {
        self.settings.scale = scale;
    }

    pub fn snapshot_settings(&self) -> GlobalSettings {
        self.settings
    }

    pub fn restore_settings(&mut self, settings: GlobalSettings) {
        self.settings = settings;
    }

    /// Starts tracking a new generated batch.
    pub fn begin_batch(&mut self) {
        self.batch.clear();
    }

    /// Ids of elements added since the last `begin_batch`.
    pub fn batch(&self) -> &[u32] {
        &self.batch
    }

    fn push(&mut self, attribute: Attribute, shape: Shape) -> Result<u32> {
        if self.elements.len() >= self.max_elements {
            return Err(CanvasError::ElementLimit(self.max_elements));
        }
        let id = self.next_id;
        self.next_id += 1;
        self.elements.push(Element {
            id,
            attribute,
            scale: self.settings.scale,
            removed: false,
            shape,
        });
        self.batch.push(id);
        Ok(id)
    }

    pub fn add_segment(&mut self, a: Attribute, p1: Point, p2: Point) -> Result<u32> {
        finite("segment coordinates", &[p1.x, p1.y, p2.x, p2.y])?;
        self.push(a, Shape::Segment { p1, p2 })
    }

    pub fn add_rectangle(&mut self, a: Attribute, origin: Point, width: f64, height: f64) -> Result<u32> {
        finite("rectangle corner", &[origin.x, origin.y])?;
        positive("rectangle width", width)?;
        positive("rectangle height", height)?;
        self.push(
            a,
            Shape::Rectangle {
                origin,
                width,
                height,
            },
        )
    }

    pub fn add_arc(&mut self, a: Attribute, center: Point, radius: f64, start: f64, end: f64) -> Result<u32> {
        finite("arc parameters", &[center.x, center.y, start, end])?;
        positive("arc radius", radius)?;
        self.push(
            a,
            Shape::Arc {
                center,
                radius,
                start,
                end,
            },
        )
    }

    pub fn add_polyline(&mut self, a: Attribute, points: Vec<Point>) -> Result<u32> {
        if points.len() > MAX_POLYLINE_POINTS {
            return Err(CanvasError::TooManyPoints(points.len()));
        }
        if !points.iter().all(Point::is_finite) {
            return Err(CanvasError::NotFinite("polyline points"));
        }
        self.push(a, Shape::Polyline { points })
    }

    pub fn set_dim_setting(&mut self, change: SettingChange) -> Result<()> {
        let s = &mut self.settings;
        match change {
            SettingChange::DimPrecision(digits) => {
                if !(0..=6).contains(&digits) {
                    return Err(CanvasError::Range {
                        field: "точность",
                        value: digits,
                        lo: 0,
                        hi: 6,
                    });
                }
                s.dim.precision = digits as u8;
            }
            SettingChange::DimExtension {
                gap,
                extension,
                overhang,
            } => {
                for (what, v) in [("gap", gap), ("extension", extension), ("overhang", overhang)] {
                    if !(v.is_finite() && v >= 0.0) {
                        return Err(CanvasError::RealRange {
                            field: what,
                            value: v,
                            range: "[0, ∞)",
                        });
                    }
                }
                s.dim.extension = Extension {
                    gap,
                    extension,
                    overhang,
                };
            }
            SettingChange::DimFont {
                height,
                slant,
                width_factor,
            } => s.dim.font = Font::new(height, slant, width_factor)?,
            SettingChange::DimArrows {
                len1,
                ratio1,
                len2,
                ratio2,
            } => {
                positive("arrow length", len1)?;
                positive("arrow ratio", ratio1)?;
                positive("arrow length", len2)?;
                positive("arrow ratio", ratio2)?;
                s.dim.arrows = Arrows {
                    len1,
                    ratio1,
                    len2,
                    ratio2,
                };
            }
            SettingChange::DimLeaders(on) => s.dim.leaders = on,
            SettingChange::TextLeader(on) => s.text.leader = on,
            SettingChange::TextFont {
                height,
                slant,
                width_factor,
                line_step,
            } => {
                let font = Font::new(height, slant, width_factor)?;
                positive("line step", line_step)?;
                s.text.font = font;
                s.text.line_step = line_step;
            }
        }
        Ok(())
    }

    /// Formats a measured length at `precision` fractional digits.
    pub fn format_measure(value: f64, precision: u8) -> String {
        let s = format!("{:.*}", precision as usize, value);
        if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
            s[1..].to_string()
        } else {
            s
        }
    }

    pub fn add_linear_dim(
        &mut self,
        a: Attribute,
        orientation: Orientation,
        p1: Point,
        p2: Point,
        offset: f64,
    ) -> Result<u32> {
        finite("dimension parameters", &[p1.x, p1.y, p2.x, p2.y, offset])?;
        let extent = geometry::dim_extent(orientation, p1, p2);
        if extent <= 0.0 {
            return Err(CanvasError::Degenerate("dimension has zero extent"));
        }
        let settings = self.settings.dim;
        let text = Self::format_measure(extent, settings.precision);
        self.push(
            a,
            Shape::LinearDim {
                orientation,
                p1,
                p2,
                offset,
                text,
                settings,
            },
        )
    }

    /// Adds a horizontal dimension along the bottom edge and a vertical one
    /// along the left edge of the rectangle, both `offset` outside it.
    pub fn add_dim_frame(
        &mut self,
        a: Attribute,
        origin: Point,
        width: f64,
        height: f64,
        offset: f64,
    ) -> Result<(u32, u32)> {
        positive("frame width", width)?;
        positive("frame height", height)?;
        if self.elements.len() + 2 > self.max_elements {
            return Err(CanvasError::ElementLimit(self.max_elements));
        }
        let h = self.add_linear_dim(
            a,
            Orientation::Horizontal,
            origin,
            Point::new(origin.x + width, origin.y),
            -offset,
        )?;
        let v = self.add_linear_dim(
            a,
            Orientation::Vertical,
            origin,
            Point::new(origin.x, origin.y + height),
            -offset,
        )?;
        Ok((h, v))
    }

    pub fn begin_text(&mut self, first_line: &str) {
        self.pending_text = Some(vec![first_line.to_string()]);
    }

    pub fn append_line(&mut self, line: &str) -> Result<()> {
        self.pending_text
            .as_mut()
            .ok_or(CanvasError::NoOpenText)?
            .push(line.to_string());
        Ok(())
    }

    pub fn commit_text(&mut self, a: Attribute, anchor: Point) -> Result<u32> {
        finite("text anchor", &[anchor.x, anchor.y])?;
        let lines = self.pending_text.take().ok_or(CanvasError::NoOpenText)?;
        let t = self.settings.text;
        self.push(
            a,
            Shape::Text {
                anchor,
                lines,
                font: t.font,
                line_step: t.line_step,
                leader: t.leader,
            },
        )
    }

    pub fn discard_pending_text(&mut self) {
        self.pending_text = None;
    }

    pub fn has_pending_text(&self) -> bool {
        self.pending_text.is_some()
    }

    /// Width in mm of `s` under the current text font.
    pub fn string_width(&self, s: &str) -> f64 {
        string_width(s, &self.settings.text.font)
    }

    pub fn add_height_mark(&mut self, a: Attribute, at: Point, text: &str) -> Result<u32> {
        finite("height mark point", &[at.x, at.y])?;
        let font = self.settings.text.font;
        self.push(
            a,
            Shape::HeightMark {
                at,
                text: text.to_string(),
                font,
            },
        )
    }

    pub fn add_pipe_break(&mut self, a: Attribute, center: Point, angle: f64, size: f64) -> Result<u32> {
        finite("pipe break parameters", &[center.x, center.y, angle])?;
        positive("pipe break size", size)?;
        self.push(a, Shape::PipeBreak { center, angle, size })
    }

    pub fn add_arc_break(&mut self, a: Attribute, p1: Point, p2: Point, sagitta: f64) -> Result<u32> {
        finite("arc break parameters", &[p1.x, p1.y, p2.x, p2.y, sagitta])?;
        if p1 == p2 {
            return Err(CanvasError::Degenerate("arc break end points coincide"));
        }
        if sagitta == 0.0 {
            return Err(CanvasError::Degenerate("arc break sagitta is zero"));
        }
        self.push(a, Shape::ArcBreak { p1, p2, sagitta })
    }

    pub fn remove_element(&mut self, id: i64) -> Result<()> {
        let idx = usize::try_from(id)
            .ok()
            .and_then(|i| i.checked_sub(1))
            .filter(|&i| i < self.elements.len())
            .ok_or(CanvasError::UnknownElement(id))?;
        let el = &mut self.elements[idx];
        if el.removed {
            return Err(CanvasError::AlreadyRemoved(el.id));
        }
        el.removed = true;
        Ok(())
    }

    /// Moves the listed elements by `offset` and optionally recolors them.
    pub fn finalize_placement(&mut self, batch: &[u32], offset: Point, color: Option<i64>) -> Result<()> {
        finite("placement offset", &[offset.x, offset.y])?;
        let color = match color {
            Some(c) if !(0..=MAX_COLOR).contains(&c) => {
                return Err(CanvasError::Range {
                    field: "Цвет",
                    value: c,
                    lo: 0,
                    hi: MAX_COLOR,
                })
            }
            Some(c) => Some(c as u8),
            None => None,
        };
        for &id in batch {
            if self.element(id).is_none() {
                return Err(CanvasError::UnknownElement(id as i64));
            }
        }
        for &id in batch {
            let el = &mut self.elements[id as usize - 1];
            el.shape.translate(offset);
            if let Some(c) = color {
                el.attribute.color = c;
            }
        }
        Ok(())
    }
}
