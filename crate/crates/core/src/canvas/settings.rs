use serde::{Deserialize, Serialize};

use super::CanvasError;

/// Unit system an element's coordinates are expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Units {
    /// Model space, scaled by the drawing scale on output.
    Model = 0,
    /// Paper millimetres, output as-is.
    Paper = 1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LineType {
    SolidThick = 0,
    SolidThin = 1,
    DashThick = 2,
    Dash = 3,
    DashDotThin = 4,
    DashDotThick = 5,
    Open = 6,
}

impl LineType {
    pub const ALL: [LineType; 7] = [
        LineType::SolidThick,
        LineType::SolidThin,
        LineType::DashThick,
        LineType::Dash,
        LineType::DashDotThin,
        LineType::DashDotThick,
        LineType::Open,
    ];

    pub fn is_thick(self) -> bool {
        matches!(
            self,
            LineType::SolidThick | LineType::DashThick | LineType::DashDotThick
        )
    }
}

pub const MAX_LAYER: i64 = 255;
pub const MAX_COLOR: i64 = 15;

/// Layer, color, line type and unit system stamped on every element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribute {
    pub layer: u8,
    pub color: u8,
    pub line_type: LineType,
    pub units: Units,
}

impl Default for Attribute {
    fn default() -> Self {
        Self {
            layer: 0,
            color: 0,
            line_type: LineType::SolidThick,
            units: Units::Model,
        }
    }
}

fn in_range(field: &'static str, value: i64, lo: i64, hi: i64) -> Result<i64, CanvasError> {
    if (lo..=hi).contains(&value) {
        Ok(value)
    } else {
        Err(CanvasError::Range {
            field,
            value,
            lo,
            hi,
        })
    }
}

impl Attribute {
    /// Builds an attribute from raw integers, checking every range.
    pub fn new(layer: i64, color: i64, line_type: i64, units: i64) -> Result<Self, CanvasError> {
        let layer = in_range("Слой", layer, 0, MAX_LAYER)? as u8;
        let color = in_range("Цвет", color, 0, MAX_COLOR)? as u8;
        let line_type = LineType::ALL[in_range("Тип_Линии", line_type, 0, 6)? as usize];
        let units = match in_range("Сист_Отсчета", units, 0, 1)? {
            0 => Units::Model,
            _ => Units::Paper,
        };
        Ok(Self {
            layer,
            color,
            line_type,
            units,
        })
    }

    pub fn as_ints(&self) -> [i64; 4] {
        [
            self.layer as i64,
            self.color as i64,
            self.line_type as i64,
            self.units as i64,
        ]
    }
}

/// Drawing scale `num : den` (model length × num / den = paper length).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scale {
    pub num: u32,
    pub den: u32,
}

impl Default for Scale {
    fn default() -> Self {
        Self { num: 1, den: 1 }
    }
}

impl Scale {
    pub fn new(num: i64, den: i64) -> Result<Self, CanvasError> {
        let num = in_range("масштаб", num, 1, u32::MAX as i64)? as u32;
        let den = in_range("масштаб", den, 1, u32::MAX as i64)? as u32;
        Ok(Self { num, den })
    }

    pub fn factor(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Parses `"1 : 25"` or `"1:25"`.
    pub fn parse(text: &str) -> Option<Self> {
        let (a, b) = text.split_once(':')?;
        let num = a.trim().parse::<i64>().ok()?;
        let den = b.trim().parse::<i64>().ok()?;
        Self::new(num, den).ok()
    }

    pub fn label(&self) -> String {
        format!("{} : {}", self.num, self.den)
    }
}

/// The scales offered by a scale form field.
pub const STANDARD_SCALES: [Scale; 8] = [
    Scale { num: 1, den: 1 },
    Scale { num: 1, den: 2 },
    Scale { num: 1, den: 5 },
    Scale { num: 1, den: 10 },
    Scale { num: 1, den: 20 },
    Scale { num: 1, den: 25 },
    Scale { num: 1, den: 50 },
    Scale { num: 1, den: 100 },
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Font {
    pub height: f64,
    /// Slant in degrees.
    pub slant: f64,
    pub width_factor: f64,
}

impl Font {
    pub fn new(height: f64, slant: f64, width_factor: f64) -> Result<Self, CanvasError> {
        if !(height.is_finite() && height > 0.0) {
            return Err(CanvasError::NonPositive("font height"));
        }
        if !slant.is_finite() {
            return Err(CanvasError::NotFinite("font slant"));
        }
        if !(width_factor > 0.0 && width_factor <= 2.0) {
            return Err(CanvasError::RealRange {
                field: "width factor",
                value: width_factor,
                range: "(0, 2]",
            });
        }
        Ok(Self {
            height,
            slant,
            width_factor,
        })
    }
}

/// Extension-line geometry of linear dimensions, paper mm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extension {
    /// Gap between the measured point and the start of the extension line.
    pub gap: f64,
    /// Length of the extension line beyond the dimension line.
    pub extension: f64,
    /// Overhang of the dimension line beyond the extension lines.
    pub overhang: f64,
}

/// Arrowheads at both ends of a dimension line: length and length/width ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arrows {
    pub len1: f64,
    pub ratio1: f64,
    pub len2: f64,
    pub ratio2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimSettings {
    pub precision: u8,
    pub extension: Extension,
    pub font: Font,
    pub arrows: Arrows,
    pub leaders: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TextSettings {
    pub leader: bool,
    pub font: Font,
    pub line_step: f64,
}

/// Mutable defaults read by drawing operations. Snapshotted before and
/// restored after every program run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlobalSettings {
    pub attribute: Attribute,
    pub scale: Scale,
    pub dim: DimSettings,
    pub text: TextSettings,
}

impl Default for GlobalSettings {
    fn default() -> Self {
        let font = Font {
            height: 3.5,
            slant: 0.0,
            width_factor: 1.0,
        };
        Self {
            attribute: Attribute::default(),
            scale: Scale::default(),
            dim: DimSettings {
                precision: 2,
                extension: Extension {
                    gap: 1.0,
                    extension: 2.0,
                    overhang: 2.0,
                },
                font,
                arrows: Arrows {
                    len1: 3.0,
                    ratio1: std::f64::consts::SQRT_2,
                    len2: 3.0,
                    ratio2: std::f64::consts::SQRT_2,
                },
                leaders: false,
            },
            text: TextSettings {
                leader: false,
                font,
                line_step: 5.0,
            },
        }
    }
}

/// Fixed monospace advance: each character is `0.6 × height × width factor` wide.
pub const CHAR_ADVANCE: f64 = 0.6;

pub fn string_width(s: &str, font: &Font) -> f64 {
    s.chars().count() as f64 * font.height * font.width_factor * CHAR_ADVANCE
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn attribute_ranges() {
        assert!(Attribute::new(0, 15, 0, 0).is_ok());
        let err = Attribute::new(0, 16, 0, 0).unwrap_err();
        assert!(err.to_string().contains("Цвет"), "{err}");
        assert!(Attribute::new(256, 0, 0, 0).is_err());
        assert!(Attribute::new(0, 0, 7, 0).is_err());
        assert!(Attribute::new(0, 0, 0, 2).is_err());
        assert!(Attribute::new(-1, 0, 0, 0).is_err());
    }

    #[test]
    fn scale_parsing() {
        assert_eq!(Scale::parse("1 : 25"), Some(Scale { num: 1, den: 25 }));
        assert_eq!(Scale::parse("2:1"), Some(Scale { num: 2, den: 1 }));
        assert_eq!(Scale::parse("0:1"), None);
        assert_eq!(Scale::parse("125"), None);
    }

    #[test]
    fn string_width_model() {
        let font = Font::new(3.5, 0.0, 0.8).unwrap();
        assert_eq!(string_width("", &font), 0.0);
        assert!((string_width("abc", &font) - 5.04).abs() < 1e-12);
        let double = Font::new(7.0, 0.0, 0.8).unwrap();
        assert!((string_width("abc", &double) - 2.0 * string_width("abc", &font)).abs() < 1e-12);
        // characters, not bytes
        assert_eq!(string_width("фунд", &font), string_width("abcd", &font));
    }

    #[test]
    fn font_checks() {
        assert!(Font::new(0.0, 0.0, 1.0).is_err());
        assert!(Font::new(1.0, 0.0, 2.5).is_err());
        assert!(Font::new(1.0, 0.0, 2.0).is_ok());
    }
}
