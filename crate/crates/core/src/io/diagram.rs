//! Diagram files: a versioned JSON list of primitive records.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::IoError;
use crate::geometry::{Coord, Normalizer, Orientation, Point, Primitive, Rect, Shape, Tag};

pub const DIAGRAM_VERSION: u32 = 1;

pub type Xy = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum TextOrientation {
    #[default]
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Record {
    Line {
        p1: Xy,
        p2: Xy,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<String>,
    },
    Circle {
        center: Xy,
        radius: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<String>,
    },
    Polygon {
        vertices: Vec<Xy>,
        #[serde(default = "yes")]
        closed: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<String>,
    },
    #[serde(alias = "curve")]
    Bezier {
        segments: Vec<[Xy; 4]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<String>,
    },
    Text {
        text: String,
        anchor: Xy,
        height: f64,
        #[serde(default)]
        orientation: TextOrientation,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<String>,
    },
}

fn yes() -> bool {
    true
}

fn pt<T: Coord>(p: Xy) -> Point<T> {
    Point::new(T::lit(p[0]), T::lit(p[1]))
}

fn xy<T: Coord>(p: Point<T>) -> Xy {
    [p.x.as_f64(), p.y.as_f64()]
}

impl Record {
    pub fn id(&self) -> Option<&str> {
        match self {
            Record::Line { id, .. }
            | Record::Circle { id, .. }
            | Record::Polygon { id, .. }
            | Record::Bezier { id, .. }
            | Record::Text { id, .. } => id.as_deref(),
        }
    }

    pub fn shape<T: Coord>(&self) -> Shape<T> {
        match self {
            Record::Line { p1, p2, .. } => Shape::line(pt(*p1), pt(*p2)),
            Record::Circle { center, radius, .. } => Shape::Circle {
                center: pt(*center),
                radius: T::lit(*radius),
            },
            Record::Polygon { vertices, closed, .. } => Shape::Polygon {
                vertices: vertices.iter().map(|v| pt(*v)).collect(),
                closed: *closed,
            },
            Record::Bezier { segments, .. } => Shape::Bezier {
                segments: segments.iter().map(|s| s.map(pt)).collect(),
            },
            Record::Text {
                text,
                anchor,
                height,
                orientation,
                ..
            } => Shape::Text {
                text: text.clone(),
                anchor: pt(*anchor),
                height: T::lit(*height),
                orientation: match orientation {
                    TextOrientation::Horizontal => Orientation::Horizontal,
                    TextOrientation::Vertical => Orientation::Vertical,
                },
            },
        }
    }

    pub fn from_shape<T: Coord>(shape: &Shape<T>, id: Option<String>) -> Self {
        match shape {
            Shape::Line { p1, p2 } => Record::Line {
                p1: xy(*p1),
                p2: xy(*p2),
                id,
            },
            Shape::Circle { center, radius } => Record::Circle {
                center: xy(*center),
                radius: radius.as_f64(),
                id,
            },
            Shape::Polygon { vertices, closed } => Record::Polygon {
                vertices: vertices.iter().map(|v| xy(*v)).collect(),
                closed: *closed,
                id,
            },
            Shape::Bezier { segments } => Record::Bezier {
                segments: segments.iter().map(|s| s.map(xy)).collect(),
                id,
            },
            Shape::Text {
                text,
                anchor,
                height,
                orientation,
            } => Record::Text {
                text: text.clone(),
                anchor: xy(*anchor),
                height: height.as_f64(),
                orientation: match orientation {
                    Orientation::Horizontal => TextOrientation::Horizontal,
                    Orientation::Vertical => TextOrientation::Vertical,
                },
                id,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<String>,
    /// `[xmin, ymin, xmax, ymax]` mapped onto the normalized grid; defaults
    /// to the union bounding box.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<[f64; 4]>,
    pub primitives: Vec<Record>,
}

/// Normalized primitives with fresh tags in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagram<T> {
    pub primitives: Vec<Primitive<T>>,
    pub normalizer: Normalizer<T>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    version: u32,
    #[serde(default)]
    units: Option<String>,
    #[serde(default)]
    frame: Option<[f64; 4]>,
    primitives: Vec<serde_json::Value>,
}

impl DiagramFile {
    pub fn new(primitives: Vec<Record>) -> Self {
        Self {
            version: DIAGRAM_VERSION,
            units: None,
            frame: None,
            primitives,
        }
    }

    /// Parses and checks every record, reporting the first bad one by index.
    pub fn from_json(src: &str) -> Result<Self, IoError> {
        let raw: RawFile = serde_json::from_str(src).map_err(IoError::Json)?;
        if raw.version != DIAGRAM_VERSION {
            return Err(IoError::Version(raw.version));
        }
        let mut primitives = Vec::with_capacity(raw.primitives.len());
        for (index, value) in raw.primitives.into_iter().enumerate() {
            let rec: Record = serde_json::from_value(value).map_err(|e| IoError::Record {
                index,
                message: e.to_string(),
            })?;
            rec.shape::<f64>().validate().map_err(|e| IoError::Record {
                index,
                message: e.to_string(),
            })?;
            primitives.push(rec);
        }
        if primitives.is_empty() {
            return Err(IoError::EmptyDiagram);
        }
        Ok(Self {
            version: raw.version,
            units: raw.units,
            frame: raw.frame,
            primitives,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("diagram serializes");
        s.push('\n');
        s
    }

    pub fn read(path: &Path) -> Result<Self, IoError> {
        let src = std::fs::read_to_string(path).map_err(|e| IoError::io(path, e))?;
        Self::from_json(&src)
    }

    pub fn write(&self, path: &Path) -> Result<(), IoError> {
        std::fs::write(path, self.to_json()).map_err(|e| IoError::io(path, e))
    }

    /// Tags primitives `0..N` and maps them onto the normalized grid.
    pub fn to_diagram<T: Coord>(&self) -> Result<Diagram<T>, IoError> {
        let shapes: Vec<Shape<T>> = self.primitives.iter().map(Record::shape).collect();
        let frame = self
            .frame
            .map(|[a, b, c, d]| Rect::new(Point::new(T::lit(a), T::lit(b)), Point::new(T::lit(c), T::lit(d))));
        let normalizer = Normalizer::fit(&shapes, frame).map_err(|e| IoError::Record {
            index: 0,
            message: e.to_string(),
        })?;
        let mut primitives = Vec::with_capacity(shapes.len());
        for (i, (shape, rec)) in shapes.iter().zip(&self.primitives).enumerate() {
            let mut p = Primitive::new(Tag(i as u32), normalizer.shape(shape)).map_err(|e| IoError::Record {
                index: i,
                message: e.to_string(),
            })?;
            p.source_id = rec.id().map(str::to_string);
            primitives.push(p);
        }
        Ok(Diagram { primitives, normalizer })
    }
}

/// Reads a diagram file and normalizes it.
pub fn read_diagram<T: Coord>(path: &Path) -> Result<Diagram<T>, IoError> {
    DiagramFile::read(path)?.to_diagram()
}
