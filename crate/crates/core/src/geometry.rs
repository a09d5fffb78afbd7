//! Graphics primitives, bounding boxes and the size/orientation vocabulary.
//!
//! Coordinates are "grid units": after normalization every point of a
//! diagram lies in `[0, 2^13)` on both axes, y growing upward.

use std::fmt;

use num_traits::{Float, FromPrimitive};
use regex::Regex;
use std::sync::OnceLock;
use thiserror::Error;

/// Side of the normalized coordinate square.
pub const GRID_EXTENT: f64 = 8192.0;
/// Largest coordinate produced by normalization (strictly below [`GRID_EXTENT`]).
pub const NORMALIZED_MAX: f64 = 8191.0;
/// Every cubic Bezier segment is flattened into this many line segments.
pub const BEZIER_SEGMENTS: usize = 16;
/// Advance width of one character, as a fraction of the glyph height.
pub const TEXT_ADVANCE: f64 = 0.6;

/// Scalar type the geometry is written against (`f32` or `f64`).
pub trait Coord: Float + FromPrimitive + fmt::Debug + fmt::Display + Default + Send + Sync + 'static {
    /// Converts an `f64` literal. Panics only for values not representable at all.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Coord for T where T: Float + FromPrimitive + fmt::Debug + fmt::Display + Default + Send + Sync + 'static {}

/// Unique identifier of a graphical object within one diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tag(pub u32);

impl Tag {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("empty diagram")]
    EmptyDiagram,
    #[error("line endpoints coincide")]
    DegenerateLine,
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("text height must be positive")]
    NonPositiveTextHeight,
    #[error("circle radius must be non-negative")]
    NegativeRadius,
    #[error("bezier curve has no segments")]
    EmptyBezier,
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("no arc length for {0}")]
    NoArcLength(PrimitiveKind),
    #[error("{0} has no endpoints")]
    NoEndpoints(PrimitiveKind),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T: Coord> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Self) -> T {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, other: Self, t: T) -> Self {
        Self::new(self.x + (other.x - self.x) * t, self.y + (other.y - self.y) * t)
    }
}

/// Euclidean distance between two points.
pub fn distance<T: Coord>(a: Point<T>, b: Point<T>) -> T {
    a.distance(b)
}

/// Axis-aligned rectangle with `min <= max` on both axes.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Rect<T> {
    pub min: Point<T>,
    pub max: Point<T>,
}

impl<T: Coord> Rect<T> {
    pub fn new(min: Point<T>, max: Point<T>) -> Self {
        Self {
            min: Point::new(min.x.min(max.x), min.y.min(max.y)),
            max: Point::new(min.x.max(max.x), min.y.max(max.y)),
        }
    }

    pub fn from_points<I: IntoIterator<Item = Point<T>>>(points: I) -> Option<Self> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut r = Self { min: first, max: first };
        for p in it {
            r.min.x = r.min.x.min(p.x);
            r.min.y = r.min.y.min(p.y);
            r.max.x = r.max.x.max(p.x);
            r.max.y = r.max.y.max(p.y);
        }
        Some(r)
    }

    pub fn union(self, other: Self) -> Self {
        Self {
            min: Point::new(self.min.x.min(other.min.x), self.min.y.min(other.min.y)),
            max: Point::new(self.max.x.max(other.max.x), self.max.y.max(other.max.y)),
        }
    }

    pub fn width(self) -> T {
        self.max.x - self.min.x
    }

    pub fn height(self) -> T {
        self.max.y - self.min.y
    }

    pub fn max_dimension(self) -> T {
        self.width().max(self.height())
    }

    pub fn center(self) -> Point<T> {
        let two = T::lit(2.0);
        Point::new((self.min.x + self.max.x) / two, (self.min.y + self.max.y) / two)
    }

    pub fn contains_point(self, p: Point<T>) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    /// Closed containment of `other` inside `self`.
    pub fn contains_rect(self, other: Self) -> bool {
        self.contains_point(other.min) && self.contains_point(other.max)
    }

    pub fn intersects(self, other: Self) -> bool {
        self.min.x <= other.max.x && other.min.x <= self.max.x && self.min.y <= other.max.y && other.min.y <= self.max.y
    }

    /// Euclidean gap between the two rectangles (0 when they intersect).
    pub fn gap(self, other: Self) -> T {
        let zero = T::zero();
        let dx = (other.min.x - self.max.x).max(self.min.x - other.max.x).max(zero);
        let dy = (other.min.y - self.max.y).max(self.min.y - other.max.y).max(zero);
        dx.hypot(dy)
    }

    pub fn corners(self) -> [Point<T>; 4] {
        [
            self.min,
            Point::new(self.max.x, self.min.y),
            self.max,
            Point::new(self.min.x, self.max.y),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// The five primitive kinds, named as grammars refer to them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimitiveKind {
    Line,
    Circle,
    Polygon,
    Curve,
    Text,
}

impl PrimitiveKind {
    pub const ALL: [PrimitiveKind; 5] = [
        PrimitiveKind::Line,
        PrimitiveKind::Circle,
        PrimitiveKind::Polygon,
        PrimitiveKind::Curve,
        PrimitiveKind::Text,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PrimitiveKind::Line => "Line",
            PrimitiveKind::Circle => "Circle",
            PrimitiveKind::Polygon => "Polygon",
            PrimitiveKind::Curve => "Curve",
            PrimitiveKind::Text => "Text",
        }
    }

    /// Case-insensitive lookup of a grammar type name.
    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(name))
    }
}

impl fmt::Display for PrimitiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape<T> {
    Line {
        p1: Point<T>,
        p2: Point<T>,
    },
    Circle {
        center: Point<T>,
        radius: T,
    },
    Polygon {
        vertices: Vec<Point<T>>,
        closed: bool,
    },
    /// Piecewise cubic Bezier curve; each segment is four control points.
    Bezier {
        segments: Vec<[Point<T>; 4]>,
    },
    /// `anchor` is the lower-left corner of the text box.
    Text {
        text: String,
        anchor: Point<T>,
        height: T,
        orientation: Orientation,
    },
}

impl<T: Coord> Shape<T> {
    pub fn line(p1: Point<T>, p2: Point<T>) -> Self {
        Shape::Line { p1, p2 }
    }

    pub fn kind(&self) -> PrimitiveKind {
        match self {
            Shape::Line { .. } => PrimitiveKind::Line,
            Shape::Circle { .. } => PrimitiveKind::Circle,
            Shape::Polygon { .. } => PrimitiveKind::Polygon,
            Shape::Bezier { .. } => PrimitiveKind::Curve,
            Shape::Text { .. } => PrimitiveKind::Text,
        }
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        if !self.control_points().iter().all(|p| p.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        match self {
            Shape::Line { p1, p2 } if p1 == p2 => Err(GeometryError::DegenerateLine),
            Shape::Circle { radius, .. } if !radius.is_finite() => Err(GeometryError::NonFinite),
            Shape::Circle { radius, .. } if *radius < T::zero() => Err(GeometryError::NegativeRadius),
            Shape::Polygon { vertices, .. } if vertices.len() < 3 => Err(GeometryError::TooFewVertices(vertices.len())),
            Shape::Bezier { segments } if segments.is_empty() => Err(GeometryError::EmptyBezier),
            Shape::Text { height, .. } if height.is_nan() || *height <= T::zero() => {
                Err(GeometryError::NonPositiveTextHeight)
            }
            _ => Ok(()),
        }
    }

    /// Defining points: endpoints, vertices, control points, center or anchor.
    pub fn control_points(&self) -> Vec<Point<T>> {
        match self {
            Shape::Line { p1, p2 } => vec![*p1, *p2],
            Shape::Circle { center, .. } => vec![*center],
            Shape::Polygon { vertices, .. } => vertices.clone(),
            Shape::Bezier { segments } => segments.iter().flatten().copied().collect(),
            Shape::Text { anchor, .. } => vec![*anchor],
        }
    }

    /// Flattened outline used for bounds, arc length and index rasterization.
    /// Circles and text have no outline here; they are treated by footprint.
    pub fn polyline(&self) -> Vec<Point<T>> {
        match self {
            Shape::Line { p1, p2 } => vec![*p1, *p2],
            Shape::Polygon { vertices, closed } => {
                let mut v = vertices.clone();
                if *closed && vertices.first() != vertices.last() {
                    v.push(vertices[0]);
                }
                v
            }
            Shape::Bezier { segments } => bezier_polyline(segments),
            Shape::Circle { .. } | Shape::Text { .. } => Vec::new(),
        }
    }

    pub fn text_width(&self) -> Option<T> {
        match self {
            Shape::Text { text, height, .. } => {
                let chars = T::lit(text.chars().count().max(1) as f64);
                Some(*height * T::lit(TEXT_ADVANCE) * chars)
            }
            _ => None,
        }
    }

    /// Tight axis-aligned bounds. Bezier curves use their flattened polyline.
    pub fn bbox(&self) -> Rect<T> {
        match self {
            Shape::Line { p1, p2 } => Rect::new(*p1, *p2),
            Shape::Circle { center, radius } => Rect::new(
                Point::new(center.x - *radius, center.y - *radius),
                Point::new(center.x + *radius, center.y + *radius),
            ),
            Shape::Polygon { vertices, .. } => Rect::from_points(vertices.iter().copied()).unwrap_or_default(),
            Shape::Bezier { .. } => Rect::from_points(self.polyline()).unwrap_or_default(),
            Shape::Text {
                anchor,
                height,
                orientation,
                ..
            } => {
                let width = self.text_width().unwrap_or(*height);
                let (dx, dy) = match orientation {
                    Orientation::Horizontal => (width, *height),
                    Orientation::Vertical => (*height, width),
                };
                Rect::new(*anchor, Point::new(anchor.x + dx, anchor.y + dy))
            }
        }
    }

    /// First and last point of a line or curve.
    pub fn endpoints(&self) -> Option<(Point<T>, Point<T>)> {
        match self {
            Shape::Line { p1, p2 } => Some((*p1, *p2)),
            Shape::Bezier { segments } => {
                let first = segments.first()?[0];
                let last = segments.last()?[3];
                Some((first, last))
            }
            _ => None,
        }
    }

    /// Sum of segment lengths; curves via their flattened polyline.
    pub fn a_length(&self) -> Result<T, GeometryError> {
        match self {
            Shape::Line { .. } | Shape::Bezier { .. } => Ok(polyline_length(&self.polyline())),
            other => Err(GeometryError::NoArcLength(other.kind())),
        }
    }

    pub fn map_points(&self, f: impl Fn(Point<T>) -> Point<T>, scale: T) -> Self {
        match self {
            Shape::Line { p1, p2 } => Shape::Line { p1: f(*p1), p2: f(*p2) },
            Shape::Circle { center, radius } => Shape::Circle {
                center: f(*center),
                radius: *radius * scale,
            },
            Shape::Polygon { vertices, closed } => Shape::Polygon {
                vertices: vertices.iter().map(|p| f(*p)).collect(),
                closed: *closed,
            },
            Shape::Bezier { segments } => Shape::Bezier {
                segments: segments.iter().map(|s| [f(s[0]), f(s[1]), f(s[2]), f(s[3])]).collect(),
            },
            Shape::Text {
                text,
                anchor,
                height,
                orientation,
            } => Shape::Text {
                text: text.clone(),
                anchor: f(*anchor),
                height: *height * scale,
                orientation: *orientation,
            },
        }
    }
}

pub fn polyline_length<T: Coord>(points: &[Point<T>]) -> T {
    points.windows(2).fold(T::zero(), |acc, w| acc + w[0].distance(w[1]))
}

fn cubic_point<T: Coord>(c: &[Point<T>; 4], t: T) -> Point<T> {
    let one = T::one();
    let three = T::lit(3.0);
    let u = one - t;
    let b0 = u * u * u;
    let b1 = three * u * u * t;
    let b2 = three * u * t * t;
    let b3 = t * t * t;
    Point::new(
        b0 * c[0].x + b1 * c[1].x + b2 * c[2].x + b3 * c[3].x,
        b0 * c[0].y + b1 * c[1].y + b2 * c[2].y + b3 * c[3].y,
    )
}

/// Flattens a piecewise cubic into `BEZIER_SEGMENTS` pieces per segment.
pub fn bezier_polyline<T: Coord>(segments: &[[Point<T>; 4]]) -> Vec<Point<T>> {
    bezier_polyline_with(segments, BEZIER_SEGMENTS)
}

pub fn bezier_polyline_with<T: Coord>(segments: &[[Point<T>; 4]], pieces: usize) -> Vec<Point<T>> {
    let mut out = Vec::with_capacity(segments.len() * pieces + 1);
    for (i, seg) in segments.iter().enumerate() {
        let start = if i == 0 { 0 } else { 1 };
        for k in start..=pieces {
            let t = T::lit(k as f64 / pieces as f64);
            out.push(cubic_point(seg, t));
        }
    }
    out
}

/// A primitive with its diagram-unique tag and optional source identifier.
#[derive(Debug, Clone, PartialEq)]
pub struct Primitive<T> {
    pub tag: Tag,
    pub shape: Shape<T>,
    pub source_id: Option<String>,
}

impl<T: Coord> Primitive<T> {
    pub fn new(tag: Tag, shape: Shape<T>) -> Result<Self, GeometryError> {
        shape.validate()?;
        Ok(Self {
            tag,
            shape,
            source_id: None,
        })
    }

    pub fn with_source_id(mut self, id: impl Into<String>) -> Self {
        self.source_id = Some(id.into());
        self
    }

    pub fn kind(&self) -> PrimitiveKind {
        self.shape.kind()
    }

    pub fn bbox(&self) -> Rect<T> {
        self.shape.bbox()
    }

    /// Identifier written to solution files: the source id, else `p<tag>`.
    pub fn display_id(&self) -> String {
        self.source_id.clone().unwrap_or_else(|| format!("p{}", self.tag.0))
    }
}

/// Smallest text height `h` and diagram width `W`, in grid units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicLengths<T> {
    pub h: T,
    pub w: T,
}

impl<T: Coord> CharacteristicLengths<T> {
    /// `h = min text height` (or `W/64` without text), `W = width of the union bbox`.
    pub fn of<'a, I>(shapes: I) -> Result<Self, GeometryError>
    where
        I: IntoIterator<Item = &'a Shape<T>>,
    {
        let mut union: Option<Rect<T>> = None;
        let mut min_text: Option<T> = None;
        for s in shapes {
            let b = s.bbox();
            union = Some(union.map_or(b, |u| u.union(b)));
            if let Shape::Text { height, .. } = s {
                min_text = Some(min_text.map_or(*height, |m| m.min(*height)));
            }
        }
        let union = union.ok_or(GeometryError::EmptyDiagram)?;
        let mut w = union.width();
        if w.is_nan() || w <= T::zero() {
            w = union.height();
        }
        if w.is_nan() || w <= T::zero() {
            w = T::one();
        }
        let h = min_text.unwrap_or(w / T::lit(64.0));
        Ok(Self { h, w })
    }
}

pub fn characteristic_lengths<T: Coord>(diagram: &[Primitive<T>]) -> Result<CharacteristicLengths<T>, GeometryError> {
    CharacteristicLengths::of(diagram.iter().map(|p| &p.shape))
}

/// Multipliers turning `h` and `W` into the short/long/small thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizeRules {
    pub short_mult: f64,
    pub long_mult: f64,
    pub long_width_frac: f64,
    pub small_mult: f64,
    pub angle_tol_deg: f64,
}

impl Default for SizeRules {
    fn default() -> Self {
        Self {
            short_mult: 3.0,
            long_mult: 10.0,
            long_width_frac: 0.25,
            small_mult: 3.0,
            angle_tol_deg: 5.0,
        }
    }
}

impl SizeRules {
    pub fn short_max<T: Coord>(&self, cl: &CharacteristicLengths<T>) -> T {
        cl.h * T::lit(self.short_mult)
    }

    pub fn long_min<T: Coord>(&self, cl: &CharacteristicLengths<T>) -> T {
        (cl.h * T::lit(self.long_mult)).max(cl.w * T::lit(self.long_width_frac))
    }

    pub fn small_max<T: Coord>(&self, cl: &CharacteristicLengths<T>) -> T {
        cl.h * T::lit(self.small_mult)
    }

    pub fn angle_tan<T: Coord>(&self) -> T {
        T::lit(self.angle_tol_deg.to_radians().tan())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrientationTest {
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SizeTest {
    Short,
    Long,
    Small,
}

/// `horizp` / `vertp`: lines by slope within the angular tolerance, text by its
/// orientation field, everything else false.
pub fn orientation_predicate<T: Coord>(shape: &Shape<T>, which: OrientationTest, tan_tol: T) -> bool {
    match (shape, which) {
        (Shape::Line { p1, p2 }, OrientationTest::Horizontal) => (p2.y - p1.y).abs() <= tan_tol * (p2.x - p1.x).abs(),
        (Shape::Line { p1, p2 }, OrientationTest::Vertical) => (p2.x - p1.x).abs() <= tan_tol * (p2.y - p1.y).abs(),
        (Shape::Text { orientation, .. }, OrientationTest::Horizontal) => *orientation == Orientation::Horizontal,
        (Shape::Text { orientation, .. }, OrientationTest::Vertical) => *orientation == Orientation::Vertical,
        _ => false,
    }
}

/// Measure used by `short`/`long`: arc length where defined, else the larger
/// bbox side.
pub fn size_measure<T: Coord>(shape: &Shape<T>) -> T {
    shape.a_length().unwrap_or_else(|_| shape.bbox().max_dimension())
}

pub fn size_predicate<T: Coord>(
    shape: &Shape<T>,
    cl: &CharacteristicLengths<T>,
    which: SizeTest,
    rules: &SizeRules,
) -> bool {
    size_test(size_measure(shape), shape.bbox(), cl, which, rules)
}

/// Shared by primitives and derived objects: `measure` is the arc length or
/// max bbox dimension, `bbox` the object's bounds.
pub fn size_test<T: Coord>(
    measure: T,
    bbox: Rect<T>,
    cl: &CharacteristicLengths<T>,
    which: SizeTest,
    rules: &SizeRules,
) -> bool {
    match which {
        SizeTest::Short => measure <= rules.short_max(cl),
        SizeTest::Long => measure >= rules.long_min(cl),
        SizeTest::Small => bbox.max_dimension() <= rules.small_max(cl),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndpointAccessor {
    Left,
    Bottom,
}

/// `left-endpoint`: smaller x (tie: smaller y). `bottom-endpoint`: smaller y
/// (tie: smaller x).
pub fn endpoint_accessor<T: Coord>(shape: &Shape<T>, which: EndpointAccessor) -> Result<Point<T>, GeometryError> {
    let Shape::Line { p1, p2 } = shape else {
        return Err(GeometryError::NoEndpoints(shape.kind()));
    };
    let key = |p: &Point<T>| match which {
        EndpointAccessor::Left => (p.x, p.y),
        EndpointAccessor::Bottom => (p.y, p.x),
    };
    let (a, b) = (key(p1), key(p2));
    let first = a.0 < b.0 || (a.0 == b.0 && a.1 <= b.1);
    Ok(if first { *p1 } else { *p2 })
}

/// Four distinct vertices, axis-aligned edges, right angles (within tolerance).
pub fn rectanglep<T: Coord>(shape: &Shape<T>, tan_tol: T) -> bool {
    let Shape::Polygon { vertices, .. } = shape else {
        return false;
    };
    let mut v: Vec<Point<T>> = vertices.clone();
    if v.len() > 1 && v.first() == v.last() {
        v.pop();
    }
    if v.len() != 4 {
        return false;
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            if v[i] == v[j] {
                return false;
            }
        }
    }
    let edges: Vec<(T, T)> = (0..4)
        .map(|i| {
            let a = v[i];
            let b = v[(i + 1) % 4];
            (b.x - a.x, b.y - a.y)
        })
        .collect();
    let axis_aligned = edges
        .iter()
        .all(|&(dx, dy)| dy.abs() <= tan_tol * dx.abs() || dx.abs() <= tan_tol * dy.abs());
    // |cross| >= cos(tol) * |a||b|  <=>  angle between edges within tol of 90 degrees
    let cos_tol = (T::one() / (T::one() + tan_tol * tan_tol)).sqrt();
    let orthogonal = (0..4).all(|i| {
        let (ax, ay) = edges[i];
        let (bx, by) = edges[(i + 1) % 4];
        let cross = (ax * by - ay * bx).abs();
        cross >= cos_tol * ax.hypot(ay) * bx.hypot(by)
    });
    axis_aligned && orthogonal
}

fn numeric_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"^[+-]?(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][+-]?[0-9]+)?$").expect("numeric text pattern")
    })
}

/// Optional sign, digits with optional decimal point, optional exponent.
pub fn numeric_textp(text: &str) -> bool {
    numeric_pattern().is_match(text.trim())
}

/// Uniform, aspect-preserving map of a frame onto `[0, NORMALIZED_MAX]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalizer<T> {
    pub origin: Point<T>,
    pub scale: T,
}

impl<T: Coord> Normalizer<T> {
    /// Fits `frame`, or the union bbox of `shapes` when no frame is given.
    pub fn fit<'a, I>(shapes: I, frame: Option<Rect<T>>) -> Result<Self, GeometryError>
    where
        I: IntoIterator<Item = &'a Shape<T>>,
    {
        let frame = match frame {
            Some(f) => f,
            None => shapes
                .into_iter()
                .map(Shape::bbox)
                .reduce(Rect::union)
                .ok_or(GeometryError::EmptyDiagram)?,
        };
        if !frame.min.is_finite() || !frame.max.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        let extent = frame.max_dimension();
        let scale = if extent > T::zero() {
            T::lit(NORMALIZED_MAX) / extent
        } else {
            T::one()
        };
        Ok(Self {
            origin: frame.min,
            scale,
        })
    }

    pub fn point(&self, p: Point<T>) -> Point<T> {
        Point::new((p.x - self.origin.x) * self.scale, (p.y - self.origin.y) * self.scale)
    }

    pub fn shape(&self, s: &Shape<T>) -> Shape<T> {
        s.map_points(|p| self.point(p), self.scale)
    }

    pub fn length(&self, v: T) -> T {
        v * self.scale
    }
}
