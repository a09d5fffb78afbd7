//! Evaluation of constraint expressions against bound objects.

use thiserror::Error;

use super::context::nearest_band;
use super::vocab::{self, Role};
use super::TaggedSet;
use crate::geometry::{
    endpoint_accessor, numeric_textp, orientation_predicate, rectanglep, size_measure, size_test, Coord,
    EndpointAccessor, OrientationTest, Point, Rect, Shape, SizeTest, Tag,
};
use crate::grammar::{Expr, Symbol};
use crate::scene::{Members, Object, Scene};
use crate::spatial::{is_beyond, Direction};

#[derive(Debug, Clone, PartialEq)]
pub enum Value<T> {
    Bool(bool),
    Num(T),
    Point(Point<T>),
    Object(Tag),
    /// Elements of a set not (yet) materialized as an object.
    Set(TaggedSet),
    Null,
}

impl<T: Coord> Value<T> {
    pub fn is_null(&self) -> bool {
        matches!(self, Value::Null)
    }

    /// Rendering used in traces and solution files.
    pub fn render(&self) -> String {
        match self {
            Value::Bool(b) => b.to_string(),
            Value::Num(v) => format!("{v}"),
            Value::Point(p) => format!("({}, {})", p.x, p.y),
            Value::Object(t) => format!("#{}", t.0),
            Value::Set(s) => s.to_string(),
            Value::Null => "null".to_string(),
        }
    }
}

/// Binding of a constituent name during evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum Bound {
    Object(Tag),
    Null,
    /// A candidate group that has not been installed.
    Group(TaggedSet),
}

#[derive(Debug, Clone, Default)]
pub struct Bindings {
    entries: Vec<(Symbol, Bound)>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, name: &Symbol, value: Bound) {
        if let Some(slot) = self.entries.iter_mut().find(|(n, _)| n == name) {
            slot.1 = value;
        } else {
            self.entries.push((name.clone(), value));
        }
    }

    pub fn with(mut self, name: &Symbol, value: Bound) -> Self {
        self.bind(name, value);
        self
    }

    pub fn unbind(&mut self, name: &Symbol) {
        self.entries.retain(|(n, _)| n != name);
    }

    pub fn get(&self, name: &Symbol) -> Option<&Bound> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn is_bound(&self, name: &Symbol) -> bool {
        self.get(name).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Symbol, Bound)> {
        self.entries.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("unbound name {0}")]
    Unbound(String),
    #[error("unknown constraint head {0}")]
    UnknownHead(String),
    #[error("`?` outside a context form")]
    StrayQuery,
}

/// Result of a constraint: holds or not, with a note when the arguments had
/// the wrong type (which counts as not holding).
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub holds: bool,
    pub note: Option<String>,
}

impl Verdict {
    fn yes() -> Self {
        Self {
            holds: true,
            note: None,
        }
    }
}

enum Fault {
    Mismatch(String),
    Hard(EvalError),
}

impl From<EvalError> for Fault {
    fn from(e: EvalError) -> Self {
        Fault::Hard(e)
    }
}

type Ev<T> = Result<Value<T>, Fault>;

fn mismatch<V>(msg: impl Into<String>) -> Result<V, Fault> {
    Err(Fault::Mismatch(msg.into()))
}

/// Whether any name in `expr` is bound to null.
pub fn mentions_null(expr: &Expr, b: &Bindings) -> bool {
    expr.symbols().iter().any(|s| matches!(b.get(s), Some(Bound::Null)))
}

/// Names of `candidates` that occur in `expr`.
pub fn mentioned<'a>(expr: &Expr, candidates: &'a [Symbol]) -> Vec<&'a Symbol> {
    let syms = expr.symbols();
    candidates.iter().filter(|c| syms.contains(c)).collect()
}

/// Evaluates a boolean constraint. Constraints mentioning a null-bound name
/// hold vacuously.
pub fn eval_constraint<T: Coord>(expr: &Expr, b: &Bindings, scene: &Scene<T>) -> Result<Verdict, EvalError> {
    if mentions_null(expr, b) {
        return Ok(Verdict::yes());
    }
    match eval(expr, b, scene) {
        Ok(Value::Bool(v)) => Ok(Verdict { holds: v, note: None }),
        Ok(Value::Null) => Ok(Verdict::yes()),
        Ok(other) => Ok(Verdict {
            holds: false,
            note: Some(format!("{expr} is not a truth value ({})", other.render())),
        }),
        Err(Fault::Mismatch(m)) => Ok(Verdict {
            holds: false,
            note: Some(format!("{expr}: {m}")),
        }),
        Err(Fault::Hard(e)) => Err(e),
    }
}

/// Evaluates an expression to a value. Type mismatches yield `Ok(None)`.
pub fn eval_value<T: Coord>(expr: &Expr, b: &Bindings, scene: &Scene<T>) -> Result<Option<Value<T>>, EvalError> {
    match eval(expr, b, scene) {
        Ok(v) => Ok(Some(v)),
        Err(Fault::Mismatch(_)) => Ok(None),
        Err(Fault::Hard(e)) => Err(e),
    }
}

fn eval<T: Coord>(expr: &Expr, b: &Bindings, scene: &Scene<T>) -> Ev<T> {
    match expr {
        Expr::Number(v) => Ok(Value::Num(T::lit(*v))),
        Expr::Query => Err(EvalError::StrayQuery.into()),
        Expr::Keyword(k) => mismatch(format!("keyword :{k} used as a value")),
        Expr::Symbol(s) => symbol(s, b, scene),
        Expr::Call { head, args } => call(head, args, b, scene),
    }
}

fn symbol<T: Coord>(s: &Symbol, b: &Bindings, scene: &Scene<T>) -> Ev<T> {
    if s.is("*tiny*") {
        return Ok(Value::Num(scene.tiny()));
    }
    if s.is("*very-long*") {
        return Ok(Value::Num(scene.very_long()));
    }
    match b.get(s) {
        Some(Bound::Object(t)) => Ok(Value::Object(*t)),
        Some(Bound::Null) => Ok(Value::Null),
        Some(Bound::Group(g)) => Ok(Value::Set(g.clone())),
        None if s.is("t") => Ok(Value::Bool(true)),
        None if s.is("nil") => Ok(Value::Null),
        None => Err(EvalError::Unbound(s.to_string()).into()),
    }
}

fn object_arg<T: Coord>(v: &Value<T>, what: &str) -> Result<Tag, Fault> {
    match v {
        Value::Object(t) => Ok(*t),
        other => mismatch(format!("{what} expects an object, got {}", other.render())),
    }
}

fn number<T: Coord>(v: &Value<T>) -> Result<T, Fault> {
    match v {
        Value::Num(n) => Ok(*n),
        other => mismatch(format!("expected a number, got {}", other.render())),
    }
}

/// Bounds of an object, point or uninstalled group.
fn extent<T: Coord>(v: &Value<T>, scene: &Scene<T>) -> Result<Rect<T>, Fault> {
    match v {
        Value::Object(t) => scene
            .bbox(*t)
            .map_or_else(|| mismatch(format!("unknown object {t}")), Ok),
        Value::Point(p) => Ok(Rect::new(*p, *p)),
        Value::Set(s) => s
            .iter()
            .filter_map(|t| scene.bbox(t))
            .reduce(Rect::union)
            .map_or_else(|| mismatch("empty set has no extent"), Ok),
        other => mismatch(format!("expected an object or point, got {}", other.render())),
    }
}

fn shape_of<T: Coord>(scene: &Scene<T>, tag: Tag, what: &str) -> Result<Shape<T>, Fault> {
    match scene.shape(tag) {
        Some(s) => Ok(s.clone()),
        None => mismatch(format!("{what} needs a primitive, got {}", scene.type_name(tag))),
    }
}

fn cardinality<T: Coord>(v: &Value<T>, scene: &Scene<T>) -> Result<usize, Fault> {
    match v {
        Value::Set(s) => Ok(s.len()),
        Value::Object(t) => match scene.derived(*t).map(|d| &d.members) {
            Some(Members::Set(s)) => Ok(s.len()),
            _ => mismatch(format!("size of non-set {}", scene.type_name(*t))),
        },
        Value::Null => Ok(0),
        other => mismatch(format!("size of {}", other.render())),
    }
}

fn endpoint<T: Coord>(v: &Value<T>, which: EndpointAccessor, name: &str, scene: &Scene<T>) -> Ev<T> {
    match v {
        Value::Point(p) => Ok(Value::Point(*p)),
        Value::Object(t) => {
            if let Some(slot) = scene.derived(*t).and_then(|d| d.slot(name)) {
                return Ok(slot.clone());
            }
            let shape = shape_of(scene, *t, name)?;
            endpoint_accessor(&shape, which)
                .map(Value::Point)
                .or_else(|e| mismatch(e.to_string()))
        }
        other => mismatch(format!("{name} of {}", other.render())),
    }
}

/// `rel(a, b)` for the binary spatial relations.
pub fn relation_holds<T: Coord>(
    head: &str,
    a: &Value<T>,
    b: &Value<T>,
    strip: bool,
    scene: &Scene<T>,
) -> Result<bool, String> {
    let run = || -> Result<bool, Fault> {
        let h = head.to_ascii_lowercase();
        match h.as_str() {
            "touch" => match (a, b) {
                (Value::Object(x), Value::Object(y)) => Ok(x != y && scene.touches(*x, *y)),
                _ => {
                    let (ra, rb) = (extent(a, scene)?, extent(b, scene)?);
                    let idx = scene.index();
                    let level = idx.finest_level();
                    let cells = |r: Rect<T>| {
                        let lo = idx.cell_of_point(r.min, level);
                        let hi = idx.cell_of_point(r.max, level);
                        (lo, hi)
                    };
                    let ((la, ha), (lb, hb)) = (cells(ra), cells(rb));
                    Ok(la.i <= hb.i && lb.i <= ha.i && la.j <= hb.j && lb.j <= ha.j)
                }
            },
            "near" => {
                let (x, y) = (object_arg(a, "near")?, object_arg(b, "near")?);
                Ok(super::ger::near_pair(x, y, scene))
            }
            "above" | "below" | "left" | "right" => {
                let dir = match h.as_str() {
                    "above" => Direction::Above,
                    "below" => Direction::Below,
                    "left" => Direction::Left,
                    _ => Direction::Right,
                };
                Ok(is_beyond(extent(b, scene)?, extent(a, scene)?, dir, strip))
            }
            "contain" => {
                let (outer, inner) = (extent(a, scene)?, extent(b, scene)?);
                Ok(outer.contains_rect(inner))
            }
            "below-nearest" | "left-nearest" => {
                let dir = if h == "below-nearest" {
                    Direction::Below
                } else {
                    Direction::Left
                };
                let x = object_arg(a, &h)?;
                let anchor = extent(b, scene)?;
                let band = nearest_band(scene.base_context(), anchor, dir, scene);
                Ok(band.contains(x) || scene.leaves(x).iter().all(|l| band.contains(l)) && !scene.leaves(x).is_empty())
            }
            other => Err(Fault::Hard(EvalError::UnknownHead(other.to_string()))),
        }
    };
    match run() {
        Ok(v) => Ok(v),
        Err(Fault::Mismatch(m)) => Err(m),
        Err(Fault::Hard(e)) => Err(e.to_string()),
    }
}

fn call<T: Coord>(head: &Symbol, args: &[Expr], b: &Bindings, scene: &Scene<T>) -> Ev<T> {
    let strip = args.iter().any(|a| matches!(a, Expr::Keyword(k) if k == "strip"));
    let positional: Vec<&Expr> = {
        let mut out = Vec::new();
        let mut skip = false;
        for a in args {
            if skip {
                skip = false;
                continue;
            }
            if matches!(a, Expr::Keyword(_)) {
                skip = true;
                continue;
            }
            out.push(a);
        }
        out
    };
    let name = head.key();
    let Some(entry) = vocab::lookup_with_arity(&name, positional.len()) else {
        return constituent_access(head, &positional, b, scene);
    };
    if !entry.accepts(positional.len()) {
        return mismatch(format!("{head} given {} arguments", positional.len()));
    }
    if name == "or" {
        for a in &positional {
            let v = eval(a, b, scene)?;
            if !v.is_null() {
                return Ok(v);
            }
        }
        return Ok(Value::Null);
    }
    let vals: Vec<Value<T>> = positional.iter().map(|a| eval(a, b, scene)).collect::<Result<_, _>>()?;
    if vals.iter().any(Value::is_null) && entry.role != Role::Logical {
        return Ok(Value::Null);
    }
    let tan = scene.angle_tan();
    let cl = scene.lengths();
    let rules = *scene.size_rules();
    match (entry.role, name.as_str()) {
        (Role::Predicate, "horizp" | "vertp") => {
            let t = object_arg(&vals[0], &name)?;
            let which = if name == "horizp" {
                OrientationTest::Horizontal
            } else {
                OrientationTest::Vertical
            };
            Ok(Value::Bool(orientation_predicate(
                &shape_of(scene, t, &name)?,
                which,
                tan,
            )))
        }
        (Role::Predicate, "long" | "short" | "small") => {
            let which = match name.as_str() {
                "long" => SizeTest::Long,
                "short" => SizeTest::Short,
                _ => SizeTest::Small,
            };
            let (measure, bbox) = match &vals[0] {
                Value::Object(t) => match scene.shape(*t) {
                    Some(s) => (size_measure(s), s.bbox()),
                    None => {
                        let bbox = extent(&vals[0], scene)?;
                        (scene.a_length(*t).unwrap_or(bbox.max_dimension()), bbox)
                    }
                },
                other => {
                    let bbox = extent(other, scene)?;
                    (bbox.max_dimension(), bbox)
                }
            };
            Ok(Value::Bool(size_test(measure, bbox, &cl, which, &rules)))
        }
        (Role::Predicate, "numeric-textp") => {
            let t = object_arg(&vals[0], &name)?;
            match shape_of(scene, t, &name)? {
                Shape::Text { text, .. } => Ok(Value::Bool(numeric_textp(&text))),
                other => mismatch(format!("numeric-textp of {}", other.kind().name())),
            }
        }
        (Role::Predicate, "rectanglep") => {
            let t = object_arg(&vals[0], &name)?;
            Ok(Value::Bool(rectanglep(&shape_of(scene, t, &name)?, tan)))
        }
        (Role::Relation, _) => relation_holds(&name, &vals[0], &vals[1], strip, scene)
            .map(Value::Bool)
            .or_else(mismatch),
        (Role::Function, "distance") => {
            let p = match (&vals[0], &vals[1]) {
                (Value::Point(p), Value::Point(q)) => p.distance(*q),
                _ => {
                    let (ra, rb) = (extent(&vals[0], scene)?, extent(&vals[1], scene)?);
                    ra.gap(rb)
                }
            };
            Ok(Value::Num(p))
        }
        (Role::Function, "a-length") => {
            let t = object_arg(&vals[0], &name)?;
            match scene.a_length(t) {
                Some(v) => Ok(Value::Num(v)),
                None => mismatch(format!("no arc length for {}", scene.type_name(t))),
            }
        }
        (Role::Function, "left-endpoint") => endpoint(&vals[0], EndpointAccessor::Left, &name, scene),
        (Role::Function, "bottom-endpoint") => endpoint(&vals[0], EndpointAccessor::Bottom, &name, scene),
        (Role::Function, "size" | "number-of") => Ok(Value::Num(T::lit(cardinality(&vals[0], scene)? as f64))),
        (Role::Comparison, op) => {
            let (x, y) = (number(&vals[0])?, number(&vals[1])?);
            Ok(Value::Bool(match op {
                "<" => x < y,
                ">" => x > y,
                "<=" => x <= y,
                ">=" => x >= y,
                _ => x == y,
            }))
        }
        (Role::Logical, "and") => {
            let mut all = true;
            for v in &vals {
                match v {
                    Value::Bool(x) => all &= x,
                    Value::Null => {}
                    other => return mismatch(format!("and of {}", other.render())),
                }
            }
            Ok(Value::Bool(all))
        }
        (Role::Logical, "not") => match &vals[0] {
            Value::Bool(x) => Ok(Value::Bool(!x)),
            Value::Null => Ok(Value::Null),
            other => mismatch(format!("not of {}", other.render())),
        },
        (Role::Ger, _) => mismatch(format!("{head} groups set elements and has no pairwise value here")),
        _ => Err(EvalError::UnknownHead(head.to_string()).into()),
    }
}

/// `(Name obj)`: the constituent called `Name` of a derived object.
fn constituent_access<T: Coord>(head: &Symbol, args: &[&Expr], b: &Bindings, scene: &Scene<T>) -> Ev<T> {
    let [arg] = args else {
        return Err(EvalError::UnknownHead(head.to_string()).into());
    };
    let v = eval(arg, b, scene)?;
    let t = match v {
        Value::Object(t) => t,
        Value::Null => return Ok(Value::Null),
        other => return mismatch(format!("({head} ...) of {}", other.render())),
    };
    match scene.object(t) {
        Some(Object::Derived(d)) => match d.members.get(head) {
            Some(Some(m)) => Ok(Value::Object(m)),
            Some(None) => Ok(Value::Null),
            None => Err(EvalError::UnknownHead(head.to_string()).into()),
        },
        _ => Err(EvalError::UnknownHead(head.to_string()).into()),
    }
}
