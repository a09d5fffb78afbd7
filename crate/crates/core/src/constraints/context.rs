//! Context generation: turning `(rel anchor ?)` forms into candidate sets.

use super::eval::{eval_value, Bindings, EvalError, Value};
use super::ger::near_radius;
use super::TaggedSet;
use crate::geometry::{Coord, Rect, Tag};
use crate::grammar::{ContextExpr, Expr, Symbol};
use crate::scene::Scene;
use crate::spatial::{directional_gap, is_beyond, Direction};

/// Candidates on the `dir` side of `anchor` whose gap is within `h` of the
/// smallest such gap.
pub fn nearest_band<T: Coord>(candidates: &TaggedSet, anchor: Rect<T>, dir: Direction, scene: &Scene<T>) -> TaggedSet {
    let mut side: Vec<(Tag, T)> = Vec::new();
    for t in candidates.iter() {
        if let Some(b) = scene.bbox(t) {
            if is_beyond(anchor, b, dir, false) {
                side.push((t, directional_gap(anchor, b, dir)));
            }
        }
    }
    let Some(min) = side.iter().map(|(_, g)| *g).reduce(T::min) else {
        return TaggedSet::new();
    };
    let limit = min + scene.lengths().h;
    TaggedSet::from_tags(side.into_iter().filter(|(_, g)| *g <= limit).map(|(t, _)| t))
}

fn direction(head: &str) -> Option<Direction> {
    match head {
        "above" => Some(Direction::Above),
        "below" | "below-nearest" => Some(Direction::Below),
        "left" | "left-nearest" => Some(Direction::Left),
        "right" => Some(Direction::Right),
        _ => None,
    }
}

/// Resolved anchor of a context form.
enum Anchor<T> {
    Object(Tag),
    Rect(Rect<T>),
}

/// Evaluates a relation context form: index-generated candidates intersected
/// with the inherited `context`. A null anchor leaves the context unchanged.
pub fn filter_context<T: Coord>(
    context: &TaggedSet,
    head: &Symbol,
    args: &[Expr],
    strip: bool,
    bindings: &Bindings,
    scene: &Scene<T>,
) -> Result<TaggedSet, EvalError> {
    if context.is_empty() {
        return Ok(TaggedSet::new());
    }
    let query_first = matches!(args.first(), Some(Expr::Query));
    let Some(anchor_expr) = args.iter().find(|a| !matches!(a, Expr::Query)) else {
        return Ok(context.clone());
    };
    let anchor = match eval_value(anchor_expr, bindings, scene)? {
        Some(Value::Object(t)) => Anchor::Object(t),
        Some(Value::Point(p)) => Anchor::Rect(Rect::new(p, p)),
        Some(Value::Set(s)) => match s.iter().filter_map(|t| scene.bbox(t)).reduce(Rect::union) {
            Some(r) => Anchor::Rect(r),
            None => return Ok(context.clone()),
        },
        Some(Value::Null) => return Ok(context.clone()),
        _ => return Ok(TaggedSet::new()),
    };
    let (rect, own) = match &anchor {
        Anchor::Object(t) => (
            scene
                .bbox(*t)
                .ok_or_else(|| EvalError::Unbound(anchor_expr.to_string()))?,
            scene.leaves(*t).union(&TaggedSet::from_tags([*t])),
        ),
        Anchor::Rect(r) => (*r, TaggedSet::new()),
    };
    let index = scene.index();
    let name = head.key();
    let generated = match name.as_str() {
        "touch" => match anchor {
            Anchor::Object(t) => {
                let mut s = index.objects_touching(t).unwrap_or_default();
                if scene.config().strict_touch {
                    s = s.filter(|c| scene.bbox(c).is_some_and(|b| b.intersects(rect)));
                }
                s
            }
            Anchor::Rect(r) => {
                let level = index.finest_level();
                let (lo, hi) = (index.cell_of_point(r.min, level), index.cell_of_point(r.max, level));
                let mut out = Vec::new();
                for i in lo.i..=hi.i {
                    for j in lo.j..=hi.j {
                        out.extend_from_slice(index.cell_contents(level, crate::spatial::Cell::new(i, j)));
                    }
                }
                TaggedSet::from_tags(out)
            }
        },
        "near" => match anchor {
            Anchor::Object(t) => {
                let level = scene.config().align_level;
                index.objects_near(t, level, near_radius(scene)).unwrap_or_default()
            }
            Anchor::Rect(_) => TaggedSet::new(),
        },
        "contain" => {
            if query_first {
                context.filter(|c| scene.bbox(c).is_some_and(|b| b.contains_rect(rect)))
            } else {
                let excluded = match anchor {
                    Anchor::Object(t) => scene.parts(t),
                    Anchor::Rect(_) => TaggedSet::new(),
                };
                index.objects_within(rect).difference(&excluded)
            }
        }
        other => {
            let Some(mut dir) = direction(other) else {
                return Err(EvalError::UnknownHead(head.to_string()));
            };
            if !query_first {
                dir = dir.opposite();
            }
            let (found, _) = index.directional_from_rect(rect, dir, strip);
            if other.ends_with("-nearest") {
                nearest_band(&found.difference(&own).intersect(context), rect, dir, scene)
            } else {
                found
            }
        }
    };
    Ok(generated.difference(&own).intersect(context))
}

/// Context for one constituent clause.
pub fn clause_context<T: Coord>(
    inherited: &TaggedSet,
    ctx: Option<&ContextExpr>,
    bindings: &Bindings,
    scene: &Scene<T>,
) -> Result<TaggedSet, EvalError> {
    match ctx {
        Some(ContextExpr::Relation { head, args, strip }) => {
            filter_context(inherited, head, args, *strip, bindings, scene)
        }
        _ => Ok(inherited.clone()),
    }
}
