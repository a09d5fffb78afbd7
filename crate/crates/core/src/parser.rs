//! Top-down, depth-first constraint parsing with inherited contexts.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::constraints::context::clause_context;
use crate::constraints::eval::{eval_constraint, eval_value, mentioned, Bindings, Bound, EvalError, Value};
use crate::constraints::ger::{ger_partition, ger_partition_slice, refine, Ger};
use crate::constraints::TaggedSet;
use crate::geometry::{Coord, PrimitiveKind, Rect, Tag};
use crate::grammar::{ContextExpr, Expr, Grammar, Rule, Symbol};
use crate::scene::{Members, Object, Scene, SceneError};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("unknown start symbol `{0}`")]
    UnknownStart(String),
    #[error("search exceeded {limit} examined tuples")]
    TupleCap { limit: u64 },
    #[error("rule `{rule}`: {source}")]
    Eval {
        rule: String,
        #[source]
        source: EvalError,
    },
    #[error(transparent)]
    Scene(#[from] SceneError),
}

/// One step of the search, recorded when tracing is on.
#[derive(Debug, Clone, PartialEq)]
pub enum TraceEvent {
    Enter {
        depth: usize,
        symbol: Symbol,
        rule: usize,
        context: usize,
    },
    Exit {
        depth: usize,
        symbol: Symbol,
        rule: usize,
        solutions: usize,
    },
    Context {
        depth: usize,
        rule: usize,
        constituent: Symbol,
        context: TaggedSet,
    },
    Space {
        depth: usize,
        rule: usize,
        constituent: Symbol,
        space: TaggedSet,
    },
    Reject {
        depth: usize,
        rule: usize,
        constituent: Symbol,
        candidate: Tag,
        constraint: String,
    },
    Null {
        depth: usize,
        rule: usize,
        constituent: Symbol,
    },
    Group {
        depth: usize,
        rule: usize,
        members: TaggedSet,
    },
}

fn brief(set: &TaggedSet) -> String {
    if set.len() <= 24 {
        set.to_string()
    } else {
        format!("<{} objects>", set.len())
    }
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pad = |d: &usize| "  ".repeat(*d);
        match self {
            TraceEvent::Enter {
                depth,
                symbol,
                rule,
                context,
            } => {
                write!(f, "{}enter {symbol} [rule {rule}] context={context}", pad(depth))
            }
            TraceEvent::Exit {
                depth,
                symbol,
                rule,
                solutions,
            } => {
                write!(f, "{}exit {symbol} [rule {rule}] solutions={solutions}", pad(depth))
            }
            TraceEvent::Context {
                depth,
                constituent,
                context,
                ..
            } => {
                write!(f, "{}  context {constituent} = {}", pad(depth), brief(context))
            }
            TraceEvent::Space {
                depth,
                constituent,
                space,
                ..
            } => {
                write!(f, "{}  space {constituent} = {}", pad(depth), brief(space))
            }
            TraceEvent::Reject {
                depth,
                constituent,
                candidate,
                constraint,
                ..
            } => {
                write!(f, "{}  reject {constituent}={candidate} by {constraint}", pad(depth))
            }
            TraceEvent::Null { depth, constituent, .. } => write!(f, "{}  null {constituent}", pad(depth)),
            TraceEvent::Group { depth, members, .. } => write!(f, "{}  group {members}", pad(depth)),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseStats {
    pub tuples_examined: u64,
    pub memo_hits: u64,
    pub rules_entered: u64,
    pub derived_created: u64,
    /// Clause contexts that were not subsets of their parent context.
    pub monotonicity_violations: u64,
}

/// A solution tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Node<T> {
    Primitive {
        tag: Tag,
    },
    Endpoint {
        tag: Tag,
        line: Tag,
    },
    Null,
    Derived {
        tag: Tag,
        type_name: Symbol,
        rule: usize,
        bbox: Rect<T>,
        slots: Vec<(Symbol, Value<T>)>,
        /// Constituent name for ordinary rules, `None` for set elements.
        children: Vec<(Option<Symbol>, Node<T>)>,
    },
}

impl<T: Coord> Node<T> {
    pub fn build(tag: Tag, scene: &Scene<T>) -> Self {
        match scene.object(tag) {
            Some(Object::Primitive(_)) => Node::Primitive { tag },
            Some(Object::Endpoint { line, .. }) => Node::Endpoint { tag, line: *line },
            Some(Object::Derived(d)) => {
                let children = match &d.members {
                    Members::Tuple(items) => items
                        .iter()
                        .map(|(n, t)| (Some(n.clone()), t.map_or(Node::Null, |t| Node::build(t, scene))))
                        .collect(),
                    Members::Set(set) => set.iter().map(|t| (None, Node::build(t, scene))).collect(),
                };
                Node::Derived {
                    tag,
                    type_name: d.type_name.clone(),
                    rule: d.rule,
                    bbox: d.bbox,
                    slots: d.slots.clone(),
                    children,
                }
            }
            None => Node::Null,
        }
    }

    pub fn tag(&self) -> Option<Tag> {
        match self {
            Node::Primitive { tag } | Node::Endpoint { tag, .. } | Node::Derived { tag, .. } => Some(*tag),
            Node::Null => None,
        }
    }

    /// Every tag in the tree, including this node.
    pub fn tags(&self) -> TaggedSet {
        let mut out = Vec::new();
        self.walk(&mut |n| out.extend(n.tag()));
        TaggedSet::from_tags(out)
    }

    pub fn walk(&self, f: &mut impl FnMut(&Node<T>)) {
        f(self);
        if let Node::Derived { children, .. } = self {
            for (_, c) in children {
                c.walk(f);
            }
        }
    }

    /// First child named `name` (case-insensitive).
    pub fn child(&self, name: &str) -> Option<&Node<T>> {
        match self {
            Node::Derived { children, .. } => children
                .iter()
                .find(|(n, _)| n.as_ref().is_some_and(|n| n.is(name)))
                .map(|(_, c)| c),
            _ => None,
        }
    }

    pub fn children(&self) -> impl Iterator<Item = &Node<T>> {
        let slice: &[(Option<Symbol>, Node<T>)] = match self {
            Node::Derived { children, .. } => children,
            _ => &[],
        };
        slice.iter().map(|(_, c)| c)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionForest<T> {
    pub start: Symbol,
    pub solutions: Vec<Node<T>>,
}

impl<T: Coord> SolutionForest<T> {
    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn roots(&self) -> Vec<Tag> {
        self.solutions.iter().filter_map(Node::tag).collect()
    }
}

#[derive(Debug, Clone)]
pub struct ParseOutcome<T> {
    pub forest: SolutionForest<T>,
    pub stats: ParseStats,
    pub trace: Vec<TraceEvent>,
}

type MemoKey = (String, TaggedSet);

pub struct Parser<'a, T> {
    grammar: &'a Grammar,
    scene: &'a mut Scene<T>,
    memo: HashMap<MemoKey, Vec<Tag>>,
    in_progress: HashSet<MemoKey>,
    tracing: bool,
    trace: Vec<TraceEvent>,
    stats: ParseStats,
    cap: u64,
}

/// Per-invocation state of an ordinary rule.
struct Frame<'r> {
    idx: usize,
    rule: &'r Rule,
    order: Vec<&'r Symbol>,
    /// Rule-level constraints keyed by the binding step that completes them.
    scheduled: Vec<Vec<&'r Expr>>,
    context: TaggedSet,
    depth: usize,
}

fn ger_of(expr: &Expr) -> Option<Ger> {
    match expr {
        Expr::Symbol(s) => Ger::from_name(s.as_str()),
        Expr::Call { head, args } if args.is_empty() => Ger::from_name(head.as_str()),
        _ => None,
    }
}

/// Keeps the first occurrence of each (type, constituent multiset).
pub fn dedupe<T: Coord>(tags: &[Tag], scene: &Scene<T>) -> Vec<Tag> {
    let mut seen = HashSet::new();
    tags.iter()
        .copied()
        .filter(|&t| {
            let key = match scene.derived(t) {
                Some(d) => {
                    let mut m = d.members.tags();
                    m.sort();
                    (d.type_name.key(), m)
                }
                None => (scene.type_name(t), vec![t]),
            };
            seen.insert(key)
        })
        .collect()
}

impl<'a, T: Coord> Parser<'a, T> {
    pub fn new(grammar: &'a Grammar, scene: &'a mut Scene<T>) -> Self {
        let cap = scene.config().tuple_cap;
        Self {
            grammar,
            scene,
            memo: HashMap::new(),
            in_progress: HashSet::new(),
            tracing: false,
            trace: Vec::new(),
            stats: ParseStats::default(),
            cap,
        }
    }

    pub fn with_trace(mut self, on: bool) -> Self {
        self.tracing = on;
        self
    }

    pub fn stats(&self) -> &ParseStats {
        &self.stats
    }

    pub fn trace(&self) -> &[TraceEvent] {
        &self.trace
    }

    fn emit(&mut self, ev: impl FnOnce() -> TraceEvent) {
        if self.tracing {
            self.trace.push(ev());
        }
    }

    fn count_tuple(&mut self) -> Result<(), ParseError> {
        self.stats.tuples_examined += 1;
        if self.stats.tuples_examined > self.cap {
            return Err(ParseError::TupleCap { limit: self.cap });
        }
        Ok(())
    }

    /// All distinct solutions of `start` over every installed primitive and
    /// endpoint object.
    pub fn parse(mut self, start: &str) -> Result<ParseOutcome<T>, ParseError> {
        let start = Symbol::new(start);
        if !self.grammar.defines(&start) && PrimitiveKind::from_name(start.as_str()).is_none() {
            return Err(ParseError::UnknownStart(start.to_string()));
        }
        let roots = if self.scene.primitive_count() == 0 {
            Vec::new()
        } else {
            let base = self.scene.base_context().clone();
            self.solve(&start, &base, 0)?
        };
        let roots = dedupe(&roots, self.scene);
        let solutions = roots.iter().map(|&t| Node::build(t, self.scene)).collect();
        Ok(ParseOutcome {
            forest: SolutionForest { start, solutions },
            stats: self.stats,
            trace: self.trace,
        })
    }

    /// Solutions of `symbol` within `context`: matching primitives for a
    /// primitive kind, otherwise the union over alternative rules.
    pub fn solve(&mut self, symbol: &Symbol, context: &TaggedSet, depth: usize) -> Result<Vec<Tag>, ParseError> {
        if let Some(kind) = PrimitiveKind::from_name(symbol.as_str()) {
            let scene = &*self.scene;
            return Ok(context.filter(|t| scene.is_kind(t, kind)).iter().collect());
        }
        let key = (symbol.key(), context.clone());
        if let Some(hit) = self.memo.get(&key) {
            self.stats.memo_hits += 1;
            return Ok(hit.clone());
        }
        if !self.in_progress.insert(key.clone()) {
            return Ok(Vec::new());
        }
        let grammar = self.grammar;
        let mut out = Vec::new();
        for (idx, rule) in grammar.alternatives(symbol) {
            self.stats.rules_entered += 1;
            self.emit(|| TraceEvent::Enter {
                depth,
                symbol: rule.lhs.clone(),
                rule: idx,
                context: context.len(),
            });
            let found = if rule.is_set() {
                self.solve_set(idx, rule, context, depth)?
            } else {
                self.solve_rule(idx, rule, context, depth)?
            };
            self.emit(|| TraceEvent::Exit {
                depth,
                symbol: rule.lhs.clone(),
                rule: idx,
                solutions: found.len(),
            });
            out.extend(found);
        }
        let mut seen = HashSet::new();
        out.retain(|t| seen.insert(*t));
        self.in_progress.remove(&key);
        self.memo.insert(key, out.clone());
        Ok(out)
    }

    fn eval_err(rule: &Rule) -> impl Fn(EvalError) -> ParseError + '_ {
        move |source| ParseError::Eval {
            rule: rule.lhs.to_string(),
            source,
        }
    }

    fn solve_rule(
        &mut self,
        idx: usize,
        rule: &Rule,
        context: &TaggedSet,
        depth: usize,
    ) -> Result<Vec<Tag>, ParseError> {
        let order = rule.binding_order();
        let names: Vec<Symbol> = order.iter().map(|s| (*s).clone()).collect();
        let mut scheduled: Vec<Vec<&Expr>> = vec![Vec::new(); order.len()];
        for expr in rule.constraints() {
            let step = mentioned(expr, &names)
                .iter()
                .filter_map(|m| names.iter().position(|n| n == *m))
                .max()
                .unwrap_or(0);
            if let Some(list) = scheduled.get_mut(step) {
                list.push(expr);
            }
        }
        let frame = Frame {
            idx,
            rule,
            order,
            scheduled,
            context: context.clone(),
            depth,
        };
        let mut out = Vec::new();
        let mut bindings = Bindings::new();
        self.extend(&frame, 0, &mut bindings, &mut out)?;
        Ok(out)
    }

    fn check_all(
        &mut self,
        frame: &Frame<'_>,
        exprs: &[&Expr],
        name: &Symbol,
        cand: Tag,
        b: &Bindings,
    ) -> Result<bool, ParseError> {
        for expr in exprs {
            let v = eval_constraint(expr, b, self.scene).map_err(Self::eval_err(frame.rule))?;
            if !v.holds {
                self.emit(|| TraceEvent::Reject {
                    depth: frame.depth,
                    rule: frame.idx,
                    constituent: name.clone(),
                    candidate: cand,
                    constraint: expr.to_string(),
                });
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn extend(&mut self, frame: &Frame<'_>, k: usize, b: &mut Bindings, out: &mut Vec<Tag>) -> Result<(), ParseError> {
        let Some(&name) = frame.order.get(k) else {
            self.count_tuple()?;
            if let Some(tag) = self.make_tuple(frame, b)? {
                out.push(tag);
            }
            return Ok(());
        };
        let rule = frame.rule;
        let spec = rule.constituent_clause(name);
        let ctx_expr = spec.and_then(|s| s.context.as_ref());
        let ctx = clause_context(&frame.context, ctx_expr, b, self.scene).map_err(Self::eval_err(rule))?;
        if !ctx.is_subset(&frame.context) {
            self.stats.monotonicity_violations += 1;
        }
        self.emit(|| TraceEvent::Context {
            depth: frame.depth,
            rule: frame.idx,
            constituent: name.clone(),
            context: ctx.clone(),
        });
        let mut space = self.solve(rule.constituent_type(name), &ctx, frame.depth + 1)?;
        if let Some(ContextExpr::Anchor(anchor)) = ctx_expr {
            if let Some(Bound::Object(a)) = b.get(anchor) {
                let shared = self.scene.leaves(*a);
                let scene = &*self.scene;
                space.retain(|&c| !scene.leaves(c).intersect(&shared).is_empty());
            }
        }
        self.emit(|| TraceEvent::Space {
            depth: frame.depth,
            rule: frame.idx,
            constituent: name.clone(),
            space: TaggedSet::from_tags(space.iter().copied()),
        });
        let clause_constraints: Vec<&Expr> = spec.map(|s| s.constraints.iter().collect()).unwrap_or_default();
        let mut passing = Vec::new();
        for &cand in &space {
            self.count_tuple()?;
            b.bind(name, Bound::Object(cand));
            if self.check_all(frame, &clause_constraints, name, cand, b)? {
                passing.push(cand);
            }
            b.unbind(name);
        }
        if passing.is_empty() {
            if !rule.is_nullable(name) {
                return Ok(());
            }
            self.emit(|| TraceEvent::Null {
                depth: frame.depth,
                rule: frame.idx,
                constituent: name.clone(),
            });
            b.bind(name, Bound::Null);
            if self.check_scheduled(frame, k, name, None, b)? {
                self.extend(frame, k + 1, b, out)?;
            }
            b.unbind(name);
            return Ok(());
        }
        for cand in passing {
            b.bind(name, Bound::Object(cand));
            if self.check_scheduled(frame, k, name, Some(cand), b)? {
                self.extend(frame, k + 1, b, out)?;
            }
            b.unbind(name);
        }
        Ok(())
    }

    fn check_scheduled(
        &mut self,
        frame: &Frame<'_>,
        k: usize,
        name: &Symbol,
        cand: Option<Tag>,
        b: &Bindings,
    ) -> Result<bool, ParseError> {
        for expr in &frame.scheduled[k] {
            let v = eval_constraint(expr, b, self.scene).map_err(Self::eval_err(frame.rule))?;
            if !v.holds {
                if let Some(cand) = cand {
                    self.emit(|| TraceEvent::Reject {
                        depth: frame.depth,
                        rule: frame.idx,
                        constituent: name.clone(),
                        candidate: cand,
                        constraint: expr.to_string(),
                    });
                }
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn make_tuple(&mut self, frame: &Frame<'_>, b: &Bindings) -> Result<Option<Tag>, ParseError> {
        let rule = frame.rule;
        let items: Vec<(Symbol, Option<Tag>)> = rule
            .constituents()
            .iter()
            .map(|n| {
                let t = match b.get(n) {
                    Some(Bound::Object(t)) => Some(*t),
                    _ => None,
                };
                (n.clone(), t)
            })
            .collect();
        if items.iter().all(|(_, t)| t.is_none()) {
            return Ok(None);
        }
        self.install(frame.idx, rule, Members::Tuple(items), b).map(Some)
    }

    fn install(&mut self, idx: usize, rule: &Rule, members: Members, b: &Bindings) -> Result<Tag, ParseError> {
        let (tag, created) = self.scene.install_derived(&rule.lhs, idx, members)?;
        if created {
            self.stats.derived_created += 1;
            let mut sb = b.clone();
            sb.bind(&Symbol::new("self"), Bound::Object(tag));
            let mut slots = Vec::new();
            for (name, expr) in rule.slots() {
                let v = eval_value(expr, &sb, self.scene).map_err(Self::eval_err(rule))?;
                slots.push((name.clone(), v.unwrap_or(Value::Null)));
            }
            if !slots.is_empty() {
                self.scene.set_slots(tag, slots);
            }
        }
        Ok(tag)
    }

    fn solve_set(
        &mut self,
        idx: usize,
        rule: &Rule,
        context: &TaggedSet,
        depth: usize,
    ) -> Result<Vec<Tag>, ParseError> {
        let Some(element) = rule.element() else {
            return Ok(Vec::new());
        };
        let candidates = self.solve(element, context, depth + 1)?;
        self.emit(|| TraceEvent::Space {
            depth,
            rule: idx,
            constituent: element.clone(),
            space: TaggedSet::from_tags(candidates.iter().copied()),
        });
        let frame = Frame {
            idx,
            rule,
            order: Vec::new(),
            scheduled: Vec::new(),
            context: context.clone(),
            depth,
        };
        let elem_constraints: Vec<&Expr> = rule.element_constraints().collect();
        let mut kept = Vec::new();
        for cand in candidates {
            self.count_tuple()?;
            let b = Bindings::new().with(element, Bound::Object(cand));
            if self.check_all(&frame, &elem_constraints, element, cand, &b)? {
                kept.push(cand);
            }
        }
        if kept.is_empty() {
            return Ok(Vec::new());
        }
        let elements = TaggedSet::from_tags(kept);
        let (gers, others): (Vec<&Expr>, Vec<&Expr>) = rule.constraints().partition(|e| ger_of(e).is_some());
        let partitions: Vec<Vec<TaggedSet>> = gers
            .iter()
            .filter_map(|e| ger_of(e))
            .map(|g| ger_partition(&elements, g, self.scene))
            .collect();
        let groups = refine(&elements, &partitions);
        let self_sym = Symbol::new("self");
        let mut passing = Vec::new();
        for group in groups {
            self.count_tuple()?;
            self.emit(|| TraceEvent::Group {
                depth,
                rule: idx,
                members: group.clone(),
            });
            let b = Bindings::new()
                .with(&rule.lhs, Bound::Group(group.clone()))
                .with(&self_sym, Bound::Group(group.clone()));
            let first = group.first().unwrap_or(Tag(0));
            if self.check_all(&frame, &others, &rule.lhs, first, &b)? {
                passing.push(group);
            }
        }
        if rule.largest() {
            let best = passing
                .iter()
                .max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.first().cmp(&a.first())))
                .cloned();
            passing = best.into_iter().collect();
        }
        let mut out = Vec::new();
        for group in passing {
            out.push(self.install(idx, rule, Members::Set(group), &Bindings::new())?);
        }
        Ok(out)
    }
}

/// Parses `scene` with `grammar` from `start`.
pub fn parse<T: Coord>(grammar: &Grammar, start: &str, scene: &mut Scene<T>) -> Result<ParseOutcome<T>, ParseError> {
    Parser::new(grammar, scene).parse(start)
}

/// Re-evaluates every constraint of the rule that produced `tag` (and,
/// recursively, of its constituents) against the final bindings.
pub fn replay<T: Coord>(grammar: &Grammar, scene: &Scene<T>, tag: Tag) -> Result<(), String> {
    let Some(d) = scene.derived(tag) else {
        return Ok(());
    };
    let rule = grammar
        .rules
        .get(d.rule)
        .ok_or_else(|| format!("{}: no rule {}", scene.label(tag), d.rule))?;
    let fail = |what: &str| Err(format!("{}: {what}", scene.label(tag)));
    let check = |expr: &Expr, b: &Bindings| -> Result<(), String> {
        match eval_constraint(expr, b, scene) {
            Ok(v) if v.holds => Ok(()),
            Ok(_) => Err(format!("{}: {expr} does not hold", scene.label(tag))),
            Err(e) => Err(format!("{}: {e}", scene.label(tag))),
        }
    };
    for m in d.members.tags() {
        match scene.bbox(m) {
            Some(bb) if d.bbox.contains_rect(bb) => {}
            _ => return fail("bbox does not contain a constituent"),
        }
        replay(grammar, scene, m)?;
    }
    match &d.members {
        Members::Tuple(items) => {
            let mut b = Bindings::new();
            for (n, t) in items {
                match t {
                    Some(t) => b.bind(n, Bound::Object(*t)),
                    None if rule.is_nullable(n) => b.bind(n, Bound::Null),
                    None => return fail("null constituent outside :null"),
                }
            }
            for (n, t) in items {
                if t.is_some() {
                    if let Some(spec) = rule.constituent_clause(n) {
                        for e in &spec.constraints {
                            check(e, &b)?;
                        }
                    }
                }
            }
            for e in rule.constraints() {
                check(e, &b)?;
            }
        }
        Members::Set(set) => {
            let Some(element) = rule.element() else {
                return fail("set object from an ordinary rule");
            };
            for t in set.iter() {
                let b = Bindings::new().with(element, Bound::Object(t));
                for e in rule.element_constraints() {
                    check(e, &b)?;
                }
            }
            let b = Bindings::new()
                .with(&rule.lhs, Bound::Group(set.clone()))
                .with(&Symbol::new("self"), Bound::Group(set.clone()));
            for e in rule.constraints() {
                match ger_of(e) {
                    Some(g) => {
                        if ger_partition_slice(set.as_slice(), g, scene).len() != 1 {
                            return fail(&format!("elements not connected under {g}"));
                        }
                    }
                    None => check(e, &b)?,
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::geometry::{Point, Primitive, Shape};
    use crate::grammar::{g1, parse_grammar};

    fn line(tag: u32, a: (f64, f64), b: (f64, f64)) -> Primitive<f64> {
        Primitive::new(Tag(tag), Shape::line(Point::new(a.0, a.1), Point::new(b.0, b.1))).unwrap()
    }

    fn axis_with_ticks(n: usize) -> Vec<Primitive<f64>> {
        let mut p = vec![line(0, (1000.0, 4000.0), (7000.0, 4000.0))];
        for k in 0..n {
            let x = 2000.0 + 800.0 * k as f64;
            p.push(line(p.len() as u32, (x, 4000.0), (x, 4200.0)));
        }
        p
    }

    #[test]
    fn three_ticks_give_one_solution() {
        let mut s = Scene::new(axis_with_ticks(3), Config::default()).unwrap();
        let g = g1();
        let out = parse(&g, "X-Ticks", &mut s).unwrap();
        assert_eq!(out.forest.len(), 1);
        let ticks = out.forest.solutions[0].child("Ticks").unwrap();
        assert_eq!(ticks.children().count(), 3);
        for r in out.forest.roots() {
            replay(&g, &s, r).unwrap();
        }
        assert_eq!(out.stats.monotonicity_violations, 0);
    }

    #[test]
    fn two_ticks_are_rejected() {
        let mut s = Scene::new(axis_with_ticks(2), Config::default()).unwrap();
        let out = Parser::new(&g1(), &mut s).with_trace(true).parse("X-Ticks").unwrap();
        assert!(out.forest.is_empty());
        assert!(out
            .trace
            .iter()
            .any(|e| matches!(e, TraceEvent::Reject { constraint, .. } if constraint.contains("number-of"))));
    }

    #[test]
    fn single_constituent_rule_over_one_match() {
        let g = parse_grammar("Thing -> Circle;").unwrap();
        let c = Primitive::new(
            Tag(0),
            Shape::Circle {
                center: Point::new(4000.0, 4000.0),
                radius: 50.0,
            },
        )
        .unwrap();
        let mut s = Scene::new(vec![c, line(1, (0.0, 0.0), (100.0, 0.0))], Config::default()).unwrap();
        let out = parse(&g, "Thing", &mut s).unwrap();
        assert_eq!(out.forest.len(), 1);
        assert_eq!(out.forest.solutions[0].tags().len(), 2);
    }

    #[test]
    fn empty_diagram_and_unknown_start() {
        let mut s = Scene::<f64>::new(vec![], Config::default()).unwrap();
        assert!(parse(&g1(), "X-Ticks", &mut s).unwrap().forest.is_empty());
        assert!(matches!(parse(&g1(), "Nope", &mut s), Err(ParseError::UnknownStart(_))));
    }

    #[test]
    fn null_binds_only_for_empty_space() {
        let g = parse_grammar("Pair -> Line Circle\n  (:null Circle)\n  (Circle (touch Line ?));").unwrap();
        let mut s = Scene::new(axis_with_ticks(0), Config::default()).unwrap();
        let out = parse(&g, "Pair", &mut s).unwrap();
        assert_eq!(out.forest.len(), 1);
        assert_eq!(out.forest.solutions[0].child("Circle"), Some(&Node::Null));
    }

    #[test]
    fn tuple_cap_is_a_hard_error() {
        let config = Config {
            tuple_cap: 2,
            ..Config::default()
        };
        let mut s = Scene::new(axis_with_ticks(4), config).unwrap();
        assert!(matches!(
            parse(&g1(), "X-Ticks", &mut s),
            Err(ParseError::TupleCap { limit: 2 })
        ));
    }

    #[test]
    fn slots_see_self() {
        let g = crate::grammar::g2();
        let mut s = Scene::new(vec![line(0, (1000.0, 1000.0), (7000.0, 1000.0))], Config::default()).unwrap();
        let out = parse(&g, "X-Line", &mut s).unwrap();
        let Node::Derived { slots, .. } = &out.forest.solutions[0] else {
            panic!()
        };
        assert_eq!(slots[0].1, Value::Point(Point::new(1000.0, 1000.0)));
    }
}
