use std::collections::{HashMap, HashSet};
use std::fmt;

use super::ast::{Clause, ContextExpr, Expr, Grammar, Rule, RuleKind, Symbol};
use crate::constraints::vocab::{self, Role};
use crate::geometry::PrimitiveKind;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub rule: String,
    pub line: usize,
    pub reason: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: rule {}: {}", self.line, self.rule, self.reason)
    }
}

pub fn is_primitive_type(name: &Symbol) -> bool {
    PrimitiveKind::from_name(name.as_str()).is_some()
}

/// Where an expression occurs, which decides the names in scope.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Site {
    Constraint,
    SetConstraint,
    Element,
    Slot,
    Anchor,
}

struct Checker<'a> {
    grammar: &'a Grammar,
    out: Vec<Diagnostic>,
    rule_name: String,
    line: usize,
}

impl<'a> Checker<'a> {
    fn report(&mut self, reason: impl Into<String>) {
        self.out.push(Diagnostic {
            rule: self.rule_name.clone(),
            line: self.line,
            reason: reason.into(),
        });
    }

    fn resolves(&self, ty: &Symbol) -> bool {
        is_primitive_type(ty) || self.grammar.defines(ty)
    }

    fn check_rule(&mut self, rule: &Rule) {
        let mut seen_clauses: HashSet<&Symbol> = HashSet::new();
        match &rule.kind {
            RuleKind::Ordinary { rhs } => {
                let mut declared: HashSet<&Symbol> = HashSet::new();
                for name in rhs {
                    if !declared.insert(name) {
                        self.report(format!("constituent {name} is declared twice"));
                    }
                }
                for name in rhs {
                    let ty = rule.constituent_type(name);
                    if ty == &rule.lhs {
                        self.report(format!("left recursion: {} is its own constituent", rule.lhs));
                    } else if !self.resolves(ty) {
                        self.report(format!("unresolved constituent type {ty}"));
                    }
                }
            }
            RuleKind::Set { element } => {
                if element == &rule.lhs {
                    self.report(format!("left recursion: {} is its own element type", rule.lhs));
                } else if !self.resolves(element) {
                    self.report(format!("unresolved element type {element}"));
                }
            }
        }

        let order = rule.binding_order();
        let mut slot_names: HashSet<&Symbol> = HashSet::new();
        for clause in &rule.clauses {
            match clause {
                Clause::Constraints { exprs, .. } => {
                    let site = if rule.is_set() {
                        Site::SetConstraint
                    } else {
                        Site::Constraint
                    };
                    for e in exprs {
                        self.check_top(rule, e, site);
                    }
                }
                Clause::ElementConstraints { exprs, .. } => {
                    if !rule.is_set() {
                        self.report("`:element-constraints` is only valid in set rules");
                    }
                    for e in exprs {
                        self.check_top(rule, e, Site::Element);
                    }
                }
                Clause::AdditionalSlots(slots) => {
                    for (name, e) in slots {
                        if !slot_names.insert(name) {
                            self.report(format!("duplicate slot name {name}"));
                        }
                        self.check_expr(rule, e, Site::Slot);
                    }
                }
                Clause::Null(names) => {
                    if rule.is_set() {
                        self.report("`:null` is only valid in ordinary rules");
                    }
                    for n in names {
                        if !rule.constituents().contains(n) {
                            self.report(format!("`:null` names undeclared constituent {n}"));
                        }
                    }
                }
                Clause::Largest(_) => {
                    if !rule.is_set() {
                        self.report("`:largest` is only valid in set rules");
                    }
                }
                Clause::Constituent(spec) => {
                    if rule.is_set() {
                        self.report(format!("set rules take no constituent clauses ({})", spec.name));
                        continue;
                    }
                    if !rule.constituents().contains(&spec.name) {
                        self.report(format!("clause for undeclared constituent {}", spec.name));
                        continue;
                    }
                    if !seen_clauses.insert(&spec.name) {
                        self.report(format!("constituent {} has two clauses", spec.name));
                    }
                    let earlier: Vec<&Symbol> = order.iter().take_while(|n| **n != &spec.name).copied().collect();
                    self.check_context(rule, spec.context.as_ref(), &earlier);
                    for e in &spec.constraints {
                        self.check_top(rule, e, Site::Constraint);
                    }
                }
            }
        }
    }

    fn check_context(&mut self, rule: &Rule, ctx: Option<&ContextExpr>, earlier: &[&Symbol]) {
        match ctx {
            None | Some(ContextExpr::Inherit) => {}
            Some(ContextExpr::Typed(ty)) => {
                if !self.resolves(ty) {
                    self.report(format!("unresolved type {ty} in context form"));
                }
            }
            Some(ContextExpr::Anchor(a)) => {
                if !earlier.contains(&a) {
                    self.report(format!("anchor {a} is not bound before its use"));
                }
            }
            Some(ContextExpr::Relation { head, args, strip }) => {
                match vocab::lookup_with_arity(head.as_str(), args.len()) {
                    Some(e) if e.role == Role::Relation => {
                        if !e.accepts(args.len()) {
                            self.report(format!("{head} takes {} arguments, got {}", e.min_args, args.len()));
                        }
                        if *strip && !e.strip {
                            self.report(format!("{head} does not accept `:strip`"));
                        }
                    }
                    _ => self.report(format!("unknown relation {head} in context form")),
                }
                let queries = args.iter().filter(|a| matches!(a, Expr::Query)).count();
                if queries != 1 {
                    self.report(format!(
                        "context form must have exactly one top-level `?`, found {queries}"
                    ));
                }
                for a in args.iter().filter(|a| !matches!(a, Expr::Query)) {
                    self.check_expr(rule, a, Site::Anchor);
                    for s in a.symbols() {
                        if rule.constituents().contains(s) && !earlier.contains(&s) {
                            self.report(format!("anchor {s} is not bound before its use"));
                        }
                    }
                }
            }
        }
    }

    /// A constraint clause item: a call, or a bare equivalence-relation name in a set rule.
    fn check_top(&mut self, rule: &Rule, e: &Expr, site: Site) {
        if let Expr::Symbol(s) = e {
            if vocab::is_ger(s.as_str()) {
                if site != Site::SetConstraint {
                    self.report(format!("{s} groups set elements and is only valid as a set constraint"));
                }
                return;
            }
            self.report(format!("constraint must be an expression, found {s}"));
            return;
        }
        if let Expr::Call { head, args } = e {
            if vocab::is_ger(head.as_str()) && args.is_empty() {
                if site != Site::SetConstraint {
                    self.report(format!(
                        "{head} groups set elements and is only valid as a set constraint"
                    ));
                }
                return;
            }
        }
        self.check_expr(rule, e, site);
    }

    fn in_scope(&self, rule: &Rule, s: &Symbol, site: Site) -> bool {
        if vocab::is_constant(s.as_str()) || s.is("t") || s.is("nil") {
            return true;
        }
        match site {
            Site::Constraint | Site::Anchor => rule.constituents().contains(s),
            Site::Slot => s.is("self") || rule.constituents().contains(s) || rule.element() == Some(s),
            Site::Element => rule.element() == Some(s),
            Site::SetConstraint => s.is("self") || s == &rule.lhs,
        }
    }

    fn check_expr(&mut self, rule: &Rule, e: &Expr, site: Site) {
        match e {
            Expr::Number(_) | Expr::Keyword(_) => {}
            Expr::Query => self.report("`?` is only valid in a context form"),
            Expr::Symbol(s) => {
                if !self.in_scope(rule, s, site) {
                    self.report(format!("unresolved reference {s}"));
                }
            }
            Expr::Call { head, args } => {
                let positional = args.iter().filter(|a| !matches!(a, Expr::Keyword(_))).count();
                let strip = args.iter().any(|a| matches!(a, Expr::Keyword(k) if k == "strip"));
                let positional = if strip { positional - 1 } else { positional };
                match vocab::lookup_with_arity(head.as_str(), positional) {
                    Some(entry) if entry.role == Role::Ger => {
                        self.report(format!("{head} takes no arguments"));
                    }
                    Some(entry) => {
                        if !entry.accepts(positional) {
                            self.report(format!(
                                "{head} expects {} argument(s), got {positional}",
                                entry.min_args
                            ));
                        }
                        if strip && !entry.strip {
                            self.report(format!("{head} does not accept `:strip`"));
                        }
                    }
                    None => {
                        // `(Name obj)`: constituent access on a derived object.
                        let known =
                            self.grammar.defines(head) || is_primitive_type(head) || rule.constituents().contains(head);
                        if !known {
                            self.report(format!("unknown predicate {head}"));
                        } else if args.len() != 1 {
                            self.report(format!("constituent access {head} takes one argument"));
                        }
                    }
                }
                for a in args {
                    self.check_expr(rule, a, site);
                }
            }
        }
    }
}

/// Checks every structural invariant; an empty result means the grammar is valid.
pub fn validate_grammar(grammar: &Grammar) -> Vec<Diagnostic> {
    let mut c = Checker {
        grammar,
        out: Vec::new(),
        rule_name: String::new(),
        line: 0,
    };
    for (i, rule) in grammar.rules.iter().enumerate() {
        c.rule_name = rule.lhs.to_string();
        c.line = grammar.line_of(i);
        c.check_rule(rule);
    }
    c.out
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleInfo {
    pub lhs: Symbol,
    /// Indices into `Grammar::rules`, in source order.
    pub alternatives: Vec<usize>,
    pub slots: Vec<Symbol>,
    /// True when some alternative binds directly from primitive kinds.
    pub primitive_only: bool,
}

#[derive(Debug, Clone, Default)]
pub struct RuleMetadata {
    infos: Vec<RuleInfo>,
    by_key: HashMap<String, usize>,
}

impl RuleMetadata {
    pub fn get(&self, name: &str) -> Option<&RuleInfo> {
        self.by_key.get(&name.to_ascii_lowercase()).map(|&i| &self.infos[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = &RuleInfo> {
        self.infos.iter()
    }

    pub fn len(&self) -> usize {
        self.infos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.infos.is_empty()
    }
}

fn binds_from_primitives(rule: &Rule) -> bool {
    match &rule.kind {
        RuleKind::Set { element } => is_primitive_type(element),
        RuleKind::Ordinary { rhs } => rhs.iter().all(|n| is_primitive_type(rule.constituent_type(n))),
    }
}

/// Per-name dispatch information, in order of first definition.
pub fn rule_metadata(grammar: &Grammar) -> RuleMetadata {
    let mut meta = RuleMetadata::default();
    for (i, rule) in grammar.rules.iter().enumerate() {
        let idx = *meta.by_key.entry(rule.lhs.key()).or_insert_with(|| {
            meta.infos.push(RuleInfo {
                lhs: rule.lhs.clone(),
                alternatives: Vec::new(),
                slots: Vec::new(),
                primitive_only: false,
            });
            meta.infos.len() - 1
        });
        let info = &mut meta.infos[idx];
        info.alternatives.push(i);
        for (name, _) in rule.slots() {
            if !info.slots.contains(name) {
                info.slots.push(name.clone());
            }
        }
        info.primitive_only |= binds_from_primitives(rule);
    }
    meta
}
