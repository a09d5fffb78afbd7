use std::fmt;
use std::hash::{Hash, Hasher};

/// A grammar name. Comparison ignores ASCII case; the spelling is kept for
/// display.
#[derive(Debug, Clone, Eq)]
pub struct Symbol(String);

impl Symbol {
    pub fn new(name: impl Into<String>) -> Self {
        Self(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Lower-cased lookup key.
    pub fn key(&self) -> String {
        self.0.to_ascii_lowercase()
    }

    pub fn is(&self, other: &str) -> bool {
        self.0.eq_ignore_ascii_case(other)
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        self.0.eq_ignore_ascii_case(&other.0)
    }
}

impl Hash for Symbol {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for b in self.0.bytes() {
            state.write_u8(b.to_ascii_lowercase());
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Symbol(Symbol),
    Number(f64),
    /// The `?` placeholder of a context form.
    Query,
    /// A `:keyword` argument.
    Keyword(String),
    Call {
        head: Symbol,
        args: Vec<Expr>,
    },
}

impl Expr {
    pub fn sym(name: &str) -> Self {
        Expr::Symbol(Symbol::new(name))
    }

    pub fn call(head: &str, args: Vec<Expr>) -> Self {
        Expr::Call {
            head: Symbol::new(head),
            args,
        }
    }

    /// Every symbol appearing anywhere in the expression, heads excluded.
    pub fn symbols(&self) -> Vec<&Symbol> {
        let mut out = Vec::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols<'a>(&'a self, out: &mut Vec<&'a Symbol>) {
        match self {
            Expr::Symbol(s) => out.push(s),
            Expr::Call { args, .. } => {
                for a in args {
                    a.collect_symbols(out);
                }
            }
            _ => {}
        }
    }

    pub fn contains_query(&self) -> bool {
        match self {
            Expr::Query => true,
            Expr::Call { args, .. } => args.iter().any(Expr::contains_query),
            _ => false,
        }
    }
}

/// How a constituent's context is derived from the rule's inherited context.
#[derive(Debug, Clone, PartialEq)]
pub enum ContextExpr {
    /// `context`: the inherited context unchanged.
    Inherit,
    /// `(Type context)`: solve the constituent as `Type` in the inherited context.
    Typed(Symbol),
    /// A bare previously bound name: solutions must share a primitive with it.
    Anchor(Symbol),
    /// `(rel args...)` with one `?` argument, generated from the spatial index.
    Relation { head: Symbol, args: Vec<Expr>, strip: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstituentSpec {
    pub name: Symbol,
    pub context: Option<ContextExpr>,
    pub constraints: Vec<Expr>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Clause {
    /// `(:constraints ...)`; `plural` records the spelling used.
    Constraints {
        plural: bool,
        exprs: Vec<Expr>,
    },
    ElementConstraints {
        plural: bool,
        exprs: Vec<Expr>,
    },
    AdditionalSlots(Vec<(Symbol, Expr)>),
    Null(Vec<Symbol>),
    Largest(Expr),
    Constituent(ConstituentSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub enum RuleKind {
    Ordinary { rhs: Vec<Symbol> },
    Set { element: Symbol },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub lhs: Symbol,
    pub kind: RuleKind,
    pub clauses: Vec<Clause>,
}

impl Rule {
    pub fn is_set(&self) -> bool {
        matches!(self.kind, RuleKind::Set { .. })
    }

    /// Declared constituent names (empty for set rules).
    pub fn constituents(&self) -> &[Symbol] {
        match &self.kind {
            RuleKind::Ordinary { rhs } => rhs,
            RuleKind::Set { .. } => &[],
        }
    }

    pub fn element(&self) -> Option<&Symbol> {
        match &self.kind {
            RuleKind::Set { element } => Some(element),
            RuleKind::Ordinary { .. } => None,
        }
    }

    pub fn constituent_clause(&self, name: &Symbol) -> Option<&ConstituentSpec> {
        self.clauses.iter().find_map(|c| match c {
            Clause::Constituent(spec) if &spec.name == name => Some(spec),
            _ => None,
        })
    }

    /// The rule or primitive kind a constituent is solved as.
    pub fn constituent_type<'a>(&'a self, name: &'a Symbol) -> &'a Symbol {
        match self.constituent_clause(name).and_then(|s| s.context.as_ref()) {
            Some(ContextExpr::Typed(ty)) => ty,
            _ => name,
        }
    }

    /// Constituents without a clause in RHS order, then clauses in source order.
    pub fn binding_order(&self) -> Vec<&Symbol> {
        let rhs = self.constituents();
        let mut order: Vec<&Symbol> = rhs.iter().filter(|n| self.constituent_clause(n).is_none()).collect();
        for c in &self.clauses {
            if let Clause::Constituent(spec) = c {
                if rhs.contains(&spec.name) && !order.contains(&&spec.name) {
                    order.push(&spec.name);
                }
            }
        }
        order
    }

    pub fn constraints(&self) -> impl Iterator<Item = &Expr> {
        self.clauses.iter().flat_map(|c| match c {
            Clause::Constraints { exprs, .. } => exprs.as_slice(),
            _ => &[],
        })
    }

    pub fn element_constraints(&self) -> impl Iterator<Item = &Expr> {
        self.clauses.iter().flat_map(|c| match c {
            Clause::ElementConstraints { exprs, .. } => exprs.as_slice(),
            _ => &[],
        })
    }

    pub fn slots(&self) -> impl Iterator<Item = &(Symbol, Expr)> {
        self.clauses.iter().flat_map(|c| match c {
            Clause::AdditionalSlots(slots) => slots.as_slice(),
            _ => &[],
        })
    }

    pub fn nullable(&self) -> impl Iterator<Item = &Symbol> {
        self.clauses.iter().flat_map(|c| match c {
            Clause::Null(names) => names.as_slice(),
            _ => &[],
        })
    }

    pub fn is_nullable(&self, name: &Symbol) -> bool {
        self.nullable().any(|n| n == name)
    }

    /// `(:largest t)`; any value other than `nil` counts as set.
    pub fn largest(&self) -> bool {
        self.clauses.iter().any(|c| match c {
            Clause::Largest(Expr::Symbol(s)) => !s.is("nil"),
            Clause::Largest(_) => true,
            _ => false,
        })
    }
}

/// An ordered list of rules; a name may have several alternative rules.
#[derive(Debug, Clone, Default)]
pub struct Grammar {
    pub rules: Vec<Rule>,
    /// Source line of each rule, for diagnostics. Not part of equality.
    pub lines: Vec<usize>,
}

impl PartialEq for Grammar {
    fn eq(&self, other: &Self) -> bool {
        self.rules == other.rules
    }
}

impl Grammar {
    pub fn alternatives<'a>(&'a self, name: &'a Symbol) -> impl Iterator<Item = (usize, &'a Rule)> + 'a {
        self.rules.iter().enumerate().filter(move |(_, r)| &r.lhs == name)
    }

    pub fn defines(&self, name: &Symbol) -> bool {
        self.rules.iter().any(|r| &r.lhs == name)
    }

    pub fn line_of(&self, rule: usize) -> usize {
        self.lines.get(rule).copied().unwrap_or(0)
    }
}
