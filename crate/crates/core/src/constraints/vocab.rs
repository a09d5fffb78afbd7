//! Registered constraint vocabulary: every head a grammar may use, with its
//! role and accepted arity.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    /// Unary test on one object.
    Predicate,
    /// Binary spatial relation; usable as a context generator with `?`.
    Relation,
    /// Value-producing function.
    Function,
    /// Numeric comparison.
    Comparison,
    /// Boolean connective.
    Logical,
    /// Generalized equivalence relation, written bare in set rules.
    Ger,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Role::Predicate => "predicate",
            Role::Relation => "relation",
            Role::Function => "function",
            Role::Comparison => "comparison",
            Role::Logical => "connective",
            Role::Ger => "equivalence relation",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Entry {
    pub name: &'static str,
    pub role: Role,
    pub min_args: usize,
    /// `None` for variadic heads.
    pub max_args: Option<usize>,
    /// Accepts the `:strip t` option.
    pub strip: bool,
}

const fn entry(name: &'static str, role: Role, min: usize, max: Option<usize>, strip: bool) -> Entry {
    Entry {
        name,
        role,
        min_args: min,
        max_args: max,
        strip,
    }
}

pub const VOCABULARY: &[Entry] = &[
    entry("horizp", Role::Predicate, 1, Some(1), false),
    entry("vertp", Role::Predicate, 1, Some(1), false),
    entry("long", Role::Predicate, 1, Some(1), false),
    entry("short", Role::Predicate, 1, Some(1), false),
    entry("small", Role::Predicate, 1, Some(1), false),
    entry("numeric-textp", Role::Predicate, 1, Some(1), false),
    entry("rectanglep", Role::Predicate, 1, Some(1), false),
    entry("touch", Role::Relation, 2, Some(2), false),
    entry("above", Role::Relation, 2, Some(2), true),
    entry("below", Role::Relation, 2, Some(2), true),
    entry("left", Role::Relation, 2, Some(2), true),
    entry("right", Role::Relation, 2, Some(2), true),
    entry("below-nearest", Role::Relation, 2, Some(2), false),
    entry("left-nearest", Role::Relation, 2, Some(2), false),
    entry("contain", Role::Relation, 2, Some(2), false),
    entry("distance", Role::Function, 2, Some(2), false),
    entry("a-length", Role::Function, 1, Some(1), false),
    entry("left-endpoint", Role::Function, 1, Some(1), false),
    entry("bottom-endpoint", Role::Function, 1, Some(1), false),
    entry("size", Role::Function, 1, Some(1), false),
    entry("number-of", Role::Function, 1, Some(1), false),
    entry("or", Role::Function, 1, None, false),
    entry("<", Role::Comparison, 2, Some(2), false),
    entry(">", Role::Comparison, 2, Some(2), false),
    entry("<=", Role::Comparison, 2, Some(2), false),
    entry(">=", Role::Comparison, 2, Some(2), false),
    entry("=", Role::Comparison, 2, Some(2), false),
    entry("and", Role::Logical, 1, None, false),
    entry("not", Role::Logical, 1, Some(1), false),
    entry("near", Role::Ger, 0, Some(0), false),
    entry("horiz-aligned", Role::Ger, 0, Some(0), false),
    entry("vert-aligned", Role::Ger, 0, Some(0), false),
    entry("connected", Role::Ger, 0, Some(0), false),
    entry("same-type", Role::Ger, 0, Some(0), false),
];

/// Named constants resolved from configuration.
pub const CONSTANTS: &[&str] = &["*tiny*", "*very-long*"];

/// Looks up a head by name (case-insensitive). `near` is also accepted as a
/// binary relation; see [`lookup_with_arity`].
pub fn lookup(name: &str) -> Option<&'static Entry> {
    VOCABULARY.iter().find(|e| e.name.eq_ignore_ascii_case(name))
}

const NEAR_RELATION: Entry = entry("near", Role::Relation, 2, Some(2), false);

/// Like [`lookup`], but resolves `near` with arguments to its relation form.
pub fn lookup_with_arity(name: &str, args: usize) -> Option<&'static Entry> {
    if name.eq_ignore_ascii_case("near") && args > 0 {
        return Some(&NEAR_RELATION);
    }
    lookup(name)
}

pub fn is_constant(name: &str) -> bool {
    CONSTANTS.iter().any(|c| c.eq_ignore_ascii_case(name))
}

pub fn is_ger(name: &str) -> bool {
    lookup(name).is_some_and(|e| e.role == Role::Ger)
}

impl Entry {
    pub fn accepts(&self, args: usize) -> bool {
        args >= self.min_args && self.max_args.is_none_or(|m| args <= m)
    }
}
