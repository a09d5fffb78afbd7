//! The constraint-grammar notation: reader, checker, metadata and printer.

mod ast;
mod check;
mod print;
mod syntax;

use thiserror::Error;

pub use ast::{Clause, ConstituentSpec, ContextExpr, Expr, Grammar, Rule, RuleKind, Symbol};
pub use check::{is_primitive_type, rule_metadata, validate_grammar, Diagnostic, RuleInfo, RuleMetadata};
pub use syntax::{parse_rules, SyntaxError};

/// The three-rule tick grammar.
pub const G1_SOURCE: &str = include_str!("../../grammars/g1.dg");
/// The data-graph grammar.
pub const G2_SOURCE: &str = include_str!("../../grammars/g2.dg");

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GrammarError {
    #[error("syntax error at {0}")]
    Syntax(#[from] SyntaxError),
    #[error("invalid grammar: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
}

/// Reads and validates grammar text.
pub fn parse_grammar(src: &str) -> Result<Grammar, GrammarError> {
    let g = parse_rules(src)?;
    let diags = validate_grammar(&g);
    if diags.is_empty() {
        Ok(g)
    } else {
        Err(GrammarError::Invalid(diags))
    }
}

pub fn g1() -> Grammar {
    parse_grammar(G1_SOURCE).expect("bundled g1.dg is valid")
}

pub fn g2() -> Grammar {
    parse_grammar(G2_SOURCE).expect("bundled g2.dg is valid")
}

/// Looks up a bundled grammar by file stem.
pub fn bundled(name: &str) -> Option<&'static str> {
    match name.to_ascii_lowercase().trim_end_matches(".dg") {
        "g1" => Some(G1_SOURCE),
        "g2" => Some(G2_SOURCE),
        _ => None,
    }
}
