use std::fmt::{self, Display, Formatter};

use super::ast::{Clause, ConstituentSpec, ContextExpr, Expr, Grammar, Rule, RuleKind};

impl Display for Expr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Symbol(s) => write!(f, "{s}"),
            Expr::Number(v) => write!(f, "{v}"),
            Expr::Query => f.write_str("?"),
            Expr::Keyword(k) => write!(f, ":{k}"),
            Expr::Call { head, args } => {
                write!(f, "({head}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl Display for ContextExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            ContextExpr::Inherit => f.write_str("context"),
            ContextExpr::Typed(ty) => write!(f, "({ty} context)"),
            ContextExpr::Anchor(a) => write!(f, "{a}"),
            ContextExpr::Relation { head, args, strip } => {
                write!(f, "({head}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                if *strip {
                    f.write_str(" :strip t")?;
                }
                f.write_str(")")
            }
        }
    }
}

fn list(f: &mut Formatter<'_>, exprs: &[Expr]) -> fmt::Result {
    for e in exprs {
        write!(f, " {e}")?;
    }
    Ok(())
}

impl Display for ConstituentSpec {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.name)?;
        if let Some(ctx) = &self.context {
            write!(f, " {ctx}")?;
        }
        if !self.constraints.is_empty() {
            f.write_str(" :constraints")?;
            list(f, &self.constraints)?;
        }
        f.write_str(")")
    }
}

impl Display for Clause {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Clause::Constraints { plural, exprs } => {
                f.write_str(if *plural { "(:constraints" } else { "(:constraint" })?;
                list(f, exprs)?;
                f.write_str(")")
            }
            Clause::ElementConstraints { plural, exprs } => {
                f.write_str(if *plural {
                    "(:element-constraints"
                } else {
                    "(:element-constraint"
                })?;
                list(f, exprs)?;
                f.write_str(")")
            }
            Clause::AdditionalSlots(slots) => {
                f.write_str("(:additional-slots")?;
                for (name, e) in slots {
                    write!(f, " ({name} {e})")?;
                }
                f.write_str(")")
            }
            Clause::Null(names) => {
                f.write_str("(:null")?;
                for n in names {
                    write!(f, " {n}")?;
                }
                f.write_str(")")
            }
            Clause::Largest(v) => write!(f, "(:largest {v})"),
            Clause::Constituent(spec) => write!(f, "{spec}"),
        }
    }
}

impl Display for Rule {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{} ->", self.lhs)?;
        match &self.kind {
            RuleKind::Ordinary { rhs } => {
                for n in rhs {
                    write!(f, " {n}")?;
                }
            }
            RuleKind::Set { element } => write!(f, " Set ({element})")?,
        }
        for c in &self.clauses {
            write!(f, "\n  {c}")?;
        }
        f.write_str(";")
    }
}

impl Display for Grammar {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rules.iter().enumerate() {
            if i > 0 {
                f.write_str("\n\n")?;
            }
            write!(f, "{r}")?;
        }
        if !self.rules.is_empty() {
            f.write_str("\n")?;
        }
        Ok(())
    }
}
