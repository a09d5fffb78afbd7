//! Reader for the rule notation: `LHS -> RHS... (clause)... ;`.

use thiserror::Error;

use super::ast::{Clause, ConstituentSpec, ContextExpr, Expr, Grammar, Rule, RuleKind, Symbol};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{line}:{column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Semi,
    Atom(String),
}

fn err<T>(pos: Pos, message: impl Into<String>) -> Result<T, SyntaxError> {
    Err(SyntaxError {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    })
}

fn tokenize(src: &str) -> Vec<(Tok, Pos)> {
    let mut out = Vec::new();
    for (ln, line) in src.lines().enumerate() {
        if line.trim_start().starts_with("*****") {
            continue;
        }
        let mut chars = line.char_indices().peekable();
        while let Some((i, c)) = chars.next() {
            let pos = Pos {
                line: ln + 1,
                column: line[..i].chars().count() + 1,
            };
            match c {
                '(' => out.push((Tok::Open, pos)),
                ')' => out.push((Tok::Close, pos)),
                ';' => out.push((Tok::Semi, pos)),
                c if c.is_whitespace() => {}
                _ => {
                    let mut end = i + c.len_utf8();
                    while let Some(&(j, d)) = chars.peek() {
                        if d.is_whitespace() || d == '(' || d == ')' || d == ';' {
                            break;
                        }
                        end = j + d.len_utf8();
                        chars.next();
                    }
                    out.push((Tok::Atom(line[i..end].to_string()), pos));
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }

    fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a, _) => Some(a),
            Sexp::List(..) => None,
        }
    }
}

struct Reader {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    eof: Pos,
}

impl Reader {
    fn peek(&self) -> Option<&(Tok, Pos)> {
        self.toks.get(self.at)
    }

    fn list(&mut self, open: Pos) -> Result<Sexp, SyntaxError> {
        let mut items = Vec::new();
        loop {
            let Some((tok, pos)) = self.toks.get(self.at).cloned() else {
                return err(open, "unclosed parenthesis");
            };
            self.at += 1;
            match tok {
                Tok::Close => return Ok(Sexp::List(items, open)),
                Tok::Open => items.push(self.list(pos)?),
                Tok::Atom(a) => items.push(Sexp::Atom(a, pos)),
                Tok::Semi => return err(pos, "`;` inside parentheses"),
            }
        }
    }

    /// Top-level items up to the terminating `;`.
    fn rule_items(&mut self) -> Result<Vec<Sexp>, SyntaxError> {
        let mut items = Vec::new();
        loop {
            let Some((tok, pos)) = self.toks.get(self.at).cloned() else {
                let at = items.first().map_or(self.eof, Sexp::pos);
                return err(at, "rule is missing its terminating `;`");
            };
            self.at += 1;
            match tok {
                Tok::Semi => return Ok(items),
                Tok::Open => items.push(self.list(pos)?),
                Tok::Close => return err(pos, "unbalanced `)`"),
                Tok::Atom(a) => items.push(Sexp::Atom(a, pos)),
            }
        }
    }
}

fn is_keyword(s: &Sexp, names: &[&str]) -> bool {
    s.atom()
        .is_some_and(|a| names.iter().any(|n| a.eq_ignore_ascii_case(n)))
}

fn expr(s: &Sexp) -> Result<Expr, SyntaxError> {
    match s {
        Sexp::Atom(a, _) if a == "?" => Ok(Expr::Query),
        Sexp::Atom(a, _) if a.starts_with(':') && a.len() > 1 => Ok(Expr::Keyword(a[1..].to_ascii_lowercase())),
        Sexp::Atom(a, _) => match a.parse::<f64>() {
            Ok(v)
                if a.starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '+' || c == '.')
                    && a != "-"
                    && a != "+" =>
            {
                Ok(Expr::Number(v))
            }
            _ => Ok(Expr::Symbol(Symbol::new(a.as_str()))),
        },
        Sexp::List(items, pos) => {
            let Some((head, rest)) = items.split_first() else {
                return err(*pos, "empty expression");
            };
            let Some(h) = head.atom() else {
                return err(head.pos(), "expression head must be a name");
            };
            if h.starts_with(':') || h == "?" {
                return err(head.pos(), format!("`{h}` cannot head an expression"));
            }
            Ok(Expr::Call {
                head: Symbol::new(h),
                args: rest.iter().map(expr).collect::<Result<_, _>>()?,
            })
        }
    }
}

fn symbol(s: &Sexp, what: &str) -> Result<Symbol, SyntaxError> {
    match s {
        Sexp::Atom(a, pos) => {
            if a.starts_with(':') || a == "?" || a == "->" {
                err(*pos, format!("expected {what}, found `{a}`"))
            } else {
                Ok(Symbol::new(a.as_str()))
            }
        }
        Sexp::List(_, pos) => err(*pos, format!("expected {what}, found a list")),
    }
}

fn context_expr(s: &Sexp) -> Result<ContextExpr, SyntaxError> {
    match s {
        Sexp::Atom(a, _) if a.eq_ignore_ascii_case("context") => Ok(ContextExpr::Inherit),
        Sexp::Atom(..) => Ok(ContextExpr::Anchor(symbol(s, "an anchor name")?)),
        Sexp::List(items, pos) => {
            if items.iter().any(|i| i.atom() == Some("?")) {
                let head = symbol(&items[0], "a relation name")?;
                let mut args = Vec::new();
                let mut strip = false;
                let mut k = 1;
                while k < items.len() {
                    if is_keyword(&items[k], &[":strip"]) {
                        let value = items.get(k + 1).and_then(Sexp::atom);
                        strip = !value.is_some_and(|v| v.eq_ignore_ascii_case("nil"));
                        k += if value.is_some() { 2 } else { 1 };
                        continue;
                    }
                    if let Some(a) = items[k].atom().filter(|a| a.starts_with(':')) {
                        return err(items[k].pos(), format!("unknown relation option `{a}`"));
                    }
                    args.push(expr(&items[k])?);
                    k += 1;
                }
                Ok(ContextExpr::Relation { head, args, strip })
            } else if items.len() == 2 && is_keyword(&items[1], &["context"]) {
                Ok(ContextExpr::Typed(symbol(&items[0], "a type name")?))
            } else {
                err(*pos, "context form must contain `?` or be `(Type context)`")
            }
        }
    }
}

fn exprs(items: &[Sexp]) -> Result<Vec<Expr>, SyntaxError> {
    items.iter().map(expr).collect()
}

fn clause(s: &Sexp) -> Result<Clause, SyntaxError> {
    let Sexp::List(items, pos) = s else {
        return err(s.pos(), "expected a parenthesized clause");
    };
    let Some((head, rest)) = items.split_first() else {
        return err(*pos, "empty clause");
    };
    let h = head.atom().map(str::to_ascii_lowercase);
    match h.as_deref() {
        Some(":constraints") | Some(":constraint") => Ok(Clause::Constraints {
            plural: h.as_deref() == Some(":constraints"),
            exprs: exprs(rest)?,
        }),
        Some(":element-constraints") | Some(":element-constraint") => Ok(Clause::ElementConstraints {
            plural: h.as_deref() == Some(":element-constraints"),
            exprs: exprs(rest)?,
        }),
        Some(":additional-slots") => {
            let mut slots = Vec::new();
            for slot in rest {
                match slot {
                    Sexp::List(pair, _) if pair.len() == 2 => {
                        slots.push((symbol(&pair[0], "a slot name")?, expr(&pair[1])?));
                    }
                    other => return err(other.pos(), "slot must be `(name expression)`"),
                }
            }
            Ok(Clause::AdditionalSlots(slots))
        }
        Some(":null") => Ok(Clause::Null(
            rest.iter()
                .map(|s| symbol(s, "a constituent name"))
                .collect::<Result<_, _>>()?,
        )),
        Some(":largest") => match rest {
            [v] => Ok(Clause::Largest(expr(v)?)),
            _ => err(*pos, "`:largest` takes one value"),
        },
        Some(k) if k.starts_with(':') => err(head.pos(), format!("unknown clause keyword `{k}`")),
        _ => constituent(head, rest).map(Clause::Constituent),
    }
}

fn constituent(head: &Sexp, rest: &[Sexp]) -> Result<ConstituentSpec, SyntaxError> {
    let name = symbol(head, "a constituent name")?;
    let mut k = 0;
    let mut context = None;
    if let Some(first) = rest.first() {
        if !is_keyword(first, &[":constraints", ":constraint"]) {
            context = Some(context_expr(first)?);
            k = 1;
        }
    }
    let mut constraints = Vec::new();
    if let Some(kw) = rest.get(k) {
        if !is_keyword(kw, &[":constraints", ":constraint"]) {
            return err(kw.pos(), "expected `:constraints` after the context form");
        }
        constraints = exprs(&rest[k + 1..])?;
    }
    Ok(ConstituentSpec {
        name,
        context,
        constraints,
    })
}

fn rule(items: Vec<Sexp>) -> Result<Rule, SyntaxError> {
    let first = &items[0];
    let lhs = symbol(first, "a rule name")?;
    match items.get(1) {
        Some(Sexp::Atom(a, _)) if a == "->" => {}
        Some(other) => return err(other.pos(), "expected `->` after the rule name"),
        None => return err(first.pos(), "expected `->` after the rule name"),
    }
    let body = &items[2..];
    let rhs_len = body.iter().take_while(|s| s.atom().is_some()).count();
    let (kind, clauses) = if rhs_len == 1 && body[0].atom().is_some_and(|a| a.eq_ignore_ascii_case("set")) {
        match body.get(1) {
            Some(Sexp::List(elem, pos)) => {
                let [e] = elem.as_slice() else {
                    return err(*pos, "set rule takes exactly one element type");
                };
                (
                    RuleKind::Set {
                        element: symbol(e, "an element type")?,
                    },
                    &body[2..],
                )
            }
            _ => return err(body[0].pos(), "expected `(Element)` after `Set`"),
        }
    } else {
        let rhs = body[..rhs_len]
            .iter()
            .map(|s| symbol(s, "a constituent name"))
            .collect::<Result<_, _>>()?;
        (RuleKind::Ordinary { rhs }, &body[rhs_len..])
    };
    Ok(Rule {
        lhs,
        kind,
        clauses: clauses.iter().map(clause).collect::<Result<_, _>>()?,
    })
}

/// Parses rule text without semantic checks.
pub fn parse_rules(src: &str) -> Result<Grammar, SyntaxError> {
    let toks = tokenize(src);
    let eof = Pos {
        line: src.lines().count().max(1),
        column: 1,
    };
    let mut reader = Reader { toks, at: 0, eof };
    let mut grammar = Grammar::default();
    while let Some((_, pos)) = reader.peek().cloned() {
        let items = reader.rule_items()?;
        if items.is_empty() {
            continue;
        }
        grammar.lines.push(items[0].pos().line.max(pos.line));
        grammar.rules.push(rule(items)?);
    }
    Ok(grammar)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_ordinary_and_set_rules() {
        let g = parse_rules(
            "A -> B C (B) (C (touch B ?) :constraints (> (size C) 2));\n\
             C -> set (Line) (:constraint horiz-aligned) (:largest t);",
        )
        .unwrap();
        assert_eq!(g.rules.len(), 2);
        assert_eq!(g.lines, vec![1, 2]);
        let a = &g.rules[0];
        assert_eq!(a.constituents(), &[Symbol::new("B"), Symbol::new("C")]);
        let c = a.constituent_clause(&Symbol::new("c")).unwrap();
        assert!(matches!(c.context, Some(ContextExpr::Relation { .. })));
        assert_eq!(c.constraints.len(), 1);
        assert!(g.rules[1].is_set());
        assert!(g.rules[1].largest());
    }

    #[test]
    fn skips_star_comments() {
        let g = parse_rules("***** <X> *****\nX -> Line ;").unwrap();
        assert_eq!(g.rules.len(), 1);
        assert_eq!(g.lines, vec![2]);
    }

    #[test]
    fn strip_option_is_separated() {
        let g = parse_rules("A -> L (L (below ? M :strip t));").unwrap();
        let spec = g.rules[0].constituent_clause(&Symbol::new("L")).unwrap();
        match &spec.context {
            Some(ContextExpr::Relation { args, strip, .. }) => {
                assert!(strip);
                assert_eq!(args, &vec![Expr::Query, Expr::sym("M")]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reports_positions() {
        let e = parse_rules("A -> B\n  (B (touch X ?)))\n;").unwrap_err();
        assert_eq!((e.line, e.column), (2, 18));
        let e = parse_rules("A -> B (B").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_rules("A B ;").unwrap_err();
        assert!(e.message.contains("->"));
    }

    #[test]
    fn numbers_and_keywords() {
        assert_eq!(
            expr(&Sexp::Atom("2".into(), Pos { line: 1, column: 1 })).unwrap(),
            Expr::Number(2.0)
        );
        assert_eq!(
            expr(&Sexp::Atom("-1.5".into(), Pos { line: 1, column: 1 })).unwrap(),
            Expr::Number(-1.5)
        );
        assert_eq!(
            expr(&Sexp::Atom("<".into(), Pos { line: 1, column: 1 })).unwrap(),
            Expr::sym("<")
        );
        assert_eq!(
            expr(&Sexp::Atom("*tiny*".into(), Pos { line: 1, column: 1 })).unwrap(),
            Expr::sym("*tiny*")
        );
    }
}
