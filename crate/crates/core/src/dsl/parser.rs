use std::collections::HashSet;

use super::ast::*;
use super::lexer::{lex_line, Tok, Token};
use super::resolve::{is_operation, RESERVED};
use super::ParseError;

const STATEMENT_KEYWORDS: [&str; 4] = ["free", "let", "require", "assert"];

struct LineParser<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end_column: usize,
    declared: &'a HashSet<String>,
    /// Set while parsing the function argument of `solve_on_curve`.
    placeholder_ok: bool,
}

impl<'a> LineParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> Span {
        match self.toks.get(self.pos) {
            Some(t) => Span {
                line: t.line,
                column: t.column,
            },
            None => Span {
                line: self.line,
                column: self.end_column,
            },
        }
    }

    fn error(&self, message: impl Into<String>, expected: &[&str]) -> ParseError {
        let span = self.here();
        let found = match self.peek() {
            Some(t) => t.describe(),
            None => "end of line".into(),
        };
        ParseError {
            line: span.line,
            column: span.column,
            message: format!("{}, found {found}", message.into()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}"), &[what]))
        }
    }

    fn ident(&mut self, what: &str) -> Result<Ident, ParseError> {
        let span = self.here();
        match self.peek() {
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                self.pos += 1;
                Ok(Ident { name, span })
            }
            _ => Err(self.error(format!("expected {what}"), &[what])),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        let what = format!("`{kw}`");
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(format!("expected {what}"), &[&what])),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("expected end of statement", &["end of line"]))
        }
    }

    /// A name being bound by this statement.
    fn binder(&mut self) -> Result<Ident, ParseError> {
        let id = self.ident("identifier")?;
        if id.name == "_" || RESERVED.contains(&id.name.as_str()) || is_operation(&id.name) {
            return Err(ParseError::at(id.span, format!("`{}` is reserved and cannot be bound", id.name)));
        }
        if self.declared.contains(&id.name) {
            return Err(ParseError::at(id.span, format!("`{}` is already bound", id.name)));
        }
        Ok(id)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let span = self.here();
        match self.peek().cloned() {
            Some(Tok::Number { value, text }) => {
                self.pos += 1;
                let unit = if text.ends_with("deg") {
                    Unit::Deg
                } else if text.ends_with("rad") {
                    Unit::Rad
                } else {
                    Unit::None
                };
                Ok(Expr::Number { value, unit, text, span })
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::LParen) {
                    if !is_operation(&name) {
                        return Err(ParseError::at(span, format!("unknown operation `{name}`")));
                    }
                    self.pos += 1;
                    let mut args = Vec::new();
                    if self.peek() != Some(&Tok::RParen) {
                        loop {
                            let saved = self.placeholder_ok;
                            self.placeholder_ok = saved || (name == "solve_on_curve" && args.len() == 1);
                            let arg = self.expr();
                            self.placeholder_ok = saved;
                            args.push(arg?);
                            match self.peek() {
                                Some(Tok::Comma) => self.pos += 1,
                                Some(Tok::RParen) => break,
                                _ => return Err(self.error("expected `,` or `)`", &["`,`", "`)`"])),
                            }
                        }
                    }
                    self.expect(Tok::RParen, "`)`")?;
                    return Ok(Expr::Call {
                        name: Ident { name, span },
                        args,
                    });
                }
                if name == "_" {
                    if !self.placeholder_ok {
                        return Err(ParseError::at(
                            span,
                            "`_` is only allowed in the function argument of solve_on_curve",
                        ));
                    }
                    return Ok(Expr::Placeholder(span));
                }
                if !self.declared.contains(&name) && !RESERVED.contains(&name.as_str()) {
                    return Err(ParseError::at(span, format!("undeclared identifier `{name}`")));
                }
                Ok(Expr::Ident(Ident { name, span }))
            }
            _ => Err(self.error("expected expression", &["identifier", "number", "call"])),
        }
    }

    fn call(&mut self) -> Result<Expr, ParseError> {
        let at = self.pos;
        let e = self.expr()?;
        if !matches!(e, Expr::Call { .. }) {
            self.pos = at;
            return Err(self.error("expected an operation call", &["call"]));
        }
        Ok(e)
    }

    fn constraint(&mut self) -> Result<Constraint, ParseError> {
        let kw = self.ident("constraint")?;
        Ok(match kw.name.as_str() {
            "acute" => Constraint::Acute,
            "scalene" => Constraint::Scalene,
            "obtuse_at" => Constraint::ObtuseAt(self.ident("vertex name")?),
            "isosceles" => {
                let a = self.ident("side name")?;
                Constraint::Isosceles(a, self.ident("side name")?)
            }
            "min_angle" => {
                let e = self.expr()?;
                if !matches!(e, Expr::Number { .. }) {
                    return Err(ParseError::at(e.span(), "min_angle takes an angle literal"));
                }
                Constraint::MinAngle(e)
            }
            "order" => {
                let a = self.ident("side name")?;
                self.expect(Tok::Lt, "`<`")?;
                Constraint::Order(a, self.ident("side name")?)
            }
            other => {
                return Err(ParseError {
                    line: kw.span.line,
                    column: kw.span.column,
                    message: format!("unknown constraint `{other}`"),
                    expected: ["acute", "obtuse_at", "scalene", "isosceles", "min_angle", "order"]
                        .iter()
                        .map(|s| s.to_string())
                        .collect(),
                })
            }
        })
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        let span = self.here();
        let head = match self.peek() {
            Some(Tok::Ident(s)) if STATEMENT_KEYWORDS.contains(&s.as_str()) => s.clone(),
            _ => return Err(self.error("expected a statement", &["`free`", "`let`", "`require`", "`assert`"])),
        };
        self.pos += 1;
        let kind = match head.as_str() {
            "free" => match self.peek() {
                Some(Tok::Ident(s)) if s == "triangle" => {
                    self.pos += 1;
                    let a = self.binder()?;
                    let b = self.binder()?;
                    let c = self.binder()?;
                    for (x, y) in [(&a, &b), (&a, &c), (&b, &c)] {
                        if x.name == y.name {
                            return Err(ParseError::at(y.span, format!("`{}` is already bound", y.name)));
                        }
                    }
                    let mut constraints = Vec::new();
                    if self.peek() == Some(&Tok::LBrace) {
                        self.pos += 1;
                        if self.peek() != Some(&Tok::RBrace) {
                            loop {
                                constraints.push(self.constraint()?);
                                match self.peek() {
                                    Some(Tok::Comma) => self.pos += 1,
                                    Some(Tok::RBrace) => break,
                                    _ => return Err(self.error("expected `,` or `}`", &["`,`", "`}`"])),
                                }
                            }
                        }
                        self.expect(Tok::RBrace, "`}`")?;
                    }
                    StmtKind::FreeTriangle {
                        names: [a, b, c],
                        constraints,
                    }
                }
                Some(Tok::Ident(s)) if s == "point" => {
                    self.pos += 1;
                    let name = self.binder()?;
                    self.keyword("on")?;
                    let locus = self.expr()?;
                    StmtKind::FreePoint { name, locus }
                }
                _ => return Err(self.error("expected `triangle` or `point`", &["`triangle`", "`point`"])),
            },
            "let" => {
                let name = self.binder()?;
                self.expect(Tok::Assign, "`=`")?;
                let value = self.call()?;
                StmtKind::Let { name, value }
            }
            "require" => {
                let lhs = self.expr()?;
                let op = match self.peek() {
                    Some(Tok::Lt) => Some(CmpOp::Lt),
                    Some(Tok::Gt) => Some(CmpOp::Gt),
                    Some(Tok::Le) => Some(CmpOp::Le),
                    Some(Tok::Ge) => Some(CmpOp::Ge),
                    _ => None,
                };
                match op {
                    Some(op) => {
                        self.pos += 1;
                        let rhs = self.expr()?;
                        StmtKind::Require(Guard::Compare { lhs, op, rhs })
                    }
                    None => {
                        if !matches!(lhs, Expr::Call { .. }) {
                            return Err(ParseError::at(lhs.span(), "expected a predicate call"));
                        }
                        StmtKind::Require(Guard::Predicate(lhs))
                    }
                }
            }
            _ => StmtKind::Assert(self.call()?),
        };
        self.finish()?;
        Ok(Statement { kind, span })
    }
}

fn bound_names(kind: &StmtKind) -> Vec<String> {
    match kind {
        StmtKind::FreeTriangle { names, .. } => names.iter().map(|n| n.name.clone()).collect(),
        StmtKind::FreePoint { name, .. } | StmtKind::Let { name, .. } => vec![name.name.clone()],
        _ => Vec::new(),
    }
}

/// Parses a scene. Identifiers must be bound before use.
pub fn parse(source: &str) -> Result<SceneAst, ParseError> {
    let mut ast = SceneAst::default();
    let mut declared = HashSet::new();
    let mut in_header = true;
    for (k, raw) in source.lines().enumerate() {
        let line = k + 1;
        let trimmed = raw.trim();
        if in_header {
            if let Some(comment) = trimmed.strip_prefix('#') {
                if let Some((key, value)) = comment.split_once(':') {
                    let key = key.trim();
                    if !key.is_empty() && key.chars().all(|c| c.is_alphanumeric() || c == '_') {
                        ast.metadata.push((key.to_string(), value.trim().to_string()));
                    }
                }
                continue;
            }
        }
        let toks = lex_line(raw, line)?;
        if toks.is_empty() {
            continue;
        }
        in_header = false;
        let mut p = LineParser {
            toks: &toks,
            pos: 0,
            line,
            end_column: raw.chars().count() + 1,
            declared: &declared,
            placeholder_ok: false,
        };
        let stmt = p.statement()?;
        declared.extend(bound_names(&stmt.kind));
        ast.statements.push(stmt);
    }
    Ok(ast)
}
