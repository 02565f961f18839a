use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    None,
    Deg,
    Rad,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Ident(Ident),
    /// The candidate point inside a `solve_on_curve` function argument.
    Placeholder(Span),
    Number {
        value: f64,
        unit: Unit,
        text: String,
        span: Span,
    },
    Call {
        name: Ident,
        args: Vec<Expr>,
    },
}

impl Expr {
    pub fn span(&self) -> Span {
        match self {
            Expr::Ident(id) => id.span,
            Expr::Placeholder(span) => *span,
            Expr::Number { span, .. } => *span,
            Expr::Call { name, .. } => name.span,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Gt,
    Le,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Gt => ">",
            CmpOp::Le => "<=",
            CmpOp::Ge => ">=",
        }
    }

    pub fn holds(self, lhs: f64, rhs: f64) -> bool {
        match self {
            CmpOp::Lt => lhs < rhs,
            CmpOp::Gt => lhs > rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Ge => lhs >= rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Constraint {
    Acute,
    Scalene,
    ObtuseAt(Ident),
    /// Two sides sharing the apex vertex, e.g. `isosceles AB AC`.
    Isosceles(Ident, Ident),
    MinAngle(Expr),
    /// `order AB < AC`
    Order(Ident, Ident),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Guard {
    Predicate(Expr),
    Compare { lhs: Expr, op: CmpOp, rhs: Expr },
}

#[derive(Debug, Clone, PartialEq)]
pub enum StmtKind {
    FreeTriangle {
        names: [Ident; 3],
        constraints: Vec<Constraint>,
    },
    FreePoint {
        name: Ident,
        locus: Expr,
    },
    Let {
        name: Ident,
        value: Expr,
    },
    Require(Guard),
    Assert(Expr),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statement {
    pub kind: StmtKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SceneAst {
    /// `# key: value` lines from the leading comment block.
    pub metadata: Vec<(String, String)>,
    pub statements: Vec<Statement>,
}

impl SceneAst {
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// A copy with every span zeroed, for structural comparison.
    pub fn without_spans(&self) -> SceneAst {
        fn id(i: &Ident) -> Ident {
            Ident {
                name: i.name.clone(),
                span: Span::default(),
            }
        }
        fn expr(e: &Expr) -> Expr {
            match e {
                Expr::Ident(i) => Expr::Ident(id(i)),
                Expr::Placeholder(_) => Expr::Placeholder(Span::default()),
                Expr::Number { value, unit, text, .. } => Expr::Number {
                    value: *value,
                    unit: *unit,
                    text: text.clone(),
                    span: Span::default(),
                },
                Expr::Call { name, args } => Expr::Call {
                    name: id(name),
                    args: args.iter().map(expr).collect(),
                },
            }
        }
        let statements = self
            .statements
            .iter()
            .map(|s| Statement {
                span: Span::default(),
                kind: match &s.kind {
                    StmtKind::FreeTriangle { names, constraints } => StmtKind::FreeTriangle {
                        names: [id(&names[0]), id(&names[1]), id(&names[2])],
                        constraints: constraints
                            .iter()
                            .map(|c| match c {
                                Constraint::Acute => Constraint::Acute,
                                Constraint::Scalene => Constraint::Scalene,
                                Constraint::ObtuseAt(v) => Constraint::ObtuseAt(id(v)),
                                Constraint::Isosceles(a, b) => Constraint::Isosceles(id(a), id(b)),
                                Constraint::MinAngle(e) => Constraint::MinAngle(expr(e)),
                                Constraint::Order(a, b) => Constraint::Order(id(a), id(b)),
                            })
                            .collect(),
                    },
                    StmtKind::FreePoint { name, locus } => StmtKind::FreePoint {
                        name: id(name),
                        locus: expr(locus),
                    },
                    StmtKind::Let { name, value } => StmtKind::Let {
                        name: id(name),
                        value: expr(value),
                    },
                    StmtKind::Require(Guard::Predicate(e)) => StmtKind::Require(Guard::Predicate(expr(e))),
                    StmtKind::Require(Guard::Compare { lhs, op, rhs }) => StmtKind::Require(Guard::Compare {
                        lhs: expr(lhs),
                        op: *op,
                        rhs: expr(rhs),
                    }),
                    StmtKind::Assert(e) => StmtKind::Assert(expr(e)),
                },
            })
            .collect();
        SceneAst {
            metadata: self.metadata.clone(),
            statements,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Ident(i) => write!(f, "{}", i.name),
            Expr::Placeholder(_) => write!(f, "_"),
            Expr::Number { text, .. } => write!(f, "{text}"),
            Expr::Call { name, args } => {
                write!(f, "{}(", name.name)?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Acute => write!(f, "acute"),
            Constraint::Scalene => write!(f, "scalene"),
            Constraint::ObtuseAt(v) => write!(f, "obtuse_at {}", v.name),
            Constraint::Isosceles(a, b) => write!(f, "isosceles {} {}", a.name, b.name),
            Constraint::MinAngle(e) => write!(f, "min_angle {e}"),
            Constraint::Order(a, b) => write!(f, "order {} < {}", a.name, b.name),
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            StmtKind::FreeTriangle { names, constraints } => {
                write!(f, "free triangle {} {} {}", names[0].name, names[1].name, names[2].name)?;
                if !constraints.is_empty() {
                    let parts: Vec<String> = constraints.iter().map(|c| c.to_string()).collect();
                    write!(f, " {{ {} }}", parts.join(", "))?;
                }
                Ok(())
            }
            StmtKind::FreePoint { name, locus } => write!(f, "free point {} on {locus}", name.name),
            StmtKind::Let { name, value } => write!(f, "let {} = {value}", name.name),
            StmtKind::Require(Guard::Predicate(e)) => write!(f, "require {e}"),
            StmtKind::Require(Guard::Compare { lhs, op, rhs }) => {
                write!(f, "require {lhs} {} {rhs}", op.symbol())
            }
            StmtKind::Assert(e) => write!(f, "assert {e}"),
        }
    }
}

/// Canonical source text; parsing it yields the same AST up to spans.
pub fn pretty_print(ast: &SceneAst) -> String {
    let mut out = String::new();
    for (k, v) in &ast.metadata {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    if !ast.metadata.is_empty() {
        out.push('\n');
    }
    for s in &ast.statements {
        out.push_str(&s.to_string());
        out.push('\n');
    }
    out
}
