use std::collections::HashMap;
use std::fmt;

use super::ast::*;
use super::ParseError;
use crate::construct::{CenterKind, Through};
use crate::verify::sample::TriangleConstraint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ty {
    Point,
    Line,
    Circle,
    Scalar,
    Angle,
    Bool,
    /// A one-parameter curve piece: `segment`, `ray` or `arc`.
    Path,
    Region,
    Incircle,
    Mixtilinear,
    Kind,
    Mode,
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Ty::Point => "Point",
            Ty::Line => "Line",
            Ty::Circle => "Circle",
            Ty::Scalar => "Scalar",
            Ty::Angle => "Angle",
            Ty::Bool => "Predicate",
            Ty::Path => "Path",
            Ty::Region => "Region",
            Ty::Incircle => "Incircle",
            Ty::Mixtilinear => "Mixtilinear",
            Ty::Kind => "CenterKind",
            Ty::Mode => "Mode",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Midpoint,
    Foot,
    Reflect,
    Antipode,
    LineLineIntersect,
    SecondIntersection,
    TriangleCenter,
    ArcMidpoint,
    TangentsFrom,
    SecondTangentPoint,
    SolveOnCurve,
    Center,
    TouchD,
    TouchE,
    TouchF,
    TouchK,
    TouchL,
    TouchM,
    Line,
    TangentLine,
    Through,
    IsogonalLine,
    RotateRay,
    Circumcircle,
    Circle,
    CircleOf,
    Incircle,
    Excircle,
    Mixtilinear,
    Dist,
    Radius,
    DirectedRatio,
    SignedArea,
    AngleAt,
    Diff,
    Segment,
    Ray,
    Arc,
    Interior,
    IsCollinear,
    IsConcyclic,
    IsPerpendicular,
    IsParallel,
    Convex,
    Inside,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AssertKind {
    Collinear,
    Concyclic,
    Concurrent,
    Perpendicular,
    Parallel,
    OnCircle,
    OnLine,
    Tangent,
    EqualLength,
    EqualAngle,
    RatioEquals,
    MidpointOf,
    Fixed,
}

impl AssertKind {
    pub const ALL: [AssertKind; 13] = [
        AssertKind::Collinear,
        AssertKind::Concyclic,
        AssertKind::Concurrent,
        AssertKind::Perpendicular,
        AssertKind::Parallel,
        AssertKind::OnCircle,
        AssertKind::OnLine,
        AssertKind::Tangent,
        AssertKind::EqualLength,
        AssertKind::EqualAngle,
        AssertKind::RatioEquals,
        AssertKind::MidpointOf,
        AssertKind::Fixed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AssertKind::Collinear => "collinear",
            AssertKind::Concyclic => "concyclic",
            AssertKind::Concurrent => "concurrent",
            AssertKind::Perpendicular => "perpendicular",
            AssertKind::Parallel => "parallel",
            AssertKind::OnCircle => "on_circle",
            AssertKind::OnLine => "on_line",
            AssertKind::Tangent => "tangent",
            AssertKind::EqualLength => "equal_length",
            AssertKind::EqualAngle => "equal_angle",
            AssertKind::RatioEquals => "ratio_equals",
            AssertKind::MidpointOf => "midpoint_of",
            AssertKind::Fixed => "fixed",
        }
    }

    pub fn from_name(name: &str) -> Option<AssertKind> {
        AssertKind::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Parameter types; the last entry repeats when `variadic_min` is set.
    fn params(self) -> (&'static [&'static [Ty]], Option<usize>) {
        use Ty::*;
        match self {
            AssertKind::Collinear => (&[&[Point]], Some(3)),
            AssertKind::Concyclic => (&[&[Point], &[Point], &[Point], &[Point]], None),
            AssertKind::Concurrent => (&[&[Line], &[Line], &[Line]], None),
            AssertKind::Perpendicular | AssertKind::Parallel => (&[&[Line], &[Line]], None),
            AssertKind::OnCircle => (&[&[Point], &[Circle]], None),
            AssertKind::OnLine => (&[&[Point], &[Line]], None),
            AssertKind::Tangent => (&[&[Line, Circle], &[Circle]], None),
            AssertKind::EqualLength => (&[&[Point], &[Point], &[Point], &[Point]], None),
            AssertKind::EqualAngle => (&[&[Angle], &[Angle]], None),
            AssertKind::RatioEquals => (&[&[Scalar], &[Scalar]], None),
            AssertKind::MidpointOf => (&[&[Point], &[Point], &[Point]], None),
            AssertKind::Fixed => (&[&[Point, Scalar, Angle], &[Point]], None),
        }
    }
}

#[derive(Clone, Copy)]
enum Class {
    Construction,
    Predicate,
}

struct OpDef {
    name: &'static str,
    op: Op,
    class: Class,
    params: &'static [&'static [Ty]],
    variadic_min: Option<usize>,
    ret: Ty,
}

macro_rules! op {
    ($name:literal, $op:ident, [$($p:expr),*], $ret:ident) => {
        OpDef { name: $name, op: Op::$op, class: Class::Construction, params: &[$($p),*], variadic_min: None, ret: Ty::$ret }
    };
}

const P: &[Ty] = &[Ty::Point];
const L: &[Ty] = &[Ty::Line];
const C: &[Ty] = &[Ty::Circle];
const S: &[Ty] = &[Ty::Scalar];
const A: &[Ty] = &[Ty::Angle];

const OPS: &[OpDef] = &[
    op!("midpoint", Midpoint, [P, P], Point),
    op!("foot", Foot, [P, L], Point),
    op!("reflect", Reflect, [P, L], Point),
    op!("antipode", Antipode, [P, C], Point),
    op!("line_line_intersect", LineLineIntersect, [L, L], Point),
    op!("second_intersection", SecondIntersection, [L, C, P], Point),
    op!("triangle_center", TriangleCenter, [P, P, P, &[Ty::Kind]], Point),
    op!("arc_midpoint", ArcMidpoint, [C, P, P, P], Point),
    op!("tangents_from", TangentsFrom, [C, P, S], Point),
    op!("second_tangent_point", SecondTangentPoint, [C, P, P], Point),
    op!("solve_on_curve", SolveOnCurve, [&[Ty::Path, Ty::Circle, Ty::Line], S, S, S], Point),
    op!("center", Center, [C], Point),
    op!("touch_D", TouchD, [&[Ty::Incircle]], Point),
    op!("touch_E", TouchE, [&[Ty::Incircle]], Point),
    op!("touch_F", TouchF, [&[Ty::Incircle]], Point),
    op!("touch_K", TouchK, [&[Ty::Mixtilinear]], Point),
    op!("touch_L", TouchL, [&[Ty::Mixtilinear]], Point),
    op!("touch_M", TouchM, [&[Ty::Mixtilinear]], Point),
    op!("line", Line, [P, P], Line),
    op!("tangent_line", TangentLine, [C, P], Line),
    op!("through", Through, [P, L, &[Ty::Mode]], Line),
    op!("isogonal_line", IsogonalLine, [P, P, P, L], Line),
    op!("rotate_ray", RotateRay, [P, P, A, S], Line),
    op!("circumcircle", Circumcircle, [P, P, P], Circle),
    op!("circle", Circle, [P, P], Circle),
    op!("circle_of", CircleOf, [&[Ty::Incircle, Ty::Mixtilinear]], Circle),
    op!("incircle", Incircle, [P, P, P], Incircle),
    op!("excircle", Excircle, [P, P, P, P], Incircle),
    op!("mixtilinear_incircle", Mixtilinear, [P, P, P], Mixtilinear),
    op!("dist", Dist, [P, P], Scalar),
    op!("radius", Radius, [C], Scalar),
    op!("directed_ratio", DirectedRatio, [P, P, P], Scalar),
    op!("signed_area", SignedArea, [P, P, P], Scalar),
    op!("angle_at", AngleAt, [P, P, P], Angle),
    op!("diff", Diff, [&[Ty::Scalar, Ty::Angle], &[Ty::Scalar, Ty::Angle]], Scalar),
    op!("segment", Segment, [P, P], Path),
    op!("ray", Ray, [P, P], Path),
    op!("arc", Arc, [C, P, P], Path),
    op!("interior", Interior, [P, P, P], Region),
    OpDef { name: "is_collinear", op: Op::IsCollinear, class: Class::Predicate, params: &[P], variadic_min: Some(3), ret: Ty::Bool },
    OpDef { name: "is_concyclic", op: Op::IsConcyclic, class: Class::Predicate, params: &[P, P, P, P], variadic_min: None, ret: Ty::Bool },
    OpDef { name: "is_perpendicular", op: Op::IsPerpendicular, class: Class::Predicate, params: &[L, L], variadic_min: None, ret: Ty::Bool },
    OpDef { name: "is_parallel", op: Op::IsParallel, class: Class::Predicate, params: &[L, L], variadic_min: None, ret: Ty::Bool },
    OpDef { name: "convex", op: Op::Convex, class: Class::Predicate, params: &[P], variadic_min: Some(3), ret: Ty::Bool },
    OpDef { name: "inside", op: Op::Inside, class: Class::Predicate, params: &[P, P], variadic_min: Some(4), ret: Ty::Bool },
];

/// Identifiers with a fixed meaning: center kinds and `through` modes.
pub const RESERVED: [&str; 10] = [
    "centroid",
    "circumcenter",
    "incenter",
    "orthocenter",
    "excenter_A",
    "excenter_B",
    "excenter_C",
    "symmedian_point",
    "parallel",
    "perpendicular",
];

impl Op {
    pub fn name(self) -> &'static str {
        OPS.iter().find(|d| d.op == self).map(|d| d.name).expect("every op is tabled")
    }
}

pub fn is_operation(name: &str) -> bool {
    OPS.iter().any(|d| d.name == name) || AssertKind::from_name(name).is_some()
}

/// A type-checked expression.
#[derive(Debug, Clone, PartialEq)]
pub enum TExpr {
    Slot(usize),
    Placeholder,
    Scalar(f64),
    Angle(f64),
    Kind(CenterKind),
    Mode(Through),
    Call { op: Op, args: Vec<TExpr>, span: Span },
}

#[derive(Debug, Clone, PartialEq)]
pub enum TGuard {
    Predicate(TExpr),
    Compare { lhs: TExpr, op: CmpOp, rhs: TExpr },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assertion {
    pub kind: AssertKind,
    pub args: Vec<TExpr>,
    /// For `fixed`: slot of the free point the value must not depend on.
    pub varying: Option<usize>,
    pub line: usize,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    FreeTriangle {
        slots: [usize; 3],
        constraints: Vec<TriangleConstraint>,
    },
    FreePoint {
        slot: usize,
        locus: TExpr,
    },
    Let {
        slot: usize,
        expr: TExpr,
    },
    Require(TGuard),
    Assert(Assertion),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub kind: NodeKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlotInfo {
    pub name: String,
    pub ty: Ty,
}

/// A resolved scene: one node per statement, in source order, so every
/// node's inputs precede it.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub metadata: Vec<(String, String)>,
    pub nodes: Vec<Node>,
    pub slots: Vec<SlotInfo>,
}

impl Scene {
    pub fn assertions(&self) -> impl Iterator<Item = &Assertion> {
        self.nodes.iter().filter_map(|n| match &n.kind {
            NodeKind::Assert(a) => Some(a),
            _ => None,
        })
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn free_point_slots(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .filter_map(|n| match n.kind {
                NodeKind::FreePoint { slot, .. } => Some(slot),
                _ => None,
            })
            .collect()
    }

    pub fn has_fixed(&self) -> bool {
        self.assertions().any(|a| a.kind == AssertKind::Fixed)
    }

    pub fn slot(&self, name: &str) -> Option<usize> {
        self.slots.iter().position(|s| s.name == name)
    }
}

struct Resolver {
    slots: Vec<SlotInfo>,
    by_name: HashMap<String, usize>,
}

enum Where {
    Let,
    Locus,
    Require,
    Nested,
}

fn err(span: Span, message: impl Into<String>) -> ParseError {
    ParseError::at(span, message)
}

impl Resolver {
    fn bind(&mut self, id: &Ident, ty: Ty) -> usize {
        let slot = self.slots.len();
        self.slots.push(SlotInfo { name: id.name.clone(), ty });
        self.by_name.insert(id.name.clone(), slot);
        slot
    }

    fn lookup(&self, id: &Ident) -> Result<(usize, Ty), ParseError> {
        self.by_name
            .get(&id.name)
            .map(|&s| (s, self.slots[s].ty))
            .ok_or_else(|| err(id.span, format!("undeclared identifier `{}`", id.name)))
    }

    /// Resolves `e` expecting one of `want`.
    fn expect(&self, e: &Expr, want: &[Ty], ctx: Where) -> Result<(TExpr, Ty), ParseError> {
        let (t, ty) = self.expr(e, ctx)?;
        if !want.contains(&ty) {
            if let (Expr::Number { unit: Unit::None, .. }, true) = (e, want.contains(&Ty::Angle)) {
                return Err(err(e.span(), "angle literal needs a `deg` or `rad` suffix"));
            }
            let names: Vec<String> = want.iter().map(|t| t.to_string()).collect();
            return Err(err(e.span(), format!("type mismatch: expected {}, found {ty}", names.join(" or "))));
        }
        Ok((t, ty))
    }

    fn expr(&self, e: &Expr, ctx: Where) -> Result<(TExpr, Ty), ParseError> {
        match e {
            Expr::Placeholder(_) => Ok((TExpr::Placeholder, Ty::Point)),
            Expr::Number { value, unit, .. } => Ok(match unit {
                Unit::None => (TExpr::Scalar(*value), Ty::Scalar),
                Unit::Deg => (TExpr::Angle(value.to_radians()), Ty::Angle),
                Unit::Rad => (TExpr::Angle(*value), Ty::Angle),
            }),
            Expr::Ident(id) => {
                if let Some(k) = CenterKind::from_name(&id.name) {
                    return Ok((TExpr::Kind(k), Ty::Kind));
                }
                match id.name.as_str() {
                    "parallel" => return Ok((TExpr::Mode(Through::Parallel), Ty::Mode)),
                    "perpendicular" => return Ok((TExpr::Mode(Through::Perpendicular), Ty::Mode)),
                    _ => {}
                }
                let (slot, ty) = self.lookup(id)?;
                Ok((TExpr::Slot(slot), ty))
            }
            Expr::Call { name, args } => {
                if AssertKind::from_name(&name.name).is_some() {
                    return Err(err(name.span, format!("`{}` is an assertion and may only follow `assert`", name.name)));
                }
                let def = OPS
                    .iter()
                    .find(|d| d.name == name.name)
                    .ok_or_else(|| err(name.span, format!("unknown operation `{}`", name.name)))?;
                match (def.class, &ctx) {
                    (Class::Predicate, Where::Require) => {}
                    (Class::Predicate, _) => {
                        return Err(err(name.span, format!("predicate `{}` may only follow `require`", name.name)))
                    }
                    _ => {}
                }
                if matches!(def.ret, Ty::Region) && !matches!(ctx, Where::Locus) {
                    return Err(err(name.span, "`interior` is only a free-point locus"));
                }
                let tys = self.args(name, args, def.params, def.variadic_min)?;
                let targs: Vec<TExpr> = tys.iter().map(|(t, _)| t.clone()).collect();
                self.extra_checks(def.op, name, args, &tys)?;
                Ok((
                    TExpr::Call {
                        op: def.op,
                        args: targs,
                        span: name.span,
                    },
                    def.ret,
                ))
            }
        }
    }

    fn args(
        &self,
        name: &Ident,
        args: &[Expr],
        params: &[&[Ty]],
        variadic_min: Option<usize>,
    ) -> Result<Vec<(TExpr, Ty)>, ParseError> {
        let arity_ok = match variadic_min {
            Some(min) => args.len() >= min,
            None => args.len() == params.len(),
        };
        if !arity_ok {
            let want = match variadic_min {
                Some(min) => format!("at least {min}"),
                None => params.len().to_string(),
            };
            return Err(err(
                name.span,
                format!("`{}` takes {want} arguments, found {}", name.name, args.len()),
            ));
        }
        args.iter()
            .enumerate()
            .map(|(k, a)| self.expect(a, params[k.min(params.len() - 1)], Where::Nested))
            .collect()
    }

    fn extra_checks(&self, op: Op, name: &Ident, args: &[Expr], tys: &[(TExpr, Ty)]) -> Result<(), ParseError> {
        let literal = |k: usize, allowed: &[f64], what: &str| -> Result<(), ParseError> {
            match &args[k] {
                Expr::Number { value, unit: Unit::None, .. } if allowed.contains(value) => Ok(()),
                other => Err(err(other.span(), format!("expected {what}"))),
            }
        };
        match op {
            Op::TangentsFrom => literal(2, &[1.0, 2.0], "tangent index 1 or 2"),
            Op::RotateRay => literal(3, &[1.0, -1.0], "orientation 1 or -1"),
            Op::Diff if tys[0].1 != tys[1].1 => Err(err(
                name.span,
                format!("`diff` needs two arguments of one type, found {} and {}", tys[0].1, tys[1].1),
            )),
            Op::SolveOnCurve => {
                if !contains_placeholder(&args[1]) {
                    return Err(err(args[1].span(), "the function argument must use the placeholder `_`"));
                }
                Ok(())
            }
            Op::Excircle => {
                if let Expr::Ident(v) = &args[3] {
                    let is_vertex = args[..3].iter().any(|a| matches!(a, Expr::Ident(x) if x.name == v.name));
                    if !is_vertex {
                        return Err(err(v.span, format!("`{}` is not one of the triangle's vertices", v.name)));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

fn contains_placeholder(e: &Expr) -> bool {
    match e {
        Expr::Placeholder(_) => true,
        Expr::Call { args, .. } => args.iter().any(contains_placeholder),
        _ => false,
    }
}

fn triangle_constraints(names: &[Ident; 3], cs: &[Constraint]) -> Result<Vec<TriangleConstraint>, ParseError> {
    let vertex = |id: &Ident| -> Result<usize, ParseError> {
        names
            .iter()
            .position(|n| n.name == id.name)
            .ok_or_else(|| err(id.span, format!("`{}` is not a vertex of this triangle", id.name)))
    };
    let side = |id: &Ident| -> Result<(usize, usize), ParseError> {
        for i in 0..3 {
            for j in 0..3 {
                if i != j && format!("{}{}", names[i].name, names[j].name) == id.name {
                    return Ok((i.min(j), i.max(j)));
                }
            }
        }
        Err(err(id.span, format!("`{}` is not a side of this triangle", id.name)))
    };
    cs.iter()
        .map(|c| {
            Ok(match c {
                Constraint::Acute => TriangleConstraint::Acute,
                Constraint::Scalene => TriangleConstraint::Scalene,
                Constraint::ObtuseAt(v) => TriangleConstraint::ObtuseAt(vertex(v)?),
                Constraint::Isosceles(a, b) => {
                    let (s1, s2) = (side(a)?, side(b)?);
                    let shared: Vec<usize> = [s1.0, s1.1].into_iter().filter(|v| *v == s2.0 || *v == s2.1).collect();
                    if s1 == s2 || shared.len() != 1 {
                        return Err(err(b.span, "isosceles sides must share exactly one vertex"));
                    }
                    TriangleConstraint::Isosceles { apex: shared[0] }
                }
                Constraint::MinAngle(e) => match e {
                    Expr::Number { value, unit: Unit::Deg, .. } => TriangleConstraint::MinAngle(value.to_radians()),
                    Expr::Number { value, unit: Unit::Rad, .. } => TriangleConstraint::MinAngle(*value),
                    other => return Err(err(other.span(), "angle literal needs a `deg` or `rad` suffix")),
                },
                Constraint::Order(a, b) => TriangleConstraint::Order {
                    shorter: side(a)?,
                    longer: side(b)?,
                },
            })
        })
        .collect()
}

/// Type-checks a parsed scene into its node DAG.
pub fn resolve(ast: &SceneAst) -> Result<Scene, ParseError> {
    let mut r = Resolver {
        slots: Vec::new(),
        by_name: HashMap::new(),
    };
    let mut nodes = Vec::with_capacity(ast.statements.len());
    for stmt in &ast.statements {
        let kind = match &stmt.kind {
            StmtKind::FreeTriangle { names, constraints } => {
                let constraints = triangle_constraints(names, constraints)?;
                for (k, c) in constraints.iter().enumerate() {
                    if let TriangleConstraint::ObtuseAt(_) = c {
                        if constraints.contains(&TriangleConstraint::Acute) {
                            return Err(err(stmt.span, format!("constraint {} contradicts `acute`", k + 1)));
                        }
                    }
                }
                let slots = [
                    r.bind(&names[0], Ty::Point),
                    r.bind(&names[1], Ty::Point),
                    r.bind(&names[2], Ty::Point),
                ];
                NodeKind::FreeTriangle { slots, constraints }
            }
            StmtKind::FreePoint { name, locus } => {
                let (locus, _) = r.expect(locus, &[Ty::Path, Ty::Circle, Ty::Line, Ty::Region], Where::Locus)?;
                NodeKind::FreePoint {
                    slot: r.bind(name, Ty::Point),
                    locus,
                }
            }
            StmtKind::Let { name, value } => {
                let (expr, ty) = r.expr(value, Where::Let)?;
                if matches!(ty, Ty::Region) {
                    return Err(err(value.span(), "`interior` is only a free-point locus"));
                }
                NodeKind::Let {
                    slot: r.bind(name, ty),
                    expr,
                }
            }
            StmtKind::Require(Guard::Predicate(e)) => {
                let (t, _) = r.expect(e, &[Ty::Bool], Where::Require)?;
                NodeKind::Require(TGuard::Predicate(t))
            }
            StmtKind::Require(Guard::Compare { lhs, op, rhs }) => {
                let (l, lt) = r.expect(lhs, &[Ty::Scalar, Ty::Angle], Where::Nested)?;
                let (rr, _) = r.expect(rhs, &[lt], Where::Nested)?;
                NodeKind::Require(TGuard::Compare { lhs: l, op: *op, rhs: rr })
            }
            StmtKind::Assert(e) => NodeKind::Assert(r.assertion(e, stmt)?),
        };
        nodes.push(Node { kind, span: stmt.span });
    }
    let scene = Scene {
        metadata: ast.metadata.clone(),
        nodes,
        slots: r.slots,
    };
    check_fixed(&scene, ast)?;
    Ok(scene)
}

impl Resolver {
    fn assertion(&self, e: &Expr, stmt: &Statement) -> Result<Assertion, ParseError> {
        let Expr::Call { name, args } = e else {
            return Err(err(e.span(), "expected an assertion call"));
        };
        let kind = AssertKind::from_name(&name.name)
            .ok_or_else(|| err(name.span, format!("`{}` is not an assertion kind", name.name)))?;
        let (params, variadic_min) = kind.params();
        let tys = self.args(name, args, params, variadic_min)?;
        let mut varying = None;
        if kind == AssertKind::Fixed {
            match &args[1] {
                Expr::Ident(id) => varying = Some(self.lookup(id)?.0),
                other => return Err(err(other.span(), "fixed needs the name of a free point")),
            }
        }
        Ok(Assertion {
            kind,
            args: tys.into_iter().map(|(t, _)| t).collect(),
            varying,
            line: stmt.span.line,
            text: stmt.to_string(),
        })
    }
}

/// A `fixed` claim is frame-relative: the scene may vary only the one free
/// point the claim names.
fn check_fixed(scene: &Scene, ast: &SceneAst) -> Result<(), ParseError> {
    let free_points = scene.free_point_slots();
    for (node, stmt) in scene.nodes.iter().zip(&ast.statements) {
        if let NodeKind::Assert(a) = &node.kind {
            if a.kind != AssertKind::Fixed {
                continue;
            }
            let v = a.varying.expect("fixed has a varying slot");
            if free_points != [v] {
                return Err(err(
                    stmt.span,
                    format!(
                        "`fixed` needs exactly one free point, the one it names (`{}`); this scene has {}",
                        scene.slots[v].name,
                        free_points.len()
                    ),
                ));
            }
        }
    }
    Ok(())
}
