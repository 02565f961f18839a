use thiserror::Error;

/// Failure of a geometric primitive, construction, or residual check.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("coincident points")]
    CoincidentPoints,
    #[error("degenerate triangle (signed area {area:e})")]
    DegenerateTriangle { area: f64 },
    #[error("point is not collinear with the segment (offset {offset:e})")]
    NotCollinear { offset: f64 },
    #[error("point coincides with the far end of the segment")]
    AtSegmentEnd,
    #[error("lines are parallel (angle {angle:e} rad)")]
    ParallelLines { angle: f64 },
    #[error("point is not on the circle (offset {offset:e})")]
    NotOnCircle { offset: f64 },
    #[error("point is not on the line (offset {offset:e})")]
    NotOnLine { offset: f64 },
    #[error("line misses the circle")]
    LineMissesCircle,
    #[error("point lies inside or on the circle")]
    InsideCircle,
    #[error("line does not pass through the vertex")]
    LineMissesVertex,
    #[error("invalid radius {0}")]
    InvalidRadius(f64),
    #[error("invalid tolerance (rel_eps {rel_eps:e}, abs_floor {abs_floor:e})")]
    InvalidTolerance { rel_eps: f64, abs_floor: f64 },
    #[error("no sign change over bracket [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("bisection stalled with residual {residual:e}")]
    MaxIterations { residual: f64 },
    #[error("could not bracket the tangency root on [{lo}, {hi}]")]
    Bracketing { lo: f64, hi: f64 },
    #[error("tangents are parallel")]
    ParallelTangents,
    #[error("lines are not isogonal (defect {defect:e})")]
    NotIsogonal { defect: f64 },
    #[error("point sits at a vertex")]
    AtVertex,
    #[error("point is off its side line (offset {offset:e})")]
    OffCarrier { offset: f64 },
    #[error("point is outside its side")]
    OutsideSide,
    #[error("chord does not pass through the midpoint")]
    ChordMissesMidpoint,
    #[error("point is outside the polygon")]
    OutsidePolygon,
    #[error("polygon is self-intersecting")]
    SelfIntersecting,
    #[error("angle {0} outside (0, pi)")]
    InvalidAngle(f64),
    #[error("ratio {0} is not positive")]
    NonPositiveRatio(f64),
    #[error("point is not one of the triangle's vertices")]
    NotAVertex,
    #[error("non-finite value")]
    NonFinite,
}
