use thiserror::Error;

use crate::surface::{ArcId, HalfEdge};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("side label `{0}` appears {1} times; a side is glued to at most one other side")]
    LabelOveruse(String, usize),
    #[error(
        "gluing of label `{0}` is orientation-preserving; only orientable surfaces are supported"
    )]
    NonOrientable(String),
    #[error("triangle {0} is glued to itself along label `{1}`")]
    SelfGlued(usize, String),
    #[error("gluing table is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("marked point {0} is an interior vertex (punctured surfaces are not supported)")]
    Punctured(u32),
    #[error("marked point {0} is a non-manifold vertex")]
    NonManifoldVertex(u32),
    #[error("gluing table is empty")]
    Empty,
    #[error("surface has n = {0} internal arcs; at least one is required")]
    Degenerate(i64),
    #[error("invalid surface parameters: {0}")]
    InvalidSurface(String),
    #[error("vertex labels are inconsistent with the gluing")]
    InconsistentLabels,

    #[error("arc {0:?} is not an arc of this triangulation")]
    UnknownArc(ArcId),
    #[error("arc {0:?} is a boundary arc and cannot be flipped")]
    BoundaryArc(ArcId),
    #[error("flip record does not match the triangulation")]
    RecordMismatch,

    #[error("curve trace is inconsistent at position {0}")]
    InconsistentTrace(usize),
    #[error("half-edge {0:?} does not exist")]
    UnknownHalfEdge(HalfEdge),
    #[error("curve is contractible, not an arc")]
    Contractible,
    #[error("curve coincides with an arc of the triangulation; it has no first crossed arc")]
    NoCrossing,
    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("projection exceeded the watchdog bound of {0} flips")]
    Watchdog(usize),
    #[error("curves are incompatible: projecting onto curve {later} flips curve {earlier}")]
    Incompatible { earlier: usize, later: usize },
    #[error("projection measure failed to decrease: {0:?}")]
    MeasureNotDecreasing(Vec<usize>),

    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(usize),
    #[error("node is not in the requested face")]
    NotInFace,
    #[error("polygon size {0} is out of range")]
    PolygonOutOfRange(usize),
    #[error("invalid diagonal ({0}, {1})")]
    InvalidDiagonal(usize, usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
