//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("scattering parameters off the unitary manifold: ||q|-1| = {q_defect:.3e}, ||r|^2+|t|^2-1| = {rt_defect:.3e} (tolerance {tol:.1e})")]
    MalformedScatter {
        q_defect: f64,
        rt_defect: f64,
        tol: f64,
    },

    #[error("chirality violation at scattering site (j = {j}, row = {k2}): {what}")]
    ChiralityViolation { j: i64, k2: i64, what: String },

    #[error("scattering-row key {k2} must be even")]
    OddRowKey { k2: i64 },

    #[error("interface bounds must satisfy n_left <= n_right, got {n_left} > {n_right}")]
    BadBounds { n_left: i64, n_right: i64 },

    #[error("empty window")]
    EmptyWindow,

    #[error("invalid window: {0}")]
    BadWindow(String),

    #[error("window mismatch between states")]
    WindowMismatch,

    #[error("amplitude leaked outside the open window at site (j = {j}, k = {k})")]
    TruncationLeakage { j: i64, k: i64 },

    #[error("torus closure incompatible: {0}")]
    IncompatibleClosure(String),

    #[error("plaquette precondition violated at scattering site (j = {j}, row = {k2}): expected a {expected} matrix")]
    PlaquettePrecondition {
        j: i64,
        k2: i64,
        expected: &'static str,
    },

    #[error("boundary image of (j = {j}, k = {k}) has weight {weight:.3e} off the predicted site")]
    BoundaryLeak { j: i64, k: i64, weight: f64 },

    #[error("matrix is not unitary: defect {defect:.3e} exceeds {tol:.1e}")]
    NotUnitary { defect: f64, tol: f64 },

    #[error("eigen decomposition residual {residual:.3e} exceeds {tol:.1e}")]
    EigenResidual { residual: f64, tol: f64 },

    #[error("eigen decomposition did not converge")]
    EigenFailed,

    #[error("input is not a projection: {0}")]
    NotAProjection(String),

    #[error("field is not invariant under vertical translations")]
    NotTranslationInvariant,

    #[error("winding residual {0:.3e} signals a non-unitary symbol or broken kernel")]
    WindingResidual(f64),

    #[error("phase unwrapping failed near y = {y:.6}: jump {jump:.4} rad persists after {refinements} refinements")]
    UnwrapFailed {
        y: f64,
        jump: f64,
        refinements: usize,
    },

    #[error("band matching failed near y = {y:.6}: {what}")]
    BandMatching { y: f64, what: String },

    #[error("orbit escaped the materialized window before depth {depth}; enlarge the window")]
    OrbitEscaped { depth: usize },

    #[error("degenerate interpolation endpoints: {0}")]
    DegeneratePath(String),

    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
