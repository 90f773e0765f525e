//! Error type shared by every module in the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("marker states have different dimensions ({expected} vs {got})")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("marker state norm {norm} deviates from 1 by more than {tolerance}")]
    NotNormalized { norm: f64, tolerance: f64 },

    #[error("marker state has no components")]
    EmptyState,

    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("overlap magnitude {magnitude} exceeds 1")]
    OverlapOutOfRange { magnitude: f64 },

    #[error("intensity profile is invalid: {reason}")]
    InvalidProfile { reason: String },

    #[error("visibility is undefined for an all-zero profile")]
    ZeroProfile,

    #[error("{what} = {value} is outside the allowed range {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("visibility^2 + distinguishability^2 = {sum} exceeds 1")]
    DualityExceeded { sum: f64 },

    #[error("invalid grid: {reason}")]
    InvalidGrid { reason: String },

    #[error("geometry mismatch: {reason}")]
    GeometryMismatch { reason: String },

    #[error(
        "{feature} width {width:.3e} m spans fewer than {min_samples} samples at spacing \
         {spacing:.3e} m; increase the sample count to at least {min_n}"
    )]
    UnderResolved {
        feature: &'static str,
        width: f64,
        spacing: f64,
        min_samples: usize,
        min_n: usize,
    },

    #[error("mask does not fit the grid: {reason}")]
    InvalidMask { reason: String },

    #[error("wires at {a:.6e} m and {b:.6e} m overlap")]
    WireOverlap { a: f64, b: f64 },

    #[error("propagation distance must be non-negative, got {distance} m")]
    NegativeDistance { distance: f64 },

    #[error(
        "propagation over {distance:.3e} m violates the anti-aliasing bound for this grid; \
         the maximum safe distance is {max_safe:.3e} m (enlarge the extent or reduce N)"
    )]
    AliasingBound { distance: f64, max_safe: f64 },

    #[error("lens focal length must be finite and non-zero, got {focal_length} m")]
    InvalidLens { focal_length: f64 },

    #[error("invalid apparatus configuration: {field}: {reason}")]
    InvalidConfig { field: &'static str, reason: String },

    #[error("only {found} dark fringes resolvable inside the central envelope lobe, {requested} requested")]
    TooFewMinima { found: usize, requested: usize },

    #[error(
        "detector windows overlap: image separation {separation:.3e} m, halfwidth {halfwidth:.3e} m"
    )]
    WindowsOverlap { separation: f64, halfwidth: f64 },

    #[error("single-slit scenarios cannot carry a marker; markers need both slits open")]
    MarkerOnSingleSlit,

    #[error("propagation to the {plane} plane failed: {source}")]
    Propagation {
        plane: &'static str,
        #[source]
        source: Box<Error>,
    },
}
