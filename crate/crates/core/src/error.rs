use thiserror::Error;

/// Errors produced by mapping evaluation, quadrature, and the check pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// Polar derivatives are undefined at the origin.
    #[error("polar jet requested at r = 0 where the polar frame is singular")]
    SingularOrigin,

    /// A point fell outside the domain of the mapping.
    #[error("point (r = {r}, theta = {theta}) is outside the domain: {reason}")]
    OutOfDomain { r: f64, theta: f64, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The Jacobian failed the positivity hypothesis at a sample point.
    #[error("non-positive Jacobian at (r = {r}, theta = {theta}): J = {jacobian:e}")]
    RegularityViolation { r: f64, theta: f64, jacobian: f64 },

    /// A jet or functional evaluated to NaN or infinity.
    #[error("non-finite {context} at (r = {r}, theta = {theta})")]
    NonFinite {
        context: &'static str,
        r: f64,
        theta: f64,
    },

    /// A circle-rule integrand was non-finite at a quadrature node.
    #[error("integrand is non-finite at circle node {node} (theta = {theta})")]
    NonFiniteCircleNode { node: usize, theta: f64 },

    /// A radial integrand was non-finite.
    #[error("radial integrand is non-finite at t = {location}")]
    NonFiniteRadial { location: f64 },

    /// A stated hypothesis of an inequality does not hold for the mapping.
    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    /// Malformed ingest input.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Ingest input parses but does not form a valid tensor grid.
    #[error("sample grid structure error: {0}")]
    GridStructure(String),

    /// An ingested sample lies outside the closed unit disk.
    #[error("sample at line {line} lies outside the closed unit disk: |f| = {modulus}")]
    SampleOutsideDisk { line: usize, modulus: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
