use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// Geometry failures carry the parameter point where they happened so that
/// callers (and the CLI's JSON error object) can point at the offending node.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("variable `{name}` at offset {offset} exceeds arity {arity}")]
    VariableOutOfRange {
        name: String,
        offset: usize,
        arity: usize,
    },

    #[error("domain error in `{expr}`: {reason}")]
    Domain { expr: String, reason: &'static str },

    #[error("jets support at most {max} variables, got {got}")]
    ArityTooLarge { got: usize, max: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("not an immersion at t = {location:?}: smallest singular value {smallest_singular_value:e}")]
    DegenerateJacobian {
        location: Vec<f64>,
        smallest_singular_value: f64,
    },

    #[error("Pluecker vector vanishes (|p| = {norm:e})")]
    ZeroPlueckerVector { norm: f64 },

    #[error("degenerate metric: EG - F^2 = {value:e}")]
    DegenerateMetric { value: f64 },

    #[error("point too close to the origin (|p| = {norm:e})")]
    ZeroVector { norm: f64 },

    #[error("form omega_{form} is singular: denominator {denominator:e}")]
    SingularForm { form: usize, denominator: f64 },

    #[error("minor index {index} out of range (vector has {len} entries)")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("certification failed: normalized value {normalized} has residual {residual:e}")]
    CertificationFailed { normalized: f64, residual: f64 },

    #[error("at t = {location:?}: {source}")]
    At {
        location: Vec<f64>,
        #[source]
        source: Box<Error>,
    },

    #[error("zero-length edge at polygon vertex {vertex}")]
    ZeroLengthEdge { vertex: usize },

    #[error("degenerate triangle {cell}")]
    DegenerateTriangle { cell: usize },

    #[error("degenerate tetrahedron")]
    DegenerateTetrahedron,

    #[error("vertex {vertex} is on the boundary")]
    BoundaryVertex { vertex: usize },

    #[error("mesh is not closed: edge {edge:?} lies in {count} cells")]
    OpenMesh { edge: Vec<usize>, count: usize },

    #[error("link of vertex {vertex} is not a sphere: {reason}")]
    LinkNotSphere { vertex: usize, reason: String },

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable code, used in JSON error objects.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "Syntax",
            Error::VariableOutOfRange { .. } => "VariableOutOfRange",
            Error::Domain { .. } => "Domain",
            Error::ArityTooLarge { .. } => "ArityTooLarge",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::DegenerateJacobian { .. } => "DegenerateJacobian",
            Error::ZeroPlueckerVector { .. } => "ZeroPlueckerVector",
            Error::DegenerateMetric { .. } => "DegenerateMetric",
            Error::ZeroVector { .. } => "ZeroVector",
            Error::SingularForm { .. } => "SingularForm",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::Precondition(_) => "Precondition",
            Error::CertificationFailed { .. } => "CertificationFailed",
            Error::At { source, .. } => source.code(),
            Error::ZeroLengthEdge { .. } => "ZeroLengthEdge",
            Error::DegenerateTriangle { .. } => "DegenerateTriangle",
            Error::DegenerateTetrahedron => "DegenerateTetrahedron",
            Error::BoundaryVertex { .. } => "BoundaryVertex",
            Error::OpenMesh { .. } => "OpenMesh",
            Error::LinkNotSphere { .. } => "LinkNotSphere",
            Error::Format { .. } => "Format",
            Error::Io(_) => "Io",
        }
    }

    /// Parameter point attached to the error, if any.
    pub fn location(&self) -> Option<&[f64]> {
        match self {
            Error::DegenerateJacobian { location, .. } | Error::At { location, .. } => {
                Some(location)
            }
            _ => None,
        }
    }

    /// Attach a parameter location unless one is already present.
    pub(crate) fn at(self, t: &[f64]) -> Error {
        match self {
            Error::DegenerateJacobian { .. } | Error::At { .. } => self,
            other => Error::At {
                location: t.to_vec(),
                source: Box::new(other),
            },
        }
    }
}
