use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("leading coefficient of the cubic is zero")]
    DegenerateLeadingCoefficient,

    #[error("finite-difference stencil left the sampler domain at ({x}, {y})")]
    StencilOutOfDomain { x: f64, y: f64 },

    #[error("integration produced a non-finite state at s = {at}")]
    NonFiniteState { at: f64 },

    #[error("invariants g2 = {g2}, g3 = {g3} give a complex lattice (discriminant {discriminant})")]
    ComplexLattice { g2: f64, g3: f64, discriminant: f64 },

    #[error("argument {re} + {im}i lies within the pole guard of the period lattice")]
    PoleProximity { re: f64, im: f64 },

    #[error("no real preimage of {w} under the Weierstrass function on the requested line")]
    ValueOutOfRealRange { w: f64 },

    #[error("tangent vectors are linearly dependent")]
    DegenerateTangentPlane,

    #[error("metric is not definite (LN - M^2 = {det})")]
    IndefiniteMetric { det: f64 },

    #[error("chart is not isothermal (defect {defect:e})")]
    NotIsothermal { defect: f64 },

    #[error("parameter point outside the chart: {0}")]
    DomainViolation(String),

    #[error("gauge matrix is singular at t = {t}")]
    SingularGauge { t: f64 },

    #[error("family angle t = {t} lies in a branch guard band")]
    BranchAmbiguity { t: f64 },

    #[error("target modulus {target} cannot be bracketed for p = {p}")]
    NoBracket { target: f64, p: f64 },

    #[error("quadrature did not converge (error estimate {estimate:e})")]
    QuadratureFailure { estimate: f64 },

    #[error("frame lost its reality structure (defect {defect:e})")]
    RealityLoss { defect: f64 },

    #[error("value expected to be real has imaginary part {imag:e}")]
    NonReal { imag: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
