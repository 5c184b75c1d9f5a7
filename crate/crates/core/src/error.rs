use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma pole at non-positive integer {0}")]
    PoleError(f64),
    #[error("argument outside supported window: {0}")]
    RangeError(String),
    #[error("no representation met tolerance: {0}")]
    NonConvergence(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("jost column blew up at z = {re}{im:+}i (norm {norm:e})")]
    BlowUp { re: f64, im: f64, norm: f64 },
    #[error("unitarity violated at z = {z}: defect {defect:e}")]
    UnitarityViolation { z: f64, defect: f64 },
    #[error("discrete spectrum detected: winding number {0}")]
    SolitonsPresent(i64),
    #[error("winding contour too coarse: phase jump {0:.3} rad")]
    ContourTooCoarse(f64),

    #[error("theta has a pole at z = 0")]
    PoleAtZero,
    #[error("alpha*x = {0} is not in the oscillatory regime (alpha*x < 0 required)")]
    WrongRegime(f64),
    #[error("point lies on a neutral curve of Re(2 i t theta)")]
    NeutralOnContour,
    #[error("z coincides with a phase point")]
    OnCriticalPoint,

    #[error("1 - |r|^2 = {0:e} is not bounded away from zero")]
    ReflectionAtUnitModulus(f64),
    #[error("z lies on the band [-z0, z0]; use the boundary values")]
    OnBand,
    #[error("s = {0} is within one pv window of a band endpoint")]
    TooCloseToEndpoint(f64),

    #[error("r vanishes at a phase point; beta12 is undefined")]
    ZeroReflectionAtPhasePoint,

    #[error("fixed point did not converge after {iters} iterations (residual {residual:e})")]
    FixedPointDivergence { iters: usize, residual: f64 },
    #[error("time step violates the stability bound: {0}")]
    StepTooLarge(String),
    #[error("amplitude {amplitude:e} reached the inflow boundary at t = {t}")]
    DomainEscape { t: f64, amplitude: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
