//! Tolerance and default constants shared by the numerical modules.
//!
//! Call sites read these through the config structs that carry them; the
//! constants here only provide defaults.

/// Distance to a non-positive integer that counts as a gamma pole.
pub const GAMMA_POLE_TOL: f64 = 1e-14;

/// Target accuracy for the parabolic cylinder function, applied as
/// `tol * max(1, |D|)`.
pub const PCF_TOL: f64 = 1e-9;
/// Radius separating the Maclaurin and asymptotic representations of D.
pub const PCF_CROSSOVER: f64 = 6.0;
pub const PCF_MAX_ORDER: f64 = 5.0;
pub const PCF_MAX_ARG: f64 = 20.0;

/// Jost columns larger than this signal a wrong half-plane or non-decaying data.
pub const JOST_BLOWUP: f64 = 1e8;
/// Allowed defect in |s11|^2 - |s21|^2 - 1.
pub const UNITARITY_TOL: f64 = 1e-6;
/// Decay required of initial data at both grid ends.
pub const ENDPOINT_DECAY: f64 = 1e-8;
pub const MIN_GRID_NODES: usize = 256;
pub const BETA_GAMMA_TOL: f64 = 1e-14;

pub const Z_MIN: f64 = 0.05;
pub const Z_GRID_MAX: f64 = 4.0;
pub const Z_GRID_NODES: usize = 801;

pub const WINDING_HALF_WIDTH: f64 = 6.0;
pub const WINDING_HEIGHT: f64 = 6.0;
pub const WINDING_SAMPLES_PER_SIDE: usize = 2000;
/// Largest phase increment tolerated between neighbouring contour samples.
pub const WINDING_MAX_STEP: f64 = std::f64::consts::FRAC_PI_2;
pub const WINDING_MAX_REFINE: usize = 6;

pub const NEUTRAL_TOL: f64 = 1e-14;
/// Rays of the steepest-descent contour are sampled up to |z -+ z0| = factor * z0.
pub const CONTOUR_TRUNCATION: f64 = 8.0;

/// 1 - |r|^2 below this is treated as |r| = 1.
pub const UNIT_MODULUS_TOL: f64 = 1e-12;

pub const PV_WINDOW: f64 = 2.0;
pub const GAUSS_POINTS: usize = 8;

pub const FIXED_POINT_TOL: f64 = 1e-13;
pub const FIXED_POINT_MAX_ITER: usize = 200;
pub const FIXED_POINT_DAMPING: f64 = 0.5;
/// dt * max|A|^2 bound.
pub const AMPLITUDE_STABILITY: f64 = 0.1;
/// dt * |alpha| * (domain length) bound for RK4 on the integrated system.
pub const VOLTERRA_STABILITY: f64 = 2.8;
/// Amplitude relative to the maximum that counts as reaching a boundary.
pub const ESCAPE_LEVEL: f64 = 1e-4;
pub const ESCAPE_MARGIN: f64 = 0.05;
