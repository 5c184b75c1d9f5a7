pub mod dd;
pub mod gamma;
pub mod pcf;
pub mod quadrature;
pub mod winding;

pub use gamma::complex_gamma;
pub use pcf::{parabolic_cylinder_d, parabolic_cylinder_d_prime};
pub use quadrature::{
    cauchy_integral, cauchy_integral_subtracted, cumulative_integral, QuadratureSpec, Rule,
    SampledFunction,
};
