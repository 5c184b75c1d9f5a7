//! The scalar conjugation function
//!
//!   delta(z) = exp( i ∫_{-z0}^{z0} nu(s)/(s - z) ds ),  nu = -log(1 - |r|^2) / (2 pi),
//!
//! its boundary values on the band, the endpoint phases beta(z, ±z0) and
//! the constants delta0(±z0).

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::quadrature::{cauchy_integral, cauchy_integral_subtracted, QuadratureSpec, SampledFunction};
use crate::phase::RayCoordinates;
use crate::scattering::ScatteringData;
use crate::tolerances::UNIT_MODULUS_TOL;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Which phase point an endpoint quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    Plus,
    Minus,
}

impl Endpoint {
    pub fn sign(self) -> f64 {
        match self {
            Endpoint::Plus => 1.0,
            Endpoint::Minus => -1.0,
        }
    }
}

/// Reading of the log argument `z ± (z0 - 1)` in beta.
///
/// `Matched` pairs +z0 with log(z - z0 + 1) and -z0 with log(z + z0 - 1);
/// `Swapped` is the other assignment, kept so tests can show it fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogPairing {
    Matched,
    Swapped,
}

/// nu for a given |r|.
pub fn nu_value(r_abs: f64) -> Result<f64> {
    let a2 = r_abs * r_abs;
    if !(1.0 - a2 > UNIT_MODULUS_TOL) {
        return Err(Error::ReflectionAtUnitModulus(1.0 - a2));
    }
    Ok(-(-a2).ln_1p() / (2.0 * PI))
}

/// Nodewise nu on the spectral grid of `sd`.
pub fn nu(sd: &ScatteringData) -> Result<SampledFunction> {
    let vals = sd.r_abs.iter().map(|&a| nu_value(a)).collect::<Result<Vec<_>>>()?;
    SampledFunction::from_real(sd.z.clone(), &vals)
}

/// r at an arbitrary real point by four-point Lagrange interpolation over
/// nodes on the same side of the spectral dead zone. Across the dead zone
/// the two bracketing nodes are joined linearly.
pub fn reflection_at(sd: &ScatteringData, z: f64) -> Result<C64> {
    let g = &sd.z;
    let n = g.len();
    if n < 2 || !(z >= g[0] && z <= g[n - 1]) {
        return Err(Error::RangeError(format!("z = {z} outside the spectral grid")));
    }
    let p = g.partition_point(|&v| v <= z);
    let i = if p == 0 { 0 } else { (p - 1).min(n - 2) };
    if g[i] == z {
        return Ok(sd.r[i]);
    }
    if g[i + 1] == z {
        return Ok(sd.r[i + 1]);
    }
    if g[i] < 0.0 && g[i + 1] > 0.0 {
        let w = (z - g[i]) / (g[i + 1] - g[i]);
        return Ok(sd.r[i] * (1.0 - w) + sd.r[i + 1] * w);
    }
    let neg = g[i] < 0.0;
    let side_lo = if neg { 0 } else { g.partition_point(|&v| v < 0.0) };
    let side_hi = if neg { g.partition_point(|&v| v < 0.0) - 1 } else { n - 1 };
    if side_hi - side_lo < 3 {
        let w = (z - g[i]) / (g[i + 1] - g[i]);
        return Ok(sd.r[i] * (1.0 - w) + sd.r[i + 1] * w);
    }
    let start = (i.saturating_sub(1)).clamp(side_lo, side_hi - 3);
    let mut acc = C64::new(0.0, 0.0);
    for j in start..start + 4 {
        let mut w = 1.0;
        for k in start..start + 4 {
            if k != j {
                w *= (z - g[k]) / (g[j] - g[k]);
            }
        }
        acc += sd.r[j] * w;
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaData {
    pub z0: f64,
    /// nu on [-z0, z0]; interior spectral nodes plus the two endpoints.
    pub nu: SampledFunction,
    pub nu_z0: f64,
    pub nu_minus_z0: f64,
    pub delta0_plus: C64,
    pub delta0_minus: C64,
    /// ∫ nu ds over the band.
    pub tail_coefficient: C64,
}

impl DeltaData {
    /// Wraps a band sampling of nu. The endpoint values are taken from the
    /// first and last samples.
    pub fn from_nu(z0: f64, nu: SampledFunction, spec: &QuadratureSpec) -> Result<Self> {
        if !(z0 > 0.0) {
            return Err(Error::InvalidInput(format!("z0 must be positive, got {z0}")));
        }
        if (nu.lo() + z0).abs() > 1e-12 * z0.max(1.0) || (nu.hi() - z0).abs() > 1e-12 * z0.max(1.0) {
            return Err(Error::InvalidInput("nu must be sampled on [-z0, z0]".into()));
        }
        if nu.values().iter().any(|v| !(v.re >= 0.0) || v.im != 0.0) {
            return Err(Error::InvalidInput("nu must be real and non-negative".into()));
        }
        let v = nu.values();
        let g = nu.grid();
        let mut tail = 0.0;
        for i in 1..g.len() {
            tail += 0.5 * (g[i] - g[i - 1]) * (v[i].re + v[i - 1].re);
        }
        let mut dd = DeltaData {
            z0,
            nu_z0: v[v.len() - 1].re,
            nu_minus_z0: v[0].re,
            nu,
            delta0_plus: C64::new(1.0, 0.0),
            delta0_minus: C64::new(1.0, 0.0),
            tail_coefficient: C64::new(tail, 0.0),
        };
        dd.delta0_plus = delta0(Endpoint::Plus, &dd, spec)?;
        dd.delta0_minus = delta0(Endpoint::Minus, &dd, spec)?;
        Ok(dd)
    }
}

/// DeltaData for the ray: band nodes of `sd` strictly inside (-z0, z0) plus
/// the endpoints, where r is interpolated.
pub fn build_delta_data(sd: &ScatteringData, ray: &RayCoordinates, spec: &QuadratureSpec) -> Result<DeltaData> {
    let z0 = ray.z0;
    let rp = reflection_at(sd, z0)?;
    let rm = reflection_at(sd, -z0)?;
    let margin = 1e-9 * z0.max(1.0);
    let mut grid = vec![-z0];
    let mut vals = vec![nu_value(rm.norm())?];
    for (i, &s) in sd.z.iter().enumerate() {
        if s.abs() < z0 - margin {
            grid.push(s);
            vals.push(nu_value(sd.r_abs[i])?);
        }
    }
    grid.push(z0);
    vals.push(nu_value(rp.norm())?);
    let f = SampledFunction::from_real(grid, &vals)?;
    DeltaData::from_nu(z0, f, spec)
}

fn on_band(z: C64, z0: f64) -> bool {
    z.im == 0.0 && z.re.abs() <= z0
}

/// delta(z) off the closed band.
pub fn delta(z: C64, dd: &DeltaData, spec: &QuadratureSpec) -> Result<C64> {
    if on_band(z, dd.z0) {
        return Err(Error::OnBand);
    }
    Ok((I * cauchy_integral(&dd.nu, z, spec)?).exp())
}

/// Boundary values (delta_+, delta_-) at a real point inside the band,
/// from the principal value and the Plemelj jump.
pub fn delta_boundary(s: f64, dd: &DeltaData, spec: &QuadratureSpec) -> Result<(C64, C64)> {
    let g = dd.nu.grid();
    let n = g.len();
    let lo_guard = g[0] + spec.pv_window * (g[1] - g[0]);
    let hi_guard = g[n - 1] - spec.pv_window * (g[n - 1] - g[n - 2]);
    if !(s > lo_guard && s < hi_guard) {
        let d = (s - g[0]).abs().min((g[n - 1] - s).abs());
        return Err(Error::TooCloseToEndpoint(d));
    }
    let pv = cauchy_integral(&dd.nu, C64::new(s, 0.0), spec)?.re;
    let nus = dd.nu.eval(s).re;
    let plus = C64::from_polar((-PI * nus).exp(), pv);
    let minus = C64::from_polar((PI * nus).exp(), pv);
    Ok((plus, minus))
}

// Real z on the negative axis sits on the cut of the principal log; there
// the two one-sided limits differ by ±i pi and their average is returned.
fn log_avg(w: C64) -> C64 {
    if w.im == 0.0 && w.re < 0.0 {
        C64::new((-w.re).ln(), 0.0)
    } else {
        w.ln()
    }
}

/// beta(z, ±z0) with the matched log pairing.
pub fn beta_phase(z: C64, endpoint: Endpoint, dd: &DeltaData, spec: &QuadratureSpec) -> Result<C64> {
    beta_phase_reading(z, endpoint, LogPairing::Matched, dd, spec)
}

/// beta(z, ±z0) for either reading of the log argument.
///
/// The indicator of the unit interval next to the endpoint is clipped to
/// the band, and its left (right) end takes the place of z0 - 1 (1 - z0)
/// in the log when the band is shorter than one.
pub fn beta_phase_reading(
    z: C64,
    endpoint: Endpoint,
    pairing: LogPairing,
    dd: &DeltaData,
    spec: &QuadratureSpec,
) -> Result<C64> {
    let z0 = dd.z0;
    match endpoint {
        Endpoint::Plus => {
            let nu0 = dd.nu_z0;
            let ell = (z0 - 1.0).max(-z0);
            let s = cauchy_integral_subtracted(&dd.nu, z, C64::new(nu0, 0.0), spec)?;
            let anchor = match pairing {
                LogPairing::Matched => ell,
                LogPairing::Swapped => 1.0 - z0,
            };
            let mut b = -nu0 * log_avg(z - anchor) + s;
            if ell > -z0 {
                b += nu0 * log_avg((ell - z) / (-z0 - z));
            }
            Ok(b)
        }
        Endpoint::Minus => {
            let nu0 = dd.nu_minus_z0;
            let u = (1.0 - z0).min(z0);
            let s = cauchy_integral_subtracted(&dd.nu, z, C64::new(nu0, 0.0), spec)?;
            let anchor = match pairing {
                LogPairing::Matched => u,
                LogPairing::Swapped => z0 - 1.0,
            };
            let mut b = nu0 * log_avg(z - anchor) + s;
            if u < z0 {
                b += nu0 * log_avg((z0 - z) / (u - z));
            }
            Ok(b)
        }
    }
}

/// delta0(±z0) = exp(i beta(±z0, ±z0)).
pub fn delta0(endpoint: Endpoint, dd: &DeltaData, spec: &QuadratureSpec) -> Result<C64> {
    let z = C64::new(endpoint.sign() * dd.z0, 0.0);
    Ok((I * beta_phase(z, endpoint, dd, spec)?).exp())
}

/// (s, nu, delta_+, delta_-) at every band node where the boundary values
/// are defined.
pub fn boundary_table(dd: &DeltaData, spec: &QuadratureSpec) -> Vec<(f64, f64, C64, C64)> {
    dd.nu
        .grid()
        .iter()
        .zip(dd.nu.values())
        .filter_map(|(&s, v)| delta_boundary(s, dd, spec).ok().map(|(p, m)| (s, v.re, p, m)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quadrature::linspace;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn constant_nu(z0: f64, nu0: f64, n: usize) -> DeltaData {
        let g = linspace(-z0, z0, n);
        let v = vec![nu0; n];
        DeltaData::from_nu(z0, SampledFunction::from_real(g, &v).unwrap(), &spec()).unwrap()
    }

    #[test]
    fn nu_inverse_substitution() {
        let a = (1.0 - (-2.0 * PI).exp()).sqrt();
        assert!((nu_value(a).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(nu_value(0.0).unwrap(), 0.0);
        assert!(matches!(nu_value(1.0), Err(Error::ReflectionAtUnitModulus(_))));
    }

    #[test]
    fn zero_nu_gives_unit_delta() {
        let dd = constant_nu(1.0, 0.0, 41);
        assert_eq!(delta(C64::new(0.3, 0.5), &dd, &spec()).unwrap(), C64::new(1.0, 0.0));
        let (p, m) = delta_boundary(0.0, &dd, &spec()).unwrap();
        assert_eq!((p, m), (C64::new(1.0, 0.0), C64::new(1.0, 0.0)));
        assert_eq!(dd.delta0_plus, C64::new(1.0, 0.0));
        assert_eq!(beta_phase(C64::new(1.2, 0.1), Endpoint::Plus, &dd, &spec()).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn constant_nu_closed_form() {
        // delta = ((z - z0)/(z + z0))^{i nu0}
        let nu0 = 0.13;
        let dd = constant_nu(1.0, nu0, 81);
        for z in [C64::new(1.7, 0.0), C64::new(0.2, 0.4), C64::new(-0.6, -0.9), C64::new(-3.0, 0.0)] {
            let want = (I * nu0 * ((z - 1.0) / (z + 1.0)).ln()).exp();
            assert!((delta(z, &dd, &spec()).unwrap() - want).norm() < 1e-12);
        }
        // beta(z, z0) = -nu0 log(z + z0) for constant nu
        for z in [C64::new(1.0, 0.0), C64::new(1.1, 0.2), C64::new(0.8, -0.3)] {
            let b = beta_phase(z, Endpoint::Plus, &dd, &spec()).unwrap();
            assert!((b - (-nu0 * (z + 1.0).ln())).norm() < 1e-8, "{b}");
        }
        let b = beta_phase(C64::new(-0.9, 0.2), Endpoint::Minus, &dd, &spec()).unwrap();
        assert!((b - nu0 * (C64::new(-0.9, 0.2) - 1.0).ln()).norm() < 1e-8);
    }

    #[test]
    fn boundary_values_and_guards() {
        let z0 = 0.8;
        let g = linspace(-z0, z0, 161);
        let v: Vec<f64> = g.iter().map(|s| 0.2 * (1.0 - s * s / (z0 * z0)) + 0.05).collect();
        let dd = DeltaData::from_nu(z0, SampledFunction::from_real(g, &v).unwrap(), &spec()).unwrap();
        let (p, m) = delta_boundary(0.1, &dd, &spec()).unwrap();
        let nus = dd.nu.eval(0.1).re;
        assert!(((p / m).re - (-2.0 * PI * nus).exp()).abs() < 1e-12);
        assert!((m.norm() - (PI * nus).exp()).abs() < 1e-12);
        // one-sided limits agree with the off-axis evaluation
        let up = delta(C64::new(0.1, 1e-9), &dd, &spec()).unwrap();
        let dn = delta(C64::new(0.1, -1e-9), &dd, &spec()).unwrap();
        assert!((up - p).norm() < 1e-7 && (dn - m).norm() < 1e-7);
        assert!(matches!(delta_boundary(z0 - 0.005, &dd, &spec()), Err(Error::TooCloseToEndpoint(_))));
        assert!(matches!(delta(C64::new(0.3, 0.0), &dd, &spec()), Err(Error::OnBand)));
        assert!((dd.delta0_plus.norm() - 1.0).abs() < 1e-14);
        assert!((dd.delta0_minus.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn matched_pairing_factors_delta_at_both_endpoints() {
        let z0 = 1.5;
        let g = linspace(-z0, z0, 301);
        let v: Vec<f64> = g.iter().map(|s| 0.04 + 0.03 * (1.2 * s).cos() + 0.01 * s).collect();
        let dd = DeltaData::from_nu(z0, SampledFunction::from_real(g, &v).unwrap(), &spec()).unwrap();
        let (np, nm) = (dd.nu_z0, dd.nu_minus_z0);
        for eps in [1e-3, 1e-2, 0.1] {
            for ang in [0.25 * PI, 0.6 * PI, -0.3 * PI] {
                let w = C64::from_polar(eps, ang);
                let z = z0 + w;
                let lhs = delta(z, &dd, &spec()).unwrap() * (-I * np * w.ln()).exp();
                let b = beta_phase(z, Endpoint::Plus, &dd, &spec()).unwrap();
                assert!((lhs - (I * b).exp()).norm() < 1e-8, "{z}");
                let s = beta_phase_reading(z, Endpoint::Plus, LogPairing::Swapped, &dd, &spec()).unwrap();
                assert!((lhs - (I * s).exp()).norm() > 1e-2);

                let z = -z0 - w.conj();
                let lhs = delta(z, &dd, &spec()).unwrap() * (I * nm * (z + z0).ln()).exp();
                let b = beta_phase(z, Endpoint::Minus, &dd, &spec()).unwrap();
                assert!((lhs - (I * b).exp()).norm() < 1e-8, "{z}");
                let s = beta_phase_reading(z, Endpoint::Minus, LogPairing::Swapped, &dd, &spec()).unwrap();
                assert!((lhs - (I * s).exp()).norm() > 1e-2);
            }
        }
    }

    #[test]
    fn interpolation_is_exact_on_cubics() {
        let z: Vec<f64> = crate::scattering::spectral_grid(2.0, 81, 0.05);
        let r: Vec<C64> = z.iter().map(|&s| C64::new(0.1 * s * s * s - 0.05 * s, 0.02 * s * s) * 0.3).collect();
        let sd = ScatteringData::from_reflection(z, r).unwrap();
        for x in [0.731, 1.4999, -0.66, 1.98] {
            let want = C64::new(0.1 * x * x * x - 0.05 * x, 0.02 * x * x) * 0.3;
            assert!((reflection_at(&sd, x).unwrap() - want).norm() < 1e-14);
        }
        assert!(reflection_at(&sd, 2.5).is_err());
    }
}
