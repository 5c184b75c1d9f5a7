//! Parabolic cylinder models at the phase points ±z0.
//!
//! `beta12_plus` and `beta12_minus` follow the closed forms used by the
//! leading-order formula. The matrices built from the printed entry
//! formulas do not solve the intended jump problem as written; the
//! repaired versions used here are
//!
//! * +z0: sigma2 N(k) sigma2 with N the printed matrix, which satisfies
//!   N_+ = N_- V(r) with V(r) = [[1 - |r|^2, -conj r], [r, 1]];
//! * -z0: the printed matrix with the lower-half 12 prefactor
//!   e^{-3 pi nu / 4} and r in place of conj r in beta12, which again
//!   satisfies N_+ = N_- V(r).
//!
//! Their first moments are (M1)_12 = i conj(beta12_plus) at +z0 and
//! (M1)_12 = -i beta12 at -z0 with r in place of conj r.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::delta::{nu_value, reflection_at, DeltaData, Endpoint};
use crate::error::{Error, Result};
use crate::matrix::Mat2;
use crate::numerics::gamma::complex_gamma;
use crate::numerics::pcf::parabolic_cylinder_d;
use crate::phase::RayCoordinates;
use crate::scattering::ScatteringData;

const I: C64 = C64 { re: 0.0, im: 1.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };
const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalModel {
    pub z0: f64,
    pub nu_plus: f64,
    pub nu_minus: f64,
    pub a1: C64,
    pub a2: C64,
    pub r_plus: C64,
    pub r_minus: C64,
    pub delta0_plus: C64,
    pub delta0_minus: C64,
    pub beta12_plus: C64,
    pub beta21_plus: C64,
    pub beta12_minus: C64,
    pub beta21_minus: C64,
}

/// beta12 at +z0 for reflection value r (nu from |r|).
pub fn beta12_plus(r: C64) -> Result<C64> {
    if r == ZERO {
        return Err(Error::ZeroReflectionAtPhasePoint);
    }
    let nu = nu_value(r.norm())?;
    let g = complex_gamma(I * nu)?;
    Ok(-(2.0 * PI).sqrt() * (-PI * nu / 2.0).exp() * C64::from_polar(1.0, -FRAC_PI_4) / (r.conj() * g))
}

/// beta12 at -z0 for reflection value r.
pub fn beta12_minus(r: C64) -> Result<C64> {
    if r == ZERO {
        return Err(Error::ZeroReflectionAtPhasePoint);
    }
    let nu = nu_value(r.norm())?;
    let g = complex_gamma(-I * nu)?;
    Ok((2.0 * PI).sqrt() * (-PI * nu / 2.0).exp() * C64::from_polar(1.0, FRAC_PI_4) / (r.conj() * g))
}

/// Model from the reflection values at ±z0 and the delta constants.
pub fn local_model_from_values(z0: f64, r_plus: C64, r_minus: C64, delta0_plus: C64, delta0_minus: C64) -> Result<LocalModel> {
    let nu_plus = nu_value(r_plus.norm())?;
    let nu_minus = nu_value(r_minus.norm())?;
    let b12p = beta12_plus(r_plus)?;
    let b12m = beta12_minus(r_minus)?;
    Ok(LocalModel {
        z0,
        nu_plus,
        nu_minus,
        a1: I * nu_plus,
        a2: I * nu_minus,
        r_plus,
        r_minus,
        delta0_plus,
        delta0_minus,
        beta12_plus: b12p,
        beta21_plus: nu_plus / b12p,
        beta12_minus: b12m,
        beta21_minus: nu_minus / b12m,
    })
}

/// A model with r(±z0) = 0: every beta is zero and so is the leading term.
pub fn trivial_local_model(z0: f64) -> LocalModel {
    LocalModel {
        z0,
        nu_plus: 0.0,
        nu_minus: 0.0,
        a1: ZERO,
        a2: ZERO,
        r_plus: ZERO,
        r_minus: ZERO,
        delta0_plus: ONE,
        delta0_minus: ONE,
        beta12_plus: ZERO,
        beta21_plus: ZERO,
        beta12_minus: ZERO,
        beta21_minus: ZERO,
    }
}

pub fn build_local_model(sd: &ScatteringData, dd: &DeltaData, ray: &RayCoordinates) -> Result<LocalModel> {
    if (dd.z0 - ray.z0).abs() > 1e-12 * ray.z0 {
        return Err(Error::InvalidInput(format!("delta data built for z0 = {}, ray has {}", dd.z0, ray.z0)));
    }
    let rp = reflection_at(sd, ray.z0)?;
    let rm = reflection_at(sd, -ray.z0)?;
    local_model_from_values(ray.z0, rp, rm, dd.delta0_plus, dd.delta0_minus)
}

/// (i beta12_plus, -i beta12_minus, 0).
pub fn mtilde1_from_beta(lm: &LocalModel) -> (C64, C64, C64) {
    (I * lm.beta12_plus, -I * lm.beta12_minus, ZERO)
}

/// V(r) = [[1 - |r|^2, -conj r], [r, 1]].
pub fn model_jump(r: C64) -> Mat2 {
    Mat2::new(C64::new(1.0 - r.norm_sqr(), 0.0), -r.conj(), r, ONE)
}

/// The reflection value seen by the scaled model at ±z0, including the
/// factors delta0^{-2} (-alpha t / z0)^{i nu} e^{-i alpha t / z0}.
pub fn effective_reflection(endpoint: Endpoint, lm: &LocalModel, ray: &RayCoordinates) -> C64 {
    let (r, nu, d0) = match endpoint {
        Endpoint::Plus => (lm.r_plus, lm.nu_plus, lm.delta0_plus),
        Endpoint::Minus => (lm.r_minus, lm.nu_minus, lm.delta0_minus),
    };
    let scale = -ray.alpha * ray.t / ray.z0;
    let phase = nu * scale.ln() - ray.alpha * ray.t / ray.z0;
    r / (d0 * d0) * C64::from_polar(1.0, phase)
}

/// The scaled jump V_{±z0} with its scalar factors.
pub fn scaled_model_jump(endpoint: Endpoint, lm: &LocalModel, ray: &RayCoordinates) -> Mat2 {
    model_jump(effective_reflection(endpoint, lm, ray))
}

fn d(a: C64, w: C64) -> Result<C64> {
    parabolic_cylinder_d(a, w)
}

/// d/dk D_a(c k) + s (i k / 2) D_a(c k).
fn dk_comb(a: C64, c: C64, k: C64, s: f64) -> Result<C64> {
    let w = c * k;
    let da = d(a, w)?;
    let deriv = c * (w / 2.0 * da - d(a + 1.0, w)?);
    Ok(deriv + s * 0.5 * I * k * da)
}

fn cis(x: f64) -> C64 {
    C64::from_polar(1.0, x)
}

/// The entry formulas exactly as printed (including the lower-half 12
/// prefactor at -z0), with the second branch of every entry taken in
/// Im k < 0.
pub fn n_matrix_printed(endpoint: Endpoint, k: C64, nu: f64, beta12: C64, beta21: C64) -> Result<Mat2> {
    if k.im == 0.0 {
        return Err(Error::InvalidInput("N is evaluated off the real k axis".into()));
    }
    let a = I * nu;
    let e = |x: f64| (x * PI * nu).exp();
    let up = k.im > 0.0;
    let m = match endpoint {
        Endpoint::Plus => {
            if up {
                let (c1, c3) = (cis(-FRAC_PI_4), cis(-3.0 * FRAC_PI_4));
                Mat2::new(
                    e(0.25) * d(-a, c1 * k)?,
                    e(-0.75) / beta21 * dk_comb(a, c3, k, 1.0)?,
                    e(0.25) / beta12 * dk_comb(-a, c1, k, -1.0)?,
                    e(-0.75) * d(a, c3 * k)?,
                )
            } else {
                let (c1, c3) = (cis(FRAC_PI_4), cis(3.0 * FRAC_PI_4));
                Mat2::new(
                    e(-0.75) * d(-a, c3 * k)?,
                    e(0.25) / beta21 * dk_comb(a, c1, k, 1.0)?,
                    e(-0.75) / beta12 * dk_comb(-a, c3, k, -1.0)?,
                    e(0.25) * d(a, c1 * k)?,
                )
            }
        }
        Endpoint::Minus => {
            if up {
                let (c1, c3) = (cis(-FRAC_PI_4), cis(-3.0 * FRAC_PI_4));
                Mat2::new(
                    e(-0.75) * d(a, c3 * k)?,
                    e(0.25) / beta21 * dk_comb(-a, c1, k, -1.0)?,
                    e(-0.75) / beta12 * dk_comb(a, c3, k, 1.0)?,
                    e(0.25) * d(-a, c1 * k)?,
                )
            } else {
                let (c1, c3) = (cis(3.0 * FRAC_PI_4), cis(FRAC_PI_4));
                Mat2::new(
                    e(0.25) * d(a, c3 * k)?,
                    e(0.75) / beta21 * dk_comb(-a, c1, k, -1.0)?,
                    e(0.25) / beta12 * dk_comb(a, c3, k, 1.0)?,
                    e(-0.75) * d(-a, c1 * k)?,
                )
            }
        }
    };
    Ok(m)
}

/// Model matrix for the reflection value rho, solving N_+ = N_- V(rho).
pub fn n_matrix_for(endpoint: Endpoint, k: C64, rho: C64) -> Result<Mat2> {
    let nu = nu_value(rho.norm())?;
    if rho == ZERO {
        let w = (-0.25 * I * k * k).exp();
        return Ok(Mat2::diag(w, 1.0 / w));
    }
    match endpoint {
        Endpoint::Plus => {
            let b12 = beta12_plus(rho)?;
            let n = n_matrix_printed(endpoint, k, nu, b12, nu / b12)?;
            let [[a, b], [c, dd]] = n.0;
            Ok(Mat2::new(dd, -c, -b, a))
        }
        Endpoint::Minus => {
            let b12 = beta12_minus(rho.conj())?;
            let mut n = n_matrix_printed(endpoint, k, nu, b12, nu / b12)?;
            if k.im < 0.0 {
                n.0[0][1] *= (-1.5 * PI * nu).exp();
            }
            Ok(n)
        }
    }
}

/// Repaired model at ±z0 for the unscaled reflection values of `lm`.
pub fn n_matrix(endpoint: Endpoint, k: C64, lm: &LocalModel) -> Result<Mat2> {
    let r = match endpoint {
        Endpoint::Plus => lm.r_plus,
        Endpoint::Minus => lm.r_minus,
    };
    n_matrix_for(endpoint, k, r)
}

/// Repaired model solving the scaled jump `scaled_model_jump`.
pub fn n_matrix_scaled(endpoint: Endpoint, k: C64, lm: &LocalModel, ray: &RayCoordinates) -> Result<Mat2> {
    n_matrix_for(endpoint, k, effective_reflection(endpoint, lm, ray))
}

/// max |N_+ V^{-1} N_-^{-1} - I| at real k, from evaluations at k ± i eps.
pub fn jump_defect(n_up: Mat2, n_down: Mat2, v: Mat2) -> f64 {
    (n_up * v.inv() * n_down.inv() - Mat2::identity()).max_abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic() -> LocalModel {
        local_model_from_values(1.0, C64::new(0.6, 0.0), C64::from_polar(0.45, 1.1), ONE, ONE).unwrap()
    }

    #[test]
    fn modulus_identity() {
        let lm = synthetic();
        assert!((lm.nu_plus - 0.0710287).abs() < 1e-6);
        assert!((lm.beta12_plus.norm() - lm.nu_plus.sqrt()).abs() < 1e-12);
        assert!((lm.beta12_plus.norm() - 0.26648).abs() < 5e-5);
        assert!((lm.beta12_minus.norm_sqr() - lm.nu_minus).abs() < 1e-12);
        assert_eq!(lm.beta21_plus, lm.nu_plus / lm.beta12_plus);
    }

    #[test]
    fn phase_components() {
        let r = C64::from_polar(0.6, 0.4);
        let b = beta12_plus(r).unwrap();
        let g = complex_gamma(I * nu_value(0.6).unwrap()).unwrap();
        let want = PI - FRAC_PI_4 - r.conj().arg() - g.arg();
        let diff = (b.arg() - want).rem_euclid(2.0 * PI);
        assert!(diff.min(2.0 * PI - diff) < 1e-10);
    }

    #[test]
    fn zero_reflection_is_an_error() {
        assert!(matches!(beta12_plus(ZERO), Err(Error::ZeroReflectionAtPhasePoint)));
        assert_eq!(mtilde1_from_beta(&trivial_local_model(1.0)).0, ZERO);
    }

    #[test]
    fn repaired_models_solve_their_jump() {
        let lm = synthetic();
        for ep in [Endpoint::Plus, Endpoint::Minus] {
            let r = if ep == Endpoint::Plus { lm.r_plus } else { lm.r_minus };
            for k in [-2.0, -1.0, 1.0, 2.0] {
                let up = n_matrix(ep, C64::new(k, 1e-12), &lm).unwrap();
                let dn = n_matrix(ep, C64::new(k, -1e-12), &lm).unwrap();
                assert!(jump_defect(up, dn, model_jump(r)) < 1e-8, "{ep:?} {k}");
            }
        }
    }

    #[test]
    fn printed_models_fail_their_jump() {
        let lm = synthetic();
        let k = 1.0;
        let up = n_matrix_printed(Endpoint::Plus, C64::new(k, 1e-12), lm.nu_plus, lm.beta12_plus, lm.beta21_plus).unwrap();
        let dn = n_matrix_printed(Endpoint::Plus, C64::new(k, -1e-12), lm.nu_plus, lm.beta12_plus, lm.beta21_plus).unwrap();
        assert!(jump_defect(up, dn, model_jump(lm.r_plus)) > 1e-2);
    }

    #[test]
    fn trivial_model_is_pure_exponential() {
        let k = C64::new(0.7, 0.3);
        let n = n_matrix_for(Endpoint::Plus, k, ZERO).unwrap();
        assert!((n.get(0, 0) - (-0.25 * I * k * k).exp()).norm() < 1e-15);
        let d0 = parabolic_cylinder_d(ZERO, cis(-3.0 * FRAC_PI_4) * k).unwrap();
        assert!((n.get(0, 0) - d0).norm() < 1e-12);
    }
}
