//! Leading-order long-time behaviour along rays x/t = const with alpha x < 0.

use std::collections::HashMap;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::delta::{build_delta_data, DeltaData};
use crate::error::{Error, Result};
use crate::local_model::{build_local_model, mtilde1_from_beta, trivial_local_model, LocalModel};
use crate::numerics::quadrature::QuadratureSpec;
use crate::phase::RayCoordinates;
use crate::scattering::ScatteringData;

pub const ERROR_ORDER: &str = "O(t^{-1})";

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticSolution {
    pub x: f64,
    pub t: f64,
    pub z0: f64,
    pub a_leading: C64,
    pub b_leading: f64,
    pub error_order: String,
    /// r vanishes at a phase point and the leading term was set to zero.
    pub degenerate: bool,
    pub local: LocalModel,
}

fn prefactor(ray: &RayCoordinates) -> f64 {
    4.0 * (ray.z0 / (-ray.alpha * ray.t)).sqrt()
}

/// 4 sqrt(z0 / (-alpha t)) (i beta12(z0) - i beta12(-z0)).
pub fn leading_a(lm: &LocalModel, ray: &RayCoordinates) -> C64 {
    prefactor(ray) * (I * lm.beta12_plus - I * lm.beta12_minus)
}

/// The same quantity through the first-moment entries.
pub fn leading_a_from_moments(m1: (C64, C64, C64), ray: &RayCoordinates) -> C64 {
    prefactor(ray) * (m1.0 + m1.1)
}

/// B vanishes at leading order; the remainder is `ERROR_ORDER`.
pub fn leading_b(_lm: &LocalModel, _ray: &RayCoordinates) -> f64 {
    0.0
}

fn local_or_trivial(sd: &ScatteringData, dd: &DeltaData, ray: &RayCoordinates) -> Result<(LocalModel, bool)> {
    match build_local_model(sd, dd, ray) {
        Ok(lm) => Ok((lm, false)),
        Err(Error::ZeroReflectionAtPhasePoint) => Ok((trivial_local_model(ray.z0), true)),
        Err(e) => Err(e),
    }
}

fn solution(ray: &RayCoordinates, lm: LocalModel, degenerate: bool) -> AsymptoticSolution {
    let m1 = mtilde1_from_beta(&lm);
    AsymptoticSolution {
        x: ray.x,
        t: ray.t,
        z0: ray.z0,
        a_leading: leading_a_from_moments(m1, ray),
        b_leading: leading_b(&lm, ray),
        error_order: ERROR_ORDER.to_string(),
        degenerate,
        local: lm,
    }
}

/// The leading-order solution at one ray point. When r vanishes at a
/// phase point the leading term is zero and `degenerate` is set.
pub fn asymptotic_solution(sd: &ScatteringData, ray: &RayCoordinates, spec: &QuadratureSpec) -> Result<AsymptoticSolution> {
    let dd = build_delta_data(sd, ray, spec)?;
    let (lm, degenerate) = local_or_trivial(sd, &dd, ray)?;
    Ok(solution(ray, lm, degenerate))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeProfile {
    pub t: f64,
    pub samples: Vec<AsymptoticSolution>,
    /// (x, message) for samples that could not be evaluated.
    pub errors: Vec<(f64, String)>,
}

/// leading_A over x at fixed t. Delta data are shared between samples with
/// the same z0.
pub fn envelope_profile(
    sd: &ScatteringData,
    alpha: f64,
    t: f64,
    x_samples: &[f64],
    spec: &QuadratureSpec,
) -> EnvelopeProfile {
    let rays: Vec<Result<RayCoordinates>> = x_samples.iter().map(|&x| RayCoordinates::new(alpha, x, t)).collect();
    let mut keys: Vec<u64> = rays.iter().filter_map(|r| r.as_ref().ok().map(|r| r.z0.to_bits())).collect();
    keys.sort_unstable();
    keys.dedup();
    let cache: HashMap<u64, Result<DeltaData>> = keys
        .par_iter()
        .map(|&k| {
            let ray = RayCoordinates::from_z0(alpha, f64::from_bits(k), t);
            (k, ray.and_then(|ray| build_delta_data(sd, &ray, spec)))
        })
        .collect();
    let results: Vec<Result<AsymptoticSolution>> = rays
        .par_iter()
        .map(|ray| {
            let ray = ray.clone()?;
            let dd = cache[&ray.z0.to_bits()].as_ref().map_err(|e| e.clone())?;
            let (lm, degenerate) = local_or_trivial(sd, dd, &ray)?;
            Ok(solution(&ray, lm, degenerate))
        })
        .collect();
    let mut samples = Vec::new();
    let mut errors = Vec::new();
    for (x, r) in x_samples.iter().zip(results) {
        match r {
            Ok(s) => samples.push(s),
            Err(e) => errors.push((*x, e.to_string())),
        }
    }
    EnvelopeProfile { t, samples, errors }
}
