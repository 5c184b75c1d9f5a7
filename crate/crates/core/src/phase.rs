//! Phase function geometry along a ray x/t = const and the jump matrices
//! of the oscillatory Riemann-Hilbert problem and its deformations.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::delta::{delta, delta_boundary, reflection_at, DeltaData};
use crate::error::{Error, Result};
use crate::local_model::LocalModel;
use crate::matrix::Mat2;
use crate::numerics::quadrature::QuadratureSpec;
use crate::scattering::ScatteringData;
use crate::tolerances::{CONTOUR_TRUNCATION, NEUTRAL_TOL};

const I: C64 = C64 { re: 0.0, im: 1.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };
const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayCoordinates {
    pub x: f64,
    pub t: f64,
    pub alpha: f64,
    pub z0: f64,
}

impl RayCoordinates {
    pub fn new(alpha: f64, x: f64, t: f64) -> Result<Self> {
        let (z0, _) = critical_points(alpha, x, t)?;
        Ok(RayCoordinates { x, t, alpha, z0 })
    }

    /// The ray point with prescribed z0 at time t.
    pub fn from_z0(alpha: f64, z0: f64, t: f64) -> Result<Self> {
        if !(z0 > 0.0) || !z0.is_finite() {
            return Err(Error::InvalidInput(format!("z0 must be positive, got {z0}")));
        }
        let x = -alpha * t / (4.0 * z0 * z0);
        let ray = RayCoordinates::new(alpha, x, t)?;
        Ok(RayCoordinates { z0, ..ray })
    }
}

/// ±z0 = ±sqrt(-alpha t / (4 x)).
pub fn critical_points(alpha: f64, x: f64, t: f64) -> Result<(f64, f64)> {
    if !(t > 0.0) || !t.is_finite() || !alpha.is_finite() || !x.is_finite() {
        return Err(Error::InvalidInput(format!("need finite alpha, x and t > 0 (t = {t})")));
    }
    let ax = alpha * x;
    if ax > 0.0 {
        return Err(Error::WrongRegime(ax));
    }
    if ax == 0.0 {
        return Err(Error::InvalidInput("alpha * x = 0 has no finite phase points".into()));
    }
    let z0 = (-alpha * t / (4.0 * x)).sqrt();
    Ok((z0, -z0))
}

/// theta(z) = z x / t - alpha / (4 z).
pub fn theta(z: C64, ray: &RayCoordinates) -> Result<C64> {
    if z == ZERO {
        return Err(Error::PoleAtZero);
    }
    Ok(z * (ray.x / ray.t) - ray.alpha / (4.0 * z))
}

/// theta(z) = -(alpha z / 4) (1/z0^2 + 1/z^2).
pub fn theta_rewritten(z: C64, ray: &RayCoordinates) -> Result<C64> {
    if z == ZERO {
        return Err(Error::PoleAtZero);
    }
    Ok(-(ray.alpha * z / 4.0) * (1.0 / (ray.z0 * ray.z0) + 1.0 / (z * z)))
}

/// exp(2 i t theta(z)); for real z the phase is reduced mod 2 pi first.
pub fn oscillation(z: C64, ray: &RayCoordinates) -> Result<C64> {
    let th = theta(z, ray)?;
    if z.im == 0.0 {
        Ok(C64::from_polar(1.0, (2.0 * ray.t * th.re).rem_euclid(TAU)))
    } else {
        Ok((2.0 * I * ray.t * th).exp())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decay {
    /// |exp(2 i t theta)| grows.
    Grows,
    /// |exp(2 i t theta)| decays.
    Decays,
    Neutral,
}

/// Sign of Re(2 i t theta(z)).
pub fn decay_sign(z: C64, ray: &RayCoordinates) -> Result<Decay> {
    if z.im == 0.0 {
        return Ok(Decay::Neutral);
    }
    let v = (2.0 * I * ray.t * theta(z, ray)?).re;
    if v.abs() < NEUTRAL_TOL {
        return Err(Error::NeutralOnContour);
    }
    Ok(if v < 0.0 { Decay::Decays } else { Decay::Grows })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartSample {
    pub z: C64,
    /// Re(2 i t theta(z)).
    pub value: f64,
    pub sign: Option<Decay>,
}

/// Cell-centred n x n chart of Re(2 i t theta) over the given box.
pub fn region_chart(ray: &RayCoordinates, re: (f64, f64), im: (f64, f64), n: usize) -> Vec<ChartSample> {
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        let y = im.0 + (im.1 - im.0) * (j as f64 + 0.5) / n as f64;
        for i in 0..n {
            let x = re.0 + (re.1 - re.0) * (i as f64 + 0.5) / n as f64;
            let z = C64::new(x, y);
            let value = theta(z, ray).map(|th| (2.0 * I * ray.t * th).re).unwrap_or(f64::NAN);
            out.push(ChartSample { z, value, sign: decay_sign(z, ray).ok() });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ContourLabel {
    RealAxis,
    Sigma(u8),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpMatrix {
    pub z: C64,
    pub label: ContourLabel,
    pub matrix: Mat2,
}

/// J(z) = e^{-i t theta ad sigma3} [[1 - |r|^2, -conj r], [r, 1]] at a node of
/// the spectral grid.
pub fn jump_j(z: f64, sd: &ScatteringData, ray: &RayCoordinates) -> Result<JumpMatrix> {
    let tol = 1e-12 * z.abs().max(1.0);
    let i = sd
        .z
        .iter()
        .position(|&s| (s - z).abs() <= tol)
        .ok_or_else(|| Error::InvalidInput(format!("z = {z} is not a spectral grid node")))?;
    let r = sd.r[i];
    let e = oscillation(C64::new(z, 0.0), ray)?;
    let m = Mat2::new(C64::new(1.0 - r.norm_sqr(), 0.0), -r.conj() * e.conj(), r * e, ONE);
    Ok(JumpMatrix { z: C64::new(z, 0.0), label: ContourLabel::RealAxis, matrix: m })
}

/// The two triangular factors (left, right) of the conjugated jump at a
/// real z off the phase points.
pub fn jump_j1_factors(
    z: f64,
    sd: &ScatteringData,
    dd: &DeltaData,
    ray: &RayCoordinates,
    spec: &QuadratureSpec,
) -> Result<(Mat2, Mat2)> {
    if (z.abs() - ray.z0).abs() <= 1e-12 * ray.z0 {
        return Err(Error::OnCriticalPoint);
    }
    let r = reflection_at(sd, z)?;
    let e = oscillation(C64::new(z, 0.0), ray)?;
    if z.abs() > ray.z0 {
        let d = delta(C64::new(z, 0.0), dd, spec)?;
        let d2 = d * d;
        let left = Mat2::new(ONE, -r.conj() * d2 * e.conj(), ZERO, ONE);
        let right = Mat2::new(ONE, ZERO, r / d2 * e, ONE);
        Ok((left, right))
    } else {
        let (dp, dm) = delta_boundary(z, dd, spec)?;
        let g = 1.0 - r.norm_sqr();
        let left = Mat2::new(ONE, ZERO, r / g / (dm * dm) * e, ONE);
        let right = Mat2::new(ONE, -r.conj() / g * dp * dp * e.conj(), ZERO, ONE);
        Ok((left, right))
    }
}

/// delta_-^{sigma3} J delta_+^{-sigma3} assembled directly (delta_± = delta off the band).
pub fn jump_j1(
    z: f64,
    sd: &ScatteringData,
    dd: &DeltaData,
    ray: &RayCoordinates,
    spec: &QuadratureSpec,
) -> Result<Mat2> {
    let r = reflection_at(sd, z)?;
    let e = oscillation(C64::new(z, 0.0), ray)?;
    let (dp, dm) = if z.abs() > ray.z0 {
        let d = delta(C64::new(z, 0.0), dd, spec)?;
        (d, d)
    } else {
        delta_boundary(z, dd, spec)?
    };
    let j = Mat2::new(C64::new(1.0 - r.norm_sqr(), 0.0), -r.conj() * e.conj(), r * e, ONE);
    Ok(Mat2::diag(dm, 1.0 / dm) * j * Mat2::diag(1.0 / dp, dp))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourPoint {
    pub z: C64,
    /// 1..=12
    pub segment: u8,
    pub h: f64,
}

/// Whether segment m is an unbounded ray.
pub fn is_unbounded(segment: u8) -> bool {
    matches!(segment, 1 | 4 | 6 | 7)
}

/// Base point and direction of segment m.
fn segment_geometry(segment: u8, z0: f64) -> Result<(f64, C64)> {
    let base = match segment {
        1..=4 => z0,
        5..=8 => -z0,
        9..=12 => 0.0,
        _ => return Err(Error::InvalidInput(format!("no contour segment {segment}"))),
    };
    let dir = C64::from_polar(1.0, (2.0 * segment as f64 - 1.0) * PI / 4.0);
    Ok((base, dir))
}

/// Largest arc parameter on segment m (the truncation length for rays).
pub fn segment_length(segment: u8, z0: f64) -> f64 {
    if is_unbounded(segment) {
        CONTOUR_TRUNCATION * z0
    } else {
        z0 * FRAC_1_SQRT_2
    }
}

pub fn contour_point(segment: u8, h: f64, z0: f64) -> Result<ContourPoint> {
    let (base, dir) = segment_geometry(segment, z0)?;
    let hmax = if is_unbounded(segment) { f64::INFINITY } else { z0 * FRAC_1_SQRT_2 };
    if !(h >= 0.0 && h <= hmax) {
        return Err(Error::InvalidInput(format!("arc parameter {h} outside segment {segment}")));
    }
    Ok(ContourPoint { z: base + dir * h, segment, h })
}

/// n points h_j = j L / n, j = 1..n, on segment m.
pub fn sample_segment(segment: u8, z0: f64, n: usize) -> Result<Vec<ContourPoint>> {
    let len = segment_length(segment, z0);
    (1..=n).map(|j| contour_point(segment, len * j as f64 / n as f64, z0)).collect()
}

/// The deformed jump on segment m.
pub fn jump_j2(p: &ContourPoint, lm: &LocalModel, ray: &RayCoordinates) -> Result<JumpMatrix> {
    let z = p.z;
    let z0 = ray.z0;
    let e = oscillation(z, ray)?;
    let (rp, rm) = (lm.r_plus, lm.r_minus);
    let (np, nm) = (lm.nu_plus, lm.nu_minus);
    let (dp2, dm2) = (lm.delta0_plus * lm.delta0_plus, lm.delta0_minus * lm.delta0_minus);
    let pw_p = |s: f64| (s * 2.0 * I * np * (z - z0).ln()).exp();
    let pw_m = |s: f64| (s * 2.0 * I * nm * (z + z0).ln()).exp();
    let gp = 1.0 - rp.norm_sqr();
    let gm = 1.0 - rm.norm_sqr();
    let lower = |v: C64| Mat2::new(ONE, ZERO, v, ONE);
    let upper = |v: C64| Mat2::new(ONE, v, ZERO, ONE);
    let m = match p.segment {
        1 => lower(rp / dp2 * pw_p(-1.0) * e),
        2 | 9 => upper(-(rp.conj() / gp * dp2 * pw_p(1.0)) / e),
        3 | 12 => lower(-(rp / gp / dp2 * pw_p(-1.0)) * e),
        4 => upper(rp.conj() * dp2 * pw_p(1.0) / e),
        5 | 10 => upper(-(rm.conj() / gm * dm2 * pw_m(1.0)) / e),
        6 => lower(rm / dm2 * pw_m(-1.0) * e),
        7 => upper(rm.conj() * dm2 * pw_m(1.0) / e),
        8 | 11 => lower(-(rm / gm / dm2 * pw_m(-1.0)) * e),
        s => return Err(Error::InvalidInput(format!("no contour segment {s}"))),
    };
    Ok(JumpMatrix { z, label: ContourLabel::Sigma(p.segment), matrix: m })
}

/// sup of |J2 - I| over n samples of each of the four segments through
/// the origin.
pub fn sigma0_sup(lm: &LocalModel, ray: &RayCoordinates, n: usize) -> Result<f64> {
    let mut sup: f64 = 0.0;
    for seg in 9..=12 {
        for p in sample_segment(seg, ray.z0, n)? {
            let j = jump_j2(&p, lm, ray)?;
            sup = sup.max((j.matrix - Mat2::identity()).max_abs());
        }
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ray() -> RayCoordinates {
        RayCoordinates::new(-1.0, 1.0, 4.0).unwrap()
    }

    #[test]
    fn theta_examples() {
        let r = ray();
        assert_eq!(r.z0, 1.0);
        assert!((theta(C64::new(1.0, 0.0), &r).unwrap() - C64::new(0.5, 0.0)).norm() < 1e-15);
        let a = theta(I, &r).unwrap();
        let b = theta_rewritten(I, &r).unwrap();
        assert!((a - b).norm() < 1e-12);
        assert!(matches!(theta(ZERO, &r), Err(Error::PoleAtZero)));
    }

    #[test]
    fn critical_point_examples() {
        assert_eq!(critical_points(-1.0, 1.0, 4.0).unwrap(), (1.0, -1.0));
        assert!((critical_points(-2.0, 1.0, 1.0).unwrap().0 - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(matches!(critical_points(-1.0, -1.0, 1.0), Err(Error::WrongRegime(_))));
        let r = RayCoordinates::new(-0.7, 2.3, 9.1).unwrap();
        let h = 1e-5;
        for z0 in [r.z0, -r.z0] {
            let f = |z: f64| theta(C64::new(z, 0.0), &r).unwrap().re;
            assert!(((f(z0 + h) - f(z0 - h)) / (2.0 * h)).abs() < 1e-10);
        }
    }

    #[test]
    fn decay_regions() {
        let r = ray();
        let z = C64::new(1.0, 0.0) + 1e-3 * C64::from_polar(1.0, PI / 4.0);
        assert_eq!(decay_sign(z, &r).unwrap(), Decay::Decays);
        assert_eq!(decay_sign(C64::new(0.5, 0.0), &r).unwrap(), Decay::Neutral);
        assert_eq!(decay_sign(C64::new(0.3, 0.2), &r).unwrap(), Decay::Grows);
        assert_eq!(decay_sign(C64::new(0.3, -0.2), &r).unwrap(), Decay::Decays);
        assert_eq!(decay_sign(C64::new(2.0, -0.2), &r).unwrap(), Decay::Grows);
        // a point on the unit circle off the axis is neutral
        assert!(matches!(decay_sign(C64::new(0.6, 0.8), &r), Err(Error::NeutralOnContour)));
    }

    #[test]
    fn contour_geometry() {
        let z0 = 1.3;
        let p = contour_point(2, z0 * FRAC_1_SQRT_2, z0).unwrap();
        let q = contour_point(9, z0 * FRAC_1_SQRT_2, z0).unwrap();
        assert!((p.z - q.z).norm() < 1e-14);
        let p = contour_point(8, z0 * FRAC_1_SQRT_2, z0).unwrap();
        let q = contour_point(11, z0 * FRAC_1_SQRT_2, z0).unwrap();
        assert!((p.z - q.z).norm() < 1e-14);
        assert!(contour_point(3, z0, z0).is_err());
        assert!(contour_point(13, 0.1, z0).is_err());
        assert_eq!(sample_segment(1, z0, 10).unwrap().last().unwrap().h, 8.0 * z0);
    }
}
