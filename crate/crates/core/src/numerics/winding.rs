//! Argument-principle zero counting along a closed polygon.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct WindingSpec {
    pub samples_per_side: usize,
    /// Largest accepted phase increment between neighbouring samples.
    pub max_step: f64,
    /// Bisection levels allowed on a segment whose increment is too large.
    pub max_refine: usize,
}

fn darg(a: C64, b: C64) -> f64 {
    (b / a).arg()
}

fn refine<F>(f: &F, za: C64, fa: C64, zb: C64, fb: C64, depth: usize, spec: &WindingSpec) -> Result<f64>
where
    F: Fn(C64) -> Result<C64>,
{
    let d = darg(fa, fb);
    if d.abs() <= spec.max_step {
        return Ok(d);
    }
    if depth >= spec.max_refine {
        return Err(Error::ContourTooCoarse(d.abs()));
    }
    let zm = 0.5 * (za + zb);
    let fm = nonzero(f(zm)?, zm)?;
    Ok(refine(f, za, fa, zm, fm, depth + 1, spec)? + refine(f, zm, fm, zb, fb, depth + 1, spec)?)
}

fn nonzero(v: C64, z: C64) -> Result<C64> {
    if v.norm() == 0.0 || !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::InvalidInput(format!("function vanishes or is not finite on the contour at {z}")));
    }
    Ok(v)
}

/// Winding number of f around the polygon through `corners` (closed
/// automatically, counter-clockwise for a positive count of zeros).
pub fn winding_number<F>(f: F, corners: &[C64], spec: &WindingSpec) -> Result<i64>
where
    F: Fn(C64) -> Result<C64> + Sync,
{
    let m = spec.samples_per_side.max(1);
    let mut pts = Vec::with_capacity(corners.len() * m + 1);
    for (i, &a) in corners.iter().enumerate() {
        let b = corners[(i + 1) % corners.len()];
        for j in 0..m {
            pts.push(a + (b - a) * (j as f64 / m as f64));
        }
    }
    pts.push(corners[0]);
    let vals: Vec<C64> = pts
        .par_iter()
        .map(|&z| f(z).and_then(|v| nonzero(v, z)))
        .collect::<Result<_>>()?;
    let total: f64 = (0..pts.len() - 1)
        .into_par_iter()
        .map(|i| refine(&f, pts[i], vals[i], pts[i + 1], vals[i + 1], 0, spec))
        .collect::<Result<Vec<f64>>>()?
        .iter()
        .sum();
    Ok((total / (2.0 * std::f64::consts::PI)).round() as i64)
}

pub fn rectangle(x0: f64, x1: f64, y0: f64, y1: f64) -> [C64; 4] {
    [C64::new(x0, y0), C64::new(x1, y0), C64::new(x1, y1), C64::new(x0, y1)]
}
