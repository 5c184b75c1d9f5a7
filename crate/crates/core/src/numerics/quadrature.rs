use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances::{GAUSS_POINTS, PV_WINDOW};

/// Complex samples on a strictly increasing real grid, read as the
/// piecewise-linear interpolant between nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    grid: Vec<f64>,
    values: Vec<C64>,
}

impl SampledFunction {
    pub fn new(grid: Vec<f64>, values: Vec<C64>) -> Result<Self> {
        if grid.len() < 2 {
            return Err(Error::InvalidInput("sampled function needs at least 2 nodes".into()));
        }
        if grid.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "grid has {} nodes but {} values",
                grid.len(),
                values.len()
            )));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("grid must be finite and strictly increasing".into()));
        }
        Ok(SampledFunction { grid, values })
    }

    pub fn from_real(grid: Vec<f64>, values: &[f64]) -> Result<Self> {
        Self::new(grid, values.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn lo(&self) -> f64 {
        self.grid[0]
    }

    pub fn hi(&self) -> f64 {
        self.grid[self.grid.len() - 1]
    }

    /// Index of the segment containing x (clamped to the grid).
    pub fn segment_of(&self, x: f64) -> usize {
        let n = self.grid.len();
        match self.grid.partition_point(|&g| g <= x) {
            0 => 0,
            i if i >= n => n - 2,
            i => i - 1,
        }
    }

    /// Linear interpolant, constant extension outside the grid.
    pub fn eval(&self, x: f64) -> C64 {
        if x <= self.lo() {
            return self.values[0];
        }
        if x >= self.hi() {
            return self.values[self.len() - 1];
        }
        let i = self.segment_of(x);
        let (p, q) = (self.grid[i], self.grid[i + 1]);
        let w = (x - p) / (q - p);
        self.values[i] * (1.0 - w) + self.values[i + 1] * w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Trapezoid,
    CompositeGauss,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rule: Rule,
    /// Sub-panels per grid segment for segments away from the pole.
    pub refinement: usize,
    /// Half-width, in units of the local grid step, of the neighbourhood of
    /// the pole that is integrated in closed form.
    pub pv_window: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { rule: Rule::CompositeGauss, refinement: 1, pv_window: PV_WINDOW }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.refinement < 1 || !(self.pv_window > 0.0) {
            return Err(Error::InvalidInput(format!("bad quadrature spec {self:?}")));
        }
        Ok(())
    }

    pub fn refined(&self) -> Self {
        QuadratureSpec { refinement: self.refinement * 2, ..*self }
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
            let dt = p1 / dp;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    (x, w)
}

fn dist_to_segment(z: C64, p: f64, q: f64) -> f64 {
    let xr = z.re.clamp(p, q);
    (z - xr).norm()
}

/// Closed-form integral of (f_lin(s) - fstar)/(s - z) over one segment.
fn exact_segment(p: f64, q: f64, fp: C64, fq: C64, z: C64, fstar: C64) -> Result<C64> {
    let m = (fq - fp) / (q - p);
    let coef = fp + m * (z - p) - fstar;
    let scale = fp.norm().max(fq.norm()).max(fstar.norm()).max(1e-300);
    let on_segment = z.im == 0.0 && z.re >= p && z.re <= q;
    if on_segment {
        if coef.norm() > 1e-12 * scale {
            return Err(Error::InvalidInput(format!(
                "non-integrable pole at {} (residual {:e})",
                z.re,
                coef.norm()
            )));
        }
        return Ok(m * (q - p));
    }
    let ratio = (q - z) / (p - z);
    let log = if z.im == 0.0 { C64::new(ratio.re.abs().ln(), 0.0) } else { ratio.ln() };
    Ok(m * (q - p) + coef * log)
}

/// ∫ (f(s) - fstar)/(s - z) ds over the grid of f. Segments within
/// `pv_window` steps of z are integrated exactly; the rest use the rule.
pub fn cauchy_integral_subtracted(
    f: &SampledFunction,
    z: C64,
    fstar: C64,
    spec: &QuadratureSpec,
) -> Result<C64> {
    spec.validate()?;
    let (gx, gw) = gauss_legendre(GAUSS_POINTS);
    let g = f.grid();
    let v = f.values();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..g.len() - 1 {
        let (p, q) = (g[i], g[i + 1]);
        let h = q - p;
        if dist_to_segment(z, p, q) <= spec.pv_window * h {
            acc += exact_segment(p, q, v[i], v[i + 1], z, fstar)?;
            continue;
        }
        let r = spec.refinement;
        let hs = h / r as f64;
        let lin = |s: f64| v[i] + (v[i + 1] - v[i]) * ((s - p) / h);
        for j in 0..r {
            let a = p + hs * j as f64;
            let b = a + hs;
            match spec.rule {
                Rule::Trapezoid => {
                    acc += 0.5 * hs * ((lin(a) - fstar) / (a - z) + (lin(b) - fstar) / (b - z));
                }
                Rule::CompositeGauss => {
                    let mid = 0.5 * (a + b);
                    let half = 0.5 * hs;
                    for (t, w) in gx.iter().zip(&gw) {
                        let s = mid + half * t;
                        acc += half * w * (lin(s) - fstar) / (s - z);
                    }
                }
            }
        }
    }
    Ok(acc)
}

/// ∫ f(s)/(s - z) ds over the sample interval; the principal value when z
/// is real and inside it.
pub fn cauchy_integral(f: &SampledFunction, z: C64, spec: &QuadratureSpec) -> Result<C64> {
    spec.validate()?;
    let (lo, hi) = (f.lo(), f.hi());
    let near = dist_to_segment(z, lo, hi);
    let i = f.segment_of(z.re);
    let h = f.grid()[i + 1] - f.grid()[i];
    if near > spec.pv_window * h {
        return cauchy_integral_subtracted(f, z, C64::new(0.0, 0.0), spec);
    }
    let fstar = f.eval(z.re);
    let body = cauchy_integral_subtracted(f, z, fstar, spec)?;
    if fstar == C64::new(0.0, 0.0) {
        return Ok(body);
    }
    let log = if z.im == 0.0 {
        let (a, b) = (hi - z.re, lo - z.re);
        if a == 0.0 || b == 0.0 {
            return Err(Error::InvalidInput(format!(
                "principal value undefined at the interval endpoint {}",
                z.re
            )));
        }
        C64::new((a / b).abs().ln(), 0.0)
    } else {
        ((hi - z) / (lo - z)).ln()
    };
    Ok(body + fstar * log)
}

/// Trapezoid antiderivative with F(grid[0]) = 0.
pub fn cumulative_integral(f: &SampledFunction) -> SampledFunction {
    let g = f.grid();
    let v = f.values();
    let mut out = Vec::with_capacity(g.len());
    let mut acc = C64::new(0.0, 0.0);
    out.push(acc);
    for i in 1..g.len() {
        acc += 0.5 * (g[i] - g[i - 1]) * (v[i] + v[i - 1]);
        out.push(acc);
    }
    SampledFunction { grid: g.to_vec(), values: out }
}

/// Uniform-step real cumulative trapezoid into a caller buffer.
pub fn cumtrapz_uniform(h: f64, f: &[f64], out: &mut [f64]) {
    let mut acc = 0.0;
    out[0] = 0.0;
    for i in 1..f.len() {
        acc += 0.5 * h * (f[i] + f[i - 1]);
        out[i] = acc;
    }
}

/// Complex counterpart of [`cumtrapz_uniform`].
pub fn cumtrapz_uniform_c(h: f64, f: &[C64], out: &mut [C64]) {
    let mut acc = C64::new(0.0, 0.0);
    out[0] = acc;
    for i in 1..f.len() {
        acc += 0.5 * h * (f[i] + f[i - 1]);
        out[i] = acc;
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { b } else { a + h * i as f64 }).collect()
}
