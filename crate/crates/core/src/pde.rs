//! Method-of-lines solver for A_xt = alpha A + beta A B,
//! B_x = -(gamma/2) (|A|^2)_t.
//!
//! At fixed t the x-derivative is inverted with antiderivatives that vanish
//! at the left end,
//!
//!   A_t(x) = ∫_{x_min}^x (alpha A + beta A B) dy,
//!   B(x)   = -gamma ∫_{x_min}^x Re(conj(A) A_t) dy,
//!
//! and the coupled pair is solved by damped fixed-point iteration. Time
//! stepping is classical RK4. Information only travels to the right, so the
//! left end is an inflow boundary and the right end an outflow boundary.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{InitialData, ModelParameters};
use crate::numerics::quadrature::{cumtrapz_uniform, cumtrapz_uniform_c, linspace};
use crate::scattering::{evolution_phase, reflection};
use crate::tolerances::*;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldState {
    pub x_min: f64,
    pub x_max: f64,
    pub a: Vec<C64>,
    pub b: Vec<f64>,
    pub t: f64,
}

impl FieldState {
    pub fn from_initial(data: &InitialData) -> Self {
        FieldState { x_min: data.x_min, x_max: data.x_max, a: data.a0.clone(), b: vec![0.0; data.n()], t: 0.0 }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn h(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n() - 1) as f64
    }

    pub fn grid(&self) -> Vec<f64> {
        linspace(self.x_min, self.x_max, self.n())
    }

    pub fn max_amplitude(&self) -> f64 {
        self.a.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn l2_norm(&self) -> f64 {
        let h = self.h();
        let s: f64 = self.a.iter().map(|a| a.norm_sqr()).sum();
        (h * s).sqrt()
    }

    /// The state as initial data on the same grid (no endpoint checks).
    pub fn to_initial_data(&self) -> Result<InitialData> {
        InitialData::new_unchecked_decay(self.x_min, self.x_max, self.a.clone(), self.b.clone())
    }

    /// A at x by four-point Lagrange interpolation.
    pub fn a_at(&self, x: f64) -> Result<C64> {
        interp4(self.x_min, self.h(), &self.a, x, |v| v)
    }

    pub fn b_at(&self, x: f64) -> Result<f64> {
        Ok(interp4(self.x_min, self.h(), &self.b, x, |v| C64::new(v, 0.0))?.re)
    }
}

fn interp4<T: Copy>(x0: f64, h: f64, v: &[T], x: f64, to_c: impl Fn(T) -> C64) -> Result<C64> {
    let n = v.len();
    let u = (x - x0) / h;
    if !(u >= 0.0 && u <= (n - 1) as f64) {
        return Err(Error::RangeError(format!("x = {x} outside the field grid")));
    }
    let i = (u.floor() as usize).min(n - 2);
    let start = i.saturating_sub(1).min(n - 4);
    let mut acc = C64::new(0.0, 0.0);
    for j in start..start + 4 {
        let mut w = 1.0;
        for k in start..start + 4 {
            if k != j {
                w *= (u - k as f64) / (j as f64 - k as f64);
            }
        }
        acc += to_c(v[j]) * w;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolveConfig {
    pub dt: f64,
    pub fixed_point_tol: f64,
    pub fixed_point_max_iter: usize,
    pub t_end: f64,
    pub damping: f64,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        EvolveConfig {
            dt: 0.01,
            fixed_point_tol: FIXED_POINT_TOL,
            fixed_point_max_iter: FIXED_POINT_MAX_ITER,
            t_end: 5.0,
            damping: FIXED_POINT_DAMPING,
        }
    }
}

impl EvolveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !(self.fixed_point_tol > 0.0) || self.fixed_point_max_iter == 0 {
            return Err(Error::InvalidInput("dt, fixed_point_tol and fixed_point_max_iter must be positive".into()));
        }
        if !(self.t_end >= 0.0) || !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::InvalidInput("t_end must be non-negative and damping in (0, 1]".into()));
        }
        Ok(())
    }

    /// Checks the step against the two stability bounds for this state.
    pub fn check_stability(&self, state: &FieldState, params: &ModelParameters) -> Result<()> {
        let len = state.x_max - state.x_min;
        let lin = self.dt * params.alpha.abs() * len;
        if lin > VOLTERRA_STABILITY {
            return Err(Error::StepTooLarge(format!(
                "dt |alpha| (x_max - x_min) = {lin:.4} exceeds {VOLTERRA_STABILITY}"
            )));
        }
        let amp = self.dt * state.max_amplitude().powi(2);
        if amp > AMPLITUDE_STABILITY {
            return Err(Error::StepTooLarge(format!("dt max|A|^2 = {amp:.4} exceeds {AMPLITUDE_STABILITY}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rhs {
    pub a_t: Vec<C64>,
    pub b: Vec<f64>,
    pub iterations: usize,
    /// sup |F(B) - B| at exit.
    pub residual: f64,
}

/// Self-consistent (A_t, B) for the field `a`, starting from `b_guess`.
pub fn rhs_with(a: &[C64], b_guess: &[f64], h: f64, params: &ModelParameters, cfg: &EvolveConfig) -> Result<Rhs> {
    let n = a.len();
    let mut b = b_guess.to_vec();
    let mut f = vec![C64::new(0.0, 0.0); n];
    let mut a_t = vec![C64::new(0.0, 0.0); n];
    let mut g = vec![0.0; n];
    let mut bn = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for it in 1..=cfg.fixed_point_max_iter {
        for i in 0..n {
            f[i] = a[i] * (params.alpha + params.beta * b[i]);
        }
        cumtrapz_uniform_c(h, &f, &mut a_t);
        for i in 0..n {
            g[i] = (a[i].conj() * a_t[i]).re;
        }
        cumtrapz_uniform(h, &g, &mut bn);
        let scale = b.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        residual = 0.0;
        for i in 0..n {
            bn[i] *= -params.gamma;
            residual = residual.max((bn[i] - b[i]).abs());
        }
        if !residual.is_finite() {
            break;
        }
        if residual <= cfg.fixed_point_tol * scale {
            for i in 0..n {
                f[i] = a[i] * (params.alpha + params.beta * bn[i]);
            }
            cumtrapz_uniform_c(h, &f, &mut a_t);
            return Ok(Rhs { a_t, b: bn, iterations: it, residual });
        }
        for i in 0..n {
            b[i] += cfg.damping * (bn[i] - b[i]);
        }
    }
    Err(Error::FixedPointDivergence { iters: cfg.fixed_point_max_iter, residual })
}

/// (A_t, B) for the state, warm-started from its stored B.
pub fn rhs(state: &FieldState, params: &ModelParameters, cfg: &EvolveConfig) -> Result<(Vec<C64>, Vec<f64>)> {
    let r = rhs_with(&state.a, &state.b, state.h(), params, cfg)?;
    Ok((r.a_t, r.b))
}

fn axpy(a: &[C64], k: &[C64], s: f64) -> Vec<C64> {
    a.iter().zip(k).map(|(x, y)| x + y * s).collect()
}

/// One RK4 step of size dt; k1 may be supplied from a previous evaluation.
fn rk4(state: &FieldState, k1: Option<Rhs>, dt: f64, params: &ModelParameters, cfg: &EvolveConfig) -> Result<(FieldState, Rhs, usize)> {
    let h = state.h();
    let r1 = match k1 {
        Some(r) => r,
        None => rhs_with(&state.a, &state.b, h, params, cfg)?,
    };
    let r2 = rhs_with(&axpy(&state.a, &r1.a_t, 0.5 * dt), &r1.b, h, params, cfg)?;
    let r3 = rhs_with(&axpy(&state.a, &r2.a_t, 0.5 * dt), &r2.b, h, params, cfg)?;
    let r4 = rhs_with(&axpy(&state.a, &r3.a_t, dt), &r3.b, h, params, cfg)?;
    let a: Vec<C64> = (0..state.n())
        .map(|i| state.a[i] + (r1.a_t[i] + 2.0 * r2.a_t[i] + 2.0 * r3.a_t[i] + r4.a_t[i]) * (dt / 6.0))
        .collect();
    let rn = rhs_with(&a, &r4.b, h, params, cfg)?;
    let iters = r1.iterations.max(r2.iterations).max(r3.iterations).max(r4.iterations).max(rn.iterations);
    let next = FieldState { x_min: state.x_min, x_max: state.x_max, a, b: rn.b.clone(), t: state.t + dt };
    Ok((next, rn, iters))
}

/// Advances the state by cfg.dt.
pub fn step(state: &FieldState, params: &ModelParameters, cfg: &EvolveConfig) -> Result<FieldState> {
    cfg.validate()?;
    Ok(rk4(state, None, cfg.dt, params, cfg)?.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolveReport {
    pub steps: usize,
    pub max_fixed_point_iterations: usize,
    /// max over steps of |A_t(x_max)| = |∫ (alpha A + beta A B) dy|.
    pub right_defect: f64,
    /// max over steps of |B(x_max)|.
    pub b_right: f64,
    pub l2_initial: f64,
    pub l2_final: f64,
}

fn check_inflow(state: &FieldState) -> Result<()> {
    let peak = state.max_amplitude();
    if peak == 0.0 {
        return Ok(());
    }
    let h = state.h();
    let i_peak = state.a.iter().position(|a| a.norm() == peak).unwrap_or(0);
    let cut = state.x_min + ESCAPE_MARGIN * h * i_peak as f64;
    let mut edge: f64 = 0.0;
    for (i, a) in state.a.iter().enumerate() {
        if state.x_min + h * i as f64 > cut {
            break;
        }
        edge = edge.max(a.norm());
    }
    if edge > ESCAPE_LEVEL * peak {
        return Err(Error::DomainEscape { t: state.t, amplitude: edge / peak });
    }
    Ok(())
}

/// Evolves through the checkpoints (increasing, > 0), returning a snapshot
/// at each. Step sizes are shrunk slightly so every checkpoint is hit.
pub fn evolve_checkpoints(
    data: &InitialData,
    params: &ModelParameters,
    cfg: &EvolveConfig,
    checkpoints: &[f64],
) -> Result<(Vec<FieldState>, EvolveReport)> {
    cfg.validate()?;
    params.validate()?;
    if checkpoints.windows(2).any(|w| !(w[1] > w[0])) || checkpoints.first().is_some_and(|&t| !(t >= 0.0)) {
        return Err(Error::InvalidInput("checkpoints must be non-negative and increasing".into()));
    }
    let mut state = FieldState::from_initial(data);
    cfg.check_stability(&state, params)?;
    let first = rhs_with(&state.a, &state.b, state.h(), params, cfg)?;
    state.b = first.b.clone();
    let mut report = EvolveReport {
        steps: 0,
        max_fixed_point_iterations: first.iterations,
        right_defect: first.a_t[state.n() - 1].norm(),
        b_right: state.b[state.n() - 1].abs(),
        l2_initial: state.l2_norm(),
        l2_final: 0.0,
    };
    let mut k1 = Some(first);
    let mut out = Vec::with_capacity(checkpoints.len());
    for &tc in checkpoints {
        let span = tc - state.t;
        let nsteps = if span > 0.0 { (span / cfg.dt - 1e-9).ceil().max(1.0) as usize } else { 0 };
        for s in 0..nsteps {
            let dt = span / nsteps as f64;
            cfg.check_stability(&state, params)?;
            let (mut next, rn, iters) = rk4(&state, k1.take(), dt, params, cfg)?;
            if s + 1 == nsteps {
                next.t = tc;
            }
            report.steps += 1;
            report.max_fixed_point_iterations = report.max_fixed_point_iterations.max(iters);
            report.right_defect = report.right_defect.max(rn.a_t[next.n() - 1].norm());
            report.b_right = report.b_right.max(next.b[next.n() - 1].abs());
            if next.a.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
                return Err(Error::FixedPointDivergence { iters, residual: f64::INFINITY });
            }
            check_inflow(&next)?;
            state = next;
            k1 = Some(rn);
        }
        out.push(state.clone());
    }
    report.l2_final = state.l2_norm();
    Ok((out, report))
}

/// The state at cfg.t_end.
pub fn evolve(data: &InitialData, params: &ModelParameters, cfg: &EvolveConfig) -> Result<(FieldState, EvolveReport)> {
    let (mut s, r) = evolve_checkpoints(data, params, cfg, &[cfg.t_end])?;
    Ok((s.pop().expect("one checkpoint"), r))
}

/// Multiplies A by a cos^2 ramp from 1 at `start` to 0 at x_max, so the
/// outflow tail can be scattered without a hard cut.
pub fn taper_right(state: &mut FieldState, start: f64) {
    let h = state.h();
    let width = state.x_max - start;
    if !(width > 0.0) {
        return;
    }
    for i in 0..state.n() {
        let x = state.x_min + h * i as f64;
        if x > start {
            let u = ((x - start) / width).min(1.0);
            state.a[i] *= (0.5 * std::f64::consts::PI * u).cos().powi(2);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsospectralReport {
    pub t: f64,
    /// sup over the grid of | |s11(t)| - |s11(0)| |.
    pub s11_defect: f64,
    /// sup |r(z; t) - r(z; 0) e^{-i alpha t / (2z)}|.
    pub r_defect: f64,
    pub r_worst_z: f64,
    /// The same with the opposite sign in the exponent.
    pub r_defect_opposite: f64,
    /// max | |r(z; t)| - |r(z; 0)| |.
    pub r_modulus_defect: f64,
    pub taper_start: f64,
    pub evolve: EvolveReport,
}

/// Evolves to cfg.t_end, tapers the outflow tail from `taper_start` and
/// compares the scattering data of the final state with those of the data.
pub fn isospectral_check(
    data: &InitialData,
    params: &ModelParameters,
    cfg: &EvolveConfig,
    z_grid: &[f64],
    taper_start: f64,
) -> Result<IsospectralReport> {
    let (state, evolve) = evolve(data, params, cfg)?;
    isospectral_compare(data, &state, evolve, params, z_grid, taper_start)
}

/// The comparison of `isospectral_check` for an already evolved state.
pub fn isospectral_compare(
    data: &InitialData,
    state: &FieldState,
    evolve: EvolveReport,
    params: &ModelParameters,
    z_grid: &[f64],
    taper_start: f64,
) -> Result<IsospectralReport> {
    let sd0 = reflection(data, z_grid)?;
    let mut state = state.clone();
    taper_right(&mut state, taper_start);
    let sd = reflection(&state.to_initial_data()?, z_grid)?;
    let mut rep = IsospectralReport {
        t: state.t,
        s11_defect: 0.0,
        r_defect: 0.0,
        r_worst_z: f64::NAN,
        r_defect_opposite: 0.0,
        r_modulus_defect: 0.0,
        taper_start,
        evolve,
    };
    for i in 0..z_grid.len() {
        let ph = evolution_phase(z_grid[i], state.t, params);
        rep.s11_defect = rep.s11_defect.max((sd.s11[i].norm() - sd0.s11[i].norm()).abs());
        let e = (sd.r[i] - sd0.r[i] * ph).norm();
        if !(e <= rep.r_defect) {
            rep.r_defect = e;
            rep.r_worst_z = z_grid[i];
        }
        rep.r_defect_opposite = rep.r_defect_opposite.max((sd.r[i] - sd0.r[i] * ph.conj()).norm());
        rep.r_modulus_defect = rep.r_modulus_defect.max((sd.r_abs[i] - sd0.r_abs[i]).abs());
    }
    Ok(rep)
}

/// Pointwise residual of A_xt - alpha A - beta A B at the middle state,
/// from three states dt apart (central differences in t and x).
pub fn pde_residual(prev: &FieldState, mid: &FieldState, next: &FieldState, params: &ModelParameters) -> f64 {
    let dt = next.t - prev.t;
    let h = mid.h();
    let n = mid.n();
    let at: Vec<C64> = (0..n).map(|i| (next.a[i] - prev.a[i]) / dt).collect();
    let mut worst: f64 = 0.0;
    for i in 1..n - 1 {
        let axt = (at[i + 1] - at[i - 1]) / (2.0 * h);
        let r = axt - mid.a[i] * (params.alpha + params.beta * mid.b[i]);
        worst = worst.max(r.norm());
    }
    worst
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub t: f64,
    pub x: f64,
    pub a_num: C64,
    pub a_leading: C64,
    pub ratio: f64,
    pub residual: f64,
    pub b_num: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub z0: f64,
    pub rows: Vec<CompareRow>,
    /// Least-squares p in residual ~ C t^{-p}.
    pub residual_exponent: f64,
    pub evolve: EvolveReport,
}

/// Least-squares slope of log y against log x.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Evolves `data` and compares A at x = -alpha t / (4 z0^2) against the
/// leading term `leading(t)` at each checkpoint.
pub fn compare_asymptotics(
    data: &InitialData,
    params: &ModelParameters,
    cfg: &EvolveConfig,
    ray_z0: f64,
    t_checkpoints: &[f64],
    leading: impl Fn(f64) -> Result<C64>,
) -> Result<CompareReport> {
    let (states, evolve) = evolve_checkpoints(data, params, cfg, t_checkpoints)?;
    let mut rows = Vec::with_capacity(states.len());
    for s in &states {
        let x = -params.alpha * s.t / (4.0 * ray_z0 * ray_z0);
        let a_num = s.a_at(x)?;
        let a_leading = leading(s.t)?;
        let ratio = if a_leading.norm() > 0.0 { a_num.norm() / a_leading.norm() } else { f64::NAN };
        rows.push(CompareRow { t: s.t, x, a_num, a_leading, ratio, residual: (a_num - a_leading).norm(), b_num: s.b_at(x)? });
    }
    let ts: Vec<f64> = rows.iter().map(|r| r.t).collect();
    let res: Vec<f64> = rows.iter().map(|r| r.residual).collect();
    let residual_exponent = if rows.len() >= 2 && res.iter().all(|&r| r > 0.0) { -loglog_slope(&ts, &res) } else { f64::NAN };
    Ok(CompareReport { z0: ray_z0, rows, residual_exponent, evolve })
}
