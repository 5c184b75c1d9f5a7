//! Jost solutions, scattering coefficients and the reflection coefficient
//! of the spectral problem phi_x + i z sigma3 phi = X phi with
//! X = (i/2) [[0, A], [-conj(A), 0]].
//!
//! Columns are integrated in the oscillation-removed variable
//! mu = psi e^{i z x sigma3}, which tends to the identity at the launch end.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{det2, Mat2};
use crate::model::{InitialData, ModelParameters};
use crate::numerics::quadrature::linspace;
use crate::numerics::winding::{rectangle, winding_number, WindingSpec};
use crate::tolerances::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    MinusCol1,
    MinusCol2,
    PlusCol1,
    PlusCol2,
}

impl Column {
    fn side(self) -> Side {
        match self {
            Column::MinusCol1 | Column::MinusCol2 => Side::Left,
            Column::PlusCol1 | Column::PlusCol2 => Side::Right,
        }
    }

    fn first(self) -> bool {
        matches!(self, Column::MinusCol1 | Column::PlusCol1)
    }

    /// Whether the column is defined for this z (real axis or its half-plane).
    pub fn admits(self, z: C64) -> bool {
        z.im == 0.0
            || match self {
                Column::MinusCol1 | Column::PlusCol2 => z.im > 0.0,
                Column::MinusCol2 | Column::PlusCol1 => z.im < 0.0,
            }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JostConfig {
    pub x_ref: f64,
    pub blowup: f64,
}

impl Default for JostConfig {
    fn default() -> Self {
        JostConfig { x_ref: 0.0, blowup: JOST_BLOWUP }
    }
}

/// Jost columns at the reference node. A column is `None` when it is not
/// defined for the requested z (wrong half-plane) or belongs to the other side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JostPair {
    pub z: C64,
    pub x_ref: f64,
    pub psi_minus_col1: Option<[C64; 2]>,
    pub psi_minus_col2: Option<[C64; 2]>,
    pub psi_plus_col1: Option<[C64; 2]>,
    pub psi_plus_col2: Option<[C64; 2]>,
}

/// A at the cell midpoints (4-point cubic inside, quadratic at the ends).
pub fn midpoints(a: &[C64]) -> Vec<C64> {
    let n = a.len();
    (0..n - 1)
        .map(|i| {
            if i >= 1 && i + 2 < n {
                (-a[i - 1] + 9.0 * a[i] + 9.0 * a[i + 1] - a[i + 2]) / 16.0
            } else if i == 0 && n > 2 {
                (3.0 * a[0] + 6.0 * a[1] - a[2]) / 8.0
            } else if n > 2 {
                (3.0 * a[n - 1] + 6.0 * a[n - 2] - a[n - 3]) / 8.0
            } else {
                0.5 * (a[i] + a[i + 1])
            }
        })
        .collect()
}

struct Field<'a> {
    data: &'a InitialData,
    mid: &'a [C64],
}

#[inline]
fn rhs(z: C64, first: bool, a: C64, v: [C64; 2]) -> [C64; 2] {
    // X v with X = (i/2)[[0, A], [-conj A, 0]]
    let half_i = C64::new(0.0, 0.5);
    let xv0 = half_i * a * v[1];
    let xv1 = -half_i * a.conj() * v[0];
    let two_iz = C64::new(0.0, 2.0) * z;
    if first {
        [xv0, two_iz * v[1] + xv1]
    } else {
        [-two_iz * v[0] + xv0, xv1]
    }
}

fn integrate_column(f: &Field, z: C64, col: Column, i_ref: usize, blowup: f64) -> Result<[C64; 2]> {
    let a = &f.data.a0;
    let n = a.len();
    let first = col.first();
    let mut v = if first { [C64::new(1.0, 0.0), C64::new(0.0, 0.0)] } else { [C64::new(0.0, 0.0), C64::new(1.0, 0.0)] };
    let h = f.data.h();
    let step = |v: [C64; 2], a0: C64, am: C64, a1: C64, dt: f64| -> [C64; 2] {
        let k1 = rhs(z, first, a0, v);
        let k2 = rhs(z, first, am, [v[0] + 0.5 * dt * k1[0], v[1] + 0.5 * dt * k1[1]]);
        let k3 = rhs(z, first, am, [v[0] + 0.5 * dt * k2[0], v[1] + 0.5 * dt * k2[1]]);
        let k4 = rhs(z, first, a1, [v[0] + dt * k3[0], v[1] + dt * k3[1]]);
        [
            v[0] + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            v[1] + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ]
    };
    let check = |v: &[C64; 2]| -> Result<()> {
        let norm = v[0].norm().max(v[1].norm());
        if !(norm <= blowup) {
            return Err(Error::BlowUp { re: z.re, im: z.im, norm });
        }
        Ok(())
    };
    match col.side() {
        Side::Left => {
            for i in 0..i_ref {
                v = step(v, a[i], f.mid[i], a[i + 1], h);
                check(&v)?;
            }
        }
        Side::Right => {
            for i in (i_ref..n - 1).rev() {
                v = step(v, a[i + 1], f.mid[i], a[i], -h);
                check(&v)?;
            }
        }
    }
    // psi = mu e^{-i z x sigma3}
    let x = f.data.x(i_ref);
    let phase = if first { (-C64::i() * z * x).exp() } else { (C64::i() * z * x).exp() };
    Ok([v[0] * phase, v[1] * phase])
}

/// One Jost column at the reference node closest to `cfg.x_ref`.
pub fn jost_column(data: &InitialData, z: C64, col: Column, cfg: &JostConfig) -> Result<[C64; 2]> {
    let mid = midpoints(&data.a0);
    let f = Field { data, mid: &mid };
    jost_column_with(&f, z, col, cfg)
}

fn jost_column_with(f: &Field, z: C64, col: Column, cfg: &JostConfig) -> Result<[C64; 2]> {
    if !col.admits(z) {
        return Err(Error::InvalidInput(format!("{col:?} is not defined at z = {z}")));
    }
    integrate_column(f, z, col, f.data.nearest(cfg.x_ref), cfg.blowup)
}

/// Jost columns launched from one end of the grid.
pub fn jost_solve(data: &InitialData, z: C64, side: Side) -> Result<JostPair> {
    jost_solve_with(data, z, side, &JostConfig::default())
}

pub fn jost_solve_with(data: &InitialData, z: C64, side: Side, cfg: &JostConfig) -> Result<JostPair> {
    let mid = midpoints(&data.a0);
    let f = Field { data, mid: &mid };
    let get = |c: Column| -> Result<Option<[C64; 2]>> {
        if c.side() == side && c.admits(z) {
            jost_column_with(&f, z, c, cfg).map(Some)
        } else {
            Ok(None)
        }
    };
    Ok(JostPair {
        z,
        x_ref: data.x(data.nearest(cfg.x_ref)),
        psi_minus_col1: get(Column::MinusCol1)?,
        psi_minus_col2: get(Column::MinusCol2)?,
        psi_plus_col1: get(Column::PlusCol1)?,
        psi_plus_col2: get(Column::PlusCol2)?,
    })
}

/// The full scattering matrix at real z from all four Jost columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringMatrix {
    pub s11: C64,
    pub s12: C64,
    pub s21: C64,
    pub s22: C64,
}

impl ScatteringMatrix {
    pub fn as_mat(&self) -> Mat2 {
        Mat2::new(self.s11, self.s12, self.s21, self.s22)
    }
}

fn matrix_with(f: &Field, z: f64, cfg: &JostConfig) -> Result<ScatteringMatrix> {
    let z = C64::new(z, 0.0);
    let m1 = jost_column_with(f, z, Column::MinusCol1, cfg)?;
    let m2 = jost_column_with(f, z, Column::MinusCol2, cfg)?;
    let p1 = jost_column_with(f, z, Column::PlusCol1, cfg)?;
    let p2 = jost_column_with(f, z, Column::PlusCol2, cfg)?;
    Ok(ScatteringMatrix {
        s11: det2(m1, p2),
        s21: det2(p1, m1),
        s12: det2(m2, p2),
        s22: det2(p1, m2),
    })
}

pub fn scattering_matrix(data: &InitialData, z: f64, cfg: &JostConfig) -> Result<ScatteringMatrix> {
    let mid = midpoints(&data.a0);
    matrix_with(&Field { data, mid: &mid }, z, cfg)
}

fn check_dead_zone(z: f64) -> Result<()> {
    if !(z.abs() >= Z_MIN - 1e-12) {
        return Err(Error::InvalidInput(format!("|z| = {} lies in the dead zone |z| < {Z_MIN}", z.abs())));
    }
    Ok(())
}

/// (s11, s21) at real z from s11 = det(psi-^1, psi+^2), s21 = det(psi+^1, psi-^1).
pub fn scattering_coefficients(data: &InitialData, z: f64) -> Result<(C64, C64)> {
    scattering_coefficients_with(data, z, &JostConfig::default())
}

pub fn scattering_coefficients_with(data: &InitialData, z: f64, cfg: &JostConfig) -> Result<(C64, C64)> {
    check_dead_zone(z)?;
    let mid = midpoints(&data.a0);
    let f = Field { data, mid: &mid };
    let zc = C64::new(z, 0.0);
    let m1 = jost_column_with(&f, zc, Column::MinusCol1, cfg)?;
    let p1 = jost_column_with(&f, zc, Column::PlusCol1, cfg)?;
    let p2 = jost_column_with(&f, zc, Column::PlusCol2, cfg)?;
    Ok((det2(m1, p2), det2(p1, m1)))
}

/// s11 anywhere in the closed upper half-plane.
pub fn s11_upper(data: &InitialData, mid: &[C64], z: C64, cfg: &JostConfig) -> Result<C64> {
    let f = Field { data, mid };
    let m1 = jost_column_with(&f, z, Column::MinusCol1, cfg)?;
    let p2 = jost_column_with(&f, z, Column::PlusCol2, cfg)?;
    Ok(det2(m1, p2))
}

/// Independent second-order oracle: exact exponentials of the Lax matrix
/// over cells of width h centred on the nodes, A frozen per cell.
pub fn transfer_matrix_coefficients(data: &InitialData, z: f64) -> (C64, C64) {
    let z = C64::new(z, 0.0);
    let h = data.h();
    let mut m = Mat2::identity();
    for &a in &data.a0 {
        let u = Mat2::new(-C64::i() * z, C64::new(0.0, 0.5) * a, -C64::new(0.0, 0.5) * a.conj(), C64::i() * z);
        let lam2 = -z * z + 0.25 * a.norm_sqr();
        let lam = lam2.sqrt();
        let lh = lam * h;
        let (ch, sh_over) = if lh.norm() < 1e-4 {
            let l2 = lam2 * h * h;
            (1.0 + l2 / 2.0 + l2 * l2 / 24.0, h * (1.0 + l2 / 6.0 + l2 * l2 / 120.0))
        } else {
            (lh.cosh(), lh.sinh() / lam)
        };
        let e = Mat2::identity().scale(ch) + u.scale(sh_over);
        m = e * m;
    }
    let l0 = data.x_min - h / 2.0;
    let l1 = data.x_max + h / 2.0;
    let iz = C64::i() * z;
    let s11 = (iz * l1).exp() * m.get(0, 0) * (-iz * l0).exp();
    let s21 = (-iz * l1).exp() * m.get(1, 0) * (-iz * l0).exp();
    (s11, s21)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatteringData {
    pub z: Vec<f64>,
    pub s11: Vec<C64>,
    pub s21: Vec<C64>,
    pub r: Vec<C64>,
    /// |r| as computed at construction; evolution leaves it untouched.
    pub r_abs: Vec<f64>,
    pub h11_norm: f64,
    /// max | |s11|^2 - |s21|^2 - 1 |
    pub unitarity_defect: f64,
    /// max of |s22 - conj s11| and |s12 - conj s21| over the grid.
    pub symmetry_defect: f64,
    /// Time to which r has been evolved.
    pub t: f64,
    pub b0_flagged: bool,
}

impl ScatteringData {
    /// Builds scattering data from r samples alone (s11 from |s11|^2 = 1/(1-|r|^2)).
    pub fn from_reflection(z: Vec<f64>, r: Vec<C64>) -> Result<Self> {
        if z.len() != r.len() || z.len() < 2 {
            return Err(Error::InvalidInput("z grid and r samples must match (>= 2 nodes)".into()));
        }
        if z.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("z grid must be strictly increasing".into()));
        }
        let mut s11 = Vec::with_capacity(r.len());
        let mut s21 = Vec::with_capacity(r.len());
        for (&zi, &ri) in z.iter().zip(&r) {
            let d = 1.0 - ri.norm_sqr();
            if !(d > 0.0) {
                return Err(Error::ReflectionAtUnitModulus(d));
            }
            let _ = zi;
            let a = C64::new(1.0 / d.sqrt(), 0.0);
            s11.push(a);
            s21.push(a * ri);
        }
        let r_abs = r.iter().map(|v| v.norm()).collect();
        let mut sd = ScatteringData {
            z,
            s11,
            s21,
            r,
            r_abs,
            h11_norm: 0.0,
            unitarity_defect: 0.0,
            symmetry_defect: 0.0,
            t: 0.0,
            b0_flagged: false,
        };
        sd.h11_norm = sobolev_norm_h11(&sd);
        Ok(sd)
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn max_abs_r(&self) -> f64 {
        self.r_abs.iter().cloned().fold(0.0, f64::max)
    }
}

/// Real spectral grid on [-zmax, zmax] with the dead zone |z| < zmin removed.
pub fn spectral_grid(zmax: f64, n: usize, zmin: f64) -> Vec<f64> {
    linspace(-zmax, zmax, n).into_iter().filter(|z| z.abs() >= zmin - 1e-12).collect()
}

pub fn default_spectral_grid() -> Vec<f64> {
    spectral_grid(Z_GRID_MAX, Z_GRID_NODES, Z_MIN)
}

/// r = s21/s11 on the grid, with unitarity and |r| < 1 enforced.
pub fn reflection(data: &InitialData, z_grid: &[f64]) -> Result<ScatteringData> {
    reflection_with(data, z_grid, &JostConfig::default(), UNITARITY_TOL)
}

pub fn reflection_with(data: &InitialData, z_grid: &[f64], cfg: &JostConfig, unitarity_tol: f64) -> Result<ScatteringData> {
    if z_grid.windows(2).any(|w| !(w[1] > w[0])) || z_grid.len() < 2 {
        return Err(Error::InvalidInput("z grid must be strictly increasing with >= 2 nodes".into()));
    }
    for &z in z_grid {
        check_dead_zone(z)?;
    }
    let mid = midpoints(&data.a0);
    let f = Field { data, mid: &mid };
    let mats: Vec<ScatteringMatrix> = z_grid.par_iter().map(|&z| matrix_with(&f, z, cfg)).collect::<Result<_>>()?;
    let mut unitarity_defect: f64 = 0.0;
    let mut symmetry_defect: f64 = 0.0;
    let mut r = Vec::with_capacity(mats.len());
    for (m, &z) in mats.iter().zip(z_grid) {
        let defect = (m.s11.norm_sqr() - m.s21.norm_sqr() - 1.0).abs();
        if !(defect <= unitarity_tol) {
            return Err(Error::UnitarityViolation { z, defect });
        }
        unitarity_defect = unitarity_defect.max(defect);
        symmetry_defect = symmetry_defect.max((m.s22 - m.s11.conj()).norm()).max((m.s12 - m.s21.conj()).norm());
        let rv = m.s21 / m.s11;
        if !(rv.norm() < 1.0) {
            return Err(Error::ReflectionAtUnitModulus(1.0 - rv.norm_sqr()));
        }
        r.push(rv);
    }
    let r_abs = r.iter().map(|v| v.norm()).collect();
    let mut sd = ScatteringData {
        z: z_grid.to_vec(),
        s11: mats.iter().map(|m| m.s11).collect(),
        s21: mats.iter().map(|m| m.s21).collect(),
        r,
        r_abs,
        h11_norm: 0.0,
        unitarity_defect,
        symmetry_defect,
        t: 0.0,
        b0_flagged: data.b0_nonzero(),
    };
    sd.h11_norm = sobolev_norm_h11(&sd);
    Ok(sd)
}

#[derive(Debug, Clone, Copy)]
pub struct DiscreteSpectrumSpec {
    pub half_width: f64,
    pub height: f64,
    pub z_min: f64,
    pub winding: WindingSpec,
}

impl Default for DiscreteSpectrumSpec {
    fn default() -> Self {
        DiscreteSpectrumSpec {
            half_width: WINDING_HALF_WIDTH,
            height: WINDING_HEIGHT,
            z_min: Z_MIN,
            winding: WindingSpec {
                samples_per_side: WINDING_SAMPLES_PER_SIDE,
                max_step: WINDING_MAX_STEP,
                max_refine: WINDING_MAX_REFINE,
            },
        }
    }
}

/// Winding number of s11 around [-w, w] x [z_min, height]; 0 means no
/// discrete spectrum inside.
pub fn check_no_discrete_spectrum(data: &InitialData) -> Result<i64> {
    check_no_discrete_spectrum_with(data, &DiscreteSpectrumSpec::default())
}

pub fn check_no_discrete_spectrum_with(data: &InitialData, spec: &DiscreteSpectrumSpec) -> Result<i64> {
    let mid = midpoints(&data.a0);
    let cfg = JostConfig::default();
    let corners = rectangle(-spec.half_width, spec.half_width, spec.z_min, spec.height);
    let w = winding_number(|z| s11_upper(data, &mid, z, &cfg), &corners, &spec.winding)?;
    if w > 0 {
        return Err(Error::SolitonsPresent(w));
    }
    Ok(w)
}

fn derivative(z: &[f64], r: &[C64]) -> Vec<C64> {
    let n = z.len();
    if n == 1 {
        return vec![C64::new(0.0, 0.0)];
    }
    (0..n)
        .map(|i| {
            if i == 0 {
                (r[1] - r[0]) / (z[1] - z[0])
            } else if i == n - 1 {
                (r[n - 1] - r[n - 2]) / (z[n - 1] - z[n - 2])
            } else {
                (r[i + 1] - r[i - 1]) / (z[i + 1] - z[i - 1])
            }
        })
        .collect()
}

/// Discrete H^{1,1} proxy: sqrt of the trapezoid of (1+z^2)(|r|^2+|r'|^2),
/// taken separately on z < 0 and z > 0 so the dead zone is not bridged.
pub fn sobolev_norm_h11(sd: &ScatteringData) -> f64 {
    let mut total = 0.0;
    for neg in [true, false] {
        let idx: Vec<usize> = (0..sd.z.len()).filter(|&i| (sd.z[i] < 0.0) == neg).collect();
        if idx.len() < 2 {
            continue;
        }
        let z: Vec<f64> = idx.iter().map(|&i| sd.z[i]).collect();
        let r: Vec<C64> = idx.iter().map(|&i| sd.r[i]).collect();
        let dr = derivative(&z, &r);
        let g: Vec<f64> = (0..z.len()).map(|i| (1.0 + z[i] * z[i]) * (r[i].norm_sqr() + dr[i].norm_sqr())).collect();
        for i in 1..z.len() {
            total += 0.5 * (z[i] - z[i - 1]) * (g[i] + g[i - 1]);
        }
    }
    total.sqrt()
}

/// Phase factor carrying r(z; 0) to r(z; t).
pub fn evolution_phase(z: f64, t: f64, params: &ModelParameters) -> C64 {
    let phi = (-params.alpha * t / (2.0 * z)).rem_euclid(TAU);
    C64::from_polar(1.0, phi)
}

/// r(z; t) = r(z; 0) exp(-i alpha t / (2 z)); s11 and |r| are untouched.
pub fn evolve_scattering(sd: &ScatteringData, t: f64, params: &ModelParameters) -> ScatteringData {
    let mut out = sd.clone();
    for i in 0..sd.z.len() {
        let p = evolution_phase(sd.z[i], t, params);
        if p != C64::new(1.0, 0.0) {
            out.r[i] = sd.r[i] * p;
            out.s21[i] = sd.s21[i] * p;
        }
    }
    out.t = sd.t + t;
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Profile;

    fn sech(l: f64, n: usize) -> InitialData {
        InitialData::symmetric(Profile::Sech, 0.3, l, n).unwrap()
    }

    #[test]
    fn zero_data_is_free() {
        let d = InitialData::symmetric(Profile::Zero, 0.0, 10.0, 257).unwrap();
        for z in [C64::new(1.0, 0.0), C64::new(-0.3, 0.0), C64::new(2.0, 0.5)] {
            let j = jost_solve(&d, z, Side::Left).unwrap();
            assert_eq!(j.psi_minus_col1, Some([C64::new(1.0, 0.0), C64::new(0.0, 0.0)]));
            let j = jost_solve(&d, z, Side::Right).unwrap();
            assert_eq!(j.psi_plus_col2, Some([C64::new(0.0, 0.0), C64::new(1.0, 0.0)]));
        }
        let (s11, s21) = scattering_coefficients(&d, 1.0).unwrap();
        assert_eq!((s11, s21), (C64::new(1.0, 0.0), C64::new(0.0, 0.0)));
    }

    #[test]
    fn closed_form_sech_modulus() {
        // |r|^2 = sinh^2(pi c/2) / (cosh^2(pi z) + sinh^2(pi c/2)) for A0 = c sech x
        let d = sech(30.0, 4096);
        let hc = (std::f64::consts::PI * 0.15).sinh().powi(2);
        for z in [0.05, 0.3, 1.0, -1.7] {
            let (s11, s21) = scattering_coefficients(&d, z).unwrap();
            let r2 = (s21 / s11).norm_sqr();
            let want = hc / ((std::f64::consts::PI * z).cosh().powi(2) + hc);
            assert!((r2 - want).abs() < 1e-7 * want.max(1e-3), "z = {z}: {r2} vs {want}");
        }
    }

    #[test]
    fn rk4_agrees_with_transfer_matrix() {
        let d = sech(30.0, 4096);
        let fine = sech(30.0, 4 * 4095 + 1);
        for z in [1.0, -0.4] {
            let (a, b) = scattering_coefficients(&d, z).unwrap();
            let (c, e) = transfer_matrix_coefficients(&fine, z);
            assert!((a - c).norm() < 1e-6 && (b - e).norm() < 1e-6, "{a} {c} {b} {e}");
        }
    }

    #[test]
    fn dead_zone_rejected() {
        let d = sech(30.0, 1024);
        assert!(scattering_coefficients(&d, 0.01).is_err());
    }

    #[test]
    fn wrong_half_plane_rejected() {
        let d = sech(30.0, 1024);
        let cfg = JostConfig::default();
        assert!(jost_column(&d, C64::new(1.0, 0.5), Column::PlusCol1, &cfg).is_err());
        assert!(jost_column(&d, C64::new(1.0, 0.5), Column::MinusCol1, &cfg).is_ok());
    }

    #[test]
    fn blowup_detected() {
        let d = sech(30.0, 1024);
        let cfg = JostConfig { x_ref: 0.0, blowup: 1e8 };
        let mid = midpoints(&d.a0);
        let f = Field { data: &d, mid: &mid };
        // force the lower-half-plane column through the upper half-plane
        let e = integrate_column(&f, C64::new(0.5, 1.0), Column::PlusCol1, d.nearest(0.0), cfg.blowup);
        assert!(matches!(e, Err(Error::BlowUp { .. })));
    }

    #[test]
    fn h11_by_hand() {
        let v = C64::new(0.3, -0.4);
        let sd = ScatteringData {
            z: vec![0.0, 1.0, 2.0],
            s11: vec![C64::new(1.0, 0.0); 3],
            s21: vec![C64::new(0.0, 0.0), v, C64::new(0.0, 0.0)],
            r: vec![C64::new(0.0, 0.0), v, C64::new(0.0, 0.0)],
            r_abs: vec![0.0, v.norm(), 0.0],
            h11_norm: 0.0,
            unitarity_defect: 0.0,
            symmetry_defect: 0.0,
            t: 0.0,
            b0_flagged: false,
        };
        assert!((sobolev_norm_h11(&sd) - 5f64.sqrt() * v.norm()).abs() < 1e-15);
        let zero = ScatteringData { r: vec![C64::new(0.0, 0.0); 3], ..sd };
        assert_eq!(sobolev_norm_h11(&zero), 0.0);
    }

    #[test]
    fn evolution_phase_examples() {
        let p = ModelParameters::default();
        let sd = ScatteringData::from_reflection(vec![-1.0, 0.25, 1.0], vec![C64::new(0.1, 0.2); 3]).unwrap();
        assert_eq!(evolve_scattering(&sd, 0.0, &p).r, sd.r);
        // alpha t / (2 z) = 2 pi
        let z = 1.0 / (4.0 * std::f64::consts::PI);
        let sd = ScatteringData::from_reflection(vec![z, 1.0], vec![C64::new(0.1, 0.2); 2]).unwrap();
        let e = evolve_scattering(&sd, 1.0, &ModelParameters { alpha: 1.0, beta: 1.0, gamma: -1.0 });
        assert_eq!(e.r[0], sd.r[0]);
        assert_eq!(e.r_abs, sd.r_abs);
        assert_eq!(e.s11, sd.s11);
    }
}
