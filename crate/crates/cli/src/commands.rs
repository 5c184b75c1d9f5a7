use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use abscat::asymptotics::{asymptotic_solution, AsymptoticSolution};
use abscat::local_model::LocalModel;
use abscat::model::ModelParameters;
use abscat::numerics::quadrature::QuadratureSpec;
use abscat::pde::{compare_asymptotics, evolve_checkpoints, isospectral_compare, EvolveReport, IsospectralReport};
use abscat::phase::RayCoordinates;
use abscat::scattering::{check_no_discrete_spectrum, default_spectral_grid, reflection, spectral_grid, ScatteringData};
use abscat::verify::{title, verify_core, Bound, Check, Criterion, VerifyReport};

use crate::config::{
    default_compare_data, default_evolve_data, default_scatter_data, DataSpec, GridSpec, RunConfig, ScatterConfig,
};
use crate::io::{csv, parse_csv, write_json, write_text};
use crate::CliError;

/// What a command produced. `degenerate` selects exit code 4.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub degenerate: bool,
    pub lines: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScatterMeta {
    pub h11_norm: f64,
    /// Winding number of s11 around the upper-half-plane box (None if skipped).
    pub winding: Option<i64>,
    pub grid: ScatterConfig,
    pub nodes: usize,
    pub unitarity_defect: f64,
    pub symmetry_defect: f64,
    pub b0_flagged: bool,
    pub params: ModelParameters,
    pub data_grid: GridSpec,
}

pub const SCATTER_HEADER: [&str; 8] = ["z", "s11_re", "s11_im", "s21_re", "s21_im", "r_re", "r_im", "r_abs"];

fn scatter_data(cfg: &RunConfig, spec: &DataSpec) -> Result<(ScatteringData, Option<i64>), CliError> {
    spec.params()?;
    let data = spec.build()?;
    let s = &cfg.scatter;
    if !(s.z_max > s.z_min && s.z_min > 0.0 && s.z_nodes >= 2) {
        return Err(CliError::Input("scatter grid needs 0 < z_min < z_max and z_nodes >= 2".into()));
    }
    let winding = if s.check_solitons { Some(check_no_discrete_spectrum(&data)?) } else { None };
    let sd = reflection(&data, &spectral_grid(s.z_max, s.z_nodes, s.z_min))?;
    Ok((sd, winding))
}

pub fn cmd_scatter(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let spec = cfg.data_or(default_scatter_data());
    let (sd, winding) = scatter_data(cfg, &spec)?;
    let rows = (0..sd.len()).map(|i| {
        vec![sd.z[i], sd.s11[i].re, sd.s11[i].im, sd.s21[i].re, sd.s21[i].im, sd.r[i].re, sd.r[i].im, sd.r_abs[i]]
    });
    let csv_path = out.join("scattering.csv");
    write_text(&csv_path, &csv(&SCATTER_HEADER, rows))?;
    let meta = ScatterMeta {
        h11_norm: sd.h11_norm,
        winding,
        grid: cfg.scatter.clone(),
        nodes: sd.len(),
        unitarity_defect: sd.unitarity_defect,
        symmetry_defect: sd.symmetry_defect,
        b0_flagged: sd.b0_flagged,
        params: spec.params()?,
        data_grid: spec.grid.clone(),
    };
    let meta_path = out.join("scattering.json");
    write_json(&meta_path, &meta)?;
    Ok(Outcome {
        files: vec![csv_path, meta_path],
        degenerate: false,
        lines: vec![format!("scatter: {} nodes, max |r| = {:.6e}, h11 = {:.6e}", sd.len(), sd.max_abs_r(), sd.h11_norm)],
    })
}

/// Reads r from a scattering CSV and rebuilds s11, s21 from |s11|^2 = 1/(1 - |r|^2).
pub fn load_scattering(path: &Path) -> Result<ScatteringData, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let (header, rows) = parse_csv(&text)?;
    let col = |name: &str| {
        header.iter().position(|h| h == name).ok_or_else(|| CliError::Input(format!("{}: missing column {name}", path.display())))
    };
    let (iz, ire, iim) = (col("z")?, col("r_re")?, col("r_im")?);
    let z = rows.iter().map(|r| r[iz]).collect();
    let r = rows.iter().map(|r| C64::new(r[ire], r[iim])).collect();
    Ok(ScatteringData::from_reflection(z, r)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LocalModelDump {
    pub x: f64,
    pub t: f64,
    pub local: LocalModel,
}

pub const ASYMPTOTE_HEADER: [&str; 8] = ["x", "t", "z0", "a_re", "a_im", "a_abs", "b", "degenerate"];

pub fn cmd_asymptote(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let spec = cfg.data_or(default_scatter_data());
    let params = spec.params()?;
    let sd = match &cfg.asymptote.scattering {
        Some(p) => load_scattering(Path::new(p))?,
        None => scatter_data(cfg, &spec)?.0,
    };
    let a = &cfg.asymptote;
    let mut points: Vec<(f64, f64)> = Vec::new();
    for &z0 in &a.z0 {
        for &t in &a.t {
            if !(z0 > 0.0) {
                return Err(CliError::Input(format!("z0 must be positive, got {z0}")));
            }
            points.push((-params.alpha * t / (4.0 * z0 * z0), t));
        }
    }
    points.extend(a.points.iter().map(|p| (p.x, p.t)));
    if points.is_empty() {
        return Err(CliError::Input("no (x, t) samples requested".into()));
    }
    let rays = points.iter().map(|&(x, t)| RayCoordinates::new(params.alpha, x, t)).collect::<Result<Vec<_>, _>>()?;
    let qspec = QuadratureSpec::default();
    let sols: Vec<AsymptoticSolution> =
        rays.par_iter().map(|ray| asymptotic_solution(&sd, ray, &qspec)).collect::<Result<_, _>>()?;
    let rows = sols.iter().map(|s| {
        vec![s.x, s.t, s.z0, s.a_leading.re, s.a_leading.im, s.a_leading.norm(), s.b_leading, if s.degenerate { 1.0 } else { 0.0 }]
    });
    let csv_path = out.join("asymptote.csv");
    write_text(&csv_path, &csv(&ASYMPTOTE_HEADER, rows))?;
    let dumps: Vec<LocalModelDump> = sols.iter().map(|s| LocalModelDump { x: s.x, t: s.t, local: s.local }).collect();
    let lm_path = out.join("local_models.json");
    write_json(&lm_path, &dumps)?;
    let degenerate = sols.iter().any(|s| s.degenerate);
    let mut lines = vec![format!("asymptote: {} samples", sols.len())];
    if degenerate {
        lines.push("warning: r vanishes at a phase point; leading terms set to zero".to_string());
    }
    Ok(Outcome { files: vec![csv_path, lm_path], degenerate, lines })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvolveRunReport {
    pub checkpoints: Vec<f64>,
    pub snapshots: Vec<String>,
    pub evolve: EvolveReport,
    pub isospectral: Option<IsospectralReport>,
    /// sup | |s11(t)| - |s11(0)| | <= 5e-3.
    pub isospectral_passed: Option<bool>,
}

pub const SNAPSHOT_HEADER: [&str; 5] = ["x", "a_re", "a_im", "a_abs", "b"];
pub const ISOSPECTRAL_TOL: f64 = 5e-3;

pub fn cmd_evolve(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let spec = cfg.data_or(default_evolve_data());
    let params = spec.params()?;
    let data = spec.build()?;
    let e = &cfg.evolve;
    if e.checkpoints.is_empty() {
        return Err(CliError::Input("evolve needs at least one checkpoint".into()));
    }
    let ecfg = e.evolve_config(e.dt);
    let (states, report) = evolve_checkpoints(&data, &params, &ecfg, &e.checkpoints)?;
    let mut files = Vec::new();
    let mut names = Vec::new();
    for (i, s) in states.iter().enumerate() {
        let x = s.grid();
        let rows = (0..s.n()).map(|j| vec![x[j], s.a[j].re, s.a[j].im, s.a[j].norm(), s.b[j]]);
        let name = format!("snapshot_{i:03}.csv");
        let path = out.join(&name);
        write_text(&path, &csv(&SNAPSHOT_HEADER, rows))?;
        files.push(path);
        names.push(name);
    }
    let last = states.last().expect("at least one checkpoint");
    let iso = if e.isospectral {
        let taper = e.taper_start.unwrap_or(data.x_min + 0.48 * (data.x_max - data.x_min));
        Some(isospectral_compare(&data, last, report.clone(), &params, &default_spectral_grid(), taper)?)
    } else {
        None
    };
    let run = EvolveRunReport {
        checkpoints: e.checkpoints.clone(),
        snapshots: names,
        evolve: report,
        isospectral_passed: iso.as_ref().map(|r| r.s11_defect <= ISOSPECTRAL_TOL),
        isospectral: iso,
    };
    let path = out.join("evolve_report.json");
    write_json(&path, &run)?;
    files.push(path);
    let mut lines = vec![format!("evolve: {} steps to t = {}", run.evolve.steps, last.t)];
    if let Some(r) = &run.isospectral {
        lines.push(format!("isospectrality: sup | |s11(t)| - |s11(0)| | = {:.3e}", r.s11_defect));
    }
    Ok(Outcome { files, degenerate: false, lines })
}

pub const COMPARE_HEADER: [&str; 9] = ["t", "x", "a_num_re", "a_num_im", "a_lead_re", "a_lead_im", "ratio", "residual", "b_num"];

pub fn cmd_compare(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let spec = cfg.data_or(default_compare_data());
    let params = spec.params()?;
    let data = spec.build()?;
    let sd = reflection(&data, &default_spectral_grid())?;
    let c = &cfg.compare;
    let qspec = QuadratureSpec::default();
    let leading = |t: f64| -> abscat::Result<C64> {
        let ray = RayCoordinates::from_z0(params.alpha, c.z0, t)?;
        Ok(asymptotic_solution(&sd, &ray, &qspec)?.a_leading)
    };
    let ecfg = cfg.evolve.evolve_config(c.dt);
    let rep = compare_asymptotics(&data, &params, &ecfg, c.z0, &c.checkpoints, leading)?;
    let rows = rep.rows.iter().map(|r| {
        vec![r.t, r.x, r.a_num.re, r.a_num.im, r.a_leading.re, r.a_leading.im, r.ratio, r.residual, r.b_num]
    });
    let csv_path = out.join("compare.csv");
    write_text(&csv_path, &csv(&COMPARE_HEADER, rows))?;
    let json_path = out.join("compare.json");
    write_json(&json_path, &rep)?;
    let lines = rep
        .rows
        .iter()
        .map(|r| format!("t = {}: |A_num| = {:.4e}, |A_lead| = {:.4e}, residual = {:.4e}", r.t, r.a_num.norm(), r.a_leading.norm(), r.residual))
        .chain(std::iter::once(format!("residual exponent {:.4}", rep.residual_exponent)))
        .collect();
    Ok(Outcome { files: vec![csv_path, json_path], degenerate: false, lines })
}

fn same_bytes(a: &[PathBuf], b: &[PathBuf]) -> Result<bool, CliError> {
    if a.len() != b.len() {
        return Ok(false);
    }
    for (x, y) in a.iter().zip(b) {
        let rx = fs::read(x).map_err(|e| CliError::Io(e.to_string()))?;
        let ry = fs::read(y).map_err(|e| CliError::Io(e.to_string()))?;
        if rx != ry {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Criterion 10: scatter and asymptote run twice with the same
/// configuration must write byte-identical files.
pub fn criterion_10(cfg: &RunConfig, out: &Path) -> Result<Vec<Check>, CliError> {
    let mut runs = Vec::new();
    for name in ["run_a", "run_b"] {
        let dir = out.join("determinism").join(name);
        let s = cmd_scatter(cfg, &dir)?;
        let mut c = cfg.clone();
        c.asymptote.scattering = Some(dir.join("scattering.csv").to_string_lossy().into_owned());
        let a = cmd_asymptote(&c, &dir)?;
        runs.push((s.files, a.files));
    }
    let flag = |b: bool| if b { 1.0 } else { 0.0 };
    Ok(vec![
        Check::new("scatter_identical", flag(same_bytes(&runs[0].0, &runs[1].0)?), Bound::AtLeast(1.0)),
        Check::new("asymptote_identical", flag(same_bytes(&runs[0].1, &runs[1].1)?), Bound::AtLeast(1.0)),
    ])
}

/// All ten criteria; writes verify_report.json.
pub fn run_verify(cfg: &RunConfig, out: &Path) -> Result<VerifyReport, CliError> {
    let mut criteria = verify_core(&cfg.verify);
    let c10 = match criterion_10(cfg, out) {
        Ok(checks) => Criterion::from_checks(10, title(10), checks),
        Err(e) => Criterion::from_result(10, title(10), Err(abscat::Error::InvalidInput(e.to_string()))),
    };
    criteria.push(c10);
    let report = VerifyReport::new(criteria);
    write_json(&out.join("verify_report.json"), &report)?;
    Ok(report)
}

pub fn cmd_verify(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let report = run_verify(cfg, out)?;
    let lines: Vec<String> = report.criteria.iter().map(|c| c.summary_line()).collect();
    if !report.passed {
        for l in &lines {
            println!("{l}");
        }
        let failed: Vec<String> = report
            .criteria
            .iter()
            .filter(|c| !matches!(c.status, abscat::verify::Status::Pass | abscat::verify::Status::Skipped))
            .map(|c| c.id.to_string())
            .collect();
        return Err(CliError::Failed(format!("criteria {}", failed.join(", "))));
    }
    Ok(Outcome { files: vec![out.join("verify_report.json")], degenerate: false, lines })
}
