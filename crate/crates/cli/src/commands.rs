use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use helicoid::frame::Normalization;
use helicoid::period::round_cylinder_closing;
use helicoid::{
    run_suite, sample_surface, scan_l, screw_decompose, solve_closing, surface_symmetry, CheckResult, ClosingSolution, CurvatureStats,
    FrameContext, FrameKind, LoopPoint, Parallelogram, ScanOptions, ScrewGenerator, Sheet, SuiteOptions, C64,
};
use serde::Serialize;

use crate::config::JobConfig;
use crate::CliError;

/// The potential as stored after normalization; `lambda_t` and `t_range`
/// refer to this representative.
#[derive(Debug, Serialize)]
pub struct Parameters {
    pub a: f64,
    pub b: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub kind: FrameKind,
    pub normalization: Normalization,
}

impl Parameters {
    fn of(ctx: &FrameContext) -> Self {
        Self { a: ctx.a(), b: ctx.b(), h: ctx.h(), kind: ctx.kind, normalization: ctx.normalization }
    }
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub parameters: Parameters,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct SolveReport {
    pub parameters: Parameters,
    pub solutions: Vec<ClosingSolution>,
    /// Roots of `L = l` whose closing residuals exceeded the tolerances.
    pub rejected: Vec<ClosingSolution>,
}

#[derive(Debug, Serialize)]
pub struct MeshSidecar {
    pub parameters: Parameters,
    pub lambda_t: f64,
    pub sheet: Sheet,
    pub grid: (usize, usize),
    pub domain: Parallelogram,
    pub screw: Option<ScrewGenerator>,
    /// Pitch per radian of the screw symmetry.
    pub pitch: Option<f64>,
    pub curvature: CurvatureStats,
    pub closing: Option<ClosingSolution>,
    /// Largest distance between matching vertices of the first and last rows.
    pub closure_row_error: Option<f64>,
}

pub fn context(cfg: &JobConfig) -> Result<FrameContext, CliError> {
    cfg.validate()?;
    FrameContext::from_constants(cfg.a, cfg.b, cfg.h).map_err(|e| CliError::Config(e.to_string()))
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, bytes).map_err(|e| CliError::Io(p.to_path_buf(), e)),
        None => io::stdout().write_all(bytes).map_err(|e| CliError::Io(PathBuf::from("<stdout>"), e)),
    }
}

fn json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("report types serialize");
    v.push(b'\n');
    v
}

/// Runs the invariant suite. Returns whether every check passed.
pub fn check(cfg: &JobConfig, out: Option<&Path>) -> Result<bool, CliError> {
    let ctx = context(cfg)?;
    let opts = SuiteOptions { lambda_t: cfg.lambda_t, t_range: cfg.t_range, k_list: cfg.k_list.clone(), tol: cfg.tol };
    let checks = run_suite(&ctx, &opts)?;
    let passed = checks.iter().all(|c| c.passed);
    write_output(out, &json(&CheckReport { parameters: Parameters::of(&ctx), checks, passed }))?;
    Ok(passed)
}

/// `t,re_L,im_L,pole_flag` for the first entry of `k_list`.
pub fn scan(cfg: &JobConfig, out: Option<&Path>) -> Result<(), CliError> {
    let ctx = context(cfg)?;
    let rows = scan_l(&ctx, cfg.k_list[0], cfg.t_range, cfg.samples, cfg.tol.pole_guard)?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io_err = |e: csv::Error| CliError::Io(PathBuf::from("<csv>"), io::Error::other(e));
    w.write_record(["t", "re_L", "im_L", "pole_flag"]).map_err(io_err)?;
    for r in rows {
        let flag = if r.pole_flag { "1" } else { "0" };
        w.write_record([format!("{:.16e}", r.t), format!("{:.16e}", r.l.re), format!("{:.16e}", r.l.im), flag.to_string()])
            .map_err(io_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(PathBuf::from("<csv>"), io::Error::other(e.to_string())))?;
    write_output(out, &bytes)
}

fn solve_all(cfg: &JobConfig, ctx: &FrameContext) -> Result<SolveReport, CliError> {
    let mut solutions = Vec::new();
    let mut rejected = Vec::new();
    match ctx.kind {
        FrameKind::Generic => {
            let scan = ScanOptions { samples_per_quadrant: cfg.samples, ..ScanOptions::default() };
            for &k in &cfg.k_list {
                let found = solve_closing(ctx, k, cfg.t_range, cfg.max_solutions, &cfg.tol, &scan)?;
                solutions.extend(found.solutions);
                rejected.extend(found.rejected);
            }
        }
        // every lambda closes; report the one asked for
        FrameKind::RoundCylinder => {
            for &k in &cfg.k_list {
                let s = round_cylinder_closing(ctx, k, LoopPoint::new(cfg.lambda_t))?;
                if s.passes(&cfg.tol) {
                    solutions.push(s);
                } else {
                    rejected.push(s);
                }
            }
        }
    }
    solutions.truncate(cfg.max_solutions);
    Ok(SolveReport { parameters: Parameters::of(ctx), solutions, rejected })
}

pub fn solve(cfg: &JobConfig, out: Option<&Path>) -> Result<(), CliError> {
    let ctx = context(cfg)?;
    write_output(out, &json(&solve_all(cfg, &ctx)?))
}

fn sidecar_path(obj: &Path) -> PathBuf {
    obj.with_extension("json")
}

pub fn mesh(cfg: &JobConfig, out: Option<&Path>) -> Result<(), CliError> {
    let obj_path = out.ok_or_else(|| CliError::Config("mesh needs an output path (--out or out =)".into()))?;
    let ctx = context(cfg)?;
    let k = cfg.k_list[0];

    let closing = match cfg.mesh_closing_l {
        None => None,
        Some(l) => {
            let report = solve_all(cfg, &ctx)?;
            let hit = report.solutions.into_iter().find(|s| s.k == k && (ctx.kind == FrameKind::RoundCylinder || s.l == l));
            Some(hit.ok_or_else(|| CliError::Config(format!("no verified closing solution with k = {k}, l = {l} in t_range")))?)
        }
    };
    let lam = closing.map_or(LoopPoint::new(cfg.lambda_t), |s| s.lam0);

    let twist = surface_symmetry(&ctx, lam);
    let screw = screw_decompose(twist.rot, twist.trans).ok();
    let x_len = cfg.mesh_x.unwrap_or_else(|| screw.map_or(1.0, |s| s.turn_period()));
    let domain = match closing {
        Some(s) => Parallelogram { origin: C64::new(0.0, 0.0), e1: C64::new(x_len, 0.0), e2: s.delta() },
        None => {
            let y_len = cfg.mesh_y.unwrap_or(k as f64 * ctx.metric_period());
            Parallelogram::rect((0.0, x_len), (0.0, y_len))
        }
    };

    let (nx, ny) = cfg.grid;
    let mesh = sample_surface(&ctx, lam, &domain, nx, ny, cfg.sheet)?;
    if !mesh.is_finite() {
        return Err(CliError::Numerical("mesh has non-finite vertices".into()));
    }
    let target = match cfg.sheet {
        Sheet::Minus => ctx.h(),
        Sheet::Plus => -ctx.h(),
    };
    let curvature = CurvatureStats::from_samples(&mesh.discrete_mean_curvature(), target);
    let closure_row_error = closing.map(|_| {
        (0..nx).map(|i| mesh.vertices[i].dist(&mesh.vertices[(ny - 1) * nx + i])).fold(0.0, f64::max)
    });

    let mut obj = Vec::new();
    mesh.write_obj(&mut obj).map_err(|e| CliError::Io(obj_path.to_path_buf(), e))?;
    write_output(Some(obj_path), &obj)?;
    let sidecar = MeshSidecar {
        parameters: Parameters::of(&ctx),
        lambda_t: lam.t,
        sheet: cfg.sheet,
        grid: (nx, ny),
        domain,
        screw,
        pitch: screw.map(|s| s.pitch / s.rotation_rate),
        curvature,
        closing,
        closure_row_error,
    };
    write_output(Some(&sidecar_path(obj_path)), &json(&sidecar))
}
