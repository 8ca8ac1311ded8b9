//! Invariant checks over one potential, reported as named residuals.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::elliptic::{complete_k, ellint_f, jacobi_sn_cn_dn, EllipticParameter};
use crate::error::Result;
use crate::euclid::{delaunay_angles, screw_decompose, surface_symmetry, sym_bobenko, Sheet};
use crate::frame::{FrameContext, FrameKind};
use crate::mesh::{sample_surface, CurvatureStats, Parallelogram};
use crate::period::{l_function, monodromy, rotational_period, round_cylinder_closing, verify_harmonic_periodicity, Tolerances};
use crate::su2loop::{killing, LoopPoint, Mat2C};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub max_residual: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl CheckResult {
    fn new(name: &str, max_residual: f64, threshold: f64) -> Self {
        Self {
            name: name.to_string(),
            max_residual,
            threshold,
            // NaN never passes
            passed: max_residual < threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub lambda_t: f64,
    pub t_range: (f64, f64),
    pub k_list: Vec<i64>,
    pub tol: Tolerances,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            lambda_t: 0.7,
            t_range: (0.05, 1.52),
            k_list: vec![1],
            tol: Tolerances::default(),
        }
    }
}

/// `n` angles spread over the circle, none of them a fourth root of unity.
fn circle_sample(n: usize) -> impl Iterator<Item = LoopPoint> {
    (0..n).map(move |i| LoopPoint::new(TAU * (i as f64 + 0.3) / n as f64)).filter(|l| l.distance_to_fourth_root() > 0.05)
}

fn max_of(it: impl Iterator<Item = Result<f64>>) -> Result<f64> {
    let mut m: f64 = 0.0;
    for v in it {
        let v = v?;
        // propagate NaN
        m = if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) };
    }
    Ok(m)
}

fn elliptic_checks(ctx: &FrameContext) -> Result<Vec<CheckResult>> {
    let mut params: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    params.push(ctx.kappa_p.value());
    let mut pyth: f64 = 0.0;
    let mut inv: f64 = 0.0;
    for mv in params {
        let m = EllipticParameter::new(mv)?;
        let k = complete_k(m)?;
        for i in 0..=100 {
            let u = -4.0 * k + 8.0 * k * i as f64 / 100.0;
            let j = jacobi_sn_cn_dn(u, m);
            pyth = pyth.max((j.sn * j.sn + j.cn * j.cn - 1.0).abs()).max((mv * j.sn * j.sn + j.dn * j.dn - 1.0).abs());
            let phi = -1.5 + 3.0 * i as f64 / 100.0;
            inv = inv.max((jacobi_sn_cn_dn(ellint_f(phi, m)?, m).sn - phi.sin()).abs());
        }
    }
    Ok(vec![CheckResult::new("elliptic_pythagorean", pyth, 1e-11), CheckResult::new("elliptic_inverse", inv, 1e-10)])
}

fn conformal_factor_checks(ctx: &FrameContext) -> Vec<CheckResult> {
    let (a, b, h, q) = (ctx.a(), ctx.b(), ctx.h(), ctx.q_hopf);
    let p = ctx.metric_period();
    let (mut gauss, mut first, mut period): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for i in 0..1000 {
        let y = -2.0 * p + 4.0 * p * i as f64 / 1000.0;
        let (v, vd, vdd) = (ctx.v0(y), ctx.v0_dot(y), ctx.v0_ddot(y));
        gauss = gauss.max((vdd / v - vd * vd / (v * v) + v * v * h * h - 4.0 * q * q / (v * v)).abs());
        first = first.max((vd * vd + h * h * (v * v - 4.0 * a * a / (h * h)) * (v * v - 4.0 * b * b / (h * h))).abs());
        period = period.max((ctx.v0(y + p) - v).abs());
    }
    vec![
        CheckResult::new("v0_initial_value", (ctx.v0(0.0) - 2.0 * b / h).abs(), 1e-15),
        CheckResult::new("gauss_equation", gauss, 1e-9),
        CheckResult::new("first_integral", first, 1e-9),
        CheckResult::new("v0_periodicity", period, 1e-10),
    ]
}

fn frame_checks(ctx: &FrameContext) -> Result<Vec<CheckResult>> {
    let h = 1e-4;
    let mut unit: f64 = 0.0;
    let mut mc: f64 = 0.0;
    let mut twist: f64 = 0.0;
    let sigma3 = Mat2C::diag(1.0.into(), (-1.0).into());
    for lam in circle_sample(8) {
        for i in 0..4 {
            for j in 0..4 {
                let (x, y) = (-1.0 + 0.6 * i as f64, -1.1 + 0.7 * j as f64);
                let f = ctx.extended_frame(x, y, lam)?.frame;
                unit = unit.max((f.adjoint() * f).dist(&Mat2C::identity()));
                twist = twist.max(ctx.extended_frame(x, y, lam.negated())?.frame.dist(&sigma3.conjugate(&f)));
                let fi = f.inverse();
                let dx = (ctx.extended_frame(x + h, y, lam)?.frame - ctx.extended_frame(x - h, y, lam)?.frame) * (0.5 / h);
                let dy = (ctx.extended_frame(x, y + h, lam)?.frame - ctx.extended_frame(x, y - h, lam)?.frame) * (0.5 / h);
                let (a1, a2) = ctx.alpha_forms(y, lam);
                mc = mc.max((fi * dx).dist(&a1)).max((fi * dy).dist(&a2));
            }
        }
    }
    let hopf = max_of([0.0, 0.3, 1.1].iter().map(|&y| Ok((ctx.extract_hopf(y)? - 2.0 * ctx.a() * ctx.b() / ctx.h()).abs())))?;
    let p = ctx.metric_period();
    let tper = max_of(circle_sample(8).map(|lam| Ok(ctx.t_matrix(p, lam)?.dist(&Mat2C::identity()))))?;
    let imf = max_of(circle_sample(8).map(|lam| Ok((ctx.f_integral(p, lam).im + p).abs())))?;
    Ok(vec![
        CheckResult::new("frame_unitarity", unit, 1e-9),
        CheckResult::new("frame_twisting", twist, 1e-9),
        CheckResult::new("maurer_cartan", mc, 1e-6),
        CheckResult::new("hopf_coefficient", hopf, 1e-10),
        CheckResult::new("t_periodicity", tper, 1e-10),
        CheckResult::new("imaginary_f_on_period", imf, 1e-11),
    ])
}

fn surface_checks(ctx: &FrameContext) -> Result<Vec<CheckResult>> {
    let mut sheets: f64 = 0.0;
    let mut screw: f64 = 0.0;
    for lam in circle_sample(5) {
        let g = surface_symmetry(ctx, lam);
        for &(x, y) in &[(0.0, 0.0), (0.4, -0.7), (-1.1, 1.3)] {
            let minus = sym_bobenko(ctx, x, y, lam, Sheet::Minus)?;
            let plus = sym_bobenko(ctx, x, y, lam, Sheet::Plus)?;
            let n = ctx.gauss_map(x, y, lam)?;
            sheets = sheets.max((minus + n * (1.0 / ctx.h())).dist(&plus));
            for s in [0.3, 1.7] {
                screw = screw.max(g.exp(s).act(&minus).dist(&sym_bobenko(ctx, x + s, y, lam, Sheet::Minus)?));
            }
        }
    }
    let angles = delaunay_angles(&ctx.xi)?;
    let kill = max_of(angles.iter().map(|l| Ok(killing(&ctx.xi.eval(*l), &ctx.xi.deriv_t(*l)).norm())))?;
    let angle_err = angles.iter().enumerate().map(|(k, l)| (l.t - k as f64 * FRAC_PI_2).abs()).fold(0.0, f64::max);
    Ok(vec![
        CheckResult::new("parallel_sheets", sheets, 1e-9),
        CheckResult::new("screw_equivariance", screw, 1e-8),
        CheckResult::new("delaunay_angle_killing", kill, 1e-12),
        CheckResult::new("delaunay_angles_at_fourth_roots", if angles.len() == 4 { angle_err } else { f64::INFINITY }, 1e-12),
    ])
}

/// The fourth root of unity where the frame of `ctx` is regular for every `y`.
pub fn regular_revolution_angle(ctx: &FrameContext) -> LoopPoint {
    if ctx.a() * ctx.b() > 0.0 {
        LoopPoint::new(0.0)
    } else {
        LoopPoint::new(FRAC_PI_2)
    }
}

/// Variance over `x` of the distance to the symmetry axis, maximized over rows.
pub fn revolution_variance(ctx: &FrameContext, lam: LoopPoint) -> Result<f64> {
    let g = surface_symmetry(ctx, lam);
    let axis = screw_decompose(g.rot, g.trans)?;
    max_of([0.0, 0.4, 1.3, 2.9].iter().map(|&y| {
        let d = (0..40)
            .map(|i| Ok(axis.axis_distance(&sym_bobenko(ctx, 0.13 * i as f64, y, lam, Sheet::Minus)?)))
            .collect::<Result<Vec<f64>>>()?;
        let mean = d.iter().sum::<f64>() / d.len() as f64;
        Ok(d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / d.len() as f64)
    }))
}

fn generic_period_checks(ctx: &FrameContext, opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let lam_rev = regular_revolution_angle(ctx);
    out.push(CheckResult::new("surface_of_revolution", revolution_variance(ctx, lam_rev)?, 1e-8));
    let (t0, t1) = opts.t_range;
    let guard = opts.tol.pole_guard;
    for &k in &opts.k_list {
        let q = k as f64 * ctx.metric_period();
        let im = max_of((0..=200).map(|i| t0 + (t1 - t0) * i as f64 / 200.0).filter(|&t| LoopPoint::new(t).distance_to_fourth_root() >= guard).map(|t| {
            Ok(l_function(ctx, q, LoopPoint::new(t))?.im.abs())
        }))?;
        out.push(CheckResult::new(&format!("l_reality_k{k}"), im, 1e-8));
    }
    let lam = LoopPoint::new(opts.lambda_t);
    if !lam.is_fourth_root_of_unity(guard) {
        let k = opts.k_list.first().copied().unwrap_or(1);
        let (p, q) = rotational_period(ctx, k, 1, lam)?;
        let m = monodromy(ctx, p, q, lam)?;
        out.push(CheckResult::new("rotational_period_monodromy", m.distance_to_center().0, opts.tol.monodromy));
        let rep = verify_harmonic_periodicity(ctx, lam, p, q, &opts.tol)?;
        out.push(CheckResult::new("gauss_map_periodicity", rep.gauss_map_error, opts.tol.gauss_map));
    }
    Ok(out)
}

fn round_cylinder_checks(ctx: &FrameContext, opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let v = 2.0 * ctx.b() / ctx.h();
    let vc = (0..100).map(|i| (ctx.v0(-3.0 + 0.06 * i as f64) - v).abs()).fold(0.0, f64::max);
    out.push(CheckResult::new("v0_constant", vc, 1e-15));
    let lam = LoopPoint::new(opts.lambda_t);
    let (mut mres, mut sres): (f64, f64) = (0.0, 0.0);
    for &k in &opts.k_list {
        let s = round_cylinder_closing(ctx, k, lam)?;
        mres = mres.max(s.residual_m);
        sres = sres.max(s.residual_surface);
    }
    out.push(CheckResult::new("round_cylinder_monodromy", mres, 1e-10));
    out.push(CheckResult::new("round_cylinder_closure", sres, 1e-8));
    let dom = Parallelogram::rect((0.0, 1.5), (0.0, 1.5));
    let mesh = sample_surface(ctx, lam, &dom, 61, 61, Sheet::Minus)?;
    let g = surface_symmetry(ctx, lam);
    let axis = screw_decompose(g.rot, g.trans)?;
    let r = 0.5 / ctx.h();
    let dist = mesh.vertices.iter().map(|p| (axis.axis_distance(p) - r).abs()).fold(0.0, f64::max);
    out.push(CheckResult::new("cylinder_axis_distance", dist, 1e-6));
    let stats = CurvatureStats::from_samples(&mesh.discrete_mean_curvature(), ctx.h());
    out.push(CheckResult::new("discrete_mean_curvature", stats.max_abs_error, 1e-3));
    Ok(out)
}

/// All checks that apply to `ctx`: the generic Delaunay suite, or the round
/// cylinder suite when `a = +-b`.
pub fn run_suite(ctx: &FrameContext, opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    let mut out = elliptic_checks(ctx)?;
    out.extend(conformal_factor_checks(ctx));
    out.extend(frame_checks(ctx)?);
    out.extend(surface_checks(ctx)?);
    match ctx.kind {
        FrameKind::Generic => out.extend(generic_period_checks(ctx, opts)?),
        FrameKind::RoundCylinder => out.extend(round_cylinder_checks(ctx, opts)?),
    }
    Ok(out)
}
