//! Monodromy, closing conditions and the search for closed helicoidal cylinders.
//!
//! For a translation `delta = p + iq` of the domain the frame picks up
//!
//! ```text
//! M(delta, lambda) = F(p, q, lambda) = cosh(g) T(q) + sinh(g)/mu xi T(q),
//! g = (p + iq + f(q, lambda)) mu(lambda).
//! ```
//!
//! The surface at `lambda0` closes along `delta` iff `M = +-1` and `dM/dt = 0`
//! there. With `q = k K'/b` the first condition fixes `p` for every integer `l`,
//! and the second reduces to `L(lambda0) = l` with
//!
//! ```text
//! L(lambda) = mu^3 / (pi ab (lambda^-2 - lambda^2)) df/dt(q, lambda),
//! ```
//!
//! real on the circle, with simple poles at the fourth roots of unity.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euclid::{screw_decompose, surface_symmetry, sym_bobenko, Sheet};
use crate::frame::{FrameContext, FrameKind};
use crate::su2loop::{exp_traceless_deriv, exp_with_mu, LoopPoint, Mat2C, C64};

/// Named numerical thresholds of the solver and its verifications.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Half-width of the excluded band `|t - n pi/2| < pole_guard`.
    pub pole_guard: f64,
    /// Target `|L - l|` for refined roots.
    pub root: f64,
    pub monodromy: f64,
    pub monodromy_deriv: f64,
    pub surface: f64,
    pub gauss_map: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            pole_guard: 0.02,
            root: 1e-12,
            monodromy: 1e-8,
            monodromy_deriv: 1e-6,
            surface: 1e-6,
            gauss_map: 1e-7,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 6] = ["pole_guard", "root", "monodromy", "monodromy_deriv", "surface", "gauss_map"];

    /// Overrides one threshold by name.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidArgument(format!("tolerance {name} must be positive, got {value}")));
        }
        let slot = match name {
            "pole_guard" => &mut self.pole_guard,
            "root" => &mut self.root,
            "monodromy" => &mut self.monodromy,
            "monodromy_deriv" => &mut self.monodromy_deriv,
            "surface" => &mut self.surface,
            "gauss_map" => &mut self.gauss_map,
            _ => return Err(Error::InvalidArgument(format!("unknown tolerance {name:?}"))),
        };
        *slot = value;
        Ok(())
    }
}

/// `M(delta, lambda)` with its t-derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monodromy {
    pub m: Mat2C,
    pub m_prime: Mat2C,
    pub delta: C64,
}

impl Monodromy {
    /// `min(|M - 1|, |M + 1|)` and the sign attaining it.
    pub fn distance_to_center(&self) -> (f64, i8) {
        let plus = self.m.dist(&Mat2C::identity());
        let minus = self.m.dist(&(-Mat2C::identity()));
        if plus <= minus {
            (plus, 1)
        } else {
            (minus, -1)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosingKind {
    Helicoidal,
    RoundCylinder,
}

/// A translation `delta = p + iq` along which the surface at `lam0` closes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosingSolution {
    pub kind: ClosingKind,
    pub lam0: LoopPoint,
    pub k: i64,
    pub l: i64,
    pub p: f64,
    pub q: f64,
    /// `+1` if `M = 1`, `-1` if `M = -1`.
    pub sign: i8,
    /// Axial advance per radian of the screw symmetry.
    pub pitch: f64,
    pub residual_m: f64,
    pub residual_mprime: f64,
    pub residual_surface: f64,
}

impl ClosingSolution {
    pub fn delta(&self) -> C64 {
        C64::new(self.p, self.q)
    }

    pub fn passes(&self, tol: &Tolerances) -> bool {
        self.residual_m < tol.monodromy && self.residual_mprime < tol.monodromy_deriv && self.residual_surface < tol.surface
    }
}

/// `g(delta, lambda) = (p + iq + f(q, lambda)) mu(lambda)`.
pub fn g_function(ctx: &FrameContext, p: f64, q: f64, lam: LoopPoint) -> Result<C64> {
    Ok((C64::new(p, q) + ctx.f_integral(q, lam)) * ctx.xi.mu(lam)?)
}

/// Closed-form monodromy and its t-derivative.
pub fn monodromy(ctx: &FrameContext, p: f64, q: f64, lam: LoopPoint) -> Result<Monodromy> {
    let xi = ctx.xi.eval(lam);
    let t = ctx.t_matrix(q, lam)?;
    let bold_f = C64::new(p, q) + ctx.f_integral(q, lam);
    let m = match ctx.xi.mu(lam) {
        Ok(mu) => exp_with_mu(bold_f, &xi, mu) * t,
        // mu = 0 only on round cylinders; exp(bold_f xi) = 1 + bold_f xi there
        Err(Error::ZeroMu(_)) => (Mat2C::identity() + xi * bold_f) * t,
        Err(e) => return Err(e),
    };
    let e = exp_with_mu(bold_f, &xi, (-xi.det()).sqrt());
    let e_dot = exp_traceless_deriv(bold_f, ctx.f_deriv_t(q, lam), &xi, &ctx.xi.deriv_t(lam))?;
    let m_prime = e_dot * t + e * ctx.t_matrix_deriv_t(q, lam)?;
    Ok(Monodromy { m, m_prime, delta: C64::new(p, q) })
}

/// `q = k K'/b` and `p = Re(pi i l / mu) - Re f(q)`, so that `M(delta, lam0) = +-1`.
pub fn rotational_period(ctx: &FrameContext, k: i64, l: i64, lam0: LoopPoint) -> Result<(f64, f64)> {
    if lam0.is_fourth_root_of_unity(1e-12) {
        return Err(Error::FourthRootOfUnity(lam0.t));
    }
    let q = k as f64 * ctx.metric_period();
    let mu = ctx.xi.mu(lam0)?;
    let p = (C64::new(0.0, PI * l as f64) / mu).re - ctx.f_integral(q, lam0).re;
    Ok((p, q))
}

/// `L(lambda)` at `q`; real on the circle up to quadrature error.
pub fn l_function(ctx: &FrameContext, q: f64, lam: LoopPoint) -> Result<C64> {
    if lam.is_fourth_root_of_unity(1e-12) {
        return Err(Error::NearPole(lam.t));
    }
    let (a, b) = (ctx.a(), ctx.b());
    let mu = ctx.xi.mu(lam)?;
    let l2 = lam.lambda().powi(2);
    Ok(mu * mu * mu / (PI * a * b * (l2.inv() - l2)) * ctx.f_deriv_t(q, lam))
}

/// One row of an L scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LSample {
    pub t: f64,
    pub l: C64,
    /// Sample lies in the band `pole_guard <= dist < POLE_BAND * pole_guard`
    /// next to a fourth root, where `L` is dominated by the pole.
    pub pole_flag: bool,
}

/// Width of the flagged band around each pole, in units of the guard.
pub const POLE_BAND: f64 = 5.0;

/// `samples` uniform points of `t_range` (endpoints included), dropping those
/// within the pole guard.
pub fn scan_l(ctx: &FrameContext, k: i64, t_range: (f64, f64), samples: usize, pole_guard: f64) -> Result<Vec<LSample>> {
    if ctx.kind != FrameKind::Generic {
        return Err(Error::DegenerateCase(crate::su2loop::PotentialCase::RoundCylinder));
    }
    let q = k as f64 * ctx.metric_period();
    let (t0, t1) = t_range;
    let n = samples.max(2);
    let ts: Vec<f64> = (0..n).map(|i| t0 + (t1 - t0) * i as f64 / (n - 1) as f64).collect();
    ts.par_iter()
        .filter(|&&t| LoopPoint::new(t).distance_to_fourth_root() >= pole_guard)
        .map(|&t| {
            let lam = LoopPoint::new(t);
            Ok(LSample {
                t,
                l: l_function(ctx, q, lam)?,
                pole_flag: lam.distance_to_fourth_root() < POLE_BAND * pole_guard,
            })
        })
        .collect()
}

/// Brent's method for a root of `f` in `[a, b]`, `f(a) f(b) <= 0`.
pub fn brent(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, xtol: f64, ytol: f64, max_iter: usize) -> Option<f64> {
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa * fb > 0.0 {
        return None;
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb.abs() <= ytol {
            return Some(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut pp, mut qq);
            if a == c {
                pp = 2.0 * m * s;
                qq = 1.0 - s;
            } else {
                let q0 = fa / fc;
                let r = fb / fc;
                pp = s * (2.0 * m * q0 * (q0 - r) - (b - a) * (r - 1.0));
                qq = (q0 - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if pp > 0.0 {
                qq = -qq;
            } else {
                pp = -pp;
            }
            if 2.0 * pp < (3.0 * m * qq - (tol * qq).abs()).min((e * qq).abs()) {
                e = d;
                d = pp / qq;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    Some(b)
}

/// Scan settings for [`solve_closing`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    /// Uniform samples per quarter circle on the first pass.
    pub samples_per_quadrant: usize,
    /// Maximum number of resolution doublings.
    pub max_doublings: u32,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { samples_per_quadrant: 2000, max_doublings: 3 }
    }
}

/// Result of [`solve_closing`]: verified solutions, and roots whose residuals
/// failed verification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosingSearch {
    pub solutions: Vec<ClosingSolution>,
    pub rejected: Vec<ClosingSolution>,
}

/// Pole-free subintervals of `t_range` after removing the guard bands.
fn pole_free_intervals(t_range: (f64, f64), guard: f64) -> Vec<(f64, f64)> {
    let (lo, hi) = if t_range.0 <= t_range.1 { t_range } else { (t_range.1, t_range.0) };
    let first = (lo / FRAC_PI_2).floor() as i64;
    let last = (hi / FRAC_PI_2).ceil() as i64;
    let mut out = Vec::new();
    for n in first..last {
        let a = (n as f64 * FRAC_PI_2 + guard).max(lo);
        let b = ((n + 1) as f64 * FRAC_PI_2 - guard).min(hi);
        if b > a {
            out.push((a, b));
        }
    }
    out
}

/// Brackets `(t_lo, t_hi, l)` of integer level crossings of `Re L` on one interval.
fn crossings(ctx: &FrameContext, q: f64, interval: (f64, f64), n: usize) -> Result<Vec<(f64, f64, i64)>> {
    let (a, b) = interval;
    let n = n.max(2);
    let ts: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
    let ls = ts
        .par_iter()
        .map(|&t| l_function(ctx, q, LoopPoint::new(t)).map(|l| l.re))
        .collect::<Result<Vec<f64>>>()?;
    let mut out = Vec::new();
    for i in 0..n - 1 {
        let (l0, l1) = (ls[i], ls[i + 1]);
        let (lo, hi) = if l0 <= l1 { (l0, l1) } else { (l1, l0) };
        // integers l with lo < l <= hi, or l == lo at the very first sample
        let start = if i == 0 { lo.ceil() } else { lo.floor() + 1.0 };
        let mut l = start;
        while l <= hi {
            if l0 != l1 || i == 0 {
                out.push((ts[i], ts[i + 1], l as i64));
            }
            l += 1.0;
        }
    }
    Ok(out)
}

/// Finds spectral parameters in `t_range` where the `k`-th metric period closes,
/// i.e. `L(t) = l` for integers `l`, and verifies each through the monodromy and
/// direct surface evaluation. Results are sorted by `(l, t)`.
pub fn solve_closing(
    ctx: &FrameContext,
    k: i64,
    t_range: (f64, f64),
    max_solutions: usize,
    tol: &Tolerances,
    scan: &ScanOptions,
) -> Result<ClosingSearch> {
    if ctx.kind != FrameKind::Generic {
        return Err(Error::DegenerateCase(crate::su2loop::PotentialCase::RoundCylinder));
    }
    if k <= 0 {
        return Err(Error::InvalidArgument(format!("k must be positive, got {k}")));
    }
    let q = k as f64 * ctx.metric_period();
    let mut brackets = Vec::new();
    for iv in pole_free_intervals(t_range, tol.pole_guard) {
        let base = ((iv.1 - iv.0) / FRAC_PI_2 * scan.samples_per_quadrant as f64).ceil() as usize;
        let mut found = crossings(ctx, q, iv, base)?;
        for d in 1..=scan.max_doublings {
            let finer = crossings(ctx, q, iv, base << d)?;
            let stable = finer.len() == found.len();
            found = finer;
            if stable {
                break;
            }
        }
        brackets.extend(found);
    }

    let roots: Vec<(f64, i64)> = brackets
        .par_iter()
        .filter_map(|&(a, b, l)| {
            let g = |t: f64| l_function(ctx, q, LoopPoint::new(t)).map(|v| v.re - l as f64).unwrap_or(f64::NAN);
            brent(g, a, b, 1e-15, tol.root, 200).map(|t| (t, l))
        })
        .collect();

    let checked = roots
        .par_iter()
        .map(|&(t, l)| verify_solution(ctx, k, l, LoopPoint::new(t), ClosingKind::Helicoidal, None))
        .collect::<Result<Vec<_>>>()?;

    let mut solutions = Vec::new();
    let mut rejected = Vec::new();
    for s in checked {
        if s.passes(tol) {
            solutions.push(s);
        } else {
            rejected.push(s);
        }
    }
    let order = |x: &ClosingSolution, y: &ClosingSolution| x.l.cmp(&y.l).then(x.lam0.t.total_cmp(&y.lam0.t));
    solutions.sort_by(order);
    rejected.sort_by(order);
    solutions.truncate(max_solutions);
    Ok(ClosingSearch { solutions, rejected })
}

/// Sample points `z` used for direct closure checks.
pub fn closure_samples() -> impl Iterator<Item = (f64, f64)> {
    (0..5).flat_map(|i| (0..5).map(move |j| (-0.6 + 0.3 * i as f64, -0.7 + 0.35 * j as f64)))
}

/// `max |f(z + delta) - f(z)|` of the `Sheet::Minus` surface over the 5x5 sample.
pub fn surface_closure_error(ctx: &FrameContext, lam0: LoopPoint, p: f64, q: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (x, y) in closure_samples() {
        let a = sym_bobenko(ctx, x, y, lam0, Sheet::Minus)?;
        let b = sym_bobenko(ctx, x + p, y + q, lam0, Sheet::Minus)?;
        worst = worst.max(a.dist(&b));
    }
    Ok(worst)
}

/// Builds `delta` for `(k, l, lam0)` (or takes the given one) and records all residuals.
pub fn verify_solution(
    ctx: &FrameContext,
    k: i64,
    l: i64,
    lam0: LoopPoint,
    kind: ClosingKind,
    delta: Option<(f64, f64)>,
) -> Result<ClosingSolution> {
    let (p, q) = match delta {
        Some(d) => d,
        None => rotational_period(ctx, k, l, lam0)?,
    };
    let mono = monodromy(ctx, p, q, lam0)?;
    let (residual_m, sign) = mono.distance_to_center();
    let gen = surface_symmetry(ctx, lam0);
    let pitch = match screw_decompose(gen.rot, gen.trans) {
        Ok(s) => s.pitch / s.rotation_rate,
        Err(_) => f64::INFINITY,
    };
    Ok(ClosingSolution {
        kind,
        lam0,
        k,
        l,
        p,
        q,
        sign,
        pitch,
        residual_m,
        residual_mprime: mono.m_prime.norm(),
        residual_surface: surface_closure_error(ctx, lam0, p, q)?,
    })
}

/// Closing translation `k delta_1` of a round cylinder at `lam0`:
/// `delta_1 = (pi/2a) lam0` for `a = b`, `(pi/2b) i lam0` for `a = -b`.
pub fn round_cylinder_period(ctx: &FrameContext, k: i64, lam0: LoopPoint) -> Result<(f64, f64)> {
    if ctx.kind != FrameKind::RoundCylinder {
        return Err(Error::InvalidArgument("round-cylinder period needs a = +-b".into()));
    }
    let l = lam0.lambda();
    let d = if ctx.a() > 0.0 {
        l * (PI / (2.0 * ctx.a()))
    } else {
        C64::new(0.0, 1.0) * l * (PI / (2.0 * ctx.b()))
    } * k as f64;
    Ok((d.re, d.im))
}

/// [`round_cylinder_period`] with residuals.
pub fn round_cylinder_closing(ctx: &FrameContext, k: i64, lam0: LoopPoint) -> Result<ClosingSolution> {
    let delta = round_cylinder_period(ctx, k, lam0)?;
    verify_solution(ctx, k, 0, lam0, ClosingKind::RoundCylinder, Some(delta))
}

/// Result of [`verify_harmonic_periodicity`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicityReport {
    /// `max |N(z + delta) - N(z)|` over the sample.
    pub gauss_map_error: f64,
    /// `max |f(z + delta) - f(z)|` over the sample.
    pub surface_error: f64,
    pub gauss_map_periodic: bool,
    pub surface_closes: bool,
}

/// Checks `N(z + delta) = N(z)`: the first closing condition alone makes the
/// Gauss map periodic, whether or not the surface itself closes.
pub fn verify_harmonic_periodicity(ctx: &FrameContext, lam0: LoopPoint, p: f64, q: f64, tol: &Tolerances) -> Result<PeriodicityReport> {
    let mut worst: f64 = 0.0;
    for (x, y) in closure_samples() {
        let a = ctx.gauss_map(x, y, lam0)?;
        let b = ctx.gauss_map(x + p, y + q, lam0)?;
        worst = worst.max(a.dist(&b));
    }
    let surface_error = surface_closure_error(ctx, lam0, p, q)?;
    Ok(PeriodicityReport {
        gauss_map_error: worst,
        surface_error,
        gauss_map_periodic: worst < tol.gauss_map,
        surface_closes: surface_error < tol.surface,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su2loop::{exp_traceless, Mat2C};
    use std::f64::consts::FRAC_PI_4;

    fn ctx() -> FrameContext {
        FrameContext::from_constants(0.4, 0.6, 1.0).unwrap()
    }

    /// `L(pi/4)` at `(a, b, H, k) = (0.4, 0.6, 1, 1)`, from an independent
    /// evaluation (adaptive real quadrature of the `g' = 0` relation).
    const L_AT_PI_4: f64 = 1.458_738_862_947_071_2;

    #[test]
    fn tolerance_overrides() {
        let mut t = Tolerances::default();
        t.set("surface", 1e-5).unwrap();
        assert_eq!(t.surface, 1e-5);
        assert!(t.set("nope", 1.0).is_err());
        assert!(t.set("root", -1.0).is_err());
        for name in Tolerances::NAMES {
            t.set(name, 0.5).unwrap();
        }
    }

    #[test]
    fn g_function_examples() {
        let c = ctx();
        let lam = LoopPoint::new(0.7);
        assert_eq!(g_function(&c, 0.0, 0.0, lam).unwrap(), C64::new(0.0, 0.0));
        let (p, q) = rotational_period(&c, 1, 3, lam).unwrap();
        let g = g_function(&c, p, q, lam).unwrap();
        assert!(g.re.abs() < 1e-8 && (g.im - 3.0 * PI).abs() < 1e-8);
        // the other branch of mu negates g
        let mu = c.xi.mu(lam).unwrap();
        let flipped = (C64::new(p, q) + c.f_integral(q, lam)) * -mu;
        assert!((flipped + g).norm() < 1e-15);
    }

    #[test]
    fn monodromy_trivial_translation() {
        let c = ctx();
        let m = monodromy(&c, 0.0, 0.0, LoopPoint::new(0.4)).unwrap();
        assert!(m.m.dist(&Mat2C::identity()) < 1e-15);
        assert!(m.m_prime.norm() < 1e-15);
    }

    #[test]
    fn monodromy_matches_frame() {
        let c = ctx();
        for &(p, q, t) in &[(0.3, 0.8, 0.7), (-1.2, 2.5, 2.0), (2.0, -1.1, 4.1), (0.0, c.metric_period(), 5.9)] {
            let lam = LoopPoint::new(t);
            let m = monodromy(&c, p, q, lam).unwrap();
            let f = c.extended_frame(p, q, lam).unwrap().frame;
            assert!(m.m.dist(&f) < 1e-9);
            assert!(m.m.is_unitary(1e-9));
            let h = 1e-5;
            let fd = (monodromy(&c, p, q, LoopPoint::new(t + h)).unwrap().m - monodromy(&c, p, q, LoopPoint::new(t - h)).unwrap().m)
                * (0.5 / h);
            assert!(fd.dist(&m.m_prime) < 1e-6);
        }
    }

    #[test]
    fn round_cylinder_monodromy_closed_form() {
        let a = 0.7;
        let c = FrameContext::from_constants(a, a, 1.0).unwrap();
        let i = C64::new(0.0, 1.0);
        for &(p, q, t) in &[(0.3, 0.8, 0.7), (-1.2, 2.5, 2.0)] {
            let lam = LoopPoint::new(t);
            let l = lam.lambda();
            let d = C64::new(p, q);
            let arg = i * a * (d * l.inv() + d.conj() * l);
            let want = Mat2C::identity() * arg.cosh() + Mat2C::offdiag(C64::new(1.0, 0.0), C64::new(1.0, 0.0)) * arg.sinh();
            assert!(monodromy(&c, p, q, lam).unwrap().m.dist(&want) < 1e-12);
        }
    }

    #[test]
    fn rotational_period_closes_monodromy() {
        let c = ctx();
        assert_eq!(rotational_period(&c, 0, 0, LoopPoint::new(1.0)).unwrap(), (0.0, 0.0));
        let lam = LoopPoint::new(PI / 5.0);
        let (p, q) = rotational_period(&c, 1, 1, lam).unwrap();
        assert_eq!(q, c.kp / 0.6);
        let m = monodromy(&c, p, q, lam).unwrap();
        assert!(m.distance_to_center().0 < 1e-8);
        assert!(matches!(rotational_period(&c, 1, 1, LoopPoint::new(FRAC_PI_2)), Err(Error::FourthRootOfUnity(_))));
    }

    #[test]
    fn closing_equivalence_first_condition() {
        // M = +-1  <=>  T(q) = 1 and g in pi i Z
        let c = ctx();
        let per = c.metric_period();
        for &t in &[0.3, 1.1, 2.4, 3.9] {
            let lam = LoopPoint::new(t);
            for l in -2..=2 {
                let (p, q) = rotational_period(&c, 1, l, lam).unwrap();
                assert!(monodromy(&c, p, q, lam).unwrap().distance_to_center().0 < 1e-9);
                // perturbing p leaves T(q) = 1 but moves g off pi i Z
                assert!(monodromy(&c, p + 0.05, q, lam).unwrap().distance_to_center().0 > 1e-3);
                // perturbing q breaks T(q) = 1
                assert!(monodromy(&c, p, q + 0.1 * per, lam).unwrap().distance_to_center().0 > 1e-3);
            }
        }
    }

    #[test]
    fn t_and_frame_quasi_periodicity() {
        let c = ctx();
        let q = 2.0 * c.metric_period();
        for &t in &[0.3, 2.0, 4.5] {
            let lam = LoopPoint::new(t);
            let p = 0.37;
            let shift = exp_traceless(C64::new(p, q) + c.f_integral(q, lam), &c.xi.eval(lam)).unwrap();
            for &(x, y) in &[(0.0, 0.0), (0.5, -0.3), (-1.0, 1.7)] {
                assert!(c.t_matrix(y + q, lam).unwrap().dist(&c.t_matrix(y, lam).unwrap()) < 1e-10);
                let lhs = c.extended_frame(x + p, y + q, lam).unwrap().frame;
                let rhs = shift * c.extended_frame(x, y, lam).unwrap().frame;
                assert!(lhs.dist(&rhs) < 1e-8);
            }
        }
    }

    #[test]
    fn l_function_value_and_reality() {
        let c = ctx();
        let q = c.metric_period();
        let l = l_function(&c, q, LoopPoint::new(FRAC_PI_4)).unwrap();
        assert!((l.re - L_AT_PI_4).abs() < 1e-9);
        for i in 1..200 {
            let t = i as f64 * 2.0 * PI / 200.0;
            if LoopPoint::new(t).distance_to_fourth_root() < 0.02 {
                continue;
            }
            assert!(l_function(&c, q, LoopPoint::new(t)).unwrap().im.abs() < 1e-8);
        }
        assert!(matches!(l_function(&c, q, LoopPoint::new(0.0)), Err(Error::NearPole(_))));
    }

    #[test]
    fn l_function_oracle_from_g_derivative() {
        // L is the l at which g'(delta(l), lambda) = 0; g' is affine in l, so
        // solving g'(l) = 0 from two evaluations gives L independently.
        let c = ctx();
        let q = c.metric_period();
        for &t in &[0.4, FRAC_PI_4, 1.2, 2.0] {
            let lam = LoopPoint::new(t);
            let gprime = |l: i64| {
                let (p, q) = rotational_period(&c, 1, l, lam).unwrap();
                let h = 1e-5;
                let g = |s: f64| g_function(&c, p, q, LoopPoint::new(s)).unwrap();
                (g(t + h) - g(t - h)) / (2.0 * h)
            };
            let (g0, g1) = (gprime(0), gprime(1));
            let l_star = -g0.im / (g1.im - g0.im);
            let l = l_function(&c, q, lam).unwrap().re;
            assert!((l - l_star).abs() < 1e-6 * (1.0 + l.abs()), "t={t}: {l} vs {l_star}");
        }
    }

    #[test]
    fn l_has_simple_poles() {
        let c = ctx();
        let q = c.metric_period();
        for n in 0..4 {
            let pole = n as f64 * FRAC_PI_2;
            let mut prev: Option<f64> = None;
            for &d in &[0.02, 0.01, 0.005, 0.0025] {
                for s in [-1.0, 1.0] {
                    let t = pole + s * d;
                    let r = l_function(&c, q, LoopPoint::new(t)).unwrap().norm() * d;
                    assert!(r < 5.0);
                }
                let r = l_function(&c, q, LoopPoint::new(pole + d)).unwrap().norm() * d;
                if let Some(p) = prev {
                    // residue estimates settle as d shrinks
                    assert!((r - p).abs() < 0.05 * (1.0 + p));
                }
                prev = Some(r);
            }
        }
    }

    #[test]
    fn brent_finds_roots() {
        let r = brent(|x| x * x - 2.0, 0.0, 2.0, 1e-15, 0.0, 100).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
        assert!(brent(|x| x * x + 1.0, 0.0, 2.0, 1e-15, 0.0, 100).is_none());
        let r = brent(|x: f64| x.cos() - x, 0.0, 1.0, 1e-15, 0.0, 100).unwrap();
        assert!((r.cos() - r).abs() < 1e-15);
    }

    #[test]
    fn pole_free_intervals_split_at_fourth_roots() {
        let iv = pole_free_intervals((0.05, 1.52), 0.02);
        assert_eq!(iv, vec![(0.05, 1.52)]);
        let iv = pole_free_intervals((0.0, PI), 0.02);
        assert_eq!(iv.len(), 2);
        assert!((iv[0].0 - 0.02).abs() < 1e-15 && (iv[1].1 - (PI - 0.02)).abs() < 1e-15);
    }

    #[test]
    fn round_cylinder_closes() {
        for &(a, b) in &[(0.7, 0.7), (-0.5, 0.5)] {
            let c = FrameContext::from_constants(a, b, 1.0).unwrap();
            for &t in &[0.3, 1.0, 2.5, 4.0] {
                for k in 1..=2 {
                    let s = round_cylinder_closing(&c, k, LoopPoint::new(t)).unwrap();
                    assert!(s.residual_m < 1e-10, "{s:?}");
                    assert!(s.residual_surface < 1e-8, "{s:?}");
                }
            }
        }
    }

    #[test]
    fn harmonic_map_periodicity() {
        let c = ctx();
        let tol = Tolerances::default();
        assert!(verify_harmonic_periodicity(&c, LoopPoint::new(0.8), 0.0, 0.0, &tol).unwrap().gauss_map_periodic);
        for &t in &[0.3, 0.8, 1.3, 2.2, 3.0] {
            let lam = LoopPoint::new(t);
            // arbitrary l: M = +-1 holds, M' = 0 generally does not
            let (p, q) = rotational_period(&c, 1, 7, lam).unwrap();
            let rep = verify_harmonic_periodicity(&c, lam, p, q, &tol).unwrap();
            assert!(rep.gauss_map_periodic, "{rep:?}");
            assert!(!rep.surface_closes, "{rep:?}");
        }
    }

    #[test]
    fn solver_finds_verified_solutions() {
        let c = ctx();
        let tol = Tolerances::default();
        let scan = ScanOptions { samples_per_quadrant: 400, max_doublings: 1 };
        let res = solve_closing(&c, 1, (0.3, 1.2), 50, &tol, &scan).unwrap();
        assert!(!res.solutions.is_empty());
        assert!(res.rejected.is_empty(), "{:?}", res.rejected);
        for s in &res.solutions {
            assert!(s.passes(&tol));
            let l = l_function(&c, s.q, s.lam0).unwrap().re;
            assert!((l - s.l as f64).abs() < 1e-9);
        }
        for w in res.solutions.windows(2) {
            assert!(w[0].l < w[1].l || (w[0].l == w[1].l && w[0].lam0.t < w[1].lam0.t));
        }
        assert!(solve_closing(&c, 1, (0.3, 0.3), 5, &tol, &scan).unwrap().solutions.is_empty());
    }
}
