//! Rigid motions as `SU(2) x| su(2)`, the map `Phi_mu`, the Sym–Bobenko immersion
//! and screw-motion decomposition.
//!
//! A motion `(g, zeta)` acts on `R^3 = su(2)` by `p -> Ad g p + zeta`; composition
//! is `(g, zeta)(h, eta) = (gh, Ad g eta + zeta)`. A loop `F(lambda)` of SU(2)
//! matrices is sent to the motion `Phi_lambda(F) = (F, F' F^{-1})`, `' = d/dt` for
//! `lambda = e^{it}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::FrameContext;
use crate::su2loop::{basis_matrix, exp_traceless, exp_traceless_deriv, killing, LoopPoint, Mat2C, NormalFormPotential, PotentialCase, Su2Vector, C64};

/// `|f_x|^2 = SYM_BOBENKO_METRIC_SCALE * v0^2` for the Sym–Bobenko surface with the
/// basis convention of [`crate::su2loop`]; checked numerically in the tests.
pub const SYM_BOBENKO_METRIC_SCALE: f64 = 1.0;

/// A proper rigid motion, as an element of the double cover `SU(2) x| R^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclideanMotion {
    pub g: Mat2C,
    pub trans: Su2Vector,
}

impl EuclideanMotion {
    pub fn identity() -> Self {
        Self { g: Mat2C::identity(), trans: Su2Vector::zero() }
    }

    pub fn translation(trans: Su2Vector) -> Self {
        Self { g: Mat2C::identity(), trans }
    }

    /// Checks that `g` is in SU(2).
    pub fn new(g: Mat2C, trans: Su2Vector) -> Result<Self> {
        if !g.is_unitary(1e-10) || (g.det() - 1.0).norm() > 1e-10 {
            return Err(Error::InvalidArgument("rotation part is not in SU(2)".into()));
        }
        Ok(Self { g, trans })
    }

    fn ad(&self, p: &Su2Vector) -> Su2Vector {
        Su2Vector::from_matrix(&self.g.conjugate(&p.to_matrix()))
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            g: self.g * other.g,
            trans: self.ad(&other.trans) + self.trans,
        }
    }

    pub fn inverse(&self) -> Self {
        let g = self.g.adjoint();
        let inv = Self { g, trans: Su2Vector::zero() };
        Self { g, trans: -inv.ad(&self.trans) }
    }

    /// `(g, zeta) . p = Ad g p + zeta`.
    pub fn act(&self, p: &Su2Vector) -> Su2Vector {
        self.ad(p) + self.trans
    }

    pub fn dist(&self, other: &Self) -> f64 {
        self.g.dist(&other.g) + self.trans.dist(&other.trans)
    }
}

/// `(F, F' F^{-1})`. The translation part must be anti-Hermitian.
pub fn phi_mu(f: &Mat2C, f_prime: &Mat2C) -> Result<EuclideanMotion> {
    let tr = *f_prime * f.inverse();
    let residual = (tr + tr.adjoint()).norm();
    if residual > 1e-8 * (1.0 + tr.norm()) {
        return Err(Error::BadDerivative(residual));
    }
    Ok(EuclideanMotion { g: *f, trans: Su2Vector::from_matrix(&tr) })
}

/// An element `(xi, eta)` of the Lie algebra `su(2) x| R^3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Twist {
    pub rot: Su2Vector,
    pub trans: Su2Vector,
}

impl Twist {
    /// `exp(s (xi, eta)) = (exp(s xi), \int_0^s Ad exp(u xi) eta du)`.
    pub fn exp(&self, s: f64) -> EuclideanMotion {
        match screw_decompose(self.rot, self.trans) {
            Ok(screw) => screw.exp(s),
            Err(_) => EuclideanMotion::translation(self.trans * s),
        }
    }
}

/// `Phi_lambda(xi) = (xi, xi')` for an su(2)-valued loop and its t-derivative.
pub fn phi_mu_algebra(xi: &Mat2C, xi_prime: &Mat2C) -> Twist {
    Twist {
        rot: Su2Vector::from_matrix(xi),
        trans: Su2Vector::from_matrix(xi_prime),
    }
}

/// Screw-motion form of a twist `(xi, eta)` with `xi != 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScrewGenerator {
    pub rot: Su2Vector,
    pub trans: Su2Vector,
    pub axis_dir: Su2Vector,
    /// Point of the axis closest to the origin, solving `[xi, zeta] = -eta_perp`.
    pub axis_offset: Su2Vector,
    /// `<eta, xi>/|xi|`: translation along the axis per unit parameter.
    pub pitch: f64,
    /// `|xi|`: rotation angle per unit parameter.
    pub rotation_rate: f64,
}

impl ScrewGenerator {
    pub fn is_pure_rotation(&self, tol: f64) -> bool {
        self.pitch.abs() < tol
    }

    /// `(1, zeta) (exp(s xi), s eta_par) (1, zeta)^{-1}`.
    pub fn exp(&self, s: f64) -> EuclideanMotion {
        let g = exp_traceless(C64::new(s, 0.0), &self.rot.to_matrix()).expect("su(2) matrices are traceless");
        let shift = EuclideanMotion::translation(self.axis_offset);
        let core = EuclideanMotion { g, trans: self.axis_dir * (self.pitch * s) };
        shift.compose(&core).compose(&shift.inverse())
    }

    /// Distance of `p` from the screw axis.
    pub fn axis_distance(&self, p: &Su2Vector) -> f64 {
        let d = *p - self.axis_offset;
        (d - self.axis_dir * d.dot(&self.axis_dir)).norm()
    }

    /// Time for one full turn, `2 pi / |xi|`.
    pub fn turn_period(&self) -> f64 {
        std::f64::consts::TAU / self.rotation_rate
    }
}

/// Splits `eta = eta_perp + eta_par` relative to `xi` and finds the screw axis.
pub fn screw_decompose(rot: Su2Vector, trans: Su2Vector) -> Result<ScrewGenerator> {
    let r = rot.norm();
    if r <= 1e-14 * (1.0 + trans.norm()) {
        return Err(Error::PureTranslation);
    }
    let axis_dir = rot * (1.0 / r);
    Ok(ScrewGenerator {
        rot,
        trans,
        axis_dir,
        axis_offset: rot.cross(&trans) * (1.0 / (r * r)),
        pitch: trans.dot(&rot) / r,
        rotation_rate: r,
    })
}

/// Which of the two parallel Sym–Bobenko surfaces to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sheet {
    Plus,
    Minus,
}

/// `(F, dF/dt)` at `(x, y, lambda)`.
pub fn frame_with_deriv_t(ctx: &FrameContext, x: f64, y: f64, lam: LoopPoint) -> Result<(Mat2C, Mat2C)> {
    let fv = ctx.extended_frame(x, y, lam)?;
    let xi = ctx.xi.eval(lam);
    let xi_dot = ctx.xi.deriv_t(lam);
    let f_dot = ctx.f_deriv_t(y, lam);
    let e = exp_traceless(fv.bold_f, &xi)?;
    let e_dot = exp_traceless_deriv(fv.bold_f, f_dot, &xi, &xi_dot)?;
    let t_dot = ctx.t_matrix_deriv_t(y, lam)?;
    Ok((fv.frame, e_dot * fv.t + e * t_dot))
}

/// `dF/dt` at `(x, y, lambda)`.
pub fn frame_deriv_t(ctx: &FrameContext, x: f64, y: f64, lam: LoopPoint) -> Result<Mat2C> {
    Ok(frame_with_deriv_t(ctx, x, y, lam)?.1)
}

/// `f^+- = -(1/2H) Phi_lambda(F) . (-+ e1) = -(1/2H) (-+ N + F'F^{-1})`.
pub fn sym_bobenko_from_frame(f: &Mat2C, f_prime: &Mat2C, h: f64, sheet: Sheet) -> Result<Su2Vector> {
    let motion = phi_mu(f, f_prime)?;
    let e1 = match sheet {
        Sheet::Plus => -Su2Vector::e(1),
        Sheet::Minus => Su2Vector::e(1),
    };
    Ok(motion.act(&e1) * (-0.5 / h))
}

/// The Sym–Bobenko immersion. `Sheet::Minus` has metric `v0^2 |dz|^2` and mean
/// curvature `H` with respect to the Gauss map; `f^+ = f^- + N/H`.
pub fn sym_bobenko(ctx: &FrameContext, x: f64, y: f64, lam: LoopPoint, sheet: Sheet) -> Result<Su2Vector> {
    let (f, fp) = frame_with_deriv_t(ctx, x, y, lam)?;
    sym_bobenko_from_frame(&f, &fp, ctx.h(), sheet)
}

/// Point of the surface together with its unit normal `N = Ad F e1`.
pub fn surface_point(ctx: &FrameContext, x: f64, y: f64, lam: LoopPoint, sheet: Sheet) -> Result<(Su2Vector, Su2Vector)> {
    let (f, fp) = frame_with_deriv_t(ctx, x, y, lam)?;
    let n = Su2Vector::from_matrix(&f.conjugate(&basis_matrix(1)));
    Ok((sym_bobenko_from_frame(&f, &fp, ctx.h(), sheet)?, n))
}

/// Generator of the screw symmetry `f(x + s, y) = exp(s G) f(x, y)` of either
/// Sym–Bobenko sheet: `G = (xi, -xi'/(2H))`, i.e. `Phi_lambda(xi)` with its
/// translation rescaled by the factor `-1/(2H)` of the immersion.
pub fn surface_symmetry(ctx: &FrameContext, lam: LoopPoint) -> Twist {
    let phi = phi_mu_algebra(&ctx.xi.eval(lam), &ctx.xi.deriv_t(lam));
    Twist { rot: phi.rot, trans: phi.trans * (-0.5 / ctx.h()) }
}

/// The points of the unit circle where `Phi_lambda(xi)` is a pure rotation,
/// i.e. `<xi, xi'> = 0`. With `xi = xi_- / lambda + xi_+ lambda` this happens
/// exactly when `lambda^4 = <xi_-, xi_-> / <xi_+, xi_+>`.
pub fn delaunay_angles(xi: &NormalFormPotential) -> Result<Vec<LoopPoint>> {
    if xi.case() == PotentialCase::SphereOrPoint {
        return Err(Error::DegenerateCase(PotentialCase::SphereOrPoint));
    }
    let i = C64::new(0.0, 1.0);
    let minus = Mat2C::offdiag(i * xi.a, i * xi.b);
    let plus = Mat2C::offdiag(i * xi.b, i * xi.a);
    let ratio = killing(&minus, &minus) / killing(&plus, &plus);
    let root = ratio.powf(0.25);
    let mut out = Vec::new();
    if (root.norm() - 1.0).abs() < 1e-12 {
        for k in 0..4 {
            let t = (root.arg() + k as f64 * std::f64::consts::FRAC_PI_2).rem_euclid(std::f64::consts::TAU);
            out.push(LoopPoint::new(t));
        }
    }
    out.sort_by(|p, q| p.t.total_cmp(&q.t));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su2loop::bracket;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn ctx() -> FrameContext {
        FrameContext::from_constants(0.4, 0.6, 1.0).unwrap()
    }

    fn rand_vec(r: &mut StdRng) -> Su2Vector {
        Su2Vector::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
    }

    fn rand_motion(r: &mut StdRng) -> EuclideanMotion {
        let g = exp_traceless(C64::new(1.0, 0.0), &(rand_vec(r) * 3.0).to_matrix()).unwrap();
        EuclideanMotion::new(g, rand_vec(r) * 2.0).unwrap()
    }

    fn generic_t(r: &mut StdRng) -> f64 {
        r.gen_range(0..4) as f64 * FRAC_PI_2 + r.gen_range(0.1..FRAC_PI_2 - 0.1)
    }

    #[test]
    fn affine_action_examples() {
        let mut r = StdRng::seed_from_u64(1);
        let p = rand_vec(&mut r);
        assert_eq!(EuclideanMotion::identity().act(&p), p);
        let z = rand_vec(&mut r);
        assert!(EuclideanMotion::translation(z).act(&p).dist(&(p + z)) < 1e-15);
        for _ in 0..100 {
            let m = rand_motion(&mut r);
            let (p, q) = (rand_vec(&mut r), rand_vec(&mut r));
            assert!((m.act(&p).dist(&m.act(&q)) - p.dist(&q)).abs() < 1e-14);
        }
    }

    #[test]
    fn group_laws() {
        let mut r = StdRng::seed_from_u64(2);
        for _ in 0..100 {
            let (a, b, c) = (rand_motion(&mut r), rand_motion(&mut r), rand_motion(&mut r));
            assert!(a.compose(&b).compose(&c).dist(&a.compose(&b.compose(&c))) < 1e-12);
            assert!(a.compose(&a.inverse()).dist(&EuclideanMotion::identity()) < 1e-12);
            assert!(a.inverse().compose(&a).dist(&EuclideanMotion::identity()) < 1e-12);
            let p = rand_vec(&mut r);
            assert!(a.compose(&b).act(&p).dist(&a.act(&b.act(&p))) < 1e-12);
        }
    }

    #[test]
    fn phi_mu_trivial_and_bad_derivative() {
        let m = phi_mu(&Mat2C::identity(), &Mat2C::zero()).unwrap();
        assert_eq!(m, EuclideanMotion::identity());
        let bad = Mat2C::identity();
        assert!(matches!(phi_mu(&Mat2C::identity(), &bad), Err(Error::BadDerivative(_))));
    }

    #[test]
    fn phi_mu_is_a_homomorphism() {
        let c = ctx();
        let mut r = StdRng::seed_from_u64(3);
        for _ in 0..100 {
            let lam = LoopPoint::new(generic_t(&mut r));
            let (x1, y1) = (r.gen_range(-1.5..1.5), r.gen_range(-1.5..1.5));
            let (x2, y2) = (r.gen_range(-1.5..1.5), r.gen_range(-1.5..1.5));
            let (f1, d1) = frame_with_deriv_t(&c, x1, y1, lam).unwrap();
            let (f2, d2) = frame_with_deriv_t(&c, x2, y2, lam).unwrap();
            let prod = phi_mu(&(f1 * f2), &(d1 * f2 + f1 * d2)).unwrap();
            let composed = phi_mu(&f1, &d1).unwrap().compose(&phi_mu(&f2, &d2).unwrap());
            assert!(prod.dist(&composed) < 1e-10);
        }
    }

    #[test]
    fn phi_mu_algebra_matches_potential_derivative() {
        let c = ctx();
        let lam = LoopPoint::new(0.9);
        let tw = phi_mu_algebra(&c.xi.eval(lam), &c.xi.deriv_t(lam));
        assert!(tw.trans.to_matrix().dist(&c.xi.deriv_t(lam)) < 1e-15);
        // Phi applied to the one-parameter group exp(s xi) differentiates to (xi, xi')
        let s = 1e-6;
        let e = |t: f64| exp_traceless(C64::new(s, 0.0), &c.xi.eval(LoopPoint::new(t))).unwrap();
        let h = 1e-5;
        let ep = (e(0.9 + h) - e(0.9 - h)) * (0.5 / h);
        let m = phi_mu(&e(0.9), &ep).unwrap();
        assert!((m.trans * (1.0 / s)).dist(&tw.trans) < 1e-5);
    }

    #[test]
    fn screw_examples() {
        let s = screw_decompose(Su2Vector::e(3), Su2Vector::e(3)).unwrap();
        assert_eq!(s.axis_dir, Su2Vector::e(3));
        assert_eq!(s.axis_offset, Su2Vector::zero());
        assert_eq!((s.pitch, s.rotation_rate), (1.0, 1.0));

        let s = screw_decompose(Su2Vector::e(3), Su2Vector::e(1)).unwrap();
        assert!(s.is_pure_rotation(1e-15));
        assert!(s.axis_offset.dist(&Su2Vector::e(2)) < 1e-15);
        let br = bracket(&Su2Vector::e(3).to_matrix(), &Su2Vector::e(2).to_matrix());
        assert!(br.dist(&(-Su2Vector::e(1)).to_matrix()) < 1e-15);

        assert_eq!(screw_decompose(Su2Vector::zero(), Su2Vector::e(1)), Err(Error::PureTranslation));
    }

    #[test]
    fn screw_axis_solves_bracket_equation() {
        let mut r = StdRng::seed_from_u64(4);
        for _ in 0..200 {
            let (xi, eta) = (rand_vec(&mut r), rand_vec(&mut r));
            let s = screw_decompose(xi, eta).unwrap();
            let eta_perp = eta - s.axis_dir * eta.dot(&s.axis_dir);
            let lhs = Su2Vector::from_matrix(&bracket(&xi.to_matrix(), &s.axis_offset.to_matrix()));
            assert!(lhs.dist(&-eta_perp) < 1e-10);
            assert!(s.axis_offset.dot(&xi).abs() < 1e-14);
            // perpendicular pairs are pure rotations
            let perp = eta_perp;
            assert!(screw_decompose(xi, perp).unwrap().is_pure_rotation(1e-12));
        }
    }

    /// Classical RK4 on `g' = g xi`, `zeta' = Ad g eta`.
    fn integrate_flow(tw: &Twist, s: f64, steps: usize) -> EuclideanMotion {
        let xi = tw.rot.to_matrix();
        let rhs = |g: &Mat2C| (*g * xi, Su2Vector::from_matrix(&g.conjugate(&tw.trans.to_matrix())));
        let h = s / steps as f64;
        let (mut g, mut z) = (Mat2C::identity(), Su2Vector::zero());
        for _ in 0..steps {
            let (k1, l1) = rhs(&g);
            let (k2, l2) = rhs(&(g + k1 * (0.5 * h)));
            let (k3, l3) = rhs(&(g + k2 * (0.5 * h)));
            let (k4, l4) = rhs(&(g + k3 * h));
            g += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
            z = z + (l1 + l2 * 2.0 + l3 * 2.0 + l4) * (h / 6.0);
        }
        EuclideanMotion { g, trans: z }
    }

    #[test]
    fn screw_exponential_matches_flow() {
        let mut r = StdRng::seed_from_u64(5);
        for _ in 0..10 {
            let tw = Twist { rot: rand_vec(&mut r), trans: rand_vec(&mut r) };
            for &s in &[0.5, 3.0, 10.0] {
                let a = tw.exp(s);
                let b = integrate_flow(&tw, s, 4000);
                assert!(a.dist(&b) < 1e-8, "{}", a.dist(&b));
            }
        }
        let pure = Twist { rot: Su2Vector::zero(), trans: Su2Vector::e(2) };
        assert_eq!(pure.exp(2.0).trans, Su2Vector::e(2) * 2.0);
    }

    #[test]
    fn frame_derivative_matches_finite_differences() {
        let c = ctx();
        assert!(frame_deriv_t(&c, 0.0, 0.0, LoopPoint::new(0.7)).unwrap().norm() < 1e-15);
        let mut r = StdRng::seed_from_u64(6);
        let h = 1e-5;
        for _ in 0..50 {
            let t = generic_t(&mut r);
            let (x, y) = (r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
            let fd = (c.extended_frame(x, y, LoopPoint::new(t + h)).unwrap().frame
                - c.extended_frame(x, y, LoopPoint::new(t - h)).unwrap().frame)
                * (0.5 / h);
            let (f, an) = frame_with_deriv_t(&c, x, y, LoopPoint::new(t)).unwrap();
            assert!(an.dist(&fd) < 1e-6 * (1.0 + an.norm()));
            assert!((an * f.inverse()).is_antihermitian(1e-10));
        }
    }

    #[test]
    fn parallel_sheets_differ_by_normal() {
        let c = ctx();
        let mut r = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let lam = LoopPoint::new(generic_t(&mut r));
            let (x, y) = (r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
            let minus = sym_bobenko(&c, x, y, lam, Sheet::Minus).unwrap();
            let plus = sym_bobenko(&c, x, y, lam, Sheet::Plus).unwrap();
            let n = c.gauss_map(x, y, lam).unwrap();
            assert!((minus + n * (1.0 / c.h())).dist(&plus) < 1e-9);
        }
    }

    #[test]
    fn immersion_is_conformal_with_expected_scale() {
        for c in [ctx(), FrameContext::from_constants(-0.3, 0.9, 2.0).unwrap()] {
            let mut r = StdRng::seed_from_u64(8);
            let h = 1e-4;
            for _ in 0..20 {
                let lam = LoopPoint::new(generic_t(&mut r));
                let (x, y) = (r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
                let f = |x: f64, y: f64| sym_bobenko(&c, x, y, lam, Sheet::Minus).unwrap();
                let fx = (f(x + h, y) - f(x - h, y)) * (0.5 / h);
                let fy = (f(x, y + h) - f(x, y - h)) * (0.5 / h);
                let v = c.v0(y);
                assert!((fx.norm() - fy.norm()).abs() < 1e-6);
                assert!(fx.dot(&fy).abs() < 1e-6);
                assert!((fx.dot(&fx) - SYM_BOBENKO_METRIC_SCALE * v * v).abs() < 1e-6);
                let n = c.gauss_map(x, y, lam).unwrap();
                assert!(fx.dot(&n).abs() < 1e-6 && fy.dot(&n).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn mean_curvature_of_minus_sheet() {
        let c = ctx();
        let lam = LoopPoint::new(0.7);
        let h = 1e-3;
        for &(x, y) in &[(0.3, 0.9), (-1.0, 0.2), (0.0, 2.0)] {
            let f = |x: f64, y: f64| sym_bobenko(&c, x, y, lam, Sheet::Minus).unwrap();
            let p = f(x, y);
            let lap = (f(x + h, y) + f(x - h, y) + f(x, y + h) + f(x, y - h) - p * 4.0) * (1.0 / (h * h));
            let n = c.gauss_map(x, y, lam).unwrap();
            let v = c.v0(y);
            assert!((lap.dot(&n) / (2.0 * v * v) - c.h()).abs() < 1e-5);
        }
    }

    #[test]
    fn screw_equivariance_of_surface() {
        let c = ctx();
        for &t in &[0.3, 0.9, 2.0, 3.5, 5.0] {
            let lam = LoopPoint::new(t);
            let g = surface_symmetry(&c, lam);
            // the algebra-level statement: P = Phi_lambda(F) . e1 moves by exp(s Phi_lambda(xi))
            let phi = phi_mu_algebra(&c.xi.eval(lam), &c.xi.deriv_t(lam));
            for &s in &[0.3, 1.7] {
                for &(x, y) in &[(0.0, 0.0), (0.4, -0.7), (-1.1, 1.3)] {
                    for sheet in [Sheet::Minus, Sheet::Plus] {
                        let p = sym_bobenko(&c, x, y, lam, sheet).unwrap();
                        let q = sym_bobenko(&c, x + s, y, lam, sheet).unwrap();
                        assert!(g.exp(s).act(&p).dist(&q) < 1e-8);
                    }
                    let (f0, d0) = frame_with_deriv_t(&c, x, y, lam).unwrap();
                    let (f1, d1) = frame_with_deriv_t(&c, x + s, y, lam).unwrap();
                    let p0 = phi_mu(&f0, &d0).unwrap().act(&Su2Vector::e(1));
                    let p1 = phi_mu(&f1, &d1).unwrap().act(&Su2Vector::e(1));
                    assert!(phi.exp(s).act(&p0).dist(&p1) < 1e-8);
                }
            }
        }
    }

    #[test]
    fn delaunay_angles_are_fourth_roots() {
        for &(a, b) in &[(0.4, 0.6), (-0.3, 0.9), (0.5, 0.5), (1.2, -0.2)] {
            let xi = NormalFormPotential::new(a, b, 1.0).unwrap();
            let angles = delaunay_angles(&xi).unwrap();
            assert_eq!(angles.len(), 4);
            for (k, lam) in angles.iter().enumerate() {
                assert!((lam.t - k as f64 * FRAC_PI_2).abs() < 1e-12);
                assert!(killing(&xi.eval(*lam), &xi.deriv_t(*lam)).norm() < 1e-12);
            }
            // nowhere else
            let off = LoopPoint::new(FRAC_PI_4);
            assert!(killing(&xi.eval(off), &xi.deriv_t(off)).norm() > 1e-3);
        }
        assert!(delaunay_angles(&NormalFormPotential::new(0.0, 1.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn surface_of_revolution_at_lambda_one() {
        let c = ctx();
        let lam = LoopPoint::new(0.0);
        let screw = screw_decompose(surface_symmetry(&c, lam).rot, surface_symmetry(&c, lam).trans).unwrap();
        assert!(screw.is_pure_rotation(1e-14));
        for &y in &[0.0, 0.5, 1.4, 2.9] {
            let d: Vec<f64> = (0..40)
                .map(|i| screw.axis_distance(&sym_bobenko(&c, 0.13 * i as f64, y, lam, Sheet::Minus).unwrap()))
                .collect();
            let mean = d.iter().sum::<f64>() / d.len() as f64;
            let var = d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / d.len() as f64;
            assert!(var < 1e-16);
        }
    }
}
