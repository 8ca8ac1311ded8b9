//! The explicit extended frame `F = exp(bold_f xi) T` of a normal-form potential.
//!
//! With `lambda = e^{it}` on the unit circle and `z = x + iy`:
//!
//! ```text
//! v0(y)      = (2b/H) dn(2by | kappa'),           kappa = a^2/b^2, kappa' = 1 - kappa
//! omega      = i (b/lambda + a lambda)
//! Omega1     = (i/2) v0 H / lambda + 2i ab/(H v0) lambda
//! T(y, l)    = (omega Omega1)^{-1/2} [[Omega1, -(i/2) v0'/v0], [0, omega]]
//! f(y, l)    = \int_0^y 8ab lambda / (4i ab lambda + i H^2 v0^2 / lambda) dzeta
//! bold_f     = x + iy + f(y, lambda)
//! ```
//!
//! `Omega1` vanishes on the circle only at two fourth roots of unity (`lambda = +-i`
//! when `ab > 0`, `+-1` when `ab < 0`), and only at the rows `y` where
//! `|v0| = 2 sqrt(|ab|)/|H|`. The frame is singular there and evaluation returns
//! [`Error::SingularFrame`].

use serde::{Deserialize, Serialize};

use crate::elliptic::{complete_k, jacobi_sn_cn_dn, EllipticParameter};
use crate::error::{Error, Result};
use crate::quad::integrate_adaptive_rel;
use crate::su2loop::{basis_matrix, exp_traceless, LoopPoint, Mat2C, NormalFormPotential, PotentialCase, Su2Vector, C64, I};

/// Gauss–Legendre panels per metric period in [`FrameContext::f_integral`].
const PANELS_PER_PERIOD: usize = 8;

/// Absolute and relative tolerances requested from the adaptive quadrature.
const QUAD_TOL: f64 = 1e-13;
const QUAD_REL_TOL: f64 = 1e-13;

/// `|Omega1 / omega|` below this is treated as a singular frame.
const SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameKind {
    Generic,
    /// `a = +-b`: constant conformal factor, `T = 1`.
    RoundCylinder,
}

/// How the input potential was brought to the stored representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Normalization {
    /// `a` and `b` were exchanged so that `a^2 <= b^2`.
    pub swapped: bool,
    /// `(a, b)` were replaced by `(-a, -b)`, i.e. `lambda -> -lambda`.
    pub negated: bool,
    /// `H` was replaced by `-H`.
    pub flipped_h: bool,
}

/// Constants shared by all frame evaluations of one potential. Immutable once built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameContext {
    pub xi: NormalFormPotential,
    pub kind: FrameKind,
    pub normalization: Normalization,
    /// `kappa = a^2/b^2`.
    pub kappa: f64,
    /// `kappa' = 1 - kappa`, the parameter of `dn` in the conformal factor.
    pub kappa_p: EllipticParameter,
    /// `K' = K(kappa')`.
    pub kp: f64,
    /// Hopf coefficient `Q = 2ab/H`.
    pub q_hopf: f64,
}

/// One evaluation of the extended frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameValue {
    pub frame: Mat2C,
    pub t: Mat2C,
    pub f: C64,
    pub bold_f: C64,
}

impl FrameContext {
    /// Canonicalizes `a^2 <= b^2`, then fixes `b > 0` and `H > 0`, so `v0 > 0`.
    /// Sphere/point potentials (`ab = 0`) are rejected.
    pub fn new(xi: NormalFormPotential) -> Result<Self> {
        let (mut p, case) = xi.canonicalize();
        let kind = match case {
            PotentialCase::Generic => FrameKind::Generic,
            PotentialCase::RoundCylinder => FrameKind::RoundCylinder,
            PotentialCase::SphereOrPoint => return Err(Error::DegenerateCase(case)),
        };
        let mut normalization = Normalization {
            swapped: p.a != xi.a,
            ..Default::default()
        };
        if p.b < 0.0 {
            p.a = -p.a;
            p.b = -p.b;
            normalization.negated = true;
        }
        if p.h < 0.0 {
            p.h = -p.h;
            normalization.flipped_h = true;
        }
        let kappa = match kind {
            FrameKind::Generic => (p.a / p.b).powi(2),
            FrameKind::RoundCylinder => {
                // snap so that dn(. | 0) is exactly 1
                p.a = p.b.copysign(p.a);
                1.0
            }
        };
        let kappa_p = EllipticParameter::new(1.0 - kappa)?;
        let kp = complete_k(kappa_p)?;
        Ok(Self {
            xi: p,
            kind,
            normalization,
            kappa,
            kappa_p,
            kp,
            q_hopf: 2.0 * p.a * p.b / p.h,
        })
    }

    pub fn from_constants(a: f64, b: f64, h: f64) -> Result<Self> {
        Self::new(NormalFormPotential::new(a, b, h)?)
    }

    pub fn a(&self) -> f64 {
        self.xi.a
    }

    pub fn b(&self) -> f64 {
        self.xi.b
    }

    pub fn h(&self) -> f64 {
        self.xi.h
    }

    /// Period `K'/b` of the conformal factor in `y`.
    pub fn metric_period(&self) -> f64 {
        self.kp / self.xi.b
    }

    fn jacobi(&self, y: f64) -> (f64, f64, f64) {
        let j = jacobi_sn_cn_dn(2.0 * self.xi.b * y, self.kappa_p);
        (j.sn, j.cn, j.dn)
    }

    /// Conformal factor `v0(y) = (2b/H) dn(2by | kappa')`.
    pub fn v0(&self, y: f64) -> f64 {
        2.0 * self.xi.b / self.xi.h * self.jacobi(y).2
    }

    pub fn v0_dot(&self, y: f64) -> f64 {
        let (sn, cn, _) = self.jacobi(y);
        let b2 = 2.0 * self.xi.b;
        b2 / self.xi.h * b2 * (-self.kappa_p.value() * sn * cn)
    }

    pub fn v0_ddot(&self, y: f64) -> f64 {
        let (sn, cn, dn) = self.jacobi(y);
        let b2 = 2.0 * self.xi.b;
        b2 / self.xi.h * b2 * b2 * (-self.kappa_p.value() * dn * (cn * cn - sn * sn))
    }

    pub fn omega(&self, lam: LoopPoint) -> C64 {
        let l = lam.lambda();
        I * (self.xi.b * l.inv() + self.xi.a * l)
    }

    pub fn omega1(&self, y: f64, lam: LoopPoint) -> C64 {
        self.omega1_with_v(self.v0(y), lam)
    }

    fn omega1_with_v(&self, v: f64, lam: LoopPoint) -> C64 {
        let (a, b, h) = (self.xi.a, self.xi.b, self.xi.h);
        let l = lam.lambda();
        I * 0.5 * v * h * l.inv() + I * 2.0 * a * b / (h * v) * l
    }

    pub fn omega2(&self, y: f64, lam: LoopPoint) -> C64 {
        let (a, b, h) = (self.xi.a, self.xi.b, self.xi.h);
        let v = self.v0(y);
        let l = lam.lambda();
        -0.5 * v * h * l.inv() + 2.0 * a * b / (h * v) * l
    }

    /// `sqrt(omega Omega1)` on the branch `omega * sqrt(Omega1/omega)` (principal
    /// root). `Omega1/omega` stays off the negative real axis on the circle, so this
    /// branch is continuous in `y` and equals `omega` at `y = 0`.
    fn t_parts(&self, y: f64, lam: LoopPoint) -> Result<(C64, C64, f64, f64, C64)> {
        let v = self.v0(y);
        let vd = self.v0_dot(y);
        let w = self.omega(lam);
        let o1 = self.omega1_with_v(v, lam);
        let scale = self.xi.a.abs() + self.xi.b.abs();
        if w.norm() <= SINGULAR_TOL * scale || o1.norm() <= SINGULAR_TOL * w.norm() {
            return Err(Error::SingularFrame { y, t: lam.t });
        }
        let s = w * (o1 / w).sqrt();
        Ok((w, o1, v, vd, s))
    }

    /// The upper-triangular factor `T(y, lambda)`, `det T = 1`, `T(0, lambda) = 1`.
    pub fn t_matrix(&self, y: f64, lam: LoopPoint) -> Result<Mat2C> {
        let (w, o1, v, vd, s) = self.t_parts(y, lam)?;
        Ok(Mat2C::new(o1, -0.5 * I * vd / v, C64::new(0.0, 0.0), w) * s.inv())
    }

    /// `dT/dt` in closed form.
    pub fn t_matrix_deriv_t(&self, y: f64, lam: LoopPoint) -> Result<Mat2C> {
        let (w, o1, v, vd, s) = self.t_parts(y, lam)?;
        let (a, b, h) = (self.xi.a, self.xi.b, self.xi.h);
        let l = lam.lambda();
        let w_dot = b * l.inv() - a * l;
        let o1_dot = 0.5 * v * h * l.inv() - 2.0 * a * b / (h * v) * l;
        let s_dot = (w_dot * o1 + w * o1_dot) / (2.0 * s);
        let m0 = Mat2C::new(o1, -0.5 * I * vd / v, C64::new(0.0, 0.0), w);
        let m0_dot = Mat2C::diag(o1_dot, w_dot);
        Ok(m0 * (-s_dot / (s * s)) + m0_dot * s.inv())
    }

    /// `1 / (4i ab lambda + i H^2 v0^2 / lambda)` times `8ab lambda` at `zeta`.
    fn f_integrand(&self, zeta: f64, l: C64) -> C64 {
        let (a, b, h) = (self.xi.a, self.xi.b, self.xi.h);
        let hv = h * self.v0(zeta);
        8.0 * a * b * l / (I * (4.0 * a * b * l + hv * hv * l.inv()))
    }

    fn f_t_integrand(&self, zeta: f64, l: C64) -> C64 {
        let (a, b, h) = (self.xi.a, self.xi.b, self.xi.h);
        let hv = h * self.v0(zeta);
        let d = 4.0 * a * b * l + hv * hv * l.inv();
        16.0 * a * b * hv * hv / (d * d)
    }

    /// `\int_0^y g`, split as `n \int_0^P g + \int_0^r g` with `P` the metric
    /// period and `y = nP + r`, `0 <= r < P`. Exact additivity over periods.
    fn periodic_integral(&self, y: f64, g: impl Fn(f64) -> C64) -> C64 {
        let period = self.metric_period();
        let n = (y / period).floor();
        let r = y - n * period;
        let mut acc = integrate_adaptive_rel(&g, 0.0, r, PANELS_PER_PERIOD, QUAD_TOL, QUAD_REL_TOL);
        if n != 0.0 {
            acc += integrate_adaptive_rel(&g, 0.0, period, PANELS_PER_PERIOD, QUAD_TOL, QUAD_REL_TOL) * n;
        }
        acc
    }

    /// `f(y, lambda)`.
    pub fn f_integral(&self, y: f64, lam: LoopPoint) -> C64 {
        let l = lam.lambda();
        self.periodic_integral(y, |z| self.f_integrand(z, l))
    }

    /// `df/dt (y, lambda)`. Real when `y` is a multiple of the metric period.
    pub fn f_deriv_t(&self, y: f64, lam: LoopPoint) -> C64 {
        let l = lam.lambda();
        self.periodic_integral(y, |z| self.f_t_integrand(z, l))
    }

    /// `F(x, y, lambda) = exp(bold_f xi(lambda)) T(y, lambda)`.
    pub fn extended_frame(&self, x: f64, y: f64, lam: LoopPoint) -> Result<FrameValue> {
        let t = self.t_matrix(y, lam)?;
        let f = self.f_integral(y, lam);
        let bold_f = C64::new(x, y) + f;
        let frame = exp_traceless(bold_f, &self.xi.eval(lam))? * t;
        Ok(FrameValue { frame, t, f, bold_f })
    }

    /// Maurer–Cartan coefficients `(alpha1, alpha2)` of `F^{-1} dF = alpha1 dx + alpha2 dy`.
    pub fn alpha_forms(&self, y: f64, lam: LoopPoint) -> (Mat2C, Mat2C) {
        let h = self.xi.h;
        let q = self.q_hopf;
        let v = self.v0(y);
        let r = self.v0_dot(y) / v;
        let l = lam.lambda();
        let li = l.inv();
        let half_i = 0.5 * I;
        let a1 = Mat2C::new(
            half_i * r,
            half_i * (2.0 * q / v * li + v * h * l),
            half_i * (v * h * li + 2.0 * q / v * l),
            -half_i * r,
        );
        let a2 = Mat2C::offdiag(0.5 * (-2.0 * q / v * li + v * h * l), 0.5 * (-v * h * li + 2.0 * q / v * l));
        (a1, a2)
    }

    /// `F^{-1} dF/dx = T^{-1} xi T`, read off the frame itself.
    pub fn alpha1_from_frame(&self, y: f64, lam: LoopPoint) -> Result<Mat2C> {
        let t = self.t_matrix(y, lam)?;
        Ok(t.inverse() * self.xi.eval(lam) * t)
    }

    /// Recovers `Q` from the `lambda^{-1}` coefficient `iQ/v0` of the upper-right
    /// entry of `T^{-1} xi T`, by a discrete Fourier sum over `n` circle points.
    pub fn extract_hopf(&self, y: f64) -> Result<f64> {
        let n = 8;
        let mut coeff = C64::new(0.0, 0.0);
        for k in 0..n {
            // offset keeps all samples away from the fourth roots of unity
            let lam = LoopPoint::new(std::f64::consts::TAU * (k as f64 + 0.25) / n as f64);
            coeff += self.alpha1_from_frame(y, lam)?[(0, 1)] * lam.lambda();
        }
        coeff /= n as f64;
        Ok((coeff / I).re * self.v0(y))
    }

    /// Gauss map `N = Ad F e1`.
    pub fn gauss_map(&self, x: f64, y: f64, lam: LoopPoint) -> Result<Su2Vector> {
        let f = self.extended_frame(x, y, lam)?.frame;
        Ok(Su2Vector::from_matrix(&f.conjugate(&basis_matrix(1))))
    }

    /// `B(y, 0) = diag(v0^{-1/2}, v0^{1/2})`.
    pub fn b0_check(&self, y: f64) -> Result<Mat2C> {
        let v = self.v0(y);
        if v <= 0.0 {
            return Err(Error::Orientation(v));
        }
        let r = v.sqrt();
        Ok(Mat2C::diag(C64::new(1.0 / r, 0.0), C64::new(r, 0.0)))
    }
}
