//! su(2) / SU(2) linear algebra, the identification su(2) = R^3, degree-one
//! twisted loop-algebra potentials in normal form and closed-form exponentials
//! of traceless 2x2 matrices.
//!
//! The basis of su(2) is a cyclic relabelling of the Pauli matrices,
//!
//! ```text
//! e1 = -(i/2) sigma_3,   e2 = -(i/2) sigma_1,   e3 = -(i/2) sigma_2,
//! ```
//!
//! with inner product `<X, Y> = -2 tr(XY)`. The basis is orthonormal and
//! `[e1, e2] = e3` cyclically, so the Lie bracket is the cross product and
//! `Ad` acts as the usual SO(3) rotation. `e1` is diagonal because the Sym–Bobenko
//! normal at the base point is the diagonal direction for potentials in normal
//! form. Every module of the crate uses this one identification.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const I: C64 = C64::new(0.0, 1.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);

/// Complex 2x2 matrix, row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct Mat2C(pub [[C64; 2]; 2]);

impl fmt::Debug for Mat2C {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(f, "[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

impl Mat2C {
    pub const fn new(a11: C64, a12: C64, a21: C64, a22: C64) -> Self {
        Self([[a11, a12], [a21, a22]])
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub fn diag(d1: C64, d2: C64) -> Self {
        Self::new(d1, ZERO, ZERO, d2)
    }

    pub fn offdiag(upper: C64, lower: C64) -> Self {
        Self::new(ZERO, upper, lower, ZERO)
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Self::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    /// Adjugate, so that `X adj(X) = det(X) I`.
    pub fn adjugate(&self) -> Self {
        let m = &self.0;
        Self::new(m[1][1], -m[0][1], -m[1][0], m[0][0])
    }

    pub fn inverse(&self) -> Self {
        self.adjugate() * (ONE / self.det())
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn dist(&self, other: &Self) -> f64 {
        (*self - *other).norm()
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        let m = &self.0;
        Self::new(f(m[0][0]), f(m[0][1]), f(m[1][0]), f(m[1][1]))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (*self * self.adjoint()).dist(&Self::identity()) < tol
    }

    pub fn is_traceless(&self, tol: f64) -> bool {
        self.trace().norm() < tol
    }

    pub fn is_antihermitian(&self, tol: f64) -> bool {
        (*self + self.adjoint()).norm() < tol
    }

    /// `self * x * self^{-1}`.
    pub fn conjugate(&self, x: &Self) -> Self {
        *self * *x * self.inverse()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.is_finite())
    }
}

impl Index<(usize, usize)> for Mat2C {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.0[r][c]
    }
}

impl Add for Mat2C {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        Self::new(a[0][0] + b[0][0], a[0][1] + b[0][1], a[1][0] + b[1][0], a[1][1] + b[1][1])
    }
}

impl AddAssign for Mat2C {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Mat2C {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for Mat2C {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|z| -z)
    }
}

impl Mul for Mat2C {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Mul<C64> for Mat2C {
    type Output = Self;
    fn mul(self, s: C64) -> Self {
        self.map(|z| z * s)
    }
}

impl Mul<f64> for Mat2C {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.map(|z| z * s)
    }
}

/// The orthonormal basis matrix `e_j`, `j` in `1..=3`.
pub fn basis_matrix(j: usize) -> Mat2C {
    let h = C64::new(0.0, 0.5);
    match j {
        1 => Mat2C::diag(-h, h),
        2 => Mat2C::offdiag(-h, -h),
        3 => Mat2C::offdiag(C64::new(-0.5, 0.0), C64::new(0.5, 0.0)),
        _ => panic!("basis index {j} out of range 1..=3"),
    }
}

/// The complex-bilinear inner product `-2 tr(XY)`; real on su(2).
pub fn killing(x: &Mat2C, y: &Mat2C) -> C64 {
    -2.0 * (*x * *y).trace()
}

pub fn bracket(x: &Mat2C, y: &Mat2C) -> Mat2C {
    *x * *y - *y * *x
}

/// A vector of R^3, identified with su(2) through the basis `e_j`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Su2Vector(pub [f64; 3]);

impl Su2Vector {
    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self([x1, x2, x3])
    }

    pub const fn zero() -> Self {
        Self([0.0; 3])
    }

    pub fn e(j: usize) -> Self {
        let mut v = [0.0; 3];
        v[j - 1] = 1.0;
        Self(v)
    }

    pub fn to_matrix(&self) -> Mat2C {
        basis_matrix(1) * self.0[0] + basis_matrix(2) * self.0[1] + basis_matrix(3) * self.0[2]
    }

    /// Coordinates `<X, e_j>`. The anti-Hermitian part of `x` is projected; callers
    /// check anti-Hermiticity themselves when it matters.
    pub fn from_matrix(x: &Mat2C) -> Self {
        Self(std::array::from_fn(|j| killing(x, &basis_matrix(j + 1)).re))
    }

    pub fn dot(&self, o: &Self) -> f64 {
        self.0.iter().zip(&o.0).map(|(a, b)| a * b).sum()
    }

    pub fn cross(&self, o: &Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        Self([a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]])
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dist(&self, o: &Self) -> f64 {
        (*self - *o).norm()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl Add for Su2Vector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self(std::array::from_fn(|j| self.0[j] + o.0[j]))
    }
}

impl Sub for Su2Vector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self(std::array::from_fn(|j| self.0[j] - o.0[j]))
    }
}

impl Neg for Su2Vector {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl Mul<f64> for Su2Vector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self(self.0.map(|x| x * s))
    }
}

/// A point `lambda = e^{it}` of the unit circle, stored by its angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoopPoint {
    pub t: f64,
}

impl LoopPoint {
    pub const fn new(t: f64) -> Self {
        Self { t }
    }

    pub fn lambda(&self) -> C64 {
        C64::from_polar(1.0, self.t)
    }

    /// Distance of `t` to the nearest point of `(pi/2) Z`.
    pub fn distance_to_fourth_root(&self) -> f64 {
        let r = self.t.rem_euclid(FRAC_PI_2);
        r.min(FRAC_PI_2 - r)
    }

    pub fn is_fourth_root_of_unity(&self, tol: f64) -> bool {
        self.distance_to_fourth_root() <= tol
    }

    /// The point `-lambda`.
    pub fn negated(&self) -> Self {
        Self::new(self.t + PI)
    }
}

/// Classification of a normal-form potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialCase {
    /// `a^2 != b^2`, `ab != 0`: an unduloid or nodoid associated family.
    Generic,
    /// `a = +-b != 0`: associated family of a right circular cylinder.
    RoundCylinder,
    /// `ab = 0`: twice punctured round sphere, or a point.
    SphereOrPoint,
}

/// Relative tolerance used to classify `|a| = |b|`.
const ROUND_TOL: f64 = 1e-12;

/// The potential `i [[0, a/lambda + b lambda], [b/lambda + a lambda, 0]] dz`
/// together with the mean curvature `H` of the surfaces it generates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalFormPotential {
    pub a: f64,
    pub b: f64,
    #[serde(rename = "H")]
    pub h: f64,
}

impl NormalFormPotential {
    pub fn new(a: f64, b: f64, h: f64) -> Result<Self> {
        if h == 0.0 || !h.is_finite() {
            return Err(Error::ZeroMeanCurvature);
        }
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidArgument(format!("non-finite potential constants a = {a}, b = {b}")));
        }
        Ok(Self { a, b, h })
    }

    /// `xi(lambda)`.
    pub fn eval(&self, lam: LoopPoint) -> Mat2C {
        let l = lam.lambda();
        let li = l.inv();
        Mat2C::offdiag(I * (self.a * li + self.b * l), I * (self.b * li + self.a * l))
    }

    /// `d xi / dt` at `lambda = e^{it}`.
    pub fn deriv_t(&self, lam: LoopPoint) -> Mat2C {
        let l = lam.lambda();
        let li = l.inv();
        Mat2C::offdiag(I * (-I * self.a * li + I * self.b * l), I * (-I * self.b * li + I * self.a * l))
    }

    /// `-det xi(lambda)`, the square of `mu`. Real and non-positive on the circle.
    pub fn mu_squared(&self, lam: LoopPoint) -> C64 {
        -self.eval(lam).det()
    }

    /// `mu(lambda) = sqrt(-det xi(lambda))` on the branch `Im mu >= 0`.
    pub fn mu(&self, lam: LoopPoint) -> Result<C64> {
        let m = self.mu_squared(lam).sqrt();
        let scale = self.a.abs() + self.b.abs();
        if m.norm() <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::ZeroMu(lam.t));
        }
        Ok(if m.im < 0.0 || (m.im == 0.0 && m.re < 0.0) { -m } else { m })
    }

    /// `d mu / dt = i a b (lambda^{-2} - lambda^2) / mu`.
    pub fn mu_deriv_t(&self, lam: LoopPoint) -> Result<C64> {
        let mu = self.mu(lam)?;
        let l2 = lam.lambda().powi(2);
        Ok(I * self.a * self.b * (l2.inv() - l2) / mu)
    }

    pub fn case(&self) -> PotentialCase {
        let (a, b) = (self.a.abs(), self.b.abs());
        if a == 0.0 || b == 0.0 {
            PotentialCase::SphereOrPoint
        } else if (a - b).abs() <= ROUND_TOL * a.max(b) {
            PotentialCase::RoundCylinder
        } else {
            PotentialCase::Generic
        }
    }

    /// The transposed potential: `a` and `b` swapped.
    pub fn transposed(&self) -> Self {
        Self { a: self.b, b: self.a, h: self.h }
    }

    /// Orders the constants so that `a^2 <= b^2`. Swapping generates the same
    /// surface up to a rigid motion, after the domain shift `z -> z + i K'/(2|b|)`.
    pub fn canonicalize(&self) -> (Self, PotentialCase) {
        let p = if self.a * self.a > self.b * self.b { self.transposed() } else { *self };
        (p, p.case())
    }
}

/// `sinh(w)/w`, even in `w`.
fn sinhc(w: C64) -> C64 {
    if w.norm() < 1.0 {
        even_series(w * w, |n| 1.0 / factorial(2 * n + 1))
    } else {
        w.sinh() / w
    }
}

/// `(w cosh w - sinh w) / w^3`, even in `w`.
fn sinhc_deriv_ratio(w: C64) -> C64 {
    if w.norm() < 1.0 {
        even_series(w * w, |n| (2 * n + 2) as f64 / factorial(2 * n + 3))
    } else {
        (w * w.cosh() - w.sinh()) / (w * w * w)
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `sum_n coeff(n) w2^n`, truncated once terms drop below machine precision.
fn even_series(w2: C64, coeff: impl Fn(usize) -> f64) -> C64 {
    let mut acc = ZERO;
    let mut pow = ONE;
    for n in 0..30 {
        let term = pow * coeff(n);
        acc += term;
        if term.norm() < 1e-18 * acc.norm() {
            break;
        }
        pow *= w2;
    }
    acc
}

fn check_traceless(x: &Mat2C) -> Result<()> {
    let tr = x.trace().norm();
    if tr > 1e-12 * (1.0 + x.norm()) {
        return Err(Error::NotTraceless(tr));
    }
    Ok(())
}

/// `exp(c X)` for traceless `X`, using `X^2 = mu^2 I` with `mu^2 = -det X`:
/// `exp(cX) = cosh(c mu) I + sinh(c mu)/mu X`.
pub fn exp_traceless(c: C64, x: &Mat2C) -> Result<Mat2C> {
    check_traceless(x)?;
    Ok(exp_with_mu(c, x, (-x.det()).sqrt()))
}

/// `exp(c X)` given an explicit square root `mu` of `-det X`. The result does not
/// depend on the sign of `mu`.
pub fn exp_with_mu(c: C64, x: &Mat2C, mu: C64) -> Mat2C {
    let w = c * mu;
    Mat2C::identity() * w.cosh() + *x * (c * sinhc(w))
}

/// `d/dt exp(c(t) X(t))` for traceless `X`, from `c, c'` and `X, X'`.
pub fn exp_traceless_deriv(c: C64, c_dot: C64, x: &Mat2C, x_dot: &Mat2C) -> Result<Mat2C> {
    check_traceless(x)?;
    let det_x = x.det();
    let w2 = -c * c * det_x;
    // d(det X)/dt = tr(adj(X) X')
    let det_x_dot = (x.adjugate() * *x_dot).trace();
    let w2_dot = -(2.0 * c * c_dot * det_x + c * c * det_x_dot);
    let w = w2.sqrt();
    let s = sinhc(w);
    let d = sinhc_deriv_ratio(w);
    let y = *x * c;
    let y_dot = *x * c_dot + *x_dot * c;
    Ok(Mat2C::identity() * (0.5 * s * w2_dot) + y * (0.5 * d * w2_dot) + y_dot * s)
}

/// Result of [`gauge_to_normal_form`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaugedCoefficients {
    pub a: f64,
    pub b: f64,
    /// Gauge angle of `diag(e^{i theta}, e^{-i theta})`.
    pub theta: f64,
}

/// Diagonal unitary gauge taking complex constants `(a, b)` of a degree-one
/// potential with zero diagonal and `ab` real to normal form: conjugation by
/// `diag(e^{i theta}, e^{-i theta})` maps `a -> e^{2i theta} a` and
/// `b -> e^{-2i theta} b`, both real afterwards.
pub fn gauge_to_normal_form(a: C64, b: C64) -> Result<GaugedCoefficients> {
    if a.norm() == 0.0 {
        return Err(Error::ZeroCoefficient);
    }
    let prod = a * b;
    if prod.im.abs() > 1e-10 * prod.norm().max(1.0) {
        return Err(Error::NonRealProduct(prod));
    }
    let theta = -0.5 * a.arg();
    let rot = C64::from_polar(1.0, -2.0 * theta);
    Ok(GaugedCoefficients { a: a.norm(), b: (b * rot).re, theta })
}
