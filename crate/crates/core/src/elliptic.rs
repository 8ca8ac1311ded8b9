//! Jacobi elliptic functions and elliptic integrals of the first kind.
//!
//! Everything here uses the *parameter* convention of Abramowitz & Stegun:
//!
//! ```text
//! F(phi | m) = \int_0^{sin phi} dt / sqrt((1 - t^2)(1 - m t^2))
//! ```
//!
//! so `m` multiplies `t^2` (it is the square of the modulus `k`). The conformal
//! factor of a Delaunay surface with constants `a, b` uses `dn(. | 1 - a^2/b^2)`,
//! i.e. the *complementary* parameter; it is easy to transpose the two, so call
//! sites always construct the parameter explicitly through [`EllipticParameter`].
//!
//! Algorithms: arithmetic-geometric mean for `K(m)`, descending Landen
//! transformation for `sn, cn, dn`, Carlson's symmetric `R_F` for the incomplete
//! integral.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on AGM / Landen steps; convergence is quadratic so 8 or so suffice.
const MAX_AGM_STEPS: usize = 40;

/// Elliptic parameter `m` with `0 <= m <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct EllipticParameter(f64);

impl EllipticParameter {
    pub fn new(m: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&m) {
            return Err(Error::ParameterDomain(m));
        }
        Ok(Self(m))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// The complementary parameter `1 - m`.
    pub fn complement(self) -> Self {
        Self(1.0 - self.0)
    }
}

/// The three Jacobi elliptic functions at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiElliptic {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Arithmetic-geometric mean of two non-negative numbers.
fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..MAX_AGM_STEPS {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        if (an - bn).abs() <= 4.0 * f64::EPSILON * an {
            return an;
        }
        a = an;
        b = bn;
    }
    a
}

/// Complete elliptic integral of the first kind `K(m) = F(pi/2 | m)`.
pub fn complete_k(m: EllipticParameter) -> Result<f64> {
    let m = m.value();
    if m >= 1.0 {
        return Err(Error::Divergent);
    }
    Ok(FRAC_PI_2 / agm(1.0, (1.0 - m).sqrt()))
}

/// Carlson's symmetric integral `R_F(x, y, z)` by duplication.
fn carlson_rf(mut x: f64, mut y: f64, mut z: f64) -> f64 {
    const ERRTOL: f64 = 1.0e-4; // gives ~1e-16 after the fifth-order correction
    loop {
        let mean = (x + y + z) / 3.0;
        let dx = 1.0 - x / mean;
        let dy = 1.0 - y / mean;
        let dz = 1.0 - z / mean;
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / mean.sqrt();
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
    }
}

/// Incomplete elliptic integral of the first kind `F(phi | m)`.
///
/// Arguments outside `[-pi/2, pi/2]` are handled by quasi-periodicity
/// `F(phi + n pi | m) = F(phi | m) + 2 n K(m)`. At `m = 1` the integral is
/// `artanh(sin phi)` and diverges at `|phi| = pi/2`.
pub fn ellint_f(phi: f64, m: EllipticParameter) -> Result<f64> {
    let mv = m.value();
    if mv == 1.0 {
        if phi.abs() >= FRAC_PI_2 {
            return Err(Error::LogarithmicSingularity(phi));
        }
        return Ok(phi.sin().atanh());
    }
    let n = (phi / PI).round();
    let r = phi - n * PI;
    let (s, c) = r.sin_cos();
    let reduced = s * carlson_rf(c * c, 1.0 - mv * s * s, 1.0);
    if n == 0.0 {
        Ok(reduced)
    } else {
        Ok(reduced + 2.0 * n * complete_k(m)?)
    }
}

/// `sn(u | m)`, `cn(u | m)`, `dn(u | m)` computed together by descending Landen
/// transformation.
pub fn jacobi_sn_cn_dn(u: f64, m: EllipticParameter) -> JacobiElliptic {
    let mv = m.value();
    if mv == 0.0 {
        let (sn, cn) = u.sin_cos();
        return JacobiElliptic { sn, cn, dn: 1.0 };
    }
    if mv == 1.0 {
        let sech = 1.0 / u.cosh();
        return JacobiElliptic {
            sn: u.tanh(),
            cn: sech,
            dn: sech,
        };
    }

    // sn and cn have real period 4K; reducing first keeps the phase small.
    let quarter = FRAC_PI_2 / agm(1.0, (1.0 - mv).sqrt());
    let period = 4.0 * quarter;
    let u = u - period * (u / period).round();

    let mut a = [0.0_f64; MAX_AGM_STEPS + 1];
    let mut c = [0.0_f64; MAX_AGM_STEPS + 1];
    a[0] = 1.0;
    c[0] = mv.sqrt();
    let mut b = (1.0 - mv).sqrt();
    let mut n = 0;
    while c[n].abs() > f64::EPSILON && n < MAX_AGM_STEPS {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = (a[n] * b).sqrt();
        n += 1;
    }
    if n == 0 {
        let (sn, cn) = u.sin_cos();
        return JacobiElliptic {
            sn,
            cn,
            dn: (1.0 - mv * sn * sn).sqrt(),
        };
    }

    let mut phi = (1u64 << n) as f64 * a[n] * u;
    for j in (1..=n).rev() {
        phi = 0.5 * (phi + (c[j] / a[j] * phi.sin()).asin());
    }
    let (sn, cn) = phi.sin_cos();
    JacobiElliptic {
        sn,
        cn,
        // dn > 0 for m < 1; the cn / cos(phi_prev - phi) form is 0/0 near sn = 1
        dn: (1.0 - mv * sn * sn).sqrt(),
    }
}
