//! Composite Gauss–Legendre quadrature with adaptive panel halving.

use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;

/// Values that can be integrated: real or complex scalars.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the `n`-point rule; nodes are found by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// The shared 16-point rule.
    pub fn order16() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(16))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Single-panel integral of `f` over `[a, b]`.
    pub fn integrate<T: QuadValue>(&self, f: &impl Fn(f64) -> T, a: f64, b: f64) -> T {
        self.integrate_with_l1(f, a, b).0
    }

    /// The integral of `f` together with the same rule applied to `|f|`.
    pub fn integrate_with_l1<T: QuadValue>(&self, f: &impl Fn(f64) -> T, a: f64, b: f64) -> (T, f64) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = T::zero();
        let mut l1 = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let v = f(mid + half * x);
            acc = acc + v * *w;
            l1 += v.magnitude() * w;
        }
        (acc * half, l1 * half.abs())
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

const MAX_DEPTH: u32 = 18;

/// Integrates `f` over `[a, b]`, split into `panels` equal panels, each refined
/// by halving until the 16-point estimate and the sum over its two halves agree
/// to `tol` (absolute, distributed over the panels by width).
pub fn integrate_adaptive<T: QuadValue>(f: &impl Fn(f64) -> T, a: f64, b: f64, panels: usize, tol: f64) -> T {
    integrate_adaptive_rel(f, a, b, panels, tol, 0.0)
}

/// As [`integrate_adaptive`] with the target `max(abs_tol, rel_tol \int |f|)`,
/// the L1 norm estimated from the unrefined panels. Needed for sharply peaked
/// integrands whose size makes an absolute target unreachable.
pub fn integrate_adaptive_rel<T: QuadValue>(f: &impl Fn(f64) -> T, a: f64, b: f64, panels: usize, abs_tol: f64, rel_tol: f64) -> T {
    if a == b {
        return T::zero();
    }
    let rule = GaussLegendre::order16();
    let panels = panels.max(1);
    let width = (b - a) / panels as f64;
    let bounds: Vec<(f64, f64)> = (0..panels)
        .map(|i| {
            let lo = a + width * i as f64;
            (lo, if i + 1 == panels { b } else { lo + width })
        })
        .collect();
    let wholes: Vec<(T, f64)> = bounds.iter().map(|&(lo, hi)| rule.integrate_with_l1(f, lo, hi)).collect();
    let size: f64 = wholes.iter().map(|w| w.1).sum();
    let density = abs_tol.max(rel_tol * size) / (b - a).abs();
    let mut acc = T::zero();
    for (&(lo, hi), &(whole, _)) in bounds.iter().zip(&wholes) {
        acc = acc + refine(rule, f, lo, hi, whole, density, MAX_DEPTH);
    }
    acc
}

fn refine<T: QuadValue>(rule: &GaussLegendre, f: &impl Fn(f64) -> T, a: f64, b: f64, whole: T, density: f64, depth: u32) -> T {
    let mid = 0.5 * (a + b);
    let (left, l1_left) = rule.integrate_with_l1(f, a, mid);
    let (right, l1_right) = rule.integrate_with_l1(f, mid, b);
    let halves = left + right;
    // roundoff floor: cancellation inside the panel limits attainable accuracy
    let floor = 256.0 * f64::EPSILON * (l1_left + l1_right);
    if depth == 0 || (halves - whole).magnitude() <= (density * (b - a).abs()).max(floor) {
        return halves;
    }
    refine(rule, f, a, mid, left, density, depth - 1) + refine(rule, f, mid, b, right, density, depth - 1)
}
