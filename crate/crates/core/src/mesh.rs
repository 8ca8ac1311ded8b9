//! Sampling the Sym–Bobenko surface on a parallelogram of the `z`-plane, OBJ
//! output and a cotangent-Laplacian estimate of the mean curvature.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::euclid::{surface_point, Sheet};
use crate::frame::FrameContext;
use crate::su2loop::{LoopPoint, Su2Vector, C64};

/// The parallelogram `origin + s e1 + u e2`, `s, u` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Parallelogram {
    pub origin: C64,
    pub e1: C64,
    pub e2: C64,
}

impl Parallelogram {
    pub fn rect(x: (f64, f64), y: (f64, f64)) -> Self {
        Self {
            origin: C64::new(x.0, y.0),
            e1: C64::new(x.1 - x.0, 0.0),
            e2: C64::new(0.0, y.1 - y.0),
        }
    }

    pub fn point(&self, s: f64, u: f64) -> C64 {
        self.origin + self.e1 * s + self.e2 * u
    }
}

/// Surface samples on an `nx x ny` grid; vertex `(i, j)` is stored at `j nx + i`,
/// `i` along `e1` and `j` along `e2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMesh {
    pub nx: usize,
    pub ny: usize,
    pub vertices: Vec<Su2Vector>,
    pub normals: Vec<Su2Vector>,
}

pub fn sample_surface(ctx: &FrameContext, lam: LoopPoint, domain: &Parallelogram, nx: usize, ny: usize, sheet: Sheet) -> Result<SurfaceMesh> {
    let (nx, ny) = (nx.max(2), ny.max(2));
    let pts = (0..nx * ny)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % nx, idx / nx);
            let z = domain.point(i as f64 / (nx - 1) as f64, j as f64 / (ny - 1) as f64);
            surface_point(ctx, z.re, z.im, lam, sheet)
        })
        .collect::<Result<Vec<_>>>()?;
    let (vertices, normals) = pts.into_iter().unzip();
    Ok(SurfaceMesh { nx, ny, vertices, normals })
}

impl SurfaceMesh {
    fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Triangles, two per grid cell, wound so that their normals agree with the
    /// sampled normals.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut tris = Vec::with_capacity(2 * (self.nx - 1) * (self.ny - 1));
        let flip = {
            let (a, b, c) = (self.vertices[0], self.vertices[self.idx(1, 0)], self.vertices[self.idx(0, 1)]);
            (b - a).cross(&(c - a)).dot(&self.normals[0]) < 0.0
        };
        for j in 0..self.ny - 1 {
            for i in 0..self.nx - 1 {
                let (v00, v10, v01, v11) = (self.idx(i, j), self.idx(i + 1, j), self.idx(i, j + 1), self.idx(i + 1, j + 1));
                if flip {
                    tris.push([v00, v11, v10]);
                    tris.push([v00, v01, v11]);
                } else {
                    tris.push([v00, v10, v11]);
                    tris.push([v00, v11, v01]);
                }
            }
        }
        tris
    }

    pub fn is_finite(&self) -> bool {
        self.vertices.iter().chain(&self.normals).all(Su2Vector::is_finite)
    }

    /// ASCII OBJ with `v`, `vn` and triangle `f` records; 17 significant digits.
    pub fn write_obj(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "# {} x {} grid", self.nx, self.ny)?;
        for v in &self.vertices {
            writeln!(out, "v {:.16e} {:.16e} {:.16e}", v.0[0], v.0[1], v.0[2])?;
        }
        for n in &self.normals {
            writeln!(out, "vn {:.16e} {:.16e} {:.16e}", n.0[0], n.0[1], n.0[2])?;
        }
        for t in self.triangles() {
            let [a, b, c] = t.map(|k| k + 1);
            writeln!(out, "f {a}//{a} {b}//{b} {c}//{c}")?;
        }
        Ok(())
    }

    /// Mean curvature at interior vertices, `<L f, N>/2` with `L` the cotangent
    /// Laplacian normalized by the barycentric area.
    pub fn discrete_mean_curvature(&self) -> Vec<f64> {
        let tris = self.triangles();
        let n = self.vertices.len();
        let mut lap = vec![Su2Vector::zero(); n];
        let mut area = vec![0.0; n];
        let cot = |a: Su2Vector, b: Su2Vector| {
            let c = a.cross(&b).norm();
            a.dot(&b) / c
        };
        for t in &tris {
            let p = t.map(|k| self.vertices[k]);
            let ar = 0.5 * (p[1] - p[0]).cross(&(p[2] - p[0])).norm();
            for k in 0..3 {
                let (i, j, o) = (t[k], t[(k + 1) % 3], t[(k + 2) % 3]);
                // angle at the vertex opposite edge (i, j)
                let w = 0.5 * cot(self.vertices[i] - self.vertices[o], self.vertices[j] - self.vertices[o]);
                let e = self.vertices[j] - self.vertices[i];
                lap[i] = lap[i] + e * w;
                lap[j] = lap[j] - e * w;
                area[t[k]] += ar / 3.0;
            }
        }
        let mut out = Vec::new();
        for j in 1..self.ny - 1 {
            for i in 1..self.nx - 1 {
                let k = self.idx(i, j);
                out.push(0.5 * lap[k].dot(&self.normals[k]) / area[k]);
            }
        }
        out
    }
}

/// Summary of per-vertex curvature estimates against a target value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureStats {
    pub count: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub max_abs_error: f64,
}

impl CurvatureStats {
    pub fn from_samples(values: &[f64], target: f64) -> Self {
        let count = values.len();
        let mean = values.iter().sum::<f64>() / count.max(1) as f64;
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let max_abs_error = values.iter().map(|v| (v - target).abs()).fold(0.0, f64::max);
        Self { count, mean, min, max, max_abs_error }
    }
}
