pub mod elliptic;
pub mod error;
pub mod euclid;
pub mod frame;
pub mod mesh;
pub mod period;
pub mod quad;
pub mod su2loop;
pub mod suite;

pub use elliptic::{complete_k, ellint_f, jacobi_sn_cn_dn, EllipticParameter, JacobiElliptic};
pub use error::{Error, Result};
pub use euclid::{screw_decompose, surface_symmetry, sym_bobenko, EuclideanMotion, ScrewGenerator, Sheet, Twist};
pub use frame::{FrameContext, FrameKind};
pub use mesh::{sample_surface, CurvatureStats, Parallelogram, SurfaceMesh};
pub use period::{
    l_function, monodromy, rotational_period, scan_l, solve_closing, verify_solution, ClosingKind, ClosingSearch, ClosingSolution, LSample,
    Monodromy, ScanOptions, Tolerances,
};
pub use su2loop::{LoopPoint, Mat2C, NormalFormPotential, Su2Vector, C64};
pub use suite::{run_suite, CheckResult, SuiteOptions};
