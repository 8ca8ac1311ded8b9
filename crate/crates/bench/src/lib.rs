//! Benchmark fixtures shared by the criterion targets.

use helicoid::FrameContext;

/// The unduloid used throughout the benchmarks.
pub fn reference_context() -> FrameContext {
    FrameContext::from_constants(0.4, 0.6, 1.0).expect("valid constants")
}
