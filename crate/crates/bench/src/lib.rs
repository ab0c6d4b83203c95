//! Fixed inputs shared by the benchmarks.

use thomae_core::series::{Params2F1, Params3F2};

/// Reference point used throughout the tests.
pub const REFERENCE: Params3F2 = Params3F2 { a: 0.5, b: 0.6, c: 0.7, d: 2.0, e: 2.5 };

/// ζ(2): excess 1, the slowest case the default tolerance handles comfortably.
pub const ZETA_TWO: Params3F2 = Params3F2 { a: 1.0, b: 1.0, c: 1.0, d: 2.0, e: 2.0 };

/// Excess 0.1; a transform gives excess 2.
pub const SLOW: Params3F2 = Params3F2 { a: 2.0, b: 0.5, c: 0.5, d: 1.4, e: 1.7 };

pub const GAUSS: Params2F1 = Params2F1 { a: 0.3, b: 0.4, c: 2.2 };

pub const GAMMA_ARGS: [f64; 6] = [0.001, 0.5, 3.7, 17.25, 171.5, -2.5];
