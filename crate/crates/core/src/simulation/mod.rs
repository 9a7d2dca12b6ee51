//! Exact sampling of `M^ν(t)` and Monte-Carlo estimators.
//!
//! Path `i` of an experiment always draws from stream `i` of the seed, and
//! per-path results are reduced in index order, so estimates depend only on
//! `(seed, paths)` and never on the worker count.

mod cutoff;
pub(crate) mod paths;
pub(crate) mod variates;

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

pub use cutoff::{cutoff_experiment, cutoff_experiment_orders, CutoffMode, CutoffPoint};
pub use paths::{estimate_pmf, simulate_path, simulate_state, PathSample};
pub use variates::{sample_inverse_stable, sample_jump_size, sample_ml_interarrival, JumpSampler};

/// Immutable descriptor of one random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RandomSource {
    pub seed: u64,
    pub stream_id: u64,
}

impl RandomSource {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RandomSource { seed, stream_id }
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn stream(&self) -> Stream {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        Stream { rng }
    }
}

/// ChaCha20 keystream: 2^64 blocks per stream, 2^64 streams per seed.
#[derive(Debug, Clone)]
pub struct Stream {
    rng: ChaCha20Rng,
}

impl Stream {
    /// Uniform on the open interval `(0, 1)`: `(k + 1/2) 2^-53`.
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard exponential variate.
    pub fn exponential(&mut self) -> f64 {
        -self.uniform().ln()
    }
}

/// Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub n_samples: u64,
}

impl McEstimate {
    /// Proportion `k/n` with SE `√(p̂(1-p̂)/n)`.
    pub fn proportion(successes: u64, n: u64) -> Self {
        let p = successes as f64 / n as f64;
        McEstimate {
            estimate: p,
            std_error: (p * (1.0 - p) / n as f64).sqrt(),
            n_samples: n,
        }
    }

    /// Sample mean with SE `s/√n` (`s` the unbiased sample deviation).
    pub fn mean(acc: &Moments) -> Self {
        let n = acc.n as f64;
        let mean = acc.sum / n;
        let var = if acc.n > 1 {
            ((acc.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        McEstimate {
            estimate: mean,
            std_error: (var / n).sqrt(),
            n_samples: acc.n,
        }
    }

    /// `|estimate - value|` in units of the standard error.
    pub fn z_score(&self, value: f64) -> f64 {
        let d = (self.estimate - value).abs();
        if self.std_error == 0.0 {
            if d == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            d / self.std_error
        }
    }
}

/// Running first and second sums.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub n: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn merge(self, other: Moments) -> Moments {
        Moments {
            n: self.n + other.n,
            sum: self.sum + other.sum,
            sum_sq: self.sum_sq + other.sum_sq,
        }
    }
}

/// Paths per block; blocks are the unit of parallel work and are merged in
/// block order.
const BLOCK: u64 = 1024;

/// Runs `body(block_start, block_end)` over `0..paths` in parallel and folds
/// the block results left to right.
pub(crate) fn ordered_blocks<T, F, M>(paths: u64, body: F, init: T, merge: M) -> T
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync + Send,
    M: Fn(T, T) -> T,
{
    let blocks = paths.div_ceil(BLOCK);
    let parts: Vec<T> = run_in_pool(|| {
        (0..blocks)
            .into_par_iter()
            .map(|b| body(b * BLOCK, ((b + 1) * BLOCK).min(paths)))
            .collect()
    });
    parts.into_iter().fold(init, merge)
}

/// Worker count from `FRACCOUNT_THREADS`, if set to a positive integer.
pub fn configured_threads() -> Option<usize> {
    std::env::var("FRACCOUNT_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Runs `f` on a pool capped by `FRACCOUNT_THREADS`, or on the global pool.
pub fn run_in_pool<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    match configured_threads() {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}
