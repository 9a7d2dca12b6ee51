use crate::counting::ProcessSpec;
use crate::error::{Error, Result};

use super::variates::EventSampler;
use super::{ordered_blocks, McEstimate, RandomSource, Stream};

/// One trajectory of `M^ν` on `[0, horizon]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    pub event_times: Vec<f64>,
    pub jump_sizes: Vec<usize>,
    /// `counters[j-1]` is the number of jumps of size `j`.
    pub counters: Vec<u64>,
    pub final_state: u64,
}

impl PathSample {
    /// Checks the structural invariants of a path on `[0, horizon]`.
    pub fn validate(&self, k: usize, horizon: f64) -> std::result::Result<(), String> {
        if self.event_times.len() != self.jump_sizes.len() {
            return Err("event and jump lists differ in length".into());
        }
        if self.event_times.windows(2).any(|w| w[0] >= w[1]) {
            return Err("event times are not strictly increasing".into());
        }
        if self.event_times.iter().any(|&s| !(s > 0.0 && s <= horizon)) {
            return Err("event time outside (0, horizon]".into());
        }
        if self.jump_sizes.iter().any(|&j| j == 0 || j > k) {
            return Err("jump size outside 1..=k".into());
        }
        let mut counts = vec![0u64; k];
        for &j in &self.jump_sizes {
            counts[j - 1] += 1;
        }
        if counts != self.counters {
            return Err("counters disagree with jump sizes".into());
        }
        let total: u64 = self.jump_sizes.iter().map(|&j| j as u64).sum();
        if total != self.final_state {
            return Err("final state is not the sum of the jumps".into());
        }
        Ok(())
    }
}

pub(crate) fn check_horizon(horizon: f64) -> Result<()> {
    if horizon > 0.0 && horizon.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("horizon must be positive and finite, got {horizon}")))
    }
}

/// Renewal construction: partial sums of interarrivals at rate `Λ`, each
/// event carrying an independent jump size.
pub fn simulate_path(spec: &ProcessSpec, horizon: f64, rng: &mut Stream) -> Result<PathSample> {
    check_horizon(horizon)?;
    let sampler = EventSampler::new(spec);
    let mut path = PathSample {
        event_times: Vec::new(),
        jump_sizes: Vec::new(),
        counters: vec![0; spec.k()],
        final_state: 0,
    };
    let mut clock = 0.0;
    loop {
        clock += sampler.interarrival(rng);
        if clock > horizon {
            return Ok(path);
        }
        let j = sampler.jump(rng);
        path.event_times.push(clock);
        path.jump_sizes.push(j);
        path.counters[j - 1] += 1;
        path.final_state += j as u64;
    }
}

/// `M^ν(horizon)` alone, consuming the same draws as [`simulate_path`].
pub fn simulate_state(spec: &ProcessSpec, horizon: f64, rng: &mut Stream) -> Result<u64> {
    check_horizon(horizon)?;
    Ok(state_at(&EventSampler::new(spec), horizon, rng))
}

#[inline]
pub(crate) fn state_at(sampler: &EventSampler, horizon: f64, rng: &mut Stream) -> u64 {
    let mut clock = 0.0;
    let mut state = 0u64;
    loop {
        clock += sampler.interarrival(rng);
        if clock > horizon {
            return state;
        }
        state += sampler.jump(rng) as u64;
    }
}

/// Empirical `P{M^ν(t) = j}` for `j = 0..=j_max`; path `i` uses stream `i`.
pub fn estimate_pmf(spec: &ProcessSpec, t: f64, j_max: usize, paths: u64, seed: u64) -> Result<Vec<McEstimate>> {
    check_horizon(t)?;
    if paths < 100 {
        return Err(Error::domain(format!("need at least 100 paths, got {paths}")));
    }
    let sampler = EventSampler::new(spec);
    let counts = ordered_blocks(
        paths,
        |a, b| {
            let mut c = vec![0u64; j_max + 1];
            for i in a..b {
                let mut rng = RandomSource::new(seed, i).stream();
                let s = state_at(&sampler, t, &mut rng) as usize;
                if s <= j_max {
                    c[s] += 1;
                }
            }
            c
        },
        vec![0u64; j_max + 1],
        |mut x, y| {
            x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
            x
        },
    );
    Ok(counts.into_iter().map(|c| McEstimate::proportion(c, paths)).collect())
}
