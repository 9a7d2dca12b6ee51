use crate::counting::{moments_m, ProcessSpec};
use crate::error::{Error, Result};
use crate::fractional_poisson::{moments_n, FpParams};

use super::paths::{check_horizon, state_at};
use super::variates::EventSampler;
use super::{ordered_blocks, McEstimate, Moments, RandomSource};

/// Which rate is scaled along the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutoffMode {
    /// `N^ν_λ(t)` with `λ` taken from the grid.
    N,
    /// `M^ν(t)` with rate `λ_index` (zero based) replaced by the grid value.
    M { index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffPoint {
    pub lam: f64,
    pub m: u32,
    /// Analytic `E X^m` used as the denominator.
    pub moment: f64,
    /// Estimate of `E|X^m / E X^m - 1|`.
    pub deviation: McEstimate,
}

/// Monte-Carlo `E|X^m/E X^m - 1|` along `lam_grid`; see
/// [`cutoff_experiment_orders`].
#[allow(clippy::too_many_arguments)]
pub fn cutoff_experiment(
    base_spec: &ProcessSpec,
    lam_grid: &[f64],
    nu: f64,
    t: f64,
    m: u32,
    mode: CutoffMode,
    paths: u64,
    seed: u64,
) -> Result<Vec<CutoffPoint>> {
    Ok(cutoff_experiment_orders(base_spec, lam_grid, nu, t, &[m], mode, paths, seed)?
        .into_iter()
        .map(|mut v| v.remove(0))
        .collect())
}

/// Same as [`cutoff_experiment`] for several orders at once, sharing paths.
/// Result is indexed `[grid point][order]`. Grid point `g` uses streams
/// `g·2^40 + i`, `i < paths`.
#[allow(clippy::too_many_arguments)]
pub fn cutoff_experiment_orders(
    base_spec: &ProcessSpec,
    lam_grid: &[f64],
    nu: f64,
    t: f64,
    orders: &[u32],
    mode: CutoffMode,
    paths: u64,
    seed: u64,
) -> Result<Vec<Vec<CutoffPoint>>> {
    check_horizon(t)?;
    if lam_grid.is_empty() || lam_grid.windows(2).any(|w| w[0] >= w[1]) || lam_grid[0] <= 0.0 {
        return Err(Error::domain("rate grid must be positive and strictly increasing"));
    }
    if orders.is_empty() || orders.iter().any(|&m| m == 0 || m > 4) {
        return Err(Error::domain("moment orders must lie in 1..=4"));
    }
    if paths < 2 {
        return Err(Error::domain("need at least 2 paths"));
    }
    if let CutoffMode::M { index } = mode {
        if index >= base_spec.k() {
            return Err(Error::domain(format!("rate index {index} out of range for k = {}", base_spec.k())));
        }
    }
    let mut out = Vec::with_capacity(lam_grid.len());
    for (g, &lam) in lam_grid.iter().enumerate() {
        let spec = match mode {
            CutoffMode::N => ProcessSpec::new(nu, vec![lam])?,
            CutoffMode::M { index } => {
                let mut rates = base_spec.rates().to_vec();
                rates[index] = lam;
                ProcessSpec::new(nu, rates)?
            }
        };
        let moments: Vec<f64> = orders
            .iter()
            .map(|&m| match mode {
                CutoffMode::N => moments_n(&FpParams::new(lam, nu, t)?, m),
                CutoffMode::M { .. } => moments_m(&spec, t, m),
            })
            .collect::<Result<_>>()?;
        let sampler = EventSampler::new(&spec);
        let base = (g as u64) << 40;
        let acc = ordered_blocks(
            paths,
            |a, b| {
                let mut acc = vec![Moments::default(); orders.len()];
                for i in a..b {
                    let mut rng = RandomSource::new(seed, base + i).stream();
                    let x = state_at(&sampler, t, &mut rng) as f64;
                    for ((slot, &m), &mu) in acc.iter_mut().zip(orders).zip(&moments) {
                        slot.push((x.powi(m as i32) / mu - 1.0).abs());
                    }
                }
                acc
            },
            vec![Moments::default(); orders.len()],
            |x, y| x.into_iter().zip(y).map(|(a, b)| a.merge(b)).collect(),
        );
        out.push(
            orders
                .iter()
                .zip(&moments)
                .zip(&acc)
                .map(|((&m, &moment), a)| CutoffPoint {
                    lam,
                    m,
                    moment,
                    deviation: McEstimate::mean(a),
                })
                .collect(),
        );
    }
    Ok(out)
}
