//! Hitting times: `H_j`, the time of the first jump of size `j`, and the
//! first-passage time `τ_n = inf{t : M(t) = n}` of a given level.

use crate::counting::{composition_coefficients, ProcessSpec};
use crate::error::{Error, Result};
use crate::fractional_poisson::{waiting_cdf, FpParams};
use crate::quadrature::integrate;
use crate::simulation::paths::check_horizon;
use crate::simulation::variates::EventSampler;
use crate::simulation::{ordered_blocks, McEstimate, RandomSource};
use crate::special::ln_gamma;

/// A query about `H_j` or `τ_n` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct HittingQuery {
    pub spec: ProcessSpec,
    pub target: Target,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// First jump of this size.
    Amplitude(usize),
    /// First visit of this level.
    Level(usize),
}

impl HittingQuery {
    pub fn new(spec: ProcessSpec, target: Target, t: f64) -> Result<Self> {
        match target {
            Target::Amplitude(j) => check_amplitude(&spec, j)?,
            Target::Level(n) => check_level(n)?,
        }
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::domain(format!("time must be nonnegative, got {t}")));
        }
        Ok(HittingQuery { spec, target, t })
    }
}

fn check_amplitude(spec: &ProcessSpec, j: usize) -> Result<()> {
    if j >= 1 && j <= spec.k() {
        Ok(())
    } else {
        Err(Error::domain(format!("jump size must lie in 1..={}, got {j}", spec.k())))
    }
}

fn check_level(n: usize) -> Result<()> {
    if n >= 1 {
        Ok(())
    } else {
        Err(Error::domain("target level must be at least 1"))
    }
}

/// `P{H_j <= t} = λ_j t^ν E_{ν,ν+1}(-λ_j t^ν)`.
pub fn waiting_cdf_hj(spec: &ProcessSpec, j: usize, t: f64) -> Result<f64> {
    check_amplitude(spec, j)?;
    waiting_cdf(&FpParams::new(spec.rates()[j - 1], spec.nu(), t)?, 1)
}

/// `P{G^j = n}` for the index of the first jump of size `j`, geometric with
/// success probability `λ_j/Λ`.
pub fn geometric_order_pmf(spec: &ProcessSpec, j: usize, n: usize) -> Result<f64> {
    check_amplitude(spec, j)?;
    check_level(n)?;
    let p = spec.rates()[j - 1] / spec.lambda();
    Ok(p * (1.0 - p).powi(n as i32 - 1))
}

/// Value of a truncated series with a bound on the dropped part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedSum {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: usize,
}

const MAX_GEOMETRIC_TERMS: usize = 100_000;

/// `Σ_{n<=N} P{T_n <= t} P{G^j = n}` at total rate `Λ`, with `N` the first
/// index where `(1 - λ_j/Λ)^N < tol`.
pub fn waiting_cdf_hj_mixture(spec: &ProcessSpec, j: usize, t: f64, tol: f64) -> Result<TruncatedSum> {
    check_amplitude(spec, j)?;
    let p = spec.rates()[j - 1] / spec.lambda();
    let fp = FpParams::new(spec.lambda(), spec.nu(), t)?;
    let mut value = 0.0;
    let mut weight = p;
    let mut survival = 1.0;
    let mut n = 0;
    while survival >= tol {
        n += 1;
        if n > MAX_GEOMETRIC_TERMS {
            return Err(Error::Numeric {
                what: "geometric mixture",
                detail: format!("tail (1-p)^N still {survival:e} after {MAX_GEOMETRIC_TERMS} terms"),
            });
        }
        value += waiting_cdf(&fp, n as u32)? * weight;
        survival *= 1.0 - p;
        weight *= 1.0 - p;
    }
    Ok(TruncatedSum {
        value,
        tail_bound: survival,
        terms: n,
    })
}

/// Binomial coefficient, zero outside `0 <= b <= a`.
fn binom(a: i64, b: i64) -> f64 {
    if a < 0 || b < 0 || b > a {
        return 0.0;
    }
    let b = b.min(a - b);
    let mut c = 1.0;
    for i in 0..b {
        c = c * (a - i) as f64 / (i + 1) as f64;
    }
    c
}

fn poisson(mu: f64, n: usize) -> f64 {
    if n == 0 {
        (-mu).exp()
    } else if mu == 0.0 {
        0.0
    } else {
        (n as f64 * mu.ln() - mu - ln_gamma(n as f64 + 1.0)).exp()
    }
}

/// `P{Pois(mu) >= m}`, summed upward from `m`.
fn poisson_upper_tail(mu: f64, m: usize) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let mut term = poisson(mu, m);
    let mut sum = 0.0;
    let mut i = m;
    loop {
        sum += term;
        i += 1;
        term *= mu / i as f64;
        if term < 1e-17 * sum || term == 0.0 {
            // the remaining terms decay at least geometrically from here
            let ratio = mu / (i + 1) as f64;
            if ratio < 1.0 {
                return sum + term / (1.0 - ratio);
            }
        }
    }
}

/// First-passage series evaluated at `ν = 1`, `k = 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FptValue {
    pub value: f64,
    /// Bound on the terms with `h > h_used`.
    pub tail_bound: f64,
    pub h_used: usize,
    /// Sum of the quadrature error estimates of the inner integrals.
    pub quad_err: f64,
}

/// Tail target and cap for the automatic choice of `h_max`.
pub const FPT_TAIL_TOL: f64 = 1e-10;
pub const FPT_MAX_H: usize = 2000;

/// Bound on the dropped part of the series after `h_max`: every dropped
/// term has `j > h_max/2`, and for fixed `(j, i)` the weights summed over
/// `h` and `i` are at most one, so the tail is below
/// `Σ_{j > h_max/2} ∫_0^t P{N(t) = j} ds = t P{N(t) > h_max/2}`.
pub fn fpt_tail_bound(lambda: f64, t: f64, h_max: usize) -> f64 {
    t * poisson_upper_tail(lambda * t, (h_max + 1).div_ceil(2))
}

/// `P{τ_n <= t}` from the first-passage series
///
/// `Σ_{h>=n} Σ_{j=⌈h/2⌉}^{h} Σ_{i=1}^{j} C(i, n-i) C(j-i, h-n-j+i)
///  (λ_1/Λ)^{2j-h} (λ_2/Λ)^{h-j} ∫_0^t P{N(t)=j, N(s)=i} ds`,
///
/// taken literally, with `P{N(s)=i, N(t)=j} = Pois(Λs; i) Pois(Λ(t-s); j-i)`
/// at `ν = 1`. The inner integral is computed by adaptive quadrature.
/// `h_max = None` picks the smallest `h` with tail bound below
/// [`FPT_TAIL_TOL`].
///
/// This is the expression as stated; it does not agree with simulation (see
/// [`fpt_cdf_renewal`] for the renewal form that does).
pub fn fpt_cdf_nu1(spec: &ProcessSpec, n: usize, t: f64, h_max: Option<usize>) -> Result<FptValue> {
    if spec.nu() != 1.0 {
        return Err(Error::domain(format!("first-passage series needs nu = 1, got {}", spec.nu())));
    }
    if spec.k() != 2 {
        return Err(Error::domain(format!("first-passage series needs k = 2, got {}", spec.k())));
    }
    check_level(n)?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("time must be nonnegative, got {t}")));
    }
    if t == 0.0 {
        return Ok(FptValue {
            value: 0.0,
            tail_bound: 0.0,
            h_used: n,
            quad_err: 0.0,
        });
    }
    let lambda = spec.lambda();
    let h_used = match h_max {
        Some(h) => h.max(n),
        None => {
            let mut h = n;
            while fpt_tail_bound(lambda, t, h) >= FPT_TAIL_TOL {
                h += 1;
                if h > FPT_MAX_H {
                    return Err(Error::Numeric {
                        what: "first-passage series",
                        detail: format!("truncation did not converge by h = {FPT_MAX_H}"),
                    });
                }
            }
            h
        }
    };
    let p1 = spec.rates()[0] / lambda;
    let p2 = spec.rates()[1] / lambda;

    // inner integrals, indexed [j][i], for j <= h_used
    let mut inner = vec![Vec::new(); h_used + 1];
    let mut quad_err = 0.0;
    for (j, row) in inner.iter_mut().enumerate().skip(1) {
        row.push(0.0);
        for i in 1..=j {
            let r = integrate(
                |s| Ok(poisson(lambda * s, i) * poisson(lambda * (t - s), j - i)),
                0.0,
                t,
                1e-14,
                400,
            )?;
            quad_err += r.err_estimate;
            row.push(r.value);
        }
    }

    let (n, mut value) = (n as i64, 0.0);
    for h in n..=h_used as i64 {
        for j in (h + 1) / 2..=h {
            let weight = p1.powi((2 * j - h) as i32) * p2.powi((h - j) as i32);
            for i in 1..=j {
                let c = binom(i, n - i) * binom(j - i, h - n - j + i);
                if c != 0.0 {
                    value += c * weight * inner[j as usize][i as usize];
                }
            }
        }
    }
    Ok(FptValue {
        value,
        tail_bound: fpt_tail_bound(lambda, t, h_used),
        h_used,
        quad_err,
    })
}

/// `P{τ_n <= t} = Σ_{r=1}^{n} P{S_r = n} P{T_r <= t}` for any `ν` and `k`:
/// level `n` is visited by time `t` exactly when some partial sum of the
/// jumps equals `n` and the corresponding event happens by `t`.
pub fn fpt_cdf_renewal(spec: &ProcessSpec, n: usize, t: f64) -> Result<f64> {
    check_level(n)?;
    let fp = FpParams::new(spec.lambda(), spec.nu(), t)?;
    let q = composition_coefficients(&spec.jump_probs(), n);
    let mut v = 0.0;
    for (r, &prob) in q[n].iter().enumerate().skip(1) {
        if prob != 0.0 {
            v += prob * waiting_cdf(&fp, r as u32)?;
        }
    }
    Ok(v.clamp(0.0, 1.0))
}

/// Monte-Carlo `P{τ_n <= t}` for each `t` in `times`, all from the same
/// paths (so the estimates are nondecreasing in `t`).
pub fn fpt_cdf_mc_grid(spec: &ProcessSpec, n: usize, times: &[f64], paths: u64, seed: u64) -> Result<Vec<McEstimate>> {
    check_level(n)?;
    let horizon = max_time(times)?;
    let sampler = EventSampler::new(spec);
    let target = n as u64;
    let hits = ordered_blocks(
        paths,
        |a, b| {
            let mut c = vec![0u64; times.len()];
            for i in a..b {
                let mut rng = RandomSource::new(seed, i).stream();
                let (mut clock, mut state) = (0.0, 0u64);
                let hit = loop {
                    clock += sampler.interarrival(&mut rng);
                    if clock > horizon {
                        break None;
                    }
                    state += sampler.jump(&mut rng) as u64;
                    if state >= target {
                        break (state == target).then_some(clock);
                    }
                };
                if let Some(tau) = hit {
                    count_le(&mut c, times, tau);
                }
            }
            c
        },
        vec![0u64; times.len()],
        add_counts,
    );
    Ok(hits.into_iter().map(|c| McEstimate::proportion(c, paths)).collect())
}

/// Fraction of `paths` trajectories that visit level `n` by time `t`.
pub fn fpt_cdf_mc(spec: &ProcessSpec, n: usize, t: f64, paths: u64, seed: u64) -> Result<McEstimate> {
    Ok(fpt_cdf_mc_grid(spec, n, &[t], paths, seed)?[0])
}

/// Monte-Carlo `P{H_j <= t}` at each `t` in `times` from recorded first
/// size-`j` jump times.
pub fn hj_cdf_mc(spec: &ProcessSpec, j: usize, times: &[f64], paths: u64, seed: u64) -> Result<Vec<McEstimate>> {
    check_amplitude(spec, j)?;
    let horizon = max_time(times)?;
    let sampler = EventSampler::new(spec);
    let hits = ordered_blocks(
        paths,
        |a, b| {
            let mut c = vec![0u64; times.len()];
            for i in a..b {
                let mut rng = RandomSource::new(seed, i).stream();
                let mut clock = 0.0;
                loop {
                    clock += sampler.interarrival(&mut rng);
                    if clock > horizon {
                        break;
                    }
                    if sampler.jump(&mut rng) == j {
                        count_le(&mut c, times, clock);
                        break;
                    }
                }
            }
            c
        },
        vec![0u64; times.len()],
        add_counts,
    );
    Ok(hits.into_iter().map(|c| McEstimate::proportion(c, paths)).collect())
}

fn max_time(times: &[f64]) -> Result<f64> {
    let horizon = times.iter().copied().fold(f64::NAN, f64::max);
    check_horizon(horizon)?;
    if times.iter().any(|&t| !(t >= 0.0)) {
        return Err(Error::domain("times must be nonnegative"));
    }
    Ok(horizon)
}

fn count_le(c: &mut [u64], times: &[f64], tau: f64) {
    for (slot, &t) in c.iter_mut().zip(times) {
        if tau <= t {
            *slot += 1;
        }
    }
}

fn add_counts(mut x: Vec<u64>, y: Vec<u64>) -> Vec<u64> {
    x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(nu: f64, rates: &[f64]) -> ProcessSpec {
        ProcessSpec::new(nu, rates.to_vec()).unwrap()
    }

    #[test]
    fn hj_exponential_case() {
        let s = spec(1.0, &[0.7, 1.3]);
        for t in [0.1, 1.0, 3.0] {
            let v = waiting_cdf_hj(&s, 2, t).unwrap();
            let d = (v - (1.0 - (-1.3 * t as f64).exp())).abs();
            assert!(d < 1e-13, "t={t} d={d:e}");
        }
        assert_eq!(waiting_cdf_hj(&s, 1, 0.0).unwrap(), 0.0);
        assert!(waiting_cdf_hj(&s, 3, 1.0).is_err());
        assert!(waiting_cdf_hj(&s, 0, 1.0).is_err());
    }

    #[test]
    fn geometric_order() {
        let s = spec(0.5, &[1.0, 1.0]);
        assert_eq!(geometric_order_pmf(&s, 1, 2).unwrap(), 0.25);
        assert_eq!(geometric_order_pmf(&spec(0.5, &[2.0]), 1, 1).unwrap(), 1.0);
        let total: f64 = (1..200).map(|n| geometric_order_pmf(&s, 2, n).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn binomial_convention() {
        assert_eq!(binom(5, 2), 10.0);
        assert_eq!(binom(3, -1), 0.0);
        assert_eq!(binom(3, 4), 0.0);
        assert_eq!(binom(-1, 0), 0.0);
        assert_eq!(binom(0, 0), 1.0);
    }

    #[test]
    fn inner_integral_matches_closed_form() {
        // ∫_0^t Pois(Λs; i) Pois(Λ(t-s); j-i) ds = t Pois(Λt; j)/(j+1)
        let (lam, t) = (2.0, 1.5);
        for j in 1..12usize {
            for i in 1..=j {
                let r = integrate(|s| Ok(poisson(lam * s, i) * poisson(lam * (t - s), j - i)), 0.0, t, 1e-14, 400).unwrap();
                let exact = t * poisson(lam * t, j) / (j as f64 + 1.0);
                assert!((r.value - exact).abs() < 1e-13, "j={j} i={i}");
            }
        }
    }

    #[test]
    fn poisson_tail() {
        let direct = 1.0 - (0..5).map(|i| poisson(3.0, i)).sum::<f64>();
        assert!((poisson_upper_tail(3.0, 5) - direct).abs() < 1e-15);
        assert_eq!(poisson_upper_tail(3.0, 0), 1.0);
    }

    #[test]
    fn fpt_series_basics() {
        let s = spec(1.0, &[1.0, 1.0]);
        assert_eq!(fpt_cdf_nu1(&s, 1, 0.0, None).unwrap().value, 0.0);
        let v = fpt_cdf_nu1(&s, 2, 1.0, None).unwrap();
        assert!(v.tail_bound < FPT_TAIL_TOL);
        assert!(v.value > 0.0 && v.value < 1.0);
        assert!(fpt_cdf_nu1(&spec(0.5, &[1.0, 1.0]), 1, 1.0, None).is_err());
        assert!(fpt_cdf_nu1(&spec(1.0, &[1.0, 1.0, 1.0]), 1, 1.0, None).is_err());
    }

    #[test]
    fn renewal_form_cases() {
        // k = 1 is the waiting time of the n-th event
        let s = spec(0.6, &[1.7]);
        let fp = FpParams::new(1.7, 0.6, 0.8).unwrap();
        assert!((fpt_cdf_renewal(&s, 3, 0.8).unwrap() - waiting_cdf(&fp, 3).unwrap()).abs() < 1e-15);
        // level 1 with k = 2 at nu = 1: first jump of size 1 by time t
        let s = spec(1.0, &[1.0, 1.0]);
        let v = fpt_cdf_renewal(&s, 1, 2.0).unwrap();
        assert!((v - 0.5 * (1.0 - (-4.0f64).exp())).abs() < 1e-14);
    }
}
