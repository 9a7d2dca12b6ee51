use std::f64::consts::PI;

use crate::counting::ProcessSpec;

use super::Stream;

/// Mittag-Leffler interarrival time with survival `E_{ν,1}(-λ t^ν)`:
/// `λ^{-1/ν} (-ln U) [sin(νπ)/tan(νπV) - cos(νπ)]^{1/ν}`.
pub fn sample_ml_interarrival(lam: f64, nu: f64, rng: &mut Stream) -> f64 {
    let e = rng.exponential();
    if nu == 1.0 {
        return e / lam;
    }
    let v = rng.uniform();
    let (s, c) = (nu * PI).sin_cos();
    let bracket = s / (nu * PI * v).tan() - c;
    e * (bracket / lam).powf(1.0 / nu)
}

/// Interarrival plus jump-size draws for one process, with the
/// `ν`-dependent constants hoisted out of the loop.
#[derive(Debug, Clone)]
pub(crate) struct EventSampler {
    scale: f64,
    inv_nu: f64,
    nu_pi: f64,
    sin_nu_pi: f64,
    cos_nu_pi: f64,
    exponential: bool,
    jumps: JumpSampler,
}

impl EventSampler {
    pub(crate) fn new(spec: &ProcessSpec) -> Self {
        let nu = spec.nu();
        let (s, c) = (nu * PI).sin_cos();
        EventSampler {
            scale: 1.0 / spec.lambda(),
            inv_nu: 1.0 / nu,
            nu_pi: nu * PI,
            sin_nu_pi: s,
            cos_nu_pi: c,
            exponential: nu == 1.0,
            jumps: JumpSampler::new(spec),
        }
    }

    /// Same draws, in the same order, as [`sample_ml_interarrival`].
    #[inline]
    pub(crate) fn interarrival(&self, rng: &mut Stream) -> f64 {
        let e = rng.exponential();
        if self.exponential {
            return e * self.scale;
        }
        let v = rng.uniform();
        let bracket = self.sin_nu_pi / (self.nu_pi * v).tan() - self.cos_nu_pi;
        e * (bracket * self.scale).powf(self.inv_nu)
    }

    #[inline]
    pub(crate) fn jump(&self, rng: &mut Stream) -> usize {
        self.jumps.sample(rng)
    }
}

/// Categorical jump sizes `1..=k` with `P{X = j} = λ_j/Λ`.
#[derive(Debug, Clone)]
pub struct JumpSampler {
    cumulative: Vec<f64>,
}

impl JumpSampler {
    pub fn new(spec: &ProcessSpec) -> Self {
        let mut acc = 0.0;
        let mut cumulative: Vec<f64> = spec
            .rates()
            .iter()
            .map(|r| {
                acc += r;
                acc / spec.lambda()
            })
            .collect();
        // guard against the last cumulative sum rounding below 1
        if let Some(last) = cumulative.last_mut() {
            *last = 1.0;
        }
        JumpSampler { cumulative }
    }

    pub fn sample(&self, rng: &mut Stream) -> usize {
        if self.cumulative.len() == 1 {
            return 1;
        }
        let u = rng.uniform();
        self.cumulative.iter().position(|&c| u < c).unwrap_or(self.cumulative.len() - 1) + 1
    }
}

/// One jump size; for repeated draws build a [`JumpSampler`] once.
pub fn sample_jump_size(spec: &ProcessSpec, rng: &mut Stream) -> usize {
    JumpSampler::new(spec).sample(rng)
}

/// Inverse `ν`-stable subordinator at time `t`, `(t/D)^ν`, where `D` has
/// Laplace transform `e^{-s^ν}` and is drawn by Kanter's representation
/// `D = sin(νU) sin(U)^{-1/ν} (sin((1-ν)U)/W)^{(1-ν)/ν}`, `U ~ U(0,π)`,
/// `W ~ Exp(1)`. At `ν = 1` the time change is the identity.
pub fn sample_inverse_stable(nu: f64, t: f64, rng: &mut Stream) -> f64 {
    if nu >= 1.0 {
        return t;
    }
    let u = PI * rng.uniform();
    let w = rng.exponential();
    let d = (nu * u).sin() * u.sin().powf(-1.0 / nu) * ((((1.0 - nu) * u).sin()) / w).powf((1.0 - nu) / nu);
    (t / d).powf(nu)
}
