//! The fractional Poisson process `N^ν_λ(t)`: a renewal process whose
//! interarrival times have survival function `E_{ν,1}(-λ t^ν)`.
//!
//! Throughout, `x = λ t^ν`.

use crate::error::{Error, Result};
use crate::special::{gamma_fn, ln_gamma, recip_gamma, EvalOptions, MlParams, SpecialValue};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FpParams {
    pub lam: f64,
    pub nu: f64,
    pub t: f64,
}

impl FpParams {
    pub fn new(lam: f64, nu: f64, t: f64) -> Result<Self> {
        let p = FpParams { lam, nu, t };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_nu(self.nu)?;
        if !(self.lam > 0.0 && self.lam.is_finite()) {
            return Err(Error::domain(format!("rate must be positive, got {}", self.lam)));
        }
        if !(self.t >= 0.0 && self.t.is_finite()) {
            return Err(Error::domain(format!("time must be nonnegative, got {}", self.t)));
        }
        Ok(())
    }

    /// `λ t^ν`.
    pub fn x(&self) -> f64 {
        self.lam * self.t.powf(self.nu)
    }
}

pub(crate) fn check_nu(nu: f64) -> Result<()> {
    if nu > 0.0 && nu <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("nu must lie in (0,1], got {nu}")))
    }
}

/// `x^n E^{γ}_{ν,β}(-x)` with the power folded into the series.
pub(crate) fn scaled_gml(nu: f64, beta: f64, gamma: f64, x: f64, n: f64, opts: &EvalOptions) -> Result<SpecialValue> {
    let ln_scale = if n == 0.0 { 0.0 } else { n * x.ln() };
    MlParams::new(nu, beta, gamma, -x)?.evaluate_scaled(ln_scale, opts)
}

/// Density of the waiting time `T_k` of the `k`-th event,
/// `λ^k t^{kν-1} E^k_{ν,kν}(-λ t^ν)`.
pub fn waiting_pdf(p: &FpParams, k: u32) -> Result<f64> {
    p.validate()?;
    if p.t <= 0.0 {
        return Err(Error::domain("waiting-time density needs t > 0"));
    }
    if k == 0 {
        return Err(Error::domain("event index k must be at least 1"));
    }
    let kf = k as f64;
    let v = scaled_gml(p.nu, kf * p.nu, kf, p.x(), kf, &EvalOptions::default())?;
    Ok((v.value / p.t).max(0.0))
}

/// `P{T_k <= t} = λ^k t^{kν} E^k_{ν,kν+1}(-λ t^ν)`; `k = 0` gives 1.
pub fn waiting_cdf(p: &FpParams, k: u32) -> Result<f64> {
    Ok(waiting_cdf_bounded(p, k)?.value)
}

pub fn waiting_cdf_bounded(p: &FpParams, k: u32) -> Result<SpecialValue> {
    p.validate()?;
    if k == 0 {
        return Ok(exact(1.0));
    }
    if p.t == 0.0 {
        return Ok(exact(0.0));
    }
    let kf = k as f64;
    let v = scaled_gml(p.nu, kf * p.nu + 1.0, kf, p.x(), kf, &EvalOptions::default())?;
    Ok(clamp01(v))
}

/// `P{N(t) = n} = x^n E^{n+1}_{ν,nν+1}(-x)`.
pub fn pmf_n(p: &FpParams, n: u32) -> Result<f64> {
    Ok(pmf_n_bounded(p, n)?.value)
}

pub fn pmf_n_bounded(p: &FpParams, n: u32) -> Result<SpecialValue> {
    p.validate()?;
    pmf_n_at(p.nu, p.x(), n, &EvalOptions::default())
}

/// pmf as a function of `x = λ t^ν` only.
pub(crate) fn pmf_n_at(nu: f64, x: f64, n: u32, opts: &EvalOptions) -> Result<SpecialValue> {
    if x == 0.0 {
        return Ok(exact(if n == 0 { 1.0 } else { 0.0 }));
    }
    let nf = n as f64;
    let v = scaled_gml(nu, nf * nu + 1.0, nf + 1.0, x, nf, opts)?;
    Ok(clamp01(v))
}

fn exact(value: f64) -> SpecialValue {
    SpecialValue {
        value,
        err_bound: 0.0,
        terms_used: 1,
    }
}

fn clamp01(v: SpecialValue) -> SpecialValue {
    SpecialValue {
        value: v.value.clamp(0.0, 1.0),
        ..v
    }
}

/// Moment generating function `E e^{s N(t)} = E_{ν,1}(λ(e^s - 1) t^ν)`.
pub fn mgf_n(p: &FpParams, s: f64) -> Result<f64> {
    p.validate()?;
    let z = p.lam * s.exp_m1() * p.t.powf(p.nu);
    Ok(MlParams::two_parameter(p.nu, 1.0, z)?.evaluate(&EvalOptions::default())?.value)
}

/// Stirling number of the second kind by the triangle recurrence, exact in
/// `u128` for `m <= 40`.
pub fn stirling2(m: u32, l: u32) -> u128 {
    if l > m {
        return 0;
    }
    let m = m as usize;
    let l = l as usize;
    let mut row = vec![0u128; m + 1];
    row[0] = 1;
    for i in 1..=m {
        for j in (1..=i.min(l)).rev() {
            row[j] = j as u128 * row[j] + row[j - 1];
        }
        row[0] = 0;
    }
    row[l]
}

/// Fractional Stirling number `S(m,l) · l! / Γ(lν + 1)`.
pub fn fractional_stirling(m: u32, l: u32, nu: f64) -> Result<f64> {
    check_nu(nu)?;
    if l > m {
        return Err(Error::domain(format!("need l <= m, got l={l}, m={m}")));
    }
    let lf = l as f64;
    // l!/Γ(lν+1) in log space so large l does not overflow
    let ratio = (ln_gamma(lf + 1.0) - ln_gamma(lf * nu + 1.0)).exp();
    Ok(stirling2(m, l) as f64 * ratio)
}

/// `E[N(t)^m] = Σ_l S_ν(m,l) x^l`.
pub fn moments_n(p: &FpParams, m: u32) -> Result<f64> {
    p.validate()?;
    let x = p.x();
    let mut sum = 0.0;
    for l in 0..=m {
        sum += fractional_stirling(m, l, p.nu)? * x.powi(l as i32);
    }
    Ok(sum)
}

/// Mean and variance, `x/Γ(ν+1)` and `x/Γ(ν+1) + x²(2/Γ(2ν+1) - 1/Γ(ν+1)²)`.
pub fn mean_var_n(p: &FpParams) -> Result<(f64, f64)> {
    p.validate()?;
    let x = p.x();
    let g1 = recip_gamma(p.nu + 1.0);
    let mean = x * g1;
    let var = mean + x * x * (2.0 / gamma_fn(2.0 * p.nu + 1.0)? - g1 * g1);
    Ok((mean, var))
}
