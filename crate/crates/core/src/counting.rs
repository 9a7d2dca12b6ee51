//! Law of `M^ν(t) = Σ_j j N_j(Y_ν(t))`.
//!
//! The pmf is a mixture of fractional Poisson masses at the total rate `Λ`:
//! `P{M(t) = j} = Σ_r P{S_r = j} P{N^ν_Λ(t) = r}`, where `S_r` is the sum of
//! `r` i.i.d. jumps with `P{X = i} = λ_i/Λ`. Expanding `P{S_r = j}` gives the
//! composition coefficients `c_{j,r} = Λ^r P{S_r = j}`.

use std::ops::{Add, Mul};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fractional_poisson::{check_nu, pmf_n_at, stirling2};
use crate::quadrature::{integrate, QuadResult};
use crate::special::{gamma_fn, ln_gamma, recip_gamma, wright, EvalOptions, MlParams};

/// Model parameters: `ν` and the rates `λ_1..λ_k` of jumps of size `1..k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessSpec {
    nu: f64,
    rates: Vec<f64>,
    lambda: f64,
}

impl ProcessSpec {
    pub fn new(nu: f64, rates: Vec<f64>) -> Result<Self> {
        check_nu(nu)?;
        if rates.is_empty() {
            return Err(Error::domain("at least one rate is required"));
        }
        if let Some(bad) = rates.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
            return Err(Error::domain(format!("rates must be positive, got {bad}")));
        }
        let lambda = rates.iter().sum();
        Ok(ProcessSpec { nu, rates, lambda })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    /// Largest jump size.
    pub fn k(&self) -> usize {
        self.rates.len()
    }

    /// Total rate `Λ = Σ λ_j`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Same rates at another order `ν`.
    pub fn with_nu(&self, nu: f64) -> Result<Self> {
        ProcessSpec::new(nu, self.rates.clone())
    }

    /// `P{X = j} = λ_j/Λ` for `j = 1..=k` (index 0 holds jump size 1).
    pub fn jump_probs(&self) -> Vec<f64> {
        self.rates.iter().map(|r| r / self.lambda).collect()
    }

    /// `Σ j^p λ_j`.
    pub fn rate_moment(&self, p: i32) -> f64 {
        self.rates
            .iter()
            .enumerate()
            .map(|(i, r)| ((i + 1) as f64).powi(p) * r)
            .sum()
    }
}

/// `c[j][r] = Σ_{compositions} multinomial(r; α) Π λ_i^{α_i}` over
/// `Σ α_i = r`, `Σ i α_i = j`, via `c_{j,r} = Σ_i λ_i c_{j-i,r-1}`.
pub fn composition_coefficients<T>(rates: &[T], j_max: usize) -> Vec<Vec<T>>
where
    T: Copy + Zero + One + Add<Output = T> + Mul<Output = T>,
{
    let mut c = vec![vec![T::zero(); j_max + 1]; j_max + 1];
    c[0][0] = T::one();
    for j in 1..=j_max {
        // every jump is at least 1, so r <= j
        for r in 1..=j {
            let mut acc = T::zero();
            for (i, &lam) in rates.iter().enumerate() {
                let size = i + 1;
                if size > j {
                    break;
                }
                acc = acc + lam * c[j - size][r - 1];
            }
            c[j][r] = acc;
        }
    }
    c
}

/// Pmf over `j = 0..=j_max` with per-entry error bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct PmfTable {
    pub spec: ProcessSpec,
    pub t: f64,
    pub j_max: usize,
    pub masses: Vec<f64>,
    pub err_bounds: Vec<f64>,
    pub displayed_mass: f64,
}

fn check_t(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("time must be nonnegative, got {t}")))
    }
}

/// Fractional Poisson masses `P{N^ν_Λ(t) = r}` for `r = 0..=r_max`, with
/// their error bounds.
fn fp_masses(nu: f64, x: f64, r_max: usize) -> Result<Vec<(f64, f64)>> {
    let opts = EvalOptions::default();
    (0..=r_max)
        .into_par_iter()
        .map(|r| pmf_n_at(nu, x, r as u32, &opts).map(|v| (v.value, v.err_bound)))
        .collect()
}

fn mix(q: &[Vec<f64>], fp: &[(f64, f64)], j: usize) -> (f64, f64) {
    let mut v = 0.0;
    let mut e = 0.0;
    for r in 0..=j {
        v += q[j][r] * fp[r].0;
        e += q[j][r] * fp[r].1;
    }
    // rounding of the mixture itself
    (v, e + (j as f64 + 1.0) * f64::EPSILON * v)
}

/// `P{M^ν(t) = j}`.
pub fn pmf_m(spec: &ProcessSpec, t: f64, j: usize) -> Result<f64> {
    let table = pmf_table(spec, t, j)?;
    Ok(table.masses[j])
}

/// Masses `p_0..p_{j_max}` and their sum.
pub fn pmf_table(spec: &ProcessSpec, t: f64, j_max: usize) -> Result<PmfTable> {
    check_t(t)?;
    let q = composition_coefficients(&spec.jump_probs(), j_max);
    let fp = fp_masses(spec.nu, spec.lambda * t.powf(spec.nu), j_max)?;
    let (masses, err_bounds): (Vec<f64>, Vec<f64>) =
        (0..=j_max).map(|j| mix(&q, &fp, j)).map(|(v, e)| (v.clamp(0.0, 1.0), e)).unzip();
    let displayed_mass = masses.iter().sum();
    Ok(PmfTable {
        spec: spec.clone(),
        t,
        j_max,
        masses,
        err_bounds,
        displayed_mass,
    })
}

/// Pmf evaluator for many times at fixed `(spec, j)`: the composition
/// probabilities are computed once.
pub(crate) struct PmfAtJ {
    nu: f64,
    lambda: f64,
    j: usize,
    q: Vec<Vec<f64>>,
}

impl PmfAtJ {
    pub(crate) fn new(spec: &ProcessSpec, j: usize) -> Self {
        PmfAtJ {
            nu: spec.nu,
            lambda: spec.lambda,
            j,
            q: composition_coefficients(&spec.jump_probs(), j),
        }
    }

    pub(crate) fn eval(&self, t: f64) -> Result<f64> {
        let x = self.lambda * t.powf(self.nu);
        let opts = EvalOptions::default();
        let mut v = 0.0;
        for r in 0..=self.j {
            let q = self.q[self.j][r];
            if q != 0.0 {
                v += q * pmf_n_at(self.nu, x, r as u32, &opts)?.value;
            }
        }
        Ok(v)
    }
}

/// `ν = 1` closed form: the law of `Σ_i i N_i(t)` with independent Poisson
/// `N_i`, obtained by convolving the laws of the `i N_i(t)`.
pub fn pmf_m_nu1(spec: &ProcessSpec, t: f64, j: usize) -> Result<f64> {
    if spec.nu != 1.0 {
        return Err(Error::domain(format!(
            "the nu = 1 closed form was called with nu = {}",
            spec.nu
        )));
    }
    Ok(pmf_nu1_table(spec.rates(), t, j)?[j])
}

pub(crate) fn pmf_nu1_table(rates: &[f64], t: f64, j_max: usize) -> Result<Vec<f64>> {
    check_t(t)?;
    let mut acc = vec![0.0; j_max + 1];
    acc[0] = 1.0;
    for (i, &lam) in rates.iter().enumerate() {
        let size = i + 1;
        let mu = lam * t;
        // Poisson(mu) masses placed at multiples of `size`
        let mut factor = vec![0.0; j_max + 1];
        let mut p = (-mu).exp();
        let mut m = 0usize;
        while m * size <= j_max {
            factor[m * size] = p;
            m += 1;
            p *= mu / m as f64;
        }
        let mut next = vec![0.0; j_max + 1];
        for (a, &pa) in acc.iter().enumerate() {
            if pa == 0.0 {
                continue;
            }
            for (b, &pb) in factor.iter().enumerate().take(j_max + 1 - a) {
                next[a + b] += pa * pb;
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// `E e^{s M(t)} = E_{ν,1}(Σ λ_j (e^{js} - 1) t^ν)`.
pub fn mgf_m(spec: &ProcessSpec, t: f64, s: f64) -> Result<f64> {
    check_t(t)?;
    let inner: f64 = spec
        .rates
        .iter()
        .enumerate()
        .map(|(i, r)| r * ((i + 1) as f64 * s).exp_m1())
        .sum();
    let z = inner * t.powf(spec.nu);
    Ok(MlParams::two_parameter(spec.nu, 1.0, z)?.evaluate(&EvalOptions::default())?.value)
}

/// Overdispersion factor `Z(ν) = (1/ν)(1/Γ(2ν) - 1/(ν Γ(ν)²))`, zero at `ν = 1`.
pub fn z_factor(nu: f64) -> Result<f64> {
    check_nu(nu)?;
    let rg = recip_gamma(nu);
    Ok((recip_gamma(2.0 * nu) - rg * rg / nu) / nu)
}

/// Mean `S_1 t^ν/Γ(ν+1)` and variance `S_2 t^ν/Γ(ν+1) + S_1² t^{2ν} Z(ν)`,
/// `S_p = Σ j^p λ_j`.
pub fn mean_var_m(spec: &ProcessSpec, t: f64) -> Result<(f64, f64)> {
    check_t(t)?;
    let tn = t.powf(spec.nu);
    let g = gamma_fn(spec.nu + 1.0)?;
    let s1 = spec.rate_moment(1);
    let s2 = spec.rate_moment(2);
    let mean = s1 * tn / g;
    let var = s2 * tn / g + s1 * s1 * tn * tn * z_factor(spec.nu)?;
    Ok((mean, var))
}

/// Largest moment order accepted by [`moments_m`].
pub const MAX_MOMENT_ORDER: u32 = 8;

/// `E[M(t)^m]`.
///
/// With `D(n,i,j) = i! j^n S(n,i)` the `n`-th derivative of `(e^{js}-1)^i`
/// at 0, the moment is `Σ_r t^{rν}/Γ(rν+1) · r! m! [y^r x^m] Π_j B_j(y,x)`
/// where `B_j = Σ_{i<=n} λ_j^i j^n S(n,i)/n! · y^i x^n`; the multinomial sums
/// collapse into this polynomial product.
pub fn moments_m(spec: &ProcessSpec, t: f64, m: u32) -> Result<f64> {
    check_t(t)?;
    if m > MAX_MOMENT_ORDER {
        return Err(Error::domain(format!("moment order {m} exceeds {MAX_MOMENT_ORDER}")));
    }
    let m = m as usize;
    // poly[i][n]: coefficient of y^i x^n
    let mut poly = vec![vec![0.0f64; m + 1]; m + 1];
    poly[0][0] = 1.0;
    for (idx, &lam) in spec.rates.iter().enumerate() {
        let j = (idx + 1) as f64;
        let mut b = vec![vec![0.0f64; m + 1]; m + 1];
        for n in 0..=m {
            let jn_over_nfact = (n as f64 * j.ln() - ln_gamma(n as f64 + 1.0)).exp();
            for (i, row) in b.iter_mut().enumerate().take(n + 1) {
                row[n] = lam.powi(i as i32) * jn_over_nfact * stirling2(n as u32, i as u32) as f64;
            }
        }
        let mut next = vec![vec![0.0f64; m + 1]; m + 1];
        for i1 in 0..=m {
            for n1 in 0..=m {
                let a = poly[i1][n1];
                if a == 0.0 {
                    continue;
                }
                for i2 in 0..=(m - i1) {
                    for n2 in 0..=(m - n1) {
                        next[i1 + i2][n1 + n2] += a * b[i2][n2];
                    }
                }
            }
        }
        poly = next;
    }
    let ln_mfact = ln_gamma(m as f64 + 1.0);
    let mut total = 0.0;
    for (r, row) in poly.iter().enumerate() {
        let coef = row[m];
        if coef == 0.0 {
            continue;
        }
        let rf = r as f64;
        let tr = if r == 0 { 1.0 } else { t.powf(rf * spec.nu) };
        total += tr * recip_gamma(rf * spec.nu + 1.0) * (ln_gamma(rf + 1.0) + ln_mfact).exp() * coef;
    }
    Ok(total)
}

/// Density of the inverse `ν`-stable subordinator at time `t`,
/// `t^{-ν} W_{-ν,1-ν}(-z t^{-ν})` for `z >= 0` and 0 for `z < 0`.
pub fn folded_density(nu: f64, z: f64, t: f64) -> Result<f64> {
    check_nu(nu)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("folded density needs t > 0, got {t}")));
    }
    if nu == 1.0 {
        return Err(Error::domain("at nu = 1 the time change is the point mass at t"));
    }
    if z < 0.0 {
        return Ok(0.0);
    }
    let tn = t.powf(nu);
    let w = wright(-nu, 1.0 - nu, -z / tn)?;
    Ok((w.value / tn).max(0.0))
}

/// Truncation point `Z*` with `P{E_ν(t) > Z*} <= tail`, from the Chernoff
/// bound `P{E > z} <= E[E^m]/z^m` with `E[E^m] = m! t^{mν}/Γ(mν+1)`.
pub fn folded_cutoff(nu: f64, t: f64, tail: f64) -> f64 {
    let ln_tail = tail.ln();
    let ln_bound = |z: f64| {
        (1..=400)
            .map(|m| {
                let mf = m as f64;
                ln_gamma(mf + 1.0) + mf * nu * t.ln() - ln_gamma(mf * nu + 1.0) - mf * z.ln()
            })
            .fold(f64::INFINITY, f64::min)
    };
    let mut hi = t.powf(nu).max(1e-3);
    while ln_bound(hi) > ln_tail {
        hi *= 2.0;
    }
    let mut lo = hi / 2.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if ln_bound(mid) > ln_tail {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Result of an integral against the folded density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubordinatedValue {
    pub value: f64,
    /// Quadrature error estimate plus the truncated tail.
    pub err_estimate: f64,
    pub cutoff: f64,
    pub evals: usize,
}

const MAX_PANELS: usize = 2000;

/// `∫_0^∞ f(z) ḡ_ν(z,t) dz` for `0 <= f <= 1`.
pub fn integrate_against_folded<F>(nu: f64, t: f64, quad_tol: f64, mut f: F) -> Result<SubordinatedValue>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(quad_tol > 0.0) {
        return Err(Error::domain("quadrature tolerance must be positive"));
    }
    let tail = 0.05 * quad_tol;
    let cutoff = folded_cutoff(nu, t, tail);
    let QuadResult {
        value,
        err_estimate,
        evals,
        ..
    } = integrate(
        |z| {
            let g = folded_density(nu, z, t)?;
            if g == 0.0 {
                return Ok(0.0);
            }
            Ok(f(z)? * g)
        },
        0.0,
        cutoff,
        0.5 * quad_tol,
        MAX_PANELS,
    )?;
    Ok(SubordinatedValue {
        value,
        err_estimate: err_estimate + tail,
        cutoff,
        evals,
    })
}

/// `∫ P{M^1(z) = j} ḡ_ν(z,t) dz`, which equals `P{M^ν(t) = j}`.
pub fn pmf_via_subordination(spec: &ProcessSpec, t: f64, j: usize, quad_tol: f64) -> Result<SubordinatedValue> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("subordination needs t > 0, got {t}")));
    }
    if spec.nu == 1.0 {
        let v = pmf_nu1_table(spec.rates(), t, j)?[j];
        return Ok(SubordinatedValue {
            value: v,
            err_estimate: 0.0,
            cutoff: t,
            evals: 1,
        });
    }
    let rates = spec.rates().to_vec();
    integrate_against_folded(spec.nu, t, quad_tol, |z| Ok(pmf_nu1_table(&rates, z, j)?[j]))
}

/// Both sides of `M^ν(E_ν(t)) = M^{ν²}(t)` in law:
/// `(∫ P{M^ν(z) = j} ḡ_ν(z,t) dz, P{M^{ν²}(t) = j})`.
pub fn composition_check(spec: &ProcessSpec, t: f64, j: usize, quad_tol: f64) -> Result<(f64, f64)> {
    let nu = spec.nu;
    if !(nu < 1.0) {
        return Err(Error::domain("composition check needs nu < 1"));
    }
    if !(t > 0.0) {
        return Err(Error::domain(format!("composition check needs t > 0, got {t}")));
    }
    let at_j = PmfAtJ::new(spec, j);
    let lhs = integrate_against_folded(nu, t, quad_tol, |z| at_j.eval(z))?;
    let rhs = pmf_m(&spec.with_nu(nu * nu)?, t, j)?;
    Ok((lhs.value, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(nu: f64, rates: &[f64]) -> ProcessSpec {
        ProcessSpec::new(nu, rates.to_vec()).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(ProcessSpec::new(1.5, vec![1.0]).is_err());
        assert!(ProcessSpec::new(0.0, vec![1.0]).is_err());
        assert!(ProcessSpec::new(0.5, vec![]).is_err());
        assert!(ProcessSpec::new(0.5, vec![1.0, -1.0]).is_err());
        let s = spec(0.5, &[1.0, 2.0, 3.0]);
        assert_eq!(s.k(), 3);
        assert_eq!(s.lambda(), 6.0);
    }

    #[test]
    fn coefficients_small_cases() {
        // rates (a, b): c_{2,1} = b, c_{2,2} = a², c_{3,2} = 2ab
        let c = composition_coefficients(&[3i64, 5], 4);
        assert_eq!(c[0][0], 1);
        assert_eq!(c[2][1], 5);
        assert_eq!(c[2][2], 9);
        assert_eq!(c[3][2], 30);
        assert_eq!(c[4][2], 25);
        assert_eq!(c[4][3], 3 * 3 * 5 * 3);
        assert_eq!(c[4][4], 81);
    }

    #[test]
    fn initial_condition_and_zero_time() {
        let s = spec(0.4, &[1.0, 1.0, 2.0]);
        let tab = pmf_table(&s, 0.0, 5).unwrap();
        assert_eq!(tab.masses, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(pmf_m_nu1(&spec(1.0, &[2.0]), 0.0, 0).unwrap(), 1.0);
    }

    #[test]
    fn nu1_closed_form_examples() {
        let e = std::f64::consts::E;
        assert!((pmf_m_nu1(&spec(1.0, &[1.0]), 1.0, 2).unwrap() - 0.5 / e).abs() < 1e-15);
        assert!((pmf_m_nu1(&spec(1.0, &[1.0, 1.0]), 1.0, 1).unwrap() - 1.0 / (e * e)).abs() < 1e-15);
        let (l1, l2, t) = (0.7f64, 1.9f64, 1.3f64);
        let want = (l1 * l1 * t * t / 2.0 + l2 * t) * (-(l1 + l2) * t).exp();
        assert!((pmf_m_nu1(&spec(1.0, &[l1, l2]), t, 2).unwrap() - want).abs() < 1e-15);
        assert!(pmf_m_nu1(&spec(0.9, &[1.0]), 1.0, 0).is_err());
    }

    #[test]
    fn z_factor_values() {
        assert!(z_factor(1.0).unwrap().abs() < 1e-15);
        assert!(z_factor(0.5).unwrap() > 0.0);
    }

    #[test]
    fn moments_low_orders() {
        let s = spec(1.0, &[1.0, 1.0]);
        assert!((moments_m(&s, 1.0, 0).unwrap() - 1.0).abs() < 1e-15);
        let (mean, var) = mean_var_m(&s, 1.0).unwrap();
        assert!((mean - 3.0).abs() < 1e-14 && (var - 5.0).abs() < 1e-14);
        assert!((moments_m(&s, 1.0, 1).unwrap() - 3.0).abs() < 1e-13);
        assert!((moments_m(&s, 1.0, 2).unwrap() - 14.0).abs() < 1e-12);
        assert!(moments_m(&s, 1.0, 9).is_err());
    }

    #[test]
    fn half_order_density_is_gaussian() {
        for i in 0..=50 {
            let z = 0.1 * i as f64;
            let g = folded_density(0.5, z, 1.0).unwrap();
            let want = (-z * z / 4.0).exp() / std::f64::consts::PI.sqrt();
            assert!((g - want).abs() < 1e-12, "z={z}");
        }
        assert_eq!(folded_density(0.5, -1.0, 1.0).unwrap(), 0.0);
        assert!(folded_density(0.5, 1.0, 0.0).is_err());
    }

    #[test]
    fn cutoff_bounds_the_gaussian_tail() {
        // ν = 1/2: E is half-normal with scale √(2t)
        let z = folded_cutoff(0.5, 1.0, 1e-12);
        let exact_tail = libm_erfc(z / 2.0);
        assert!(exact_tail <= 1e-12, "z={z} tail={exact_tail}");
        assert!(z < 20.0);
    }

    // erfc(x) for moderate x via the continued fraction, test-only
    fn libm_erfc(x: f64) -> f64 {
        let mut f = 0.0;
        for k in (1..200).rev() {
            f = (k as f64 / 2.0) / (x + f);
        }
        (-x * x).exp() / std::f64::consts::PI.sqrt() / (x + f)
    }
}
