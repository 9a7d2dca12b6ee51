//! Gamma function and friends on the real line.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Largest argument for which `Γ(x)` is finite in `f64`.
pub const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// `sin(πx)` with the argument reduced exactly, so integers give exact zeros.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x % 2.0; // exact in floating point
    let r = if r < 0.0 { r + 2.0 } else { r };
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    if r <= 0.25 {
        (PI * r).sin()
    } else if r <= 0.75 {
        (PI * (0.5 - r)).cos()
    } else if r <= 1.25 {
        (PI * (1.0 - r)).sin()
    } else if r <= 1.75 {
        -(PI * (r - 1.5)).cos()
    } else {
        (PI * (r - 2.0)).sin()
    }
}

/// Lanczos sum `A(x)` for `Γ(x + 1)`.
fn lanczos_sum(x: f64) -> f64 {
    let mut a = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    a
}

/// `Γ(x)` for real `x`; poles at the nonpositive integers are a domain error.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::domain("gamma of NaN"));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::domain(format!("gamma has a pole at {x}")));
    }
    Ok(gamma_unchecked(x))
}

pub(crate) fn gamma_unchecked(x: f64) -> f64 {
    if x == x.floor() && (1.0..=171.0).contains(&x) {
        let mut p = 1.0;
        let mut k = 2.0;
        while k < x {
            p *= k;
            k += 1.0;
        }
        return p;
    }
    if x < 0.5 {
        return PI / (sin_pi(x) * gamma_unchecked(1.0 - x));
    }
    if x > GAMMA_MAX_ARG {
        return f64::INFINITY;
    }
    let y = x - 1.0;
    let t = y + LANCZOS_G + 0.5;
    // split the power so t^(y+0.5) does not overflow before e^-t pulls it back
    let half = t.powf((y + 0.5) / 2.0);
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * lanczos_sum(y)
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x >= 10.0 {
        let inv = 1.0 / x;
        let inv2 = inv * inv;
        let series = inv
            * (1.0 / 12.0
                + inv2
                    * (-1.0 / 360.0
                        + inv2 * (1.0 / 1260.0 + inv2 * (-1.0 / 1680.0 + inv2 * (1.0 / 1188.0)))));
        (x - 0.5) * x.ln() - x + LN_SQRT_2PI + series
    } else {
        gamma_unchecked(x).abs().ln()
    }
}

/// `1/Γ(x)` written as `sign · exp(ln_mag)`; `None` at the poles of `Γ`, where `1/Γ = 0`.
pub(crate) fn ln_recip_gamma(x: f64) -> Option<(f64, f64)> {
    if is_nonpositive_integer(x) {
        return None;
    }
    if x > 0.0 {
        return Some((-ln_gamma(x), 1.0));
    }
    // 1/Γ(x) = sin(πx) Γ(1-x) / π
    let s = sin_pi(x);
    Some((s.abs().ln() + ln_gamma(1.0 - x) - PI.ln(), s.signum()))
}

/// `1/Γ(x)`, entire: zero at the nonpositive integers.
pub fn recip_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x > 0.0 && x < 170.0 {
        return 1.0 / gamma_unchecked(x);
    }
    match ln_recip_gamma(x) {
        Some((l, s)) => s * l.exp(),
        None => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn anchors() {
        assert_eq!(gamma_fn(1.0).unwrap(), 1.0);
        assert_eq!(gamma_fn(4.0).unwrap(), 6.0);
        assert!(rel(gamma_fn(0.5).unwrap(), PI.sqrt()) < 1e-15);
        assert!(rel(gamma_fn(1.5).unwrap(), PI.sqrt() / 2.0) < 1e-15);
        assert!(rel(gamma_fn(-0.5).unwrap(), -2.0 * PI.sqrt()) < 1e-14);
    }

    #[test]
    fn poles_are_domain_errors() {
        for x in [0.0, -1.0, -7.0] {
            assert!(matches!(gamma_fn(x), Err(Error::Domain(_))));
        }
        assert_eq!(recip_gamma(-3.0), 0.0);
        assert_eq!(recip_gamma(0.0), 0.0);
    }

    #[test]
    fn recurrence_holds_on_grid() {
        let mut x = 0.1;
        while x < 50.0 {
            let lhs = gamma_fn(x + 1.0).unwrap();
            let rhs = x * gamma_fn(x).unwrap();
            assert!(rel(lhs, rhs) < 2e-13, "x={x}");
            x += 0.173;
        }
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for &x in &[0.3, 1.7, 9.99, 10.0, 10.01, 25.5, 120.25] {
            let direct = gamma_unchecked(x).ln();
            assert!((ln_gamma(x) - direct).abs() < 1e-13 * direct.abs().max(1.0), "x={x}");
        }
    }

    #[test]
    fn reciprocal_gamma_negative_arguments() {
        // 1/Γ(-0.5) = -1/(2√π), 1/Γ(-1.5) = 3/(4√π)
        assert!(rel(recip_gamma(-0.5), -1.0 / (2.0 * PI.sqrt())) < 1e-14);
        assert!(rel(recip_gamma(-1.5), 3.0 / (4.0 * PI.sqrt())) < 1e-14);
        // large negative argument stays finite through the log path
        let v = recip_gamma(-150.5);
        assert!(v.is_finite() && v != 0.0);
    }

    #[test]
    fn sin_pi_exact_zeros() {
        for k in -5..5 {
            assert_eq!(sin_pi(k as f64), 0.0);
        }
        assert!((sin_pi(0.5) - 1.0).abs() < 1e-16);
        assert!((sin_pi(-0.5) + 1.0).abs() < 1e-16);
        assert!((sin_pi(1.5) + 1.0).abs() < 1e-16);
    }
}
