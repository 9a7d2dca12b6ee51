//! Power-series summation with a geometric tail bound and a running
//! rounding-error estimate.

/// One term of a series in sign/log-magnitude form.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Term {
    /// Exact value of the term (may be 0).
    pub value: f64,
    /// Upper bound on `|value|` whose ratios drive the tail bound.
    pub envelope: f64,
    /// Relative error of `value` in units of machine epsilon.
    pub ulps: f64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct SeriesSum {
    pub value: f64,
    /// Truncation bound plus rounding estimate.
    pub err_bound: f64,
    pub terms: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum SeriesAbort {
    /// The rounding error already exceeds the caller's threshold.
    Cancellation { rounding: f64 },
    /// No tail bound below the tolerance within the term budget.
    Budget,
    /// A partial sum left the finite range.
    Overflow,
}

/// Terms summed past the point where the tolerance is first met.
const EXTRA_TERMS: usize = 64;

/// Kahan-compensated summation of `term(0), term(1), ...`.
///
/// Stops once the current envelope and `env_r · ρ/(1-ρ)` (with `ρ` the last
/// envelope ratio, required `< 1` and nonincreasing) both fall below half the
/// tolerance, and then continues (at most [`EXTRA_TERMS`] more) until the
/// tail is below `ε·|sum|`.  The rounding estimate charges every term
/// `(ulps + 4)·ε·|t_r|`.
pub(crate) fn sum_series(
    mut term: impl FnMut(usize) -> Term,
    tol: f64,
    max_terms: usize,
    abort_rounding: Option<f64>,
) -> Result<SeriesSum, SeriesAbort> {
    let eps = f64::EPSILON;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut rounding = 0.0f64;
    let mut prev_env = f64::NAN;
    let mut prev_ratio = f64::INFINITY;
    let mut met_at: Option<usize> = None;

    for r in 0..max_terms {
        let t = term(r);
        if !t.value.is_finite() || !t.envelope.is_finite() {
            return Err(SeriesAbort::Overflow);
        }
        // Kahan step
        let y = t.value - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        rounding += (t.ulps + 4.0) * eps * t.value.abs();

        if let Some(limit) = abort_rounding {
            if rounding > limit {
                return Err(SeriesAbort::Cancellation { rounding });
            }
        }
        if !sum.is_finite() {
            return Err(SeriesAbort::Overflow);
        }

        if r >= 1 && prev_env > 0.0 {
            let ratio = t.envelope / prev_env;
            if ratio < 1.0 && ratio <= prev_ratio * (1.0 + 1e-12) {
                let tail = t.envelope * ratio / (1.0 - ratio);
                if t.envelope <= 0.5 * tol && tail <= 0.5 * tol {
                    met_at.get_or_insert(r);
                }
                // past the tolerance, keep going until the tail is negligible
                // next to the sum so small values keep their relative accuracy
                let settled = tail <= eps * sum.abs() || tail < f64::MIN_POSITIVE;
                if met_at.is_some_and(|m| settled || r >= m + EXTRA_TERMS) {
                    return Ok(SeriesSum {
                        value: sum,
                        err_bound: tail + rounding + eps * sum.abs(),
                        terms: r + 1,
                    });
                }
            }
            prev_ratio = ratio;
        } else if r >= 1 && prev_env == 0.0 && t.envelope == 0.0 {
            // z = 0: everything past the constant term vanishes
            return Ok(SeriesSum {
                value: sum,
                err_bound: rounding,
                terms: r + 1,
            });
        }
        prev_env = t.envelope;
    }
    Err(SeriesAbort::Budget)
}
