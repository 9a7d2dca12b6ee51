//! Cross-checks of the closed forms against reference values and against
//! simulation. Each check is one row: measured value, reference and the
//! rule that decides it.

use std::f64::consts::{E, PI};

use fraccount::counting::{
    composition_check, moments_m, pmf_m, pmf_m_nu1, pmf_table, pmf_via_subordination, ProcessSpec,
};
use fraccount::fractional_poisson::{waiting_cdf, FpParams};
use fraccount::hitting::{fpt_cdf_mc_grid, fpt_cdf_nu1, fpt_cdf_renewal, hj_cdf_mc, waiting_cdf_hj, waiting_cdf_hj_mixture};
use fraccount::simulation::{cutoff_experiment, CutoffMode, McEstimate};
use fraccount::special::{mittag_leffler, mittag_leffler_gen, wright};
use fraccount::Result;

use crate::report::{format_sig, num, Report};

/// `E_{1/2}(-1) = e erfc(1)`.
const E_HALF_AT_MINUS_ONE: f64 = 0.427_583_576_155_807;

enum Rule {
    /// `|measured - reference| <= tol`
    Abs(f64),
    /// the reference lies within `bound` standard errors of the estimate
    Z(McEstimate, f64),
    /// `measured > reference`
    Above,
}

struct Check {
    name: String,
    measured: f64,
    reference: f64,
    rule: Rule,
}

impl Check {
    fn abs(name: impl Into<String>, measured: f64, reference: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            measured,
            reference,
            rule: Rule::Abs(tol),
        }
    }

    fn mc(name: impl Into<String>, est: McEstimate, reference: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            measured: est.estimate,
            reference,
            rule: Rule::Z(est, bound),
        }
    }

    fn passed(&self) -> bool {
        match self.rule {
            Rule::Abs(tol) => (self.measured - self.reference).abs() <= tol,
            Rule::Z(e, bound) => e.z_score(self.reference) < bound,
            Rule::Above => self.measured > self.reference,
        }
    }

    fn criterion(&self) -> String {
        match self.rule {
            Rule::Abs(tol) => format!("abs diff <= {}", format_sig(tol)),
            Rule::Z(e, bound) => format!("{} SE < {bound}", format_sig(e.z_score(self.reference))),
            Rule::Above => "measured > reference".into(),
        }
    }
}

fn spec(nu: f64, rates: &[f64]) -> Result<ProcessSpec> {
    ProcessSpec::new(nu, rates.to_vec())
}

fn checks(quick: bool, out: &mut Vec<Check>) -> Result<()> {
    let paths: u64 = if quick { 20_000 } else { 100_000 };

    out.push(Check::abs("E_1/2(-1)", mittag_leffler(0.5, 1.0, -1.0)?.value, E_HALF_AT_MINUS_ONE, 1e-13));
    out.push(Check::abs("E^2_1,1(1) = 2e", mittag_leffler_gen(1.0, 1.0, 2.0, 1.0)?.value, 2.0 * E, 1e-12));
    out.push(Check::abs(
        "W_-1/2,1/2(-1) Gaussian",
        wright(-0.5, 0.5, -1.0)?.value,
        (-0.25f64).exp() / PI.sqrt(),
        1e-13,
    ));

    let fig = spec(0.5, &[1.0; 3])?;
    for (t, quoted) in [(1.0, 0.797_292), (2.0, 0.629_278)] {
        let mass = pmf_table(&fig, t, 11)?.displayed_mass;
        out.push(Check::abs(format!("displayed mass j<=11 t={t}"), mass, quoted, 5e-7));
    }

    let s = spec(1.0, &[0.7, 1.3, 0.4])?;
    let table = pmf_table(&s, 1.3, 15)?;
    let worst = (0..=15).try_fold(0.0f64, |w, j| Ok::<_, fraccount::Error>(w.max((table.masses[j] - pmf_m_nu1(&s, 1.3, j)?).abs())))?;
    out.push(Check::abs("nu=1 closed form, max diff j<=15", worst, 0.0, 1e-11));

    let s = spec(0.5, &[1.0, 1.0, 1.0])?;
    let sub = pmf_via_subordination(&s, 1.0, 3, 1e-9)?.value;
    out.push(Check::abs("subordination nu=0.5 j=3", sub, pmf_m(&s, 1.0, 3)?, 1e-6));
    let (lhs, rhs) = composition_check(&spec(0.7, &[1.0, 2.0])?, 1.0, 1, 1e-8)?;
    out.push(Check::abs("composition nu=0.7 j=1", lhs, rhs, 1e-5));

    let s = spec(0.6, &[0.8, 0.5, 1.2])?;
    let h = waiting_cdf_hj(&s, 2, 1.0)?;
    out.push(Check::abs("first size-2 jump vs one-jump law", h, waiting_cdf(&FpParams::new(0.5, 0.6, 1.0)?, 1)?, 1e-12));
    out.push(Check::abs("first size-2 jump vs geometric mixture", h, waiting_cdf_hj_mixture(&s, 2, 1.0, 1e-12)?.value, 1e-8));
    let mc = hj_cdf_mc(&s, 2, &[1.0], paths, 1)?[0];
    out.push(Check::mc("first size-2 jump vs simulation", mc, h, 4.0));

    let s = spec(0.5, &[1.0, 1.0, 1.0])?;
    let sum: f64 = pmf_table(&s, 1.0, 200)?.masses.iter().enumerate().map(|(j, p)| (j * j) as f64 * p).sum();
    out.push(Check::abs("second moment vs truncated sum", moments_m(&s, 1.0, 2)?, sum, 1e-7));

    let s = spec(1.0, &[1.0, 1.0])?;
    let times = [0.5, 1.0, 2.0];
    let mc = fpt_cdf_mc_grid(&s, 2, &times, paths, 2)?;
    for (t, e) in times.iter().zip(&mc) {
        let series = fpt_cdf_nu1(&s, 2, *t, None)?.value;
        out.push(Check::mc(format!("level 2 by t={t}: series vs simulation"), *e, series, 3.0));
        let renewal = fpt_cdf_renewal(&s, 2, *t)?;
        out.push(Check::mc(format!("level 2 by t={t}: renewal vs simulation"), *e, renewal, 3.0));
    }

    let grid: &[f64] = if quick { &[1.0, 10.0, 100.0] } else { &[1.0, 10.0, 100.0, 1000.0] };
    let pts = cutoff_experiment(&spec(1.0, &[1.0])?, grid, 1.0, 1.0, 1, CutoffMode::N, paths, 3)?;
    let want = (2.0 / (PI * 100.0)).sqrt();
    out.push(Check::abs("cut-off nu=1 lambda=100 vs folded normal", pts[2].deviation.estimate, want, 0.15 * want));
    if !quick {
        for nu in [0.5, 1.0] {
            let pts = cutoff_experiment(&spec(nu, &[1.0])?, grid, nu, 1.0, 1, CutoffMode::N, paths, 4)?;
            for (w, l) in pts.windows(2).zip(grid.windows(2)) {
                let drop = w[0].deviation.estimate - w[1].deviation.estimate;
                let se = w[0].deviation.std_error.hypot(w[1].deviation.std_error);
                out.push(Check {
                    name: format!("cut-off nu={nu} drop from lambda={} to {} in SE", l[0], l[1]),
                    measured: drop / se,
                    reference: 3.0,
                    rule: Rule::Above,
                });
            }
        }
    }
    Ok(())
}

/// Runs every check and tabulates the outcome. A check that cannot be
/// evaluated is reported as failed with its error.
pub fn run(quick: bool) -> Report {
    let mut list = Vec::new();
    let outcome = checks(quick, &mut list);
    let mut r = Report::new("verify", &["check", "status", "measured", "reference", "criterion"]);
    r.param("quick", quick);
    let mut failed = 0usize;
    for c in &list {
        let ok = c.passed();
        failed += usize::from(!ok);
        r.push(vec![
            c.name.clone().into(),
            (if ok { "PASS" } else { "FAIL" }).into(),
            num(c.measured),
            num(c.reference),
            c.criterion().into(),
        ]);
    }
    if let Err(e) = outcome {
        failed += 1;
        r.diag("error", e.to_string());
    }
    r.diag("checks", list.len()).diag("failed", failed);
    r
}

/// Number of failed checks recorded in a verify report.
pub fn failures(r: &Report) -> usize {
    r.diagnostics.get("failed").and_then(|v| v.as_u64()).unwrap_or(0) as usize
}
