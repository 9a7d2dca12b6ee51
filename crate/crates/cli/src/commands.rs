use fraccount::counting::{mean_var_m, moments_m, pmf_table, ProcessSpec};
use fraccount::fractional_poisson::{pmf_n_bounded, FpParams};
use fraccount::hitting::{fpt_cdf_mc, fpt_cdf_nu1, fpt_cdf_renewal, waiting_cdf_hj, waiting_cdf_hj_mixture};
use fraccount::simulation::{cutoff_experiment, estimate_pmf, simulate_path, CutoffMode, RandomSource};
use serde_json::Value;

use crate::args::{Command, FptMethod, Mode};
use crate::report::{num, nums, Report};
use crate::{verify, CliError};

pub fn execute(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::PmfN { lam, nu, t, nmax } => pmf_n_cmd(*lam, *nu, *t, *nmax),
        Command::PmfM { rates, nu, t, jmax } => {
            let s = ProcessSpec::new(*nu, rates.0.clone())?;
            pmf_m_cmd(&s, *t, *jmax)
        }
        Command::Figure1 { jmax } => figure1(*jmax),
        Command::Figure2 { nu, tsteps, jmax, rates } => figure2(&ProcessSpec::new(*nu, rates.0.clone())?, *tsteps, *jmax),
        Command::Moments { rates, nu, t, m } => moments(&ProcessSpec::new(*nu, rates.0.clone())?, *t, *m),
        Command::Waiting { rates, nu, j, t } => waiting(&ProcessSpec::new(*nu, rates.0.clone())?, *j, *t),
        Command::Fpt { rates, nu, n, t, method, paths, seed } => {
            fpt(&ProcessSpec::new(*nu, rates.0.clone())?, *n, *t, *method, *paths, *seed)
        }
        Command::Simulate { rates, nu, horizon, paths, seed, jmax, per_path } => {
            let s = ProcessSpec::new(*nu, rates.0.clone())?;
            if *per_path {
                simulate_paths(&s, *horizon, *paths, *seed)
            } else {
                simulate_pmf(&s, *horizon, *paths, *seed, *jmax)
            }
        }
        Command::Cutoff { mode, grid, nu, t, m, paths, seed, rates, index } => {
            cutoff(*mode, &grid.0, *nu, *t, *m, *paths, *seed, rates.as_ref().map(|r| r.0.as_slice()), *index)
        }
        Command::Verify { quick } => Ok(verify::run(*quick)),
    }
}

fn spec_params(r: &mut Report, s: &ProcessSpec) {
    r.param("nu", num(s.nu())).param("rates", nums(s.rates()));
}

fn pmf_n_cmd(lam: f64, nu: f64, t: f64, nmax: u32) -> Result<Report, CliError> {
    let p = FpParams::new(lam, nu, t)?;
    let mut r = Report::new("pmf-n", &["n", "p_n"]);
    r.param("lam", num(lam)).param("nu", num(nu)).param("t", num(t)).param("nmax", nmax);
    let mut bounds = Vec::new();
    for n in 0..=nmax {
        let v = pmf_n_bounded(&p, n)?;
        r.push(vec![n.into(), num(v.value)]);
        bounds.push(v.err_bound);
    }
    r.diag("err_bound", nums(&bounds));
    Ok(r)
}

fn pmf_m_cmd(s: &ProcessSpec, t: f64, jmax: usize) -> Result<Report, CliError> {
    let table = pmf_table(s, t, jmax)?;
    let mut r = Report::new("pmf-m", &["j", "p_j"]);
    spec_params(&mut r, s);
    r.param("t", num(t)).param("jmax", jmax);
    for (j, p) in table.masses.iter().enumerate() {
        r.push(vec![j.into(), num(*p)]);
    }
    r.footer.insert("displayed_mass".into(), num(table.displayed_mass));
    r.diag("err_bound", nums(&table.err_bounds));
    Ok(r)
}

fn figure1(jmax: usize) -> Result<Report, CliError> {
    let s = ProcessSpec::new(0.5, vec![1.0; 3])?;
    let a = pmf_table(&s, 1.0, jmax)?;
    let b = pmf_table(&s, 2.0, jmax)?;
    let mut r = Report::new("figure1", &["j", "p_j_t1", "p_j_t2"]);
    spec_params(&mut r, &s);
    r.param("jmax", jmax).param("t", nums(&[1.0, 2.0]));
    for j in 0..=jmax {
        r.push(vec![j.into(), num(a.masses[j]), num(b.masses[j])]);
    }
    r.footer.insert("displayed_mass_t1".into(), num(a.displayed_mass));
    r.footer.insert("displayed_mass_t2".into(), num(b.displayed_mass));
    r.diag("err_bound_t1", nums(&a.err_bounds));
    r.diag("err_bound_t2", nums(&b.err_bounds));
    Ok(r)
}

fn figure2(s: &ProcessSpec, tsteps: usize, jmax: usize) -> Result<Report, CliError> {
    if tsteps == 0 {
        return Err(CliError::Usage("--tsteps must be at least 1".into()));
    }
    let names: Vec<String> = (0..=jmax).map(|j| format!("p_{j}")).collect();
    let mut columns = vec!["t"];
    columns.extend(names.iter().map(String::as_str));
    let mut r = Report::new("figure2", &columns);
    spec_params(&mut r, s);
    r.param("tsteps", tsteps).param("jmax", jmax);
    let mut worst: f64 = 0.0;
    for i in 0..=tsteps {
        let t = 2.0 * i as f64 / tsteps as f64;
        let table = pmf_table(s, t, jmax)?;
        worst = table.err_bounds.iter().fold(worst, |a, &b| a.max(b));
        let mut row = vec![num(t)];
        row.extend(table.masses.iter().map(|&p| num(p)));
        r.push(row);
    }
    r.diag("max_err_bound", num(worst));
    Ok(r)
}

fn moments(s: &ProcessSpec, t: f64, m: u32) -> Result<Report, CliError> {
    if m == 0 {
        return Err(CliError::Usage("--m must be at least 1".into()));
    }
    let mut r = Report::new("moments", &["m", "moment"]);
    spec_params(&mut r, s);
    r.param("t", num(t)).param("m", m);
    for order in 1..=m {
        r.push(vec![order.into(), num(moments_m(s, t, order)?)]);
    }
    let (mean, var) = mean_var_m(s, t)?;
    r.footer.insert("mean".into(), num(mean));
    r.footer.insert("variance".into(), num(var));
    Ok(r)
}

fn waiting(s: &ProcessSpec, j: usize, t: f64) -> Result<Report, CliError> {
    let h = waiting_cdf_hj(s, j, t)?;
    let mix = waiting_cdf_hj_mixture(s, j, t, 1e-12)?;
    let mut r = Report::new("waiting", &["t", "cdf"]);
    spec_params(&mut r, s);
    r.param("j", j).param("t", num(t));
    r.push(vec![num(t), num(h)]);
    r.diag("mixture_value", num(mix.value))
        .diag("mixture_tail_bound", num(mix.tail_bound))
        .diag("mixture_terms", mix.terms);
    Ok(r)
}

fn fpt(s: &ProcessSpec, n: usize, t: f64, method: FptMethod, paths: u64, seed: u64) -> Result<Report, CliError> {
    let mut r = Report::new("fpt", &["n", "t", "cdf"]);
    spec_params(&mut r, s);
    r.param("n", n).param("t", num(t));
    match method {
        FptMethod::Quadrature => {
            let v = fpt_cdf_nu1(s, n, t, None)?;
            r.param("method", "quadrature");
            r.push(vec![n.into(), num(t), num(v.value)]);
            r.diag("tail_bound", num(v.tail_bound)).diag("h_used", v.h_used).diag("quad_err", num(v.quad_err));
        }
        FptMethod::Mc => {
            let e = fpt_cdf_mc(s, n, t, paths, seed)?;
            r.param("method", "mc").param("paths", paths).param("seed", seed);
            r.push(vec![n.into(), num(t), num(e.estimate)]);
            r.diag("std_error", num(e.std_error));
        }
    }
    // the renewal form P{tau_n <= t} = sum_r P{S_r = n} P{T_r <= t}
    r.diag("renewal", num(fpt_cdf_renewal(s, n, t)?));
    Ok(r)
}

fn simulate_pmf(s: &ProcessSpec, horizon: f64, paths: u64, seed: u64, jmax: usize) -> Result<Report, CliError> {
    let est = estimate_pmf(s, horizon, jmax, paths, seed)?;
    let exact = pmf_table(s, horizon, jmax)?;
    let mut r = Report::new("simulate", &["j", "estimate", "std_error", "exact"]);
    spec_params(&mut r, s);
    r.param("horizon", num(horizon)).param("paths", paths).param("seed", seed).param("jmax", jmax);
    for (j, (e, p)) in est.iter().zip(&exact.masses).enumerate() {
        r.push(vec![j.into(), num(e.estimate), num(e.std_error), num(*p)]);
    }
    Ok(r)
}

fn simulate_paths(s: &ProcessSpec, horizon: f64, paths: u64, seed: u64) -> Result<Report, CliError> {
    let counter_names: Vec<String> = (1..=s.k()).map(|j| format!("n_{j}")).collect();
    let mut columns = vec!["path", "events", "final_state", "last_event"];
    columns.extend(counter_names.iter().map(String::as_str));
    let mut r = Report::new("simulate", &columns);
    spec_params(&mut r, s);
    r.param("horizon", num(horizon)).param("paths", paths).param("seed", seed);
    for i in 0..paths {
        let p = simulate_path(s, horizon, &mut RandomSource::new(seed, i).stream())?;
        let last = p.event_times.last().copied().map_or(Value::Null, num);
        let mut row = vec![i.into(), p.event_times.len().into(), p.final_state.into(), last];
        row.extend(p.counters.iter().map(|&c| Value::from(c)));
        r.push(row);
    }
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn cutoff(
    mode: Mode,
    grid: &[f64],
    nu: f64,
    t: f64,
    m: u32,
    paths: u64,
    seed: u64,
    rates: Option<&[f64]>,
    index: usize,
) -> Result<Report, CliError> {
    let (mode, default_rates) = match mode {
        Mode::N => (CutoffMode::N, vec![1.0]),
        Mode::M => {
            if index == 0 {
                return Err(CliError::Usage("--index counts amplitudes from 1".into()));
            }
            (CutoffMode::M { index: index - 1 }, vec![1.0, 1.0])
        }
    };
    let base = ProcessSpec::new(nu, rates.map_or(default_rates, <[f64]>::to_vec))?;
    let pts = cutoff_experiment(&base, grid, nu, t, m, mode, paths, seed)?;
    let mut r = Report::new("cutoff", &["lambda", "moment", "deviation", "std_error"]);
    spec_params(&mut r, &base);
    r.param("mode", if matches!(mode, CutoffMode::N) { "N" } else { "M" })
        .param("t", num(t))
        .param("m", m)
        .param("paths", paths)
        .param("seed", seed)
        .param("grid", nums(grid));
    if let CutoffMode::M { index } = mode {
        r.param("index", index + 1);
    }
    for p in &pts {
        r.push(vec![num(p.lam), num(p.moment), num(p.deviation.estimate), num(p.deviation.std_error)]);
    }
    Ok(r)
}
