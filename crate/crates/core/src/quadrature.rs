//! Globally adaptive Gauss–Kronrod (7/15) quadrature on a finite interval.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Sum of the per-panel `|K15 - G7|` estimates.
    pub err_estimate: f64,
    pub evals: usize,
    pub panels: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<f64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx)? + f(c + dx)?;
        kronrod += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    let value = kronrod * h;
    let err = ((kronrod - gauss) * h).abs();
    if !value.is_finite() {
        return Err(Error::Numeric {
            what: "quadrature",
            detail: format!("non-finite integrand on [{a}, {b}]"),
        });
    }
    Ok(Panel { a, b, value, err })
}

/// `∫_a^b f` to absolute accuracy `tol`, bisecting the worst panel first.
///
/// Fails with [`Error::Numeric`] (carrying the achieved estimate) when
/// `max_panels` is exhausted.
pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: f64, max_panels: usize) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(Error::domain(format!("bad quadrature interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            err_estimate: 0.0,
            evals: 0,
            panels: 0,
        });
    }
    let mut heap = BinaryHeap::new();
    let first = gk15(&mut f, a, b)?;
    let mut total = first.value;
    let mut err = first.err;
    heap.push(first);
    let mut evals = 15;
    while err > tol {
        if heap.len() >= max_panels {
            return Err(Error::Numeric {
                what: "quadrature",
                detail: format!(
                    "no convergence on [{a}, {b}] after {evals} evaluations: estimate {total}, error {err:e} > {tol:e}"
                ),
            });
        }
        let worst = heap.pop().expect("heap is never empty here");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // panel cannot be split further in floating point
            return Err(Error::Numeric {
                what: "quadrature",
                detail: format!("panel [{}, {}] exhausted double resolution", worst.a, worst.b),
            });
        }
        let left = gk15(&mut f, worst.a, mid)?;
        let right = gk15(&mut f, mid, worst.b)?;
        evals += 30;
        total += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        // the running error drifts through cancellation; resum now and then
        if heap.len() % 64 == 0 {
            err = heap.iter().map(|p| p.err).sum();
            total = heap.iter().map(|p| p.value).sum();
        }
    }
    let panels = heap.len();
    let value = heap.iter().map(|p| p.value).sum();
    Ok(QuadResult {
        value,
        err_estimate: heap.iter().map(|p| p.err).sum(),
        evals,
        panels,
    })
}
