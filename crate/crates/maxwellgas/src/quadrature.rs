//! Adaptive Gauss–Kronrod integration, piecewise Chebyshev interpolation with
//! exact cumulative integrals, and Ridders' extrapolated derivative.

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
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Stopping rule for the adaptive integrator: the summed error estimate must
/// fall below `max(abs, rel·|value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel, max_intervals: 4000 }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(1e-10, 1e-12)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    /// Equal to `error` when that is pure round-off, which bisection cannot reduce; zero otherwise.
    floor: f64,
}

impl Segment {
    fn reducible(&self) -> f64 {
        self.error - self.floor
    }
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.reducible() == other.reducible()
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.reducible().total_cmp(&other.reducible())
    }
}

fn kronrod<F>(f: &mut F, a: f64, b: f64) -> Result<Segment>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut result_k = fc * WGK[7];
    let mut result_g = fc * WG[3];
    let mut result_abs = result_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        result_k += WGK[j] * (f1 + f2);
        result_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            result_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * result_k;
    let mut result_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        result_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = result_k * half;
    result_abs *= half.abs();
    result_asc *= half.abs();
    let mut error = ((result_k - result_g) * half).abs();
    if result_asc != 0.0 && error != 0.0 {
        error = result_asc * (200.0 * error / result_asc).powf(1.5).min(1.0);
    }
    let mut floor = 0.0;
    if result_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        floor = 50.0 * f64::EPSILON * result_abs;
        error = error.max(floor);
    }
    if !value.is_finite() {
        return Err(Error::Domain(format!("non-finite integrand on [{a}, {b}]")));
    }
    let floor = if error <= floor { error } else { 0.0 };
    Ok(Segment { a, b, value, error, floor })
}

/// Integrate a fallible integrand over consecutive intervals given by
/// `breaks` (at least two points, increasing).
pub fn try_integrate_breaks<F>(mut f: F, breaks: &[f64], tol: &Tolerance) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    assert!(breaks.len() >= 2, "need at least one interval");
    let mut heap = BinaryHeap::new();
    let mut value = 0.0;
    let mut error = 0.0;
    let mut floor = 0.0;
    let mut evaluations = 0;
    for w in breaks.windows(2) {
        if w[1] == w[0] {
            continue;
        }
        let s = kronrod(&mut f, w[0], w[1])?;
        evaluations += 15;
        value += s.value;
        error += s.error;
        floor += s.floor;
        heap.push(s);
    }
    while error - floor > tol.target(value) {
        if heap.len() >= tol.max_intervals {
            return Err(Error::Quadrature { estimate: value, error, tolerance: tol.target(value) });
        }
        let worst = match heap.pop() {
            Some(s) => s,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // Interval exhausted at machine resolution.
            return Err(Error::Quadrature { estimate: value, error, tolerance: tol.target(value) });
        }
        let left = kronrod(&mut f, worst.a, mid)?;
        let right = kronrod(&mut f, mid, worst.b)?;
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        floor += left.floor + right.floor - worst.floor;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed the drift of incremental updates.
    let value = heap.iter().map(|s| s.value).sum();
    let error = heap.iter().map(|s| s.error).sum();
    Ok(Estimate { value, error, evaluations })
}

pub fn try_integrate<F>(f: F, a: f64, b: f64, tol: &Tolerance) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    try_integrate_breaks(f, &[a, b], tol)
}

pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: &Tolerance) -> Result<Estimate>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_breaks(|x| Ok(f(x)), &[a, b], tol)
}

pub fn integrate_breaks<F>(mut f: F, breaks: &[f64], tol: &Tolerance) -> Result<Estimate>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_breaks(|x| Ok(f(x)), breaks, tol)
}

/// Chebyshev series on one panel, with the coefficients of its running
/// integral from the left end.
#[derive(Debug, Clone)]
struct ChebPanel {
    a: f64,
    b: f64,
    coeffs: Vec<f64>,
    int_coeffs: Vec<f64>,
    offset: f64,
}

fn clenshaw(c: &[f64], t: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * t * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    t * b1 - b2 + c[0]
}

impl ChebPanel {
    fn build<F>(f: &mut F, a: f64, b: f64, degree: usize) -> Result<Self>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let n = degree;
        let pi = std::f64::consts::PI;
        let mut values = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let t = (pi * j as f64 / n as f64).cos();
            values.push(f(0.5 * (a + b) + 0.5 * (b - a) * t)?);
        }
        let mut coeffs = vec![0.0; n + 1];
        for (k, ck) in coeffs.iter_mut().enumerate() {
            let mut s = 0.0;
            for (j, &v) in values.iter().enumerate() {
                let w = if j == 0 || j == n { 0.5 } else { 1.0 };
                s += w * v * (pi * (j * k) as f64 / n as f64).cos();
            }
            *ck = 2.0 * s / n as f64;
        }
        coeffs[0] *= 0.5;
        coeffs[n] *= 0.5;

        let mut ic = vec![0.0; n + 2];
        ic[1] += coeffs[0];
        if n >= 1 {
            ic[2] += 0.25 * coeffs[1];
            ic[0] += 0.25 * coeffs[1];
        }
        for k in 2..=n {
            ic[k + 1] += coeffs[k] / (2.0 * (k + 1) as f64);
            ic[k - 1] -= coeffs[k] / (2.0 * (k - 1) as f64);
        }
        let scale = 0.5 * (b - a);
        for c in ic.iter_mut() {
            *c *= scale;
        }
        let at_left: f64 = ic.iter().enumerate().map(|(k, c)| if k % 2 == 0 { *c } else { -*c }).sum();
        ic[0] -= at_left;
        Ok(Self { a, b, coeffs, int_coeffs: ic, offset: 0.0 })
    }

    fn local(&self, x: f64) -> f64 {
        ((2.0 * x - self.a - self.b) / (self.b - self.a)).clamp(-1.0, 1.0)
    }

    fn eval(&self, x: f64) -> f64 {
        clenshaw(&self.coeffs, self.local(x))
    }

    fn running_integral(&self, x: f64) -> f64 {
        self.offset + clenshaw(&self.int_coeffs, self.local(x))
    }

    fn total(&self) -> f64 {
        clenshaw(&self.int_coeffs, 1.0)
    }
}

/// Piecewise Chebyshev interpolant on contiguous panels, with an exact
/// cumulative integral measured from the left end of the domain.
#[derive(Debug, Clone)]
pub struct PiecewiseChebyshev {
    panels: Vec<ChebPanel>,
}

impl PiecewiseChebyshev {
    /// Interpolate `f` on the panels delimited by `breaks` (strictly increasing).
    pub fn build<F>(mut f: F, breaks: &[f64], degree: usize) -> Result<Self>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        assert!(breaks.len() >= 2 && degree >= 2);
        let mut panels = Vec::with_capacity(breaks.len() - 1);
        let mut offset = 0.0;
        for w in breaks.windows(2) {
            let mut p = ChebPanel::build(&mut f, w[0], w[1], degree)?;
            p.offset = offset;
            offset += p.total();
            panels.push(p);
        }
        Ok(Self { panels })
    }

    /// Append a panel on `[end, b]`.
    pub fn extend<F>(&mut self, mut f: F, b: f64, degree: usize) -> Result<()>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let last = self.panels.last().expect("interpolant has at least one panel");
        let a = last.b;
        let offset = last.offset + last.total();
        let mut p = ChebPanel::build(&mut f, a, b, degree)?;
        p.offset = offset;
        self.panels.push(p);
        Ok(())
    }

    /// Panel boundaries, from start to end.
    pub fn breaks(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.panels.iter().map(|p| p.a).collect();
        b.push(self.end());
        b
    }

    pub fn panel_count(&self) -> usize {
        self.panels.len()
    }

    pub fn start(&self) -> f64 {
        self.panels[0].a
    }

    pub fn end(&self) -> f64 {
        self.panels[self.panels.len() - 1].b
    }

    fn panel(&self, x: f64) -> &ChebPanel {
        let idx = self.panels.partition_point(|p| p.b < x);
        &self.panels[idx.min(self.panels.len() - 1)]
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.panel(x).eval(x)
    }

    /// `∫_{start}^{x} f`.
    pub fn integral(&self, x: f64) -> f64 {
        self.panel(x).running_integral(x)
    }

    pub fn total(&self) -> f64 {
        self.integral(self.end())
    }
}

/// Ridders' polynomial-extrapolated central difference.  Returns the
/// derivative and an error estimate.
pub fn ridders_derivative<F>(mut f: F, x: f64, h0: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    const NTAB: usize = 10;
    const CON: f64 = 1.4;
    const CON2: f64 = CON * CON;
    let mut a = [[0.0f64; NTAB]; NTAB];
    let mut h = h0;
    a[0][0] = (f(x + h)? - f(x - h)?) / (2.0 * h);
    let mut best = a[0][0];
    let mut err = f64::INFINITY;
    for i in 1..NTAB {
        h /= CON;
        a[0][i] = (f(x + h)? - f(x - h)?) / (2.0 * h);
        let mut fac = CON2;
        for j in 1..=i {
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
            fac *= CON2;
            let e = (a[j][i] - a[j - 1][i]).abs().max((a[j][i] - a[j - 1][i - 1]).abs());
            if e <= err {
                err = e;
                best = a[j][i];
            }
        }
        if (a[i][i] - a[i - 1][i - 1]).abs() >= 2.0 * err {
            break;
        }
    }
    Ok((best, err))
}
