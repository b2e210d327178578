//! Mean-field lattice gas on a periodic 1-D chain of sites.
//!
//! Each site is empty with probability `1 − N_x` or holds one particle whose
//! momentum falls in one of `M` symmetric bins with probability `N_x p_x(j)`.
//! A step moves particles along empty stretches with pairwise exchanges that
//! are bistochastic on the two-site space, then rethermalises every site to
//! the maximum-entropy distribution with the same mass, momentum and energy.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::thermostatics::entropy;

/// Maximum iterations of the moment fit.
pub const THERMALISE_MAX_ITER: usize = 200;
/// Largest allowed moment residual of the fit, in units of the thermal spread.
pub const THERMALISE_TOL: f64 = 1e-12;

/// Pair weights below this are dropped.
const WEIGHT_FLOOR: f64 = 1e-20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeParams {
    pub sites: usize,
    /// Number of momentum bins `M`.
    pub bins: usize,
    /// Bin spacing; bin `j` sits at `(j − (M−1)/2) Δk`.
    pub dk: f64,
    pub m: f64,
    pub k_b: f64,
    pub a: f64,
}

impl LatticeParams {
    pub fn new(sites: usize, bins: usize, dk: f64, m: f64, k_b: f64, a: f64) -> Result<Self> {
        if sites < 3 {
            return Err(Error::Domain(format!("need at least 3 sites, got {sites}")));
        }
        if bins < 3 {
            return Err(Error::Domain(format!("need at least 3 momentum bins, got {bins}")));
        }
        for (name, v) in [("dk", dk), ("m", m), ("k_B", k_b), ("a", a)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} must be finite and positive, got {v}")));
            }
        }
        Ok(Self { sites, bins, dk, m, k_b, a })
    }

    /// Bins spanning `±half_width` thermal momenta `(m k_B Θ)^{1/2}` at `theta`.
    pub fn covering(sites: usize, bins: usize, theta: f64, half_width: f64, m: f64, k_b: f64, a: f64) -> Result<Self> {
        let dk = 2.0 * half_width * (m * k_b * theta).sqrt() / (bins as f64 - 1.0);
        Self::new(sites, bins, dk, m, k_b, a)
    }

    pub fn momentum(&self, j: usize) -> f64 {
        (j as f64 - 0.5 * (self.bins as f64 - 1.0)) * self.dk
    }

    pub fn momenta(&self) -> Vec<f64> {
        (0..self.bins).map(|j| self.momentum(j)).collect()
    }

    fn wrap(&self, x: isize) -> usize {
        x.rem_euclid(self.sites as isize) as usize
    }
}

/// Occupations and per-site momentum distributions at time `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeGasState {
    pub params: LatticeParams,
    pub t: f64,
    pub occupation: Vec<f64>,
    /// `momentum[x][j] = p_x(j)`, summing to one over `j`.
    pub momentum: Vec<Vec<f64>>,
}

/// Occupation, velocity and temperature of one site.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SiteFields {
    pub n: f64,
    pub u: f64,
    pub theta: f64,
}

impl LatticeGasState {
    pub fn new(params: LatticeParams, t: f64, occupation: Vec<f64>, momentum: Vec<Vec<f64>>) -> Result<Self> {
        if occupation.len() != params.sites || momentum.len() != params.sites {
            return Err(Error::Domain("site arrays do not match the lattice size".into()));
        }
        for (x, (&n, p)) in occupation.iter().zip(&momentum).enumerate() {
            if !(n > 0.0 && n < 1.0) {
                return Err(Error::Domain(format!("occupation at site {x} is {n}, outside (0, 1)")));
            }
            if p.len() != params.bins || p.iter().any(|&v| !(v >= 0.0)) {
                return Err(Error::Domain(format!("momentum distribution at site {x} is malformed")));
            }
            let s: f64 = p.iter().sum();
            if (s - 1.0).abs() > 1e-12 {
                return Err(Error::Domain(format!("momentum distribution at site {x} sums to {s}")));
            }
        }
        Ok(Self { params, t, occupation, momentum })
    }

    /// Thermalised sites with the given occupation, velocity and temperature.
    pub fn from_fields(params: LatticeParams, t: f64, fields: &[SiteFields]) -> Result<Self> {
        if fields.len() != params.sites {
            return Err(Error::Domain("field profile does not match the lattice size".into()));
        }
        let mut momentum = Vec::with_capacity(params.sites);
        for f in fields {
            if !(f.n > 0.0 && f.n < 1.0) {
                return Err(Error::Domain(format!("occupation {} outside (0, 1)", f.n)));
            }
            let pi = f.n * params.m * f.u;
            let e = f.n * (0.5 * params.m * f.u * f.u + 0.5 * params.k_b * f.theta);
            momentum.push(thermalise(&params, f.n, pi, e)?);
        }
        let occupation = fields.iter().map(|f| f.n).collect();
        Self::new(params, t, occupation, momentum)
    }

    pub fn uniform(params: LatticeParams, n: f64, u: f64, theta: f64) -> Result<Self> {
        Self::from_fields(params, 0.0, &vec![SiteFields { n, u, theta }; params.sites])
    }

    /// `(N, Π, E)` at site `x`: occupation, momentum `N⟨k⟩` and energy `N⟨k²/2m⟩`.
    pub fn site_moments(&self, x: usize) -> [f64; 3] {
        let n = self.occupation[x];
        let (mut m1, mut m2) = (0.0, 0.0);
        for (j, &p) in self.momentum[x].iter().enumerate() {
            let k = self.params.momentum(j);
            m1 += p * k;
            m2 += p * k * k;
        }
        [n, n * m1, n * m2 / (2.0 * self.params.m)]
    }

    pub fn site_fields(&self, x: usize) -> SiteFields {
        let [n, pi, e] = self.site_moments(x);
        let m = self.params.m;
        let mean = pi / n;
        let var = 2.0 * m * e / n - mean * mean;
        SiteFields { n, u: mean / m, theta: var / (m * self.params.k_b) }
    }

    pub fn fields(&self) -> Vec<SiteFields> {
        (0..self.params.sites).map(|x| self.site_fields(x)).collect()
    }

    /// Lattice totals of the three slow variables.
    pub fn totals(&self) -> [f64; 3] {
        let mut t = [0.0; 3];
        for x in 0..self.params.sites {
            let s = self.site_moments(x);
            for i in 0..3 {
                t[i] += s[i];
            }
        }
        t
    }

    /// Entropy of site `x`, including the empty state.
    pub fn site_entropy(&self, x: usize) -> Result<f64> {
        let n = self.occupation[x];
        let mut probs = Vec::with_capacity(self.params.bins + 1);
        probs.push(1.0 - n);
        probs.extend(self.momentum[x].iter().map(|p| n * p));
        entropy(&probs, self.params.k_b)
    }

    /// Sum of the site entropies, the entropy of the product state.
    pub fn entropy_total(&self) -> Result<f64> {
        (0..self.params.sites).map(|x| self.site_entropy(x)).sum()
    }
}

/// Maximum-entropy distribution over the bins with occupation-normalised
/// moments `Π/N` and `E/N`: `p_j ∝ exp(−α k_j − β k_j²)`.
///
/// The dual problem is solved by damped Newton in the standardised variable
/// `(k − ⟨k⟩)/s`.  Fails when the thermal energy is not positive or the
/// bins cannot carry the requested spread.
pub fn thermalise(params: &LatticeParams, n: f64, pi: f64, e: f64) -> Result<Vec<f64>> {
    if !(n > 0.0) {
        return Err(Error::DegenerateMoments(format!("occupation {n} is not positive")));
    }
    let m = params.m;
    let thermal = e - pi * pi / (2.0 * m * n);
    if !(thermal > 0.0) {
        return Err(Error::DegenerateMoments(format!("thermal energy {thermal:e} is not positive")));
    }
    let mean = pi / n;
    let sd = (2.0 * m * thermal / n).sqrt();
    let ks = params.momenta();
    let (lo, hi) = (ks[0], ks[ks.len() - 1]);
    if !(mean > lo && mean < hi) {
        return Err(Error::DegenerateMoments(format!("mean momentum {mean} outside the bins [{lo}, {hi}]")));
    }
    let y: Vec<f64> = ks.iter().map(|k| (k - mean) / sd).collect();

    // Dual objective log Σ exp(−a y − b y²) + b, minimised where ⟨y⟩ = 0 and ⟨y²⟩ = 1.
    let eval = |a: f64, b: f64| -> (f64, Vec<f64>) {
        let expo: Vec<f64> = y.iter().map(|&v| -a * v - b * v * v).collect();
        let top = expo.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = expo.iter().map(|&v| (v - top).exp()).collect();
        let z: f64 = w.iter().sum();
        (z.ln() + top + b, w.into_iter().map(|v| v / z).collect())
    };
    let moments = |p: &[f64]| -> [f64; 4] {
        let mut s = [0.0; 4];
        for (pj, yj) in p.iter().zip(&y) {
            let mut t = *pj;
            for v in s.iter_mut() {
                t *= yj;
                *v += t;
            }
        }
        s
    };

    let (mut a, mut b) = (0.0, 0.5);
    let (mut phi, mut p) = eval(a, b);
    for _ in 0..THERMALISE_MAX_ITER {
        let [m1, m2, m3, m4] = moments(&p);
        let g = [-m1, 1.0 - m2];
        let resid = g[0].abs().max(g[1].abs());
        // Covariance of (y, y²).
        let h11 = m2 - m1 * m1;
        let h12 = m3 - m1 * m2;
        let h22 = m4 - m2 * m2;
        let det = h11 * h22 - h12 * h12;
        if resid <= 1e-15 || !(det > 0.0) {
            break;
        }
        // The dual gradient is (target − model) with a minus sign: ∂φ/∂a = −⟨y⟩, ∂φ/∂b = 1 − ⟨y²⟩.
        let da = -(h22 * (-m1) - h12 * (1.0 - m2)) / det;
        let db = -(h11 * (1.0 - m2) - h12 * (-m1)) / det;
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let (na, nb) = (a + step * da, b + step * db);
            let (nphi, np) = eval(na, nb);
            if nphi <= phi + 1e-15 * phi.abs().max(1.0) {
                a = na;
                b = nb;
                phi = nphi;
                p = np;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let [m1, m2, _, _] = moments(&p);
    let resid = m1.abs().max((m2 - 1.0).abs());
    if !(resid <= THERMALISE_TOL) {
        return Err(Error::DegenerateMoments(format!(
            "bins cannot match mean {mean} and spread {sd} (residual {resid:e})"
        )));
    }
    Ok(p)
}

/// Flight-length distribution of one momentum bin: a particle at `x` flies
/// over empty sites and stops `s` sites on when the next one is occupied.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HopKernel {
    pub bin: usize,
    /// `+1` or `−1`; `0` for a bin at rest.
    pub direction: i8,
    /// `hops[x][s] = ∏_{s′=1}^{s}(1 − N_{x+s′}) N_{x+s+1}`.
    pub hops: Vec<Vec<f64>>,
    /// Probability that every site around the ring is empty.
    pub stay: Vec<f64>,
}

impl HopKernel {
    pub fn row_total(&self, x: usize) -> f64 {
        self.hops[x].iter().sum::<f64>() + self.stay[x]
    }
}

/// Hop kernel of `bin` with occupations read at the current time.
pub fn build_hop_kernel(state: &LatticeGasState, bin: usize) -> HopKernel {
    let par = &state.params;
    let k = par.momentum(bin);
    let direction: i8 = if k > 0.0 {
        1
    } else if k < 0.0 {
        -1
    } else {
        0
    };
    let sites = par.sites;
    let rows: Vec<(Vec<f64>, f64)> = (0..sites)
        .into_par_iter()
        .map(|x| {
            if direction == 0 {
                return (vec![1.0], 0.0);
            }
            let d = direction as isize;
            let mut hops = Vec::new();
            let mut empty = 1.0;
            for s in 0..sites - 1 {
                let next = state.occupation[par.wrap(x as isize + d * (s as isize + 1))];
                hops.push(empty * next);
                empty *= 1.0 - next;
            }
            (hops, empty)
        })
        .collect();
    let (hops, stay) = rows.into_iter().unzip();
    HopKernel { bin, direction, hops, stay }
}

/// One pairwise exchange: sites `x` and `x + d`, with `π_j = base·|k_j|`.
#[derive(Debug, Clone, Copy)]
struct PairWeight {
    x: usize,
    d: usize,
    base: f64,
}

/// Exchange weights for every pair of sites, from occupations at the start of the step.
///
/// A bin-`j` particle and a hole at distance `d` swap with probability
/// `dt |k_j| /(m a d) · ∏_{between}(1 − N) · ½(N_{y+1} + N_{x−1})`:
/// the flight rate over `d` sites times the emptiness of the stretch and the
/// mean of the two stopping factors, which makes the weight even in `k`.
fn pair_weights(state: &LatticeGasState, dt: f64) -> Vec<PairWeight> {
    let par = &state.params;
    let l = par.sites;
    let dmax = (l - 1) / 2;
    let n = &state.occupation;
    let rows: Vec<Vec<PairWeight>> = (0..l)
        .into_par_iter()
        .map(|x| {
            let mut out = Vec::new();
            let mut between = 1.0;
            for d in 1..=dmax {
                if d > 1 {
                    between *= 1.0 - n[par.wrap((x + d - 1) as isize)];
                }
                if between < WEIGHT_FLOOR {
                    break;
                }
                let stop = 0.5 * (n[par.wrap((x + d + 1) as isize)] + n[par.wrap(x as isize - 1)]);
                let base = dt / (par.m * par.a * d as f64) * between * stop;
                out.push(PairWeight { x, d, base });
            }
            out
        })
        .collect();
    let mut all: Vec<PairWeight> = rows.into_iter().flatten().collect();
    all.sort_by_key(|w| (w.d, w.x));
    all
}

/// Largest bin-`j` exchange probability for a step of `dt`.
fn largest_weight(state: &LatticeGasState, weights: &[PairWeight]) -> f64 {
    let kmax = state.params.momentum(state.params.bins - 1).abs();
    weights.iter().map(|w| w.base).fold(0.0, f64::max) * kmax
}

/// Transition matrix of the pair `(x, y)` on the two-site space.  Index
/// `0` is the empty state and `1 + j` bin `j`; pair states are `s_x (M+1) + s_y`.
pub fn two_point_operator(state: &LatticeGasState, x: usize, y: usize, dt: f64) -> Result<Vec<Vec<f64>>> {
    let par = &state.params;
    let l = par.sites;
    if x >= l || y >= l || x == y {
        return Err(Error::Domain(format!("({x}, {y}) is not a pair of distinct sites")));
    }
    let fwd = (y + l - x) % l;
    let (lo, d) = if fwd <= (l - 1) / 2 { (x, fwd) } else { (y, l - fwd) };
    let base = pair_weights(state, dt).into_iter().find(|w| w.x == lo && w.d == d).map_or(0.0, |w| w.base);
    let s = par.bins + 1;
    let mut t = vec![vec![0.0; s * s]; s * s];
    for (i, row) in t.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for j in 0..par.bins {
        let pi = base * par.momentum(j).abs();
        if pi > 1.0 {
            let limit = dt / pi;
            return Err(Error::Cfl { dt, limit });
        }
        let a = (1 + j) * s; // bin j at x, y empty
        let b = 1 + j; // x empty, bin j at y
        t[a][a] = 1.0 - pi;
        t[b][b] = 1.0 - pi;
        t[a][b] = pi;
        t[b][a] = pi;
    }
    Ok(t)
}

/// Order in which the pair exchanges of a step are applied.
#[derive(Debug, Clone)]
pub enum UpdateOrder {
    /// By distance, then by site.
    Sweep,
    /// A fresh random permutation each step.
    Random(ChaCha8Rng),
}

impl UpdateOrder {
    pub fn seeded(seed: u64) -> Self {
        UpdateOrder::Random(ChaCha8Rng::seed_from_u64(seed))
    }
}

/// Advance by `dt` with the pair exchanges in `order`, then rethermalise.
pub fn chain_step_with(state: &LatticeGasState, dt: f64, order: &mut UpdateOrder) -> Result<LatticeGasState> {
    let par = state.params;
    let mut weights = pair_weights(state, dt);
    let worst = largest_weight(state, &weights);
    if !(dt > 0.0) || worst > 1.0 {
        return Err(Error::Cfl { dt, limit: dt / worst.max(f64::MIN_POSITIVE) });
    }
    if let UpdateOrder::Random(rng) = order {
        weights.shuffle(rng);
    }
    let ks: Vec<f64> = par.momenta().iter().map(|k| k.abs()).collect();
    let mut f: Vec<Vec<f64>> =
        state.momentum.iter().zip(&state.occupation).map(|(p, &n)| p.iter().map(|v| n * v).collect()).collect();
    let mut h: Vec<f64> = state.occupation.iter().map(|n| 1.0 - n).collect();
    let mut flux = vec![0.0; par.bins];
    for w in &weights {
        let x = w.x;
        let y = (w.x + w.d) % par.sites;
        let mut net = 0.0;
        for j in 0..par.bins {
            let pi = w.base * ks[j];
            flux[j] = pi * (f[x][j] * h[y] - h[x] * f[y][j]);
            net += flux[j];
        }
        for j in 0..par.bins {
            f[x][j] -= flux[j];
            f[y][j] += flux[j];
        }
        h[x] += net;
        h[y] -= net;
    }
    let mut occupation = Vec::with_capacity(par.sites);
    let mut momentum = Vec::with_capacity(par.sites);
    for (x, fx) in f.iter().enumerate() {
        let mut mom = [0.0; 3];
        for (j, &v) in fx.iter().enumerate() {
            let k = par.momentum(j);
            mom[0] += v;
            mom[1] += v * k;
            mom[2] += v * k * k / (2.0 * par.m);
        }
        let n = mom[0];
        if !(n > 0.0 && n < 1.0) {
            return Err(Error::Positivity { cell: x, rho: n, theta: f64::NAN });
        }
        occupation.push(n);
        momentum.push(thermalise(&par, n, mom[1], mom[2])?);
    }
    Ok(LatticeGasState { params: par, t: state.t + dt, occupation, momentum })
}

/// One step with the deterministic sweep order.
pub fn chain_step(state: &LatticeGasState, dt: f64) -> Result<LatticeGasState> {
    chain_step_with(state, dt, &mut UpdateOrder::Sweep)
}

/// Fields and entropy after some number of steps.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeSample {
    pub t: f64,
    pub fields: Vec<SiteFields>,
    pub entropy_total: f64,
}

/// Gaussian temperature bump on a uniform background.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BumpExperiment {
    pub n: f64,
    pub theta: f64,
    /// Peak relative excess `δΘ/Θ`; at most 0.1.
    pub amplitude: f64,
    /// Standard deviation of the bump in sites.
    pub width: f64,
    pub dt: f64,
    pub steps: usize,
    pub record_every: usize,
}

impl BumpExperiment {
    /// Initial fields on the lattice, bump centred mid-chain.
    pub fn initial_fields(&self, sites: usize) -> Vec<SiteFields> {
        let c = 0.5 * sites as f64;
        (0..sites)
            .map(|x| {
                let r = (x as f64 + 0.5 - c) / self.width;
                SiteFields { n: self.n, u: 0.0, theta: self.theta * (1.0 + self.amplitude * (-0.5 * r * r).exp()) }
            })
            .collect()
    }
}

/// Evolve a temperature bump and record the fields every `record_every` steps.
pub fn relax_experiment(
    params: &LatticeParams,
    exp: &BumpExperiment,
    order: &mut UpdateOrder,
) -> Result<Vec<LatticeSample>> {
    if !(exp.amplitude.abs() <= 0.1) {
        return Err(Error::Domain(format!("bump amplitude {} exceeds 10% of the background", exp.amplitude)));
    }
    if exp.record_every == 0 {
        return Err(Error::Domain("record_every must be at least 1".into()));
    }
    let mut s = LatticeGasState::from_fields(*params, 0.0, &exp.initial_fields(params.sites))?;
    let mut out = vec![LatticeSample { t: s.t, fields: s.fields(), entropy_total: s.entropy_total()? }];
    for i in 1..=exp.steps {
        s = chain_step_with(&s, exp.dt, order)?;
        if i % exp.record_every == 0 || i == exp.steps {
            out.push(LatticeSample { t: s.t, fields: s.fields(), entropy_total: s.entropy_total()? });
        }
    }
    Ok(out)
}

/// Least-squares slope of `−ln(excess)` against time.
pub fn excess_decay_rate(times: &[f64], excess: &[f64]) -> Result<f64> {
    if times.len() != excess.len() || times.len() < 2 {
        return Err(Error::Domain("need at least two matching samples".into()));
    }
    if excess.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::Domain("excess must stay positive to take its logarithm".into()));
    }
    let n = times.len() as f64;
    let tm = times.iter().sum::<f64>() / n;
    let lm = excess.iter().map(|e| e.ln()).sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (t, e) in times.iter().zip(excess) {
        num += (t - tm) * (e.ln() - lm);
        den += (t - tm) * (t - tm);
    }
    Ok(-num / den)
}

pub const CSV_HEADER: &str = "t,x,N,u,theta,entropy_total";

/// Write samples as CSV rows `t,x,N,u,theta,entropy_total`, one per site,
/// after `# ` provenance lines.
pub fn write_series_csv<W: Write>(w: &mut W, samples: &[LatticeSample], a: f64, provenance: &[String]) -> std::io::Result<()> {
    use crate::fluid::io::fmt_f64;
    for line in provenance {
        writeln!(w, "# {line}")?;
    }
    writeln!(w, "{CSV_HEADER}")?;
    for s in samples {
        for (x, f) in s.fields.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                fmt_f64(s.t),
                fmt_f64((x as f64 + 0.5) * a),
                fmt_f64(f.n),
                fmt_f64(f.u),
                fmt_f64(f.theta),
                fmt_f64(s.entropy_total)
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> LatticeParams {
        LatticeParams::covering(24, 16, 1.0, 5.0, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn thermalise_matches_moments() {
        let p = params();
        let (n, u, th) = (0.4, 0.3, 1.2);
        let pi = n * u;
        let e = n * (0.5 * u * u + 0.5 * th);
        let dist = thermalise(&p, n, pi, e).unwrap();
        let m1: f64 = dist.iter().enumerate().map(|(j, q)| q * p.momentum(j)).sum();
        let m2: f64 = dist.iter().enumerate().map(|(j, q)| q * p.momentum(j).powi(2)).sum();
        assert!((n * m1 - pi).abs() < 1e-12);
        assert!((n * m2 / 2.0 - e).abs() < 1e-12);
    }

    #[test]
    fn cold_site_is_degenerate() {
        let p = params();
        assert!(matches!(thermalise(&p, 0.5, 0.5, 0.25), Err(Error::DegenerateMoments(_))));
    }

    #[test]
    fn kernel_rows_sum_to_one() {
        let p = params();
        let s = LatticeGasState::uniform(p, 0.3, 0.0, 1.0).unwrap();
        let k = build_hop_kernel(&s, 12);
        assert_eq!(k.direction, 1);
        for x in 0..p.sites {
            assert!((k.row_total(x) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn oversized_step_is_rejected() {
        let p = params();
        let s = LatticeGasState::uniform(p, 0.5, 0.0, 1.0).unwrap();
        assert!(matches!(chain_step(&s, 10.0), Err(Error::Cfl { .. })));
    }

    #[test]
    fn decay_rate_of_exponential() {
        let t: Vec<f64> = (0..10).map(|i| i as f64 * 0.1).collect();
        let e: Vec<f64> = t.iter().map(|t| 2.0 * (-3.0 * t).exp()).collect();
        assert!((excess_decay_rate(&t, &e).unwrap() - 3.0).abs() < 1e-12);
    }
}
