//! Free flight and thermalisation along straight characteristics.
//!
//! A particle with momentum `k` at `(x, t₀)` moves on the line
//! `s ↦ (x + k s/m, t₀ + s)`.  The collision rate `C` along that line fixes
//! the survival probability `W`, the free-time density `w = W C`, and through
//! them the non-local relation between the phase density `N p` of all
//! particles and the Maxwellian phase density `N̄ p̄` of freshly thermalised ones.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fluid::{short_euler_rhs, FieldState};
use crate::quadrature::{ridders_derivative, try_integrate, try_integrate_breaks, PiecewiseChebyshev, Tolerance};
use crate::state::{norm, KineticConstants, LocalGradients, MacroState, Vec3};
use crate::thermostatics::maxwell_density;
use crate::transport::{collision_f_scaled_fast, TransportTable};

/// Thermalised fields as a function of position and time.
pub trait FieldSource: Send + Sync {
    fn sample(&self, x: &Vec3, t: f64) -> Result<MacroState>;

    /// Time interval on which `sample` is defined; `None` means all times.
    fn time_range(&self) -> Option<(f64, f64)> {
        None
    }
}

/// The same state everywhere and always.
#[derive(Debug, Clone, Copy)]
pub struct UniformField(pub MacroState);

impl FieldSource for UniformField {
    fn sample(&self, _x: &Vec3, _t: f64) -> Result<MacroState> {
        Ok(self.0)
    }
}

/// Fields given by a closure of `(x, t)`.
pub struct AnalyticField<F>(pub F);

impl<F> FieldSource for AnalyticField<F>
where
    F: Fn(&Vec3, f64) -> MacroState + Send + Sync,
{
    fn sample(&self, x: &Vec3, t: f64) -> Result<MacroState> {
        let s = (self.0)(x, t);
        s.check()?;
        Ok(s)
    }
}

/// Grid snapshots at increasing times, interpolated linearly in time and
/// multilinearly in space.
#[derive(Debug, Clone)]
pub struct FieldTrajectory {
    snapshots: Vec<FieldState>,
}

impl FieldTrajectory {
    pub fn new(snapshots: Vec<FieldState>) -> Result<Self> {
        if snapshots.is_empty() {
            return Err(Error::Domain("a trajectory needs at least one snapshot".into()));
        }
        for w in snapshots.windows(2) {
            if !(w[1].t > w[0].t) {
                return Err(Error::Domain(format!("snapshot times {} and {} are not increasing", w[0].t, w[1].t)));
            }
            if w[1].grid != w[0].grid {
                return Err(Error::Domain("snapshots must share one grid".into()));
            }
        }
        Ok(Self { snapshots })
    }

    pub fn snapshots(&self) -> &[FieldState] {
        &self.snapshots
    }

    /// Longest mean free time of a particle at rest relative to the gas, over
    /// every cell of every snapshot.
    pub fn max_mean_free_time(&self, k: &KineticConstants) -> f64 {
        let f0 = 0.25; // F(κ) e^{κ²/2} is largest at κ = 0.
        let mut worst: f64 = 0.0;
        for s in &self.snapshots {
            for c in 0..s.grid.len() {
                let t = (2.0 * PI).sqrt() * k.m * f0 / (k.sigma * s.rho[c] * k.thermal_speed(s.theta[c]));
                worst = worst.max(t);
            }
        }
        worst
    }

    /// Check that the snapshots reach `window_factor` mean free times back from `t0`.
    pub fn check_lookback(&self, t0: f64, window_factor: f64, k: &KineticConstants) -> Result<()> {
        let need = window_factor * self.max_mean_free_time(k);
        let (a, b) = self.time_range().expect("trajectories are bounded");
        if a > t0 - need || b < t0 {
            return Err(Error::WindowTooShort { need_start: t0 - need, need_end: t0, have_start: a, have_end: b });
        }
        Ok(())
    }
}

impl FieldSource for FieldTrajectory {
    fn sample(&self, x: &Vec3, t: f64) -> Result<MacroState> {
        let (a, b) = self.time_range().expect("trajectories are bounded");
        let slack = 1e-12 * (b - a).abs().max(1.0);
        if t < a - slack || t > b + slack {
            return Err(Error::WindowTooShort { need_start: t, need_end: t, have_start: a, have_end: b });
        }
        let n = self.snapshots.len();
        if n == 1 {
            return Ok(self.snapshots[0].interpolate(x));
        }
        let i = self.snapshots.partition_point(|s| s.t <= t).clamp(1, n - 1);
        let (s0, s1) = (&self.snapshots[i - 1], &self.snapshots[i]);
        let w = ((t - s0.t) / (s1.t - s0.t)).clamp(0.0, 1.0);
        let p = s0.interpolate(x);
        let q = s1.interpolate(x);
        Ok(MacroState::new(
            (1.0 - w) * p.rho + w * q.rho,
            [
                (1.0 - w) * p.u[0] + w * q.u[0],
                (1.0 - w) * p.u[1] + w * q.u[1],
                (1.0 - w) * p.u[2] + w * q.u[2],
            ],
            (1.0 - w) * p.theta + w * q.theta,
        ))
    }

    fn time_range(&self) -> Option<(f64, f64)> {
        Some((self.snapshots[0].t, self.snapshots[self.snapshots.len() - 1].t))
    }
}

/// Which time the collision rate is read at during a flight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TimeSampling {
    /// At the true time of each point of the flight; needs fields ahead of `t₀`.
    Exact,
    /// Frozen at the time the flight started.  The change is second order in
    /// `t_ℓ` and only past fields are needed.
    LaunchTime,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KineticOptions {
    pub sampling: TimeSampling,
    /// Flights are cut once the integrated rate reaches this value, leaving
    /// a remainder of `e^{−window_factor}`.
    pub window_factor: f64,
    /// Allowed deviation of `∫ w dt` from one.
    pub normalization_tol: f64,
    pub tolerance: Tolerance,
    pub panel_degree: usize,
    /// Integrated rate covered by one interpolation panel.
    pub panel_span: f64,
    /// Initial step of the derivative along the characteristic.
    pub derivative_step: f64,
}

impl Default for KineticOptions {
    fn default() -> Self {
        Self {
            sampling: TimeSampling::LaunchTime,
            window_factor: 16.0,
            normalization_tol: 1e-6,
            tolerance: Tolerance::new(1e-300, 1e-11),
            panel_degree: 24,
            panel_span: 1.0,
            derivative_step: 0.05,
        }
    }
}

/// Summary of the free-time density of one characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FreeTimeStats {
    /// `∫₀^T w dt` up to the truncation horizon.
    pub integral: f64,
    /// `∫₀^T t w dt`, the mean relaxation time.
    pub mean: f64,
    pub horizon: f64,
    /// `W(T)`, the probability left beyond the horizon.
    pub remainder: f64,
}

/// Collision-layer calculations for given constants and numerical options.
#[derive(Debug, Clone)]
pub struct Kinetics {
    pub constants: KineticConstants,
    pub options: KineticOptions,
}

const MAX_PANELS: usize = 100_000;

impl Kinetics {
    pub fn new(constants: KineticConstants) -> Self {
        Self { constants, options: KineticOptions::default() }
    }

    pub fn with_options(constants: KineticConstants, options: KineticOptions) -> Self {
        Self { constants, options }
    }

    /// Collision rate `C = (σ/m²) ∫ d³q |k − q| ρ p̄(q)` of a particle with
    /// momentum `momentum` in the Maxwellian gas `s`; equal to `1/t_ℓ`.
    pub fn collision_rate(&self, s: &MacroState, momentum: &Vec3) -> Result<f64> {
        s.check()?;
        let k = &self.constants;
        let kappa = norm(&k.peculiar_velocity(momentum, &s.u, s.theta));
        let c = k.thermal_speed(s.theta);
        Ok(k.sigma * s.rho * c / ((2.0 * PI).sqrt() * k.m * collision_f_scaled_fast(kappa)?))
    }

    /// Thermalised phase density `N̄ p̄` at `momentum`.
    pub fn phase_density(&self, s: &MacroState, momentum: &Vec3) -> f64 {
        let k = &self.constants;
        s.rho * k.a.powi(3) / k.m * maxwell_density(s, momentum, k)
    }

    fn position(&self, x: &Vec3, momentum: &Vec3, s: f64) -> Vec3 {
        let m = self.constants.m;
        [x[0] + momentum[0] * s / m, x[1] + momentum[1] * s / m, x[2] + momentum[2] * s / m]
    }

    fn rate_on_line(&self, src: &dyn FieldSource, x: &Vec3, momentum: &Vec3, s: f64, t: f64) -> Result<f64> {
        let state = src.sample(&self.position(x, momentum, s), t)?;
        self.collision_rate(&state, momentum)
    }

    fn flight_time(&self, t0: f64, s: f64) -> f64 {
        match self.options.sampling {
            TimeSampling::Exact => t0 + s,
            TimeSampling::LaunchTime => t0,
        }
    }

    /// Rate `t` after leaving `(x, t0)`.
    fn forward_rate(&self, src: &dyn FieldSource, x: &Vec3, momentum: &Vec3, t0: f64, t: f64) -> Result<f64> {
        self.rate_on_line(src, x, momentum, t, self.flight_time(t0, t))
    }

    /// Survival probability `W(t) = exp(−∫₀^t C dt₁)` of a flight leaving `(x, t0)`.
    pub fn survival(&self, src: &dyn FieldSource, x: &Vec3, momentum: &Vec3, t0: f64, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("flight time must be non-negative, got {t}")));
        }
        if t == 0.0 {
            return Ok(1.0);
        }
        let tol = Tolerance::new(1e-300, self.options.tolerance.rel);
        let lambda = try_integrate(|t1| self.forward_rate(src, x, momentum, t0, t1), 0.0, t, &tol)?.value;
        Ok((-lambda).exp())
    }

    /// Free-time density `w(t) = W(t) C(t)`.
    pub fn free_time_density(&self, src: &dyn FieldSource, x: &Vec3, momentum: &Vec3, t0: f64, t: f64) -> Result<f64> {
        Ok(self.survival(src, x, momentum, t0, t)? * self.forward_rate(src, x, momentum, t0, t)?)
    }

    /// Interpolate a rate on panels from `start` until the integral past
    /// `reference` reaches the window factor.
    fn rate_profile<R>(&self, mut rate: R, start: f64, reference: f64) -> Result<PiecewiseChebyshev>
    where
        R: FnMut(f64) -> Result<f64>,
    {
        let o = &self.options;
        let width = |r: f64| -> Result<f64> {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::Domain(format!("collision rate {r} along the characteristic")));
            }
            Ok(o.panel_span / r)
        };
        let first = width(rate(start)?)?;
        let mut prof = PiecewiseChebyshev::build(&mut rate, &[start, start + first], o.panel_degree)?;
        loop {
            let end = prof.end();
            if end >= reference && prof.total() - prof.integral(reference) >= o.window_factor {
                return Ok(prof);
            }
            if prof.panel_count() >= MAX_PANELS {
                return Err(Error::Domain("collision rate too small to close the flight window".into()));
            }
            let w = width(prof.eval(end))?;
            prof.extend(&mut rate, end + w, o.panel_degree)?;
        }
    }

    /// Integral and mean of the free-time density leaving `(x, t0)`.
    pub fn free_time_normalization(
        &self,
        src: &dyn FieldSource,
        x: &Vec3,
        momentum: &Vec3,
        t0: f64,
    ) -> Result<FreeTimeStats> {
        let prof = self.rate_profile(|t| self.forward_rate(src, x, momentum, t0, t), 0.0, 0.0)?;
        let breaks = prof.breaks();
        let tol = Tolerance::new(1e-300, self.options.tolerance.rel);
        let integral = try_integrate_breaks(
            |t| Ok(self.forward_rate(src, x, momentum, t0, t)? * (-prof.integral(t)).exp()),
            &breaks,
            &tol,
        )?
        .value;
        let mean = try_integrate_breaks(
            |t| Ok(t * self.forward_rate(src, x, momentum, t0, t)? * (-prof.integral(t)).exp()),
            &breaks,
            &tol,
        )?
        .value;
        let stats = FreeTimeStats { integral, mean, horizon: prof.end(), remainder: (-prof.total()).exp() };
        let deviation = (integral - 1.0).abs();
        if deviation > self.options.normalization_tol {
            return Err(Error::Normalization { integral, deviation, tolerance: self.options.normalization_tol });
        }
        Ok(stats)
    }

    /// Phase density `N p` at `(x, momentum, t0)` from the fundamental relation
    ///
    /// `N p = ∫₀^∞ dt′/t′ ∫₀^{t′} dt N̄p̄(x − k t/m, t₀ − t) w(x − k t/m, k, t₀ − t, t′)`.
    ///
    /// The order of integration is swapped: the outer variable is the launch
    /// time `t` before `t₀`, the inner one the remaining flight `ℓ = t′ − t`.
    /// The `1/t′` weight then only produces an integrable logarithm at `t → 0`,
    /// handled by geometric breakpoints.
    pub fn fundamental_relation(&self, src: &dyn FieldSource, x: &Vec3, momentum: &Vec3, t0: f64) -> Result<f64> {
        // Launch points behind (x, t0): the rate there is read at the launch time in both modes.
        let back = self.rate_profile(|tau| self.rate_on_line(src, x, momentum, -tau, t0 - tau), 0.0, 0.0)?;
        let t_back = back.end();
        let tau0 = 1.0 / back.eval(0.0);

        let shared = match self.options.sampling {
            TimeSampling::Exact => Some(self.rate_profile(
                |s| self.rate_on_line(src, x, momentum, s, t0 + s),
                -t_back,
                0.0,
            )?),
            TimeSampling::LaunchTime => None,
        };

        let tol = self.options.tolerance;
        let inner = |t: f64| -> Result<f64> {
            let built;
            let prof = match &shared {
                Some(p) => p,
                None => {
                    built = self.rate_profile(|s| self.rate_on_line(src, x, momentum, s, t0 - t), -t, 0.0)?;
                    &built
                }
            };
            let base = prof.integral(-t);
            let end = prof.end();
            let mut breaks = vec![0.0];
            let mut b = t.max(1e-300);
            while b < end.min(tau0) {
                breaks.push(b);
                b *= 2.0;
            }
            let mut b = tau0;
            while b < end {
                breaks.push(b);
                b += tau0;
            }
            breaks.push(end);
            breaks.dedup();
            let v = try_integrate_breaks(
                |l| Ok(prof.eval(l) * (-(prof.integral(l) - base)).exp() / (t + l)),
                &breaks,
                &tol,
            )?;
            Ok(v.value)
        };

        let mut breaks = vec![0.0];
        for j in (1..=12).rev() {
            breaks.push(tau0 * 10f64.powi(-j));
        }
        let mut b = 0.5 * tau0;
        while b < t_back {
            breaks.push(b);
            b += tau0;
        }
        breaks.push(t_back);
        let k = &self.constants;
        let outer = try_integrate_breaks(
            |t| {
                let launch = src.sample(&self.position(x, momentum, -t), t0 - t)?;
                Ok(self.phase_density(&launch, momentum) * inner(t)?)
            },
            &breaks,
            &tol,
        )?;
        let _ = k;
        Ok(outer.value)
    }

    /// First-order form `N̄p̄ − ½ (k·∂/m + ∂₀)(N̄p̄ t_ℓ)` at `(x, t0)`, the
    /// derivative taken along the characteristic by Ridders extrapolation.
    pub fn first_order_expansion(&self, src: &dyn FieldSource, x: &Vec3, momentum: &Vec3, t0: f64) -> Result<f64> {
        let here = src.sample(x, t0)?;
        let product = |s: f64| -> Result<f64> {
            let st = src.sample(&self.position(x, momentum, s), t0 + s)?;
            Ok(self.phase_density(&st, momentum) / self.collision_rate(&st, momentum)?)
        };
        let (d, _) = ridders_derivative(product, 0.0, self.options.derivative_step)?;
        Ok(self.phase_density(&here, momentum) - 0.5 * d)
    }
}

/// First-order differences `⟨χ⟩ − ⟨χ̄⟩` between the full and the thermalised
/// means: mass density, momentum density, energy density, and `ρΘ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaMoments {
    pub delta_rho: f64,
    pub delta_momentum: Vec3,
    pub delta_energy: f64,
    pub delta_rho_theta: f64,
}

/// Time derivatives `∂₀(ρ, u, Θ)` implied by the short Eulers.
pub fn euler_time_derivatives(g: &LocalGradients, k: &KineticConstants) -> (f64, Vec3, f64) {
    let d = short_euler_rhs(g, k);
    let adv = |grad: &Vec3| g.u[0] * grad[0] + g.u[1] * grad[1] + g.u[2] * grad[2];
    let dt_rho = d.d_rho - adv(&g.grad_rho);
    let dt_u = [d.d_u[0] - adv(&g.grad_u[0]), d.d_u[1] - adv(&g.grad_u[1]), d.d_u[2] - adv(&g.grad_u[2])];
    let dt_theta = d.d_theta - adv(&g.grad_theta);
    (dt_rho, dt_u, dt_theta)
}

/// `δρ`, `δϖ`, `a⁻³δE` and `δ(ρΘ)` at a point, to first order in `t_ℓ`.
///
/// Time derivatives of the thermalised fields are removed with the short
/// Eulers; every other derivative is expanded by the product rule.
pub fn delta_moments(g: &LocalGradients, table: &TransportTable, k: &KineticConstants) -> DeltaMoments {
    let (l1, l2) = (table.lambda1, table.lambda2);
    let (dt_rho, dt_u, dt_theta) = euler_time_derivatives(g, k);
    let _ = dt_rho;
    let th = g.theta;
    let r = th.powf(-0.5); // Θ^{-1/2}
    let sq = th.sqrt(); // Θ^{1/2}
    let dr = |d: f64| -0.5 * th.powf(-1.5) * d; // derivative of Θ^{-1/2}
    let dsq = |d: f64| 0.5 * r * d; // derivative of Θ^{1/2}
    let u = g.u;
    let div = g.divergence();
    let u2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    let grad_r: Vec3 = [dr(g.grad_theta[0]), dr(g.grad_theta[1]), dr(g.grad_theta[2])];
    let grad_sq: Vec3 = [dsq(g.grad_theta[0]), dsq(g.grad_theta[1]), dsq(g.grad_theta[2])];
    let dt_r = dr(dt_theta);
    let dt_sq = dsq(dt_theta);
    let u_dot = |v: &Vec3| u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    // ∂_j(u_i u_i) = 2 u_i ∂_j u_i
    let grad_u2: Vec3 = [
        2.0 * (u[0] * g.grad_u[0][0] + u[1] * g.grad_u[1][0] + u[2] * g.grad_u[2][0]),
        2.0 * (u[0] * g.grad_u[0][1] + u[1] * g.grad_u[1][1] + u[2] * g.grad_u[2][1]),
        2.0 * (u[0] * g.grad_u[0][2] + u[1] * g.grad_u[1][2] + u[2] * g.grad_u[2][2]),
    ];

    let delta_rho = -l1 * (u_dot(&grad_r) + r * div + dt_r);

    let mut delta_momentum = [0.0; 3];
    for i in 0..3 {
        // ∂_j(Θ^{-1/2} u_i u_j) and ∂₀(Θ^{-1/2} u_i)
        let flux = u_dot(&grad_r) * u[i] + r * u_dot(&g.grad_u[i]) + r * u[i] * div;
        let time = dt_r * u[i] + r * dt_u[i];
        delta_momentum[i] = -k.k_b / (3.0 * k.m) * l2 * grad_sq[i] - l1 * (flux + time);
    }

    let div_sq_u = u_dot(&grad_sq) + sq * div;
    let div_r_u_u2 = u_dot(&grad_r) * u2 + r * div * u2 + r * u_dot(&grad_u2);
    let dt_r_u2 = dt_r * u2 + r * 2.0 * u_dot(&dt_u);
    let delta_energy = -5.0 * k.k_b * l2 / (6.0 * k.m) * div_sq_u
        - 0.5 * l1 * div_r_u_u2
        - k.k_b * l2 / (2.0 * k.m) * dt_sq
        - 0.5 * l1 * dt_r_u2;

    let delta_rho_theta = -4.0 / 9.0 * l2 * sq * div;
    DeltaMoments { delta_rho, delta_momentum, delta_energy, delta_rho_theta }
}
