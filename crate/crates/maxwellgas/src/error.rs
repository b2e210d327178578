use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain where a formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature gave up before meeting its tolerance.
    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e}, tolerance {tolerance:e}")]
    Quadrature {
        estimate: f64,
        error: f64,
        tolerance: f64,
    },

    /// The truncated free-time density does not integrate to one.
    #[error("free-time density integrates to {integral} (deviation {deviation:e} exceeds {tolerance:e})")]
    Normalization {
        integral: f64,
        deviation: f64,
        tolerance: f64,
    },

    /// A field trajectory does not cover the lookback window a characteristic needs.
    #[error("trajectory covers [{have_start}, {have_end}] but the characteristic needs [{need_start}, {need_end}]")]
    WindowTooShort {
        need_start: f64,
        need_end: f64,
        have_start: f64,
        have_end: f64,
    },

    /// Density or temperature went non-positive in a cell.
    #[error("positivity violated in cell {cell}: rho = {rho:e}, theta = {theta:e}")]
    Positivity { cell: usize, rho: f64, theta: f64 },

    /// The requested time step exceeds the explicit stability limit.
    #[error("time step {dt:e} exceeds the stability limit {limit:e}")]
    Cfl { dt: f64, limit: f64 },

    /// Site moments cannot be matched by any distribution over the momentum bins.
    #[error("degenerate moments: {0}")]
    DegenerateMoments(String),
}

pub type Result<T> = std::result::Result<T, Error>;
