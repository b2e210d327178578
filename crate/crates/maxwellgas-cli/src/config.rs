//! Scenario configuration: strict JSON parsing and validation.
//!
//! Parsing runs in three passes.  The document is read into loosely typed
//! blocks whose fields are all optional and whose unrecognised keys are kept
//! aside.  Validation then walks every block and collects all problems at
//! once: unknown keys (with a spelling suggestion), missing profile
//! parameters, out-of-range numbers.  Finally the initial profile is sampled
//! on the grid to catch non-physical states before anything runs.
//!
//! Physical inputs never default.  Numerical knobs do: CFL 0.4, periodic
//! boundaries, quadrature tolerance 1e-10, `κ_max` 12.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use maxwellgas::fluid::{Boundary, Grid, DEFAULT_CFL};
use maxwellgas::{KineticConstants, MacroState, Vec3};
use serde::Deserialize;
use serde_json::Value;

pub const DEFAULT_QUAD_TOL: f64 = 1e-10;
pub const DEFAULT_KAPPA_MAX: f64 = 12.0;
pub const DEFAULT_MAX_STEPS: usize = 10_000_000;
pub const DEFAULT_BINS: usize = 24;
pub const DEFAULT_HALF_WIDTH: f64 = 6.0;

/// What a run does.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Transport,
    Fluid,
    Lattice,
    Verify,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Transport => "transport",
            Mode::Fluid => "fluid",
            Mode::Lattice => "lattice",
            Mode::Verify => "verify",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "transport" => Ok(Mode::Transport),
            "fluid" => Ok(Mode::Fluid),
            "lattice" | "latticesim" => Ok(Mode::Lattice),
            "verify" => Ok(Mode::Verify),
            other => Err(format!("unknown mode `{other}`; expected transport, fluid, lattice or verify")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Every problem found in a configuration document.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub errors: Vec<String>,
}

impl ConfigError {
    fn single(msg: impl Into<String>) -> Self {
        Self { errors: vec![msg.into()] }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration: {}", self.errors.join("; "))
    }
}

impl std::error::Error for ConfigError {}

/// A field that a profile perturbs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldName {
    Rho,
    Theta,
    Ux,
    Uy,
    Uz,
}

impl FromStr for FieldName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rho" => Ok(FieldName::Rho),
            "theta" => Ok(FieldName::Theta),
            "ux" => Ok(FieldName::Ux),
            "uy" => Ok(FieldName::Uy),
            "uz" => Ok(FieldName::Uz),
            other => Err(format!("unknown field `{other}`; expected rho, theta, ux, uy or uz")),
        }
    }
}

/// Density, velocity and temperature of a uniform background.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Background {
    pub rho: f64,
    pub u: Vec3,
    pub theta: f64,
}

impl Background {
    fn state(&self) -> MacroState {
        MacroState::new(self.rho, self.u, self.theta)
    }
}

/// Named initial conditions.  Perturbations are additive and act along the
/// first axis unless noted.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Uniform(Background),
    /// `field += amplitude · exp(−|x − center|² / (2 width²))`.
    GaussianBump { base: Background, field: FieldName, amplitude: f64, width: f64, center: Vec<f64> },
    /// `u_x += velocity · tanh((y − L_y/2) / thickness)` on grids with a
    /// second axis, `u_y += velocity · tanh((x − L_x/2) / thickness)` in 1-D.
    ShearLayer { base: Background, velocity: f64, thickness: f64 },
    /// Two uniform states separated at `x = interface`.
    SodLike { left: Background, right: Background, interface: f64 },
    /// `field += amplitude · sin(2πx / wavelength)`.
    Sinusoid { base: Background, field: FieldName, amplitude: f64, wavelength: f64 },
}

impl Profile {
    pub fn name(&self) -> &'static str {
        match self {
            Profile::Uniform(_) => "uniform",
            Profile::GaussianBump { .. } => "gaussian-bump",
            Profile::ShearLayer { .. } => "shear-layer",
            Profile::SodLike { .. } => "sod-like",
            Profile::Sinusoid { .. } => "sinusoid",
        }
    }

    /// The state at `x` on a domain of `dim` axes with the given lengths.
    pub fn sample(&self, x: &Vec3, dim: usize, lengths: &[f64; 3]) -> MacroState {
        let perturb = |s: &mut MacroState, field: FieldName, dv: f64| match field {
            FieldName::Rho => s.rho += dv,
            FieldName::Theta => s.theta += dv,
            FieldName::Ux => s.u[0] += dv,
            FieldName::Uy => s.u[1] += dv,
            FieldName::Uz => s.u[2] += dv,
        };
        match self {
            Profile::Uniform(b) => b.state(),
            Profile::GaussianBump { base, field, amplitude, width, center } => {
                let r2: f64 = (0..dim).map(|d| (x[d] - center[d]).powi(2)).sum();
                let mut s = base.state();
                perturb(&mut s, *field, amplitude * (-0.5 * r2 / (width * width)).exp());
                s
            }
            Profile::ShearLayer { base, velocity, thickness } => {
                let mut s = base.state();
                if dim >= 2 {
                    s.u[0] += velocity * ((x[1] - 0.5 * lengths[1]) / thickness).tanh();
                } else {
                    s.u[1] += velocity * ((x[0] - 0.5 * lengths[0]) / thickness).tanh();
                }
                s
            }
            Profile::SodLike { left, right, interface } => {
                if x[0] < *interface {
                    left.state()
                } else {
                    right.state()
                }
            }
            Profile::Sinusoid { base, field, amplitude, wavelength } => {
                let mut s = base.state();
                perturb(&mut s, *field, amplitude * (2.0 * std::f64::consts::PI * x[0] / wavelength).sin());
                s
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub cells: Vec<usize>,
    pub length: Vec<f64>,
    pub boundary: Vec<Boundary>,
}

impl GridSpec {
    pub fn grid(&self) -> Grid {
        let spacing: Vec<f64> = self.cells.iter().zip(&self.length).map(|(&n, l)| l / n as f64).collect();
        Grid::new(&self.cells, &spacing, &self.boundary).expect("grid validated during parsing")
    }

    pub fn lengths(&self) -> [f64; 3] {
        let mut l = [1.0; 3];
        l[..self.length.len()].copy_from_slice(&self.length);
        l
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportSettings {
    pub quad_tol: f64,
    pub kappa_max: f64,
    /// Keep the shear stress.
    pub viscosity: bool,
    /// Keep the Fourier and Dufour heat fluxes.
    pub heat_conduction: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSettings {
    pub t_end: f64,
    /// Snapshot cadence; `None` keeps only the first and last states.
    pub output_interval: Option<f64>,
    pub cfl: f64,
    /// Fixed step instead of the stability limit.
    pub dt: Option<f64>,
    pub max_steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderKind {
    Sweep,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSettings {
    pub bins: usize,
    /// Bins cover `±half_width` thermal momenta at the hottest initial site.
    pub half_width: f64,
    pub order: OrderKind,
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub mode: Mode,
    pub constants: KineticConstants,
    pub transport: TransportSettings,
    pub grid: Option<GridSpec>,
    pub initial: Option<Profile>,
    pub run: Option<RunSettings>,
    pub lattice: LatticeSettings,
    pub seed: u64,
}

type Extra = BTreeMap<String, Value>;

#[derive(Debug, Deserialize)]
struct RawConfig {
    mode: Option<String>,
    constants: Option<RawConstants>,
    grid: Option<RawGrid>,
    initial: Option<RawInitial>,
    run: Option<RawRun>,
    transport: Option<RawTransport>,
    lattice: Option<RawLattice>,
    seed: Option<u64>,
    #[serde(flatten)]
    extra: Extra,
}

#[derive(Debug, Deserialize)]
struct RawConstants {
    nondimensional: Option<bool>,
    m: Option<f64>,
    #[serde(rename = "k_B")]
    k_b: Option<f64>,
    sigma: Option<f64>,
    a: Option<f64>,
    epsilon: Option<f64>,
    #[serde(flatten)]
    extra: Extra,
}

#[derive(Debug, Deserialize)]
struct RawGrid {
    cells: Option<Vec<usize>>,
    length: Option<Vec<f64>>,
    boundary: Option<Vec<Boundary>>,
    #[serde(flatten)]
    extra: Extra,
}

#[derive(Debug, Deserialize)]
struct RawSide {
    rho: Option<f64>,
    u: Option<Vec3>,
    theta: Option<f64>,
    #[serde(flatten)]
    extra: Extra,
}

#[derive(Debug, Deserialize)]
struct RawInitial {
    profile: Option<String>,
    rho: Option<f64>,
    u: Option<Vec3>,
    theta: Option<f64>,
    field: Option<String>,
    amplitude: Option<f64>,
    width: Option<f64>,
    center: Option<Vec<f64>>,
    velocity: Option<f64>,
    thickness: Option<f64>,
    wavelength: Option<f64>,
    interface: Option<f64>,
    left: Option<RawSide>,
    right: Option<RawSide>,
    #[serde(flatten)]
    extra: Extra,
}

#[derive(Debug, Deserialize)]
struct RawRun {
    t_end: Option<f64>,
    output_interval: Option<f64>,
    cfl: Option<f64>,
    dt: Option<f64>,
    max_steps: Option<usize>,
    #[serde(flatten)]
    extra: Extra,
}

#[derive(Debug, Deserialize)]
struct RawTransport {
    quad_tol: Option<f64>,
    kappa_max: Option<f64>,
    viscosity: Option<bool>,
    heat_conduction: Option<bool>,
    #[serde(flatten)]
    extra: Extra,
}

#[derive(Debug, Deserialize)]
struct RawLattice {
    bins: Option<usize>,
    half_width: Option<f64>,
    order: Option<String>,
    #[serde(flatten)]
    extra: Extra,
}

const TOP_KEYS: &[&str] = &["mode", "constants", "grid", "initial", "run", "transport", "lattice", "seed"];
const CONSTANT_KEYS: &[&str] = &["nondimensional", "m", "k_B", "sigma", "a", "epsilon"];
const GRID_KEYS: &[&str] = &["cells", "length", "boundary"];
const INITIAL_KEYS: &[&str] = &[
    "profile",
    "rho",
    "u",
    "theta",
    "field",
    "amplitude",
    "width",
    "center",
    "velocity",
    "thickness",
    "wavelength",
    "interface",
    "left",
    "right",
];
const SIDE_KEYS: &[&str] = &["rho", "u", "theta"];
const RUN_KEYS: &[&str] = &["t_end", "output_interval", "cfl", "dt", "max_steps"];
const TRANSPORT_KEYS: &[&str] = &["quad_tol", "kappa_max", "viscosity", "heat_conduction"];
const LATTICE_KEYS: &[&str] = &["bins", "half_width", "order"];
const PROFILES: &[&str] = &["uniform", "gaussian-bump", "shear-layer", "sod-like", "sinusoid"];

/// Every key the schema knows, with its dotted path, for cross-block suggestions.
fn all_paths() -> Vec<String> {
    let mut out: Vec<String> = TOP_KEYS.iter().map(|k| k.to_string()).collect();
    for (block, keys) in [
        ("constants", CONSTANT_KEYS),
        ("grid", GRID_KEYS),
        ("initial", INITIAL_KEYS),
        ("run", RUN_KEYS),
        ("transport", TRANSPORT_KEYS),
        ("lattice", LATTICE_KEYS),
    ] {
        out.extend(keys.iter().map(|k| format!("{block}.{k}")));
    }
    out
}

fn closest<'a>(word: &str, candidates: impl IntoIterator<Item = &'a str>) -> Option<&'a str> {
    candidates
        .into_iter()
        .map(|c| (strsim::jaro_winkler(word, c.rsplit('.').next().unwrap_or(c)), c))
        .filter(|(score, _)| *score >= 0.85)
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, c)| c)
}

fn unknown_keys(errors: &mut Vec<String>, block: &str, extra: &Extra, known: &[&str]) {
    for key in extra.keys() {
        let path = if block.is_empty() { key.clone() } else { format!("{block}.{key}") };
        let mut msg = format!("unknown key `{path}`");
        if let Some(s) = closest(key, known.iter().copied()) {
            let full = if block.is_empty() { s.to_string() } else { format!("{block}.{s}") };
            msg.push_str(&format!("; did you mean `{full}`?"));
        } else {
            let paths = all_paths();
            if let Some(s) = closest(key, paths.iter().map(|p| p.as_str())) {
                msg.push_str(&format!("; did you mean `{s}`?"));
            } else {
                msg.push_str(&format!("; expected one of {}", known.join(", ")));
            }
        }
        errors.push(msg);
    }
}

fn positive(errors: &mut Vec<String>, path: &str, v: f64, why: &str) -> f64 {
    if !(v > 0.0 && v.is_finite()) {
        errors.push(format!("{path} must be finite and positive{why}, got {v}"));
    }
    v
}

fn finite(errors: &mut Vec<String>, path: &str, v: f64) -> f64 {
    if !v.is_finite() {
        errors.push(format!("{path} must be finite, got {v}"));
    }
    v
}

fn required<T>(errors: &mut Vec<String>, path: &str, v: Option<T>, why: &str) -> Option<T> {
    if v.is_none() {
        errors.push(format!("{path} is required{why}"));
    }
    v
}

fn unused(errors: &mut Vec<String>, present: bool, block: &str, mode: Mode) {
    if present {
        errors.push(format!("block `{block}` is not used in {mode} mode"));
    }
}

/// Parse and validate a configuration document.  `cli_mode`, when given,
/// must agree with the document's `mode` if that is present too.
pub fn parse_config(text: &str, cli_mode: Option<Mode>) -> Result<ScenarioConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let at = if path == "." { String::new() } else { format!(" at `{path}`") };
        ConfigError::single(format!("parse error{at}: {inner}"))
    })?;
    validate(raw, cli_mode)
}

fn validate(raw: RawConfig, cli_mode: Option<Mode>) -> Result<ScenarioConfig, ConfigError> {
    let mut errors = Vec::new();
    unknown_keys(&mut errors, "", &raw.extra, TOP_KEYS);

    let doc_mode = match raw.mode.as_deref().map(Mode::from_str) {
        Some(Ok(m)) => Some(m),
        Some(Err(e)) => {
            errors.push(format!("mode: {e}"));
            None
        }
        None => None,
    };
    let mode = match (cli_mode, doc_mode) {
        (Some(a), Some(b)) if a != b => {
            errors.push(format!("mode `{b}` in the document disagrees with the requested mode `{a}`"));
            a
        }
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => {
            errors.push("mode is required".into());
            return Err(ConfigError { errors });
        }
    };

    let constants = match raw.constants {
        Some(c) => parse_constants(&mut errors, c),
        None if mode == Mode::Verify => Some(KineticConstants::nondimensional()),
        None => {
            errors.push("constants is required: give {\"nondimensional\": true} or all of m, k_B, sigma, a, epsilon".into());
            None
        }
    };

    let transport = parse_transport(&mut errors, raw.transport);
    let lattice = parse_lattice(&mut errors, raw.lattice);
    let seed = raw.seed.unwrap_or(0);

    let (grid, initial, run) = match mode {
        Mode::Transport | Mode::Verify => {
            unused(&mut errors, raw.grid.is_some(), "grid", mode);
            unused(&mut errors, raw.initial.is_some(), "initial", mode);
            unused(&mut errors, raw.run.is_some(), "run", mode);
            unused(&mut errors, lattice.is_some(), "lattice", mode);
            (None, None, None)
        }
        Mode::Fluid | Mode::Lattice => {
            if mode == Mode::Fluid {
                unused(&mut errors, lattice.is_some(), "lattice", mode);
            }
            let grid = required(&mut errors, "grid", raw.grid, "").and_then(|g| parse_grid(&mut errors, g, mode, constants.as_ref()));
            let initial = required(&mut errors, "initial", raw.initial, "").and_then(|i| parse_initial(&mut errors, i));
            let run = required(&mut errors, "run", raw.run, "").and_then(|r| parse_run(&mut errors, r));
            (grid, initial, run)
        }
    };

    if let (Some(k), Some(g), Some(p)) = (constants.as_ref(), grid.as_ref(), initial.as_ref()) {
        check_profile(&mut errors, mode, k, g, p);
    }

    if !errors.is_empty() {
        return Err(ConfigError { errors });
    }
    Ok(ScenarioConfig {
        mode,
        constants: constants.expect("checked above"),
        transport,
        grid,
        initial,
        run,
        lattice: lattice.unwrap_or(LatticeSettings {
            bins: DEFAULT_BINS,
            half_width: DEFAULT_HALF_WIDTH,
            order: OrderKind::Sweep,
        }),
        seed,
    })
}

fn parse_constants(errors: &mut Vec<String>, c: RawConstants) -> Option<KineticConstants> {
    unknown_keys(errors, "constants", &c.extra, CONSTANT_KEYS);
    let values = [("m", c.m), ("k_B", c.k_b), ("sigma", c.sigma), ("a", c.a), ("epsilon", c.epsilon)];
    let given = values.iter().filter(|(_, v)| v.is_some()).count();
    if c.nondimensional == Some(true) {
        if given > 0 {
            errors.push("constants: nondimensional = true fixes m, k_B, sigma, a and epsilon to 1; do not give them as well".into());
            return None;
        }
        return Some(KineticConstants::nondimensional());
    }
    let before = errors.len();
    let mut v = [0.0; 5];
    for (i, (name, value)) in values.iter().enumerate() {
        let path = format!("constants.{name}");
        match value {
            None => errors.push(format!("{path} is required unless constants.nondimensional is true")),
            Some(x) => {
                let why = if *name == "sigma" { " (it divides every transport coefficient)" } else { "" };
                v[i] = positive(errors, &path, *x, why);
            }
        }
    }
    if errors.len() > before {
        return None;
    }
    KineticConstants::new(v[0], v[1], v[2], v[3], v[4]).map_err(|e| errors.push(format!("constants: {e}"))).ok()
}

fn parse_transport(errors: &mut Vec<String>, t: Option<RawTransport>) -> TransportSettings {
    let mut s = TransportSettings {
        quad_tol: DEFAULT_QUAD_TOL,
        kappa_max: DEFAULT_KAPPA_MAX,
        viscosity: true,
        heat_conduction: true,
    };
    if let Some(t) = t {
        unknown_keys(errors, "transport", &t.extra, TRANSPORT_KEYS);
        if let Some(q) = t.quad_tol {
            if !(q > 0.0 && q < 1.0) {
                errors.push(format!("transport.quad_tol must lie in (0, 1), got {q}"));
            }
            s.quad_tol = q;
        }
        if let Some(k) = t.kappa_max {
            s.kappa_max = positive(errors, "transport.kappa_max", k, "");
        }
        s.viscosity = t.viscosity.unwrap_or(true);
        s.heat_conduction = t.heat_conduction.unwrap_or(true);
    }
    s
}

fn parse_lattice(errors: &mut Vec<String>, l: Option<RawLattice>) -> Option<LatticeSettings> {
    let l = l?;
    unknown_keys(errors, "lattice", &l.extra, LATTICE_KEYS);
    let bins = l.bins.unwrap_or(DEFAULT_BINS);
    if bins < 3 {
        errors.push(format!("lattice.bins must be at least 3, got {bins}"));
    }
    let half_width = positive(errors, "lattice.half_width", l.half_width.unwrap_or(DEFAULT_HALF_WIDTH), "");
    let order = match l.order.as_deref() {
        None | Some("sweep") => OrderKind::Sweep,
        Some("random") => OrderKind::Random,
        Some(other) => {
            errors.push(format!("lattice.order must be `sweep` or `random`, got `{other}`"));
            OrderKind::Sweep
        }
    };
    Some(LatticeSettings { bins, half_width, order })
}

fn parse_grid(errors: &mut Vec<String>, g: RawGrid, mode: Mode, k: Option<&KineticConstants>) -> Option<GridSpec> {
    let before = errors.len();
    unknown_keys(errors, "grid", &g.extra, GRID_KEYS);
    let cells = required(errors, "grid.cells", g.cells, "")?;
    let dim = cells.len();
    if !(1..=3).contains(&dim) {
        errors.push(format!("grid.cells must list 1 to 3 axes, got {dim}"));
        return None;
    }
    if mode == Mode::Lattice && dim != 1 {
        errors.push(format!("the lattice simulator is one-dimensional; grid.cells has {dim} axes"));
        return None;
    }
    let min_cells = if mode == Mode::Lattice { 3 } else { 1 };
    for (i, &n) in cells.iter().enumerate() {
        if n < min_cells {
            errors.push(format!("grid.cells[{i}] must be at least {min_cells}, got {n}"));
        }
    }
    let boundary = g.boundary.unwrap_or_else(|| vec![Boundary::Periodic; dim]);
    if boundary.len() != dim {
        errors.push(format!("grid.boundary lists {} axes but grid.cells has {dim}", boundary.len()));
    }
    if mode == Mode::Lattice && boundary.iter().any(|b| *b != Boundary::Periodic) {
        errors.push("the lattice simulator runs on a ring; grid.boundary must be periodic".into());
    }
    let length = match (mode, g.length) {
        (Mode::Lattice, None) => {
            let a = k.map_or(1.0, |k| k.a);
            cells.iter().map(|&n| n as f64 * a).collect()
        }
        (_, None) => {
            errors.push("grid.length is required".into());
            return None;
        }
        (_, Some(l)) => l,
    };
    if length.len() != dim {
        errors.push(format!("grid.length lists {} axes but grid.cells has {dim}", length.len()));
    }
    for (i, &l) in length.iter().enumerate() {
        positive(errors, &format!("grid.length[{i}]"), l, "");
    }
    if mode == Mode::Lattice {
        if let (Some(k), Some(&l)) = (k, length.first()) {
            let want = cells[0] as f64 * k.a;
            if (l - want).abs() > 1e-12 * want {
                errors.push(format!("grid.length[0] must equal cells × a = {want} for the lattice, got {l}"));
            }
        }
    }
    if errors.len() > before {
        return None;
    }
    Some(GridSpec { cells, length, boundary })
}

fn parse_side(errors: &mut Vec<String>, path: &str, s: Option<RawSide>) -> Option<Background> {
    let s = required(errors, path, s, " by profile `sod-like`")?;
    unknown_keys(errors, path, &s.extra, SIDE_KEYS);
    let rho = required(errors, &format!("{path}.rho"), s.rho, "");
    let u = required(errors, &format!("{path}.u"), s.u, "");
    let theta = required(errors, &format!("{path}.theta"), s.theta, "");
    Some(Background { rho: rho?, u: u?, theta: theta? })
}

fn parse_initial(errors: &mut Vec<String>, i: RawInitial) -> Option<Profile> {
    unknown_keys(errors, "initial", &i.extra, INITIAL_KEYS);
    let name = required(errors, "initial.profile", i.profile.clone(), "")?;
    let params: &[&str] = match name.as_str() {
        "uniform" => &["rho", "u", "theta"],
        "gaussian-bump" => &["rho", "u", "theta", "field", "amplitude", "width", "center"],
        "shear-layer" => &["rho", "u", "theta", "velocity", "thickness"],
        "sod-like" => &["left", "right", "interface"],
        "sinusoid" => &["rho", "u", "theta", "field", "amplitude", "wavelength"],
        other => {
            let hint = closest(other, PROFILES.iter().copied()).map(|s| format!("; did you mean `{s}`?")).unwrap_or_default();
            errors.push(format!("initial.profile `{other}` is not one of {}{hint}", PROFILES.join(", ")));
            return None;
        }
    };
    let present = [
        ("rho", i.rho.is_some()),
        ("u", i.u.is_some()),
        ("theta", i.theta.is_some()),
        ("field", i.field.is_some()),
        ("amplitude", i.amplitude.is_some()),
        ("width", i.width.is_some()),
        ("center", i.center.is_some()),
        ("velocity", i.velocity.is_some()),
        ("thickness", i.thickness.is_some()),
        ("wavelength", i.wavelength.is_some()),
        ("interface", i.interface.is_some()),
        ("left", i.left.is_some()),
        ("right", i.right.is_some()),
    ];
    let before = errors.len();
    for (key, is_set) in present {
        if is_set && !params.contains(&key) {
            errors.push(format!("initial.{key} is not a parameter of profile `{name}`"));
        }
        if !is_set && params.contains(&key) {
            errors.push(format!("initial.{key} is required by profile `{name}`"));
        }
    }
    if errors.len() > before {
        return None;
    }
    let field = |errors: &mut Vec<String>, f: &Option<String>| -> Option<FieldName> {
        f.as_deref().unwrap().parse().map_err(|e| errors.push(format!("initial.field: {e}"))).ok()
    };
    let base = || Background { rho: i.rho.unwrap_or(0.0), u: i.u.unwrap_or([0.0; 3]), theta: i.theta.unwrap_or(0.0) };
    match name.as_str() {
        "uniform" => Some(Profile::Uniform(base())),
        "gaussian-bump" => {
            let f = field(errors, &i.field)?;
            let amplitude = finite(errors, "initial.amplitude", i.amplitude.unwrap());
            let width = positive(errors, "initial.width", i.width.unwrap(), "");
            Some(Profile::GaussianBump { base: base(), field: f, amplitude, width, center: i.center.unwrap() })
        }
        "shear-layer" => {
            let velocity = finite(errors, "initial.velocity", i.velocity.unwrap());
            let thickness = positive(errors, "initial.thickness", i.thickness.unwrap(), "");
            Some(Profile::ShearLayer { base: base(), velocity, thickness })
        }
        "sod-like" => {
            let left = parse_side(errors, "initial.left", i.left);
            let right = parse_side(errors, "initial.right", i.right);
            let interface = finite(errors, "initial.interface", i.interface.unwrap());
            Some(Profile::SodLike { left: left?, right: right?, interface })
        }
        "sinusoid" => {
            let f = field(errors, &i.field)?;
            let amplitude = finite(errors, "initial.amplitude", i.amplitude.unwrap());
            let wavelength = positive(errors, "initial.wavelength", i.wavelength.unwrap(), "");
            Some(Profile::Sinusoid { base: base(), field: f, amplitude, wavelength })
        }
        _ => unreachable!("profile names checked above"),
    }
}

fn parse_run(errors: &mut Vec<String>, r: RawRun) -> Option<RunSettings> {
    unknown_keys(errors, "run", &r.extra, RUN_KEYS);
    let t_end = required(errors, "run.t_end", r.t_end, "").map(|t| positive(errors, "run.t_end", t, ""));
    let output_interval = r.output_interval.map(|v| positive(errors, "run.output_interval", v, ""));
    let cfl = r.cfl.unwrap_or(DEFAULT_CFL);
    if !(cfl > 0.0 && cfl <= 1.0) {
        errors.push(format!("run.cfl must lie in (0, 1], got {cfl}"));
    }
    let dt = r.dt.map(|v| positive(errors, "run.dt", v, ""));
    let max_steps = r.max_steps.unwrap_or(DEFAULT_MAX_STEPS);
    if max_steps == 0 {
        errors.push("run.max_steps must be at least 1".into());
    }
    Some(RunSettings { t_end: t_end?, output_interval, cfl, dt, max_steps })
}

/// Sample the profile on every cell and reject non-physical states.
fn check_profile(errors: &mut Vec<String>, mode: Mode, k: &KineticConstants, g: &GridSpec, p: &Profile) {
    let dim = g.cells.len();
    if let Profile::GaussianBump { center, .. } = p {
        if center.len() != dim {
            errors.push(format!("initial.center lists {} coordinates but the grid has {dim} axes", center.len()));
            return;
        }
    }
    if mode == Mode::Lattice && matches!(p, Profile::ShearLayer { .. }) {
        errors.push("profile `shear-layer` needs a transverse velocity, which the 1-D lattice does not carry".into());
        return;
    }
    let grid = g.grid();
    let lengths = g.lengths();
    let full = k.m / k.a.powi(3);
    // Lattice sites sit at (x + ½) a, which are the cell centres of the grid.
    for c in 0..grid.len() {
        let x = grid.center(c);
        let s = p.sample(&x, dim, &lengths);
        let bad = if !(s.rho > 0.0) || !s.rho.is_finite() {
            Some(format!("density {}", s.rho))
        } else if !(s.theta > 0.0) || !s.theta.is_finite() {
            Some(format!("temperature {}", s.theta))
        } else if s.rho >= full {
            Some(format!("density {} at or above full occupation m/a³ = {full}", s.rho))
        } else if s.u.iter().any(|v| !v.is_finite()) {
            Some("a non-finite velocity".into())
        } else if mode == Mode::Lattice && (s.u[1] != 0.0 || s.u[2] != 0.0) {
            Some("a transverse velocity, which the 1-D lattice does not carry".into())
        } else {
            None
        };
        if let Some(what) = bad {
            errors.push(format!("initial profile `{}` gives {what} in cell {c} at x = {:?}", p.name(), &x[..dim]));
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "mode": "fluid",
        "constants": {"nondimensional": true},
        "grid": {"cells": [16], "length": [1.0]},
        "initial": {"profile": "uniform", "rho": 0.5, "u": [0, 0, 0], "theta": 1.0},
        "run": {"t_end": 0.1}
    }"#;

    #[test]
    fn minimal_fluid_config_takes_defaults() {
        let c = parse_config(MINIMAL, None).unwrap();
        assert_eq!(c.run.unwrap().cfl, 0.4);
        assert_eq!(c.grid.unwrap().boundary, vec![Boundary::Periodic]);
        assert_eq!(c.transport.quad_tol, 1e-10);
        assert_eq!(c.transport.kappa_max, 12.0);
    }

    #[test]
    fn misspelt_key_gets_a_suggestion() {
        let text = MINIMAL.replace("\"t_end\": 0.1", "\"t_end\": 0.1, \"viscocity\": 1");
        let e = parse_config(&text, None).unwrap_err();
        assert_eq!(e.errors.len(), 1);
        assert!(e.errors[0].contains("`run.viscocity`"), "{:?}", e.errors);
        assert!(e.errors[0].contains("transport.viscosity"), "{:?}", e.errors);
    }

    #[test]
    fn zero_cross_section_is_rejected() {
        let text = r#"{"mode": "transport",
            "constants": {"m": 1, "k_B": 1, "sigma": 0, "a": 1, "epsilon": 1}}"#;
        let e = parse_config(text, None).unwrap_err();
        assert!(e.errors[0].contains("constants.sigma"), "{:?}", e.errors);
    }

    #[test]
    fn errors_are_aggregated() {
        let text = r#"{"mode": "fluid",
            "constants": {"m": -1, "k_B": 1, "a": 1, "epsilon": 1},
            "grid": {"cells": [8], "length": [1.0]},
            "initial": {"profile": "gaussian-bump", "rho": 0.5, "u": [0,0,0], "theta": 1, "field": "theta"},
            "run": {"t_end": -2, "cfl": 3}}"#;
        let e = parse_config(text, None).unwrap_err();
        let all = e.errors.join("\n");
        for needle in ["constants.m", "constants.sigma", "initial.amplitude", "initial.width", "initial.center", "run.t_end", "run.cfl"]
        {
            assert!(all.contains(needle), "missing {needle} in\n{all}");
        }
    }

    #[test]
    fn mode_mismatch_and_alias() {
        assert!(parse_config(MINIMAL, Some(Mode::Lattice)).is_err());
        assert_eq!("latticesim".parse::<Mode>().unwrap(), Mode::Lattice);
    }

    #[test]
    fn syntax_errors_carry_position() {
        let e = parse_config("{\"mode\": \"fluid\",\n \"grid\": [}", None).unwrap_err();
        assert!(e.errors[0].contains("line 2"), "{:?}", e.errors);
        let e = parse_config(&MINIMAL.replace("[16]", "[\"many\"]"), None).unwrap_err();
        assert!(e.errors[0].contains("grid.cells"), "{:?}", e.errors);
    }

    #[test]
    fn overfull_profile_is_rejected() {
        let e = parse_config(&MINIMAL.replace("\"rho\": 0.5", "\"rho\": 1.5"), None).unwrap_err();
        assert!(e.errors[0].contains("full occupation"), "{:?}", e.errors);
    }
}
