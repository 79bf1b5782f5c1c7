//! JSON run configuration: parsing, unknown-key detection, semantic
//! validation and a stable content digest.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{Result, SchemaIssue, SolverError};
use crate::experiments::excitatory::Scenario;
use crate::experiments::orders::Direction;
use crate::maxwellian::DEFAULT_EXPONENT_GUARD;
use crate::model::{CoefficientFns, DomainBounds, GridSpec, InitialCondition, ScalarFn};
use crate::stepper::{SchemeOptions, SchemeVariant, DEFAULT_FIXPOINT_MAX_ITER, DEFAULT_FIXPOINT_TOL};
use crate::transport_w::{FluxSelector, PositivityPolicy};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub v_min: f64,
    #[serde(rename = "v_F")]
    pub v_f: f64,
    #[serde(rename = "v_R")]
    pub v_r: f64,
    pub w_min: f64,
    pub w_max: f64,
    pub t_max: f64,
    pub dv: f64,
    pub dw: f64,
    pub dt: f64,
}

impl GridConfig {
    /// Validates every field and builds the lattice when all checks pass.
    fn build(&self, issues: &mut Vec<SchemaIssue>) -> Option<GridSpec> {
        let before = issues.len();
        let mut bad = |path: &str, msg: &str| issues.push(SchemaIssue::new(format!("grid.{path}"), msg));
        for (name, x) in [
            ("v_min", self.v_min),
            ("v_F", self.v_f),
            ("v_R", self.v_r),
            ("w_min", self.w_min),
            ("w_max", self.w_max),
            ("t_max", self.t_max),
            ("dv", self.dv),
            ("dw", self.dw),
            ("dt", self.dt),
        ] {
            if !x.is_finite() {
                bad(name, "must be finite");
            }
        }
        if !(self.v_min < self.v_f) {
            bad("v_F", "must exceed v_min");
        }
        if !(self.v_min < self.v_r && self.v_r < self.v_f) {
            bad("v_R", "must lie strictly between v_min and v_F");
        }
        if !(self.w_min < self.w_max) {
            bad("w_max", "must exceed w_min");
        }
        if !(self.t_max >= 0.0) {
            bad("t_max", "must be >= 0");
        }
        let intervals = |len: f64, h: f64| -> Option<usize> {
            let n = (len / h).round();
            (h > 0.0 && n >= 1.0 && ((n * h - len) / len).abs() <= 1e-9).then_some(n as usize)
        };
        let n_v = intervals(self.v_f - self.v_min, self.dv);
        let n_w = intervals(self.w_max - self.w_min, self.dw);
        match n_v {
            Some(n) if n >= 2 => {
                let r = (self.v_r - self.v_min) / self.dv;
                if (r - r.round()).abs() > 1e-9 {
                    bad("v_R", "does not lie on a voltage node");
                }
            }
            _ => bad("dv", "must be > 0 and divide v_F - v_min into at least 2 intervals"),
        }
        if !matches!(n_w, Some(n) if n >= 2) {
            bad("dw", "must be > 0 and divide w_max - w_min into at least 2 intervals");
        }
        let n_t = if self.t_max == 0.0 {
            Some(0)
        } else {
            let n = intervals(self.t_max, self.dt);
            if n.is_none() {
                bad("dt", "must be > 0 and divide t_max");
            }
            n
        };
        if issues.len() > before {
            return None;
        }
        let bounds = DomainBounds {
            v_min: self.v_min,
            v_f: self.v_f,
            v_r: self.v_r,
            w_min: self.w_min,
            w_max: self.w_max,
            t_max: self.t_max,
        };
        match GridSpec::new(bounds, n_v?, n_w?, n_t?) {
            Ok(g) => Some(g),
            Err(e) => {
                issues.push(SchemaIssue::new("grid", e.to_string()));
                None
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantName {
    Si,
    Fi,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SchemeConfig {
    pub variant: VariantName,
    pub fi_tol: f64,
    pub fi_max_iter: usize,
    pub positivity: PositivityPolicy,
    pub flux: FluxSelector,
    pub exponent_guard: f64,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        Self {
            variant: VariantName::Si,
            fi_tol: DEFAULT_FIXPOINT_TOL,
            fi_max_iter: DEFAULT_FIXPOINT_MAX_ITER,
            positivity: PositivityPolicy::Abort,
            flux: FluxSelector::Godunov,
            exponent_guard: DEFAULT_EXPONENT_GUARD,
        }
    }
}

impl SchemeConfig {
    pub fn options(&self) -> SchemeOptions {
        let variant = match self.variant {
            VariantName::Si => SchemeVariant::Si,
            VariantName::Fi => SchemeVariant::Fi {
                tol: self.fi_tol,
                max_iter: self.fi_max_iter,
            },
        };
        SchemeOptions {
            variant,
            positivity: self.positivity,
            exponent_guard: self.exponent_guard,
            flux: self.flux,
        }
    }

    fn validate(&self, issues: &mut Vec<SchemaIssue>) {
        if !(self.fi_tol > 0.0 && self.fi_tol.is_finite()) {
            issues.push(SchemaIssue::new("scheme.fi_tol", "must be finite and > 0"));
        }
        if self.fi_max_iter == 0 {
            issues.push(SchemaIssue::new("scheme.fi_max_iter", "must be >= 1"));
        }
        if !(self.exponent_guard > 0.0 && self.exponent_guard <= 709.0) {
            issues.push(SchemaIssue::new("scheme.exponent_guard", "must lie in (0, 709]"));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Trajectory row every `stride` steps.
    pub stride: usize,
    /// Full-grid snapshots, off unless times are listed.
    pub snapshot_times: Vec<f64>,
    pub dir: Option<String>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            stride: 1,
            snapshot_times: Vec::new(),
            dir: None,
        }
    }
}

impl OutputConfig {
    fn validate(&self, issues: &mut Vec<SchemaIssue>) {
        if self.stride == 0 {
            issues.push(SchemaIssue::new("output.stride", "must be >= 1"));
        }
        for (k, t) in self.snapshot_times.iter().enumerate() {
            if !(t.is_finite() && *t >= 0.0) {
                issues.push(SchemaIssue::new(
                    format!("output.snapshot_times[{k}]"),
                    "must be finite and >= 0",
                ));
            }
        }
    }
}

fn default_horizons() -> Vec<f64> {
    vec![0.1, 2.5]
}
fn default_levels() -> usize {
    5
}
fn default_directions() -> Vec<Direction> {
    Direction::ALL.to_vec()
}
fn default_epsilons() -> Vec<f64> {
    crate::experiments::ap::default_epsilons()
}
fn default_ap_dts() -> Vec<f64> {
    vec![5e-4, 5e-3]
}
fn default_variants() -> Vec<VariantName> {
    vec![VariantName::Fi, VariantName::Si]
}
fn default_ap_stride() -> usize {
    10
}
fn default_indices() -> Vec<usize> {
    (0..5).collect()
}
fn default_campaign_t_max() -> f64 {
    5.0
}
fn default_scenarios() -> Vec<Scenario> {
    vec![Scenario::Steady, Scenario::Unsteady]
}

/// Which campaign a configuration drives, with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Campaign {
    /// A single trajectory from the `grid`, `coefficients` and `initial` sections.
    Run {},
    Orders {
        #[serde(default = "default_horizons")]
        horizons: Vec<f64>,
        #[serde(default = "default_levels")]
        levels: usize,
        #[serde(default = "default_directions")]
        directions: Vec<Direction>,
        #[serde(default)]
        flux: FluxSelector,
    },
    Ap {
        #[serde(default = "default_epsilons")]
        epsilons: Vec<f64>,
        #[serde(default = "default_ap_dts")]
        dts: Vec<f64>,
        #[serde(default = "default_variants")]
        variants: Vec<VariantName>,
        #[serde(default = "default_ap_stride")]
        stride: usize,
    },
    Learn {
        #[serde(default = "default_indices")]
        indices: Vec<usize>,
        #[serde(default = "default_campaign_t_max")]
        t_max: f64,
        #[serde(default)]
        diagonal_only: bool,
    },
    Excitatory {
        #[serde(default = "default_scenarios")]
        scenarios: Vec<Scenario>,
        #[serde(default = "default_campaign_t_max")]
        t_max: f64,
    },
    /// Quasi-steady state of the weight marginal `h` on the `grid` section.
    Steady {
        h: Vec<f64>,
        #[serde(default)]
        test_input: Option<ScalarFn>,
    },
}

impl Campaign {
    pub fn name(&self) -> &'static str {
        match self {
            Campaign::Run {} => "run",
            Campaign::Orders { .. } => "orders",
            Campaign::Ap { .. } => "ap",
            Campaign::Learn { .. } => "learn",
            Campaign::Excitatory { .. } => "excitatory",
            Campaign::Steady { .. } => "steady",
        }
    }

    /// The campaign with every parameter at its default.
    pub fn default_for(name: &str) -> Option<Campaign> {
        let value = serde_json::json!({ "kind": name });
        match name {
            "steady" => None,
            _ => serde_json::from_value(value).ok(),
        }
    }

    fn needs_model(&self) -> bool {
        matches!(self, Campaign::Run {} | Campaign::Steady { .. })
    }

    fn validate(&self, grid: Option<&GridSpec>, issues: &mut Vec<SchemaIssue>) {
        let mut bad = |path: &str, msg: &str| issues.push(SchemaIssue::new(format!("campaign.{path}"), msg));
        match self {
            Campaign::Run {} => {}
            Campaign::Orders { horizons, levels, .. } => {
                if horizons.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
                    bad("horizons", "every horizon must be finite and > 0");
                }
                if *levels < 3 || *levels > 8 {
                    bad("levels", "must lie in 3..=8");
                }
            }
            Campaign::Ap {
                epsilons, dts, stride, ..
            } => {
                if epsilons.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
                    bad("epsilons", "every epsilon must be finite and > 0");
                }
                if dts.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
                    bad("dts", "every time step must be finite and > 0");
                }
                if *stride == 0 {
                    bad("stride", "must be >= 1");
                }
            }
            Campaign::Learn { indices, t_max, .. } => {
                if indices.iter().any(|&i| i > 20) {
                    bad("indices", "Hermite indices above 20 are not supported");
                }
                if !(t_max.is_finite() && *t_max >= 0.0) {
                    bad("t_max", "must be finite and >= 0");
                }
            }
            Campaign::Excitatory { t_max, .. } => {
                if !(t_max.is_finite() && *t_max > 0.0) {
                    bad("t_max", "must be finite and > 0");
                }
            }
            Campaign::Steady { h, test_input } => {
                if h.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
                    bad("h", "values must be finite and >= 0");
                }
                if let Some(g) = grid {
                    if h.len() != g.n_w + 1 {
                        bad(
                            "h",
                            &format!("expected {} values (one per weight node), got {}", g.n_w + 1, h.len()),
                        );
                    }
                }
                if let Some(f) = test_input {
                    f.validate("campaign.test_input", issues);
                }
            }
        }
    }
}

/// A fully validated configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub grid: Option<GridConfig>,
    pub coefficients: Option<CoefficientFns>,
    pub initial: Option<InitialCondition>,
    pub scheme: SchemeConfig,
    pub output: OutputConfig,
    pub campaign: Campaign,
    /// Lattice built from `grid`.
    #[serde(skip)]
    pub lattice: Option<GridSpec>,
    /// Hex SHA-256 of the resolved configuration (defaults filled in, keys
    /// sorted, compact JSON).
    #[serde(skip)]
    pub hash: String,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        parse_config(&text)
    }

    pub fn scheme_options(&self) -> SchemeOptions {
        self.scheme.options()
    }

    /// Grid, coefficients and initial data, present for model-driven campaigns.
    pub fn model(&self) -> Option<(&GridSpec, &CoefficientFns, &InitialCondition)> {
        Some((
            self.lattice.as_ref()?,
            self.coefficients.as_ref()?,
            self.initial.as_ref()?,
        ))
    }
}

/// Hex SHA-256 of the canonical serialization of a JSON value.
pub fn config_hash(value: &Value) -> String {
    let canonical = serde_json::to_string(value).expect("JSON values always serialize");
    Sha256::digest(canonical.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

const TOP_KEYS: &[&str] = &["grid", "coefficients", "initial", "scheme", "output", "campaign"];
const GRID_KEYS: &[&str] = &["v_min", "v_F", "v_R", "w_min", "w_max", "t_max", "dv", "dw", "dt"];
const COEFF_KEYS: &[&str] = &["a", "epsilon", "input", "learning", "firing"];
const SCHEME_KEYS: &[&str] = &[
    "variant",
    "fi_tol",
    "fi_max_iter",
    "positivity",
    "flux",
    "exponent_guard",
];
const OUTPUT_KEYS: &[&str] = &["stride", "snapshot_times", "dir"];

fn function_keys(kind: &str) -> Option<&'static [&'static str]> {
    Some(match kind {
        "constant" => &["kind", "value"],
        "gaussian" => &["kind", "amplitude", "scale", "shift"],
        "hermite" => &["kind", "index", "scale", "shift", "offset"],
        "indicator" => &["kind", "value", "threshold"],
        "identity" => &["kind"],
        "bounded_sigmoid" => &["kind", "k"],
        _ => return None,
    })
}

fn initial_keys(kind: &str) -> Option<&'static [&'static str]> {
    Some(match kind {
        "product_sine_window" => &["kind", "v_lo", "v_hi", "w_lo", "w_hi", "normalize"],
        "gaussian_product" => &[
            "kind",
            "amplitude",
            "v_center",
            "v_width",
            "w_center",
            "w_width",
            "normalize",
        ],
        "tabulated" => &["kind", "values", "normalize"],
        _ => return None,
    })
}

fn campaign_keys(kind: &str) -> Option<&'static [&'static str]> {
    Some(match kind {
        "run" => &["kind"],
        "orders" => &["kind", "horizons", "levels", "directions", "flux"],
        "ap" => &["kind", "epsilons", "dts", "variants", "stride"],
        "learn" => &["kind", "indices", "t_max", "diagonal_only"],
        "excitatory" => &["kind", "scenarios", "t_max"],
        "steady" => &["kind", "h", "test_input"],
        _ => return None,
    })
}

fn unknown_keys(map: &Map<String, Value>, path: &str, allowed: &[&str], issues: &mut Vec<SchemaIssue>) {
    for key in map.keys() {
        if !allowed.contains(&key.as_str()) {
            let full = if path.is_empty() {
                key.clone()
            } else {
                format!("{path}.{key}")
            };
            issues.push(SchemaIssue::new(full, "unknown key"));
        }
    }
}

/// Checks the keys of a `kind`-tagged object; shape errors are left to the
/// typed pass.
fn tagged_keys(
    value: &Value,
    path: &str,
    table: fn(&str) -> Option<&'static [&'static str]>,
    issues: &mut Vec<SchemaIssue>,
) {
    let Some(map) = value.as_object() else { return };
    let Some(kind) = map.get("kind").and_then(Value::as_str) else {
        return;
    };
    match table(kind) {
        Some(allowed) => unknown_keys(map, path, allowed, issues),
        None => issues.push(SchemaIssue::new(
            format!("{path}.kind"),
            format!("unknown kind `{kind}`"),
        )),
    }
}

fn section<T: serde::de::DeserializeOwned>(
    doc: &Map<String, Value>,
    key: &str,
    issues: &mut Vec<SchemaIssue>,
) -> Option<T> {
    let value = doc.get(key)?;
    match serde_json::from_value(value.clone()) {
        Ok(v) => Some(v),
        Err(e) => {
            issues.push(SchemaIssue::new(key, e.to_string()));
            None
        }
    }
}

/// Parses and validates a JSON configuration document, reporting every
/// problem found rather than stopping at the first.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let value: Value = serde_json::from_str(text).map_err(|e| SolverError::schema("$", e.to_string()))?;
    let Some(doc) = value.as_object() else {
        return Err(SolverError::schema("$", "configuration must be a JSON object"));
    };
    let mut issues = Vec::new();

    unknown_keys(doc, "", TOP_KEYS, &mut issues);
    for (key, allowed) in [
        ("grid", GRID_KEYS),
        ("coefficients", COEFF_KEYS),
        ("scheme", SCHEME_KEYS),
        ("output", OUTPUT_KEYS),
    ] {
        if let Some(map) = doc.get(key).and_then(Value::as_object) {
            unknown_keys(map, key, allowed, &mut issues);
        }
    }
    if let Some(coeffs) = doc.get("coefficients").and_then(Value::as_object) {
        for f in ["input", "learning", "firing"] {
            if let Some(v) = coeffs.get(f) {
                tagged_keys(v, &format!("coefficients.{f}"), function_keys, &mut issues);
            }
        }
    }
    if let Some(v) = doc.get("initial") {
        tagged_keys(v, "initial", initial_keys, &mut issues);
    }
    if let Some(v) = doc.get("campaign") {
        tagged_keys(v, "campaign", campaign_keys, &mut issues);
        if let Some(t) = v.get("test_input") {
            tagged_keys(t, "campaign.test_input", function_keys, &mut issues);
        }
    }
    if !issues.is_empty() {
        return Err(SolverError::Schema(issues));
    }

    let grid: Option<GridConfig> = section(doc, "grid", &mut issues);
    let coefficients: Option<CoefficientFns> = section(doc, "coefficients", &mut issues);
    let initial: Option<InitialCondition> = section(doc, "initial", &mut issues);
    let scheme: SchemeConfig = section(doc, "scheme", &mut issues).unwrap_or_default();
    let output: OutputConfig = section(doc, "output", &mut issues).unwrap_or_default();
    let campaign: Campaign = if doc.contains_key("campaign") {
        section(doc, "campaign", &mut issues).unwrap_or(Campaign::Run {})
    } else {
        Campaign::Run {}
    };

    let lattice = grid.as_ref().and_then(|g| g.build(&mut issues));
    if let Some(c) = &coefficients {
        issues.extend(c.validate());
    }
    if let Some(ic) = &initial {
        ic.validate("initial", &mut issues);
    }
    scheme.validate(&mut issues);
    output.validate(&mut issues);
    campaign.validate(lattice.as_ref(), &mut issues);
    if campaign.needs_model() {
        for key in ["grid", "coefficients", "initial"] {
            let needed = key != "initial" || matches!(campaign, Campaign::Run {});
            if needed && !doc.contains_key(key) {
                issues.push(SchemaIssue::new(
                    key,
                    format!("required by the `{}` campaign", campaign.name()),
                ));
            }
        }
    }
    if !issues.is_empty() {
        return Err(SolverError::Schema(issues));
    }

    let mut config = RunConfig {
        grid,
        coefficients,
        initial,
        scheme,
        output,
        campaign,
        lattice,
        hash: String::new(),
    };
    config.hash = config_hash(&serde_json::to_value(&config)?);
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "grid": {"v_min": -4, "v_F": 2, "v_R": 1, "w_min": -1.1, "w_max": 0.1,
                 "t_max": 0.1, "dv": 0.1, "dw": 0.01, "dt": 0.001},
        "coefficients": {"a": 1, "epsilon": 0.5,
                         "input": {"kind": "constant", "value": 0},
                         "learning": {"kind": "indicator", "value": -1, "threshold": 0},
                         "firing": {"kind": "identity"}},
        "initial": {"kind": "product_sine_window", "v_lo": -1, "v_hi": 1, "w_lo": -1, "w_hi": 0}
    }"#;

    fn paths(err: SolverError) -> Vec<String> {
        match err {
            SolverError::Schema(issues) => issues.into_iter().map(|i| i.path).collect(),
            other => panic!("expected schema error, got {other}"),
        }
    }

    #[test]
    fn minimal_config() {
        let c = parse_config(MINIMAL).unwrap();
        let g = c.lattice.as_ref().unwrap();
        assert_eq!((g.n_v, g.n_w, g.n_t, g.r), (60, 120, 100, 50));
        assert_eq!(c.grid.as_ref().unwrap().dv, 0.1);
        assert_eq!(c.campaign, Campaign::Run {});
        assert_eq!(c.scheme_options(), SchemeOptions::default());
        assert_eq!(c.hash.len(), 64);
    }

    #[test]
    fn hash_ignores_formatting_and_key_order() {
        let a = parse_config(r#"{"campaign": {"kind": "learn", "t_max": 1, "indices": [0]}}"#).unwrap();
        let b = parse_config("{\"campaign\":{\"indices\":[0],\n \"kind\":\"learn\",\"t_max\":1.0}}").unwrap();
        assert_eq!(a.hash, b.hash);
        let c = parse_config(r#"{"campaign": {"kind": "learn", "t_max": 2, "indices": [0]}}"#).unwrap();
        assert_ne!(a.hash, c.hash);
        let d = parse_config(r#"{"campaign": {"kind": "learn", "t_max": 1, "indices": [0], "diagonal_only": false}}"#)
            .unwrap();
        assert_eq!(a.hash, d.hash);
    }

    #[test]
    fn reset_off_grid() {
        let text = MINIMAL.replace("\"v_R\": 1", "\"v_R\": 1.05");
        assert_eq!(paths(parse_config(&text).unwrap_err()), ["grid.v_R"]);
    }

    #[test]
    fn negative_diffusion() {
        let text = MINIMAL.replace("\"a\": 1", "\"a\": -1");
        assert_eq!(paths(parse_config(&text).unwrap_err()), ["coefficients.a"]);
    }

    #[test]
    fn all_errors_are_collected() {
        let text = MINIMAL
            .replace("\"v_R\": 1", "\"v_R\": 1.05")
            .replace("\"a\": 1", "\"a\": -1")
            .replace("\"epsilon\": 0.5", "\"epsilon\": 0");
        let p = paths(parse_config(&text).unwrap_err());
        assert_eq!(p, ["grid.v_R", "coefficients.a", "coefficients.epsilon"]);
    }

    #[test]
    fn unknown_keys_everywhere() {
        let text = MINIMAL
            .replace("\"dt\": 0.001", "\"dt\": 0.001, \"dx\": 1")
            .replace("{\"kind\": \"identity\"}", "{\"kind\": \"identity\", \"x\": 1}")
            .replace("\"grid\":", "\"extra\": 0, \"grid\":");
        let mut p = paths(parse_config(&text).unwrap_err());
        p.sort();
        assert_eq!(p, ["coefficients.firing.x", "extra", "grid.dx"]);
    }

    #[test]
    fn unknown_function_kind() {
        let text = MINIMAL.replace("\"kind\": \"identity\"", "\"kind\": \"cubic\"");
        assert_eq!(paths(parse_config(&text).unwrap_err()), ["coefficients.firing.kind"]);
    }

    #[test]
    fn run_requires_model_sections() {
        let p = paths(parse_config("{}").unwrap_err());
        assert_eq!(p, ["grid", "coefficients", "initial"]);
    }

    #[test]
    fn campaign_defaults() {
        let c = parse_config(r#"{"campaign": {"kind": "orders"}}"#).unwrap();
        assert_eq!(Some(c.campaign), Campaign::default_for("orders"));
        assert!(Campaign::default_for("steady").is_none());
        let Some(Campaign::Ap { epsilons, dts, .. }) = Campaign::default_for("ap") else {
            panic!()
        };
        assert_eq!((epsilons.len(), dts.len()), (7, 2));
    }

    #[test]
    fn steady_profile_length() {
        let text = MINIMAL.replace(
            "\"initial\":",
            "\"campaign\": {\"kind\": \"steady\", \"h\": [1, 2, 3]}, \"initial\":",
        );
        assert_eq!(paths(parse_config(&text).unwrap_err()), ["campaign.h"]);
    }

    #[test]
    fn malformed_json() {
        assert_eq!(paths(parse_config("{").unwrap_err()), ["$"]);
    }
}
