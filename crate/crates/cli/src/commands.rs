use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use ndarray::Array1;
use nnlif_core::artifacts::{matrix_entries, snapshot_rows, ArtifactDir};
use nnlif_core::config::{parse_config, Campaign, RunConfig, VariantName};
use nnlif_core::experiments::ap::{ap_sweep, ApCurve};
use nnlif_core::experiments::excitatory::{excitatory_scenario, Scenario};
use nnlif_core::experiments::learning::recognition_matrix;
use nnlif_core::experiments::orders::order_study;
use nnlif_core::experiments::presets;
use nnlif_core::experiments::verdict::{ap_verdict, excitatory_verdict, order_verdict, recognition_verdict};
use nnlif_core::model::DensityState;
use nnlif_core::quasisteady::{profile_rows, quasi_steady, QuasiSteadyOptions};
use nnlif_core::stepper::{run, OutputSpec, SchemeVariant};
use serde_json::{json, Value};

use crate::Failure;

/// Horizon at or below which the order bands are enforced.
const GATED_HORIZON: f64 = 0.1;

pub struct Options {
    pub command: &'static str,
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub dump_matrices: bool,
}

type Outcome = Result<Vec<PathBuf>, Failure>;

/// Loads the configuration, runs the requested campaign and returns the
/// paths of the files it wrote.
pub fn execute(opts: &Options) -> Outcome {
    let config = load(opts)?;
    if config.campaign.name() != opts.command {
        return Err(Failure::Invalid(format!(
            "campaign.kind: configuration describes a `{}` campaign but the `{}` subcommand was given",
            config.campaign.name(),
            opts.command
        )));
    }
    let root = opts
        .out
        .clone()
        .or_else(|| config.output.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| Path::new("out").join(opts.command));
    let mut out = ArtifactDir::create(root)?;
    match &config.campaign {
        Campaign::Run {} => run_campaign(&config, opts, &mut out)?,
        Campaign::Orders {
            horizons,
            levels,
            directions,
            flux,
        } => {
            let mut studies = Vec::new();
            let mut pass = true;
            for &t_max in horizons {
                for &d in directions {
                    let study = order_study(d, t_max, *levels, *flux)?;
                    out.csv(&format!("orders_{}_T{t_max}.csv", d.label()), &study.rows)?;
                    let gated = t_max <= GATED_HORIZON + 1e-12;
                    let verdict = order_verdict(&study);
                    pass &= study.all_finite() && (!gated || verdict.pass);
                    studies.push(json!({
                        "direction": d,
                        "t_max": t_max,
                        "steps": study.steps,
                        "rows": study.rows,
                        "finite": study.all_finite(),
                        "gated": gated,
                        "band": verdict.band,
                        "in_band": verdict.pass,
                    }));
                }
            }
            let doc = json!({ "flux": flux, "levels": levels, "studies": studies, "pass": pass });
            out.json("orders.json", &stamp(&config, opts, doc))?;
        }
        Campaign::Ap {
            epsilons,
            dts,
            variants,
            stride,
        } => {
            let mut curves = Vec::new();
            let mut verdicts = Vec::new();
            for &dt in dts {
                let mut by_variant: Vec<(VariantName, Vec<ApCurve>)> = Vec::new();
                for &v in variants {
                    let variant = match v {
                        VariantName::Si => SchemeVariant::Si,
                        VariantName::Fi => SchemeVariant::fi(),
                    };
                    let sweep = ap_sweep(variant, epsilons, dt, *stride)?;
                    for c in &sweep {
                        out.csv(&format!("ap_{}_dt{dt}_eps{:e}.csv", c.variant, c.epsilon), &c.points)?;
                        curves.push(json!({
                            "variant": c.variant,
                            "epsilon": c.epsilon,
                            "dt": c.dt,
                            "final_distance": c.final_distance(),
                            "worst_negativity": c.worst_negativity,
                            "max_relative_mass_drift": c.max_relative_mass_drift,
                            "fi_nonconverged_steps": c.fi_nonconverged_steps,
                        }));
                    }
                    by_variant.push((v, sweep));
                }
                let find = |name| by_variant.iter().find(|(v, _)| *v == name).map(|(_, c)| c);
                if let (Some(fi), Some(si)) = (find(VariantName::Fi), find(VariantName::Si)) {
                    verdicts.push(ap_verdict(fi, si));
                }
            }
            let doc = json!({ "epsilons": epsilons, "curves": curves, "verdicts": verdicts });
            out.json("ap.json", &stamp(&config, opts, doc))?;
        }
        Campaign::Learn {
            indices,
            t_max,
            diagonal_only,
        } => {
            let matrix = recognition_matrix(indices, *t_max, *diagonal_only)?;
            for c in &matrix.cells {
                let rows = profile_rows(&matrix.grid, &c.n_star, &c.h_star);
                out.csv(&format!("learn_{}_{}.csv", c.learn_index, c.test_index), &rows)?;
            }
            let verdict = recognition_verdict(&matrix);
            let doc = json!({
                "matrix": matrix,
                "verdict": verdict,
                "diagonal_pass": verdict.diagonal_pass(),
                "pass": verdict.pass(),
            });
            out.json("learn.json", &stamp(&config, opts, doc))?;
        }
        Campaign::Excitatory { scenarios, t_max } => {
            let mut reports = Vec::new();
            for &s in scenarios {
                let report = excitatory_scenario(s, *t_max)?;
                let grid = presets::excitatory(s.gain(), *t_max).grid;
                let fin = &report.final_state;
                out.csv(&format!("excitatory_{}_trajectory.csv", s.label()), &report.trajectory)?;
                out.csv(
                    &format!("excitatory_{}_profile.csv", s.label()),
                    &profile_rows(&grid, &fin.obs.n_j, &fin.obs.h_j),
                )?;
                out.csv(
                    &format!("excitatory_{}_snapshot.csv", s.label()),
                    &snapshot_rows(&grid, &fin.p),
                )?;
                reports.push((s, report));
            }
            let find = |name| reports.iter().find(|(s, _)| *s == name).map(|(_, r)| r);
            let verdict = match (find(Scenario::Steady), find(Scenario::Unsteady)) {
                (Some(a), Some(b)) => Some(excitatory_verdict(a, b)),
                _ => None,
            };
            let by_label: serde_json::Map<String, Value> =
                reports.iter().map(|(s, r)| (s.label().to_owned(), json!(r))).collect();
            let doc = json!({ "t_max": t_max, "scenarios": by_label, "verdict": verdict });
            out.json("excitatory.json", &stamp(&config, opts, doc))?;
        }
        Campaign::Steady { h, test_input } => {
            let grid = config.lattice.as_ref().ok_or_else(|| missing("grid"))?;
            let coeffs = config.coefficients.as_ref().ok_or_else(|| missing("coefficients"))?;
            let h = Array1::from(h.clone());
            let options = QuasiSteadyOptions {
                input_override: test_input.as_ref(),
                exponent_guard: config.scheme.exponent_guard,
                ..QuasiSteadyOptions::default()
            };
            let qs = quasi_steady(&h, grid, coeffs, &options)?;
            if !qs.converged {
                eprintln!(
                    "warning: fixed-point iteration stopped after {} iterations (residual {:e})",
                    qs.iterations, qs.residual
                );
            }
            out.csv("profile.csv", &profile_rows(grid, &qs.n_j, &h))?;
            out.csv("trace.csv", &trace_rows(&qs.trace))?;
            out.csv("snapshot.csv", &snapshot_rows(grid, &qs.p))?;
            if opts.dump_matrices {
                let entries = matrix_entries(grid, coeffs, qs.n_bar, config.scheme.exponent_guard)?;
                out.csv("matrices.csv", &entries)?;
            }
            let doc = json!({
                "Nbar": qs.n_bar,
                "iterations": qs.iterations,
                "residual": qs.residual,
                "converged": qs.converged,
            });
            out.json("steady.json", &stamp(&config, opts, doc))?;
        }
    }
    if opts.dump_matrices && !matches!(config.campaign, Campaign::Run {} | Campaign::Steady { .. }) {
        eprintln!("note: --dump-matrices applies to `run` and `steady` only");
    }
    Ok(out.files().iter().map(|f| out.path().join(f)).collect())
}

#[derive(serde::Serialize)]
struct TraceRow {
    k: usize,
    #[serde(rename = "Nbar")]
    n_bar: f64,
}

fn trace_rows(trace: &[f64]) -> Vec<TraceRow> {
    trace
        .iter()
        .enumerate()
        .map(|(k, &n_bar)| TraceRow { k, n_bar })
        .collect()
}

fn run_campaign(config: &RunConfig, opts: &Options, out: &mut ArtifactDir) -> Result<(), Failure> {
    let (grid, coeffs, initial) = config
        .model()
        .ok_or_else(|| missing("grid, coefficients and initial"))?;
    let state = DensityState::initial(initial, grid, coeffs.a)?;
    if opts.dump_matrices {
        let entries = matrix_entries(grid, coeffs, state.obs.n_bar, config.scheme.exponent_guard)?;
        out.csv("matrices.csv", &entries)?;
    }
    let spec = OutputSpec {
        stride: config.output.stride,
        snapshot_times: config.output.snapshot_times.clone(),
    };
    let result = run(state, grid, coeffs, &config.scheme_options(), &spec)?;
    out.csv("trajectory.csv", &result.trajectory)?;
    for snap in &result.snapshots {
        out.csv(&format!("snapshot_{}.csv", snap.step), &snapshot_rows(grid, &snap.p))?;
    }
    let fin = &result.final_state;
    out.csv("profile.csv", &profile_rows(grid, &fin.obs.n_j, &fin.obs.h_j))?;
    let last = result.trajectory.last().expect("trajectory holds the initial row");
    let doc = json!({
        "summary": result.summary,
        "final": last,
        "snapshots": result.snapshots.iter().map(|s| json!({ "step": s.step, "t": s.t })).collect::<Vec<_>>(),
    });
    out.json("summary.json", &stamp(config, opts, doc))?;
    Ok(())
}

/// Adds the configuration hash and campaign name to a result document.
fn stamp(config: &RunConfig, opts: &Options, mut doc: Value) -> Value {
    if let Value::Object(map) = &mut doc {
        map.insert("campaign".into(), json!(config.campaign.name()));
        map.insert("config_hash".into(), json!(config.hash));
        map.insert("seed".into(), json!(opts.seed));
    }
    doc
}

fn missing(what: &str) -> Failure {
    Failure::Invalid(format!("configuration must provide {what}"))
}

fn load(opts: &Options) -> Result<RunConfig, Failure> {
    let text = match &opts.config {
        Some(path) => std::fs::read_to_string(path).map_err(|e| {
            let what = if e.kind() == ErrorKind::NotFound {
                "not found".to_owned()
            } else {
                e.to_string()
            };
            Failure::Invalid(format!("config file {}: {what}", path.display()))
        })?,
        None => {
            if Campaign::default_for(opts.command).is_none() || opts.command == "run" {
                return Err(Failure::Invalid(format!("`{}` requires --config", opts.command)));
            }
            json!({ "campaign": { "kind": opts.command } }).to_string()
        }
    };
    Ok(parse_config(&text)?)
}
