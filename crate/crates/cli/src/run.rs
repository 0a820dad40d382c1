//! Command execution.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde_json::json;
use spinwire::asymptotics::{predict, smallest_positive_eigenvalue};
use spinwire::dynamics::{bell_fidelity, bell_overlap, series_from, site_probabilities, time_grid, Propagator};
use spinwire::experiments::figures::a_grid;
use spinwire::experiments::{coarse_step, figure_data, sweep, sweep_with, transfer_time, Cell, Figure, FigureParams, Table};
use spinwire::spectral::{analytic_regime, cross_validate, decompose, default_method, CrossValidation};
use spinwire::wire::initial_excitation_state;
use spinwire::{EigenDecomposition, Error, Method, WireParams};

use crate::config::{Command, MethodChoice, RunConfig};
use crate::error::CliError;

const DEFAULT_A_STEPS: usize = 10;
const MIN_DEFAULT_WINDOW: f64 = 100.0;

type Result<T> = std::result::Result<T, CliError>;

/// What a run produced besides the main CSV.
#[derive(Debug, Default)]
pub struct Outcome {
    pub rows: usize,
    pub cross_validation: Option<CrossValidation>,
}

fn need<T: Clone>(value: &Option<T>, command: Command, field: &'static str) -> Result<T> {
    value.clone().ok_or(CliError::Missing { command: command.to_string(), field })
}

fn wire(cfg: &RunConfig, command: Command) -> Result<WireParams<f64>> {
    Ok(WireParams::new(need(&cfg.n, command, "n")?, need(&cfg.a, command, "a")?)?)
}

/// `max(2τ, 100)` from the small-coupling prediction.
fn default_window(p: &WireParams<f64>) -> f64 {
    predict(p).map_or(MIN_DEFAULT_WINDOW, |pr| (2.0 * pr.tau).max(MIN_DEFAULT_WINDOW))
}

fn check_regime(p: &WireParams<f64>, method: MethodChoice) -> Result<()> {
    if matches!(method, MethodChoice::Analytic | MethodChoice::Both) && !analytic_regime(p) {
        return Err(Error::Regime { a: p.a() }.into());
    }
    Ok(())
}

/// The requested decomposition; with `both`, the analytic one plus the
/// comparison against the oracle.
fn decomposition(
    p: &WireParams<f64>,
    method: MethodChoice,
) -> Result<(EigenDecomposition<f64>, Option<CrossValidation>)> {
    check_regime(p, method)?;
    Ok(match method {
        MethodChoice::Auto => (decompose(p, default_method(p))?, None),
        MethodChoice::Analytic => (decompose(p, Method::Analytic)?, None),
        MethodChoice::Oracle => (decompose(p, Method::Oracle)?, None),
        MethodChoice::Both => {
            let analytic = decompose(p, Method::Analytic)?;
            let oracle = decompose(p, Method::Oracle)?;
            let cv = cross_validate(&analytic, &oracle)?;
            (analytic, Some(cv))
        }
    })
}

/// Fills every default the command uses, so the header records the full run.
pub fn resolve(cfg: &RunConfig) -> Result<RunConfig> {
    let command = cfg.command.ok_or(CliError::Missing { command: "spinwire".into(), field: "command" })?;
    let mut r = cfg.clone();
    r.method = Some(cfg.method.unwrap_or_default());
    match command {
        Command::Spectrum | Command::Predict => {
            wire(cfg, command)?;
        }
        Command::Evolve | Command::Pmax | Command::Bell => {
            let p = wire(cfg, command)?;
            r.t_max = Some(cfg.t_max.unwrap_or_else(|| default_window(&p)));
            if command == Command::Evolve {
                r.dt = Some(cfg.dt.unwrap_or_else(|| coarse_step(&p)));
                r.full = Some(cfg.full.unwrap_or(false));
            }
        }
        Command::Sweep => {
            need(&cfg.n_list, command, "n-list")?;
            if cfg.a_list.is_none() {
                need(&cfg.a_max, command, "a-max")?;
                r.a_steps = Some(cfg.a_steps.unwrap_or(DEFAULT_A_STEPS));
            }
        }
        Command::Figure => {
            let figure: Figure = need(&cfg.figure, command, "figure")?.parse()?;
            let f = figure_params(cfg).resolve(figure);
            r.figure = Some(figure.to_string());
            r.n_list = Some(f.n_list);
            r.t_max = Some(f.t_max);
            r.dt = Some(f.dt);
            if figure != Figure::Fig5 && cfg.a.is_none() {
                r.a_max = Some(*f.a_values.last().expect("non-empty grid"));
                r.a_steps = Some(f.a_values.len());
            }
        }
    }
    Ok(r)
}

fn figure_params(cfg: &RunConfig) -> FigureParams {
    FigureParams {
        n_list: cfg.n_list.clone(),
        a: cfg.a,
        a_min: cfg.a_min,
        a_max: cfg.a_max,
        a_steps: cfg.a_steps,
        t_max: cfg.t_max,
        dt: cfg.dt,
    }
}

fn num(x: f64) -> Cell {
    Cell::Num(x)
}

fn spectrum(cfg: &RunConfig, outcome: &mut Outcome) -> Result<Table> {
    let p = wire(cfg, Command::Spectrum)?;
    let (d, cv) = decomposition(&p, cfg.method.unwrap_or_default())?;
    let mut table = Table::new(["lambda", "gamma", "mu", "v0", "vn1"]);
    for pair in d.pairs() {
        table.push(vec![
            num(pair.lambda),
            pair.gamma_or_acos().map_or(Cell::Empty, num),
            Cell::Int(pair.parity.as_i8() as i64),
            num(pair.vector[0]),
            num(pair.vector[p.end()]),
        ]);
    }
    if let Some(path) = &cfg.vectors {
        let pairs: Vec<_> = d
            .pairs()
            .iter()
            .map(|e| json!({"lambda": e.lambda, "gamma": e.gamma_or_acos(), "mu": e.parity.as_i8(), "vector": e.vector}))
            .collect();
        let doc = json!({"n": p.n(), "a": p.a(), "method": d.method().as_str(), "pairs": pairs});
        std::fs::write(path, doc.to_string() + "\n").map_err(|e| CliError::io(path, e))?;
    }
    outcome.cross_validation = cv;
    Ok(table)
}

fn evolve(cfg: &RunConfig, outcome: &mut Outcome) -> Result<Table> {
    let p = wire(cfg, Command::Evolve)?;
    let (d, cv) = decomposition(&p, cfg.method.unwrap_or_default())?;
    outcome.cross_validation = cv;
    let prop = Propagator::new(&d, &initial_excitation_state(&p))?;
    let times = time_grid(cfg.t_max.unwrap(), cfg.dt.unwrap())?;
    if cfg.full == Some(true) {
        let header: Vec<String> = std::iter::once("t".to_string()).chain((0..p.dim()).map(|j| format!("P{j}"))).collect();
        let mut table = Table::new(header);
        for &t in &times {
            let snap = site_probabilities(&prop.state(t), t);
            table.push_nums(std::iter::once(t).chain(snap.p_site.iter().copied()));
        }
        return Ok(table);
    }
    let s = series_from(&prop, &times);
    let mut table = Table::new(["t", "P0", "Pend", "Pnet"]);
    for i in 0..s.len() {
        table.push_nums([s.times[i], s.p0[i], s.p_end[i], s.p_net[i]]);
    }
    Ok(table)
}

fn pmax(cfg: &RunConfig) -> Result<Table> {
    let p = wire(cfg, Command::Pmax)?;
    let result = sweep(&[p.n()], &[p.a()], cfg.t_max.unwrap())?;
    if let Some(Err(e)) = result.rows.first().map(|r| &r.point) {
        return Err(e.clone().into());
    }
    Ok(result.to_table())
}

fn sweep_cmd(cfg: &RunConfig) -> Result<Table> {
    let n_list = cfg.n_list.clone().unwrap();
    let a_list = match &cfg.a_list {
        Some(list) => list.clone(),
        None => a_grid(cfg.a_min, cfg.a_max.unwrap(), cfg.a_steps.unwrap()),
    };
    let result = match cfg.t_max {
        Some(t_max) => sweep(&n_list, &a_list, t_max)?,
        None => {
            let grid = n_list.iter().flat_map(|&n| a_list.iter().map(move |&a| (n, a))).collect();
            sweep_with(grid, default_window)?
        }
    };
    let mut table = result.to_table();
    if cfg.t_max.is_none() {
        table.comment("t-max per point: max(2 tau_pred, 100)");
    }
    Ok(table)
}

fn predict_cmd(cfg: &RunConfig) -> Result<Table> {
    let p = wire(cfg, Command::Predict)?;
    let pr = predict(&p)?;
    let (d, _) = decomposition(&p, cfg.method.unwrap_or_default())?;
    let lambda_hat = smallest_positive_eigenvalue(&d)?;
    let mut table = Table::new([
        "n", "a", "parity", "lambda_hat_pred", "tau_pred", "speed", "delta", "loss_scale", "lambda_hat",
    ]);
    table.push(vec![
        Cell::Int(p.n() as i64),
        num(p.a()),
        Cell::Text(pr.parity.as_str().into()),
        num(pr.lambda_hat),
        num(pr.tau),
        num(pr.speed),
        num(pr.delta),
        num(pr.fidelity_loss_scale),
        num(lambda_hat),
    ]);
    Ok(table)
}

fn bell(cfg: &RunConfig, outcome: &mut Outcome) -> Result<Table> {
    let p = wire(cfg, Command::Bell)?;
    let (d, cv) = decomposition(&p, cfg.method.unwrap_or_default())?;
    outcome.cross_validation = cv;
    let tau = transfer_time(&p, cfg.t_max.unwrap())?;
    let t = cfg.t.unwrap_or(tau / 2.0);
    let psi = Propagator::new(&d, &initial_excitation_state(&p))?.state(t);
    let snap = site_probabilities(&psi, t);
    let mut table = Table::new(["t", "tau", "bell_fidelity", "bell_overlap", "P0", "Pend", "Pnet"]);
    table.push_nums([t, tau, bell_fidelity(&psi), bell_overlap(&psi), snap.source(), snap.destination(), snap.p_net]);
    Ok(table)
}

fn figure(cfg: &RunConfig) -> Result<Table> {
    let figure: Figure = cfg.figure.as_deref().unwrap_or_default().parse()?;
    Ok(figure_data(figure, &figure_params(cfg))?)
}

fn pool(command: Command, jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let threads = match command {
        Command::Sweep | Command::Figure => jobs.unwrap_or(0),
        _ => 1,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

/// Provenance line: the resolved config minus output locations.
fn provenance(r: &RunConfig) -> String {
    let shown = RunConfig { out: None, report: None, vectors: None, jobs: None, ..r.clone() };
    format!("spinwire {} config {}", env!("CARGO_PKG_VERSION"), shown.to_json())
}

fn write_table(table: &Table, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::io(path, e))?;
            let mut w = BufWriter::new(file);
            table.write_csv(&mut w).and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            table.write_csv(&mut w).and_then(|_| w.flush()).map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

/// Report path: `--report`, else next to `--out`.
fn report_path(r: &RunConfig) -> Option<std::path::PathBuf> {
    r.report.clone().or_else(|| r.out.as_ref().map(|o| o.with_extension("crossval.json")))
}

/// Runs a resolved config and writes its outputs.
pub fn run(resolved: &RunConfig) -> Result<Outcome> {
    let command = resolved.command.expect("resolved config has a command");
    let mut outcome = Outcome::default();
    let mut table = pool(command, resolved.jobs)?.install(|| match command {
        Command::Spectrum => spectrum(resolved, &mut outcome),
        Command::Evolve => evolve(resolved, &mut outcome),
        Command::Pmax => pmax(resolved),
        Command::Sweep => sweep_cmd(resolved),
        Command::Predict => predict_cmd(resolved),
        Command::Bell => bell(resolved, &mut outcome),
        Command::Figure => figure(resolved),
    })?;

    let mut header = vec![provenance(resolved)];
    if let Some(cv) = &outcome.cross_validation {
        header.push(format!(
            "cross-validation max_eigenvalue_diff={:e} max_eigenvector_diff={:e}",
            cv.max_eigenvalue_diff, cv.max_eigenvector_diff
        ));
        let doc = json!({
            "n": resolved.n,
            "a": resolved.a,
            "max_eigenvalue_diff": cv.max_eigenvalue_diff,
            "max_eigenvector_diff": cv.max_eigenvector_diff,
        });
        match report_path(resolved) {
            Some(path) => std::fs::write(&path, doc.to_string() + "\n").map_err(|e| CliError::io(&path, e))?,
            None => header.push(format!("report {doc}")),
        }
    }
    header.append(&mut table.comments);
    table.comments = header;
    outcome.rows = table.rows.len();
    write_table(&table, resolved.out.as_deref())?;
    Ok(outcome)
}
