use std::fmt;
use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use varkelly_core::{
    build_empirical, growth_curve, jensen_compare, load_trades, simulate as run_simulation, solve_kelly, Error,
    GameSpec, IngestError, PayoffDistribution, SimConfig, SolveStatus,
};

use crate::output::{num, nums};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Convergence(String),
    NotFavorable(String),
    Degenerate(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Convergence(_) => 3,
            CliError::NotFavorable(_) => 4,
            CliError::Degenerate(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Convergence(m) | CliError::NotFavorable(m) | CliError::Degenerate(m) => {
                f.write_str(m)
            }
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Quadrature(_) | Error::NonConvergence { .. } | Error::NoBracket { .. } => CliError::Convergence(msg),
            Error::NotFavorable { .. } => CliError::NotFavorable(msg),
            _ => CliError::Input(msg),
        }
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        match e {
            IngestError::DegenerateSample { .. } => CliError::Degenerate(e.to_string()),
            IngestError::Parse(rows) => CliError::Input(
                rows.iter()
                    .map(|r| r.to_string())
                    .collect::<Vec<_>>()
                    .join("; "),
            ),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

pub fn parse_dist(inline: Option<&str>, file: Option<&Path>) -> Result<PayoffDistribution, CliError> {
    let text = match (inline, file) {
        (Some(s), None) => s.to_owned(),
        (None, Some(path)) => fs::read_to_string(path).map_err(|e| io_error(path, e))?,
        _ => return Err(CliError::Input("give exactly one of --dist or --dist-file".into())),
    };
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("invalid distribution spec: {e}")))
}

fn write_or_return(out: Option<&Path>, body: String) -> Result<String, CliError> {
    match out {
        Some(path) => {
            fs::write(path, format!("{body}\n")).map_err(|e| io_error(path, e))?;
            Ok(String::new())
        }
        None => Ok(body),
    }
}

pub fn solve(game: &GameSpec, tol: f64) -> Result<String, CliError> {
    let sol = solve_kelly(game, tol)?;
    let status = match sol.status {
        SolveStatus::Solved => "solved",
        SolveStatus::NoBet => "no_bet",
    };
    Ok(json!({
        "status": status,
        "f_hat": num(sol.f_hat),
        "growth": num(sol.growth),
        "residual": num(sol.residual),
        "f_star_mean": num(sol.f_star_mean),
        "jensen_gap": num(sol.jensen_gap),
        "edge": num(sol.edge),
    })
    .to_string())
}

pub fn curve(game: &GameSpec, m: usize, out: Option<&Path>) -> Result<String, CliError> {
    let curve = growth_curve(game, m)?;
    let mut csv = String::from("f,g");
    for &(f, g) in &curve.points {
        csv.push_str(&format!("\n{},{}", crate::output::sig12(f), crate::output::sig12(g)));
    }
    write_or_return(out, csv)
}

pub fn simulate(game: &GameSpec, cfg: &SimConfig, threads: Option<usize>) -> Result<String, CliError> {
    let result = match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Input(format!("cannot start {n} threads: {e}")))?;
            pool.install(|| run_simulation(game, cfg))?
        }
        None => run_simulation(game, cfg)?,
    };
    Ok(json!({
        "f": num(result.f),
        "n_rounds": result.n_rounds,
        "n_paths": result.n_paths,
        "seed": result.seed,
        "x0": num(result.x0),
        "mean_growth": num(result.mean_growth),
        "std_growth": num(result.std_growth),
        "min_log_bankroll": num(result.min_log_bankroll),
        "max_log_bankroll": num(result.max_log_bankroll),
        "growth_rates": nums(&result.growth_rates),
    })
    .to_string())
}

pub fn compare(game: &GameSpec) -> Result<String, CliError> {
    let cmp = jensen_compare(game)?;
    Ok(json!({
        "f_hat": num(cmp.f_hat),
        "f_star": num(cmp.f_star),
        "gap": num(cmp.gap),
    })
    .to_string())
}

pub fn ingest(
    csv: &Path,
    bins: Option<usize>,
    out: Option<&Path>,
    spec_out: Option<&Path>,
) -> Result<String, CliError> {
    let records = load_trades(csv)?;
    let summary = build_empirical(&records, bins)?;
    // the spec keeps full precision so masses still sum to one
    let spec: Value = serde_json::to_value(&summary.dist).map_err(|e| CliError::Input(e.to_string()))?;
    if let Some(path) = spec_out {
        fs::write(path, format!("{spec}\n")).map_err(|e| io_error(path, e))?;
    }
    let body = json!({
        "p_hat": num(summary.p_hat),
        "dist_spec": spec,
        "n_wins": summary.n_wins,
        "n_losses": summary.n_losses,
    })
    .to_string();
    write_or_return(out, body)
}
