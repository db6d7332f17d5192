//! Monte Carlo simulation of repeated play.
//!
//! Each path starts from `x0` and plays `n_rounds` rounds: a win (probability
//! `p`) draws a payoff `b` and multiplies the bankroll by `1 + b f`, a loss
//! multiplies it by `1 - f`. Bankrolls are tracked as sums of logs.
//!
//! Path `k` draws from its own ChaCha8 stream (`seed`, stream `k`), so a
//! result depends only on the inputs, never on how paths are scheduled across
//! threads. The draws never depend on `f` either, which makes every call with
//! the same seed share common random numbers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kelly::GameSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n_rounds: u64,
    pub n_paths: u64,
    pub f: f64,
    pub seed: u64,
    pub x0: f64,
}

impl SimConfig {
    pub fn new(n_rounds: u64, n_paths: u64, f: f64, seed: u64) -> Self {
        Self {
            n_rounds,
            n_paths,
            f,
            seed,
            x0: 1.0,
        }
    }

    pub fn with_fraction(self, f: f64) -> Self {
        Self { f, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_rounds == 0 {
            return Err(Error::InvalidConfig("n_rounds must be at least 1".into()));
        }
        if self.n_paths == 0 {
            return Err(Error::InvalidConfig("n_paths must be at least 1".into()));
        }
        if !(self.x0 > 0.0 && self.x0.is_finite()) {
            return Err(Error::InvalidConfig(format!("x0 {} must be positive", self.x0)));
        }
        check_fraction(self.f)
    }
}

fn check_fraction(f: f64) -> Result<()> {
    if (0.0..1.0).contains(&f) {
        Ok(())
    } else {
        Err(Error::Domain(f))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub f: f64,
    pub n_rounds: u64,
    pub n_paths: u64,
    pub seed: u64,
    pub x0: f64,
    pub mean_growth: f64,
    /// Sample standard deviation of the per-path growth rates.
    pub std_growth: f64,
    /// `ln X_n` of the worst path.
    pub min_log_bankroll: f64,
    /// `ln X_n` of the best path.
    pub max_log_bankroll: f64,
    /// Per-path `G_n = ln(X_n / x0) / n_rounds`, in path order.
    pub growth_rates: Vec<f64>,
}

impl SimResult {
    /// Standard error of `mean_growth`.
    pub fn std_error(&self) -> f64 {
        self.std_growth / (self.n_paths as f64).sqrt()
    }
}

pub fn simulate(game: &GameSpec, cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let mut out = simulate_fractions(game, &[cfg.f], cfg)?;
    Ok(out.remove(0))
}

/// Runs every fraction in `fractions` against the same draws. `cfg.f` is ignored.
pub fn simulate_fractions(game: &GameSpec, fractions: &[f64], cfg: &SimConfig) -> Result<Vec<SimResult>> {
    cfg.with_fraction(0.0).validate()?;
    for &f in fractions {
        check_fraction(f)?;
    }
    let loss_logs: Vec<f64> = fractions.iter().map(|&f| (-f).ln_1p()).collect();

    let per_path: Vec<Vec<f64>> = (0..cfg.n_paths)
        .into_par_iter()
        .map(|k| play_path(game, fractions, &loss_logs, cfg, k))
        .collect();

    let n = cfg.n_rounds as f64;
    let ln_x0 = cfg.x0.ln();
    let results = fractions
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            let log_growth: Vec<f64> = per_path.iter().map(|logs| logs[i]).collect();
            let growth_rates: Vec<f64> = log_growth.iter().map(|s| s / n).collect();
            let (mean_growth, std_growth) = mean_and_std(&growth_rates);
            let (lo, hi) = log_growth
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &s| (lo.min(s), hi.max(s)));
            SimResult {
                f,
                n_rounds: cfg.n_rounds,
                n_paths: cfg.n_paths,
                seed: cfg.seed,
                x0: cfg.x0,
                mean_growth,
                std_growth,
                min_log_bankroll: ln_x0 + lo,
                max_log_bankroll: ln_x0 + hi,
                growth_rates,
            }
        })
        .collect();
    Ok(results)
}

/// The RNG for path `k`.
pub fn path_rng(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng
}

// Returns ln(X_n / x0) for each fraction.
fn play_path(game: &GameSpec, fractions: &[f64], loss_logs: &[f64], cfg: &SimConfig, k: u64) -> Vec<f64> {
    let mut rng = path_rng(cfg.seed, k);
    let p = game.p();
    let dist = game.dist();
    let mut win_logs = vec![0.0; fractions.len()];
    let mut losses = 0u64;
    for _ in 0..cfg.n_rounds {
        if rng.random::<f64>() < p {
            let b = dist.sample(&mut rng);
            for (acc, &f) in win_logs.iter_mut().zip(fractions) {
                *acc += (b * f).ln_1p();
            }
        } else {
            losses += 1;
        }
    }
    win_logs
        .iter()
        .zip(loss_logs)
        .map(|(w, l)| w + losses as f64 * l)
        .collect()
}

fn mean_and_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// One grid point of [`grid_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub f: f64,
    pub mean_growth: f64,
    pub std_error: f64,
}

/// Mean simulated growth at `f_j = j / (grid_size + 1)`, `j = 0..=grid_size`,
/// all on common random numbers.
pub fn grid_scan(game: &GameSpec, grid_size: usize, cfg: &SimConfig) -> Result<Vec<GridPoint>> {
    if grid_size < 3 {
        return Err(Error::InvalidConfig(format!("grid_size must be at least 3, got {grid_size}")));
    }
    let denom = (grid_size + 1) as f64;
    let fractions: Vec<f64> = (0..=grid_size).map(|j| j as f64 / denom).collect();
    Ok(simulate_fractions(game, &fractions, cfg)?
        .into_iter()
        .map(|r| GridPoint {
            f: r.f,
            mean_growth: r.mean_growth,
            std_error: r.std_error(),
        })
        .collect())
}

/// Grid fraction with the largest simulated mean growth.
pub fn grid_argmax(game: &GameSpec, grid_size: usize, cfg: &SimConfig) -> Result<f64> {
    let scan = grid_scan(game, grid_size, cfg)?;
    let best = scan
        .iter()
        .fold(None::<&GridPoint>, |best, pt| match best {
            Some(b) if b.mean_growth >= pt.mean_growth => best,
            _ => Some(pt),
        })
        .map_or(0.0, |pt| pt.f);
    Ok(best)
}
