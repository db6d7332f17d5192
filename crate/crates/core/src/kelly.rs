//! Optimal betting fractions for games with a random payoff.
//!
//! A round is won with probability `p`; a win pays `b`-to-1 where `b` is drawn
//! from a [`PayoffDistribution`], a loss forfeits the stake. Betting the
//! fraction `f` of the bankroll gives the expected log growth
//!
//! ```text
//! g(f)  = (1 - p) ln(1 - f) + p E[ln(1 + b f)]
//! g'(f) = p E[b / (1 + b f)] - (1 - p) / (1 - f)
//! ```
//!
//! `g'` is strictly decreasing, positive at `0` exactly when the game has a
//! positive edge, and tends to `-inf` as `f -> 1`, so the optimal fraction is
//! the unique root of `g'` and is found here by bisection. For a constant
//! payoff the root is the classical `(p (1 + b) - 1) / b`; for any other
//! payoff distribution it is strictly smaller than the classical fraction
//! evaluated at the mean payoff.

use serde::{Deserialize, Serialize};

use crate::dist::PayoffDistribution;
use crate::error::{Error, Result};
use crate::quadrature::QuadConfig;

/// Default bracket-width tolerance on `f`.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Distance of the upper bracket endpoint from 1.
pub const UPPER_EPS: f64 = 1e-12;
/// Bisection iteration cap.
pub const MAX_BISECTIONS: u32 = 200;
/// Target for `|g'(f_hat)|` once the bracket is narrower than the tolerance.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Quadrature noise allowance on the Jensen gap.
pub const JENSEN_TOL: f64 = 1e-9;

/// Win probability plus payoff distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct GameSpec {
    p: f64,
    dist: PayoffDistribution,
    quad: QuadConfig,
}

impl GameSpec {
    pub fn new(p: f64, dist: PayoffDistribution) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidProbability(p));
        }
        dist.validate().into_result()?;
        Ok(Self {
            p,
            dist,
            quad: QuadConfig::default(),
        })
    }

    /// Overrides the quadrature settings used for density integrals.
    pub fn with_quadrature(mut self, quad: QuadConfig) -> Self {
        self.quad = quad;
        self
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        1.0 - self.p
    }

    pub fn dist(&self) -> &PayoffDistribution {
        &self.dist
    }

    pub fn quadrature(&self) -> &QuadConfig {
        &self.quad
    }
}

/// Expected gain per unit staked, `p (1 + b̄) - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeReport {
    pub edge: f64,
    pub favorable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Solved,
    NoBet,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KellySolution {
    pub status: SolveStatus,
    pub f_hat: f64,
    /// `g(f_hat)`.
    pub growth: f64,
    /// `g'(f_hat)`.
    pub residual: f64,
    /// Classical fraction at the mean payoff, `f*(p, b̄)`.
    pub f_star_mean: f64,
    /// `f_star_mean - f_hat`.
    pub jensen_gap: f64,
    pub edge: f64,
    pub iterations: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub tol: f64,
    pub upper_eps: f64,
    pub max_iter: u32,
    pub residual_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            upper_eps: UPPER_EPS,
            max_iter: MAX_BISECTIONS,
            residual_tol: RESIDUAL_TOL,
        }
    }
}

pub fn edge(game: &GameSpec) -> Result<EdgeReport> {
    let edge = game.p * (1.0 + game.dist.mean_payoff()?) - 1.0;
    Ok(EdgeReport {
        edge,
        favorable: edge > 0.0,
    })
}

/// Classical Kelly fraction `(p (1 + b) - 1) / b` for a constant payoff.
pub fn classical_fraction(p: f64, b: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::InvalidOdds(b));
    }
    let edge = p * (1.0 + b) - 1.0;
    if edge <= 0.0 {
        return Err(Error::NotFavorable { edge });
    }
    Ok(edge / b)
}

fn check_fraction(f: f64) -> Result<()> {
    if (0.0..1.0).contains(&f) {
        Ok(())
    } else {
        Err(Error::Domain(f))
    }
}

/// Expected log growth per round, `g(f)`.
pub fn growth_rate(game: &GameSpec, f: f64) -> Result<f64> {
    check_fraction(f)?;
    let win = game.dist.log_growth_win_with(f, &game.quad)?;
    Ok(game.q() * (-f).ln_1p() + game.p * win)
}

/// `g'(f) = p M(f) - q / (1 - f)`.
pub fn growth_derivative(game: &GameSpec, f: f64) -> Result<f64> {
    check_fraction(f)?;
    let m = game.dist.payoff_transform_with(f, &game.quad)?;
    Ok(game.p * m - game.q() / (1.0 - f))
}

pub fn solve_kelly(game: &GameSpec, tol: f64) -> Result<KellySolution> {
    solve_kelly_with(
        game,
        &SolverConfig {
            tol,
            ..SolverConfig::default()
        },
    )
}

pub fn solve_kelly_with(game: &GameSpec, cfg: &SolverConfig) -> Result<KellySolution> {
    if !(cfg.tol > 0.0) {
        return Err(Error::InvalidConfig(format!("tolerance {} must be positive", cfg.tol)));
    }
    if !(cfg.upper_eps > 0.0 && cfg.upper_eps < 1.0) {
        return Err(Error::InvalidConfig(format!("upper_eps {} outside (0, 1)", cfg.upper_eps)));
    }

    let EdgeReport { edge, favorable } = edge(game)?;
    if !favorable {
        return Ok(KellySolution {
            status: SolveStatus::NoBet,
            f_hat: 0.0,
            growth: 0.0,
            residual: growth_derivative(game, 0.0)?,
            f_star_mean: 0.0,
            jensen_gap: 0.0,
            edge,
            iterations: 0,
        });
    }

    let mean = game.dist.mean_payoff()?;
    let f_star_mean = classical_fraction(game.p, mean)?;

    let (mut lo, mut hi) = (0.0, 1.0 - cfg.upper_eps);
    if growth_derivative(game, hi)? >= 0.0 {
        return Err(Error::NoBracket { lo, hi });
    }

    let mut iterations = 0;
    let mut mid = 0.5 * (lo + hi);
    let mut residual = growth_derivative(game, mid)?;
    loop {
        let width = hi - lo;
        let narrow = width <= cfg.tol;
        if narrow && residual.abs() <= cfg.residual_tol {
            break;
        }
        // bracket collapsed to adjacent floats
        if narrow && (mid <= lo || mid >= hi) {
            break;
        }
        if iterations >= cfg.max_iter {
            if narrow {
                break;
            }
            return Err(Error::NonConvergence { iterations, width });
        }
        if residual > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        mid = 0.5 * (lo + hi);
        residual = growth_derivative(game, mid)?;
        iterations += 1;
    }

    let f_hat = mid;
    Ok(KellySolution {
        status: SolveStatus::Solved,
        f_hat,
        growth: growth_rate(game, f_hat)?,
        residual,
        f_star_mean,
        jensen_gap: f_star_mean - f_hat,
        edge,
        iterations,
    })
}

/// `(f_hat, f*(p, b̄), f* - f_hat)` for a favorable game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JensenComparison {
    pub f_hat: f64,
    pub f_star: f64,
    pub gap: f64,
}

pub fn jensen_compare(game: &GameSpec) -> Result<JensenComparison> {
    let report = edge(game)?;
    if !report.favorable {
        return Err(Error::NotFavorable { edge: report.edge });
    }
    let sol = solve_kelly(game, DEFAULT_TOL)?;
    let mut gap = sol.jensen_gap;
    // Noise-level negatives are clamped; anything larger means a real defect.
    if gap < 0.0 && gap >= -JENSEN_TOL {
        gap = 0.0;
    }
    Ok(JensenComparison {
        f_hat: sol.f_hat,
        f_star: sol.f_star_mean,
        gap,
    })
}

/// Samples of `(f, g(f))` on `f_j = j / (m + 1)`, `j = 0..=m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthCurve {
    pub points: Vec<(f64, f64)>,
}

impl GrowthCurve {
    pub fn step(&self) -> f64 {
        match self.points.as_slice() {
            [a, b, ..] => b.0 - a.0,
            _ => 0.0,
        }
    }

    /// Fraction of the largest sampled growth (first one on ties).
    pub fn argmax(&self) -> f64 {
        self.points
            .iter()
            .fold(None::<(f64, f64)>, |best, &(f, g)| match best {
                Some((_, bg)) if bg >= g => best,
                _ => Some((f, g)),
            })
            .map_or(0.0, |(f, _)| f)
    }

    pub fn second_differences(&self) -> Vec<f64> {
        self.points
            .windows(3)
            .map(|w| w[0].1 - 2.0 * w[1].1 + w[2].1)
            .collect()
    }
}

pub fn growth_curve(game: &GameSpec, m: usize) -> Result<GrowthCurve> {
    if m < 2 {
        return Err(Error::InvalidConfig(format!("curve needs m >= 2 samples, got {m}")));
    }
    let denom = (m + 1) as f64;
    let points = (0..=m)
        .map(|j| {
            let f = j as f64 / denom;
            growth_rate(game, f).map(|g| (f, g))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GrowthCurve { points })
}
