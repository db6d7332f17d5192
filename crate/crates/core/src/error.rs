use thiserror::Error;

use crate::dist::ValidationReport;
use crate::quadrature::QuadratureError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid payoff distribution: {0}")]
    InvalidDistribution(ValidationReport),
    #[error("infinite mean payoff: pareto alpha {alpha} <= 1")]
    InfiniteMean { alpha: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("win probability {0} is outside (0, 1)")]
    InvalidProbability(f64),
    #[error("payoff odds {0} must be positive")]
    InvalidOdds(f64),
    #[error("game is not favorable (edge {edge})")]
    NotFavorable { edge: f64 },
    #[error("betting fraction {0} is outside [0, 1)")]
    Domain(f64),
    #[error("root bracket [{lo}, {hi}] does not straddle a sign change")]
    NoBracket { lo: f64, hi: f64 },
    #[error("solver did not converge in {iterations} iterations (bracket width {width})")]
    NonConvergence { iterations: u32, width: f64 },
    #[error("mixture transform {mixture} disagrees with component sum {components}")]
    ConsistencyFailure { mixture: f64, components: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
