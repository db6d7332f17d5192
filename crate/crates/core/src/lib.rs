//! Kelly betting fractions for repeated games whose payoff is a random
//! variable with a known distribution.
//!
//! The optimal fraction `f_hat` maximizes the expected log growth
//! `g(f) = (1 - p) ln(1 - f) + p E[ln(1 + b f)]` and is the unique root of
//!
//! ```text
//! p E[b / (1 + b f)] = (1 - p) / (1 - f)
//! ```
//!
//! whenever the game is favorable, `p (1 + E[b]) > 1`. It never exceeds the
//! classical fraction computed at the mean payoff.
//!
//! ```
//! use varkelly_core::{solve_kelly, GameSpec, PayoffDistribution, DEFAULT_TOL};
//!
//! let dist = PayoffDistribution::atoms(vec![(1.0, 0.5), (2.0, 0.5)]);
//! let game = GameSpec::new(0.6, dist).unwrap();
//! let sol = solve_kelly(&game, DEFAULT_TOL).unwrap();
//! assert!((sol.f_hat - 0.3233).abs() < 1e-4);
//! assert!(sol.f_hat < sol.f_star_mean);
//! ```

pub mod dist;
pub mod error;
pub mod ingest;
pub mod kelly;
pub mod quadrature;
pub mod sim;

pub use dist::{mixture_linearity_check, PayoffDistribution, ValidationReport, Violation};
pub use error::{Error, Result};
pub use ingest::{
    build_empirical, fit_pareto_tail, load_trades, parse_trades, EmpiricalSummary, IngestError, ParetoFit,
    TradeRecord,
};
pub use kelly::{
    classical_fraction, edge, growth_curve, growth_derivative, growth_rate, jensen_compare, solve_kelly,
    solve_kelly_with, EdgeReport, GameSpec, GrowthCurve, JensenComparison, KellySolution, SolveStatus,
    SolverConfig, DEFAULT_TOL,
};
pub use quadrature::{Integral, QuadConfig};
pub use sim::{grid_argmax, grid_scan, simulate, simulate_fractions, GridPoint, SimConfig, SimResult};
