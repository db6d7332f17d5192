//! Shared fixtures for the criterion benchmarks.

use varkelly_core::{GameSpec, PayoffDistribution};

/// Named games covering the atom, density and heavy-tail code paths.
pub fn fixture_games() -> Vec<(&'static str, GameSpec)> {
    let two_atoms = PayoffDistribution::atoms(vec![(1.0, 0.5), (2.0, 0.5)]);
    let uniform = PayoffDistribution::uniform(1.0, 2.0);
    let histogram = PayoffDistribution::histogram(vec![0.0, 0.5, 1.0, 2.0, 4.0], vec![0.1, 0.3, 0.4, 0.2]);
    let pareto = PayoffDistribution::pareto(2.5, 0.5);
    let mixture = PayoffDistribution::mixture(vec![
        (0.6, PayoffDistribution::uniform(0.2, 1.5)),
        (0.4, PayoffDistribution::pareto(1.8, 1.0)),
    ]);
    [
        ("two_atoms", 0.6, two_atoms),
        ("uniform", 0.6, uniform),
        ("histogram", 0.55, histogram),
        ("pareto", 0.6, pareto),
        ("mixture", 0.5, mixture),
    ]
    .into_iter()
    .map(|(name, p, d)| (name, GameSpec::new(p, d).expect("fixture games are valid")))
    .collect()
}
