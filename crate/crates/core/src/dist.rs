//! Payoff distributions and the integral transforms the Kelly equations need.
//!
//! A [`PayoffDistribution`] describes the random `b`-to-1 payoff received on a
//! winning round. Every family supported here reduces its expectations to
//! either a finite sum over atoms or a quadrature over a bounded interval:
//!
//! * `M(f) = E[b / (1 + b f)]` ([`PayoffDistribution::payoff_transform`]),
//!   the term of the first-order optimality condition;
//! * `L(f) = E[ln(1 + b f)]` ([`PayoffDistribution::log_growth_win`]),
//!   the winning-round part of the expected log growth.
//!
//! The JSON form is a tagged object, e.g. `{"type":"dirac","b":1.0}` or
//! `{"type":"mixture","parts":[[0.5,{"type":"dirac","b":1}],[0.5,{"type":"uniform","lo":1,"hi":2}]]}`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadConfig};

/// Default tolerance on total probability mass.
pub const MASS_TOL: f64 = 1e-12;

/// Tolerance used by [`mixture_linearity_check`].
pub const LINEARITY_TOL: f64 = 1e-9;

/// Distribution of the payoff `b >= 0` on a winning round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum PayoffDistribution {
    /// Constant payoff `b`.
    Dirac { b: f64 },
    /// Point masses `(b_k, w_k)`.
    Atoms { points: Vec<(f64, f64)> },
    /// Uniform density on `[lo, hi]`.
    Uniform { lo: f64, hi: f64 },
    /// Piecewise-constant density; `masses[i]` is spread evenly over
    /// `[edges[i], edges[i + 1]]`.
    Histogram { edges: Vec<f64>, masses: Vec<f64> },
    /// Pareto tail with density `alpha * xmin^alpha / b^(alpha + 1)` on `[xmin, inf)`.
    Pareto { alpha: f64, xmin: f64 },
    /// Weighted mixture `(weight, component)`.
    Mixture { parts: Vec<(f64, PayoffDistribution)> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonFinite(&'static str),
    NegativePayoff { value: f64 },
    NegativeWeight { weight: f64 },
    MassSum { total: f64 },
    Empty(&'static str),
    BadInterval { lo: f64, hi: f64 },
    EdgesNotIncreasing { index: usize },
    LengthMismatch { edges: usize, masses: usize },
    InfiniteMean { alpha: f64 },
    NonPositiveScale { xmin: f64 },
    Component { index: usize, inner: Box<Violation> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonFinite(what) => write!(f, "non-finite {what}"),
            Violation::NegativePayoff { value } => write!(f, "negative payoff {value}"),
            Violation::NegativeWeight { weight } => write!(f, "negative weight {weight}"),
            Violation::MassSum { total } => write!(f, "mass sums to {total}"),
            Violation::Empty(what) => write!(f, "{what} is empty"),
            Violation::BadInterval { lo, hi } => write!(f, "interval [{lo}, {hi}] needs 0 <= lo < hi"),
            Violation::EdgesNotIncreasing { index } => {
                write!(f, "histogram edges not strictly increasing at index {index}")
            }
            Violation::LengthMismatch { edges, masses } => write!(
                f,
                "histogram has {edges} edges and {masses} masses (need masses + 1 edges)"
            ),
            Violation::InfiniteMean { alpha } => write!(f, "infinite mean, alpha ≤ 1 (alpha = {alpha})"),
            Violation::NonPositiveScale { xmin } => write!(f, "pareto xmin {xmin} must be positive"),
            Violation::Component { index, inner } => write!(f, "component {index}: {inner}"),
        }
    }
}

/// Outcome of [`PayoffDistribution::validate`]; empty means valid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(Error::InvalidDistribution(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn check_mass(total: f64, mass_tol: f64, out: &mut Vec<Violation>) {
    if !total.is_finite() || (total - 1.0).abs() > mass_tol {
        out.push(Violation::MassSum { total });
    }
}

fn check_fraction(f: f64) -> Result<()> {
    if (0.0..1.0).contains(&f) {
        Ok(())
    } else {
        Err(Error::Domain(f))
    }
}

impl PayoffDistribution {
    pub fn dirac(b: f64) -> Self {
        PayoffDistribution::Dirac { b }
    }

    pub fn atoms(points: impl Into<Vec<(f64, f64)>>) -> Self {
        PayoffDistribution::Atoms {
            points: points.into(),
        }
    }

    pub fn uniform(lo: f64, hi: f64) -> Self {
        PayoffDistribution::Uniform { lo, hi }
    }

    pub fn histogram(edges: impl Into<Vec<f64>>, masses: impl Into<Vec<f64>>) -> Self {
        PayoffDistribution::Histogram {
            edges: edges.into(),
            masses: masses.into(),
        }
    }

    pub fn pareto(alpha: f64, xmin: f64) -> Self {
        PayoffDistribution::Pareto { alpha, xmin }
    }

    pub fn mixture(parts: impl Into<Vec<(f64, PayoffDistribution)>>) -> Self {
        PayoffDistribution::Mixture {
            parts: parts.into(),
        }
    }

    /// True for a point mass, including atom lists and mixtures that
    /// collapse onto a single payoff value.
    pub fn is_degenerate(&self) -> bool {
        self.single_point().is_some()
    }

    fn single_point(&self) -> Option<f64> {
        match self {
            PayoffDistribution::Dirac { b } => Some(*b),
            PayoffDistribution::Atoms { points } => {
                let mut support = points.iter().filter(|(_, w)| *w > 0.0).map(|(b, _)| *b);
                let first = support.next()?;
                support.all(|b| b == first).then_some(first)
            }
            PayoffDistribution::Mixture { parts } => {
                let mut support = parts.iter().filter(|(w, _)| *w > 0.0).map(|(_, d)| d.single_point());
                let first = support.next()??;
                support.all(|b| b == Some(first)).then_some(first)
            }
            _ => None,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        self.validate_with(MASS_TOL)
    }

    pub fn validate_with(&self, mass_tol: f64) -> ValidationReport {
        let mut violations = Vec::new();
        self.collect_violations(mass_tol, &mut violations);
        ValidationReport { violations }
    }

    fn collect_violations(&self, mass_tol: f64, out: &mut Vec<Violation>) {
        match self {
            PayoffDistribution::Dirac { b } => {
                if !b.is_finite() {
                    out.push(Violation::NonFinite("payoff"));
                } else if *b < 0.0 {
                    out.push(Violation::NegativePayoff { value: *b });
                }
            }
            PayoffDistribution::Atoms { points } => {
                if points.is_empty() {
                    out.push(Violation::Empty("atom list"));
                    return;
                }
                for &(b, w) in points {
                    if !b.is_finite() || !w.is_finite() {
                        out.push(Violation::NonFinite("atom"));
                        return;
                    }
                    if b < 0.0 {
                        out.push(Violation::NegativePayoff { value: b });
                    }
                    if w < 0.0 {
                        out.push(Violation::NegativeWeight { weight: w });
                    }
                }
                check_mass(points.iter().map(|(_, w)| w).sum(), mass_tol, out);
            }
            PayoffDistribution::Uniform { lo, hi } => {
                if !lo.is_finite() || !hi.is_finite() {
                    out.push(Violation::NonFinite("uniform bound"));
                } else if !(*lo >= 0.0 && lo < hi) {
                    out.push(Violation::BadInterval { lo: *lo, hi: *hi });
                }
            }
            PayoffDistribution::Histogram { edges, masses } => {
                if masses.is_empty() {
                    out.push(Violation::Empty("histogram"));
                    return;
                }
                if edges.len() != masses.len() + 1 {
                    out.push(Violation::LengthMismatch {
                        edges: edges.len(),
                        masses: masses.len(),
                    });
                    return;
                }
                if edges.iter().chain(masses).any(|x| !x.is_finite()) {
                    out.push(Violation::NonFinite("histogram value"));
                    return;
                }
                if edges[0] < 0.0 {
                    out.push(Violation::NegativePayoff { value: edges[0] });
                }
                if let Some(index) = edges.windows(2).position(|w| w[0] >= w[1]) {
                    out.push(Violation::EdgesNotIncreasing { index: index + 1 });
                }
                for &m in masses {
                    if m < 0.0 {
                        out.push(Violation::NegativeWeight { weight: m });
                    }
                }
                check_mass(masses.iter().sum(), mass_tol, out);
            }
            PayoffDistribution::Pareto { alpha, xmin } => {
                if !alpha.is_finite() || !xmin.is_finite() {
                    out.push(Violation::NonFinite("pareto parameter"));
                    return;
                }
                if *alpha <= 1.0 {
                    out.push(Violation::InfiniteMean { alpha: *alpha });
                }
                if *xmin <= 0.0 {
                    out.push(Violation::NonPositiveScale { xmin: *xmin });
                }
            }
            PayoffDistribution::Mixture { parts } => {
                if parts.is_empty() {
                    out.push(Violation::Empty("mixture"));
                    return;
                }
                for (index, (w, part)) in parts.iter().enumerate() {
                    if !w.is_finite() || *w <= 0.0 {
                        out.push(Violation::Component {
                            index,
                            inner: Box::new(Violation::NegativeWeight { weight: *w }),
                        });
                    }
                    let mut inner = Vec::new();
                    part.collect_violations(mass_tol, &mut inner);
                    out.extend(inner.into_iter().map(|v| Violation::Component {
                        index,
                        inner: Box::new(v),
                    }));
                }
                check_mass(parts.iter().map(|(w, _)| w).sum(), mass_tol, out);
            }
        }
    }

    /// Mean payoff `b̄`.
    pub fn mean_payoff(&self) -> Result<f64> {
        Ok(match self {
            PayoffDistribution::Dirac { b } => *b,
            PayoffDistribution::Atoms { points } => points.iter().map(|(b, w)| b * w).sum(),
            PayoffDistribution::Uniform { lo, hi } => 0.5 * (lo + hi),
            PayoffDistribution::Histogram { edges, masses } => masses
                .iter()
                .zip(edges.windows(2))
                .map(|(m, e)| m * 0.5 * (e[0] + e[1]))
                .sum(),
            PayoffDistribution::Pareto { alpha, xmin } => {
                if *alpha <= 1.0 {
                    return Err(Error::InfiniteMean { alpha: *alpha });
                }
                alpha * xmin / (alpha - 1.0)
            }
            PayoffDistribution::Mixture { parts } => {
                let mut acc = 0.0;
                for (w, part) in parts {
                    acc += w * part.mean_payoff()?;
                }
                acc
            }
        })
    }

    /// `E[b^2]`; infinite for Pareto tails with `alpha <= 2`.
    pub fn second_moment(&self) -> f64 {
        match self {
            PayoffDistribution::Dirac { b } => b * b,
            PayoffDistribution::Atoms { points } => points.iter().map(|(b, w)| w * b * b).sum(),
            PayoffDistribution::Uniform { lo, hi } => (lo * lo + lo * hi + hi * hi) / 3.0,
            PayoffDistribution::Histogram { edges, masses } => masses
                .iter()
                .zip(edges.windows(2))
                .map(|(m, e)| m * (e[0] * e[0] + e[0] * e[1] + e[1] * e[1]) / 3.0)
                .sum(),
            PayoffDistribution::Pareto { alpha, xmin } => {
                if *alpha <= 2.0 {
                    f64::INFINITY
                } else {
                    alpha * xmin * xmin / (alpha - 2.0)
                }
            }
            PayoffDistribution::Mixture { parts } => {
                parts.iter().map(|(w, d)| w * d.second_moment()).sum()
            }
        }
    }

    /// Payoff variance (infinite for heavy Pareto tails).
    pub fn variance(&self) -> Result<f64> {
        let mean = self.mean_payoff()?;
        let second = self.second_moment();
        if second.is_infinite() {
            return Ok(f64::INFINITY);
        }
        Ok((second - mean * mean).max(0.0))
    }

    /// `M(f) = E[b / (1 + b f)]` with the default quadrature settings.
    pub fn payoff_transform(&self, f: f64) -> Result<f64> {
        self.payoff_transform_with(f, &QuadConfig::default())
    }

    pub fn payoff_transform_with(&self, f: f64, quad: &QuadConfig) -> Result<f64> {
        check_fraction(f)?;
        self.expectation(f, quad, Transform::Payoff)
    }

    /// `L(f) = E[ln(1 + b f)]` with the default quadrature settings.
    pub fn log_growth_win(&self, f: f64) -> Result<f64> {
        self.log_growth_win_with(f, &QuadConfig::default())
    }

    pub fn log_growth_win_with(&self, f: f64, quad: &QuadConfig) -> Result<f64> {
        check_fraction(f)?;
        self.expectation(f, quad, Transform::LogGrowth)
    }

    fn expectation(&self, f: f64, quad: &QuadConfig, t: Transform) -> Result<f64> {
        match self {
            PayoffDistribution::Dirac { b } => Ok(t.point(*b, f)),
            PayoffDistribution::Atoms { points } => {
                Ok(points.iter().map(|&(b, w)| w * t.point(b, f)).sum())
            }
            PayoffDistribution::Uniform { lo, hi } => {
                if f == 0.0 {
                    return t.at_zero(self);
                }
                let density = 1.0 / (hi - lo);
                let est = integrate(|b| density * t.point(b, f), *lo, *hi, *quad)?;
                Ok(est.value)
            }
            PayoffDistribution::Histogram { edges, masses } => {
                if f == 0.0 {
                    return t.at_zero(self);
                }
                let mut acc = 0.0;
                for (m, e) in masses.iter().zip(edges.windows(2)) {
                    if *m == 0.0 {
                        continue;
                    }
                    let density = m / (e[1] - e[0]);
                    let cfg = QuadConfig {
                        abs_tol: quad.abs_tol * m,
                        ..*quad
                    };
                    acc += integrate(|b| density * t.point(b, f), e[0], e[1], cfg)?.value;
                }
                Ok(acc)
            }
            PayoffDistribution::Pareto { alpha, xmin } => {
                if *alpha <= 1.0 {
                    return Err(Error::InfiniteMean { alpha: *alpha });
                }
                if f == 0.0 {
                    return t.at_zero(self);
                }
                pareto_expectation(*alpha, *xmin, f, quad, t)
            }
            PayoffDistribution::Mixture { parts } => {
                let mut acc = 0.0;
                for (w, part) in parts {
                    let cfg = QuadConfig {
                        abs_tol: quad.abs_tol * w.min(1.0),
                        ..*quad
                    };
                    acc += w * part.expectation(f, &cfg, t)?;
                }
                Ok(acc)
            }
        }
    }

    /// Draws one payoff. Consumes exactly one uniform from `rng` for every
    /// family except mixtures, which consume one to pick a component.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            PayoffDistribution::Dirac { b } => *b,
            PayoffDistribution::Atoms { points } => {
                let u: f64 = rng.random();
                pick_weighted(points.iter().map(|&(b, w)| (w, b)), u)
                    .unwrap_or(0.0)
            }
            PayoffDistribution::Uniform { lo, hi } => {
                let u: f64 = rng.random();
                lo + u * (hi - lo)
            }
            PayoffDistribution::Histogram { edges, masses } => {
                let u: f64 = rng.random();
                histogram_inverse(edges, masses, u)
            }
            PayoffDistribution::Pareto { alpha, xmin } => {
                // 1 - U lies in (0, 1]
                let u: f64 = 1.0 - rng.random::<f64>();
                pareto_from_uniform(*alpha, *xmin, u)
            }
            PayoffDistribution::Mixture { parts } => {
                let u: f64 = rng.random();
                match pick_weighted(parts.iter().map(|(w, d)| (*w, d)), u) {
                    Some(part) => part.sample(rng),
                    None => 0.0,
                }
            }
        }
    }
}

/// Inverse-transform draw from Pareto(alpha, xmin) given `u` in (0, 1]:
/// `xmin * u^(-1/alpha)`.
pub fn pareto_from_uniform(alpha: f64, xmin: f64, u: f64) -> f64 {
    xmin * u.powf(-1.0 / alpha)
}

// Linear scan over cumulative weights; falls back to the last item with
// positive weight when rounding leaves u above the running total.
fn pick_weighted<T>(items: impl Iterator<Item = (f64, T)>, u: f64) -> Option<T> {
    let mut cum = 0.0;
    let mut last = None;
    for (w, item) in items {
        if w <= 0.0 {
            continue;
        }
        cum += w;
        if u < cum {
            return Some(item);
        }
        last = Some(item);
    }
    last
}

fn histogram_inverse(edges: &[f64], masses: &[f64], u: f64) -> f64 {
    let mut cum = 0.0;
    let mut last_bin = None;
    for (i, &m) in masses.iter().enumerate() {
        if m <= 0.0 {
            continue;
        }
        if u < cum + m {
            let t = ((u - cum) / m).clamp(0.0, 1.0);
            return edges[i] + t * (edges[i + 1] - edges[i]);
        }
        cum += m;
        last_bin = Some(i);
    }
    last_bin.map_or(edges[0], |i| edges[i + 1])
}

#[derive(Debug, Clone, Copy)]
enum Transform {
    Payoff,
    LogGrowth,
}

impl Transform {
    fn point(self, b: f64, f: f64) -> f64 {
        match self {
            Transform::Payoff => b / (1.0 + b * f),
            Transform::LogGrowth => (b * f).ln_1p(),
        }
    }

    fn at_zero(self, dist: &PayoffDistribution) -> Result<f64> {
        match self {
            Transform::Payoff => dist.mean_payoff(),
            Transform::LogGrowth => Ok(0.0),
        }
    }
}

/// Substitution exponent for the Pareto tail map `b = xmin * s^(-k)`.
///
/// The mapped measure is `k alpha s^(k alpha - 1) ds` on (0, 1]. With
/// `k >= 2 / (alpha - 1)` every integrand below vanishes at least linearly
/// at `s = 0` and stays smooth there; `k = 1` is the plain `u = xmin / b` map.
fn pareto_exponent(alpha: f64) -> f64 {
    (2.0 / (alpha - 1.0)).max(1.0)
}

fn pareto_expectation(alpha: f64, xmin: f64, f: f64, quad: &QuadConfig, t: Transform) -> Result<f64> {
    let k = pareto_exponent(alpha);
    let ka = k * alpha;
    let c = xmin * f;
    let est = match t {
        Transform::Payoff => integrate(
            |s| {
                if s == 0.0 {
                    return 0.0;
                }
                // b / (1 + b f) with b = xmin s^-k
                ka * xmin * s.powf(ka - 1.0) / (s.powf(k) + c)
            },
            0.0,
            1.0,
            *quad,
        )?,
        Transform::LogGrowth => integrate(
            |s| {
                if s == 0.0 {
                    return 0.0;
                }
                let sk = s.powf(k);
                // ln(1 + c s^-k), arranged to avoid both overflow and cancellation
                let log_term = if sk >= c {
                    (c / sk).ln_1p()
                } else {
                    (sk + c).ln() - k * s.ln()
                };
                ka * s.powf(ka - 1.0) * log_term
            },
            0.0,
            1.0,
            *quad,
        )?,
    };
    Ok(est.value)
}

/// Checks that the mixture transform equals the weighted sum of component
/// transforms and returns the common value.
pub fn mixture_linearity_check(parts: &[(f64, PayoffDistribution)], f: f64) -> Result<f64> {
    let mixture = PayoffDistribution::mixture(parts.to_vec()).payoff_transform(f)?;
    let mut components = 0.0;
    for (w, part) in parts {
        components += w * part.payoff_transform(f)?;
    }
    if (mixture - components).abs() > LINEARITY_TOL || !mixture.is_finite() {
        return Err(Error::ConsistencyFailure {
            mixture,
            components,
        });
    }
    Ok(mixture)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two_atoms() -> PayoffDistribution {
        PayoffDistribution::atoms(vec![(1.0, 0.5), (2.0, 0.5)])
    }

    #[test]
    fn validate_examples() {
        assert!(PayoffDistribution::dirac(1.0).validate().is_ok());

        let report = PayoffDistribution::atoms(vec![(1.0, 0.5), (2.0, 0.4)]).validate();
        assert_eq!(report.violations, vec![Violation::MassSum { total: 0.9 }]);
        assert_eq!(report.to_string(), "mass sums to 0.9");

        let report = PayoffDistribution::pareto(0.9, 1.0).validate();
        assert_eq!(report.violations, vec![Violation::InfiniteMean { alpha: 0.9 }]);
        assert!(report.to_string().starts_with("infinite mean, alpha ≤ 1"));
    }

    #[test]
    fn validate_structural_errors() {
        assert!(!PayoffDistribution::dirac(-1.0).validate().is_ok());
        assert!(!PayoffDistribution::uniform(2.0, 1.0).validate().is_ok());
        assert!(!PayoffDistribution::uniform(-1.0, 1.0).validate().is_ok());
        assert!(!PayoffDistribution::atoms(vec![]).validate().is_ok());
        assert!(!PayoffDistribution::histogram(vec![0.0, 1.0], vec![0.5, 0.5]).validate().is_ok());
        assert!(!PayoffDistribution::histogram(vec![0.0, 2.0, 1.0], vec![0.5, 0.5]).validate().is_ok());
        assert!(!PayoffDistribution::pareto(2.0, 0.0).validate().is_ok());
        let nested = PayoffDistribution::mixture(vec![
            (0.5, PayoffDistribution::dirac(1.0)),
            (0.5, PayoffDistribution::pareto(0.5, 1.0)),
        ]);
        let report = nested.validate();
        assert_eq!(report.violations.len(), 1);
        assert!(report.to_string().starts_with("component 1: infinite mean"));
        // zero-payoff atoms are fine
        assert!(PayoffDistribution::atoms(vec![(0.0, 0.3), (2.0, 0.7)]).validate().is_ok());
    }

    #[test]
    fn mass_tolerance_is_configurable() {
        let d = PayoffDistribution::atoms(vec![(1.0, 0.5), (2.0, 0.5 + 1e-9)]);
        assert!(!d.validate().is_ok());
        assert!(d.validate_with(1e-8).is_ok());
    }

    #[test]
    fn mean_examples() {
        assert_eq!(PayoffDistribution::dirac(1.0).mean_payoff().unwrap(), 1.0);
        assert_eq!(PayoffDistribution::uniform(1.0, 2.0).mean_payoff().unwrap(), 1.5);
        assert!(matches!(
            PayoffDistribution::pareto(1.0, 1.0).mean_payoff(),
            Err(Error::InfiniteMean { .. })
        ));
    }

    #[test]
    fn pareto_mean_matches_tail_quadrature() {
        let closed = PayoffDistribution::pareto(3.0, 1.0).mean_payoff().unwrap();
        assert!((closed - 1.5).abs() < 1e-15);
        // independent route: u = xmin / b maps the tail to 3u on (0, 1]
        let quad = integrate(|u| 3.0 * u, 0.0, 1.0, QuadConfig::default()).unwrap();
        assert!((quad.value - closed).abs() < 1e-12);
    }

    #[test]
    fn transform_examples() {
        let d = PayoffDistribution::dirac(1.0);
        assert!((d.payoff_transform(0.5).unwrap() - 2.0 / 3.0).abs() < 1e-15);

        let u = PayoffDistribution::uniform(1.0, 2.0);
        let exact = 2.0 - 4.0 * (4.0f64 / 3.0).ln();
        assert!((u.payoff_transform(0.5).unwrap() - exact).abs() < 1e-10);
        assert!((exact - 0.849272).abs() < 1e-6);
    }

    #[test]
    fn transform_at_zero_is_mean() {
        for d in [
            PayoffDistribution::dirac(1.3),
            two_atoms(),
            PayoffDistribution::uniform(1.0, 2.0),
            PayoffDistribution::histogram(vec![0.0, 1.0, 3.0], vec![0.25, 0.75]),
            PayoffDistribution::pareto(3.0, 1.0),
        ] {
            assert_eq!(d.payoff_transform(0.0).unwrap(), d.mean_payoff().unwrap());
        }
    }

    #[test]
    fn log_growth_examples() {
        assert_eq!(two_atoms().log_growth_win(0.0).unwrap(), 0.0);
        let v = PayoffDistribution::dirac(1.0).log_growth_win(0.2).unwrap();
        assert!((v - 1.2f64.ln()).abs() < 1e-15);
        assert!((v - 0.182322).abs() < 1e-6);
        let atoms = PayoffDistribution::atoms(vec![(1.0, 0.5), (3.0, 0.5)]);
        let v = atoms.log_growth_win(0.5).unwrap();
        assert!((v - (0.5 * 1.5f64.ln() + 0.5 * 2.5f64.ln())).abs() < 1e-15);
        assert!((v - 0.660878).abs() < 1e-6);
    }

    #[test]
    fn pareto_transforms_match_reference() {
        // High-precision reference values from direct integration over [xmin, inf).
        let p3 = PayoffDistribution::pareto(3.0, 1.0);
        assert!((p3.payoff_transform(0.5).unwrap() - 0.823_959_216_501_082_3).abs() < 1e-9);
        assert!((p3.log_growth_win(0.5).unwrap() - 0.542_791_644_191_678_1).abs() < 1e-9);
        let p15 = PayoffDistribution::pareto(1.5, 1.0);
        assert!((p15.payoff_transform(0.1).unwrap() - 1.800_371_984_832_701_6).abs() < 1e-9);
        assert!((p15.log_growth_win(0.1).unwrap() - 0.215_334_978_793_171_6).abs() < 1e-9);
    }

    #[test]
    fn pareto_heavy_tail_small_fraction_converges() {
        let d = PayoffDistribution::pareto(1.05, 0.5);
        for f in [1e-9, 1e-6, 1e-3, 0.5, 0.999] {
            let m = d.payoff_transform(f).unwrap();
            let l = d.log_growth_win(f).unwrap();
            assert!(m.is_finite() && m > 0.0 && m < d.mean_payoff().unwrap());
            assert!(l.is_finite() && l > 0.0);
        }
    }

    #[test]
    fn histogram_transform_matches_piecewise_uniform() {
        let h = PayoffDistribution::histogram(vec![1.0, 1.5, 2.0], vec![0.5, 0.5]);
        let u = PayoffDistribution::uniform(1.0, 2.0);
        let a = h.payoff_transform(0.5).unwrap();
        let b = u.payoff_transform(0.5).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn domain_errors() {
        let d = PayoffDistribution::dirac(1.0);
        assert!(matches!(d.payoff_transform(1.0), Err(Error::Domain(_))));
        assert!(matches!(d.log_growth_win(-0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn sampling_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(PayoffDistribution::dirac(2.0).sample(&mut rng), 2.0);
        assert!((pareto_from_uniform(3.0, 1.0, 0.125) - 2.0).abs() < 1e-15);

        let d = PayoffDistribution::atoms(vec![(1.0, 0.5), (2.0, 0.5)]);
        let n = 1_000_000;
        let mean = (0..n).map(|_| d.sample(&mut rng)).sum::<f64>() / n as f64;
        let se = 0.5 / 1000.0;
        assert!((mean - 1.5).abs() < 3.0 * se, "mean {mean}");
    }

    #[test]
    fn sampling_is_deterministic() {
        let d = PayoffDistribution::mixture(vec![
            (0.3, PayoffDistribution::pareto(2.5, 1.0)),
            (0.7, PayoffDistribution::histogram(vec![0.0, 1.0, 4.0], vec![0.4, 0.6])),
        ]);
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..100).map(|_| d.sample(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(11), draw(11));
        assert_ne!(draw(11), draw(12));
        assert!(draw(11).iter().all(|&b| b >= 0.0));
    }

    #[test]
    fn sample_means_within_four_standard_errors() {
        let cases = [
            PayoffDistribution::uniform(1.0, 2.0),
            PayoffDistribution::histogram(vec![0.0, 1.0, 3.0], vec![0.25, 0.75]),
            PayoffDistribution::pareto(4.0, 1.0),
            PayoffDistribution::mixture(vec![
                (0.5, PayoffDistribution::dirac(1.0)),
                (0.5, PayoffDistribution::uniform(1.0, 2.0)),
            ]),
        ];
        let n = 1_000_000;
        for (i, d) in cases.iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + i as u64);
            let mean = (0..n).map(|_| d.sample(&mut rng)).sum::<f64>() / n as f64;
            let se = (d.variance().unwrap() / n as f64).sqrt();
            let expected = d.mean_payoff().unwrap();
            assert!((mean - expected).abs() < 4.0 * se, "case {i}: {mean} vs {expected}");
        }
    }

    #[test]
    fn mixture_linearity_examples() {
        let single = vec![(1.0, PayoffDistribution::uniform(1.0, 2.0))];
        let v = mixture_linearity_check(&single, 0.5).unwrap();
        assert!((v - PayoffDistribution::uniform(1.0, 2.0).payoff_transform(0.5).unwrap()).abs() < 1e-12);

        let diracs = vec![
            (0.5, PayoffDistribution::dirac(1.0)),
            (0.5, PayoffDistribution::dirac(2.0)),
        ];
        assert_eq!(mixture_linearity_check(&diracs, 0.0).unwrap(), 1.5);

        let mixed = vec![
            (0.5, PayoffDistribution::dirac(1.0)),
            (0.5, PayoffDistribution::uniform(1.0, 2.0)),
        ];
        let expected = 0.5 * (2.0 / 3.0) + 0.5 * (2.0 - 4.0 * (4.0f64 / 3.0).ln());
        let v = mixture_linearity_check(&mixed, 0.5).unwrap();
        assert!((v - expected).abs() < 1e-10);
        assert!((v - 0.757969).abs() < 1e-6);
    }

    #[test]
    fn degenerate_detection() {
        assert!(PayoffDistribution::dirac(1.0).is_degenerate());
        assert!(PayoffDistribution::atoms(vec![(2.0, 1.0), (5.0, 0.0)]).is_degenerate());
        assert!(!two_atoms().is_degenerate());
        assert!(!PayoffDistribution::uniform(1.0, 2.0).is_degenerate());
    }

    #[test]
    fn json_round_trip_format() {
        let json = r#"{"type":"mixture","parts":[[0.5,{"type":"dirac","b":1.0}],[0.5,{"type":"atoms","points":[[1.0,0.5],[2.0,0.5]]}]]}"#;
        let d: PayoffDistribution = serde_json::from_str(json).unwrap();
        assert_eq!(
            d,
            PayoffDistribution::mixture(vec![
                (0.5, PayoffDistribution::dirac(1.0)),
                (0.5, two_atoms()),
            ])
        );
        assert_eq!(serde_json::to_string(&d).unwrap(), json);
        let h: PayoffDistribution =
            serde_json::from_str(r#"{"type":"histogram","edges":[0,1,2],"masses":[0.5,0.5]}"#).unwrap();
        assert!(h.validate().is_ok());
        let p: PayoffDistribution = serde_json::from_str(r#"{"type":"pareto","alpha":3,"xmin":1}"#).unwrap();
        assert_eq!(p, PayoffDistribution::pareto(3.0, 1.0));
    }

    pub(crate) fn arb_leaf() -> impl Strategy<Value = PayoffDistribution> {
        prop_oneof![
            (0.0f64..5.0).prop_map(PayoffDistribution::dirac),
            proptest::collection::vec((0.0f64..5.0, 0.05f64..1.0), 1..5).prop_map(|pts| {
                let total: f64 = pts.iter().map(|p| p.1).sum();
                PayoffDistribution::atoms(pts.into_iter().map(|(b, w)| (b, w / total)).collect::<Vec<_>>())
            }),
            (0.0f64..3.0, 0.1f64..3.0).prop_map(|(lo, w)| PayoffDistribution::uniform(lo, lo + w)),
            (1.2f64..5.0, 0.1f64..2.0).prop_map(|(a, x)| PayoffDistribution::pareto(a, x)),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn transform_strictly_decreasing(d in arb_leaf(), f1 in 0.0f64..0.98, df in 0.005f64..0.02) {
            prop_assume!(d.mean_payoff().unwrap() > 1e-3);
            let f2 = f1 + df;
            prop_assert!(d.payoff_transform(f1).unwrap() > d.payoff_transform(f2).unwrap());
        }

        #[test]
        fn log_growth_below_jensen_bound(d in arb_leaf(), f in 0.0f64..0.99) {
            let mean = d.mean_payoff().unwrap();
            let l = d.log_growth_win(f).unwrap();
            prop_assert!(l <= (mean * f).ln_1p() + 1e-10);
            if f > 0.05 && d.variance().unwrap() > 1e-3 {
                prop_assert!(l < (mean * f).ln_1p());
            }
        }

        #[test]
        fn mixtures_are_affine(a in arb_leaf(), b in arb_leaf(), w in 0.05f64..0.95, f in 0.0f64..0.99) {
            let parts = vec![(w, a), (1.0 - w, b)];
            prop_assert!(mixture_linearity_check(&parts, f).is_ok());
        }
    }
}
