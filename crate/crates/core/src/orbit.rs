//! Picard orbits and their diagnostics.
//!
//! [`run_orbit`] iterates a selfmap from a start point until a fixed point,
//! the first repeat, or the budget, recording the step distances `rho_n`,
//! the gap distances `sigma^i_n` up to a window, and the suffix-maximum
//! table behind the windowed Cauchy check. Distances are exact rationals;
//! rule-space orbits convert each float distance to its exact rational
//! value, so every diagnostic below is an exact comparison.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::metric::{FiniteSpace, MetricError, RulePoint, RuleSpace};
use crate::phi::{ComparisonFn, PhiError};
use crate::rational::{rat, rat_int};

/// Default sigma window.
pub const DEFAULT_WINDOW: usize = 8;
/// Default budget factor for finite spaces: `10 * |X|` applications.
pub const FINITE_BUDGET_FACTOR: usize = 10;
/// Default budget for rule-space orbits.
pub const RULE_BUDGET: usize = 1_000;
/// Default number of trailing entries examined by the semi-Cauchy check.
pub const DEFAULT_SEMI_CAUCHY_TAIL: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrbitError {
    #[error("start point `{0}` is not in the space")]
    UnknownStart(String),
    #[error("selfmap is not total: point `{0}` has no image")]
    MissingImage(String),
    #[error("selfmap image `{0}` is not in the space")]
    ImageOutsideSpace(String),
    #[error("orbit too short: need {needed} recorded points, have {have}")]
    InsufficientData { needed: usize, have: usize },
    #[error("budget must be at least 1")]
    ZeroBudget,
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// A selfmap of a finite space, as a total image table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMap {
    image: Vec<usize>,
}

impl FiniteMap {
    pub fn new(space: &FiniteSpace, image: Vec<usize>) -> Result<Self, OrbitError> {
        if image.len() != space.len() {
            return Err(OrbitError::MissingImage(
                space.labels().get(image.len()).cloned().unwrap_or_default(),
            ));
        }
        for &to in &image {
            if to >= space.len() {
                return Err(OrbitError::ImageOutsideSpace(to.to_string()));
            }
        }
        Ok(FiniteMap { image })
    }

    /// Builds the table from `(from, to)` label pairs; the map must be total.
    pub fn from_pairs(space: &FiniteSpace, pairs: &[(String, String)]) -> Result<Self, OrbitError> {
        let mut image = vec![usize::MAX; space.len()];
        for (from, to) in pairs {
            let i = space
                .index_of(from)
                .ok_or_else(|| OrbitError::ImageOutsideSpace(from.clone()))?;
            let j = space
                .index_of(to)
                .ok_or_else(|| OrbitError::ImageOutsideSpace(to.clone()))?;
            image[i] = j;
        }
        if let Some(i) = image.iter().position(|&v| v == usize::MAX) {
            return Err(OrbitError::MissingImage(space.labels()[i].clone()));
        }
        Ok(FiniteMap { image })
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }
}

/// A selfmap of a rule-space carrier.
#[derive(Clone)]
pub struct RuleMap {
    name: String,
    map: Arc<dyn Fn(&RulePoint) -> RulePoint + Send + Sync>,
}

impl fmt::Debug for RuleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RuleMap").field("name", &self.name).finish()
    }
}

impl RuleMap {
    pub fn from_fn<F>(name: &str, map: F) -> Self
    where
        F: Fn(&RulePoint) -> RulePoint + Send + Sync + 'static,
    {
        RuleMap { name: name.to_string(), map: Arc::new(map) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, p: &RulePoint) -> RulePoint {
        (self.map)(p)
    }
}

/// Why orbit generation stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// `points[n]` maps to itself; `points[n + 1]` repeats it.
    FixedPoint(usize),
    /// `points[second] == points[first]` with `first < second` and no
    /// earlier fixed point.
    Repeat { first: usize, second: usize },
    BudgetExhausted,
}

/// A recorded Picard orbit with its distance tables.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub start: String,
    /// `x_0 ..= x_last` as labels; labels identify points within a space.
    pub points: Vec<String>,
    /// `rho[n] = d(x_n, x_{n+1})`.
    pub rho: Vec<BigRational>,
    /// `sigma[i-1][n] = d(x_n, x_{n+i})` for gaps `i = 1..=window`.
    pub sigma: Vec<Vec<BigRational>>,
    /// `suffix_max[j]` = largest pairwise distance among `points[j..]`;
    /// defined for suffixes of at least two points.
    pub suffix_max: Vec<BigRational>,
    pub window: usize,
    pub termination: Termination,
}

fn generate_orbit<P, A, D, L>(
    x0: P,
    apply: A,
    dist: D,
    label: L,
    budget: usize,
    window: usize,
) -> Result<Orbit, OrbitError>
where
    P: Clone + Eq + std::hash::Hash,
    A: Fn(&P) -> Result<P, OrbitError>,
    D: Fn(&P, &P) -> Result<BigRational, OrbitError>,
    L: Fn(&P) -> String,
{
    if budget == 0 {
        return Err(OrbitError::ZeroBudget);
    }
    let mut points = vec![x0.clone()];
    let mut seen: HashMap<P, usize> = HashMap::new();
    seen.insert(x0, 0);
    let mut termination = Termination::BudgetExhausted;
    for n in 0..budget {
        let next = apply(&points[n])?;
        if next == points[n] {
            points.push(next);
            termination = Termination::FixedPoint(n);
            break;
        }
        if let Some(&first) = seen.get(&next) {
            points.push(next);
            termination = Termination::Repeat { first, second: n + 1 };
            break;
        }
        seen.insert(next.clone(), n + 1);
        points.push(next);
    }

    let len = points.len();
    let mut rho = Vec::with_capacity(len.saturating_sub(1));
    for n in 0..len - 1 {
        rho.push(dist(&points[n], &points[n + 1])?);
    }
    let mut sigma = Vec::with_capacity(window);
    for i in 1..=window {
        let mut row = Vec::new();
        for n in 0..len.saturating_sub(i) {
            row.push(dist(&points[n], &points[n + i])?);
        }
        sigma.push(row);
    }
    // suffix_max[j] over all pairs in points[j..]; suffixes of one point
    // carry no pair and are excluded
    let mut suffix_max = vec![BigRational::zero(); len.saturating_sub(1)];
    if len >= 2 {
        for j in (0..len - 1).rev() {
            let mut best = if j + 1 < len - 1 { suffix_max[j + 1].clone() } else { BigRational::zero() };
            for n in j + 1..len {
                let d = dist(&points[j], &points[n])?;
                if d > best {
                    best = d;
                }
            }
            suffix_max[j] = best;
        }
    }

    Ok(Orbit {
        start: label(&points[0]),
        points: points.iter().map(label).collect(),
        rho,
        sigma,
        suffix_max,
        window,
        termination,
    })
}

/// Runs the Picard orbit of a finite-space selfmap from `x0`.
pub fn run_orbit(
    space: &FiniteSpace,
    map: &FiniteMap,
    x0: usize,
    budget: usize,
    window: usize,
) -> Result<Orbit, OrbitError> {
    if x0 >= space.len() {
        return Err(OrbitError::UnknownStart(x0.to_string()));
    }
    generate_orbit(
        x0,
        |&i| Ok(map.apply(i)),
        |&i, &j| Ok(space.dist(i, j).clone()),
        |&i| space.labels()[i].clone(),
        budget,
        window,
    )
}

/// Runs a Picard orbit over a rule-space carrier. Distance evaluation
/// errors from the rule propagate.
pub fn run_rule_orbit(
    space: &RuleSpace,
    map: &RuleMap,
    x0: RulePoint,
    budget: usize,
    window: usize,
) -> Result<Orbit, OrbitError> {
    generate_orbit(
        x0,
        |p| Ok(map.apply(p)),
        |p, q| Ok(space.dist_rule(p, q)?),
        |p| space.label_of(p),
        budget,
        window,
    )
}

/// Outcome of checking one of the orbit distance recursions.
#[derive(Debug, Clone, PartialEq)]
pub struct RecursionCheck {
    pub holds: bool,
    /// `(gap i, index n)` of the first violation; `i = 0` for the rho check.
    pub first_violation: Option<(usize, usize)>,
}

/// The step recursion `rho_{n+1} <= phi(rho_n)` over all recorded steps.
pub fn verify_rho_recursion(orbit: &Orbit, phi: &ComparisonFn) -> Result<RecursionCheck, PhiError> {
    for n in 0..orbit.rho.len().saturating_sub(1) {
        let bound = phi.eval(&orbit.rho[n])?;
        if bound.cmp_rational(&orbit.rho[n + 1]) == Ordering::Less {
            return Ok(RecursionCheck { holds: false, first_violation: Some((0, n)) });
        }
    }
    Ok(RecursionCheck { holds: true, first_violation: None })
}

/// The gap recursion `sigma^i_{n+1} <= phi(max(sigma^i_n, rho_n))` over all recorded
/// gaps and steps.
pub fn verify_sigma_recursion(
    orbit: &Orbit,
    phi: &ComparisonFn,
) -> Result<RecursionCheck, PhiError> {
    for (row, sig) in orbit.sigma.iter().enumerate() {
        let i = row + 1;
        for n in 0..sig.len().saturating_sub(1) {
            let arg = sig[n].clone().max(orbit.rho[n].clone());
            let bound = phi.eval(&arg)?;
            if bound.cmp_rational(&sig[n + 1]) == Ordering::Less {
                return Ok(RecursionCheck { holds: false, first_violation: Some((i, n)) });
            }
        }
    }
    Ok(RecursionCheck { holds: true, first_violation: None })
}

/// Per-gap semi-Cauchy verdicts: for each `i <= window`, whether the last
/// `tail` recorded values of `sigma^i` sit strictly below the tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct SemiCauchyReport {
    /// `entries[i-1]` is the verdict for gap `i`.
    pub entries: Vec<bool>,
    pub tolerance: BigRational,
}

/// The semi-Cauchy property made finite: the tail of each `sigma^i` must fall below the
/// tolerance. Orbits that terminated in a fixed point extend with zeros, so
/// they pass at every gap; otherwise the orbit must record at least
/// `window + tail` points.
pub fn semi_cauchy_check(
    orbit: &Orbit,
    tolerance: &BigRational,
    tail: usize,
) -> Result<SemiCauchyReport, OrbitError> {
    if matches!(orbit.termination, Termination::FixedPoint(_)) {
        return Ok(SemiCauchyReport {
            entries: vec![true; orbit.window],
            tolerance: tolerance.clone(),
        });
    }
    let needed = orbit.window + tail;
    if orbit.points.len() < needed {
        return Err(OrbitError::InsufficientData { needed, have: orbit.points.len() });
    }
    let entries = orbit
        .sigma
        .iter()
        .map(|sig| sig.iter().rev().take(tail).all(|d| d < tolerance))
        .collect();
    Ok(SemiCauchyReport { entries, tolerance: tolerance.clone() })
}

/// Windowed Cauchy diagnostics: for each epsilon, the first index from
/// which every recorded pairwise distance stays below epsilon.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyDiagnostics {
    /// `(epsilon, j(epsilon))` in the ladder's order.
    pub entries: Vec<(BigRational, Option<usize>)>,
}

/// The windowed Cauchy check on the recorded orbit: `j(epsilon)` is the first suffix whose
/// pairwise distances all sit strictly below epsilon, when one exists.
/// Suffixes need at least two points to count.
pub fn cauchy_window_check(orbit: &Orbit, epsilon_ladder: &[BigRational]) -> CauchyDiagnostics {
    let entries = epsilon_ladder
        .iter()
        .map(|eps| (eps.clone(), orbit.suffix_max.iter().position(|m| m < eps)))
        .collect();
    CauchyDiagnostics { entries }
}

/// The same windowed check for an arbitrary recorded sequence in a finite
/// space.
pub fn sequence_cauchy_check(
    space: &FiniteSpace,
    sequence: &[usize],
    epsilon_ladder: &[BigRational],
) -> CauchyDiagnostics {
    let len = sequence.len();
    let mut suffix_max = vec![BigRational::zero(); len.saturating_sub(1)];
    if len >= 2 {
        for j in (0..len - 1).rev() {
            let mut best =
                if j + 1 < len - 1 { suffix_max[j + 1].clone() } else { BigRational::zero() };
            for n in j + 1..len {
                let d = space.dist(sequence[j], sequence[n]);
                if d > &best {
                    best = d.clone();
                }
            }
            suffix_max[j] = best;
        }
    }
    let entries = epsilon_ladder
        .iter()
        .map(|eps| (eps.clone(), suffix_max.iter().position(|m| m < eps)))
        .collect();
    CauchyDiagnostics { entries }
}

/// The threshold ladder of the Cauchy bootstrap argument: `beta/4k`, `beta/2`,
/// `gamma + beta/2` and `gamma + beta`, ascending.
pub fn cauchy_threshold_ladder(gamma: &BigRational, beta: &BigRational, k: u32) -> Vec<BigRational> {
    let mut ladder = vec![
        beta / rat_int(4 * k as i64),
        beta / rat_int(2),
        gamma + beta / rat_int(2),
        gamma + beta,
    ];
    ladder.sort();
    ladder.dedup();
    ladder
}

/// Structural verdict on index injectivity: how the recorded orbit relates to
/// injectivity of `n -> x_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InjectivityVerdict {
    /// No index collision was recorded.
    Injective,
    /// The orbit reached a fixed point; the only collision is the
    /// stationary tail.
    FixedPointReached { index: usize },
    /// A genuine repeat with period `second - first`.
    Periodic { first: usize, second: usize, period: usize },
    /// A repeat without a prior fixed point on an instance whose
    /// certificate claims the contraction hypotheses: signals a
    /// certification or arithmetic bug.
    ContradictsCertificate { first: usize, second: usize },
}

/// Classifies the orbit's repeat structure. With `certified_contraction`
/// set, a non-fixed repeat is the theorem-contradiction diagnostic.
pub fn injectivity_check(orbit: &Orbit, certified_contraction: bool) -> InjectivityVerdict {
    match orbit.termination {
        Termination::FixedPoint(index) => InjectivityVerdict::FixedPointReached { index },
        Termination::Repeat { first, second } => {
            if certified_contraction {
                InjectivityVerdict::ContradictsCertificate { first, second }
            } else {
                InjectivityVerdict::Periodic { first, second, period: second - first }
            }
        }
        Termination::BudgetExhausted => InjectivityVerdict::Injective,
    }
}

/// The tolerance-relaxed limit set of a recorded sequence: points whose
/// distances over the trailing half of the sequence all fall below the
/// tolerance (strictly, matching the convergence notion). Tolerance zero
/// is the exact finite
/// notion: the tail must sit at distance exactly zero.
pub fn limit_set(
    space: &FiniteSpace,
    sequence: &[usize],
    tolerance: &BigRational,
) -> Vec<usize> {
    if sequence.is_empty() {
        return Vec::new();
    }
    let tail_len = sequence.len().div_ceil(2);
    let tail = &sequence[sequence.len() - tail_len..];
    (0..space.len())
        .filter(|&z| {
            tail.iter().all(|&x| {
                let d = space.dist(x, z);
                if tolerance.is_zero() {
                    d.is_zero()
                } else {
                    d < tolerance
                }
            })
        })
        .collect()
}

/// Default epsilon ladder for orbit diagnostics.
pub fn default_epsilon_ladder() -> Vec<BigRational> {
    vec![rat(1, 64), rat(1, 16), rat(1, 8), rat(1, 4), rat(1, 2), rat_int(1), rat_int(2)]
}
