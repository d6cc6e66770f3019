use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use super::{FiniteSpace, MetricError};
use crate::rational::rational_from_f64;

/// Comparison slack applied to rule outputs only: values within `2^-40` of
/// zero are clamped to exact zero, values more negative are an error.
/// Finite-space verdicts never see a tolerance; the slack exists so a rule
/// written in floating point can represent a genuine zero.
const RULE_ZERO_SLACK: f64 = 1.0 / (1u64 << 40) as f64;

/// A point of a countable carrier: a natural number (1-based) or one of
/// finitely many named extra points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RulePoint {
    Nat(u64),
    Extra(usize),
}

/// An evaluable distance rule over a countable carrier.
pub type DistRule = Arc<dyn Fn(&RulePoint, &RulePoint) -> f64 + Send + Sync>;

/// A countable carrier with an evaluable distance rule.
///
/// The carrier is the naturals `1, 2, ...` plus finitely many named extras.
/// Distances come from a total rule; finite truncations (the first `N`
/// naturals together with every extra) materialize into a [`FiniteSpace`]
/// with each float converted to its exact rational value.
#[derive(Clone)]
pub struct RuleSpace {
    name: String,
    nat_prefix: String,
    extras: Vec<String>,
    rule: DistRule,
}

impl fmt::Debug for RuleSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RuleSpace")
            .field("name", &self.name)
            .field("extras", &self.extras)
            .finish()
    }
}

impl RuleSpace {
    pub fn from_fn<F>(name: &str, nat_prefix: &str, extras: &[&str], rule: F) -> Self
    where
        F: Fn(&RulePoint, &RulePoint) -> f64 + Send + Sync + 'static,
    {
        RuleSpace {
            name: name.to_string(),
            nat_prefix: nat_prefix.to_string(),
            extras: extras.iter().map(|s| s.to_string()).collect(),
            rule: Arc::new(rule),
        }
    }

    /// The two-limit space: naturals `y_n` plus extras `u`, `v` with
    /// `d(y_m, y_n) = 1` for `m != n`, `d(y_n, u) = d(y_n, v) = 1/n` and
    /// `d(u, v) = 1`. Tetrahedral but not triangular; the sequence `(y_n)`
    /// approaches both `u` and `v` without being Cauchy.
    pub fn two_limit() -> Self {
        RuleSpace::from_fn("two_limit", "y", &["u", "v"], |p, q| match (p, q) {
            (RulePoint::Nat(m), RulePoint::Nat(n)) => {
                if m == n {
                    0.0
                } else {
                    1.0
                }
            }
            (RulePoint::Nat(n), RulePoint::Extra(_)) | (RulePoint::Extra(_), RulePoint::Nat(n)) => {
                1.0 / *n as f64
            }
            (RulePoint::Extra(i), RulePoint::Extra(j)) => {
                if i == j {
                    0.0
                } else {
                    1.0
                }
            }
        })
    }

    /// Constant rule: distance 1 off the diagonal, no extra points.
    pub fn constant_one() -> Self {
        RuleSpace::from_fn("constant_one", "p", &[], |p, q| if p == q { 0.0 } else { 1.0 })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn extras(&self) -> &[String] {
        &self.extras
    }

    pub fn label_of(&self, p: &RulePoint) -> String {
        match p {
            RulePoint::Nat(n) => format!("{}{}", self.nat_prefix, n),
            RulePoint::Extra(i) => self.extras[*i].clone(),
        }
    }

    /// Evaluates the rule with the zero slack applied. Negative (beyond
    /// slack) or non-finite outputs are an evaluation error.
    pub fn dist_rule(&self, p: &RulePoint, q: &RulePoint) -> Result<BigRational, MetricError> {
        let raw = (self.rule)(p, q);
        if !raw.is_finite() || raw < -RULE_ZERO_SLACK {
            return Err(MetricError::RuleEvaluation {
                from: self.label_of(p),
                to: self.label_of(q),
                value: raw,
            });
        }
        if raw.abs() <= RULE_ZERO_SLACK {
            return Ok(BigRational::zero());
        }
        Ok(rational_from_f64(raw).expect("finite float converts exactly"))
    }

    /// The points of the N-truncation: naturals `1..=n` then every extra.
    pub fn truncation_points(&self, n: usize) -> Vec<RulePoint> {
        let mut pts: Vec<RulePoint> = (1..=n as u64).map(RulePoint::Nat).collect();
        pts.extend((0..self.extras.len()).map(RulePoint::Extra));
        pts
    }

    /// Materializes the N-truncation as a finite space with exact distances.
    pub fn truncate(&self, n: usize) -> Result<FiniteSpace, MetricError> {
        if n == 0 {
            return Err(MetricError::BadTruncation {
                points: 0,
                detail: "truncation must keep at least one carrier point".into(),
            });
        }
        let pts = self.truncation_points(n);
        let labels: Vec<String> = pts.iter().map(|p| self.label_of(p)).collect();
        let mut dist = Vec::with_capacity(pts.len());
        for p in &pts {
            let mut row = Vec::with_capacity(pts.len());
            for q in &pts {
                row.push(self.dist_rule(p, q)?);
            }
            dist.push(row);
        }
        FiniteSpace::new(labels, dist).map_err(|e| MetricError::BadTruncation {
            points: pts.len(),
            detail: e.to_string(),
        })
    }
}
