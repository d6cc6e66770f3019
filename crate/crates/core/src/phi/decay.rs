//! Executable forms of the decay lemmas: driven sequences
//! `r_{n+1} <= phi(r_n)` and the coupled variant
//! `s_{n+1} <= phi(max(s_n, r_n))`.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::Signed;

use super::{ComparisonFn, PhiError, SamplingPlan};
use crate::rational::Real;

/// A driver proposes the next term given the step index and the bound
/// `phi(r_n)`; the proposal must not exceed the bound. `None` means the
/// default equality driver `r_{n+1} = phi(r_n)`.
pub type DecayDriver<'a> = &'a dyn Fn(usize, &Real) -> Real;

/// A driven sequence together with its verification results.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    /// `r_0 ..= r_last`; generation stops at the first term below tolerance
    /// or at the iterate budget.
    pub values: Vec<Real>,
    /// Whether the recorded sequence never increased.
    pub nonincreasing: bool,
    /// First index `n` with `r_{n+1} > r_n`, when any.
    pub first_increase: Option<usize>,
    /// First index whose value fell strictly below the decay tolerance.
    pub reached_tolerance_at: Option<usize>,
}

/// Runs the driven recursion from `r0`.
pub fn decay_test(
    phi: &ComparisonFn,
    plan: &SamplingPlan,
    r0: BigRational,
    driver: Option<DecayDriver<'_>>,
) -> Result<DecayReport, PhiError> {
    if r0.is_negative() {
        return Err(PhiError::Evaluation {
            t: crate::rational::format_rational(&r0),
            value: "-".into(),
            detail: "decay sequences start at r0 >= 0".into(),
        });
    }
    let mut values = vec![Real::Exact(r0)];
    let mut nonincreasing = true;
    let mut first_increase = None;
    let mut reached = below_tolerance(values.last().unwrap(), plan).then_some(0);
    let mut n = 0usize;
    while reached.is_none() && n < plan.iterate_budget {
        let bound = phi.eval_real(&values[n])?;
        let next = match driver {
            Some(d) => {
                let proposed = d(n, &bound);
                if proposed.cmp_real(&bound) == Ordering::Greater {
                    return Err(PhiError::DriverViolation {
                        step: n,
                        proposed: proposed.to_string(),
                        bound: bound.to_string(),
                    });
                }
                proposed
            }
            None => bound,
        };
        let next = if next.exact_bits() > super::EXACT_BITS_GUARD { next.approx() } else { next };
        if next.cmp_real(&values[n]) == Ordering::Greater && first_increase.is_none() {
            nonincreasing = false;
            first_increase = Some(n);
        }
        values.push(next);
        n += 1;
        if below_tolerance(&values[n], plan) {
            reached = Some(n);
        }
    }
    Ok(DecayReport { values, nonincreasing, first_increase, reached_tolerance_at: reached })
}

fn below_tolerance(v: &Real, plan: &SamplingPlan) -> bool {
    v.cmp_rational(&plan.decay_tolerance) == Ordering::Less
}

/// The coupled sequence report: `s`-values plus the proof's intermediate
/// fact that `t_n = max(s_n, r_n)` descends.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledDecayReport {
    pub s_values: Vec<Real>,
    pub max_sequence_descending: bool,
    pub reached_tolerance_at: Option<usize>,
}

/// Runs `s_{n+1} = phi(max(s_n, r_n))` against a given `r` sequence, after
/// verifying that `r` itself satisfies the driven-decay premise.
pub fn coupled_decay_test(
    phi: &ComparisonFn,
    plan: &SamplingPlan,
    s0: BigRational,
    r_sequence: &[Real],
) -> Result<CoupledDecayReport, PhiError> {
    if r_sequence.is_empty() {
        return Err(PhiError::InvalidPlan("coupled test needs a nonempty r sequence".into()));
    }
    for n in 0..r_sequence.len() - 1 {
        let bound = phi.eval_real(&r_sequence[n])?;
        if r_sequence[n + 1].cmp_real(&bound) == Ordering::Greater {
            return Err(PhiError::DriverViolation {
                step: n,
                proposed: r_sequence[n + 1].to_string(),
                bound: bound.to_string(),
            });
        }
    }

    let mut s_values = vec![Real::Exact(s0)];
    let mut prev_max: Option<Real> = None;
    let mut descending = true;
    let mut reached = below_tolerance(&s_values[0], plan).then_some(0);
    let steps = r_sequence.len().min(plan.iterate_budget + 1);
    for n in 0..steps {
        let t_n = s_values[n].clone().max_real(r_sequence[n].clone());
        if let Some(prev) = &prev_max {
            if t_n.cmp_real(prev) == Ordering::Greater {
                descending = false;
            }
        }
        prev_max = Some(t_n.clone());
        if n + 1 == steps {
            break;
        }
        let mut next = phi.eval_real(&t_n)?;
        if next.exact_bits() > super::EXACT_BITS_GUARD {
            next = next.approx();
        }
        s_values.push(next);
        if reached.is_none() && below_tolerance(&s_values[n + 1], plan) {
            reached = Some(n + 1);
        }
    }
    Ok(CoupledDecayReport {
        s_values,
        max_sequence_descending: descending,
        reached_tolerance_at: reached,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use num_traits::Zero;

    fn plan() -> SamplingPlan {
        SamplingPlan::default_plan()
    }

    #[test]
    fn linear_half_reaches_1e8_at_exactly_27_steps() {
        let phi = ComparisonFn::linear(rat(1, 2)).unwrap();
        let report = decay_test(&phi, &plan(), rat_int(1), None).unwrap();
        assert_eq!(report.reached_tolerance_at, Some(27));
        assert!(report.nonincreasing);
        // the sequence is exactly 2^-n
        assert_eq!(report.values[27], Real::Exact(rat(1, 1 << 27)));
        assert_eq!(report.values.len(), 28);
    }

    #[test]
    fn hyperbolic_sequence_is_exactly_one_over_n_plus_one() {
        let phi = ComparisonFn::hyperbolic();
        let p = plan().with_decay_tolerance(rat(1, 10_000));
        let report = decay_test(&phi, &p, rat_int(1), None).unwrap();
        assert_eq!(report.reached_tolerance_at, Some(10_000));
        for (n, v) in report.values.iter().enumerate() {
            assert_eq!(v, &Real::Exact(rat(1, n as i64 + 1)));
        }
    }

    #[test]
    fn zero_start_stays_zero() {
        let phi = ComparisonFn::linear(rat(1, 2)).unwrap();
        let report = decay_test(&phi, &plan(), rat_int(0), None).unwrap();
        assert_eq!(report.reached_tolerance_at, Some(0));
        assert_eq!(report.values.len(), 1);
        assert!(report.values[0].is_zero());
    }

    #[test]
    fn violating_drivers_are_rejected() {
        let phi = ComparisonFn::linear(rat(1, 2)).unwrap();
        let driver = |_n: usize, bound: &Real| match bound {
            Real::Exact(r) => Real::Exact(r * rat_int(3)),
            Real::Approx(v) => Real::Approx(v * 3.0),
        };
        let err = decay_test(&phi, &plan(), rat_int(1), Some(&driver)).unwrap_err();
        assert!(matches!(err, PhiError::DriverViolation { step: 0, .. }));

        // a slack driver below the bound is fine
        let slack = |_n: usize, bound: &Real| match bound {
            Real::Exact(r) => Real::Exact(r / rat_int(2)),
            Real::Approx(v) => Real::Approx(v / 2.0),
        };
        let report = decay_test(&phi, &plan(), rat_int(1), Some(&slack)).unwrap();
        assert_eq!(report.values[1], Real::Exact(rat(1, 4)));
    }

    #[test]
    fn coupled_with_zero_r_reduces_to_plain_decay() {
        let phi = ComparisonFn::linear(rat(1, 2)).unwrap();
        let r: Vec<Real> = vec![Real::Exact(BigRational::zero()); 40];
        let coupled = coupled_decay_test(&phi, &plan(), rat_int(1), &r).unwrap();
        let plain = decay_test(&phi, &plan(), rat_int(1), None).unwrap();
        for (a, b) in coupled.s_values.iter().zip(plain.values.iter()) {
            assert_eq!(a, b);
        }
        assert!(coupled.max_sequence_descending);
    }

    #[test]
    fn coupled_with_geometric_r_drives_s_down() {
        let phi = ComparisonFn::linear(rat(1, 2)).unwrap();
        let p = plan().with_decay_tolerance(rat(1, 1_000_000));
        let r: Vec<Real> = (0..41).map(|n| Real::Exact(rat(1, 1i64 << n))).collect();
        let report = coupled_decay_test(&phi, &p, rat_int(1), &r).unwrap();
        assert!(report.max_sequence_descending);
        let reached = report.reached_tolerance_at.expect("s must fall below 1e-6");
        assert!(reached <= 40, "reached at {reached}");
        // s_n = 2^-n by the recursion
        assert_eq!(report.s_values[5], Real::Exact(rat(1, 32)));

        // s0 = 0 keeps s dominated by the driver sequence
        let report = coupled_decay_test(&phi, &p, rat_int(0), &r).unwrap();
        assert!(report.max_sequence_descending);
        assert_eq!(report.s_values[1], Real::Exact(rat(1, 2)));
        assert_eq!(report.s_values[2], Real::Exact(rat(1, 4)));
    }

    #[test]
    fn coupled_rejects_bad_r_sequences() {
        let phi = ComparisonFn::linear(rat(1, 2)).unwrap();
        let r = vec![Real::Exact(rat_int(1)), Real::Exact(rat_int(1))];
        assert!(matches!(
            coupled_decay_test(&phi, &plan(), rat_int(1), &r),
            Err(PhiError::DriverViolation { step: 0, .. })
        ));
    }
}
