//! Grid semi-decisions for the comparison-function classes.
//!
//! The universal/existential quantifiers in the class definitions are not
//! finitely decidable, so every check returns a three-valued verdict:
//! certified on the sampled grid, refuted with a re-evaluable witness, or
//! inconclusive. A refutation of regressiveness short-circuits the classes
//! defined inside the regressive family.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

use super::{ComparisonFn, PhiError, SamplingPlan};
use crate::rational::{rat, rat_int, Real};

/// Number of sample points per refinement window.
const WINDOW_SAMPLES: i64 = 16;
/// Window depth and relative threshold for the heuristic usc probe.
const USC_DEPTH: i32 = 30;
const USC_REL_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiClass {
    Regressive,
    StronglyRegressive,
    BoydWong,
    Matkowski,
    Admissible,
}

impl PhiClass {
    pub fn name(&self) -> &'static str {
        match self {
            PhiClass::Regressive => "regressive",
            PhiClass::StronglyRegressive => "strongly_regressive",
            PhiClass::BoydWong => "boyd_wong",
            PhiClass::Matkowski => "matkowski",
            PhiClass::Admissible => "admissible",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    CertifiedOnGrid,
    Refuted,
    Inconclusive,
}

/// A refuting sample, stored so the violation can be replayed through `eval`.
#[derive(Debug, Clone, PartialEq)]
pub enum PhiWitness {
    /// `phi(0) != 0`.
    NotZeroAtZero,
    /// `phi(t) >= t` at a positive grid point.
    AboveDiagonal { t: BigRational },
    /// Strong regressivity: `phi(t) > gamma` for a sample `t < gamma + beta`
    /// at every searched beta.
    WindowExceeds { gamma: BigRational, t: BigRational },
    /// Boyd-Wong: right-window maxima stayed `>= s` at every depth.
    LimsupAtLeast { s: BigRational, t: BigRational },
    /// Monotonicity: `phi(a) > phi(b)` for adjacent grid points `a < b`.
    NotMonotone { a: BigRational, b: BigRational },
    /// Iterates from `t` failed to fall below the decay tolerance in budget.
    NoDecay { t: BigRational },
    /// The iterate series from `t` kept a non-Cauchy tail through budget.
    TailNotSummable { t: BigRational },
    /// Upper semicontinuity probe saw a persistent upward jump at `s`.
    UscJump { s: BigRational, t: BigRational },
}

impl PhiWitness {
    /// Re-evaluates the witnessed violation. Sound refutations reproduce.
    pub fn reproduces(&self, phi: &ComparisonFn, plan: &SamplingPlan) -> Result<bool, PhiError> {
        Ok(match self {
            PhiWitness::NotZeroAtZero => !phi.eval(&BigRational::zero())?.is_zero(),
            PhiWitness::AboveDiagonal { t } => phi.eval(t)?.cmp_rational(t) != Ordering::Less,
            PhiWitness::WindowExceeds { gamma, t } => {
                phi.eval(t)?.cmp_rational(gamma) == Ordering::Greater
            }
            PhiWitness::LimsupAtLeast { s, t } => {
                t > s && phi.eval(t)?.cmp_rational(s) != Ordering::Less
            }
            PhiWitness::NotMonotone { a, b } => {
                a < b && phi.eval(a)?.cmp_real(&phi.eval(b)?) == Ordering::Greater
            }
            PhiWitness::NoDecay { t } => {
                let tol = plan.decay_tolerance.to_f64().unwrap_or(0.0);
                let mut v = t.to_f64().unwrap_or(f64::NAN);
                let mut decayed = false;
                for _ in 0..plan.iterate_budget {
                    v = phi.eval_f64(v)?;
                    if v < tol {
                        decayed = true;
                        break;
                    }
                }
                !decayed
            }
            PhiWitness::TailNotSummable { t } => {
                series_tail_is_cauchy(phi, t, plan)?.is_none()
            }
            PhiWitness::UscJump { s, t } => {
                let fs = phi.eval(s)?.to_f64();
                let ft = phi.eval(t)?.to_f64();
                let scale = fs.max(s.to_f64().unwrap_or(1.0));
                t > s && ft - fs > USC_REL_TOL * scale
            }
        })
    }
}

/// Verdict of one class check.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassVerdict {
    pub class: PhiClass,
    pub outcome: Outcome,
    pub witness: Option<PhiWitness>,
}

impl ClassVerdict {
    fn certified(class: PhiClass) -> Self {
        ClassVerdict { class, outcome: Outcome::CertifiedOnGrid, witness: None }
    }

    fn refuted(class: PhiClass, witness: PhiWitness) -> Self {
        ClassVerdict { class, outcome: Outcome::Refuted, witness: Some(witness) }
    }

    fn inconclusive(class: PhiClass) -> Self {
        ClassVerdict { class, outcome: Outcome::Inconclusive, witness: None }
    }

    pub fn is_refuted(&self) -> bool {
        self.outcome == Outcome::Refuted
    }
}

/// Regressiveness: `phi(0) = 0` and `phi(t) < t` for every positive grid
/// point.
/// The witness is the smallest violating grid value.
pub fn is_regressive(phi: &ComparisonFn, plan: &SamplingPlan) -> Result<ClassVerdict, PhiError> {
    if !phi.eval(&BigRational::zero())?.is_zero() {
        return Ok(ClassVerdict::refuted(PhiClass::Regressive, PhiWitness::NotZeroAtZero));
    }
    for t in &plan.t_grid {
        if phi.eval(t)?.cmp_rational(t) != Ordering::Less {
            return Ok(ClassVerdict::refuted(
                PhiClass::Regressive,
                PhiWitness::AboveDiagonal { t: t.clone() },
            ));
        }
    }
    Ok(ClassVerdict::certified(PhiClass::Regressive))
}

/// Gate shared by the classes defined inside the regressive family: a
/// regressive refutation carries over verbatim.
fn regressive_gate(
    phi: &ComparisonFn,
    plan: &SamplingPlan,
    class: PhiClass,
) -> Result<Option<ClassVerdict>, PhiError> {
    let base = is_regressive(phi, plan)?;
    if base.is_refuted() {
        return Ok(Some(ClassVerdict::refuted(class, base.witness.unwrap())));
    }
    Ok(None)
}

/// Strong regressivity, checked in its window form: for each grid `gamma` search
/// `beta` over dyadic halvings of `gamma` such that `phi(t) <= gamma` on all
/// samples of `[0, gamma + beta)`. Certified when every `gamma` admits such
/// a `beta`; refuted when some `gamma` keeps a sampled violation through
/// every searched depth.
pub fn is_strongly_regressive(
    phi: &ComparisonFn,
    plan: &SamplingPlan,
) -> Result<ClassVerdict, PhiError> {
    if let Some(v) = regressive_gate(phi, plan, PhiClass::StronglyRegressive)? {
        return Ok(v);
    }
    'gamma: for gamma in &plan.gamma_grid {
        let mut deepest_violation: Option<BigRational> = None;
        for depth in 1..=plan.beta_search_depth {
            let beta = gamma / rat_int(1i64 << depth.min(62));
            let mut violation: Option<BigRational> = None;
            for t in window_samples(gamma, &beta) {
                if phi.eval(&t)?.cmp_rational(gamma) == Ordering::Greater {
                    violation = Some(t);
                    break;
                }
            }
            match violation {
                None => continue 'gamma, // this beta works on samples
                Some(t) => deepest_violation = Some(t),
            }
        }
        return Ok(ClassVerdict::refuted(
            PhiClass::StronglyRegressive,
            PhiWitness::WindowExceeds {
                gamma: gamma.clone(),
                t: deepest_violation.expect("every depth violated"),
            },
        ));
    }
    Ok(ClassVerdict::certified(PhiClass::StronglyRegressive))
}

/// Samples of `[0, gamma + beta)`: a coarse sweep of the lower range plus a
/// fine sweep of the window `[gamma, gamma + beta)`.
fn window_samples(gamma: &BigRational, beta: &BigRational) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(8 + WINDOW_SAMPLES as usize);
    for i in 0..8i64 {
        out.push(gamma * rat(i, 8));
    }
    for i in 0..WINDOW_SAMPLES {
        out.push(gamma + beta * rat(i, WINDOW_SAMPLES));
    }
    out
}

/// The Boyd-Wong property: estimate `limsup_{t -> s+} phi(t)` by maxima over shrinking right
/// windows `(s, s + s/2^j]`. Certified at `s` when the deepest window stays
/// strictly below `s`; refuted when every depth stays at or above `s`;
/// inconclusive on mixed evidence.
pub fn is_boyd_wong(phi: &ComparisonFn, plan: &SamplingPlan) -> Result<ClassVerdict, PhiError> {
    if let Some(v) = regressive_gate(phi, plan, PhiClass::BoydWong)? {
        return Ok(v);
    }
    let mut any_inconclusive = false;
    for s in &plan.gamma_grid {
        let mut all_depths_failed = true;
        let mut deepest_passed = false;
        let mut deepest_offender: Option<BigRational> = None;
        for depth in 1..=plan.beta_search_depth {
            let width = s / rat_int(1i64 << depth.min(62));
            let mut max_val: Option<(Real, BigRational)> = None;
            for i in 1..=WINDOW_SAMPLES {
                let t = s + &width * rat(i, WINDOW_SAMPLES);
                let v = phi.eval(&t)?;
                let bigger = match &max_val {
                    None => true,
                    Some((m, _)) => v.cmp_real(m) == Ordering::Greater,
                };
                if bigger {
                    max_val = Some((v, t));
                }
            }
            let (max_v, max_t) = max_val.expect("window is nonempty");
            let passed = max_v.cmp_rational(s) == Ordering::Less;
            if passed {
                all_depths_failed = false;
            }
            if depth == plan.beta_search_depth {
                deepest_passed = passed;
                if !passed {
                    deepest_offender = Some(max_t);
                }
            }
        }
        if all_depths_failed {
            return Ok(ClassVerdict::refuted(
                PhiClass::BoydWong,
                PhiWitness::LimsupAtLeast {
                    s: s.clone(),
                    t: deepest_offender.expect("deepest depth failed"),
                },
            ));
        }
        if !deepest_passed {
            any_inconclusive = true;
        }
    }
    if any_inconclusive {
        return Ok(ClassVerdict::inconclusive(PhiClass::BoydWong));
    }
    Ok(ClassVerdict::certified(PhiClass::BoydWong))
}

fn monotonicity_violation(
    phi: &ComparisonFn,
    plan: &SamplingPlan,
) -> Result<Option<PhiWitness>, PhiError> {
    for pair in plan.t_grid.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if phi.eval(a)?.cmp_real(&phi.eval(b)?) == Ordering::Greater {
            return Ok(Some(PhiWitness::NotMonotone { a: a.clone(), b: b.clone() }));
        }
    }
    Ok(None)
}

/// The Matkowski property: increasing on adjacent grid pairs, and iterates from every grid
/// point fall below the decay tolerance within the iterate budget. Iterate
/// bookkeeping runs in floating point.
pub fn is_matkowski(phi: &ComparisonFn, plan: &SamplingPlan) -> Result<ClassVerdict, PhiError> {
    if let Some(w) = monotonicity_violation(phi, plan)? {
        return Ok(ClassVerdict::refuted(PhiClass::Matkowski, w));
    }
    let tol = plan.decay_tolerance.to_f64().unwrap_or(0.0);
    for t in &plan.t_grid {
        let mut v = t.to_f64().unwrap_or(f64::NAN);
        let mut decayed = false;
        for _ in 0..plan.iterate_budget {
            v = phi.eval_f64(v)?;
            if v < tol {
                decayed = true;
                break;
            }
        }
        if !decayed {
            return Ok(ClassVerdict::refuted(
                PhiClass::Matkowski,
                PhiWitness::NoDecay { t: t.clone() },
            ));
        }
    }
    Ok(ClassVerdict::certified(PhiClass::Matkowski))
}

/// Runs the series tail test from `t`: returns the step at which the sliding
/// 32-term tail of the iterate series fell below the decay tolerance, or
/// `None` if that never happened within budget.
fn series_tail_is_cauchy(
    phi: &ComparisonFn,
    t: &BigRational,
    plan: &SamplingPlan,
) -> Result<Option<usize>, PhiError> {
    const TAIL: usize = 32;
    let tol = plan.decay_tolerance.to_f64().unwrap_or(0.0);
    let mut window = [0.0f64; TAIL];
    let mut window_sum = 0.0;
    let mut v = t.to_f64().unwrap_or(f64::NAN);
    for n in 0..plan.iterate_budget {
        v = phi.eval_f64(v)?;
        let slot = n % TAIL;
        window_sum += v - window[slot];
        window[slot] = v;
        if n + 1 >= TAIL && window_sum < tol {
            return Ok(Some(n));
        }
        if v == 0.0 {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Admissibility: increasing, upper semicontinuous, with summable iterates.
///
/// Monotonicity as in the Matkowski check; usc probed heuristically in
/// floating point at grid points and family breakpoints (right windows,
/// relative jump threshold); summability via a Cauchy-tail criterion on the
/// iterate series. The usc probe alone can leave the verdict inconclusive.
pub fn is_admissible(phi: &ComparisonFn, plan: &SamplingPlan) -> Result<ClassVerdict, PhiError> {
    if let Some(w) = monotonicity_violation(phi, plan)? {
        return Ok(ClassVerdict::refuted(PhiClass::Admissible, w));
    }

    let mut probes: Vec<BigRational> = plan.t_grid.clone();
    for b in phi.breakpoints() {
        if b.is_positive() && !probes.contains(&b) {
            probes.push(b);
        }
    }
    probes.sort();

    let mut usc_inconclusive = false;
    for s in &probes {
        let fs = phi.eval(s)?.to_f64();
        let scale = fs.max(s.to_f64().unwrap_or(1.0));
        let threshold = USC_REL_TOL * scale;
        let s_f = s.to_f64().unwrap_or(f64::NAN);
        let mut persistent_jump = true;
        let mut deepest_jump: Option<f64> = None;
        for depth in 1..=USC_DEPTH {
            let width = s_f / (1u64 << depth.min(62)) as f64;
            let mut exceed: Option<f64> = None;
            for i in 1..=WINDOW_SAMPLES {
                let t = s_f + width * i as f64 / WINDOW_SAMPLES as f64;
                let v = phi.eval_f64(t)?;
                if v - fs > threshold {
                    exceed = Some(t);
                    break;
                }
            }
            // the left window cannot rise above phi(s) once monotonicity
            // holds, so only the right side is probed
            if exceed.is_none() {
                persistent_jump = false;
            }
            if depth == USC_DEPTH {
                deepest_jump = exceed;
            }
        }
        match (persistent_jump, deepest_jump) {
            (true, Some(t)) => {
                let witness_t = crate::rational::rational_from_f64(t)
                    .unwrap_or_else(|| s + rat(1, WINDOW_SAMPLES));
                return Ok(ClassVerdict::refuted(
                    PhiClass::Admissible,
                    PhiWitness::UscJump { s: s.clone(), t: witness_t },
                ));
            }
            (false, Some(_)) => usc_inconclusive = true,
            _ => {}
        }
    }

    for t in &plan.t_grid {
        if series_tail_is_cauchy(phi, t, plan)?.is_none() {
            return Ok(ClassVerdict::refuted(
                PhiClass::Admissible,
                PhiWitness::TailNotSummable { t: t.clone() },
            ));
        }
    }

    if usc_inconclusive {
        return Ok(ClassVerdict::inconclusive(PhiClass::Admissible));
    }
    Ok(ClassVerdict::certified(PhiClass::Admissible))
}

/// Report of the max-argument implication check: for regressive functions,
/// `v <= phi(max(u,v))` must force `v <= phi(u)`. A violation refutes
/// regressiveness itself.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxImplicationReport {
    pub outcome: Outcome,
    pub witness: Option<(BigRational, BigRational)>,
}

/// Checks the implication on all ordered grid pairs, with zero adjoined
/// to the grid.
pub fn check_max_argument_implication(
    phi: &ComparisonFn,
    plan: &SamplingPlan,
) -> Result<MaxImplicationReport, PhiError> {
    let mut grid = vec![BigRational::zero()];
    grid.extend(plan.t_grid.iter().cloned());
    for u in &grid {
        let phi_u = phi.eval(u)?;
        for v in &grid {
            let m = if u >= v { u } else { v };
            let premise = phi.eval(m)?.cmp_rational(v) != Ordering::Less;
            let conclusion = phi_u.cmp_rational(v) != Ordering::Less;
            if premise && !conclusion {
                return Ok(MaxImplicationReport {
                    outcome: Outcome::Refuted,
                    witness: Some((u.clone(), v.clone())),
                });
            }
        }
    }
    Ok(MaxImplicationReport { outcome: Outcome::CertifiedOnGrid, witness: None })
}
