//! The M-functional, contractivity, and brute-force theorem certification.
//!
//! [`certify_theorem1`] runs the whole pipeline on a finite instance:
//! axiom hierarchy, minimal polyhedral index, comparison-function class
//! verdicts, exhaustive `(d,M;phi)`-contractivity, and then the theorem's
//! conclusion verified by brute force — a unique fixed point reached from
//! every start within `|X|` steps, in exact arithmetic. Hypothesis gates
//! short-circuit the conclusion but every independently computable verdict
//! is still reported. A hypothesis-pass/conclusion-fail combination is
//! flagged as critical rather than tolerated.

use std::cmp::Ordering;

use num_rational::BigRational;
use thiserror::Error;

use crate::metric::{
    check_polyhedral, check_reflexive_sufficiency, check_symmetry, check_tetrahedral,
    check_triangular, minimal_polyhedral_index, AxiomReport, FiniteSpace, MetricError, PointId,
    RuleSpace,
};
use crate::orbit::{run_orbit, FiniteMap, OrbitError, RuleMap, Termination, DEFAULT_WINDOW};
use crate::phi::{
    is_admissible, is_boyd_wong, is_matkowski, is_regressive, is_strongly_regressive,
    ClassVerdict, ComparisonFn, Outcome, PhiError, SamplingPlan,
};
use crate::rational::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertifyError {
    #[error(transparent)]
    Phi(#[from] PhiError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// The M-functional `M(x,y) = max(d(x,y), d(x,Tx), d(y,Ty))`.
pub fn m_value(space: &FiniteSpace, map: &FiniteMap, x: usize, y: usize) -> BigRational {
    let dxy = space.dist(x, y);
    let dxt = space.dist(x, map.apply(x));
    let dyt = space.dist(y, map.apply(y));
    dxy.max(dxt).max(dyt).clone()
}

/// Report of the orbit-step identity `M(x,Tx) = max(d(x,Tx), d(Tx,T^2x))`.
/// Any violation signals an arithmetic bug, not a property of the instance.
#[derive(Debug, Clone, PartialEq)]
pub struct MStepIdentityReport {
    pub holds: bool,
    pub first_violation: Option<PointId>,
}

pub fn check_m_step_identity(space: &FiniteSpace, map: &FiniteMap) -> MStepIdentityReport {
    for x in 0..space.len() {
        let tx = map.apply(x);
        let ttx = map.apply(tx);
        let lhs = m_value(space, map, x, tx);
        let rhs = space.dist(x, tx).max(space.dist(tx, ttx)).clone();
        if lhs != rhs {
            return MStepIdentityReport { holds: false, first_violation: Some(space.point(x)) };
        }
    }
    MStepIdentityReport { holds: true, first_violation: None }
}

/// A violating pair with both sides of the failed bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionWitness {
    pub x: PointId,
    pub y: PointId,
    /// `d(Tx, Ty)`.
    pub lhs: BigRational,
    /// The bound's argument (`M(x,y)` or `d(x,y)` for the Banach form).
    pub argument: BigRational,
    /// The bound itself.
    pub bound: Real,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionReport {
    pub holds: bool,
    pub witness: Option<ContractionWitness>,
}

impl ContractionReport {
    /// Re-evaluates a contraction witness from scratch: the stored pair must
    /// still violate `d(Tx,Ty) <= phi(M(x,y))` on the given instance.
    pub fn witness_reproduces(
        &self,
        space: &FiniteSpace,
        map: &FiniteMap,
        phi: &ComparisonFn,
    ) -> Result<bool, PhiError> {
        let Some(w) = &self.witness else {
            return Ok(false);
        };
        let (x, y) = (w.x.index, w.y.index);
        if x >= space.len() || y >= space.len() {
            return Ok(false);
        }
        let bound = phi.eval(&m_value(space, map, x, y))?;
        Ok(bound.cmp_rational(space.dist(map.apply(x), map.apply(y))) == Ordering::Less)
    }
}

/// The functional contraction bound `d(Tx,Ty) <= phi(M(x,y))` over all
/// ordered pairs, exhaustively.
/// Exact for the exact-capable families; the witness is the first violating
/// pair in lexicographic order.
pub fn is_contractive(
    space: &FiniteSpace,
    map: &FiniteMap,
    phi: &ComparisonFn,
) -> Result<ContractionReport, PhiError> {
    let n = space.len();
    for x in 0..n {
        for y in 0..n {
            let m = m_value(space, map, x, y);
            let bound = phi.eval(&m)?;
            let lhs = space.dist(map.apply(x), map.apply(y));
            if bound.cmp_rational(lhs) == Ordering::Less {
                return Ok(ContractionReport {
                    holds: false,
                    witness: Some(ContractionWitness {
                        x: space.point(x),
                        y: space.point(y),
                        lhs: lhs.clone(),
                        argument: m,
                        bound,
                    }),
                });
            }
        }
    }
    Ok(ContractionReport { holds: true, witness: None })
}

/// The Banach condition `d(Tx,Ty) <= lambda * d(x,y)` over all ordered
/// pairs. A special case of the functional bound with `phi = linear(lambda)`:
/// since `d(x,y) <= M(x,y)` and linear functions are increasing, passing
/// this check forces `is_contractive` with the same lambda.
pub fn banach_condition(
    space: &FiniteSpace,
    map: &FiniteMap,
    lambda: &BigRational,
) -> ContractionReport {
    let n = space.len();
    for x in 0..n {
        for y in 0..n {
            let dxy = space.dist(x, y);
            let bound = lambda * dxy;
            let lhs = space.dist(map.apply(x), map.apply(y));
            if *lhs > bound {
                return ContractionReport {
                    holds: false,
                    witness: Some(ContractionWitness {
                        x: space.point(x),
                        y: space.point(y),
                        lhs: lhs.clone(),
                        argument: dxy.clone(),
                        bound: Real::Exact(bound),
                    }),
                };
            }
        }
    }
    ContractionReport { holds: true, witness: None }
}

/// `Fix(T)` by exact scan.
pub fn fixed_points(space: &FiniteSpace, map: &FiniteMap) -> Vec<usize> {
    (0..space.len()).filter(|&i| map.apply(i) == i).collect()
}

/// How the completeness hypothesis is accounted for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompletenessMode {
    /// Finite spaces: eventually constant Cauchy sequences converge.
    FiniteTrivial,
    /// The caller asserted T-orbital completeness for a rule space.
    DeclaredOrbital,
    /// Nothing known; the conclusion is never claimed.
    Unverified,
}

impl CompletenessMode {
    pub fn name(&self) -> &'static str {
        match self {
            CompletenessMode::FiniteTrivial => "finite_trivial",
            CompletenessMode::DeclaredOrbital => "declared_orbital",
            CompletenessMode::Unverified => "unverified",
        }
    }
}

/// The full certification record.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub axioms: Vec<AxiomReport>,
    pub polyhedral_k: Option<u32>,
    pub phi_verdicts: Vec<ClassVerdict>,
    /// Absent when a regressiveness refutation gated it off.
    pub contractive: Option<ContractionReport>,
    /// Labels of `Fix(T)`, in point order.
    pub fixed_points: Vec<String>,
    /// All theorem hypotheses passed their checks.
    pub hypotheses_pass: bool,
    /// Hypotheses passed with a grid-inconclusive class verdict somewhere.
    pub hypothesis_inconclusive: bool,
    /// Whether the brute-force conclusion check ran.
    pub conclusion_checked: bool,
    /// Every orbit reached the unique fixed point within `|X|` steps.
    pub picard_verified: bool,
    pub completeness_mode: CompletenessMode,
    /// Hypothesis-pass/conclusion-fail diagnostics; nonempty means a
    /// certification or arithmetic bug.
    pub critical: Vec<String>,
}

fn pipeline(
    space: &FiniteSpace,
    map: &FiniteMap,
    phi: &ComparisonFn,
    plan: &SamplingPlan,
    check_conclusion: bool,
    completeness_mode: CompletenessMode,
) -> Result<Certificate, CertifyError> {
    let symmetry = check_symmetry(space);
    let reflexive = check_reflexive_sufficiency(space);
    let prerequisites_hold = symmetry.holds && reflexive.holds;
    let mut axioms = vec![symmetry, reflexive];
    let mut polyhedral_k = None;
    if prerequisites_hold {
        axioms.push(check_triangular(space)?);
        axioms.push(check_tetrahedral(space)?);
        polyhedral_k = minimal_polyhedral_index(space);
        if let Some(k) = polyhedral_k {
            axioms.push(check_polyhedral(space, k));
        }
    }

    let fixed = fixed_points(space, map)
        .into_iter()
        .map(|i| space.labels()[i].clone())
        .collect::<Vec<_>>();

    let regressive = is_regressive(phi, plan)?;
    if regressive.is_refuted() {
        // every class is defined inside the regressive family, so a
        // refutation here stops the phi-dependent part of the pipeline
        return Ok(Certificate {
            axioms,
            polyhedral_k,
            phi_verdicts: vec![regressive],
            contractive: None,
            fixed_points: fixed,
            hypotheses_pass: false,
            hypothesis_inconclusive: false,
            conclusion_checked: false,
            picard_verified: false,
            completeness_mode,
            critical: Vec::new(),
        });
    }
    let strongly = is_strongly_regressive(phi, plan)?;
    let strongly_outcome = strongly.outcome;
    let phi_verdicts = vec![
        regressive,
        strongly,
        is_boyd_wong(phi, plan)?,
        is_matkowski(phi, plan)?,
        is_admissible(phi, plan)?,
    ];

    let contraction = is_contractive(space, map, phi)?;
    let hypotheses_pass = prerequisites_hold
        && polyhedral_k.is_some()
        && strongly_outcome != Outcome::Refuted
        && contraction.holds;
    let hypothesis_inconclusive = hypotheses_pass && strongly_outcome == Outcome::Inconclusive;

    let mut critical = Vec::new();
    let mut picard_verified = false;
    let run_conclusion = check_conclusion && hypotheses_pass;
    if run_conclusion {
        picard_verified = verify_conclusion(space, map, &fixed, &mut critical)?;
    }

    Ok(Certificate {
        axioms,
        polyhedral_k,
        phi_verdicts,
        contractive: Some(contraction),
        fixed_points: fixed,
        hypotheses_pass,
        hypothesis_inconclusive,
        conclusion_checked: run_conclusion,
        picard_verified,
        completeness_mode,
        critical,
    })
}

/// Brute-force conclusion of the main theorem on a finite carrier: exactly
/// one fixed point, and every one of the `|X|` orbits terminates there
/// within `|X|` applications. The budget is a theorem, not a heuristic;
/// exceeding it is recorded as critical.
fn verify_conclusion(
    space: &FiniteSpace,
    map: &FiniteMap,
    fixed: &[String],
    critical: &mut Vec<String>,
) -> Result<bool, CertifyError> {
    let n = space.len();
    if fixed.len() != 1 {
        critical.push(format!(
            "hypotheses passed but Fix(T) has {} elements instead of 1",
            fixed.len()
        ));
        return Ok(false);
    }
    let target = &fixed[0];
    let mut ok = true;
    for start in 0..n {
        let orbit = run_orbit(space, map, start, n.max(1), DEFAULT_WINDOW.min(n))?;
        match orbit.termination {
            Termination::FixedPoint(idx) => {
                let landed = orbit.points.last().expect("orbit is nonempty");
                if landed != target {
                    critical.push(format!(
                        "orbit from `{}` fixed at `{landed}`, expected `{target}`",
                        space.labels()[start]
                    ));
                    ok = false;
                } else if idx > n {
                    critical.push(format!(
                        "orbit from `{}` needed {idx} steps, above the |X| = {n} bound",
                        space.labels()[start]
                    ));
                    ok = false;
                }
            }
            Termination::Repeat { first, second } => {
                critical.push(format!(
                    "orbit from `{}` repeated ({first}, {second}) without fixing",
                    space.labels()[start]
                ));
                ok = false;
            }
            Termination::BudgetExhausted => {
                critical.push(format!(
                    "orbit from `{}` exhausted the |X| = {n} budget",
                    space.labels()[start]
                ));
                ok = false;
            }
        }
    }
    Ok(ok)
}

/// Certifies the main fixed-point theorem on a finite instance.
pub fn certify_theorem1(
    space: &FiniteSpace,
    map: &FiniteMap,
    phi: &ComparisonFn,
    plan: &SamplingPlan,
) -> Result<Certificate, CertifyError> {
    pipeline(space, map, phi, plan, true, CompletenessMode::FiniteTrivial)
}

/// The orbital-completeness variant. On finite spaces the pipeline and
/// verdicts coincide with [`certify_theorem1`]; completeness is trivially
/// accounted for.
pub fn certify_theorem2(
    space: &FiniteSpace,
    map: &FiniteMap,
    phi: &ComparisonFn,
    plan: &SamplingPlan,
) -> Result<Certificate, CertifyError> {
    pipeline(space, map, phi, plan, true, CompletenessMode::FiniteTrivial)
}

/// The orbital-completeness variant on a rule-space truncation: hypothesis
/// reports only. The conclusion concerns the infinite carrier and is never
/// claimed from a truncation; the completeness mode records whether the
/// caller declared orbital completeness.
pub fn certify_theorem2_rule(
    space: &RuleSpace,
    map: &RuleMap,
    truncation: usize,
    phi: &ComparisonFn,
    plan: &SamplingPlan,
    declared_orbital_complete: bool,
) -> Result<Certificate, CertifyError> {
    let finite = space.truncate(truncation)?;
    let points = space.truncation_points(truncation);
    let mut image = Vec::with_capacity(points.len());
    for p in &points {
        let q = map.apply(p);
        let idx = points
            .iter()
            .position(|r| r == &q)
            .ok_or_else(|| OrbitError::ImageOutsideSpace(space.label_of(&q)))?;
        image.push(idx);
    }
    let finite_map = FiniteMap::new(&finite, image)?;
    let mode = if declared_orbital_complete {
        CompletenessMode::DeclaredOrbital
    } else {
        CompletenessMode::Unverified
    };
    pipeline(&finite, &finite_map, phi, plan, false, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::RulePoint;
    use crate::rational::{rat, rat_int};

    fn uniform(n: usize) -> FiniteSpace {
        let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                entries.push((names[i].clone(), names[j].clone(), rat_int(1)));
            }
        }
        FiniteSpace::from_symmetric_entries(names, &entries).unwrap()
    }

    /// Geometric points `lambda^i` on the line with the shift-toward-the-end
    /// map: satisfies the Banach condition with factor lambda.
    fn banach_instance(n: usize, lambda: BigRational) -> (FiniteSpace, FiniteMap) {
        let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        let mut coords = vec![BigRational::from_integer(1.into())];
        for i in 1..n {
            let prev = coords[i - 1].clone();
            coords.push(prev * &lambda);
        }
        let mut entries = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                entries.push((names[i].clone(), names[j].clone(), &coords[i] - &coords[j]));
            }
        }
        let space = FiniteSpace::from_symmetric_entries(names, &entries).unwrap();
        let image: Vec<usize> = (0..n).map(|i| (i + 1).min(n - 1)).collect();
        let map = FiniteMap::new(&space, image).unwrap();
        (space, map)
    }

    #[test]
    fn m_value_special_cases() {
        let space = uniform(3);
        // identity map: both arguments fixed, M is the plain distance
        let ident = FiniteMap::new(&space, vec![0, 1, 2]).unwrap();
        assert_eq!(m_value(&space, &ident, 0, 1), rat_int(1));
        // x = y: M reduces to d(x, Tx)
        let shift = FiniteMap::new(&space, vec![1, 2, 0]).unwrap();
        assert_eq!(m_value(&space, &shift, 0, 0), rat_int(1));
    }

    #[test]
    fn m_step_identity_holds_on_tabulated_instances() {
        let space = uniform(4);
        let constant = FiniteMap::new(&space, vec![2, 2, 2, 2]).unwrap();
        assert!(check_m_step_identity(&space, &constant).holds);
        let (space, map) = banach_instance(6, rat(1, 2));
        assert!(check_m_step_identity(&space, &map).holds);
    }

    #[test]
    fn contractivity_verdicts() {
        let space = uniform(2);
        let phi = ComparisonFn::linear(rat(1, 2)).unwrap();

        let ident = FiniteMap::new(&space, vec![0, 1]).unwrap();
        let report = is_contractive(&space, &ident, &phi).unwrap();
        assert!(!report.holds);
        let w = report.witness.unwrap();
        assert_eq!((w.x.label.as_str(), w.y.label.as_str()), ("p0", "p1"));
        assert_eq!(w.lhs, rat_int(1));
        assert_eq!(w.argument, rat_int(1));

        let constant = FiniteMap::new(&space, vec![0, 0]).unwrap();
        assert!(is_contractive(&space, &constant, &phi).unwrap().holds);

        let (bspace, bmap) = banach_instance(4, rat(1, 2));
        assert!(banach_condition(&bspace, &bmap, &rat(1, 2)).holds);
        assert!(is_contractive(&bspace, &bmap, &phi).unwrap().holds);
    }

    #[test]
    fn fixed_point_scans() {
        let space = uniform(3);
        assert_eq!(fixed_points(&space, &FiniteMap::new(&space, vec![0, 1, 2]).unwrap()), vec![
            0, 1, 2
        ]);
        assert_eq!(fixed_points(&space, &FiniteMap::new(&space, vec![2, 2, 2]).unwrap()), vec![2]);
        assert!(fixed_points(&space, &FiniteMap::new(&space, vec![1, 2, 0]).unwrap()).is_empty());
    }

    #[test]
    fn theorem1_certifies_the_banach_instance() {
        let (space, map) = banach_instance(4, rat(1, 2));
        let phi = ComparisonFn::linear(rat(1, 2)).unwrap();
        let cert = certify_theorem1(&space, &map, &phi, &SamplingPlan::default_plan()).unwrap();
        assert!(cert.hypotheses_pass);
        assert!(cert.conclusion_checked);
        assert!(cert.picard_verified);
        assert_eq!(cert.fixed_points, vec!["p3"]);
        assert_eq!(cert.polyhedral_k, Some(1));
        assert!(cert.critical.is_empty());
        assert!(!cert.hypothesis_inconclusive);
        assert_eq!(cert.completeness_mode, CompletenessMode::FiniteTrivial);
    }

    #[test]
    fn theorem1_rejects_the_cycle_without_claiming() {
        let (space, _) = banach_instance(4, rat(1, 2));
        // 3-cycle on the first three points
        let map = FiniteMap::new(&space, vec![1, 2, 0, 3]).unwrap();
        let phi = ComparisonFn::linear(rat(1, 2)).unwrap();
        let cert = certify_theorem1(&space, &map, &phi, &SamplingPlan::default_plan()).unwrap();
        let contraction = cert.contractive.unwrap();
        assert!(!contraction.holds);
        assert!(!cert.hypotheses_pass);
        assert!(!cert.conclusion_checked);
        assert!(!cert.picard_verified);
        assert!(cert.critical.is_empty());
    }

    #[test]
    fn non_regressive_phi_stops_at_phi_verdicts() {
        let (space, map) = banach_instance(4, rat(1, 2));
        let phi = ComparisonFn::linear(rat_int(1)).unwrap();
        let cert = certify_theorem1(&space, &map, &phi, &SamplingPlan::default_plan()).unwrap();
        assert_eq!(cert.phi_verdicts.len(), 1);
        assert!(cert.phi_verdicts[0].is_refuted());
        assert!(cert.contractive.is_none());
        assert!(!cert.conclusion_checked);
        assert!(!cert.picard_verified);
        // fixed points are still independently computable
        assert_eq!(cert.fixed_points, vec!["p3"]);
    }

    #[test]
    fn theorem2_on_rule_truncations_gates_the_conclusion() {
        let space = RuleSpace::two_limit();
        let to_u = RuleMap::from_fn("to_u", |_| RulePoint::Extra(0));
        let phi = ComparisonFn::linear(rat(1, 2)).unwrap();
        let plan = SamplingPlan::default_plan();

        let cert = certify_theorem2_rule(&space, &to_u, 8, &phi, &plan, false).unwrap();
        assert_eq!(cert.completeness_mode, CompletenessMode::Unverified);
        assert!(!cert.conclusion_checked);
        assert!(!cert.picard_verified);
        assert!(cert.contractive.as_ref().unwrap().holds);
        assert_eq!(cert.polyhedral_k, Some(2));
        assert!(cert.hypotheses_pass);

        let cert = certify_theorem2_rule(&space, &to_u, 8, &phi, &plan, true).unwrap();
        assert_eq!(cert.completeness_mode, CompletenessMode::DeclaredOrbital);
        assert!(!cert.conclusion_checked);

        // a map that escapes the truncation is an error
        let shift = RuleMap::from_fn("shift", |p| match p {
            RulePoint::Nat(n) => RulePoint::Nat(n + 1),
            extra => extra.clone(),
        });
        assert!(certify_theorem2_rule(&space, &shift, 8, &phi, &plan, true).is_err());
    }

    #[test]
    fn contraction_witnesses_reproduce() {
        let space = uniform(2);
        let phi = ComparisonFn::linear(rat(1, 2)).unwrap();
        let ident = FiniteMap::new(&space, vec![0, 1]).unwrap();
        let report = is_contractive(&space, &ident, &phi).unwrap();
        assert!(report.witness_reproduces(&space, &ident, &phi).unwrap());

        let constant = FiniteMap::new(&space, vec![0, 0]).unwrap();
        let report = is_contractive(&space, &constant, &phi).unwrap();
        assert!(report.holds);
        assert!(!report.witness_reproduces(&space, &constant, &phi).unwrap());
    }

    #[test]
    fn theorem1_certifies_a_genuinely_non_triangular_instance() {
        // d(a,b) = 3 with all other distances 1: triangular fails, yet the
        // 4-polyhedral inequality holds, and the constant map contracts
        let space = {
            let names: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
            let mut entries = Vec::new();
            for i in 0..4usize {
                for j in (i + 1)..4 {
                    let v = if (i, j) == (0, 1) { rat_int(3) } else { rat_int(1) };
                    entries.push((names[i].clone(), names[j].clone(), v));
                }
            }
            FiniteSpace::from_symmetric_entries(names, &entries).unwrap()
        };
        let map = FiniteMap::new(&space, vec![2, 2, 2, 2]).unwrap();
        let phi = ComparisonFn::linear(rat(1, 2)).unwrap();
        let cert = certify_theorem1(&space, &map, &phi, &SamplingPlan::default_plan()).unwrap();
        assert_eq!(cert.polyhedral_k, Some(2));
        assert!(cert.axioms.iter().any(|a| a.axiom == crate::metric::Axiom::Triangular && !a.holds));
        assert!(cert.hypotheses_pass);
        assert!(cert.picard_verified);
        assert_eq!(cert.fixed_points, vec!["c"]);
    }

    #[test]
    fn theorem2_on_finite_instances_matches_theorem1() {
        let (space, map) = banach_instance(5, rat(2, 3));
        let phi = ComparisonFn::linear(rat(2, 3)).unwrap();
        let plan = SamplingPlan::default_plan();
        let one = certify_theorem1(&space, &map, &phi, &plan).unwrap();
        let two = certify_theorem2(&space, &map, &phi, &plan).unwrap();
        assert_eq!(one, two);
    }
}
