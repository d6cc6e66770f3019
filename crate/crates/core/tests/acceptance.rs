//! Acceptance suite. One test per criterion; each prints a PASS line with
//! its measured runtime. Tolerances and budgets are pinned in the
//! assertions themselves.
//!
//! The `oracle` module is an independent second implementation used by the
//! equivalence criterion: straight quantifier translations with no chain
//! pruning, no shared code with the optimized checkers.

use std::time::{Duration, Instant};

use branciari::builtins;
use branciari::certify::{certify_theorem1, fixed_points, is_contractive};
use branciari::instance::{parse_instance, render_instance};
use branciari::metric::{
    check_polyhedral, check_tetrahedral, check_triangular, minimal_polyhedral_index, FiniteSpace,
};
use branciari::orbit::{
    limit_set, run_orbit, sequence_cauchy_check, verify_rho_recursion, verify_sigma_recursion,
    FiniteMap, Termination,
};
use branciari::phi::{
    coupled_decay_test, decay_test, is_boyd_wong, is_matkowski, is_regressive,
    is_strongly_regressive, ComparisonFn, Outcome, PhiWitness, SamplingPlan,
};
use branciari::rational::{rat, rat_int, Real};
use branciari::report::{CertificateSection, Report};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Independent naive checkers: direct quantifier translation, enumerating
/// raw tuples over the full point set.
mod oracle {
    use super::*;
    use std::cmp::Ordering;

    fn next_tuple(tuple: &mut [usize], base: usize) -> bool {
        for slot in tuple.iter_mut().rev() {
            *slot += 1;
            if *slot < base {
                return true;
            }
            *slot = 0;
        }
        false
    }

    fn all_distinct(tuple: &[usize]) -> bool {
        for a in 0..tuple.len() {
            for b in (a + 1)..tuple.len() {
                if tuple[a] == tuple[b] {
                    return false;
                }
            }
        }
        true
    }

    /// The polyhedral inequality verbatim: for every tuple
    /// (x, c_1..c_k, y) of pairwise
    /// distinct points, d(x,y) <= d(x,c_1) + ... + d(c_k,y).
    pub fn polyhedral_holds(space: &FiniteSpace, k: u32) -> bool {
        let n = space.len();
        let len = k as usize + 2;
        let mut tuple = vec![0usize; len];
        loop {
            if all_distinct(&tuple) {
                let mut sum = BigRational::zero();
                for w in tuple.windows(2) {
                    sum += space.dist(w[0], w[1]);
                }
                if *space.dist(tuple[0], tuple[len - 1]) > sum {
                    return false;
                }
            }
            if !next_tuple(&mut tuple, n) {
                return true;
            }
        }
    }

    /// The contraction bound verbatim: d(Tx,Ty) <= phi(max{d(x,y),
    /// d(x,Tx), d(y,Ty)}) for
    /// every ordered pair.
    pub fn contractive_holds(
        space: &FiniteSpace,
        map: &FiniteMap,
        phi: &ComparisonFn,
    ) -> bool {
        let n = space.len();
        for x in 0..n {
            for y in 0..n {
                let mut m = space.dist(x, y).clone();
                if space.dist(x, map.apply(x)) > &m {
                    m = space.dist(x, map.apply(x)).clone();
                }
                if space.dist(y, map.apply(y)) > &m {
                    m = space.dist(y, map.apply(y)).clone();
                }
                let bound = phi.eval(&m).expect("phi evaluates");
                let lhs = space.dist(map.apply(x), map.apply(y));
                if bound.cmp_rational(lhs) == Ordering::Less {
                    return false;
                }
            }
        }
        true
    }
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    rat(rng.gen_range(1..=64), rng.gen_range(1..=16))
}

fn random_space(rng: &mut ChaCha8Rng, max_points: usize) -> FiniteSpace {
    let n = rng.gen_range(2..=max_points);
    let labels: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let mut entries = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            entries.push((labels[i].clone(), labels[j].clone(), random_rational(rng)));
        }
    }
    FiniteSpace::from_symmetric_entries(labels, &entries).unwrap()
}

fn random_map(rng: &mut ChaCha8Rng, space: &FiniteSpace) -> FiniteMap {
    let n = space.len();
    let image = if rng.gen_ratio(1, 3) {
        vec![rng.gen_range(0..n); n]
    } else {
        (0..n).map(|_| rng.gen_range(0..n)).collect()
    };
    FiniteMap::new(space, image).unwrap()
}

fn bundled_regressive_functions() -> Vec<ComparisonFn> {
    vec![
        ComparisonFn::linear(rat(1, 2)).unwrap(),
        ComparisonFn::linear(rat(9, 10)).unwrap(),
        ComparisonFn::hyperbolic(),
        ComparisonFn::power_scaled(rat(1, 2), 2).unwrap(),
        ComparisonFn::piecewise_geometric(),
    ]
}

fn pass(criterion: u32, detail: &str, elapsed: Duration) {
    println!("ACCEPTANCE {criterion} PASS - {detail} ({elapsed:?})");
}

#[test]
fn criterion_1_theorem1_brute_force_on_the_banach_family() {
    let cases = [(4usize, rat(1, 2)), (7, rat(2, 3)), (10, rat(3, 4))];
    let plan = SamplingPlan::default_plan();
    let mut instances = Vec::new();
    for (n, lambda) in &cases {
        let inst = builtins::banach_demo(*n, lambda).unwrap();
        let cert = certify_theorem1(
            &inst.space,
            inst.map.as_ref().unwrap(),
            inst.phi.as_ref().unwrap(),
            &plan,
        )
        .unwrap();
        assert!(cert.hypotheses_pass, "banach_demo({n}) must pass all hypotheses");
        assert!(cert.picard_verified, "banach_demo({n}) must verify the conclusion");
        instances.push(inst);
    }

    // the timed brute-force verification: unique fixed point, every orbit
    // lands on it within |X| steps, exact arithmetic throughout
    let started = Instant::now();
    for inst in &instances {
        let space = &inst.space;
        let map = inst.map.as_ref().unwrap();
        let n = space.len();
        let fixed = fixed_points(space, map);
        assert_eq!(fixed.len(), 1, "exactly one fixed point");
        let target = space.labels()[fixed[0]].clone();
        for start in 0..n {
            let orbit = run_orbit(space, map, start, n, 4).unwrap();
            match orbit.termination {
                Termination::FixedPoint(steps) => {
                    assert!(steps <= n, "orbit exceeded the |X| bound");
                    assert_eq!(orbit.points.last().unwrap(), &target);
                }
                other => panic!("orbit from {start} did not fix: {other:?}"),
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(1), "brute force took {elapsed:?}");
    pass(1, "unique fixed point reached from every start within |X| steps on 3 sizes", elapsed);
}

#[test]
fn criterion_2_uniqueness_soundness_over_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB12A_C1A1);
    let plan = SamplingPlan::default_plan();
    let functions = bundled_regressive_functions();
    for phi in &functions {
        assert_eq!(
            is_regressive(phi, &plan).unwrap().outcome,
            Outcome::CertifiedOnGrid,
            "{phi} must be regressive"
        );
    }

    let started = Instant::now();
    let mut contractive_count = 0usize;
    for _ in 0..1000 {
        let space = random_space(&mut rng, 6);
        let map = random_map(&mut rng, &space);
        let phi = &functions[rng.gen_range(0..functions.len())];
        if is_contractive(&space, &map, phi).unwrap().holds {
            contractive_count += 1;
            let fixed = fixed_points(&space, &map);
            assert!(
                fixed.len() <= 1,
                "contractive map with {} fixed points under {phi}",
                fixed.len()
            );
        }
    }
    let elapsed = started.elapsed();
    assert!(contractive_count > 0, "generator never produced a contractive instance");
    assert!(elapsed < Duration::from_secs(10), "scan took {elapsed:?}");
    pass(
        2,
        &format!("0 uniqueness violations across 1000 instances ({contractive_count} contractive)"),
        elapsed,
    );
}

#[test]
fn criterion_3_rho_and_sigma_recursions_hold_on_certified_instances() {
    let started = Instant::now();
    let cases = [(4usize, rat(1, 2)), (7, rat(2, 3)), (10, rat(3, 4))];
    let plan = SamplingPlan::default_plan();
    for (n, lambda) in &cases {
        let inst = builtins::banach_demo(*n, lambda).unwrap();
        let space = &inst.space;
        let map = inst.map.as_ref().unwrap();
        let phi = inst.phi.as_ref().unwrap();
        let cert = certify_theorem1(space, map, phi, &plan).unwrap();
        assert!(cert.picard_verified);
        for start in 0..space.len() {
            let orbit = run_orbit(space, map, start, 10 * space.len(), 8.min(space.len())).unwrap();
            assert!(
                verify_rho_recursion(&orbit, phi).unwrap().holds,
                "rho recursion failed from start {start} on banach_demo({n})"
            );
            assert!(
                verify_sigma_recursion(&orbit, phi).unwrap().holds,
                "sigma recursion failed from start {start} on banach_demo({n})"
            );
            // rho strictly decreases while positive, exactly
            for w in orbit.rho.windows(2) {
                if w[0] > BigRational::zero() {
                    assert!(w[1] < w[0], "rho not strictly decreasing");
                }
            }
        }
    }
    pass(3, "step and gap recursions hold and rho strictly descends on every certified orbit", started.elapsed());
}

#[test]
fn criterion_4_decay_lemma_values() {
    let started = Instant::now();

    // linear(1/2) from 1 crosses 1e-8 at exactly n = 27 with value 2^-27
    let half = ComparisonFn::linear(rat(1, 2)).unwrap();
    let plan = SamplingPlan::default_plan();
    let report = decay_test(&half, &plan, rat_int(1), None).unwrap();
    assert_eq!(report.reached_tolerance_at, Some(27));
    assert_eq!(report.values[27], Real::Exact(rat(1, 1 << 27)));
    assert_eq!(report.values[26], Real::Exact(rat(1, 1 << 26)));
    assert!(report.nonincreasing);

    // hyperbolic from 1: r_n = 1/(n+1) for n <= 10^4; exact arithmetic
    // makes the 1e-12 relative tolerance an equality check
    let hyp = ComparisonFn::hyperbolic();
    let loose = SamplingPlan::default_plan().with_decay_tolerance(rat(1, 10_000));
    let report = decay_test(&hyp, &loose, rat_int(1), None).unwrap();
    assert_eq!(report.reached_tolerance_at, Some(10_000));
    let tolerance = 1e-12;
    for (n, v) in report.values.iter().enumerate() {
        let expected = rat(1, n as i64 + 1);
        assert_eq!(v, &Real::Exact(expected.clone()), "exact value at n = {n}");
        let rel = (v.to_f64() - 1.0 / (n as f64 + 1.0)).abs() * (n as f64 + 1.0);
        assert!(rel <= tolerance);
    }

    // coupled: r_n = 2^-n drives s below 1e-6 by n = 40
    let micro = SamplingPlan::default_plan().with_decay_tolerance(rat(1, 1_000_000));
    let r: Vec<Real> = (0..=40).map(|n| Real::Exact(rat(1, 1i64 << n))).collect();
    let report = coupled_decay_test(&half, &micro, rat_int(1), &r).unwrap();
    let reached = report.reached_tolerance_at.expect("s must cross 1e-6");
    assert!(reached <= 40, "s crossed only at {reached}");
    assert!(report.max_sequence_descending);

    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(1), "decay checks took {elapsed:?}");
    pass(4, "2^-27 at n=27, r_n = 1/(n+1) exactly to n=10^4, coupled s < 1e-6 by n=40", elapsed);
}

#[test]
fn criterion_5_class_inclusion_consistency() {
    let started = Instant::now();
    // the loose tolerance accommodates the hyperbolic family's harmonic decay
    let plan = SamplingPlan::default_plan().with_decay_tolerance(rat(1, 10_000));
    for phi in bundled_regressive_functions() {
        let matkowski = is_matkowski(&phi, &plan).unwrap();
        let boyd = is_boyd_wong(&phi, &plan).unwrap();
        let strong = is_strongly_regressive(&phi, &plan).unwrap();
        // every bundled family is genuinely Matkowski and Boyd-Wong under
        // this plan, so the inclusion check is not vacuous
        assert_eq!(matkowski.outcome, Outcome::CertifiedOnGrid, "matkowski on {phi}");
        assert_eq!(boyd.outcome, Outcome::CertifiedOnGrid, "boyd_wong on {phi}");
        if matkowski.outcome == Outcome::CertifiedOnGrid
            || boyd.outcome == Outcome::CertifiedOnGrid
        {
            assert_ne!(
                strong.outcome,
                Outcome::Refuted,
                "class inclusion broken for {phi}"
            );
        }
    }

    // the regressive-but-not-strongly-regressive witness sits at gamma = 1
    let bad = ComparisonFn::piecewise_counterexample();
    assert_eq!(is_regressive(&bad, &plan).unwrap().outcome, Outcome::CertifiedOnGrid);
    let verdict = is_strongly_regressive(&bad, &plan).unwrap();
    assert_eq!(verdict.outcome, Outcome::Refuted);
    match verdict.witness.expect("refutation carries a witness") {
        PhiWitness::WindowExceeds { gamma, .. } => assert_eq!(gamma, BigRational::one()),
        other => panic!("unexpected witness {other:?}"),
    }
    pass(5, "class inclusions consistent; counterexample refuted at gamma = 1", started.elapsed());
}

#[test]
fn criterion_6_axiom_hierarchy_fixtures() {
    let started = Instant::now();

    let fixture = builtins::non_triangular_tetra();
    assert!(!check_triangular(&fixture.space).unwrap().holds);
    let tetra = check_tetrahedral(&fixture.space).unwrap();
    assert!(tetra.holds && !tetra.vacuous);
    assert_eq!(minimal_polyhedral_index(&fixture.space), Some(2));

    let two_limit = builtins::two_limit(8).unwrap();
    let space = &two_limit.space;
    assert_eq!(space.len(), 10);
    let tetra = check_tetrahedral(space).unwrap();
    assert!(tetra.holds && !tetra.vacuous, "exhaustive quadruple scan must certify");

    // the sequence (y_1..y_8) is not Cauchy for any epsilon < 1 ...
    let seq: Vec<usize> = (0..8).collect();
    let ladder = vec![rat(1, 4), rat(1, 2), rat(63, 64), rat_int(2)];
    let diag = sequence_cauchy_check(space, &seq, &ladder);
    assert_eq!(diag.entries[0].1, None);
    assert_eq!(diag.entries[1].1, None);
    assert_eq!(diag.entries[2].1, None);
    assert_eq!(diag.entries[3].1, Some(0));

    // ... yet its epsilon-limit set at tolerance 1/4 is exactly {u, v},
    // consistent with the Cauchy-separation statement read contrapositively
    let u = space.index_of("u").unwrap();
    let v = space.index_of("v").unwrap();
    assert_eq!(limit_set(space, &seq, &rat(1, 4)), vec![u, v]);

    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(1), "fixtures took {elapsed:?}");
    pass(6, "fixture axioms, two_limit(8) tetrahedral + non-Cauchy + {u,v} limit set", elapsed);
}

#[test]
fn criterion_7_oracle_equivalence_on_random_instances() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0B01_E001);
    let functions = bundled_regressive_functions();
    let mut polyhedral_checks = 0usize;
    for round in 0..100 {
        let space = random_space(&mut rng, 6);
        let map = random_map(&mut rng, &space);
        let phi = &functions[rng.gen_range(0..functions.len())];

        for k in 1..=(space.len().saturating_sub(2) as u32) {
            let fast = check_polyhedral(&space, k);
            let naive = oracle::polyhedral_holds(&space, k);
            assert_eq!(
                fast.holds, naive,
                "polyhedral({k}) disagreement on round {round} ({} points)",
                space.len()
            );
            if !fast.holds {
                assert!(fast.witness_reproduces(&space));
            }
            polyhedral_checks += 1;
        }

        let fast = is_contractive(&space, &map, phi).unwrap();
        let naive = oracle::contractive_holds(&space, &map, phi);
        assert_eq!(fast.holds, naive, "contractivity disagreement on round {round}");
    }
    pass(
        7,
        &format!("0 disagreements across 100 instances ({polyhedral_checks} polyhedral checks)"),
        started.elapsed(),
    );
}

#[test]
fn criterion_8_round_trips_and_determinism() {
    let started = Instant::now();

    // instance round trip, byte identical
    for instance in [
        builtins::two_limit(8).unwrap(),
        builtins::non_triangular_tetra(),
        builtins::banach_demo(6, &rat(1, 2)).unwrap(),
        builtins::cycle_demo(3).unwrap(),
    ] {
        let rendered = render_instance(&instance);
        let reparsed = parse_instance(&rendered).unwrap();
        assert_eq!(reparsed, instance);
        assert_eq!(render_instance(&reparsed), rendered, "instance render must be stable");
    }

    // certificates are reproducible bit for bit
    let inst = builtins::banach_demo(6, &rat(1, 2)).unwrap();
    let plan = SamplingPlan::default_plan();
    let run = || {
        certify_theorem1(&inst.space, inst.map.as_ref().unwrap(), inst.phi.as_ref().unwrap(), &plan)
            .unwrap()
    };
    let first = run();
    let second = run();
    assert_eq!(first, second);

    // report round trip, byte identical
    let mut report = Report::new("banach_demo(6, 1/2)");
    report.certificate = Some(CertificateSection::from_certificate(&first));
    let rendered = report.render_structured();
    let reparsed = Report::parse_structured(&rendered).unwrap();
    assert_eq!(reparsed, report);
    assert_eq!(reparsed.render_structured(), rendered);

    let mut second_report = Report::new("banach_demo(6, 1/2)");
    second_report.certificate = Some(CertificateSection::from_certificate(&second));
    assert_eq!(second_report.render_structured(), rendered);

    pass(8, "instance and report round trips byte-identical; certificates reproducible", started.elapsed());
}
