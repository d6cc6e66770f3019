//! End-to-end tests of the binary: exit-code contract, verdict parity with
//! the library, and rendering determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use branciari::builtins;
use branciari::certify::certify_theorem1;
use branciari::instance::render_instance;
use branciari::phi::SamplingPlan;
use branciari::rational::rat;
use branciari::report::{CertificateSection, Report};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_branciari"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn write_instance(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn certify_banach_demo_exits_zero_with_picard_verified() {
    let dir = tempfile::tempdir().unwrap();
    let inst = builtins::banach_demo(5, &rat(1, 2)).unwrap();
    let path = write_instance(dir.path(), "banach.inst", &render_instance(&inst));

    let out = run(&["certify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("picard_verified: true"), "{text}");
    assert!(text.contains("contractive: holds"), "{text}");
}

#[test]
fn certify_theorem2_flags_are_accepted_on_finite_instances() {
    let dir = tempfile::tempdir().unwrap();
    let inst = builtins::banach_demo(4, &rat(1, 2)).unwrap();
    let path = write_instance(dir.path(), "banach.inst", &render_instance(&inst));

    let plain = run(&["certify", path.to_str().unwrap()]);
    let two = run(&[
        "certify",
        path.to_str().unwrap(),
        "--theorem2",
        "--declare-orbital-complete",
    ]);
    assert_eq!(two.status.code(), Some(0));
    // finite instances are trivially complete: identical verdicts
    assert_eq!(stdout(&plain), stdout(&two));
    assert!(stdout(&two).contains("completeness_mode: finite_trivial"));
}

#[test]
fn axioms_on_two_limit_reports_the_refutation_with_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let inst = builtins::two_limit(8).unwrap();
    let path = write_instance(dir.path(), "two_limit.inst", &render_instance(&inst));

    let out = run(&["axioms", path.to_str().unwrap()]);
    // a refuted axiom is a successful verdict
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("triangular: REFUTED"), "{text}");
    // witness layout (x, y, z): d(y2,y3) = 1 > 1/2 + 1/3 through u
    assert!(text.contains("witness: (y2, y3, u)"), "{text}");
    assert!(text.contains("tetrahedral: holds"), "{text}");
    assert!(text.contains("minimal_polyhedral_index: 2"), "{text}");
}

#[test]
fn orbit_on_cycle_demo_reports_the_repeat() {
    let dir = tempfile::tempdir().unwrap();
    let inst = builtins::cycle_demo(3).unwrap();
    let path = write_instance(dir.path(), "cycle.inst", &render_instance(&inst));

    let out = run(&["orbit", path.to_str().unwrap(), "--start", "c0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("termination: repeat(0, 3)"), "{text}");
    assert!(text.contains("periodic(0,3;period=3)"), "{text}");
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = tempfile::tempdir().unwrap();

    // usage: unknown subcommand
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error[E_USAGE]"), "{}", stderr(&out));

    // parse error: floating literal
    let bad = write_instance(dir.path(), "bad.inst", "point a\npoint b\nd a b 0.5\n");
    let out = run(&["axioms", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error[E_PARSE]"), "{}", stderr(&out));

    // validation error: unknown map target
    let unknown = write_instance(dir.path(), "unknown.inst", "point a\npoint b\nd a b 1\nmap a c\n");
    let out = run(&["axioms", unknown.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("`c`"), "{}", stderr(&out));

    // evaluation error: phi goes negative at 0
    let neg = write_instance(
        dir.path(),
        "neg.inst",
        "point a\npoint b\nd a b 1\nphi expr t-1\n",
    );
    let out = run(&["phi-check", neg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).starts_with("error[E_EVAL]"), "{}", stderr(&out));

    // unknown builtin
    let out = run(&["counterexample", "no_such_example"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error[E_BUILTIN]"), "{}", stderr(&out));

    // missing file
    let out = run(&["axioms", dir.path().join("absent.inst").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error[E_IO]"), "{}", stderr(&out));

    // help is not a failure
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn counterexample_emission_is_deterministic_and_loadable() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(&["counterexample", "banach_demo", "6", "2/3"]);
    let b = run(&["counterexample", "banach_demo", "6", "2/3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b), "emission must be byte-identical");

    let path = dir.path().join("emitted.inst");
    let out = bin()
        .args(["counterexample", "banach_demo", "6", "2/3", "-o"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&a));

    let out = run(&["certify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("picard_verified: true"));
}

#[test]
fn structured_report_round_trips_and_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let inst = builtins::banach_demo(4, &rat(1, 2)).unwrap();
    let path = write_instance(dir.path(), "banach.inst", &render_instance(&inst));

    let first = run(&["report", path.to_str().unwrap(), "--format", "structured"]);
    let second = run(&["report", path.to_str().unwrap(), "--format", "structured"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&second), "repeated runs must be identical");

    let report = Report::parse_structured(&stdout(&first)).unwrap();
    assert_eq!(report.render_structured(), stdout(&first), "round trip must be byte-identical");

    // the CLI certificate is exactly the library's certificate
    let cert = certify_theorem1(
        &inst.space,
        inst.map.as_ref().unwrap(),
        inst.phi.as_ref().unwrap(),
        &SamplingPlan::default_plan(),
    )
    .unwrap();
    assert_eq!(report.certificate, Some(CertificateSection::from_certificate(&cert)));
    assert_eq!(report.orbits.len(), inst.space.len());
}

#[test]
fn phi_check_reports_the_counterexample_refutation() {
    let dir = tempfile::tempdir().unwrap();
    let text = "point a\npoint b\nd a b 1\nphi piecewise 1:1/2:0 inf:1/2:1/2\n";
    let path = write_instance(dir.path(), "counter.inst", text);
    let out = run(&["phi-check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("regressive: certified_on_grid"), "{text}");
    assert!(text.contains("strongly_regressive: refuted"), "{text}");
    assert!(text.contains("gamma=1"), "{text}");
    assert!(text.contains("max_implication: certified_on_grid"), "{text}");
}
