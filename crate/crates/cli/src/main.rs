//! Command-line interface to the verification toolkit.
//!
//! Exit codes: 0 when verdicts were delivered (a refuted axiom is a
//! successful verdict), 1 on usage errors, 2 on parse/validation errors,
//! 3 on evaluation errors. Every failure prints a single machine-parsable
//! `error[CODE]: message` line on stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use branciari::builtins;
use branciari::certify::{certify_theorem1, certify_theorem2, CertifyError};
use branciari::instance::{parse_instance, render_instance, InstanceError, InstanceFile};
use branciari::metric::{
    check_reflexive_sufficiency, check_symmetry, check_tetrahedral, check_triangular,
    minimal_polyhedral_index, MetricError,
};
use branciari::orbit::{
    cauchy_window_check, default_epsilon_ladder, injectivity_check, run_orbit, semi_cauchy_check,
    OrbitError, DEFAULT_SEMI_CAUCHY_TAIL, DEFAULT_WINDOW, FINITE_BUDGET_FACTOR,
};
use branciari::phi::{
    check_max_argument_implication, is_admissible, is_boyd_wong, is_matkowski, is_regressive,
    is_strongly_regressive, PhiError,
};
use branciari::rational::rat;
use branciari::report::{
    AxiomDto, AxiomsSection, CertificateSection, ClassVerdictDto, ImplicationDto, OrbitSection,
    PhiSection, Report,
};

#[derive(Parser)]
#[command(name = "branciari", version, about = "Axiom checking, comparison-function \
classification and fixed-point certification over generalized metric spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axiom hierarchy and the minimal polyhedral index
    Axioms { file: PathBuf },
    /// Classify the instance's comparison function
    PhiCheck { file: PathBuf },
    /// Run the full certification pipeline
    Certify {
        file: PathBuf,
        /// Use the orbital-completeness variant of the theorem
        #[arg(long)]
        theorem2: bool,
        /// Assert orbital completeness (meaningful for rule spaces only)
        #[arg(long)]
        declare_orbital_complete: bool,
    },
    /// Run a Picard orbit with diagnostics
    Orbit {
        file: PathBuf,
        #[arg(long)]
        start: String,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        window: Option<usize>,
    },
    /// Emit a builtin example instance
    Counterexample {
        name: String,
        params: Vec<String>,
        /// Write to a file instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Render the full report for an instance
    Report {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

struct Failure {
    code: &'static str,
    exit: u8,
    message: String,
}

impl Failure {
    fn new(code: &'static str, exit: u8, message: impl Into<String>) -> Self {
        Failure { code, exit, message: message.into() }
    }
}

impl From<InstanceError> for Failure {
    fn from(e: InstanceError) -> Self {
        match &e {
            InstanceError::Parse { .. } => Failure::new("E_PARSE", 2, e.to_string()),
            InstanceError::Validation { .. } => Failure::new("E_VALIDATE", 2, e.to_string()),
            InstanceError::UnknownBuiltin(_) | InstanceError::BuiltinParams { .. } => {
                Failure::new("E_BUILTIN", 2, e.to_string())
            }
        }
    }
}

impl From<PhiError> for Failure {
    fn from(e: PhiError) -> Self {
        match &e {
            PhiError::Evaluation { .. } | PhiError::DriverViolation { .. } => {
                Failure::new("E_EVAL", 3, e.to_string())
            }
            _ => Failure::new("E_VALIDATE", 2, e.to_string()),
        }
    }
}

impl From<MetricError> for Failure {
    fn from(e: MetricError) -> Self {
        match &e {
            MetricError::RuleEvaluation { .. } => Failure::new("E_EVAL", 3, e.to_string()),
            _ => Failure::new("E_VALIDATE", 2, e.to_string()),
        }
    }
}

impl From<OrbitError> for Failure {
    fn from(e: OrbitError) -> Self {
        match e {
            OrbitError::Metric(inner) => inner.into(),
            other => Failure::new("E_VALIDATE", 2, other.to_string()),
        }
    }
}

impl From<CertifyError> for Failure {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::Phi(inner) => inner.into(),
            CertifyError::Orbit(inner) => inner.into(),
            CertifyError::Metric(inner) => inner.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprintln!("error[E_USAGE]: {e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error[{}]: {}", f.code, f.message);
            ExitCode::from(f.exit)
        }
    }
}

fn load(path: &Path) -> Result<InstanceFile, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new("E_IO", 2, format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_instance(&text)?)
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Axioms { file } => {
            let instance = load(&file)?;
            let mut report = Report::new(file.display().to_string());
            report.axioms = Some(axioms_section(&instance)?);
            Ok(report.render_text())
        }
        Command::PhiCheck { file } => {
            let instance = load(&file)?;
            let mut report = Report::new(file.display().to_string());
            report.phi = Some(phi_section(&instance)?);
            Ok(report.render_text())
        }
        Command::Certify { file, theorem2, declare_orbital_complete: _ } => {
            let instance = load(&file)?;
            let mut report = Report::new(file.display().to_string());
            report.certificate = Some(certificate_section(&instance, theorem2)?);
            Ok(report.render_text())
        }
        Command::Orbit { file, start, budget, window } => {
            let instance = load(&file)?;
            let mut report = Report::new(file.display().to_string());
            report.orbits = vec![orbit_section(&instance, &start, budget, window)?];
            Ok(report.render_text())
        }
        Command::Counterexample { name, params, output } => {
            let instance = builtins::builtin(&name, &params)?;
            let text = render_instance(&instance);
            match output {
                Some(path) => {
                    fs::write(&path, &text).map_err(|e| {
                        Failure::new("E_IO", 2, format!("cannot write {}: {e}", path.display()))
                    })?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
        Command::Report { file, format } => {
            let instance = load(&file)?;
            let report = full_report(&file, &instance)?;
            Ok(match format {
                Format::Text => report.render_text(),
                Format::Structured => report.render_structured(),
            })
        }
    }
}

fn axioms_section(instance: &InstanceFile) -> Result<AxiomsSection, Failure> {
    let space = &instance.space;
    let symmetry = check_symmetry(space);
    let reflexive = check_reflexive_sufficiency(space);
    let prerequisites_hold = symmetry.holds && reflexive.holds;
    let mut reports = vec![AxiomDto::from_report(&symmetry), AxiomDto::from_report(&reflexive)];
    let mut skipped = Vec::new();
    let mut minimal = None;
    if prerequisites_hold {
        reports.push(AxiomDto::from_report(&check_triangular(space)?));
        reports.push(AxiomDto::from_report(&check_tetrahedral(space)?));
        minimal = minimal_polyhedral_index(space);
        if let Some(k) = minimal {
            reports.push(AxiomDto::from_report(&branciari::metric::check_polyhedral(space, k)));
        }
    } else {
        skipped
            .extend(["triangular", "tetrahedral", "minimal_polyhedral_index"].map(str::to_string));
    }
    Ok(AxiomsSection { reports, minimal_polyhedral_index: minimal, skipped })
}

fn phi_section(instance: &InstanceFile) -> Result<PhiSection, Failure> {
    let phi = instance
        .phi
        .as_ref()
        .ok_or_else(|| Failure::new("E_VALIDATE", 2, "instance declares no phi"))?;
    let plan = instance.options.sampling_plan()?;
    let verdicts = vec![
        ClassVerdictDto::from_verdict(&is_regressive(phi, &plan)?),
        ClassVerdictDto::from_verdict(&is_strongly_regressive(phi, &plan)?),
        ClassVerdictDto::from_verdict(&is_boyd_wong(phi, &plan)?),
        ClassVerdictDto::from_verdict(&is_matkowski(phi, &plan)?),
        ClassVerdictDto::from_verdict(&is_admissible(phi, &plan)?),
    ];
    let implication = check_max_argument_implication(phi, &plan)?;
    Ok(PhiSection {
        function: phi.to_string(),
        verdicts,
        max_implication: ImplicationDto::from_report(&implication),
    })
}

fn certificate_section(
    instance: &InstanceFile,
    theorem2: bool,
) -> Result<CertificateSection, Failure> {
    let map = instance
        .map
        .as_ref()
        .ok_or_else(|| Failure::new("E_VALIDATE", 2, "instance declares no map"))?;
    let phi = instance
        .phi
        .as_ref()
        .ok_or_else(|| Failure::new("E_VALIDATE", 2, "instance declares no phi"))?;
    let plan = instance.options.sampling_plan()?;
    let cert = if theorem2 {
        certify_theorem2(&instance.space, map, phi, &plan)?
    } else {
        certify_theorem1(&instance.space, map, phi, &plan)?
    };
    Ok(CertificateSection::from_certificate(&cert))
}

fn orbit_section(
    instance: &InstanceFile,
    start: &str,
    budget: Option<usize>,
    window: Option<usize>,
) -> Result<OrbitSection, Failure> {
    let space = &instance.space;
    let map = instance
        .map
        .as_ref()
        .ok_or_else(|| Failure::new("E_VALIDATE", 2, "instance declares no map"))?;
    let x0 = space
        .index_of(start)
        .ok_or_else(|| Failure::new("E_VALIDATE", 2, format!("unknown start label `{start}`")))?;
    let budget =
        budget.or(instance.options.budget).unwrap_or(FINITE_BUDGET_FACTOR * space.len());
    let window = window.or(instance.options.window).unwrap_or(DEFAULT_WINDOW.min(space.len()));
    let orbit = run_orbit(space, map, x0, budget, window)?;
    let tolerance = instance.options.tolerance.clone().unwrap_or_else(|| rat(1, 1024));
    let tail = instance.options.tail.unwrap_or(DEFAULT_SEMI_CAUCHY_TAIL);
    let semi = semi_cauchy_check(&orbit, &tolerance, tail).ok();
    let cauchy = cauchy_window_check(&orbit, &default_epsilon_ladder());
    let injectivity = injectivity_check(&orbit, false);
    Ok(OrbitSection::build(&orbit, semi.as_ref(), &cauchy, &injectivity))
}

fn full_report(file: &Path, instance: &InstanceFile) -> Result<Report, Failure> {
    let mut report = Report::new(file.display().to_string());
    report.axioms = Some(axioms_section(instance)?);
    if instance.phi.is_some() {
        report.phi = Some(phi_section(instance)?);
    }
    if instance.map.is_some() && instance.phi.is_some() {
        report.certificate = Some(certificate_section(instance, false)?);
    }
    if instance.map.is_some() {
        for start in instance.space.labels().to_vec() {
            report.orbits.push(orbit_section(instance, &start, None, None)?);
        }
    }
    Ok(report)
}
