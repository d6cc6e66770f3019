//! Report tree with human-readable and machine-readable renderings.
//!
//! Reports are plain data: every rational is carried as its canonical
//! `p/q` string, so the structured (JSON) rendering is byte-deterministic
//! and `parse . render` is the identity.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::certify::{Certificate, ContractionReport};
use crate::metric::AxiomReport;
use crate::orbit::{CauchyDiagnostics, InjectivityVerdict, Orbit, SemiCauchyReport, Termination};
use crate::phi::{ClassVerdict, MaxImplicationReport, Outcome, PhiWitness};
use crate::rational::format_rational;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub instance: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub axioms: Option<AxiomsSection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub phi: Option<PhiSection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<CertificateSection>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub orbits: Vec<OrbitSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomsSection {
    pub reports: Vec<AxiomDto>,
    pub minimal_polyhedral_index: Option<u32>,
    /// Checks skipped because a prerequisite axiom failed.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub skipped: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomDto {
    pub axiom: String,
    pub holds: bool,
    pub vacuous: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<AxiomWitnessDto>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomWitnessDto {
    pub points: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

impl AxiomDto {
    pub fn from_report(report: &AxiomReport) -> Self {
        AxiomDto {
            axiom: report.axiom.name(),
            holds: report.holds,
            vacuous: report.vacuous,
            witness: report.witness.as_ref().map(|w| AxiomWitnessDto {
                points: w.points.iter().map(|p| p.label.clone()).collect(),
                lhs: format_rational(&w.lhs),
                rhs: format_rational(&w.rhs),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiSection {
    pub function: String,
    pub verdicts: Vec<ClassVerdictDto>,
    pub max_implication: ImplicationDto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassVerdictDto {
    pub class: String,
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<PhiWitnessDto>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiWitnessDto {
    pub kind: String,
    pub values: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImplicationDto {
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<(String, String)>,
}

fn outcome_name(outcome: Outcome) -> String {
    match outcome {
        Outcome::CertifiedOnGrid => "certified_on_grid",
        Outcome::Refuted => "refuted",
        Outcome::Inconclusive => "inconclusive",
    }
    .to_string()
}

impl ClassVerdictDto {
    pub fn from_verdict(verdict: &ClassVerdict) -> Self {
        ClassVerdictDto {
            class: verdict.class.name().to_string(),
            outcome: outcome_name(verdict.outcome),
            witness: verdict.witness.as_ref().map(phi_witness_dto),
        }
    }
}

fn phi_witness_dto(witness: &PhiWitness) -> PhiWitnessDto {
    let mut values = BTreeMap::new();
    let kind = match witness {
        PhiWitness::NotZeroAtZero => "not_zero_at_zero",
        PhiWitness::AboveDiagonal { t } => {
            values.insert("t".into(), format_rational(t));
            "above_diagonal"
        }
        PhiWitness::WindowExceeds { gamma, t } => {
            values.insert("gamma".into(), format_rational(gamma));
            values.insert("t".into(), format_rational(t));
            "window_exceeds"
        }
        PhiWitness::LimsupAtLeast { s, t } => {
            values.insert("s".into(), format_rational(s));
            values.insert("t".into(), format_rational(t));
            "limsup_at_least"
        }
        PhiWitness::NotMonotone { a, b } => {
            values.insert("a".into(), format_rational(a));
            values.insert("b".into(), format_rational(b));
            "not_monotone"
        }
        PhiWitness::NoDecay { t } => {
            values.insert("t".into(), format_rational(t));
            "no_decay"
        }
        PhiWitness::TailNotSummable { t } => {
            values.insert("t".into(), format_rational(t));
            "tail_not_summable"
        }
        PhiWitness::UscJump { s, t } => {
            values.insert("s".into(), format_rational(s));
            values.insert("t".into(), format_rational(t));
            "usc_jump"
        }
    };
    PhiWitnessDto { kind: kind.to_string(), values }
}

impl ImplicationDto {
    pub fn from_report(report: &MaxImplicationReport) -> Self {
        ImplicationDto {
            outcome: outcome_name(report.outcome),
            witness: report
                .witness
                .as_ref()
                .map(|(u, v)| (format_rational(u), format_rational(v))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateSection {
    pub axioms: Vec<AxiomDto>,
    pub polyhedral_k: Option<u32>,
    pub phi_verdicts: Vec<ClassVerdictDto>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub contractive: Option<ContractionDto>,
    pub fixed_points: Vec<String>,
    pub hypotheses_pass: bool,
    pub hypothesis_inconclusive: bool,
    pub conclusion_checked: bool,
    pub picard_verified: bool,
    pub completeness_mode: String,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub critical: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionDto {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<ContractionWitnessDto>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionWitnessDto {
    pub x: String,
    pub y: String,
    pub lhs: String,
    pub argument: String,
    pub bound: String,
}

impl ContractionDto {
    pub fn from_report(report: &ContractionReport) -> Self {
        ContractionDto {
            holds: report.holds,
            witness: report.witness.as_ref().map(|w| ContractionWitnessDto {
                x: w.x.label.clone(),
                y: w.y.label.clone(),
                lhs: format_rational(&w.lhs),
                argument: format_rational(&w.argument),
                bound: w.bound.to_string(),
            }),
        }
    }
}

impl CertificateSection {
    pub fn from_certificate(cert: &Certificate) -> Self {
        CertificateSection {
            axioms: cert.axioms.iter().map(AxiomDto::from_report).collect(),
            polyhedral_k: cert.polyhedral_k,
            phi_verdicts: cert.phi_verdicts.iter().map(ClassVerdictDto::from_verdict).collect(),
            contractive: cert.contractive.as_ref().map(ContractionDto::from_report),
            fixed_points: cert.fixed_points.clone(),
            hypotheses_pass: cert.hypotheses_pass,
            hypothesis_inconclusive: cert.hypothesis_inconclusive,
            conclusion_checked: cert.conclusion_checked,
            picard_verified: cert.picard_verified,
            completeness_mode: cert.completeness_mode.name().to_string(),
            critical: cert.critical.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitSection {
    pub start: String,
    pub points: Vec<String>,
    pub rho: Vec<String>,
    pub termination: TerminationDto,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub semi_cauchy: Option<SemiCauchyDto>,
    pub cauchy_window: Vec<CauchyEntryDto>,
    pub injectivity: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerminationDto {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub second: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemiCauchyDto {
    pub tolerance: String,
    pub per_gap: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CauchyEntryDto {
    pub epsilon: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub index: Option<usize>,
}

impl OrbitSection {
    pub fn build(
        orbit: &Orbit,
        semi_cauchy: Option<&SemiCauchyReport>,
        cauchy: &CauchyDiagnostics,
        injectivity: &InjectivityVerdict,
    ) -> Self {
        let termination = match orbit.termination {
            Termination::FixedPoint(n) => {
                TerminationDto { kind: "fixed_point".into(), first: Some(n), second: None }
            }
            Termination::Repeat { first, second } => TerminationDto {
                kind: "repeat".into(),
                first: Some(first),
                second: Some(second),
            },
            Termination::BudgetExhausted => {
                TerminationDto { kind: "budget_exhausted".into(), first: None, second: None }
            }
        };
        let injectivity = match injectivity {
            InjectivityVerdict::Injective => "injective".to_string(),
            InjectivityVerdict::FixedPointReached { index } => {
                format!("fixed_point_reached({index})")
            }
            InjectivityVerdict::Periodic { first, second, period } => {
                format!("periodic({first},{second};period={period})")
            }
            InjectivityVerdict::ContradictsCertificate { first, second } => {
                format!("CONTRADICTS_CERTIFICATE({first},{second})")
            }
        };
        OrbitSection {
            start: orbit.start.clone(),
            points: orbit.points.clone(),
            rho: orbit.rho.iter().map(format_rational).collect(),
            termination,
            semi_cauchy: semi_cauchy.map(|r| SemiCauchyDto {
                tolerance: format_rational(&r.tolerance),
                per_gap: r.entries.clone(),
            }),
            cauchy_window: cauchy
                .entries
                .iter()
                .map(|(eps, j)| CauchyEntryDto { epsilon: format_rational(eps), index: *j })
                .collect(),
            injectivity,
        }
    }
}

impl Report {
    pub fn new(instance: impl Into<String>) -> Self {
        Report { instance: instance.into(), axioms: None, phi: None, certificate: None, orbits: Vec::new() }
    }

    /// Machine rendering: pretty JSON with a trailing newline.
    pub fn render_structured(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn parse_structured(text: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Human rendering.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("instance: {}\n", self.instance));
        if let Some(ax) = &self.axioms {
            out.push_str("axioms:\n");
            render_axioms(&mut out, &ax.reports, 2);
            match ax.minimal_polyhedral_index {
                Some(k) => out.push_str(&format!("  minimal_polyhedral_index: {k}\n")),
                None => out.push_str("  minimal_polyhedral_index: none\n"),
            }
            for s in &ax.skipped {
                out.push_str(&format!("  skipped: {s} (prerequisite failed)\n"));
            }
        }
        if let Some(phi) = &self.phi {
            out.push_str(&format!("phi: {}\n", phi.function));
            for v in &phi.verdicts {
                out.push_str(&format!("  {}: {}{}\n", v.class, v.outcome, witness_suffix(&v.witness)));
            }
            out.push_str(&format!(
                "  max_implication: {}{}\n",
                phi.max_implication.outcome,
                phi.max_implication
                    .witness
                    .as_ref()
                    .map(|(u, v)| format!("  witness: (u={u}, v={v})"))
                    .unwrap_or_default()
            ));
        }
        if let Some(cert) = &self.certificate {
            out.push_str("certificate:\n");
            out.push_str("  axioms:\n");
            render_axioms(&mut out, &cert.axioms, 4);
            match cert.polyhedral_k {
                Some(k) => out.push_str(&format!("  polyhedral_k: {k}\n")),
                None => out.push_str("  polyhedral_k: none\n"),
            }
            out.push_str("  phi:\n");
            for v in &cert.phi_verdicts {
                out.push_str(&format!(
                    "    {}: {}{}\n",
                    v.class,
                    v.outcome,
                    witness_suffix(&v.witness)
                ));
            }
            match &cert.contractive {
                Some(c) if c.holds => out.push_str("  contractive: holds\n"),
                Some(c) => {
                    let w = c.witness.as_ref().expect("refuted contraction has a witness");
                    out.push_str(&format!(
                        "  contractive: REFUTED  witness: (x={}, y={})  d(Tx,Ty) = {} > {} = phi({})\n",
                        w.x, w.y, w.lhs, w.bound, w.argument
                    ));
                }
                None => out.push_str("  contractive: not evaluated (phi not regressive)\n"),
            }
            out.push_str(&format!("  fixed_points: {{{}}}\n", cert.fixed_points.join(", ")));
            out.push_str(&format!("  hypotheses_pass: {}\n", cert.hypotheses_pass));
            if cert.hypothesis_inconclusive {
                out.push_str("  note: hypothesis inconclusive on grid; conclusion verified by brute force\n");
            }
            out.push_str(&format!("  conclusion_checked: {}\n", cert.conclusion_checked));
            out.push_str(&format!("  picard_verified: {}\n", cert.picard_verified));
            out.push_str(&format!("  completeness_mode: {}\n", cert.completeness_mode));
            for c in &cert.critical {
                out.push_str(&format!("  CRITICAL: {c}\n"));
            }
        }
        for orbit in &self.orbits {
            out.push_str(&format!("orbit from {}:\n", orbit.start));
            out.push_str(&format!("  points: {}\n", orbit.points.join(" -> ")));
            out.push_str(&format!("  rho: [{}]\n", orbit.rho.join(", ")));
            let term = match orbit.termination.kind.as_str() {
                "fixed_point" => format!("fixed_point({})", orbit.termination.first.unwrap_or(0)),
                "repeat" => format!(
                    "repeat({}, {})",
                    orbit.termination.first.unwrap_or(0),
                    orbit.termination.second.unwrap_or(0)
                ),
                other => other.to_string(),
            };
            out.push_str(&format!("  termination: {term}\n"));
            if let Some(sc) = &orbit.semi_cauchy {
                let gaps: Vec<String> = sc
                    .per_gap
                    .iter()
                    .enumerate()
                    .map(|(i, ok)| format!("i={}:{}", i + 1, if *ok { "yes" } else { "no" }))
                    .collect();
                out.push_str(&format!(
                    "  semi_cauchy (tol {}): {}\n",
                    sc.tolerance,
                    gaps.join(" ")
                ));
            }
            let entries: Vec<String> = orbit
                .cauchy_window
                .iter()
                .map(|e| match e.index {
                    Some(j) => format!("eps={}:j={}", e.epsilon, j),
                    None => format!("eps={}:absent", e.epsilon),
                })
                .collect();
            out.push_str(&format!("  cauchy_window: {}\n", entries.join(" ")));
            out.push_str(&format!("  injectivity: {}\n", orbit.injectivity));
        }
        out
    }
}

fn render_axioms(out: &mut String, reports: &[AxiomDto], indent: usize) {
    let pad = " ".repeat(indent);
    for r in reports {
        let verdict = if r.holds {
            if r.vacuous {
                "holds (vacuous)".to_string()
            } else {
                "holds".to_string()
            }
        } else {
            let w = r.witness.as_ref().expect("refuted axiom has a witness");
            let relation = match r.axiom.as_str() {
                "symmetric" => format!("{} != {}", w.lhs, w.rhs),
                "reflexive_sufficient" => "d = 0 for distinct points".to_string(),
                _ => format!("{} > {}", w.lhs, w.rhs),
            };
            format!("REFUTED  witness: ({})  [{relation}]", w.points.join(", "))
        };
        out.push_str(&format!("{pad}{}: {verdict}\n", r.axiom));
    }
}

fn witness_suffix(witness: &Option<PhiWitnessDto>) -> String {
    match witness {
        None => String::new(),
        Some(w) => {
            let values: Vec<String> = w.values.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!("  witness: {}({})", w.kind, values.join(", "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::certify_theorem1;
    use crate::metric::{check_reflexive_sufficiency, check_symmetry};
    use crate::phi::SamplingPlan;
    use crate::rational::rat;

    fn demo_report() -> Report {
        let inst = crate::builtins::banach_demo(4, &rat(1, 2)).unwrap();
        let cert = certify_theorem1(
            &inst.space,
            inst.map.as_ref().unwrap(),
            inst.phi.as_ref().unwrap(),
            &SamplingPlan::default_plan(),
        )
        .unwrap();
        let mut report = Report::new("banach_demo(4, 1/2)");
        report.axioms = Some(AxiomsSection {
            reports: vec![
                AxiomDto::from_report(&check_symmetry(&inst.space)),
                AxiomDto::from_report(&check_reflexive_sufficiency(&inst.space)),
            ],
            minimal_polyhedral_index: Some(1),
            skipped: vec![],
        });
        report.certificate = Some(CertificateSection::from_certificate(&cert));
        report
    }

    #[test]
    fn structured_rendering_round_trips() {
        let report = demo_report();
        let rendered = report.render_structured();
        let parsed = Report::parse_structured(&rendered).unwrap();
        assert_eq!(parsed, report);
        // byte-identical re-render
        assert_eq!(parsed.render_structured(), rendered);
    }

    #[test]
    fn text_rendering_mentions_the_verdicts() {
        let report = demo_report();
        let text = report.render_text();
        assert!(text.contains("picard_verified: true"));
        assert!(text.contains("symmetric: holds"));
        assert!(text.contains("fixed_points: {p3}"));
    }
}
