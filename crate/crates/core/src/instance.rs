//! The line-oriented instance format.
//!
//! ```text
//! # comment
//! point a
//! point b
//! d a b 1/2
//! map a b
//! phi linear 1/2
//! option budget 40
//! ```
//!
//! Distances are exact rationals (`p` or `p/q`); floating literals are
//! rejected in space sections. Symmetric closure is on by default: each
//! `d` entry fills both directions and every unordered pair must be
//! covered. With `option symmetric_closure off` every ordered pair must be
//! given explicitly, which allows asymmetric tables for axiom refutation.
//! Parsing canonicalizes, so render-then-parse is the identity and
//! rendering is byte-deterministic.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::metric::FiniteSpace;
use crate::orbit::FiniteMap;
use crate::phi::{AffinePiece, ComparisonFn, SamplingPlan};
use crate::rational::{format_rational, parse_rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstanceError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("validation error: {msg}")]
    Validation { msg: String },
    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
    #[error("builtin `{name}`: {msg}")]
    BuiltinParams { name: String, msg: String },
}

fn parse_err(line: usize, msg: impl Into<String>) -> InstanceError {
    InstanceError::Parse { line, msg: msg.into() }
}

fn validation(msg: impl Into<String>) -> InstanceError {
    InstanceError::Validation { msg: msg.into() }
}

/// Grid, budget and tolerance overrides carried by an instance.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InstanceOptions {
    pub symmetric_closure_off: bool,
    pub budget: Option<usize>,
    pub window: Option<usize>,
    pub tail: Option<usize>,
    pub beta_depth: Option<u32>,
    pub iterate_budget: Option<usize>,
    pub decay_tolerance: Option<BigRational>,
    pub tolerance: Option<BigRational>,
    pub t_grid: Option<Vec<BigRational>>,
    pub gamma_grid: Option<Vec<BigRational>>,
}

impl InstanceOptions {
    /// The sampling plan with this instance's overrides applied.
    pub fn sampling_plan(&self) -> Result<SamplingPlan, crate::phi::PhiError> {
        let base = SamplingPlan::default_plan();
        SamplingPlan::new(
            self.t_grid.clone().unwrap_or_else(|| base.t_grid.clone()),
            self.gamma_grid.clone().unwrap_or_else(|| base.gamma_grid.clone()),
            self.beta_depth.unwrap_or(base.beta_search_depth),
            self.iterate_budget.unwrap_or(base.iterate_budget),
            self.decay_tolerance.clone().unwrap_or_else(|| base.decay_tolerance.clone()),
        )
    }
}

/// A parsed, validated, canonicalized instance.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFile {
    pub space: FiniteSpace,
    pub map: Option<FiniteMap>,
    pub phi: Option<ComparisonFn>,
    pub options: InstanceOptions,
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, InstanceError> {
    struct RawDist {
        line: usize,
        a: String,
        b: String,
        value: BigRational,
    }
    let mut points: Vec<String> = Vec::new();
    let mut dists: Vec<RawDist> = Vec::new();
    let mut map_pairs: Vec<(usize, String, String)> = Vec::new();
    let mut phi: Option<(usize, ComparisonFn)> = None;
    let mut raw_options: Vec<(usize, String, String)> = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = match line.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (line, ""),
        };
        match keyword {
            "point" => {
                let label = rest;
                if label.is_empty() || label.split_whitespace().count() != 1 {
                    return Err(parse_err(line_no, "expected `point <label>`"));
                }
                if points.iter().any(|p| p == label) {
                    return Err(parse_err(line_no, format!("duplicate point label `{label}`")));
                }
                points.push(label.to_string());
            }
            "d" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 3 {
                    return Err(parse_err(line_no, "expected `d <label> <label> <p/q>`"));
                }
                let value = parse_rational(parts[2]).map_err(|e| parse_err(line_no, e))?;
                dists.push(RawDist {
                    line: line_no,
                    a: parts[0].to_string(),
                    b: parts[1].to_string(),
                    value,
                });
            }
            "map" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(parse_err(line_no, "expected `map <label> <label>`"));
                }
                map_pairs.push((line_no, parts[0].to_string(), parts[1].to_string()));
            }
            "phi" => {
                if phi.is_some() {
                    return Err(parse_err(line_no, "duplicate phi declaration"));
                }
                phi = Some((line_no, parse_phi_spec(line_no, rest)?));
            }
            "option" => {
                let (key, value) = rest
                    .split_once(char::is_whitespace)
                    .map(|(k, v)| (k.trim(), v.trim()))
                    .ok_or_else(|| parse_err(line_no, "expected `option <key> <value>`"))?;
                raw_options.push((line_no, key.to_string(), value.to_string()));
            }
            _ => {
                return Err(parse_err(line_no, format!("unknown directive `{keyword}`")));
            }
        }
    }

    if points.is_empty() {
        return Err(validation("instance declares no points"));
    }

    let options = parse_options(&raw_options)?;

    let index_of = |label: &str, line: usize| -> Result<usize, InstanceError> {
        points
            .iter()
            .position(|p| p == label)
            .ok_or_else(|| parse_err(line, format!("unknown point label `{label}`")))
    };

    let n = points.len();
    let mut table: Vec<Vec<Option<BigRational>>> = vec![vec![None; n]; n];
    for raw in &dists {
        let i = index_of(&raw.a, raw.line)?;
        let j = index_of(&raw.b, raw.line)?;
        if raw.value.is_negative() {
            return Err(parse_err(raw.line, format!("negative distance `{}`", raw.value)));
        }
        if i == j {
            if !raw.value.is_zero() {
                return Err(parse_err(raw.line, "diagonal distances must be zero"));
            }
            continue;
        }
        let conflict = |old: &BigRational, new: &BigRational| old != new;
        if let Some(old) = &table[i][j] {
            if conflict(old, &raw.value) {
                return Err(parse_err(
                    raw.line,
                    format!("conflicting distance for ({}, {})", raw.a, raw.b),
                ));
            }
        }
        table[i][j] = Some(raw.value.clone());
        if !options.symmetric_closure_off {
            if let Some(old) = &table[j][i] {
                if conflict(old, &raw.value) {
                    return Err(parse_err(
                        raw.line,
                        format!("conflicting mirrored distance for ({}, {})", raw.b, raw.a),
                    ));
                }
            }
            table[j][i] = Some(raw.value.clone());
        }
    }
    let mut dist = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            match &table[i][j] {
                Some(v) => dist[i][j] = v.clone(),
                None => {
                    return Err(validation(format!(
                        "missing distance between `{}` and `{}`",
                        points[i], points[j]
                    )))
                }
            }
        }
    }
    let space =
        FiniteSpace::new(points.clone(), dist).map_err(|e| validation(e.to_string()))?;

    let map = if map_pairs.is_empty() {
        None
    } else {
        let mut image = vec![None; n];
        for (line, from, to) in &map_pairs {
            let i = index_of(from, *line)?;
            let j = index_of(to, *line)?;
            if image[i].is_some() {
                return Err(parse_err(*line, format!("duplicate map entry for `{from}`")));
            }
            image[i] = Some(j);
        }
        if let Some(i) = image.iter().position(|v| v.is_none()) {
            return Err(validation(format!("map is not total: `{}` has no image", points[i])));
        }
        let image: Vec<usize> = image.into_iter().map(|v| v.unwrap()).collect();
        Some(FiniteMap::new(&space, image).map_err(|e| validation(e.to_string()))?)
    };

    Ok(InstanceFile { space, map, phi: phi.map(|(_, p)| p), options })
}

fn parse_phi_spec(line: usize, rest: &str) -> Result<ComparisonFn, InstanceError> {
    let (family, args) = match rest.split_once(char::is_whitespace) {
        Some((f, a)) => (f, a.trim()),
        None => (rest, ""),
    };
    let bad = |msg: String| parse_err(line, msg);
    match family {
        "linear" => {
            let lambda = parse_rational(args).map_err(&bad)?;
            ComparisonFn::linear(lambda).map_err(|e| bad(e.to_string()))
        }
        "hyperbolic" => {
            if !args.is_empty() {
                return Err(bad("hyperbolic takes no parameters".into()));
            }
            Ok(ComparisonFn::hyperbolic())
        }
        "power_scaled" => {
            let parts: Vec<&str> = args.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(bad("expected `phi power_scaled <lambda> <power>`".into()));
            }
            let lambda = parse_rational(parts[0]).map_err(&bad)?;
            let power: u32 =
                parts[1].parse().map_err(|_| bad(format!("bad power `{}`", parts[1])))?;
            ComparisonFn::power_scaled(lambda, power).map_err(|e| bad(e.to_string()))
        }
        "piecewise" => {
            let mut pieces = Vec::new();
            for part in args.split_whitespace() {
                let fields: Vec<&str> = part.split(':').collect();
                if fields.len() != 3 {
                    return Err(bad(format!(
                        "piecewise piece `{part}` must be <upper>:<slope>:<intercept>"
                    )));
                }
                let upper = if fields[0] == "inf" {
                    None
                } else {
                    Some(parse_rational(fields[0]).map_err(&bad)?)
                };
                let slope = parse_rational(fields[1]).map_err(&bad)?;
                let intercept = parse_rational(fields[2]).map_err(&bad)?;
                pieces.push(AffinePiece { upper, slope, intercept });
            }
            ComparisonFn::piecewise(pieces).map_err(|e| bad(e.to_string()))
        }
        "expr" => {
            if args.is_empty() {
                return Err(bad("expected `phi expr <expression>`".into()));
            }
            ComparisonFn::expr(args).map_err(|e| bad(e.to_string()))
        }
        other => Err(bad(format!("unknown phi family `{other}`"))),
    }
}

fn parse_options(raw: &[(usize, String, String)]) -> Result<InstanceOptions, InstanceError> {
    let mut options = InstanceOptions::default();
    let mut seen = BTreeMap::new();
    for (line, key, value) in raw {
        if seen.insert(key.clone(), *line).is_some() {
            return Err(parse_err(*line, format!("duplicate option `{key}`")));
        }
        let nat = |v: &str| -> Result<usize, InstanceError> {
            v.parse().map_err(|_| parse_err(*line, format!("bad natural `{v}`")))
        };
        let positive_rational = |v: &str| -> Result<BigRational, InstanceError> {
            let r = parse_rational(v).map_err(|e| parse_err(*line, e))?;
            if !r.is_positive() {
                return Err(parse_err(*line, format!("option `{key}` must be positive")));
            }
            Ok(r)
        };
        let grid = |v: &str| -> Result<Vec<BigRational>, InstanceError> {
            v.split(',').map(|s| positive_rational(s.trim())).collect()
        };
        match key.as_str() {
            "symmetric_closure" => match value.as_str() {
                "on" => options.symmetric_closure_off = false,
                "off" => options.symmetric_closure_off = true,
                _ => return Err(parse_err(*line, "symmetric_closure takes on|off")),
            },
            "budget" => options.budget = Some(nat(value)?),
            "window" => options.window = Some(nat(value)?),
            "tail" => options.tail = Some(nat(value)?),
            "beta_depth" => options.beta_depth = Some(nat(value)? as u32),
            "iterate_budget" => options.iterate_budget = Some(nat(value)?),
            "decay_tolerance" => options.decay_tolerance = Some(positive_rational(value)?),
            "tolerance" => options.tolerance = Some(positive_rational(value)?),
            "t_grid" => options.t_grid = Some(grid(value)?),
            "gamma_grid" => options.gamma_grid = Some(grid(value)?),
            other => return Err(parse_err(*line, format!("unknown option `{other}`"))),
        }
    }
    Ok(options)
}

/// Canonical rendering: points in order, distances as the sorted upper
/// triangle (or all ordered pairs with closure off), map entries in point
/// order, then phi and options. Byte-deterministic.
pub fn render_instance(instance: &InstanceFile) -> String {
    let mut out = String::new();
    let space = &instance.space;
    let labels = space.labels();
    for label in labels {
        out.push_str(&format!("point {label}\n"));
    }
    let n = space.len();
    for i in 0..n {
        for j in 0..n {
            let emit = if instance.options.symmetric_closure_off { i != j } else { i < j };
            if emit {
                out.push_str(&format!(
                    "d {} {} {}\n",
                    labels[i],
                    labels[j],
                    format_rational(space.dist(i, j))
                ));
            }
        }
    }
    if let Some(map) = &instance.map {
        for i in 0..n {
            out.push_str(&format!("map {} {}\n", labels[i], labels[map.apply(i)]));
        }
    }
    if let Some(phi) = &instance.phi {
        out.push_str(&format!("phi {}\n", render_phi_spec(phi)));
    }
    for (key, value) in render_options(&instance.options) {
        out.push_str(&format!("option {key} {value}\n"));
    }
    out
}

fn render_phi_spec(phi: &ComparisonFn) -> String {
    match phi {
        ComparisonFn::Linear { lambda } => format!("linear {}", format_rational(lambda)),
        ComparisonFn::Hyperbolic => "hyperbolic".into(),
        ComparisonFn::PowerScaled { lambda, power } => {
            format!("power_scaled {} {power}", format_rational(lambda))
        }
        ComparisonFn::Piecewise { pieces } => {
            let parts: Vec<String> = pieces
                .iter()
                .map(|p| {
                    format!(
                        "{}:{}:{}",
                        p.upper.as_ref().map(format_rational).unwrap_or_else(|| "inf".into()),
                        format_rational(&p.slope),
                        format_rational(&p.intercept)
                    )
                })
                .collect();
            format!("piecewise {}", parts.join(" "))
        }
        ComparisonFn::Expr { source, .. } => format!("expr {source}"),
    }
}

fn render_options(options: &InstanceOptions) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = Vec::new();
    if let Some(v) = options.beta_depth {
        out.push(("beta_depth".into(), v.to_string()));
    }
    if let Some(v) = options.budget {
        out.push(("budget".into(), v.to_string()));
    }
    if let Some(v) = &options.decay_tolerance {
        out.push(("decay_tolerance".into(), format_rational(v)));
    }
    if let Some(v) = &options.gamma_grid {
        out.push(("gamma_grid".into(), render_grid(v)));
    }
    if let Some(v) = options.iterate_budget {
        out.push(("iterate_budget".into(), v.to_string()));
    }
    if options.symmetric_closure_off {
        out.push(("symmetric_closure".into(), "off".into()));
    }
    if let Some(v) = &options.t_grid {
        out.push(("t_grid".into(), render_grid(v)));
    }
    if let Some(v) = options.tail {
        out.push(("tail".into(), v.to_string()));
    }
    if let Some(v) = &options.tolerance {
        out.push(("tolerance".into(), format_rational(v)));
    }
    if let Some(v) = options.window {
        out.push(("window".into(), v.to_string()));
    }
    out
}

fn render_grid(grid: &[BigRational]) -> String {
    grid.iter().map(format_rational).collect::<Vec<_>>().join(",")
}
