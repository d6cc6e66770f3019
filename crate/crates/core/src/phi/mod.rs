//! Comparison functions and their class checks.
//!
//! A [`ComparisonFn`] is an evaluable map on the nonnegative reals. Builtin
//! families (linear, hyperbolic, power-scaled, piecewise affine) evaluate in
//! exact rational arithmetic; parsed expressions evaluate in `f64`. The
//! membership checks for the regressive, strongly regressive, Boyd-Wong,
//! Matkowski and admissible classes live in [`classes`]; they are grid
//! semi-decisions with three-valued verdicts and re-evaluable witnesses.
//! Iterate-decay and series bookkeeping runs in floating point; pointwise
//! verdicts stay exact whenever the family allows.

mod classes;
mod decay;
mod expr;

pub use classes::{
    check_max_argument_implication, is_admissible, is_boyd_wong, is_matkowski, is_regressive,
    is_strongly_regressive, ClassVerdict, MaxImplicationReport, Outcome, PhiClass, PhiWitness,
};
pub use decay::{coupled_decay_test, decay_test, CoupledDecayReport, DecayDriver, DecayReport};
pub use expr::{Expr, ExprParseError};

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::rational::{rat, rat_int, Real};

/// Exact iteration demotes to `f64` once the reduced fraction outgrows this
/// many bits; keeps pathological drivers from exploding.
const EXACT_BITS_GUARD: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhiError {
    #[error("evaluation at t = {t} produced {value}: {detail}")]
    Evaluation { t: String, value: String, detail: String },
    #[error("invalid comparison function: {0}")]
    InvalidFunction(String),
    #[error(transparent)]
    Parse(#[from] ExprParseError),
    #[error("driver violated its bound at step {step}: proposed {proposed} > {bound}")]
    DriverViolation { step: usize, proposed: String, bound: String },
    #[error("invalid sampling plan: {0}")]
    InvalidPlan(String),
}

/// One affine piece of a piecewise function: applies on the left-open,
/// right-closed interval ending at `upper` (the first piece starts closed at
/// zero; `upper == None` marks the final unbounded piece).
#[derive(Debug, Clone, PartialEq)]
pub struct AffinePiece {
    pub upper: Option<BigRational>,
    pub slope: BigRational,
    pub intercept: BigRational,
}

/// An evaluable comparison-function candidate.
#[derive(Debug, Clone, PartialEq)]
pub enum ComparisonFn {
    /// `t -> lambda * t`
    Linear { lambda: BigRational },
    /// `t -> t / (1 + t)`
    Hyperbolic,
    /// `t -> lambda * t^power` on `[0,1]`, `lambda * t` beyond.
    PowerScaled { lambda: BigRational, power: u32 },
    /// Piecewise affine over `[0, oo)`.
    Piecewise { pieces: Vec<AffinePiece> },
    /// A parsed arithmetic expression in `t`; floating point only.
    Expr { source: String, ast: Expr },
}

impl ComparisonFn {
    pub fn linear(lambda: BigRational) -> Result<Self, PhiError> {
        if lambda.is_negative() {
            return Err(PhiError::InvalidFunction("linear needs lambda >= 0".into()));
        }
        Ok(ComparisonFn::Linear { lambda })
    }

    pub fn hyperbolic() -> Self {
        ComparisonFn::Hyperbolic
    }

    pub fn power_scaled(lambda: BigRational, power: u32) -> Result<Self, PhiError> {
        if lambda.is_negative() {
            return Err(PhiError::InvalidFunction("power_scaled needs lambda >= 0".into()));
        }
        if !(1..=1000).contains(&power) {
            return Err(PhiError::InvalidFunction(
                "power_scaled needs a power in 1..=1000".into(),
            ));
        }
        Ok(ComparisonFn::PowerScaled { lambda, power })
    }

    pub fn piecewise(pieces: Vec<AffinePiece>) -> Result<Self, PhiError> {
        if pieces.is_empty() {
            return Err(PhiError::InvalidFunction("piecewise needs at least one piece".into()));
        }
        let mut prev: Option<&BigRational> = None;
        for (i, piece) in pieces.iter().enumerate() {
            match &piece.upper {
                Some(u) => {
                    if i + 1 == pieces.len() {
                        return Err(PhiError::InvalidFunction(
                            "final piecewise piece must be unbounded".into(),
                        ));
                    }
                    if !u.is_positive() {
                        return Err(PhiError::InvalidFunction(
                            "piecewise breakpoints must be positive".into(),
                        ));
                    }
                    if let Some(p) = prev {
                        if u <= p {
                            return Err(PhiError::InvalidFunction(
                                "piecewise breakpoints must ascend strictly".into(),
                            ));
                        }
                    }
                    prev = Some(u);
                }
                None => {
                    if i + 1 != pieces.len() {
                        return Err(PhiError::InvalidFunction(
                            "only the final piecewise piece may be unbounded".into(),
                        ));
                    }
                }
            }
        }
        Ok(ComparisonFn::Piecewise { pieces })
    }

    pub fn expr(source: &str) -> Result<Self, PhiError> {
        let ast = Expr::parse(source)?;
        Ok(ComparisonFn::Expr { source: source.to_string(), ast })
    }

    /// The regressive-but-not-strongly-regressive benchmark:
    /// `t/2` on `[0,1]`, `(t+1)/2` beyond.
    pub fn piecewise_counterexample() -> Self {
        ComparisonFn::Piecewise {
            pieces: vec![
                AffinePiece { upper: Some(rat_int(1)), slope: rat(1, 2), intercept: rat_int(0) },
                AffinePiece { upper: None, slope: rat(1, 2), intercept: rat(1, 2) },
            ],
        }
    }

    /// Increasing, right-continuous, with a geometric iterate tail:
    /// `t/2` on `[0,1]`, `(t+1)/4` beyond.
    pub fn piecewise_geometric() -> Self {
        ComparisonFn::Piecewise {
            pieces: vec![
                AffinePiece { upper: Some(rat_int(1)), slope: rat(1, 2), intercept: rat_int(0) },
                AffinePiece { upper: None, slope: rat(1, 4), intercept: rat(1, 4) },
            ],
        }
    }

    /// Whether evaluation has an exact rational path.
    pub fn exact_capable(&self) -> bool {
        !matches!(self, ComparisonFn::Expr { .. })
    }

    /// Breakpoints worth probing for discontinuities, if any.
    pub fn breakpoints(&self) -> Vec<BigRational> {
        match self {
            ComparisonFn::Piecewise { pieces } => {
                pieces.iter().filter_map(|p| p.upper.clone()).collect()
            }
            _ => Vec::new(),
        }
    }

    /// The conjugate `t -> c * phi(t/c)` within the same family, when that
    /// stays representable (linear and piecewise affine).
    pub fn scale_conjugate(&self, c: &BigRational) -> Option<ComparisonFn> {
        assert!(c.is_positive());
        match self {
            ComparisonFn::Linear { lambda } => Some(ComparisonFn::Linear { lambda: lambda.clone() }),
            ComparisonFn::Piecewise { pieces } => Some(ComparisonFn::Piecewise {
                pieces: pieces
                    .iter()
                    .map(|p| AffinePiece {
                        upper: p.upper.as_ref().map(|u| u * c),
                        slope: p.slope.clone(),
                        intercept: &p.intercept * c,
                    })
                    .collect(),
            }),
            _ => None,
        }
    }

    /// Evaluates at an exact point. Exact families return exact values;
    /// expressions return approximations. Negative or non-finite results are
    /// evaluation errors.
    pub fn eval(&self, t: &BigRational) -> Result<Real, PhiError> {
        if t.is_negative() {
            return Err(PhiError::Evaluation {
                t: crate::rational::format_rational(t),
                value: "-".into(),
                detail: "comparison functions are defined on t >= 0".into(),
            });
        }
        let value = match self {
            ComparisonFn::Linear { lambda } => Real::Exact(lambda * t),
            ComparisonFn::Hyperbolic => Real::Exact(t / (BigRational::one() + t)),
            ComparisonFn::PowerScaled { lambda, power } => {
                if *t <= BigRational::one() {
                    let mut acc = BigRational::one();
                    for _ in 0..*power {
                        acc *= t;
                    }
                    Real::Exact(lambda * acc)
                } else {
                    Real::Exact(lambda * t)
                }
            }
            ComparisonFn::Piecewise { pieces } => {
                let piece = pieces
                    .iter()
                    .find(|p| p.upper.as_ref().is_none_or(|u| t <= u))
                    .expect("final piece is unbounded");
                Real::Exact(&piece.slope * t + &piece.intercept)
            }
            ComparisonFn::Expr { ast, .. } => Real::Approx(ast.eval(t.to_f64().unwrap_or(f64::NAN))),
        };
        self.guard_output(&crate::rational::format_rational(t), value)
    }

    /// Floating-point lane, used by iterate-decay and series bookkeeping.
    pub fn eval_f64(&self, t: f64) -> Result<f64, PhiError> {
        if t < 0.0 || !t.is_finite() {
            return Err(PhiError::Evaluation {
                t: t.to_string(),
                value: "-".into(),
                detail: "comparison functions are defined on finite t >= 0".into(),
            });
        }
        let value = match self {
            ComparisonFn::Linear { lambda } => lambda.to_f64().unwrap_or(f64::NAN) * t,
            ComparisonFn::Hyperbolic => t / (1.0 + t),
            ComparisonFn::PowerScaled { lambda, power } => {
                let l = lambda.to_f64().unwrap_or(f64::NAN);
                if t <= 1.0 {
                    l * t.powi(*power as i32)
                } else {
                    l * t
                }
            }
            ComparisonFn::Piecewise { pieces } => {
                let piece = pieces
                    .iter()
                    .find(|p| {
                        p.upper.as_ref().is_none_or(|u| t <= u.to_f64().unwrap_or(f64::NAN))
                    })
                    .expect("final piece is unbounded");
                piece.slope.to_f64().unwrap_or(f64::NAN) * t
                    + piece.intercept.to_f64().unwrap_or(f64::NAN)
            }
            ComparisonFn::Expr { ast, .. } => ast.eval(t),
        };
        match self.guard_output(&t.to_string(), Real::Approx(value))? {
            Real::Approx(v) => Ok(v),
            Real::Exact(_) => unreachable!(),
        }
    }

    /// Evaluates at a mixed value, staying exact when both the point and the
    /// family allow.
    pub fn eval_real(&self, t: &Real) -> Result<Real, PhiError> {
        match t {
            Real::Exact(r) => self.eval(r),
            Real::Approx(v) => self.eval_f64(*v).map(Real::Approx),
        }
    }

    fn guard_output(&self, at: &str, value: Real) -> Result<Real, PhiError> {
        if !value.is_finite() || value.is_negative() {
            return Err(PhiError::Evaluation {
                t: at.to_string(),
                value: value.to_string(),
                detail: "result must be finite and nonnegative".into(),
            });
        }
        Ok(value)
    }

    /// The n-th iterate at `t`; `n = 0` is the identity. Exact values demote
    /// to floating point if the fraction outgrows the bit guard.
    pub fn iterate(&self, t: &BigRational, n: usize) -> Result<Real, PhiError> {
        let mut value = Real::Exact(t.clone());
        for _ in 0..n {
            value = self.eval_real(&value)?;
            if value.exact_bits() > EXACT_BITS_GUARD {
                value = value.approx();
            }
        }
        Ok(value)
    }
}

impl fmt::Display for ComparisonFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComparisonFn::Linear { lambda } => {
                write!(f, "linear({})", crate::rational::format_rational(lambda))
            }
            ComparisonFn::Hyperbolic => write!(f, "hyperbolic"),
            ComparisonFn::PowerScaled { lambda, power } => {
                write!(f, "power_scaled({}, {power})", crate::rational::format_rational(lambda))
            }
            ComparisonFn::Piecewise { pieces } => {
                write!(f, "piecewise(")?;
                for (i, p) in pieces.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    let upper = p
                        .upper
                        .as_ref()
                        .map(crate::rational::format_rational)
                        .unwrap_or_else(|| "inf".into());
                    write!(
                        f,
                        "{upper}:{}:{}",
                        crate::rational::format_rational(&p.slope),
                        crate::rational::format_rational(&p.intercept)
                    )?;
                }
                write!(f, ")")
            }
            ComparisonFn::Expr { source, .. } => write!(f, "expr({source})"),
        }
    }
}

/// Finite surrogate for the universal/existential quantifiers in the class
/// definitions: where to sample, how deep to halve, how long to iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingPlan {
    pub t_grid: Vec<BigRational>,
    pub gamma_grid: Vec<BigRational>,
    pub beta_search_depth: u32,
    pub iterate_budget: usize,
    pub decay_tolerance: BigRational,
}

impl SamplingPlan {
    pub fn new(
        t_grid: Vec<BigRational>,
        gamma_grid: Vec<BigRational>,
        beta_search_depth: u32,
        iterate_budget: usize,
        decay_tolerance: BigRational,
    ) -> Result<Self, PhiError> {
        if t_grid.is_empty() || gamma_grid.is_empty() {
            return Err(PhiError::InvalidPlan("grids must be nonempty".into()));
        }
        for g in t_grid.iter().chain(gamma_grid.iter()) {
            if !g.is_positive() {
                return Err(PhiError::InvalidPlan("grid points must be positive".into()));
            }
        }
        if !ascending(&t_grid) || !ascending(&gamma_grid) {
            return Err(PhiError::InvalidPlan("grids must ascend strictly".into()));
        }
        if !decay_tolerance.is_positive() {
            return Err(PhiError::InvalidPlan("decay tolerance must be positive".into()));
        }
        Ok(SamplingPlan { t_grid, gamma_grid, beta_search_depth, iterate_budget, decay_tolerance })
    }

    /// The default grid `{j/16 : 1 <= j <= 64} U {2^j : 0 <= j <= 6}` with
    /// depth 20, budget 10^5 and tolerance 10^-8.
    pub fn default_plan() -> Self {
        let mut grid: Vec<BigRational> = (1..=64).map(|j| rat(j, 16)).collect();
        for j in 0..=6u32 {
            let p = rat_int(1i64 << j);
            if !grid.contains(&p) {
                grid.push(p);
            }
        }
        grid.sort();
        SamplingPlan {
            t_grid: grid.clone(),
            gamma_grid: grid,
            beta_search_depth: 20,
            iterate_budget: 100_000,
            decay_tolerance: rat(1, 100_000_000),
        }
    }

    /// Same grids, looser decay tolerance; suits slowly decaying families
    /// like the hyperbolic one.
    pub fn with_decay_tolerance(mut self, tolerance: BigRational) -> Self {
        self.decay_tolerance = tolerance;
        self
    }
}

impl Default for SamplingPlan {
    fn default() -> Self {
        SamplingPlan::default_plan()
    }
}

fn ascending(grid: &[BigRational]) -> bool {
    grid.windows(2).all(|w| w[0] < w[1])
}
