//! Exact rational scalars and the mixed exact/approximate value type.
//!
//! Finite-space verdicts are computed over [`BigRational`] with no tolerance
//! anywhere. Comparison functions may only be evaluable in floating point
//! (parsed expressions), so their values are carried as [`Real`]: exact when
//! a closed form allows, `f64` otherwise. A comparison between an exact and
//! an approximate value degrades to `f64`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Shorthand for an exact rational built from machine integers.
pub fn rat(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Exact rational for an integer.
pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Renders a rational as `p` or `p/q` with the reduced, sign-normalized form.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q`. Rejects empty parts, zero denominators and any
/// floating-point syntax (`.`, `e`).
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty rational literal".into());
    }
    if s.contains(['.', 'e', 'E']) {
        return Err(format!("floating literal `{s}` rejected; write p/q"));
    }
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let numer: BigInt = num_str
        .trim()
        .parse()
        .map_err(|_| format!("bad numerator in `{s}`"))?;
    let denom: BigInt = den_str
        .trim()
        .parse()
        .map_err(|_| format!("bad denominator in `{s}`"))?;
    if denom.is_zero() {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(BigRational::new(numer, denom))
}

/// Exact conversion of a finite `f64` into a rational. Every finite binary
/// float is a rational with a power-of-two denominator, so nothing is lost.
pub fn rational_from_f64(v: f64) -> Option<BigRational> {
    BigRational::from_float(v)
}

/// A scalar that is either exact or a floating approximation.
///
/// Exact-vs-exact comparisons are rational comparisons; as soon as one side
/// is approximate the comparison happens in `f64`.
#[derive(Debug, Clone)]
pub enum Real {
    Exact(BigRational),
    Approx(f64),
}

impl Real {
    pub fn zero() -> Self {
        Real::Exact(BigRational::zero())
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Real::Approx(v) => *v,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Real::Exact(r) => Some(r),
            Real::Approx(_) => None,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Real::Exact(r) => r.is_negative(),
            Real::Approx(v) => *v < 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Real::Exact(_) => true,
            Real::Approx(v) => v.is_finite(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Real::Exact(r) => r.is_zero(),
            Real::Approx(v) => *v == 0.0,
        }
    }

    /// Compares against an exact rational, degrading to `f64` when approximate.
    pub fn cmp_rational(&self, other: &BigRational) -> Ordering {
        match self {
            Real::Exact(r) => r.cmp(other),
            Real::Approx(v) => v
                .partial_cmp(&other.to_f64().unwrap_or(f64::NAN))
                .unwrap_or(Ordering::Greater),
        }
    }

    /// Compares two values, exact when both sides are.
    pub fn cmp_real(&self, other: &Real) -> Ordering {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => a.cmp(b),
            _ => self
                .to_f64()
                .partial_cmp(&other.to_f64())
                .unwrap_or(Ordering::Greater),
        }
    }

    pub fn max_real(self, other: Real) -> Real {
        if self.cmp_real(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    /// Total bit size of the reduced fraction; used to guard against
    /// unbounded growth in exact iteration.
    pub fn exact_bits(&self) -> u64 {
        match self {
            Real::Exact(r) => r.numer().bits() + r.denom().bits(),
            Real::Approx(_) => 0,
        }
    }

    /// Demotes to a floating approximation.
    pub fn approx(&self) -> Real {
        Real::Approx(self.to_f64())
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_real(other) == Ordering::Equal
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(r) => write!(f, "{}", format_rational(r)),
            Real::Approx(v) => write!(f, "~{v}"),
        }
    }
}

impl From<BigRational> for Real {
    fn from(r: BigRational) -> Self {
        Real::Exact(r)
    }
}

impl From<f64> for Real {
    fn from(v: f64) -> Self {
        Real::Approx(v)
    }
}
