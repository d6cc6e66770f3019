//! Bundled example instances.
//!
//! `two_limit` realizes the phenomenon of a convergent sequence with two
//! limit points in a tetrahedral space: the specific distances are this
//! toolkit's own construction and ship with their exhaustive-scan oracle
//! tests. `banach_demo` is a certified contraction family; `cycle_demo`
//! refutes contractivity for every regressive function;
//! `non_triangular_tetra` is the axiom-hierarchy fixture.

use num_rational::BigRational;
use num_traits::One;

use crate::instance::{InstanceError, InstanceFile, InstanceOptions};
use crate::metric::FiniteSpace;
use crate::orbit::FiniteMap;
use crate::phi::ComparisonFn;
use crate::rational::{parse_rational, rat, rat_int};

fn params_err(name: &str, msg: impl Into<String>) -> InstanceError {
    InstanceError::BuiltinParams { name: name.to_string(), msg: msg.into() }
}

/// Points `y_1..y_n` plus `u`, `v`: `d(y_m, y_n) = 1` for `m != n`,
/// `d(y_n, u) = d(y_n, v) = 1/n`, `d(u, v) = 1`. No map, no phi.
pub fn two_limit(n: usize) -> Result<InstanceFile, InstanceError> {
    if n < 2 {
        return Err(params_err("two_limit", "needs at least 2 sequence points"));
    }
    let mut labels: Vec<String> = (1..=n).map(|i| format!("y{i}")).collect();
    labels.push("u".into());
    labels.push("v".into());
    let mut entries = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            entries.push((format!("y{i}"), format!("y{j}"), rat_int(1)));
        }
        entries.push((format!("y{i}"), "u".to_string(), rat(1, i as i64)));
        entries.push((format!("y{i}"), "v".to_string(), rat(1, i as i64)));
    }
    entries.push(("u".to_string(), "v".to_string(), rat_int(1)));
    let space = FiniteSpace::from_symmetric_entries(labels, &entries)
        .expect("two_limit construction is well-formed");
    Ok(InstanceFile { space, map: None, phi: None, options: InstanceOptions::default() })
}

/// The 4-point fixture: `d(a,b) = 3`, every other off-diagonal distance 1.
/// Triangular fails, tetrahedral holds, minimal polyhedral index 2.
pub fn non_triangular_tetra() -> InstanceFile {
    let labels: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
    let mut entries = Vec::new();
    for i in 0..4usize {
        for j in (i + 1)..4 {
            let v = if (i, j) == (0, 1) { rat_int(3) } else { rat_int(1) };
            entries.push((labels[i].clone(), labels[j].clone(), v));
        }
    }
    let space = FiniteSpace::from_symmetric_entries(labels, &entries)
        .expect("fixture construction is well-formed");
    InstanceFile { space, map: None, phi: None, options: InstanceOptions::default() }
}

/// Points at `lambda^i` on the rational line with the shift-toward-the-end
/// map and `phi = linear(lambda)`. Satisfies the Banach condition with
/// factor lambda, hence contractive; the unique fixed point is the last
/// point and every orbit walks straight to it.
pub fn banach_demo(n: usize, lambda: &BigRational) -> Result<InstanceFile, InstanceError> {
    if n < 2 {
        return Err(params_err("banach_demo", "needs at least 2 points"));
    }
    if !(lambda > &BigRational::from_integer(0.into()) && lambda < &BigRational::one()) {
        return Err(params_err("banach_demo", "lambda must satisfy 0 < lambda < 1"));
    }
    let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut coords = vec![BigRational::one()];
    for i in 1..n {
        let prev = coords[i - 1].clone();
        coords.push(prev * lambda);
    }
    let mut entries = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            entries.push((labels[i].clone(), labels[j].clone(), &coords[i] - &coords[j]));
        }
    }
    let space = FiniteSpace::from_symmetric_entries(labels, &entries)
        .expect("banach_demo construction is well-formed");
    let image: Vec<usize> = (0..n).map(|i| (i + 1).min(n - 1)).collect();
    let map = FiniteMap::new(&space, image).expect("shift map is total");
    let phi = ComparisonFn::linear(lambda.clone()).expect("lambda >= 0");
    Ok(InstanceFile { space, map: Some(map), phi: Some(phi), options: InstanceOptions::default() })
}

/// `p` points at pairwise distance 1 with the cyclic shift: no fixed point,
/// and no regressive function can make the map contractive.
pub fn cycle_demo(p: usize) -> Result<InstanceFile, InstanceError> {
    if p < 2 {
        return Err(params_err("cycle_demo", "needs at least 2 points"));
    }
    let labels: Vec<String> = (0..p).map(|i| format!("c{i}")).collect();
    let mut entries = Vec::new();
    for i in 0..p {
        for j in (i + 1)..p {
            entries.push((labels[i].clone(), labels[j].clone(), rat_int(1)));
        }
    }
    let space = FiniteSpace::from_symmetric_entries(labels, &entries)
        .expect("cycle_demo construction is well-formed");
    let image: Vec<usize> = (0..p).map(|i| (i + 1) % p).collect();
    let map = FiniteMap::new(&space, image).expect("cycle map is total");
    let phi = ComparisonFn::linear(rat(1, 2)).expect("1/2 >= 0");
    Ok(InstanceFile { space, map: Some(map), phi: Some(phi), options: InstanceOptions::default() })
}

pub const BUILTIN_NAMES: &[&str] = &["two_limit", "non_triangular_tetra", "banach_demo", "cycle_demo"];

/// Dispatches a builtin by name with string parameters, as the CLI sees
/// them: `two_limit <n>`, `non_triangular_tetra`, `banach_demo <n> <lambda>`,
/// `cycle_demo <p>`.
pub fn builtin(name: &str, params: &[String]) -> Result<InstanceFile, InstanceError> {
    let nat = |v: &str| -> Result<usize, InstanceError> {
        v.parse().map_err(|_| params_err(name, format!("bad natural `{v}`")))
    };
    match name {
        "two_limit" => {
            let [n] = params else {
                return Err(params_err(name, "expected `two_limit <n>`"));
            };
            two_limit(nat(n)?)
        }
        "non_triangular_tetra" => {
            if !params.is_empty() {
                return Err(params_err(name, "takes no parameters"));
            }
            Ok(non_triangular_tetra())
        }
        "banach_demo" => {
            let [n, lambda] = params else {
                return Err(params_err(name, "expected `banach_demo <n> <lambda>`"));
            };
            let lambda = parse_rational(lambda).map_err(|e| params_err(name, e))?;
            banach_demo(nat(n)?, &lambda)
        }
        "cycle_demo" => {
            let [p] = params else {
                return Err(params_err(name, "expected `cycle_demo <p>`"));
            };
            cycle_demo(nat(p)?)
        }
        other => Err(InstanceError::UnknownBuiltin(other.to_string())),
    }
}
