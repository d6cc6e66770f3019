use num_rational::BigRational;
use num_traits::Zero;

use super::{FiniteSpace, MetricError, PointId, RuleSpace};

/// The axiom hierarchy over symmetric spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    Symmetric,
    ReflexiveSufficient,
    Triangular,
    Tetrahedral,
    Polyhedral(u32),
}

impl Axiom {
    pub fn name(&self) -> String {
        match self {
            Axiom::Symmetric => "symmetric".into(),
            Axiom::ReflexiveSufficient => "reflexive_sufficient".into(),
            Axiom::Triangular => "triangular".into(),
            Axiom::Tetrahedral => "tetrahedral".into(),
            Axiom::Polyhedral(k) => format!("polyhedral({k})"),
        }
    }
}

/// A concrete violation: the points involved and both sides of the failed
/// comparison, so it can be re-evaluated against the space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomWitness {
    pub points: Vec<PointId>,
    pub lhs: BigRational,
    pub rhs: BigRational,
}

/// Outcome of one axiom check. `holds == false` exactly when a witness is
/// present; `vacuous` flags verdicts that hold because no eligible tuple
/// exists (never silently).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub holds: bool,
    pub vacuous: bool,
    pub witness: Option<AxiomWitness>,
}

impl AxiomReport {
    fn holding(axiom: Axiom) -> Self {
        AxiomReport { axiom, holds: true, vacuous: false, witness: None }
    }

    fn vacuous(axiom: Axiom) -> Self {
        AxiomReport { axiom, holds: true, vacuous: true, witness: None }
    }

    fn refuted(axiom: Axiom, witness: AxiomWitness) -> Self {
        AxiomReport { axiom, holds: false, vacuous: false, witness: Some(witness) }
    }

    /// Re-evaluates the stored witness against a space: a refuting report is
    /// sound iff its witness still reproduces the violation.
    pub fn witness_reproduces(&self, space: &FiniteSpace) -> bool {
        let Some(w) = &self.witness else {
            return false;
        };
        let idx: Vec<usize> = w.points.iter().map(|p| p.index).collect();
        if idx.iter().any(|&i| i >= space.len()) {
            return false;
        }
        let d = |i: usize, j: usize| space.dist(idx[i], idx[j]).clone();
        match self.axiom {
            Axiom::Symmetric => idx.len() == 2 && d(0, 1) != d(1, 0),
            Axiom::ReflexiveSufficient => {
                idx.len() == 2 && idx[0] != idx[1] && d(0, 1).is_zero()
            }
            Axiom::Triangular => idx.len() == 3 && d(0, 1) > d(0, 2) + d(2, 1),
            Axiom::Tetrahedral => {
                idx.len() == 4
                    && pairwise_distinct(&idx)
                    && d(0, 1) > d(0, 2) + d(2, 3) + d(3, 1)
            }
            Axiom::Polyhedral(k) => {
                // witness layout: x, c_1..c_k, y
                if idx.len() != k as usize + 2 || !pairwise_distinct(&idx) {
                    return false;
                }
                let mut sum = BigRational::zero();
                for win in idx.windows(2) {
                    sum += space.dist(win[0], win[1]);
                }
                *space.dist(idx[0], *idx.last().unwrap()) > sum
            }
        }
    }
}

fn pairwise_distinct(idx: &[usize]) -> bool {
    for a in 0..idx.len() {
        for b in (a + 1)..idx.len() {
            if idx[a] == idx[b] {
                return false;
            }
        }
    }
    true
}

/// Symmetry: `d(x,y) = d(y,x)` for all pairs. Witness is the first violating
/// pair in lexicographic point order.
pub fn check_symmetry(space: &FiniteSpace) -> AxiomReport {
    let n = space.len();
    for i in 0..n {
        for j in 0..n {
            if space.dist(i, j) != space.dist(j, i) {
                return AxiomReport::refuted(
                    Axiom::Symmetric,
                    AxiomWitness {
                        points: vec![space.point(i), space.point(j)],
                        lhs: space.dist(i, j).clone(),
                        rhs: space.dist(j, i).clone(),
                    },
                );
            }
        }
    }
    AxiomReport::holding(Axiom::Symmetric)
}

/// Reflexive sufficiency: `d(x,y) = 0` exactly when `x = y`. The diagonal is zero by
/// construction, so only spurious off-diagonal zeros can refute.
pub fn check_reflexive_sufficiency(space: &FiniteSpace) -> AxiomReport {
    let n = space.len();
    for i in 0..n {
        for j in 0..n {
            if i != j && space.dist(i, j).is_zero() {
                return AxiomReport::refuted(
                    Axiom::ReflexiveSufficient,
                    AxiomWitness {
                        points: vec![space.point(i), space.point(j)],
                        lhs: BigRational::zero(),
                        rhs: BigRational::zero(),
                    },
                );
            }
        }
    }
    AxiomReport::holding(Axiom::ReflexiveSufficient)
}

fn require_prerequisites(space: &FiniteSpace, check: Axiom) -> Result<(), MetricError> {
    if !check_symmetry(space).holds {
        return Err(MetricError::AxiomOrder { check, prerequisite: Axiom::Symmetric });
    }
    if !check_reflexive_sufficiency(space).holds {
        return Err(MetricError::AxiomOrder {
            check,
            prerequisite: Axiom::ReflexiveSufficient,
        });
    }
    Ok(())
}

/// The triangular inequality `d(x,y) <= d(x,z) + d(z,y)` over all triples. Requires symmetry
/// and reflexive sufficiency to hold first.
pub fn check_triangular(space: &FiniteSpace) -> Result<AxiomReport, MetricError> {
    require_prerequisites(space, Axiom::Triangular)?;
    let n = space.len();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if *space.dist(x, y) > space.dist(x, z) + space.dist(z, y) {
                    return Ok(AxiomReport::refuted(
                        Axiom::Triangular,
                        AxiomWitness {
                            points: vec![space.point(x), space.point(y), space.point(z)],
                            lhs: space.dist(x, y).clone(),
                            rhs: space.dist(x, z) + space.dist(z, y),
                        },
                    ));
                }
            }
        }
    }
    Ok(AxiomReport::holding(Axiom::Triangular))
}

/// The tetrahedral inequality `d(x,y) <= d(x,u) + d(u,v) + d(v,y)` over quadruples of
/// pairwise-distinct points. Vacuous below four points.
pub fn check_tetrahedral(space: &FiniteSpace) -> Result<AxiomReport, MetricError> {
    require_prerequisites(space, Axiom::Tetrahedral)?;
    let n = space.len();
    if n < 4 {
        return Ok(AxiomReport::vacuous(Axiom::Tetrahedral));
    }
    for x in 0..n {
        for y in 0..n {
            if y == x {
                continue;
            }
            for u in 0..n {
                if u == x || u == y {
                    continue;
                }
                for v in 0..n {
                    if v == x || v == y || v == u {
                        continue;
                    }
                    let bound = space.dist(x, u) + space.dist(u, v) + space.dist(v, y);
                    if *space.dist(x, y) > bound {
                        return Ok(AxiomReport::refuted(
                            Axiom::Tetrahedral,
                            AxiomWitness {
                                points: vec![
                                    space.point(x),
                                    space.point(y),
                                    space.point(u),
                                    space.point(v),
                                ],
                                lhs: space.dist(x, y).clone(),
                                rhs: bound,
                            },
                        ));
                    }
                }
            }
        }
    }
    Ok(AxiomReport::holding(Axiom::Tetrahedral))
}

/// The `(2+k)`-polyhedral inequality: for every pair `x != y` and
/// every regular k-chain `C` avoiding both, `d(x,y) <= L(x;C;y)`.
///
/// Chains are enumerated depth-first in lexicographic order over point
/// indices, so the witness is the lexicographically first violating
/// `(x, C, y)`. With `2+k` exceeding the point count the verdict is
/// vacuously true and flagged as such.
pub fn check_polyhedral(space: &FiniteSpace, k: u32) -> AxiomReport {
    assert!(k >= 1, "polyhedral index k must be >= 1");
    let n = space.len();
    let axiom = Axiom::Polyhedral(k);
    if (k as usize) + 2 > n {
        return AxiomReport::vacuous(axiom);
    }
    for x in 0..n {
        let mut chain: Vec<usize> = Vec::with_capacity(k as usize);
        let mut used = vec![false; n];
        used[x] = true;
        if let Some(w) = polyhedral_dfs(space, x, k as usize, &mut chain, &mut used, &BigRational::zero())
        {
            return AxiomReport::refuted(axiom, w);
        }
    }
    AxiomReport::holding(axiom)
}

fn polyhedral_dfs(
    space: &FiniteSpace,
    x: usize,
    k: usize,
    chain: &mut Vec<usize>,
    used: &mut Vec<bool>,
    partial: &BigRational,
) -> Option<AxiomWitness> {
    let n = space.len();
    if chain.len() == k {
        let last = *chain.last().unwrap();
        for (y, y_used) in used.iter().enumerate() {
            if *y_used {
                continue;
            }
            let bound = partial + space.dist(last, y);
            if *space.dist(x, y) > bound {
                let mut points = vec![space.point(x)];
                points.extend(chain.iter().map(|&c| space.point(c)));
                points.push(space.point(y));
                return Some(AxiomWitness {
                    points,
                    lhs: space.dist(x, y).clone(),
                    rhs: bound,
                });
            }
        }
        return None;
    }
    for c in 0..n {
        if used[c] {
            continue;
        }
        let step = if let Some(&prev) = chain.last() {
            space.dist(prev, c)
        } else {
            space.dist(x, c)
        };
        let next_partial = partial + step;
        chain.push(c);
        used[c] = true;
        let hit = polyhedral_dfs(space, x, k, chain, used, &next_partial);
        used[c] = false;
        chain.pop();
        if hit.is_some() {
            return hit;
        }
    }
    None
}

/// Smallest `k` in `[1, n-2]` whose polyhedral inequality holds
/// non-vacuously, if any.
///
/// Finite adaptation of the per-subset index `k(M)`: the index is sought for
/// the whole space. Callers are expected to have established reflexive
/// sufficiency; the scan itself does not require it.
pub fn minimal_polyhedral_index(space: &FiniteSpace) -> Option<u32> {
    let n = space.len();
    if n < 3 {
        return None;
    }
    for k in 1..=(n as u32 - 2) {
        let report = check_polyhedral(space, k);
        if report.holds && !report.vacuous {
            return Some(k);
        }
    }
    None
}

/// The polyhedral inequality on the finite truncation of a countable
/// carrier: the first `N`
/// carrier points plus every named extra point are materialized and checked
/// exactly. Truncations too small for `2+k` points report vacuity, as the
/// finite check does.
pub fn check_rule_polyhedral(
    space: &RuleSpace,
    k: u32,
    truncation: usize,
) -> Result<AxiomReport, MetricError> {
    let finite = space.truncate(truncation)?;
    Ok(check_polyhedral(&finite, k))
}
