//! Pushforward calculus and quasi-invariant measures on finite quasigroups.
//!
//! On a finite set a measure is a weight vector, and the pushforward along a
//! permutation `T` is the reindexed vector `(T_*μ)[i] = μ[T⁻¹(i)]`. A measure
//! is left quasi-invariant when every `(L_a)_*μ` is a positive multiple
//! `j(a)·μ`; right translations give `ρ(a)` the same way.
//!
//! Permutations preserve total mass, so on a finite quasigroup any such
//! scalar is forced to be 1. The solver reports that collapse with the mass
//! data that proves it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::nullspace;
use crate::perm::Perm;
use crate::perm_group::orbit_under;
use crate::quasigroup::{Element, FiniteQuasigroup};
use crate::scalar::{from_int, sum, Field};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("weight at {index} is negative")]
    NegativeWeight { index: usize },
    #[error("measure has zero total mass")]
    ZeroMass,
    #[error("cocycle value at {index} is not strictly positive")]
    NonPositiveCocycle { index: usize },
    #[error("only the zero vector satisfies the invariance equations")]
    NoPositiveSolution,
    #[error("{side} translation by {element} scales the measure non-uniformly")]
    RatioMismatch { side: Side, element: Element },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// A nonnegative weight vector with positive total mass.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure<S> {
    weights: Vec<S>,
}

impl<S: Field> Measure<S> {
    pub fn new(weights: Vec<S>) -> Result<Self, MeasureError> {
        if let Some(index) = weights.iter().position(|w| w.is_negative()) {
            return Err(MeasureError::NegativeWeight { index });
        }
        if !sum(&weights).is_positive() {
            return Err(MeasureError::ZeroMass);
        }
        Ok(Measure { weights })
    }

    /// The counting measure on `n` points.
    pub fn counting(n: usize) -> Self {
        Measure {
            weights: vec![S::one(); n],
        }
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn degree(&self) -> usize {
        self.weights.len()
    }

    pub fn mass(&self) -> S {
        sum(&self.weights)
    }

    /// `μ(E)` for a set of points.
    pub fn measure_of(&self, set: &[usize]) -> S {
        sum(set.iter().map(|&i| &self.weights[i]))
    }

    /// Rescales to the given total mass.
    pub fn normalized_to(&self, mass: S) -> Self {
        let f = mass / self.mass();
        Measure {
            weights: self.weights.iter().map(|w| w.clone() * f.clone()).collect(),
        }
    }
}

/// A strictly positive function on the elements of a quasigroup.
#[derive(Debug, Clone, PartialEq)]
pub struct Cocycle<S> {
    values: Vec<S>,
}

impl<S: Field> Cocycle<S> {
    pub fn new(values: Vec<S>) -> Result<Self, MeasureError> {
        match values.iter().position(|v| !v.is_positive()) {
            Some(index) => Err(MeasureError::NonPositiveCocycle { index }),
            None => Ok(Cocycle { values }),
        }
    }

    pub fn trivial(n: usize) -> Self {
        Cocycle {
            values: vec![S::one(); n],
        }
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn get(&self, x: Element) -> &S {
        &self.values[x]
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| v.is_one())
    }
}

/// `(T_*μ)[i] = μ[T⁻¹(i)]`.
pub fn pushforward<S: Field>(t: &Perm, mu: &Measure<S>) -> Result<Measure<S>, MeasureError> {
    if t.degree() != mu.degree() {
        return Err(MeasureError::DegreeMismatch {
            left: t.degree(),
            right: mu.degree(),
        });
    }
    let mut weights = vec![S::zero(); mu.degree()];
    for (i, w) in mu.weights.iter().enumerate() {
        weights[t.apply(i)] = w.clone();
    }
    Ok(Measure { weights })
}

/// Whether `(S∘T)_*μ = S_*(T_*μ)` holds exactly.
pub fn pushforward_functoriality_check<S: Field>(
    s: &Perm,
    t: &Perm,
    mu: &Measure<S>,
) -> Result<bool, MeasureError> {
    let composed = pushforward(
        &s.try_compose(t).map_err(|_| MeasureError::DegreeMismatch {
            left: s.degree(),
            right: t.degree(),
        })?,
        mu,
    )?;
    let iterated = pushforward(s, &pushforward(t, mu)?)?;
    Ok(composed == iterated)
}

/// The constant `c` with `pushed = c·mu`, if one exists.
///
/// `c` is read off the first coordinate where `mu` is positive; coordinates
/// where `mu` vanishes must vanish in `pushed` too.
pub fn scale_factor<S: Field>(pushed: &Measure<S>, mu: &Measure<S>) -> Option<S> {
    let first = mu.weights.iter().position(|w| w.is_positive())?;
    let c = pushed.weights[first].clone() / mu.weights[first].clone();
    pushed
        .weights
        .iter()
        .zip(&mu.weights)
        .all(|(p, m)| *p == c.clone() * m.clone())
        .then_some(c)
}

/// Mass data behind the collapse of the cocycles on a finite quasigroup.
#[derive(Debug, Clone, PartialEq)]
pub struct CollapseExplanation<S> {
    pub total_mass: S,
    /// `mass((L_a)_*μ)` for each `a`.
    pub left_pushed_mass: Vec<S>,
    /// `mass((R_a)_*μ)` for each `a`.
    pub right_pushed_mass: Vec<S>,
    /// `j(a)` forced by `j(a)·mass(μ) = mass((L_a)_*μ)`.
    pub forced_left: Vec<S>,
    pub forced_right: Vec<S>,
}

impl<S: Field + std::fmt::Display> CollapseExplanation<S> {
    pub fn summary(&self) -> String {
        let all_equal = self
            .left_pushed_mass
            .iter()
            .chain(&self.right_pushed_mass)
            .all(|m| *m == self.total_mass);
        if all_equal {
            format!(
                "every translation is a permutation and preserves total mass {}; \
                 j(a)·mass = mass forces j ≡ 1 and likewise ρ ≡ 1",
                self.total_mass
            )
        } else {
            "some translation changed total mass".to_string()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiInvariantSolution<S> {
    /// Dimension of the space of measures fixed by every translation.
    pub dimension: usize,
    pub basis: Vec<Vec<S>>,
    /// Canonical positive solution, normalized to total mass `n`.
    pub measure: Measure<S>,
    pub left_cocycle: Cocycle<S>,
    pub right_cocycle: Cocycle<S>,
    pub degenerate: bool,
    pub explanation: CollapseExplanation<S>,
    /// `LMlt(Q)` is transitive, so invariant measures are constant.
    pub lmlt_transitive: bool,
}

/// Finds positive `μ` with `(L_a)_*μ = j(a)μ` and `(R_a)_*μ = ρ(a)μ`.
///
/// Candidates come from the common fixed space of all translations (exact
/// elimination); each `j(a)`, `ρ(a)` is then recovered by the ratio test.
pub fn solve_quasi_invariant<S: Field>(
    q: &FiniteQuasigroup,
) -> Result<QuasiInvariantSolution<S>, MeasureError> {
    let n = q.order();
    let lefts = q.left_translations();
    let rights = q.right_translations();

    let mut rows: Vec<Vec<S>> = Vec::new();
    for t in lefts.iter().chain(&rights) {
        for i in 0..n {
            // (T_*μ)[T(i)] − μ[T(i)] = μ[i] − μ[T(i)]
            let ti = t.apply(i);
            if ti != i {
                let mut row = vec![S::zero(); n];
                row[i] = S::one();
                row[ti] = -S::one();
                rows.push(row);
            }
        }
    }
    let basis = nullspace(rows, n);
    let target_mass: S = from_int(n as i64);

    let candidate = if basis.len() == 1 {
        sign_definite(&basis[0])
    } else {
        // counting measure always lies in the fixed space
        basis
            .iter()
            .find_map(|v| sign_definite(v))
            .or_else(|| (!basis.is_empty()).then(|| Measure::counting(n)))
    };
    let Some(candidate) = candidate else {
        return Err(MeasureError::NoPositiveSolution);
    };
    let measure = candidate.normalized_to(target_mass);

    let ratios = |side: Side, perms: &[Perm]| -> Result<Vec<S>, MeasureError> {
        perms
            .iter()
            .enumerate()
            .map(|(a, t)| {
                let pushed = pushforward(t, &measure)?;
                scale_factor(&pushed, &measure)
                    .filter(|c| c.is_positive())
                    .ok_or(MeasureError::RatioMismatch { side, element: a })
            })
            .collect()
    };
    let left_cocycle = Cocycle::new(ratios(Side::Left, &lefts)?)?;
    let right_cocycle = Cocycle::new(ratios(Side::Right, &rights)?)?;

    let total_mass = measure.mass();
    let pushed_mass = |perms: &[Perm]| -> Vec<S> {
        perms
            .iter()
            .map(|t| pushforward(t, &measure).expect("same degree").mass())
            .collect()
    };
    let left_pushed_mass = pushed_mass(&lefts);
    let right_pushed_mass = pushed_mass(&rights);
    let forced = |m: &[S]| -> Vec<S> { m.iter().map(|x| x.clone() / total_mass.clone()).collect() };
    let explanation = CollapseExplanation {
        forced_left: forced(&left_pushed_mass),
        forced_right: forced(&right_pushed_mass),
        total_mass,
        left_pushed_mass,
        right_pushed_mass,
    };
    let degenerate = explanation
        .forced_left
        .iter()
        .chain(&explanation.forced_right)
        .all(|v| v.is_one());

    Ok(QuasiInvariantSolution {
        dimension: basis.len(),
        basis,
        measure,
        left_cocycle,
        right_cocycle,
        degenerate,
        explanation,
        lmlt_transitive: orbit_under(&lefts, n, 0).len() == n,
    })
}

fn sign_definite<S: Field>(v: &[S]) -> Option<Measure<S>> {
    if v.iter().all(|x| !x.is_negative()) {
        Measure::new(v.to_vec()).ok()
    } else if v.iter().all(|x| !x.is_positive()) {
        Measure::new(v.iter().map(|x| -x.clone()).collect()).ok()
    } else {
        None
    }
}

/// Outcome of an exhaustive check over all pairs `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCheck {
    pub holds: bool,
    pub counterexample: Option<(Element, Element)>,
}

fn first_failing_pair(n: usize, mut ok: impl FnMut(Element, Element) -> bool) -> PairCheck {
    for x in 0..n {
        for y in 0..n {
            if !ok(x, y) {
                return PairCheck {
                    holds: false,
                    counterexample: Some((x, y)),
                };
            }
        }
    }
    PairCheck {
        holds: true,
        counterexample: None,
    }
}

/// Checks `j(xy)·ρ(y) = j(x)·j(y)·ρ(y)` for all `x, y`.
pub fn verify_cocycle_relation<S: Field>(
    q: &FiniteQuasigroup,
    j: &Cocycle<S>,
    rho: &Cocycle<S>,
) -> PairCheck {
    first_failing_pair(q.order(), |x, y| {
        let lhs = j.get(q.multiply(x, y)).clone() * rho.get(y).clone();
        let rhs = j.get(x).clone() * j.get(y).clone() * rho.get(y).clone();
        lhs == rhs
    })
}

/// Checks `j(xy) = j(x)·j(y)` for all `x, y`.
pub fn check_multiplicative<S: Field>(j: &Cocycle<S>, q: &FiniteQuasigroup) -> PairCheck {
    first_failing_pair(q.order(), |x, y| {
        *j.get(q.multiply(x, y)) == j.get(x).clone() * j.get(y).clone()
    })
}
