//! Positive multiplicative characters `χ(xy) = χ(x)χ(y)` on finite
//! quasigroups, handled in log coordinates `c = log χ` so that the defining
//! system `c(x*y) = c(x) + c(y)` is linear.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::linalg::nullspace;
use crate::perm::Perm;
use crate::quasigroup::{Element, FiniteQuasigroup};
use crate::scalar::Field;

pub const DEFAULT_PAIR_BUDGET: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharacterError {
    #[error("quasigroup has no identity element")]
    NotALoop,
    #[error("character is not multiplicative at ({0}, {1})")]
    NotMultiplicative(Element, Element),
    #[error("character has {found} values, quasigroup has order {order}")]
    DegreeMismatch { found: usize, order: usize },
    #[error("left multiplication group has more than {cap} elements")]
    CapExceeded { cap: usize },
}

/// A positive character stored by its logarithms.
#[derive(Debug, Clone, PartialEq)]
pub struct Character<S> {
    logs: Vec<S>,
}

impl<S: Field> Character<S> {
    pub fn trivial(n: usize) -> Self {
        Character {
            logs: vec![S::zero(); n],
        }
    }

    pub fn from_logs(logs: Vec<S>) -> Self {
        Character { logs }
    }

    pub fn logs(&self) -> &[S] {
        &self.logs
    }

    pub fn log(&self, x: Element) -> &S {
        &self.logs[x]
    }

    pub fn is_trivial(&self) -> bool {
        self.logs.iter().all(|c| c.is_zero())
    }

    /// First pair where `c(x*y) ≠ c(x) + c(y)`.
    pub fn multiplicativity_failure(&self, q: &FiniteQuasigroup) -> Option<(Element, Element)> {
        let n = q.order();
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .find(|&(x, y)| {
                self.logs[q.multiply(x, y)] != self.logs[x].clone() + self.logs[y].clone()
            })
    }

    fn require_multiplicative(&self, q: &FiniteQuasigroup) -> Result<(), CharacterError> {
        if self.logs.len() != q.order() {
            return Err(CharacterError::DegreeMismatch {
                found: self.logs.len(),
                order: q.order(),
            });
        }
        match self.multiplicativity_failure(q) {
            Some((x, y)) => Err(CharacterError::NotMultiplicative(x, y)),
            None => Ok(()),
        }
    }
}

/// Basis of the solution space of `c(x*y) = c(x) + c(y)` over all `n²` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterSpace<S> {
    pub basis: Vec<Vec<S>>,
}

impl<S: Field> CharacterSpace<S> {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// The canonical representative: the zero log-vector when the space is
    /// trivial, otherwise the first basis vector.
    pub fn representative(&self, n: usize) -> Character<S> {
        match self.basis.first() {
            Some(v) => Character::from_logs(v.clone()),
            None => Character::trivial(n),
        }
    }
}

pub fn solve_characters<S: Field>(q: &FiniteQuasigroup) -> CharacterSpace<S> {
    let n = q.order();
    let mut rows = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let mut row = vec![S::zero(); n];
            row[q.multiply(x, y)] = row[q.multiply(x, y)].clone() + S::one();
            row[x] = row[x].clone() - S::one();
            row[y] = row[y].clone() - S::one();
            rows.push(row);
        }
    }
    CharacterSpace {
        basis: nullspace(rows, n),
    }
}

/// The positive-sum argument, run on the table directly.
///
/// For each `a`, summing `c(a*x) = c(a) + c(x)` over all `x` gives
/// `Σ_x c(a*x) = n·c(a) + Σ_x c(x)`. When row `a` contains every element
/// exactly once the left sum equals `Σ_x c(x)` and `c(a) = 0` is forced
/// (in multiplicative form: `χ(a)·S = S` with `S > 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveSumCertificate {
    /// `forced[a]` is true when row `a` forces `χ(a) = 1`.
    pub forced: Vec<bool>,
}

impl PositiveSumCertificate {
    /// Upper bound on the dimension of the log-character space.
    pub fn dimension_bound(&self) -> usize {
        self.forced.iter().filter(|f| !**f).count()
    }
}

pub fn positive_sum_oracle(q: &FiniteQuasigroup) -> PositiveSumCertificate {
    let n = q.order();
    let forced = (0..n)
        .map(|a| {
            let mut counts = vec![0usize; n];
            for x in 0..n {
                counts[q.multiply(a, x)] += 1;
            }
            counts.iter().all(|&k| k == 1)
        })
        .collect();
    PositiveSumCertificate { forced }
}

/// `χ(e) = 1` for the identity `e`, i.e. `c(e) = 0`.
pub fn check_normalization<S: Field>(
    q: &FiniteQuasigroup,
    chi: &Character<S>,
) -> Result<bool, CharacterError> {
    let e = q.find_identity().ok_or(CharacterError::NotALoop)?;
    chi.require_multiplicative(q)?;
    Ok(chi.log(e).is_zero())
}

/// A generator word `[a1, …, ak]` denoting `L_{a1} ∘ ⋯ ∘ L_{ak}`.
pub type Word = Vec<Element>;

#[derive(Debug, Clone, PartialEq)]
pub struct RepresentationAudit<S> {
    pub well_defined: bool,
    pub conflict: Option<(Word, Word)>,
    pub group_order: usize,
    /// Pairs `(g, h)` on which `π(gh) = π(g)π(h)` was checked.
    pub pairs_checked: usize,
    pub homomorphism: bool,
    /// Distinct values of `log π` over the group.
    pub image: Vec<S>,
}

/// Enumerates `LMlt(Q)` by breadth-first search over generator words
/// (shortest first, lexicographic within a length) and assigns each element
/// the log-value of its first word; a second word reaching the same
/// permutation with a different value is a conflict.
pub fn representation_well_defined<S: Field>(
    q: &FiniteQuasigroup,
    chi: &Character<S>,
    element_cap: usize,
    pair_budget: usize,
) -> Result<RepresentationAudit<S>, CharacterError> {
    chi.require_multiplicative(q)?;
    closure_audit(q, chi, element_cap, pair_budget)
}

fn closure_audit<S: Field>(
    q: &FiniteQuasigroup,
    chi: &Character<S>,
    element_cap: usize,
    pair_budget: usize,
) -> Result<RepresentationAudit<S>, CharacterError> {
    let n = q.order();
    let gens = q.left_translations();

    let id = Perm::identity(n);
    let mut index: HashMap<Perm, usize> = HashMap::from([(id.clone(), 0)]);
    let mut elements = vec![id];
    let mut words: Vec<Word> = vec![vec![]];
    let mut values: Vec<S> = vec![S::zero()];
    let mut conflict = None;
    let mut queue = VecDeque::from([0usize]);

    while let Some(i) = queue.pop_front() {
        for (a, gen) in gens.iter().enumerate() {
            let next = elements[i].compose(gen);
            let value = values[i].clone() + chi.log(a).clone();
            match index.get(&next) {
                Some(&k) => {
                    if conflict.is_none() && values[k] != value {
                        let mut w = words[i].clone();
                        w.push(a);
                        conflict = Some((words[k].clone(), w));
                    }
                }
                None => {
                    if elements.len() == element_cap {
                        return Err(CharacterError::CapExceeded { cap: element_cap });
                    }
                    let mut w = words[i].clone();
                    w.push(a);
                    index.insert(next.clone(), elements.len());
                    elements.push(next);
                    words.push(w);
                    values.push(value);
                    queue.push_back(elements.len() - 1);
                }
            }
        }
    }

    let mut pairs_checked = 0;
    let mut homomorphism = true;
    'pairs: for (gi, g) in elements.iter().enumerate() {
        for (hi, h) in elements.iter().enumerate() {
            if pairs_checked == pair_budget {
                break 'pairs;
            }
            pairs_checked += 1;
            let k = index[&g.compose(h)];
            if values[k] != values[gi].clone() + values[hi].clone() {
                homomorphism = false;
                break 'pairs;
            }
        }
    }

    let mut image: Vec<S> = Vec::new();
    for v in &values {
        if !image.contains(v) {
            image.push(v.clone());
        }
    }

    Ok(RepresentationAudit {
        well_defined: conflict.is_none(),
        conflict,
        group_order: elements.len(),
        pairs_checked,
        homomorphism,
        image,
    })
}
