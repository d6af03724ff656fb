//! Permutation groups given by generators, with a base and strong generating
//! set for exact order and membership queries.
//!
//! The construction is a deterministic Schreier–Sims: base points are chosen
//! greedily as the smallest point moved by some strong generator that fixes
//! every earlier base point, and Schreier generators are sifted level by
//! level until every level is closed.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::perm::Perm;
use crate::quasigroup::FiniteQuasigroup;

/// Cap on brute-force element enumeration.
pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("degree mismatch: group has degree {expected}, got {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("group has more than {cap} elements")]
    CapExceeded { cap: usize },
}

/// One level of the stabilizer chain.
#[derive(Debug, Clone)]
struct Level {
    base_point: usize,
    /// `transversal[b]` maps the base point to `b`, for `b` in the orbit.
    transversal: Vec<Option<Perm>>,
    orbit: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    strong_generators: Vec<Perm>,
    levels: Vec<Level>,
    order: BigUint,
}

/// Breadth-first orbit of `point` under `gens`, in discovery order.
pub fn orbit_under(gens: &[Perm], degree: usize, point: usize) -> Vec<usize> {
    let mut seen = vec![false; degree];
    let mut orbit = vec![point];
    seen[point] = true;
    let mut i = 0;
    while i < orbit.len() {
        let x = orbit[i];
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                orbit.push(y);
            }
        }
        i += 1;
    }
    orbit
}

fn build_level(base_point: usize, gens: &[&Perm], degree: usize) -> Level {
    let mut transversal: Vec<Option<Perm>> = vec![None; degree];
    transversal[base_point] = Some(Perm::identity(degree));
    let mut orbit = vec![base_point];
    let mut i = 0;
    while i < orbit.len() {
        let x = orbit[i];
        let ux = transversal[x].clone().expect("orbit point has transversal");
        for g in gens {
            let y = g.apply(x);
            if transversal[y].is_none() {
                transversal[y] = Some(g.compose(&ux));
                orbit.push(y);
            }
        }
        i += 1;
    }
    Level {
        base_point,
        transversal,
        orbit,
    }
}

impl PermGroup {
    /// Builds the group generated by `gens` acting on `degree` points.
    pub fn generate(degree: usize, gens: &[Perm]) -> Result<Self, GroupError> {
        for g in gens {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let mut strong: Vec<Perm> = Vec::new();
        for g in gens {
            if !g.is_identity() && !strong.contains(g) {
                strong.push(g.clone());
            }
        }
        let mut base: Vec<usize> = Vec::new();
        extend_base(&mut base, &strong);
        let mut levels = build_levels(&base, &strong, degree);

        'restart: loop {
            for i in (0..levels.len()).rev() {
                let gens_i: Vec<&Perm> = strong_gens_at(&base, &strong, i);
                let level = &levels[i];
                for &b in &level.orbit {
                    let ub = level.transversal[b].as_ref().unwrap();
                    for s in &gens_i {
                        let sb = s.apply(b);
                        let usb = level.transversal[sb].as_ref().unwrap();
                        let schreier = usb.inverse().compose(s).compose(ub);
                        let (residue, _) = sift(&levels[i + 1..], schreier);
                        if !residue.is_identity() {
                            strong.push(residue);
                            extend_base(&mut base, &strong);
                            levels = build_levels(&base, &strong, degree);
                            continue 'restart;
                        }
                    }
                }
            }
            break;
        }

        let order = levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()));
        Ok(PermGroup {
            degree,
            generators: gens.to_vec(),
            strong_generators: strong,
            levels,
            order,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn strong_generators(&self) -> &[Perm] {
        &self.strong_generators
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    /// Sizes of the fundamental orbits along the base.
    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn contains(&self, p: &Perm) -> Result<bool, GroupError> {
        if p.degree() != self.degree {
            return Err(GroupError::DegreeMismatch {
                expected: self.degree,
                found: p.degree(),
            });
        }
        let (residue, depth) = sift(&self.levels, p.clone());
        Ok(depth == self.levels.len() && residue.is_identity())
    }

    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut o = orbit_under(&self.generators, self.degree, point);
        o.sort_unstable();
        o
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0).len() == self.degree
    }

    /// All elements by breadth-first closure over the generators, identity
    /// first. Fails if more than `cap` elements are found.
    pub fn elements(&self, cap: usize) -> Result<Vec<Perm>, GroupError> {
        let id = Perm::identity(self.degree);
        let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
        let mut out = vec![id];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in &self.generators {
                let next = out[i].compose(g);
                if seen.insert(next.clone()) {
                    if out.len() == cap {
                        return Err(GroupError::CapExceeded { cap });
                    }
                    out.push(next);
                    queue.push_back(out.len() - 1);
                }
            }
        }
        Ok(out)
    }
}

fn strong_gens_at<'a>(base: &[usize], strong: &'a [Perm], level: usize) -> Vec<&'a Perm> {
    strong
        .iter()
        .filter(|s| base[..level].iter().all(|&b| s.apply(b) == b))
        .collect()
}

fn extend_base(base: &mut Vec<usize>, strong: &[Perm]) {
    loop {
        let next = strong
            .iter()
            .filter(|s| base.iter().all(|&b| s.apply(b) == b))
            .filter_map(|s| s.first_moved_point())
            .min();
        match next {
            Some(p) => base.push(p),
            None => return,
        }
    }
}

fn build_levels(base: &[usize], strong: &[Perm], degree: usize) -> Vec<Level> {
    (0..base.len())
        .map(|i| build_level(base[i], &strong_gens_at(base, strong, i), degree))
        .collect()
}

/// Strips `g` through the chain; returns the residue and the number of
/// levels passed.
fn sift(levels: &[Level], mut g: Perm) -> (Perm, usize) {
    for (depth, level) in levels.iter().enumerate() {
        let b = g.apply(level.base_point);
        match &level.transversal[b] {
            Some(u) => g = u.inverse().compose(&g),
            None => return (g, depth),
        }
    }
    (g, levels.len())
}

/// `LMlt(Q)`, generated by all left translations.
pub fn lmlt(q: &FiniteQuasigroup) -> PermGroup {
    PermGroup::generate(q.order(), &q.left_translations()).expect("translations share the order")
}

/// `RMlt(Q)`, generated by all right translations.
pub fn rmlt(q: &FiniteQuasigroup) -> PermGroup {
    PermGroup::generate(q.order(), &q.right_translations()).expect("translations share the order")
}

/// `Mlt(Q)`, generated by left and right translations together.
pub fn mlt(q: &FiniteQuasigroup) -> PermGroup {
    let mut gens = q.left_translations();
    gens.extend(q.right_translations());
    PermGroup::generate(q.order(), &gens).expect("translations share the order")
}

/// Brute-force membership test by element enumeration, for cross-checks.
pub fn enumerate_membership(g: &PermGroup, cap: usize) -> Result<HashMap<Perm, usize>, GroupError> {
    Ok(g.elements(cap)?
        .into_iter()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect())
}
