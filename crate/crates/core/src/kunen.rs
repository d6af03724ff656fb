//! Exhaustive and sampled scans of small Latin squares: every quasigroup
//! satisfying `((xy)z)y = x(y(zy))` should have a two-sided identity.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::identity::{builtin, CompiledIdentity, IdentityError};
use crate::latin::{self, LatinError};
use crate::measure::solve_quasi_invariant;
use crate::quasigroup::FiniteQuasigroup;
use crate::Rational;

/// Largest order scanned in full without an explicit override.
pub const DEFAULT_FULL_SCAN_LIMIT: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error("full scan of order {order} needs the order-6 override (limit {limit})")]
    OrderTooLarge { order: usize, limit: usize },
    #[error(transparent)]
    Latin(#[from] LatinError),
    #[error(transparent)]
    Identity(#[from] IdentityError),
    #[error("checkpoint does not match this scan: {0}")]
    CheckpointMismatch(String),
    #[error("failed to build worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScanMode {
    Full,
    /// Seeded, non-uniform sampling.
    Sample {
        count: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanOptions {
    /// Name of the built-in identity to scan with.
    pub identity: String,
    pub allow_n6: bool,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
    /// First rows processed between progress callbacks.
    pub chunk: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            identity: "N1".to_string(),
            allow_n6: false,
            jobs: 0,
            chunk: 64,
        }
    }
}

/// Tallies of a scan. `n1_*` fields count squares satisfying the scanned
/// identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanReport {
    pub order: usize,
    pub mode: ScanMode,
    pub identity: String,
    /// False for sampled scans.
    pub uniform: bool,
    pub total_squares: u64,
    pub n1_count: u64,
    pub n1_loop_count: u64,
    pub loop_count: u64,
    pub loops_failing_n1: u64,
    pub elapsed: f64,
    /// Identity-satisfying non-loops, as Cayley-table text.
    pub counterexamples: Vec<String>,
}

impl ScanReport {
    /// `n1_loop_count = n1_count`: no identity-satisfying non-loop was seen.
    pub fn kunen_holds(&self) -> bool {
        self.n1_loop_count == self.n1_count && self.counterexamples.is_empty()
    }

    /// Internal consistency of the tallies.
    pub fn check_invariants(&self) -> Result<(), String> {
        let t = self.total_squares;
        if self.n1_count > t || self.loop_count > t {
            return Err("counts exceed total_squares".into());
        }
        if self.n1_loop_count > self.n1_count || self.n1_loop_count > self.loop_count {
            return Err("n1_loop_count exceeds n1_count or loop_count".into());
        }
        if self.loops_failing_n1 != self.loop_count - self.n1_loop_count {
            return Err("loops_failing_n1 != loop_count - n1_loop_count".into());
        }
        if self.counterexamples.len() as u64 > self.n1_count - self.n1_loop_count {
            return Err("more counterexamples than identity-satisfying non-loops".into());
        }
        if self.elapsed < 0.0 {
            return Err("negative elapsed time".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub total: u64,
    pub satisfying: u64,
    pub satisfying_loops: u64,
    pub loops: u64,
    pub counterexamples: Vec<String>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.total += other.total;
        self.satisfying += other.satisfying;
        self.satisfying_loops += other.satisfying_loops;
        self.loops += other.loops;
        self.counterexamples.extend(other.counterexamples);
        self
    }

    fn record(&mut self, q: &FiniteQuasigroup, identity: &CompiledIdentity) {
        let sat = identity.holds(q);
        let is_loop = q.is_loop();
        self.total += 1;
        self.loops += is_loop as u64;
        if sat {
            self.satisfying += 1;
            if is_loop {
                self.satisfying_loops += 1;
            } else {
                self.counterexamples.push(q.to_table_text());
            }
        }
    }
}

/// Resumable progress of a full scan: first rows `0..next_prefix` (in
/// lexicographic order) are done and summarized in `tally`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanCheckpoint {
    pub order: usize,
    pub identity: String,
    pub next_prefix: usize,
    pub total_prefixes: usize,
    pub tally: Tally,
}

fn check_full_order(n: usize, allow_n6: bool) -> Result<(), ScanError> {
    let limit = if allow_n6 {
        latin::MAX_ENUMERATION_ORDER
    } else {
        DEFAULT_FULL_SCAN_LIMIT
    };
    if n > limit {
        return Err(ScanError::OrderTooLarge { order: n, limit });
    }
    Ok(())
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, ScanError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| ScanError::Pool(e.to_string()))
}

/// Runs `visit` on every square of a full or sampled scan, partitioned by
/// first row, and merges per-partition results in partition order.
fn for_each_square<T, V>(
    n: usize,
    mode: ScanMode,
    options: &ScanOptions,
    resume: Option<(usize, T)>,
    mut progress: impl FnMut(usize, usize, &T),
    visit: V,
) -> Result<T, ScanError>
where
    T: Default + Send + Clone,
    V: Fn(&mut T, &FiniteQuasigroup) + Sync,
    T: MergeInto,
{
    let pool = pool(options.jobs)?;
    match mode {
        ScanMode::Full => {
            check_full_order(n, options.allow_n6)?;
            let prefixes = latin::permutations_lex(n);
            let (mut next, mut acc) = resume.unwrap_or((0, T::default()));
            let chunk = options.chunk.max(1);
            while next < prefixes.len() {
                let end = (next + chunk).min(prefixes.len());
                let parts: Vec<T> = pool.install(|| {
                    prefixes[next..end]
                        .par_iter()
                        .map(|row| {
                            let mut t = T::default();
                            latin::enumerate_with_first_row(row, |sq| {
                                visit(&mut t, &latin::to_quasigroup(n, sq));
                            });
                            t
                        })
                        .collect()
                });
                acc = parts.into_iter().fold(acc, T::merge_into);
                next = end;
                progress(next, prefixes.len(), &acc);
            }
            Ok(acc)
        }
        ScanMode::Sample { count, seed } => {
            let squares = latin::sample_latin_squares(n, count, seed)?;
            let parts: Vec<T> = pool.install(|| {
                squares
                    .par_chunks(256)
                    .map(|chunk| {
                        let mut t = T::default();
                        for sq in chunk {
                            visit(&mut t, &latin::to_quasigroup(n, sq));
                        }
                        t
                    })
                    .collect()
            });
            let acc = parts.into_iter().fold(T::default(), T::merge_into);
            progress(1, 1, &acc);
            Ok(acc)
        }
    }
}

/// Associative merge of per-partition results.
pub trait MergeInto {
    fn merge_into(self, other: Self) -> Self;
}

impl MergeInto for Tally {
    fn merge_into(self, other: Self) -> Self {
        self.merge(other)
    }
}

pub fn kunen_scan(
    n: usize,
    mode: ScanMode,
    options: &ScanOptions,
) -> Result<ScanReport, ScanError> {
    kunen_scan_resumable(n, mode, options, None, |_| {})
}

/// Like [`kunen_scan`], optionally resuming from a checkpoint and reporting
/// a fresh checkpoint after each chunk of first rows (full mode only).
pub fn kunen_scan_resumable(
    n: usize,
    mode: ScanMode,
    options: &ScanOptions,
    resume: Option<ScanCheckpoint>,
    mut on_checkpoint: impl FnMut(&ScanCheckpoint),
) -> Result<ScanReport, ScanError> {
    let identity = builtin(&options.identity)?.compile();
    let start = Instant::now();
    let resume = match resume {
        Some(cp) => {
            if cp.order != n || cp.identity != options.identity || mode != ScanMode::Full {
                return Err(ScanError::CheckpointMismatch(format!(
                    "checkpoint is for order {} / {}",
                    cp.order, cp.identity
                )));
            }
            Some((cp.next_prefix, cp.tally))
        }
        None => None,
    };
    let tally = for_each_square(
        n,
        mode,
        options,
        resume,
        |next, total, t: &Tally| {
            if mode == ScanMode::Full {
                on_checkpoint(&ScanCheckpoint {
                    order: n,
                    identity: options.identity.clone(),
                    next_prefix: next,
                    total_prefixes: total,
                    tally: t.clone(),
                });
            }
        },
        |t, q| t.record(q, &identity),
    )?;
    Ok(ScanReport {
        order: n,
        mode,
        identity: options.identity.clone(),
        uniform: mode == ScanMode::Full,
        total_squares: tally.total,
        n1_count: tally.satisfying,
        n1_loop_count: tally.satisfying_loops,
        loop_count: tally.loops,
        loops_failing_n1: tally.loops - tally.satisfying_loops,
        elapsed: start.elapsed().as_secs_f64(),
        counterexamples: tally.counterexamples,
    })
}

/// Cocycle data gathered over the identity-satisfying squares of a scan.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularTally {
    pub squares_scanned: u64,
    pub n1_count: u64,
    pub trivial_cocycles: u64,
    pub one_dimensional: u64,
    pub degenerate: u64,
    /// Squares whose solved cocycles were not identically 1.
    pub nontrivial: Vec<String>,
}

impl MergeInto for ModularTally {
    fn merge_into(mut self, other: Self) -> Self {
        self.squares_scanned += other.squares_scanned;
        self.n1_count += other.n1_count;
        self.trivial_cocycles += other.trivial_cocycles;
        self.one_dimensional += other.one_dimensional;
        self.degenerate += other.degenerate;
        self.nontrivial.extend(other.nontrivial);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModularSummary {
    pub order: usize,
    pub mode: ScanMode,
    pub identity: String,
    pub squares_scanned: u64,
    pub n1_count: u64,
    /// Satisfying squares with `j ≡ 1` and `ρ ≡ 1`.
    pub trivial_cocycles: u64,
    /// Satisfying squares whose invariant measures form a single ray.
    pub one_dimensional: u64,
    pub degenerate: u64,
    pub nontrivial: Vec<String>,
    pub elapsed: f64,
}

impl ModularSummary {
    pub fn collapse_holds(&self) -> bool {
        self.trivial_cocycles == self.n1_count && self.nontrivial.is_empty()
    }
}

/// Solves for quasi-invariant measures on every identity-satisfying square
/// and records whether the cocycles collapse to 1.
pub fn modular_scan(
    n: usize,
    mode: ScanMode,
    options: &ScanOptions,
) -> Result<ModularSummary, ScanError> {
    let identity = builtin(&options.identity)?.compile();
    let start = Instant::now();
    let t = for_each_square(
        n,
        mode,
        options,
        None,
        |_, _, _| {},
        |t: &mut ModularTally, q| {
            t.squares_scanned += 1;
            if !identity.holds(q) {
                return;
            }
            t.n1_count += 1;
            let sol = solve_quasi_invariant::<Rational>(q).expect("counting measure always solves");
            if sol.left_cocycle.is_trivial() && sol.right_cocycle.is_trivial() {
                t.trivial_cocycles += 1;
            } else {
                t.nontrivial.push(q.to_table_text());
            }
            t.one_dimensional += (sol.dimension == 1) as u64;
            t.degenerate += sol.degenerate as u64;
        },
    )?;
    Ok(ModularSummary {
        order: n,
        mode,
        identity: options.identity.clone(),
        squares_scanned: t.squares_scanned,
        n1_count: t.n1_count,
        trivial_cocycles: t.trivial_cocycles,
        one_dimensional: t.one_dimensional,
        degenerate: t.degenerate,
        nontrivial: t.nontrivial,
        elapsed: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_two() {
        let r = kunen_scan(2, ScanMode::Full, &ScanOptions::default()).unwrap();
        assert_eq!(r.total_squares, 2);
        assert_eq!(r.n1_count, 2);
        assert_eq!(r.n1_loop_count, 2);
        assert!(r.kunen_holds());
        r.check_invariants().unwrap();
    }

    #[test]
    fn order_three() {
        let r = kunen_scan(3, ScanMode::Full, &ScanOptions::default()).unwrap();
        assert_eq!(r.total_squares, 12);
        assert_eq!(r.n1_loop_count, r.n1_count);
        assert!(r.counterexamples.is_empty());
    }

    #[test]
    fn order_limits() {
        assert_eq!(
            kunen_scan(6, ScanMode::Full, &ScanOptions::default()),
            Err(ScanError::OrderTooLarge { order: 6, limit: 5 })
        );
        let opts = ScanOptions {
            allow_n6: true,
            ..ScanOptions::default()
        };
        assert!(matches!(
            kunen_scan(7, ScanMode::Full, &opts),
            Err(ScanError::OrderTooLarge { order: 7, limit: 6 })
        ));
        let bad = ScanOptions {
            identity: "nope".into(),
            ..ScanOptions::default()
        };
        assert!(matches!(
            kunen_scan(2, ScanMode::Full, &bad),
            Err(ScanError::Identity(_))
        ));
    }

    #[test]
    fn modular_small_orders() {
        for n in 1..=3 {
            let s = modular_scan(n, ScanMode::Full, &ScanOptions::default()).unwrap();
            assert!(s.collapse_holds());
            assert_eq!(s.one_dimensional, s.n1_count);
        }
    }

    #[test]
    fn resume_matches_uninterrupted() {
        let opts = ScanOptions {
            chunk: 5,
            ..ScanOptions::default()
        };
        let mut checkpoints = Vec::new();
        let full = kunen_scan_resumable(4, ScanMode::Full, &opts, None, |c| {
            checkpoints.push(c.clone())
        })
        .unwrap();
        assert_eq!(checkpoints.len(), 5); // 24 first rows in chunks of 5
        let resumed = kunen_scan_resumable(
            4,
            ScanMode::Full,
            &opts,
            Some(checkpoints[2].clone()),
            |_| {},
        )
        .unwrap();
        assert_eq!(resumed.total_squares, full.total_squares);
        assert_eq!(resumed.n1_count, full.n1_count);
        assert_eq!(resumed.loop_count, full.loop_count);
        let wrong = ScanCheckpoint {
            order: 3,
            ..checkpoints[0].clone()
        };
        assert!(matches!(
            kunen_scan_resumable(4, ScanMode::Full, &opts, Some(wrong), |_| {}),
            Err(ScanError::CheckpointMismatch(_))
        ));
    }

    #[test]
    fn sampled_scan_is_reproducible() {
        let mode = ScanMode::Sample {
            count: 300,
            seed: 9,
        };
        let opts = ScanOptions::default();
        let a = kunen_scan(6, mode, &opts).unwrap();
        let b = kunen_scan(6, mode, &opts).unwrap();
        assert_eq!(a.total_squares, 300);
        assert!(!a.uniform);
        assert_eq!((a.n1_count, a.loop_count), (b.n1_count, b.loop_count));
        assert!(a.kunen_holds());
    }
}
