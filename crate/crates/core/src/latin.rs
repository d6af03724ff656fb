//! Latin square enumeration and sampling.
//!
//! Squares are passed around as flat row-major `u8` slices of length `n²`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::quasigroup::{validate_cayley, FiniteQuasigroup};

/// Largest order accepted by full enumeration.
pub const MAX_ENUMERATION_ORDER: usize = 6;
/// Largest order accepted by sampling.
pub const MAX_SAMPLE_ORDER: usize = 10;

const RESTART_BUDGET: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatinError {
    #[error("order must be positive")]
    ZeroOrder,
    #[error("order {order} exceeds the limit {max}")]
    OrderTooLarge { order: usize, max: usize },
}

fn check_order(n: usize, max: usize) -> Result<(), LatinError> {
    if n == 0 {
        return Err(LatinError::ZeroOrder);
    }
    if n > max {
        return Err(LatinError::OrderTooLarge { order: n, max });
    }
    Ok(())
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations_lex(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (0..n as u8).collect();
    loop {
        out.push(cur.clone());
        // next permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n)
            .rev()
            .find(|&j| cur[j] > cur[i - 1])
            .expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

struct CellSearch<'a, E: FnMut(&[u8])> {
    n: usize,
    cells: Vec<u8>,
    rows: Vec<u16>,
    cols: Vec<u16>,
    emit: &'a mut E,
    count: u64,
}

impl<E: FnMut(&[u8])> CellSearch<'_, E> {
    fn fill(&mut self, pos: usize) {
        if pos == self.cells.len() {
            self.count += 1;
            (self.emit)(&self.cells);
            return;
        }
        let (r, c) = (pos / self.n, pos % self.n);
        let mut free = !(self.rows[r] | self.cols[c]) & ((1u16 << self.n) - 1);
        while free != 0 {
            let v = free.trailing_zeros() as usize;
            free &= free - 1;
            let bit = 1u16 << v;
            self.cells[pos] = v as u8;
            self.rows[r] |= bit;
            self.cols[c] |= bit;
            self.fill(pos + 1);
            self.rows[r] &= !bit;
            self.cols[c] &= !bit;
        }
    }
}

/// Emits every Latin square with the given first row, in lexicographic
/// row-major order, and returns the count.
pub fn enumerate_with_first_row(first_row: &[u8], mut emit: impl FnMut(&[u8])) -> u64 {
    let n = first_row.len();
    let mut search = CellSearch {
        n,
        cells: vec![0; n * n],
        rows: vec![0; n],
        cols: vec![0; n],
        emit: &mut emit,
        count: 0,
    };
    search.rows[0] = ((1u32 << n) - 1) as u16;
    for (c, &v) in first_row.iter().enumerate() {
        search.cells[c] = v;
        search.cols[c] = 1 << v;
    }
    search.fill(n);
    search.count
}

/// Emits every `n × n` Latin square exactly once, in lexicographic
/// row-major order. Cell-by-cell backtracking over row and column masks.
pub fn enumerate_latin_squares(n: usize, mut emit: impl FnMut(&[u8])) -> Result<u64, LatinError> {
    check_order(n, MAX_ENUMERATION_ORDER)?;
    Ok(permutations_lex(n)
        .iter()
        .map(|row| enumerate_with_first_row(row, &mut emit))
        .sum())
}

/// A second enumerator: chooses whole rows from the permutation list and
/// checks column clashes. Same output order as [`enumerate_latin_squares`].
pub fn enumerate_by_rows(n: usize, mut emit: impl FnMut(&[u8])) -> Result<u64, LatinError> {
    check_order(n, MAX_ENUMERATION_ORDER)?;
    let perms = permutations_lex(n);
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    let mut count = 0u64;
    let mut cells = vec![0u8; n * n];

    fn clashes(perms: &[Vec<u8>], chosen: &[usize], candidate: &[u8]) -> bool {
        chosen
            .iter()
            .any(|&k| perms[k].iter().zip(candidate).any(|(a, b)| a == b))
    }

    fn go(
        perms: &[Vec<u8>],
        chosen: &mut Vec<usize>,
        cells: &mut [u8],
        n: usize,
        count: &mut u64,
        emit: &mut dyn FnMut(&[u8]),
    ) {
        if chosen.len() == n {
            for (r, &k) in chosen.iter().enumerate() {
                cells[r * n..(r + 1) * n].copy_from_slice(&perms[k]);
            }
            *count += 1;
            emit(cells);
            return;
        }
        for k in 0..perms.len() {
            if !clashes(perms, chosen, &perms[k]) {
                chosen.push(k);
                go(perms, chosen, cells, n, count, emit);
                chosen.pop();
            }
        }
    }

    go(&perms, &mut chosen, &mut cells, n, &mut count, &mut emit);
    Ok(count)
}

/// Converts a flat square to a validated quasigroup.
pub fn to_quasigroup(n: usize, cells: &[u8]) -> FiniteQuasigroup {
    let raw: Vec<Vec<i64>> = cells
        .chunks(n)
        .map(|r| r.iter().map(|&v| v as i64).collect())
        .collect();
    validate_cayley(&raw, None).expect("enumerated squares are Latin")
}

/// `k` Latin squares of order `n`, reproducible per seed.
///
/// Rows are filled one at a time by backtracking with shuffled candidate
/// order; a search that exhausts its node budget restarts the square. The
/// distribution is not uniform over Latin squares.
pub fn sample_latin_squares(n: usize, k: usize, seed: u64) -> Result<Vec<Vec<u8>>, LatinError> {
    check_order(n, MAX_SAMPLE_ORDER)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..k).map(|_| sample_one(n, &mut rng)).collect())
}

fn sample_one(n: usize, rng: &mut ChaCha8Rng) -> Vec<u8> {
    'restart: loop {
        let mut cells = vec![0u8; n * n];
        let mut cols = vec![0u16; n];
        for r in 0..n {
            let mut budget = RESTART_BUDGET;
            if !fill_row(n, r, 0, 0, &mut cells, &mut cols, rng, &mut budget) {
                continue 'restart;
            }
        }
        return cells;
    }
}

#[allow(clippy::too_many_arguments)]
fn fill_row(
    n: usize,
    r: usize,
    c: usize,
    row_mask: u16,
    cells: &mut [u8],
    cols: &mut [u16],
    rng: &mut ChaCha8Rng,
    budget: &mut usize,
) -> bool {
    if c == n {
        return true;
    }
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    let mut candidates: Vec<u8> = (0..n as u8)
        .filter(|&v| (row_mask | cols[c]) & (1 << v) == 0)
        .collect();
    candidates.shuffle(rng);
    for v in candidates {
        let bit = 1u16 << v;
        cells[r * n + c] = v;
        cols[c] |= bit;
        if fill_row(n, r, c + 1, row_mask | bit, cells, cols, rng, budget) {
            return true;
        }
        cols[c] &= !bit;
        if *budget == 0 {
            return false;
        }
    }
    false
}
