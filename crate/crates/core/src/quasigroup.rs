//! Finite quasigroups as validated Cayley tables.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::perm::Perm;

/// An element of a finite quasigroup, identified with its row/column index.
pub type Element = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CayleyError {
    #[error("table is empty")]
    Empty,
    #[error("table is not square: row {row} has {len} entries, expected {order}")]
    NotSquare {
        row: usize,
        len: usize,
        order: usize,
    },
    #[error("entry {value} at ({row}, {col}) is outside [0, {order})")]
    OutOfRange {
        row: usize,
        col: usize,
        value: i64,
        order: usize,
    },
    #[error("row {row} repeats value {value}")]
    RowDuplicate { row: usize, value: usize },
    #[error("column {col} repeats value {value}")]
    ColumnDuplicate { col: usize, value: usize },
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("label {0:?} is repeated")]
    LabelRepeated(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableParseError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Cayley(#[from] CayleyError),
}

/// A quasigroup of order `n` given by an `n × n` Latin square.
///
/// Rows are left translations and columns are right translations. Division
/// tables are precomputed at validation time; the value is immutable
/// afterwards.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteQuasigroup {
    order: usize,
    table: Vec<Element>,
    left_div: Vec<Element>,
    right_div: Vec<Element>,
    labels: Option<Vec<String>>,
}

/// Checks the Latin property of a square table and builds the quasigroup.
///
/// Rows are scanned first in row-major order (range and duplicate checks),
/// then columns, so the reported error is the first offending position in
/// that order.
pub fn validate_cayley(
    raw: &[Vec<i64>],
    labels: Option<Vec<String>>,
) -> Result<FiniteQuasigroup, CayleyError> {
    let order = raw.len();
    if order == 0 {
        return Err(CayleyError::Empty);
    }
    let mut table = Vec::with_capacity(order * order);
    for (row, entries) in raw.iter().enumerate() {
        if entries.len() != order {
            return Err(CayleyError::NotSquare {
                row,
                len: entries.len(),
                order,
            });
        }
        let mut seen = vec![false; order];
        for (col, &value) in entries.iter().enumerate() {
            if value < 0 || value as usize >= order {
                return Err(CayleyError::OutOfRange {
                    row,
                    col,
                    value,
                    order,
                });
            }
            let v = value as usize;
            if std::mem::replace(&mut seen[v], true) {
                return Err(CayleyError::RowDuplicate { row, value: v });
            }
            table.push(v);
        }
    }
    for col in 0..order {
        let mut seen = vec![false; order];
        for row in 0..order {
            let v = table[row * order + col];
            if std::mem::replace(&mut seen[v], true) {
                return Err(CayleyError::ColumnDuplicate { col, value: v });
            }
        }
    }
    if let Some(labels) = &labels {
        if labels.len() != order {
            return Err(CayleyError::LabelCount {
                expected: order,
                got: labels.len(),
            });
        }
        let mut seen = std::collections::HashSet::new();
        for l in labels {
            if !seen.insert(l.as_str()) {
                return Err(CayleyError::LabelRepeated(l.clone()));
            }
        }
    }
    Ok(FiniteQuasigroup::from_latin_unchecked(order, table, labels))
}

impl FiniteQuasigroup {
    pub(crate) fn from_latin_unchecked(
        order: usize,
        table: Vec<Element>,
        labels: Option<Vec<String>>,
    ) -> Self {
        let mut left_div = vec![0; order * order];
        let mut right_div = vec![0; order * order];
        for a in 0..order {
            for x in 0..order {
                let b = table[a * order + x];
                // a * x = b
                left_div[a * order + b] = x;
                right_div[x * order + b] = a;
            }
        }
        FiniteQuasigroup {
            order,
            table,
            left_div,
            right_div,
            labels,
        }
    }

    /// Validates a flat row-major table of small entries.
    pub fn from_rows<R: AsRef<[usize]>>(rows: &[R]) -> Result<Self, CayleyError> {
        let raw: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&v| v as i64).collect())
            .collect();
        validate_cayley(&raw, None)
    }

    /// The cyclic group `Z_n` under addition.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        Self::from_latin_unchecked(n, table, None)
    }

    /// `x * y = (x − y) mod n`, a quasigroup without identity for `n ≥ 3`.
    pub fn subtraction(n: usize) -> Self {
        assert!(n > 0);
        let table = (0..n * n).map(|i| (n + i / n - i % n) % n).collect();
        Self::from_latin_unchecked(n, table, None)
    }

    /// Multiplication table of a permutation group given by its elements.
    /// Elements are indexed in the given order.
    pub fn from_group_elements(elements: &[Perm]) -> Self {
        let n = elements.len();
        let index: HashMap<&Perm, usize> =
            elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut table = Vec::with_capacity(n * n);
        for g in elements {
            for h in elements {
                table.push(index[&g.compose(h)]);
            }
        }
        let q = Self::from_latin_unchecked(n, table, None);
        debug_assert!(validate_cayley(&q.rows_i64(), None).is_ok());
        q
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, x: Element) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn row(&self, a: Element) -> &[Element] {
        &self.table[a * self.order..(a + 1) * self.order]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Element]> {
        self.table.chunks(self.order)
    }

    pub(crate) fn rows_i64(&self) -> Vec<Vec<i64>> {
        self.rows()
            .map(|r| r.iter().map(|&v| v as i64).collect())
            .collect()
    }

    #[inline]
    pub fn multiply(&self, x: Element, y: Element) -> Element {
        self.table[x * self.order + y]
    }

    /// The unique `x` with `a * x = b`.
    #[inline]
    pub fn left_divide(&self, a: Element, b: Element) -> Element {
        self.left_div[a * self.order + b]
    }

    /// The unique `y` with `y * a = b`.
    #[inline]
    pub fn right_divide(&self, a: Element, b: Element) -> Element {
        self.right_div[a * self.order + b]
    }

    /// `L_a : x ↦ a * x`.
    pub fn left_translation(&self, a: Element) -> Perm {
        Perm::from_images_unchecked(self.row(a).to_vec())
    }

    /// `R_a : x ↦ x * a`.
    pub fn right_translation(&self, a: Element) -> Perm {
        Perm::from_images_unchecked((0..self.order).map(|x| self.multiply(x, a)).collect())
    }

    pub fn left_translations(&self) -> Vec<Perm> {
        (0..self.order).map(|a| self.left_translation(a)).collect()
    }

    pub fn right_translations(&self) -> Vec<Perm> {
        (0..self.order).map(|a| self.right_translation(a)).collect()
    }

    /// The two-sided identity, if the quasigroup is a loop.
    pub fn find_identity(&self) -> Option<Element> {
        // e * e = e is necessary; L_e and R_e must both be the identity map.
        (0..self.order).find(|&e| {
            (0..self.order).all(|x| self.multiply(e, x) == x && self.multiply(x, e) == x)
        })
    }

    pub fn is_loop(&self) -> bool {
        self.find_identity().is_some()
    }

    /// Direct check of associativity on the table.
    pub fn is_associative(&self) -> bool {
        let n = self.order;
        (0..n).all(|x| {
            (0..n).all(|y| {
                let xy = self.multiply(x, y);
                (0..n).all(|z| self.multiply(xy, z) == self.multiply(x, self.multiply(y, z)))
            })
        })
    }

    /// Renders the table in the text format read by [`parse_table`].
    pub fn to_table_text(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|&v| self.label(v)).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }
}

impl fmt::Debug for FiniteQuasigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteQuasigroup")
            .field("order", &self.order)
            .field("rows", &self.rows().collect::<Vec<_>>())
            .field("labels", &self.labels)
            .finish()
    }
}

/// Parses the Cayley table text format.
///
/// The first non-comment line holds the order `n`; the next `n` lines hold
/// `n` whitespace-separated tokens each. Lines starting with `#` are
/// comments. Tokens are either all integers in `[0, n)` or all labels; in
/// the latter case labels get indices in order of first appearance,
/// scanning row-major.
pub fn parse_table(text: &str) -> Result<FiniteQuasigroup, TableParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('#')
        });

    let err = |line: usize, column: usize, message: String| FormatError {
        line,
        column,
        message,
    };

    let (order_line, header) = lines
        .next()
        .ok_or_else(|| err(1, 1, "missing order line".into()))?;
    let header_col = column_of(header, header.trim());
    let order: usize = header.trim().parse().map_err(|_| {
        err(
            order_line,
            header_col,
            format!("expected order, found {:?}", header.trim()),
        )
    })?;
    if order == 0 {
        return Err(err(order_line, header_col, "order must be positive".into()).into());
    }

    // (line, column, token)
    let mut tokens: Vec<Vec<(usize, usize, &str)>> = Vec::with_capacity(order);
    for _ in 0..order {
        let (line_no, line) = lines.next().ok_or_else(|| {
            err(
                order_line + tokens.len() + 1,
                1,
                format!("expected {order} table rows, found {}", tokens.len()),
            )
        })?;
        let row: Vec<(usize, usize, &str)> = tokens_with_columns(line)
            .map(|(c, t)| (line_no, c, t))
            .collect();
        if row.len() != order {
            return Err(err(
                line_no,
                1,
                format!("expected {order} entries, found {}", row.len()),
            )
            .into());
        }
        tokens.push(row);
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(err(line_no, 1, "trailing content after table".into()).into());
    }

    let all_integers = tokens
        .iter()
        .flatten()
        .all(|(_, _, t)| t.parse::<i64>().is_ok());
    if all_integers {
        let raw: Vec<Vec<i64>> = tokens
            .iter()
            .map(|r| r.iter().map(|(_, _, t)| t.parse().unwrap()).collect())
            .collect();
        if let Some((l, c, t)) = tokens
            .iter()
            .flatten()
            .find(|(_, _, t)| !(0..order as i64).contains(&t.parse::<i64>().unwrap()))
        {
            return Err(err(*l, *c, format!("entry {t} outside [0, {order})")).into());
        }
        return Ok(validate_cayley(&raw, None)?);
    }

    let mut index: HashMap<&str, i64> = HashMap::new();
    let mut labels = Vec::new();
    let mut raw = Vec::with_capacity(order);
    for row in &tokens {
        let mut r = Vec::with_capacity(order);
        for &(l, c, t) in row {
            let next = index.len() as i64;
            let idx = *index.entry(t).or_insert_with(|| {
                labels.push(t.to_string());
                next
            });
            if idx as usize >= order {
                return Err(err(
                    l,
                    c,
                    format!("label {t:?} exceeds the {order} distinct symbols"),
                )
                .into());
            }
            r.push(idx);
        }
        raw.push(r);
    }
    if labels.len() != order {
        return Err(err(
            order_line,
            1,
            format!("expected {order} distinct labels, found {}", labels.len()),
        )
        .into());
    }
    Ok(validate_cayley(&raw, Some(labels))?)
}

fn column_of(line: &str, token: &str) -> usize {
    token.as_ptr() as usize - line.as_ptr() as usize + 1
}

fn tokens_with_columns(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_whitespace()
        .map(move |t| (column_of(line, t), t))
}
