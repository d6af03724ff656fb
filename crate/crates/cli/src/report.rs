//! JSON reports written by every subcommand, and their schema check.

use std::collections::BTreeMap;

use quasilab::axb::AxbReport;
use quasilab::kunen::{ModularSummary, ScanMode, ScanReport};
use quasilab::scalar::parse_rational;
use quasilab::{Perm, PermGroup, Rational};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Report {
    Validate(ValidateReport),
    CheckIdentity(IdentityReport),
    Translations(TranslationsReport),
    Mlt(MltReport),
    Measure(MeasureReport),
    Characters(CharactersReport),
    Axb(AxbReport),
    KunenScan(ScanReport),
    ModularScan(ModularSummary),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateReport {
    pub order: usize,
    pub is_loop: bool,
    pub identity_element: Option<usize>,
    pub associative: bool,
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityReport {
    pub identity: String,
    pub order: usize,
    pub holds: bool,
    pub counterexample: Option<CounterexampleJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleJson {
    pub assignment: BTreeMap<String, usize>,
    pub lhs: usize,
    pub rhs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranslationsReport {
    pub order: usize,
    /// `left[a]` is the image array of `L_a`.
    pub left: Vec<Vec<usize>>,
    pub right: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Left,
    Right,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MltReport {
    pub which: Which,
    pub degree: usize,
    /// Decimal; may exceed 64 bits.
    pub order: String,
    pub transitive: bool,
    pub generators: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureReport {
    pub order: usize,
    pub dimension: usize,
    pub measure: Vec<String>,
    pub left_cocycle: Vec<String>,
    pub right_cocycle: Vec<String>,
    pub degenerate: bool,
    pub lmlt_transitive: bool,
    pub explanation: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharactersReport {
    pub order: usize,
    pub dimension: usize,
    pub oracle_bound: usize,
    /// Logarithms of the character values.
    pub log_character: Vec<String>,
    /// `None` when the table has no identity element.
    pub normalized: Option<bool>,
    pub element_cap: usize,
    pub audit: Option<AuditJson>,
    pub audit_skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditJson {
    pub well_defined: bool,
    pub conflict: Option<(Vec<usize>, Vec<usize>)>,
    pub group_order: usize,
    pub pairs_checked: usize,
    pub homomorphism: bool,
    pub image: Vec<String>,
}

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn rationals(values: &[String], what: &str) -> Result<Vec<Rational>, String> {
    values
        .iter()
        .map(|s| parse_rational(s).ok_or_else(|| format!("{what}: {s:?} is not a rational")))
        .collect()
}

fn perms(arrays: &[Vec<usize>], degree: usize, what: &str) -> Result<Vec<Perm>, String> {
    arrays
        .iter()
        .map(|a| {
            ensure(a.len() == degree, || {
                format!("{what}: expected degree {degree}")
            })?;
            Perm::from_images(a.clone()).map_err(|e| format!("{what}: {e}"))
        })
        .collect()
}

impl Report {
    /// Checks the invariants that tie a report's fields together.
    pub fn check(&self) -> Result<(), String> {
        match self {
            Report::Validate(r) => {
                ensure(r.order > 0, || "order must be positive".into())?;
                ensure(r.is_loop == r.identity_element.is_some(), || {
                    "is_loop disagrees with identity_element".into()
                })?;
                ensure(r.identity_element.is_none_or(|e| e < r.order), || {
                    "identity element out of range".into()
                })?;
                ensure(!r.associative || r.is_loop, || {
                    "an associative quasigroup must be a loop".into()
                })?;
                ensure(r.labels.as_ref().is_none_or(|l| l.len() == r.order), || {
                    "label count differs from order".into()
                })
            }
            Report::CheckIdentity(r) => {
                ensure(r.holds == r.counterexample.is_none(), || {
                    "holds disagrees with counterexample".into()
                })?;
                if let Some(c) = &r.counterexample {
                    ensure(c.lhs != c.rhs, || "counterexample sides are equal".into())?;
                    let vals = c.assignment.values().chain([&c.lhs, &c.rhs]);
                    ensure(vals.into_iter().all(|&v| v < r.order), || {
                        "counterexample element out of range".into()
                    })?;
                }
                Ok(())
            }
            Report::Translations(r) => {
                ensure(r.left.len() == r.order && r.right.len() == r.order, || {
                    "expected one translation per element".into()
                })?;
                perms(&r.left, r.order, "left")?;
                perms(&r.right, r.order, "right")?;
                // L_a(b) = R_b(a)
                ensure(
                    (0..r.order).all(|a| (0..r.order).all(|b| r.left[a][b] == r.right[b][a])),
                    || "left and right translations describe different tables".into(),
                )
            }
            Report::Mlt(r) => {
                let gens = perms(&r.generators, r.degree, "generators")?;
                let g = PermGroup::generate(r.degree, &gens).map_err(|e| e.to_string())?;
                ensure(g.order().to_string() == r.order, || {
                    format!(
                        "generators give order {}, report says {}",
                        g.order(),
                        r.order
                    )
                })?;
                ensure(g.is_transitive() == r.transitive, || {
                    "transitivity mismatch".into()
                })
            }
            Report::Measure(r) => {
                let mu = rationals(&r.measure, "measure")?;
                let j = rationals(&r.left_cocycle, "left_cocycle")?;
                let rho = rationals(&r.right_cocycle, "right_cocycle")?;
                ensure(
                    [mu.len(), j.len(), rho.len()].iter().all(|&l| l == r.order),
                    || "vector lengths differ from order".into(),
                )?;
                ensure(
                    mu.iter()
                        .chain(&j)
                        .chain(&rho)
                        .all(|x| *x > Rational::from_integer(0.into())),
                    || "weights and cocycles must be positive".into(),
                )?;
                ensure(r.dimension >= 1, || {
                    "a solution exists, so dimension is at least 1".into()
                })?;
                ensure(!r.lmlt_transitive || r.dimension == 1, || {
                    "transitive LMlt forces a one-dimensional fixed space".into()
                })
            }
            Report::Characters(r) => {
                ensure(r.dimension <= r.oracle_bound, || {
                    "dimension exceeds the oracle bound".into()
                })?;
                ensure(
                    rationals(&r.log_character, "log_character")?.len() == r.order,
                    || "character length differs from order".into(),
                )?;
                ensure(r.audit.is_some() != r.audit_skipped.is_some(), || {
                    "exactly one of audit and audit_skipped must be present".into()
                })?;
                if let Some(a) = &r.audit {
                    ensure(a.well_defined == a.conflict.is_none(), || {
                        "well_defined disagrees with conflict".into()
                    })?;
                    ensure(a.group_order <= r.element_cap, || {
                        "group order exceeds the cap".into()
                    })?;
                    rationals(&a.image, "image")?;
                }
                Ok(())
            }
            Report::Axb(r) => {
                for c in &r.criteria {
                    ensure(c.passed == (c.max_error <= c.threshold), || {
                        format!("criterion {} has an inconsistent verdict", c.name)
                    })?;
                }
                ensure(r.passed == r.criteria.iter().all(|c| c.passed), || {
                    "overall verdict disagrees with criteria".into()
                })?;
                ensure(!r.criteria.is_empty(), || "no criteria".into())
            }
            Report::KunenScan(r) => {
                r.check_invariants()?;
                ensure(r.uniform == matches!(r.mode, ScanMode::Full), || {
                    "only full scans are uniform".into()
                })?;
                if let ScanMode::Sample { count, .. } = r.mode {
                    ensure(r.total_squares == count as u64, || {
                        "sample count mismatch".into()
                    })?;
                }
                Ok(())
            }
            Report::ModularScan(r) => {
                ensure(r.n1_count <= r.squares_scanned, || {
                    "n1_count exceeds squares".into()
                })?;
                ensure(
                    r.trivial_cocycles + r.nontrivial.len() as u64 == r.n1_count,
                    || "trivial and nontrivial counts do not add up".into(),
                )?;
                ensure(
                    r.one_dimensional <= r.n1_count && r.degenerate <= r.n1_count,
                    || "per-square tallies exceed n1_count".into(),
                )
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Report::Validate(_) => "validate",
            Report::CheckIdentity(_) => "check-identity",
            Report::Translations(_) => "translations",
            Report::Mlt(_) => "mlt",
            Report::Measure(_) => "measure",
            Report::Characters(_) => "characters",
            Report::Axb(_) => "axb",
            Report::KunenScan(_) => "kunen-scan",
            Report::ModularScan(_) => "modular-scan",
        }
    }
}
