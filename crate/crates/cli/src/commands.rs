use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use quasilab::axb::{verify_suite, AxbConfig};
use quasilab::character::{
    check_normalization, positive_sum_oracle, representation_well_defined, solve_characters,
    CharacterError, DEFAULT_PAIR_BUDGET,
};
use quasilab::identity::{builtin, check_identity, parse_identity};
use quasilab::kunen::{kunen_scan_resumable, modular_scan, ScanCheckpoint, ScanMode, ScanOptions};
use quasilab::measure::solve_quasi_invariant;
use quasilab::perm_group::{lmlt, mlt, rmlt};
use quasilab::quasigroup::{parse_table, TableParseError};
use quasilab::scalar::rational_to_string;
use quasilab::{FiniteQuasigroup, Rational};

use crate::report::*;
use crate::{AxbAction, Cli, Command, ScanArgs};

pub enum Verdict {
    Holds,
    Fails,
}

impl From<bool> for Verdict {
    fn from(holds: bool) -> Self {
        if holds {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

struct Out<'a> {
    cli: &'a Cli,
}

impl Out<'_> {
    fn say(&self, line: impl AsRef<str>) {
        if !self.cli.quiet {
            println!("{}", line.as_ref());
        }
    }

    fn emit(&self, report: &Report) -> Result<()> {
        if let Some(path) = &self.cli.json {
            let text = serde_json::to_string_pretty(report)?;
            fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(())
    }
}

fn read_table(path: &Path) -> Result<std::result::Result<FiniteQuasigroup, TableParseError>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_table(&text))
}

/// Reads a table that must be Latin; anything else is an input error.
fn load(path: &Path) -> Result<FiniteQuasigroup> {
    read_table(path)?.with_context(|| format!("in table {}", path.display()))
}

fn strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(rational_to_string).collect()
}

fn json_line<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("report types serialize")
}

pub fn dispatch(cli: &Cli) -> Result<Verdict> {
    let out = Out { cli };
    match &cli.command {
        Command::Validate(t) => validate(&out, &t.table),
        Command::CheckIdentity {
            table,
            identity,
            builtin: name,
        } => {
            let q = load(&table.table)?;
            let id = match (identity, name) {
                (Some(text), _) => parse_identity(text)?,
                (None, Some(name)) => builtin(name)?,
                (None, None) => bail!("one of --identity or --builtin is required"),
            };
            let result = check_identity(&q, &id)?;
            let counterexample = result.counterexample.map(|c| CounterexampleJson {
                assignment: c.assignment.into_iter().collect::<BTreeMap<_, _>>(),
                lhs: c.lhs,
                rhs: c.rhs,
            });
            out.say(format!("identity: {} = {}", id.lhs(), id.rhs()));
            out.say(format!("holds: {}", result.holds));
            if let Some(c) = &counterexample {
                out.say(format!("counterexample: {}", json_line(&c.assignment)));
                out.say(format!("lhs: {}, rhs: {}", q.label(c.lhs), q.label(c.rhs)));
            }
            out.emit(&Report::CheckIdentity(IdentityReport {
                identity: format!("{} = {}", id.lhs(), id.rhs()),
                order: q.order(),
                holds: result.holds,
                counterexample,
            }))?;
            Ok(result.holds.into())
        }
        Command::Translations(t) => {
            let q = load(&t.table)?;
            let left: Vec<Vec<usize>> = q
                .left_translations()
                .iter()
                .map(|p| p.images().to_vec())
                .collect();
            let right: Vec<Vec<usize>> = q
                .right_translations()
                .iter()
                .map(|p| p.images().to_vec())
                .collect();
            for (a, images) in left.iter().enumerate() {
                out.say(format!("L_{} = {}", q.label(a), json_line(images)));
            }
            for (a, images) in right.iter().enumerate() {
                out.say(format!("R_{} = {}", q.label(a), json_line(images)));
            }
            out.emit(&Report::Translations(TranslationsReport {
                order: q.order(),
                left,
                right,
            }))?;
            Ok(Verdict::Holds)
        }
        Command::Mlt { table, which } => {
            let q = load(&table.table)?;
            let g = match which {
                Which::Left => lmlt(&q),
                Which::Right => rmlt(&q),
                Which::Both => mlt(&q),
            };
            let report = MltReport {
                which: *which,
                degree: g.degree(),
                order: g.order().to_string(),
                transitive: g.is_transitive(),
                generators: g.generators().iter().map(|p| p.images().to_vec()).collect(),
            };
            out.say(format!("degree: {}", report.degree));
            out.say(format!("order: {}", report.order));
            out.say(format!("transitive: {}", report.transitive));
            for gen in &report.generators {
                out.say(format!("generator: {}", json_line(gen)));
            }
            out.emit(&Report::Mlt(report))?;
            Ok(Verdict::Holds)
        }
        Command::Measure(t) => {
            let q = load(&t.table)?;
            let sol = solve_quasi_invariant::<Rational>(&q)?;
            let report = MeasureReport {
                order: q.order(),
                dimension: sol.dimension,
                measure: strings(sol.measure.weights()),
                left_cocycle: strings(sol.left_cocycle.values()),
                right_cocycle: strings(sol.right_cocycle.values()),
                degenerate: sol.degenerate,
                lmlt_transitive: sol.lmlt_transitive,
                explanation: sol.explanation.summary(),
            };
            out.say(format!("measure: {}", json_line(&report.measure)));
            out.say(format!("left_cocycle: {}", json_line(&report.left_cocycle)));
            out.say(format!(
                "right_cocycle: {}",
                json_line(&report.right_cocycle)
            ));
            out.say(format!(
                "dimension: {}, degenerate: {}",
                report.dimension, report.degenerate
            ));
            out.say(format!("explanation: {}", report.explanation));
            let trivial = sol.left_cocycle.is_trivial() && sol.right_cocycle.is_trivial();
            out.emit(&Report::Measure(report))?;
            Ok(trivial.into())
        }
        Command::Characters { table, cap } => characters(&out, &table.table, *cap),
        Command::Axb {
            action: AxbAction::Verify { trials, tol, seed },
        } => {
            let config = AxbConfig {
                trials: *trials,
                tol: *tol,
                seed: *seed,
                ..AxbConfig::default()
            };
            let report = verify_suite(&config)?;
            for c in &report.criteria {
                out.say(format!(
                    "{:<26} max error {:.3e} (threshold {:.0e}, {} samples) {}",
                    c.name,
                    c.max_error,
                    c.threshold,
                    c.samples,
                    if c.passed { "ok" } else { "FAILED" }
                ));
            }
            let passed = report.passed;
            out.emit(&Report::Axb(report))?;
            Ok(passed.into())
        }
        Command::KunenScan(args) => scan(&out, args),
        Command::ReportValidate { report } => {
            let text = fs::read_to_string(report)
                .with_context(|| format!("reading {}", report.display()))?;
            let parsed: Report = match serde_json::from_str(&text) {
                Ok(r) => r,
                Err(e) => {
                    out.say(format!("invalid report: {e}"));
                    return Ok(Verdict::Fails);
                }
            };
            match parsed.check() {
                Ok(()) => {
                    out.say(format!("valid {} report", parsed.kind()));
                    Ok(Verdict::Holds)
                }
                Err(e) => {
                    out.say(format!("invalid {} report: {e}", parsed.kind()));
                    Ok(Verdict::Fails)
                }
            }
        }
    }
}

fn validate(out: &Out, path: &Path) -> Result<Verdict> {
    let q = match read_table(path)? {
        Ok(q) => q,
        Err(TableParseError::Cayley(e)) => {
            out.say(format!("not a Latin square: {e}"));
            return Ok(Verdict::Fails);
        }
        Err(e) => return Err(e).with_context(|| format!("in table {}", path.display())),
    };
    let report = ValidateReport {
        order: q.order(),
        is_loop: q.is_loop(),
        identity_element: q.find_identity(),
        associative: q.is_associative(),
        labels: q.labels().map(<[String]>::to_vec),
    };
    out.say(format!("order: {}", report.order));
    match report.identity_element {
        Some(e) => out.say(format!("loop: yes (identity {})", q.label(e))),
        None => out.say("loop: no"),
    }
    out.say(format!("associative: {}", report.associative));
    out.emit(&Report::Validate(report))?;
    Ok(Verdict::Holds)
}

fn characters(out: &Out, path: &Path, cap: usize) -> Result<Verdict> {
    let q = load(path)?;
    let n = q.order();
    let space = solve_characters::<Rational>(&q);
    let bound = positive_sum_oracle(&q).dimension_bound();
    let chi = space.representative(n);
    let normalized = match check_normalization(&q, &chi) {
        Ok(b) => Some(b),
        Err(CharacterError::NotALoop) => None,
        Err(e) => return Err(e.into()),
    };
    let order = lmlt(&q).order().clone();
    let (audit, audit_skipped) = if order > cap.into() {
        (
            None,
            Some(format!("|LMlt| = {order} exceeds the cap {cap}")),
        )
    } else {
        let a = representation_well_defined(&q, &chi, cap, DEFAULT_PAIR_BUDGET)?;
        let audit = AuditJson {
            well_defined: a.well_defined,
            conflict: a.conflict,
            group_order: a.group_order,
            pairs_checked: a.pairs_checked,
            homomorphism: a.homomorphism,
            image: strings(&a.image),
        };
        (Some(audit), None)
    };
    let report = CharactersReport {
        order: n,
        dimension: space.dimension(),
        oracle_bound: bound,
        log_character: strings(chi.logs()),
        normalized,
        element_cap: cap,
        audit,
        audit_skipped,
    };
    out.say(format!(
        "dimension: {} (oracle bound {})",
        report.dimension, report.oracle_bound
    ));
    out.say(format!(
        "log character: {}",
        json_line(&report.log_character)
    ));
    match report.normalized {
        Some(ok) => out.say(format!("normalization chi(e) = 1: {ok}")),
        None => out.say("normalization: not a loop"),
    }
    match (&report.audit, &report.audit_skipped) {
        (Some(a), _) => out.say(format!(
            "representation: well defined {}, |LMlt| = {}, {} pairs checked",
            a.well_defined, a.group_order, a.pairs_checked
        )),
        (None, Some(reason)) => out.say(format!("representation audit skipped: {reason}")),
        (None, None) => {}
    }
    let holds = report.dimension == report.oracle_bound
        && report.normalized != Some(false)
        && report
            .audit
            .as_ref()
            .is_none_or(|a| a.well_defined && a.homomorphism);
    out.emit(&Report::Characters(report))?;
    Ok(holds.into())
}

fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)
}

fn scan(out: &Out, args: &ScanArgs) -> Result<Verdict> {
    let mode = match args.sample {
        Some(count) => ScanMode::Sample {
            count,
            seed: args.seed,
        },
        None => ScanMode::Full,
    };
    let options = ScanOptions {
        identity: args.identity.clone(),
        allow_n6: args.allow_n6,
        jobs: out.cli.jobs,
        ..ScanOptions::default()
    };

    if args.modular {
        let s = modular_scan(args.order, mode, &options)?;
        out.say(format!(
            "order {}: {} squares scanned",
            s.order, s.squares_scanned
        ));
        out.say(format!(
            "{} satisfiers, {} with trivial cocycles",
            s.n1_count, s.trivial_cocycles
        ));
        let holds = s.collapse_holds();
        out.emit(&Report::ModularScan(s))?;
        return Ok(holds.into());
    }

    let resume = match &args.checkpoint {
        Some(path) if path.exists() => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let c: ScanCheckpoint = serde_json::from_str(&text)
                .with_context(|| format!("parsing checkpoint {}", path.display()))?;
            out.say(format!(
                "resuming at first row {} of {}",
                c.next_prefix, c.total_prefixes
            ));
            Some(c)
        }
        _ => None,
    };
    let mut write_error = None;
    let report = kunen_scan_resumable(args.order, mode, &options, resume, |c| {
        if let (Some(path), None) = (&args.checkpoint, &write_error) {
            let text = serde_json::to_string(c).expect("checkpoint serializes");
            if let Err(e) = write_atomic(path, &text) {
                write_error = Some(e);
            }
        }
    })?;
    if let Some(e) = write_error {
        return Err(e).context("writing checkpoint");
    }

    for (i, table) in report.counterexamples.iter().enumerate() {
        let path = args
            .dump_dir
            .join(format!("counterexample-{}-{i}.tbl", report.order));
        fs::write(&path, table).with_context(|| format!("writing {}", path.display()))?;
        out.say(format!("counterexample written to {}", path.display()));
    }
    out.say(format!(
        "order {} ({}): {} squares, {} satisfy {}, {} of those are loops",
        report.order,
        if report.uniform {
            "full"
        } else {
            "sampled, non-uniform"
        },
        report.total_squares,
        report.n1_count,
        report.identity,
        report.n1_loop_count
    ));
    out.say(format!(
        "loops: {}, loops failing the identity: {}, elapsed {:.2}s",
        report.loop_count, report.loops_failing_n1, report.elapsed
    ));
    let holds = report.kunen_holds();
    out.emit(&Report::KunenScan(report))?;
    Ok(holds.into())
}
