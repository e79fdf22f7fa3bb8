use std::fmt;

use num_bigint::BigInt;
use overmes_core::formulas::Formulas;
use overmes_core::overpartitions::enumerate;
use overmes_core::qseries::overpartition_gf;
use overmes_core::verify::{
    parameter_grid, table_target, verify_against, verify_grid, verify_structural_properties,
    Census,
};
use overmes_core::{RenderStyle, Statistic, TheoremId, TheoremKind, VerificationReport};
use rayon::prelude::*;

use crate::render::{report_json, report_line, Cell, Sheet};
use crate::{CountArgs, Format, StatsArgs, TableArgs, VerifyAllArgs, VerifyArgs};

#[derive(Debug)]
pub struct CliError(String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<overmes_core::Error> for CliError {
    fn from(e: overmes_core::Error) -> Self {
        CliError(e.to_string())
    }
}

pub struct Outcome {
    pub stdout: String,
    pub passed: bool,
}

fn non_negative(name: &str, v: i64) -> Result<u64, CliError> {
    u64::try_from(v).map_err(|_| CliError(format!("--{name} must be non-negative, got {v}")))
}

fn theorem(name: &str) -> Result<TheoremId, CliError> {
    Ok(name.parse()?)
}

pub fn count(args: &CountArgs) -> Result<Outcome, CliError> {
    let n_max = non_negative("n-max", args.n_max)?;
    let gf = overpartition_gf(n_max as usize);
    let counted: Vec<usize> = (0..=n_max)
        .into_par_iter()
        .map(|n| enumerate(n).count())
        .collect();
    let mut sheet = Sheet::new(["n", "gf", "enumerated", "status"]);
    let mut passed = true;
    for (n, &c) in counted.iter().enumerate() {
        let from_gf = gf.coeff(n);
        let ok = from_gf == BigInt::from(c);
        passed &= ok;
        sheet.push(vec![
            Cell::from(n),
            Cell::Int(from_gf),
            Cell::from(c),
            Cell::text(if ok { "ok" } else { "MISMATCH" }),
        ]);
    }
    Ok(Outcome {
        stdout: sheet.render(args.format),
        passed,
    })
}

pub fn stats(args: &StatsArgs) -> Result<Outcome, CliError> {
    let n = non_negative("n", args.n)?;
    let p = args.params.params()?;
    let style = if args.unicode {
        RenderStyle::Unicode
    } else {
        RenderStyle::Ascii
    };
    let stats: Vec<Statistic> = Statistic::ALL
        .into_iter()
        .filter(|s| p.r() >= s.min_r())
        .collect();
    let mut header = vec!["overpartition"];
    header.extend(stats.iter().map(|s| s.name()));
    let mut sheet = Sheet::new(header);
    for pi in enumerate(n) {
        let mut row = vec![Cell::text(pi.render(style))];
        for &s in &stats {
            row.push(Cell::from(pi.statistic(&p, s)?));
        }
        sheet.push(row);
    }
    Ok(Outcome {
        stdout: sheet.render(args.format),
        passed: true,
    })
}

pub fn table(args: &TableArgs) -> Result<Outcome, CliError> {
    let id = theorem(&args.theorem)?;
    let p = args.params.params()?;
    id.check_r(p.r())?;
    let order = args.order;
    let census = Census::build(p, order);
    let formulas = Formulas::new(p, order)?;

    let mut sheet = Sheet::new(["k", "z", "n", "enumerated", "formula", "status"]);
    let mut passed = true;
    let mut emit = |k: Option<usize>, n: usize, expected: BigInt, actual: BigInt| {
        if expected == BigInt::ZERO && actual == BigInt::ZERO {
            return;
        }
        let ok = expected == actual;
        passed &= ok;
        sheet.push(vec![
            k.map_or(Cell::Null, Cell::from),
            k.map_or(Cell::Null, |k| Cell::from(p.size_at(k as u64))),
            Cell::from(n),
            Cell::Int(expected),
            Cell::Int(actual),
            Cell::text(if ok { "ok" } else { "MISMATCH" }),
        ]);
    };
    match id.kind() {
        TheoremKind::Bivariate => {
            let (stat, subset) = table_target(id).expect("bivariate");
            let expected = census.table(stat, subset)?;
            let actual = formulas.rhs_bivariate(id)?;
            for k in 0..expected.k_bound().max(actual.k_bound()) {
                for n in 0..=order {
                    emit(Some(k), n, expected.get(k, n), actual.get(k, n));
                }
            }
        }
        TheoremKind::Survivor => {
            for k in 0..=order / p.modulus() as usize + 1 {
                let expected = census.survivors(id.statistic(), k)?;
                let actual = formulas.rhs_survivor(id, k as u64)?;
                for n in 0..=order {
                    emit(Some(k), n, expected.coeff(n), actual.coeff(n));
                }
            }
        }
        TheoremKind::Sigma | TheoremKind::Corollary => {
            let (expected, actual) = if id.kind() == TheoremKind::Sigma {
                (census.sigma(id.statistic())?, formulas.rhs_sigma(id)?)
            } else {
                (census.corollary(id)?, formulas.rhs_corollary(id)?)
            };
            for n in 0..=order {
                emit(None, n, expected.coeff(n), actual.coeff(n));
            }
        }
    }
    Ok(Outcome {
        stdout: sheet.render(args.format),
        passed,
    })
}

fn report_sheet(reports: &[VerificationReport]) -> Sheet {
    let mut sheet = Sheet::new([
        "theorem",
        "r",
        "A",
        "a",
        "order",
        "status",
        "k",
        "n",
        "expected",
        "actual",
        "entries_checked",
    ]);
    for r in reports {
        let m = r.first_mismatch.as_ref();
        sheet.push(vec![
            Cell::text(r.check.to_string()),
            r.params.map_or(Cell::Null, |p| Cell::from(p.r())),
            r.params.map_or(Cell::Null, |p| Cell::from(p.modulus())),
            r.params.map_or(Cell::Null, |p| Cell::from(p.residue())),
            Cell::from(r.order),
            Cell::text(r.status().as_str()),
            m.and_then(|m| m.k).map_or(Cell::Null, Cell::from),
            m.map_or(Cell::Null, |m| Cell::from(m.n)),
            m.map_or(Cell::Null, |m| Cell::Int(m.expected.clone())),
            m.map_or(Cell::Null, |m| Cell::Int(m.actual.clone())),
            Cell::from(r.entries_checked),
        ]);
    }
    sheet
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let id = theorem(&args.theorem)?;
    let p = args.params.params()?;
    id.check_r(p.r())?;
    let start = std::time::Instant::now();
    let census = Census::build(p, args.order);
    let formulas = Formulas::new(p, args.order)?;
    let mut report = verify_against(&census, &formulas, id, args.inject_fault)?;
    report.elapsed = start.elapsed();
    let stdout = match args.format {
        Format::Json => {
            let v = report_json(&report, !args.no_timing, true);
            crate::render::finish_json(&v)
        }
        Format::Text => report_line(&report) + "\n",
        Format::Csv => report_sheet(std::slice::from_ref(&report)).render(Format::Csv),
    };
    Ok(Outcome {
        stdout,
        passed: report.passed(),
    })
}

pub fn verify_all(args: &VerifyAllArgs) -> Result<Outcome, CliError> {
    if args.r_max == 0 || args.modulus_max == 0 {
        return Err(CliError("--r-max and --A-max must be positive".into()));
    }
    let grid = parameter_grid(args.r_max, args.modulus_max);
    let mut reports = verify_grid(&grid, args.order, args.inject_fault)?;
    let n_max = args.structural_n_max.unwrap_or(args.order.min(12));
    reports.push(verify_structural_properties(&grid, n_max));
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let passed = failed == 0;
    let stdout = match args.format {
        Format::Json => {
            let list: Vec<_> = reports
                .iter()
                .map(|r| report_json(r, !args.no_timing, false))
                .collect();
            let summary = serde_json::json!({
                "order": args.order,
                "r_max": args.r_max,
                "A_max": args.modulus_max,
                "status": if passed { "pass" } else { "fail" },
                "total": reports.len(),
                "passed": reports.len() - failed,
                "failed": failed,
                "reports": list,
            });
            crate::render::finish_json(&summary)
        }
        Format::Text => {
            let mut s: String = reports.iter().map(|r| report_line(r) + "\n").collect();
            s += &format!(
                "{}: {} of {} checks passed\n",
                if passed { "pass" } else { "fail" },
                reports.len() - failed,
                reports.len()
            );
            s
        }
        Format::Csv => report_sheet(&reports).render(Format::Csv),
    };
    Ok(Outcome { stdout, passed })
}
