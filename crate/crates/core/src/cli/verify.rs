use std::io::Write;

use super::{CmdResult, EXIT_OK, EXIT_VERIFY};
use crate::ratio::ExactRatio;
use crate::series::catalan;
use crate::stats::{
    average, dist_closed_all, dist_exhaustive_with_cap, dist_series_upto, reference_table,
    weighted_sum, RecurrenceLevels, SpineDistribution,
};
use crate::trees::check_construction_step;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Check {
            name,
            passed,
            detail,
        }
    }
}

/// Every check `verify` runs for sizes up to `max_n`.
pub fn run_checks(max_n: usize, cap: usize) -> Vec<Check> {
    let mut checks = Vec::new();
    let exhaustive_top = max_n.min(cap);

    let recurrence: Vec<SpineDistribution> = RecurrenceLevels::new().take(max_n + 1).collect();
    let series = dist_series_upto(max_n);
    let closed: Vec<SpineDistribution> = (0..=max_n).map(dist_closed_all).collect();

    let table_top = max_n.min(10);
    let tables_ok = (1..=table_top).all(|n| reference_table(n).as_ref() == Some(&recurrence[n]));
    checks.push(Check::new(
        "reference tables",
        tables_ok,
        format!("n=1..={table_top}"),
    ));

    let mut step_ok = true;
    let mut images_at_top = 0;
    let mut inverses = 0;
    for m in 1..=exhaustive_top {
        match check_construction_step(m - 1, cap) {
            Ok(c) => {
                step_ok &= c.passed();
                images_at_top = c.images;
                inverses += c.targets - c.inverse_failures;
            }
            Err(_) => step_ok = false,
        }
    }
    checks.push(Check::new(
        "construction bijection",
        step_ok,
        format!("n=1..={exhaustive_top}, {images_at_top} images at the top size"),
    ));
    checks.push(Check::new(
        "predecessor round trip",
        step_ok,
        format!("{inverses} trees"),
    ));

    let mut routes_ok = true;
    for n in 0..=max_n {
        routes_ok &= recurrence[n] == series[n] && series[n] == closed[n];
        if n <= exhaustive_top {
            routes_ok &= dist_exhaustive_with_cap(n, cap).as_ref() == Ok(&recurrence[n]);
        }
    }
    checks.push(Check::new(
        "route agreement",
        routes_ok,
        format!("n=0..={max_n}, exhaustive to {exhaustive_top}"),
    ));

    let conservation_ok = recurrence
        .iter()
        .chain(&series)
        .chain(&closed)
        .all(|d| d.total() == &catalan(d.n()));
    checks.push(Check::new(
        "conservation",
        conservation_ok,
        format!("n=0..={max_n}"),
    ));

    let identity_ok = recurrence
        .iter()
        .skip(1)
        .all(|d| d.weighted_sum() == weighted_sum(d.n()));
    checks.push(Check::new(
        "segment-sum identity",
        identity_ok,
        format!("n=1..={max_n}"),
    ));

    let average_ok = (1..=max_n).all(|n| average(n) == ExactRatio::new(3 * n as u64, n as u64 + 2));
    checks.push(Check::new(
        "average closed form",
        average_ok,
        format!("n=1..={max_n}"),
    ));

    checks
}

pub fn write_report(checks: &[Check], out: &mut dyn Write) -> CmdResult {
    for c in checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{status} {} ({})", c.name, c.detail)?;
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    writeln!(out, "{} checks, {failed} failed", checks.len())?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_VERIFY })
}

pub fn cmd_verify(max_n: usize, cap: usize, out: &mut dyn Write) -> CmdResult {
    write_report(&run_checks(max_n, cap), out)
}
