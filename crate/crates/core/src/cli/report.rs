use std::io::{self, Write};

use serde::Serialize;

use super::{Method, SampleArgs, VERSION};
use crate::asymptotics::limit_formula;
use crate::ratio::ExactRatio;
use crate::stats::SpineDistribution;
use crate::Count;

/// One `(n, k)` line of a distribution report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportRow {
    pub n: usize,
    pub k: usize,
    pub count: Count,
    pub fraction: String,
    pub limit: String,
}

pub fn rows(dist: &SpineDistribution, precision: usize) -> Vec<ReportRow> {
    dist.iter()
        .map(|(k, count)| ReportRow {
            n: dist.n(),
            k,
            count: count.clone(),
            fraction: dist.fraction(k).to_decimal(precision),
            limit: limit_formula(k).to_decimal(precision),
        })
        .collect()
}

pub fn write_dist_csv(rows: &[ReportRow], out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "n,k,count,fraction,limit")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.n, r.k, r.count, r.fraction, r.limit
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct JsonRow<'a> {
    k: usize,
    count: String,
    fraction: &'a str,
    limit: &'a str,
}

#[derive(Serialize)]
struct JsonDist<'a> {
    n: usize,
    total: String,
    method: &'a str,
    version: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
    rows: Vec<JsonRow<'a>>,
}

pub fn write_dist_json(
    dist: &SpineDistribution,
    method: Method,
    rows: &[ReportRow],
    note: Option<&str>,
    out: &mut dyn Write,
) -> io::Result<()> {
    let doc = JsonDist {
        n: dist.n(),
        total: dist.total().to_string(),
        method: method.name(),
        version: VERSION,
        note,
        rows: rows
            .iter()
            .map(|r| JsonRow {
                k: r.k,
                count: r.count.to_string(),
                fraction: &r.fraction,
                limit: &r.limit,
            })
            .collect(),
    };
    serde_json::to_writer_pretty(&mut *out, &doc).map_err(io::Error::other)?;
    writeln!(out)
}

pub fn write_dist_text(
    dist: &SpineDistribution,
    method: Method,
    rows: &[ReportRow],
    note: Option<&str>,
    out: &mut dyn Write,
) -> io::Result<()> {
    writeln!(
        out,
        "n={} method={} total={}",
        dist.n(),
        method.name(),
        dist.total()
    )?;
    if let Some(note) = note {
        writeln!(out, "note: {note}")?;
    }
    for r in rows {
        writeln!(out, "{} x {}  {}  {}", r.count, r.k, r.fraction, r.limit)?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleRow {
    pub k: usize,
    pub hits: usize,
    pub empirical: String,
    pub exact: String,
    pub limit: String,
}

pub fn sample_rows(
    exact: &SpineDistribution,
    hits: &[usize],
    samples: usize,
    precision: usize,
) -> Vec<SampleRow> {
    (1..=exact.n())
        .map(|k| SampleRow {
            k,
            hits: hits[k],
            empirical: ExactRatio::new(hits[k] as u64, samples as u64).to_decimal(precision),
            exact: exact.fraction(k).to_decimal(precision),
            limit: limit_formula(k).to_decimal(precision),
        })
        .collect()
}

pub fn write_sample_csv(rows: &[SampleRow], out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "k,hits,empirical,exact,limit")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.k, r.hits, r.empirical, r.exact, r.limit
        )?;
    }
    Ok(())
}

pub fn write_sample_text(
    a: &SampleArgs,
    rows: &[SampleRow],
    note: Option<&str>,
    out: &mut dyn Write,
) -> io::Result<()> {
    writeln!(out, "n={} samples={} seed={}", a.n, a.samples, a.seed)?;
    if let Some(note) = note {
        writeln!(out, "note: {note}")?;
    }
    writeln!(out, "k  hits  empirical  exact  limit")?;
    for r in rows {
        writeln!(
            out,
            "{}  {}  {}  {}  {}",
            r.k, r.hits, r.empirical, r.exact, r.limit
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct JsonSampleRow<'a> {
    k: usize,
    hits: usize,
    empirical: &'a str,
    exact: &'a str,
    limit: &'a str,
}

#[derive(Serialize)]
struct JsonSample<'a> {
    n: usize,
    samples: usize,
    seed: u64,
    version: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
    rows: Vec<JsonSampleRow<'a>>,
}

pub fn write_sample_json(
    a: &SampleArgs,
    rows: &[SampleRow],
    note: Option<&str>,
    out: &mut dyn Write,
) -> io::Result<()> {
    let doc = JsonSample {
        n: a.n,
        samples: a.samples,
        seed: a.seed,
        version: VERSION,
        note,
        rows: rows
            .iter()
            .map(|r| JsonSampleRow {
                k: r.k,
                hits: r.hits,
                empirical: &r.empirical,
                exact: &r.exact,
                limit: &r.limit,
            })
            .collect(),
    };
    serde_json::to_writer_pretty(&mut *out, &doc).map_err(io::Error::other)?;
    writeln!(out)
}
