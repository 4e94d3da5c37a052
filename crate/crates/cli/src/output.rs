//! CSV output for sweep and CDF runs.
//!
//! Sweep files have the header `strategy,distance_m,mean_se,p10_se,p50_se,p90_se`
//! and CDF files `strategy,spectral_efficiency,cdf`. Numbers carry six decimal
//! places. Rows are sorted by strategy name, then distance or spectral
//! efficiency.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::Path;

use relaysim::{EmpiricalCdf, StrategyKind, SweepTable};
use tempfile::NamedTempFile;

pub const SWEEP_HEADER: &str = "strategy,distance_m,mean_se,p10_se,p50_se,p90_se";
pub const CDF_HEADER: &str = "strategy,spectral_efficiency,cdf";

#[derive(Debug, Clone, PartialEq)]
pub enum Results {
    Sweep(SweepTable),
    Cdf(BTreeMap<StrategyKind, EmpiricalCdf>),
}

pub fn write_sweep<W: Write>(table: &SweepTable, out: &mut W) -> io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    let mut rows: Vec<_> = table.rows.iter().collect();
    rows.sort_by(|a, b| {
        a.strategy
            .name()
            .cmp(b.strategy.name())
            .then(a.distance_m.total_cmp(&b.distance_m))
    });
    for row in rows {
        let s = &row.stats;
        writeln!(
            out,
            "{},{:.6},{:.6},{:.6},{:.6},{:.6}",
            row.strategy, row.distance_m, s.mean, s.p10, s.p50, s.p90
        )?;
    }
    Ok(())
}

pub fn write_cdf<W: Write>(
    cdfs: &BTreeMap<StrategyKind, EmpiricalCdf>,
    out: &mut W,
) -> io::Result<()> {
    writeln!(out, "{CDF_HEADER}")?;
    let mut sections: Vec<_> = cdfs.iter().collect();
    sections.sort_by_key(|(kind, _)| kind.name());
    for (kind, cdf) in sections {
        for (x, f) in cdf.points() {
            writeln!(out, "{kind},{x:.6},{f:.6}")?;
        }
    }
    Ok(())
}

pub fn write_results<W: Write>(results: &Results, out: &mut W) -> io::Result<()> {
    match results {
        Results::Sweep(table) => write_sweep(table, out),
        Results::Cdf(cdfs) => write_cdf(cdfs, out),
    }
}

/// Writes `results` to `path` through a temporary file in the same
/// directory, so a failed run never leaves a partial CSV behind.
pub fn emit_csv(results: &Results, path: &Path) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    if !dir.is_dir() {
        return Err(io::Error::new(
            io::ErrorKind::NotFound,
            format!("output directory {} does not exist", dir.display()),
        ));
    }
    let mut tmp = NamedTempFile::new_in(dir)?;
    {
        let mut writer = io::BufWriter::new(tmp.as_file_mut());
        write_results(results, &mut writer)?;
        writer.flush()?;
    }
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Convenience for tests and tools: the CSV as a string.
pub fn to_csv_string(results: &Results) -> String {
    let mut buf = Vec::new();
    write_results(results, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("CSV is ASCII")
}
