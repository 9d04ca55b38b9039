//! CSV and JSON writers for every result table.

use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::analytics::{CdfPoint, CorrelationReport, DistributionExport, RegressionReport};
use crate::error::{Error, Result};
use crate::pwi::PwiRow;
use crate::registry::AuthorRow;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::Usage(format!("unknown output format {other:?}"))),
        }
    }
}

/// Two decimals, ties rounded away from zero (0.125 -> "0.13").
pub fn format_2dp(x: f64) -> String {
    let rounded = (x * 100.0).round() / 100.0;
    format!("{:.2}", rounded + 0.0)
}

fn write_json<W: Write, T: Serialize + ?Sized>(mut out: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_authors<W: Write>(rows: &[AuthorRow], format: OutputFormat, out: W) -> Result<()> {
    match format {
        OutputFormat::Json => write_json(out, rows),
        OutputFormat::Csv => {
            let mut wtr = csv::Writer::from_writer(out);
            wtr.write_record(["author", "papers", "coauthors"])?;
            for r in rows {
                wtr.write_record([r.author.as_str(), &r.papers.to_string(), &r.coauthors.to_string()])?;
            }
            wtr.flush()?;
            Ok(())
        }
    }
}

/// PWI table. CSV values are shown with two decimals; JSON keeps full
/// precision.
pub fn write_pwi<W: Write>(rows: &[PwiRow], format: OutputFormat, out: W) -> Result<()> {
    match format {
        OutputFormat::Json => write_json(out, rows),
        OutputFormat::Csv => {
            let mut wtr = csv::Writer::from_writer(out);
            wtr.write_record([
                "author",
                "pwi",
                "papers",
                "coauthors",
                "laureate",
                "pwi_per_paper",
                "pwi_per_coauthor",
            ])?;
            for r in rows {
                wtr.write_record([
                    r.author.as_str(),
                    &format_2dp(r.pwi),
                    &r.n_papers.to_string(),
                    &r.n_coauthors.to_string(),
                    if r.is_laureate { "yes" } else { "no" },
                    &format_2dp(r.pwi_per_paper),
                    &r.pwi_per_coauthor.map(format_2dp).unwrap_or_default(),
                ])?;
            }
            wtr.flush()?;
            Ok(())
        }
    }
}

pub fn write_correlation<W: Write>(report: &CorrelationReport, format: OutputFormat, out: W) -> Result<()> {
    match format {
        OutputFormat::Json => write_json(out, report),
        OutputFormat::Csv => {
            let mut wtr = csv::Writer::from_writer(out);
            wtr.write_record(["threshold", "rho", "authors"])?;
            for r in &report.rows {
                wtr.write_record([r.threshold.to_string(), opt(r.rho), r.n_authors.to_string()])?;
            }
            wtr.flush()?;
            Ok(())
        }
    }
}

/// Regression table laid out one row per term; model-level values ride on
/// the `constant` row.
pub fn write_regression<W: Write>(report: &RegressionReport, format: OutputFormat, out: W) -> Result<()> {
    match format {
        OutputFormat::Json => write_json(out, report),
        OutputFormat::Csv => {
            let mut wtr = csv::Writer::from_writer(out);
            wtr.write_record(["term", "coefficient", "beta", "semipartial_r2", "r2", "f", "n"])?;
            wtr.write_record([
                "constant".to_string(),
                report.constant.to_string(),
                String::new(),
                String::new(),
                report.r2.to_string(),
                opt(report.f_statistic),
                report.n.to_string(),
            ])?;
            for t in &report.terms {
                wtr.write_record([
                    t.name.clone(),
                    t.coefficient.to_string(),
                    t.beta.to_string(),
                    t.semipartial_r2.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                ])?;
            }
            wtr.flush()?;
            Ok(())
        }
    }
}

pub fn write_distribution<W: Write>(export: &DistributionExport, format: OutputFormat, out: W) -> Result<()> {
    match format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Series<'a> {
                laureates: &'a [CdfPoint],
                non_laureates: &'a [CdfPoint],
            }
            write_json(
                out,
                &Series {
                    laureates: &export.laureates,
                    non_laureates: &export.non_laureates,
                },
            )
        }
        OutputFormat::Csv => {
            let mut wtr = csv::Writer::from_writer(out);
            wtr.write_record(["group", "pwi", "cum_prob"])?;
            for (group, series) in [("laureate", &export.laureates), ("non-laureate", &export.non_laureates)] {
                for p in series {
                    wtr.write_record([group.to_string(), p.pwi.to_string(), p.cum_prob.to_string()])?;
                }
            }
            wtr.flush()?;
            Ok(())
        }
    }
}
