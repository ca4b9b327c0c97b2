//! Table rendering, output destinations and the metadata sidecar.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use bdlab_core::baez_duarte::{CyclicityReport, DistanceReport, MoebiusResidualReport, PointwiseReport};
use bdlab_core::dirichlet::{DecompositionSummary, EnergyCrossCheck, GoldenPairReport};
use bdlab_core::hardy::IdentityReport;
use bdlab_core::numtheory::CACHE_DIR_ENV;
use bdlab_core::pdcp::{RangeExclusionReport, SpanDistanceReport};
use bdlab_core::CoeffSeq;
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::{Common, Failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Rows for CSV plus the structured value used for JSON.
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    json: Value,
}

fn f(x: f64) -> String {
    format!("{x:e}")
}

fn json_of<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

impl Table {
    pub fn from_seq(s: &CoeffSeq) -> Self {
        let rows = s.coeffs().iter().enumerate().map(|(i, c)| vec![i.to_string(), f(*c)]).collect();
        Table { header: vec!["index", "value"], rows, json: json_of(&s.to_json()) }
    }

    pub fn identities(reports: &[IdentityReport]) -> Self {
        let rows = reports
            .iter()
            .map(|r| {
                vec![
                    r.identity.clone(),
                    r.params.to_string(),
                    r.n_trunc.to_string(),
                    r.seed.to_string(),
                    f(r.sup_discrepancy),
                    f(r.weighted_discrepancy),
                    r.reliable_range[0].to_string(),
                    r.reliable_range[1].to_string(),
                    f(r.certificate),
                    r.pass.to_string(),
                ]
            })
            .collect();
        Table {
            header: vec![
                "identity",
                "params",
                "N",
                "seed",
                "sup_discrepancy",
                "weighted_discrepancy",
                "reliable_from",
                "reliable_to",
                "certificate",
                "pass",
            ],
            rows,
            json: json_of(&reports),
        }
    }

    pub fn distances(reports: &[DistanceReport]) -> Self {
        let rows = reports
            .iter()
            .map(|r| {
                vec![
                    r.k_max.to_string(),
                    r.n_trunc.to_string(),
                    f(r.distance),
                    f(r.regularization),
                    f(r.condition_estimate),
                    f(r.truncation_bound),
                ]
            })
            .collect();
        Table {
            header: vec!["K", "N", "distance", "ridge", "condition", "truncation_bound"],
            rows,
            json: json_of(&reports),
        }
    }

    pub fn moebius(reports: &[MoebiusResidualReport]) -> Self {
        let rows = reports
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.n_trunc.to_string(),
                    f(r.residual_norm),
                    f(r.phi_bound),
                    f(r.m1),
                    f(r.m2),
                ]
            })
            .collect();
        Table {
            header: vec!["n", "N", "residual_norm", "phi_bound", "M1", "M2"],
            rows,
            json: json_of(&reports),
        }
    }

    pub fn dirichlet(rows_in: &[(u64, DecompositionSummary, EnergyCrossCheck)]) -> Self {
        let rows = rows_in
            .iter()
            .map(|(k, s, c)| {
                vec![
                    k.to_string(),
                    s.n_trunc.to_string(),
                    f(s.a.re),
                    f(s.a.im),
                    f(s.energy),
                    f(s.residual),
                    f(c.bergman_norm2),
                    f(c.relative_difference),
                ]
            })
            .collect();
        let json = Value::Array(
            rows_in
                .iter()
                .map(|(k, s, c)| json!({ "k": k, "decomposition": s, "crosscheck": c }))
                .collect(),
        );
        Table {
            header: vec!["k", "N", "a_re", "a_im", "energy", "residual", "bergman_norm2", "relative_difference"],
            rows,
            json,
        }
    }

    pub fn golden(r: &GoldenPairReport) -> Self {
        Table {
            header: vec!["grid", "max_deviation", "a_at_zero", "pass"],
            rows: vec![vec![r.grid.to_string(), f(r.max_deviation), f(r.a_at_zero), r.pass.to_string()]],
            json: json_of(r),
        }
    }

    pub fn samples(samples: &[(f64, f64)]) -> Self {
        let rows = samples.iter().map(|(x, v)| vec![f(*x), f(*v)]).collect();
        let json = Value::Array(samples.iter().map(|(x, v)| json!({ "x": x, "value": v })).collect());
        Table { header: vec!["x", "value"], rows, json }
    }

    pub fn spans(reports: &[SpanDistanceReport]) -> Self {
        let rows = reports
            .iter()
            .map(|r| {
                vec![
                    r.n_max.to_string(),
                    r.len.to_string(),
                    f(r.distance),
                    f(r.regularization),
                    f(r.condition_estimate),
                    f(r.truncation_bound),
                ]
            })
            .collect();
        Table {
            header: vec!["n_max", "len", "distance", "ridge", "condition", "truncation_bound"],
            rows,
            json: json_of(&reports),
        }
    }

    pub fn witness(r: &RangeExclusionReport) -> Self {
        let rows = r
            .radii
            .iter()
            .enumerate()
            .map(|(i, rad)| {
                vec![
                    f(*rad),
                    f(r.log_abel[i]),
                    r.log_steps.get(i).map_or_else(String::new, |s| f(*s)),
                    f(r.ims_poly_abel[i]),
                ]
            })
            .collect();
        Table {
            header: vec!["radius", "log_abel", "log_step", "ims_poly_abel"],
            rows,
            json: json_of(r),
        }
    }

    pub fn pointwise(reports: &[PointwiseReport]) -> Self {
        let rows = reports
            .iter()
            .map(|r| {
                vec![
                    f(r.z.re),
                    f(r.z.im),
                    r.n.to_string(),
                    f(r.error),
                    f(r.bound),
                    r.within_bound.to_string(),
                ]
            })
            .collect();
        Table {
            header: vec!["z_re", "z_im", "n", "error", "bound", "within_bound"],
            rows,
            json: json_of(&reports),
        }
    }

    pub fn cyclicity(reports: &[CyclicityReport]) -> Self {
        let rows = reports
            .iter()
            .map(|r| {
                vec![
                    json_of(&r.family).as_str().unwrap_or_default().to_string(),
                    r.n_max.to_string(),
                    r.rank.to_string(),
                    r.kernel_dim.to_string(),
                    f(r.deviation),
                    r.pass.to_string(),
                ]
            })
            .collect();
        Table {
            header: vec!["family", "n_max", "rank", "kernel_dim", "deviation", "pass"],
            rows,
            json: json_of(&reports),
        }
    }

    fn write<W: Write>(&self, format: Format, w: W) -> Result<(), Failure> {
        match format {
            Format::Csv => {
                let mut out = csv::Writer::from_writer(w);
                out.write_record(&self.header).map_err(io_failure)?;
                for row in &self.rows {
                    out.write_record(row).map_err(io_failure)?;
                }
                out.flush()?;
            }
            Format::Json => {
                let mut w = w;
                serde_json::to_writer_pretty(&mut w, &self.json).map_err(io_failure)?;
                writeln!(w)?;
                w.flush()?;
            }
        }
        Ok(())
    }
}

fn io_failure(e: impl std::fmt::Display) -> Failure {
    Failure::Io(e.to_string())
}

/// Directory for cached number-theory tables, from the environment.
pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from)
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Writes the table to `--out` (or stdout) and, for files, the sidecar.
pub fn emit(table: &Table, command: &str, common: &Common, tolerances: Map<String, Value>) -> Result<(), Failure> {
    let Some(out) = &common.out else {
        return table.write(common.format, io::stdout().lock());
    };
    table.write(common.format, BufWriter::new(File::create(out)?))?;
    let meta = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "args": std::env::args().skip(1).collect::<Vec<_>>(),
        "N": common.n_trunc,
        "seed": common.seed,
        "threads": common.threads,
        "format": common.format,
        "rows": table.rows.len(),
        "tolerances": tolerances,
    });
    let mut w = BufWriter::new(File::create(sidecar_path(out))?);
    serde_json::to_writer_pretty(&mut w, &meta).map_err(io_failure)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}
