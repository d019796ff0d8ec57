//! Boundary statistic tables as JSON or CSV.

use num_bigint::BigUint;
use serde::Serialize;
use sixvertex::closedform::{a_total, refined_row};
use sixvertex::enumerate::CountTable;
use sixvertex::{Error, Result};

use crate::parallel::par_stats_with_ceiling;

/// Largest `n` served from closed forms alone.
pub const CLOSED_FORM_MAX_N: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Stat {
    Total,
    Refined,
    TopBottom,
    TopLeft,
}

impl Stat {
    fn name(self) -> &'static str {
        match self {
            Stat::Total => "total",
            Stat::Refined => "refined",
            Stat::TopBottom => "top-bottom",
            Stat::TopLeft => "top-left",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountOutput {
    pub text: String,
    /// `Some` when an enumerated and a closed-form value were both available.
    pub agrees: Option<bool>,
    /// Side information for the CSV form, which has no room for it.
    pub note: Option<String>,
}

#[derive(Serialize)]
struct TotalJson {
    n: usize,
    stat: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    enumerated: Option<String>,
    closed_form: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    agrees: Option<bool>,
}

#[derive(Serialize)]
struct RefinedRow {
    r: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    enumerated: Option<String>,
    closed_form: String,
}

#[derive(Serialize)]
struct RefinedJson {
    n: usize,
    stat: &'static str,
    rows: Vec<RefinedRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agrees: Option<bool>,
}

#[derive(Serialize)]
struct MatrixJson {
    n: usize,
    stat: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    corner: Option<String>,
    /// `table[r-1][r̃-1]`
    table: Vec<Vec<String>>,
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn json_text(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn matrix(table: &CountTable) -> Vec<Vec<String>> {
    let n = table.n();
    (1..=n)
        .map(|r| (1..=n).map(|rt| table.at2(r, rt).to_string()).collect())
        .collect()
}

fn long_rows(table: &CountTable, from: usize) -> Vec<Vec<String>> {
    let n = table.n();
    let mut rows = Vec::new();
    for r in from..=n {
        for rt in from..=n {
            rows.push(vec![r.to_string(), rt.to_string(), table.at2(r, rt).to_string()]);
        }
    }
    rows
}

pub fn cmd_count(n: usize, stat: Stat, format: Format, ceiling: usize) -> Result<CountOutput> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be at least 1".into()));
    }
    let enumerable = n <= ceiling;
    let closed_form_only = matches!(stat, Stat::Total | Stat::Refined);
    if !enumerable && !(closed_form_only && n <= CLOSED_FORM_MAX_N) {
        return Err(Error::SizeTooLarge {
            n,
            ceiling: if closed_form_only { CLOSED_FORM_MAX_N } else { ceiling },
        });
    }
    let stats = if enumerable {
        Some(par_stats_with_ceiling(n, ceiling)?)
    } else {
        None
    };
    let name = stat.name();
    let out = match stat {
        Stat::Total => {
            let closed = a_total(n)?;
            let enumerated = stats.as_ref().map(|s| BigUint::from(s.total));
            let agrees = enumerated.as_ref().map(|e| *e == closed);
            let text = match format {
                Format::Json => json_text(&TotalJson {
                    n,
                    stat: name,
                    enumerated: enumerated.as_ref().map(|e| e.to_string()),
                    closed_form: closed.to_string(),
                    agrees,
                }),
                Format::Csv => {
                    let value = enumerated.unwrap_or(closed);
                    csv_text(&["n", "count"], [vec![n.to_string(), value.to_string()]])
                }
            };
            CountOutput {
                text,
                agrees,
                note: None,
            }
        }
        Stat::Refined => {
            let closed = refined_row(n)?;
            let enumerated = stats.as_ref().map(|s| s.refined_top());
            let agrees = enumerated.as_ref().map(|t| (1..=n).all(|r| t.at(r) == closed[r - 1]));
            let text = match format {
                Format::Json => json_text(&RefinedJson {
                    n,
                    stat: name,
                    rows: (1..=n)
                        .map(|r| RefinedRow {
                            r,
                            enumerated: enumerated.as_ref().map(|t| t.at(r).to_string()),
                            closed_form: closed[r - 1].to_string(),
                        })
                        .collect(),
                    agrees,
                }),
                Format::Csv => csv_text(
                    &["r", "count"],
                    (1..=n).map(|r| {
                        let v = enumerated.as_ref().map_or_else(|| closed[r - 1].clone(), |t| t.at(r));
                        vec![r.to_string(), v.to_string()]
                    }),
                ),
            };
            CountOutput {
                text,
                agrees,
                note: None,
            }
        }
        Stat::TopBottom => {
            let table = stats.expect("enumerable").double_top_bottom();
            let text = match format {
                Format::Json => json_text(&MatrixJson {
                    n,
                    stat: name,
                    corner: None,
                    table: matrix(&table),
                }),
                Format::Csv => csv_text(&["r", "rt", "count"], long_rows(&table, 1)),
            };
            CountOutput {
                text,
                agrees: None,
                note: None,
            }
        }
        Stat::TopLeft => {
            let (corner, table) = stats.expect("enumerable").double_top_left();
            let (text, note) = match format {
                Format::Json => (
                    json_text(&MatrixJson {
                        n,
                        stat: name,
                        corner: Some(corner.to_string()),
                        table: matrix(&table),
                    }),
                    None,
                ),
                Format::Csv => (
                    csv_text(&["r", "rt", "count"], long_rows(&table, 2)),
                    Some(format!("corner: {corner}")),
                ),
            };
            CountOutput {
                text,
                agrees: None,
                note,
            }
        }
    };
    Ok(out)
}
