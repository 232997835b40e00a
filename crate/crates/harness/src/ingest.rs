//! Panel ingestion from CSV.
//!
//! The normalized schema is one row per (event, expert) pair with columns
//! `event_id,expert_id,report,outcome`. Events keep their order of first
//! appearance (inputs are assumed chronological), experts likewise. Experts
//! missing any event are dropped, so the resulting panel is always complete.
//! The raw importer reads the same shape under arbitrary column names and
//! re-emits the normalized form.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use crate::error::{HarnessError, Result};
use wagerlearn_core::{probabilities, ForecastPanel, Outcome};

pub const NORMALIZED_HEADER: [&str; 4] = ["event_id", "expert_id", "report", "outcome"];

/// Column names to read a raw file under; defaults to the normalized names.
#[derive(Clone, Debug)]
pub struct ColumnMap {
    pub event: String,
    pub expert: String,
    pub report: String,
    pub outcome: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        ColumnMap {
            event: "event_id".into(),
            expert: "expert_id".into(),
            report: "report".into(),
            outcome: "outcome".into(),
        }
    }
}

/// What ingestion kept and what it dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IngestReport {
    pub event_ids: Vec<String>,
    pub experts_kept: usize,
    pub dropped_experts: Vec<String>,
}

struct RawRow {
    event: String,
    expert: String,
    report: f64,
    outcome: u8,
    line: u64,
}

fn read_rows(path: &Path, map: &ColumnMap) -> Result<Vec<RawRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let col = |name: &str| -> Result<usize> {
        headers.iter().position(|h| h == name).ok_or_else(|| {
            HarnessError::parse(path, 1, format!("missing column {name:?} in header"))
        })
    };
    let (ci_event, ci_expert, ci_report, ci_outcome) = (
        col(&map.event)?,
        col(&map.expert)?,
        col(&map.report)?,
        col(&map.outcome)?,
    );
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |idx: usize| -> Result<&str> {
            record.get(idx).ok_or_else(|| {
                HarnessError::parse(path, line, format!("row has only {} fields", record.len()))
            })
        };
        let report_text = field(ci_report)?;
        let report: f64 = report_text.parse().map_err(|_| {
            HarnessError::parse(path, line, format!("report {report_text:?} is not a number"))
        })?;
        if !(0.0..=1.0).contains(&report) {
            return Err(HarnessError::parse(
                path,
                line,
                format!("report {report} lies outside [0, 1]"),
            ));
        }
        let outcome_text = field(ci_outcome)?;
        let outcome = match outcome_text {
            "0" => 0,
            "1" => 1,
            other => {
                return Err(HarnessError::parse(
                    path,
                    line,
                    format!("outcome {other:?} must be 0 or 1"),
                ))
            }
        };
        rows.push(RawRow {
            event: field(ci_event)?.to_string(),
            expert: field(ci_expert)?.to_string(),
            report,
            outcome,
            line,
        });
    }
    Ok(rows)
}

fn csv_error(path: &Path, err: csv::Error) -> HarnessError {
    let line = match err.position() {
        Some(p) => p.line(),
        None => 0,
    };
    if err.is_io_error() {
        match err.into_kind() {
            csv::ErrorKind::Io(io) => HarnessError::io(path, io),
            _ => unreachable!("is_io_error guarantees an Io kind"),
        }
    } else {
        HarnessError::parse(path, line, "malformed CSV record")
    }
}

fn assemble(path: &Path, rows: Vec<RawRow>) -> Result<(ForecastPanel, IngestReport)> {
    let mut event_ids: Vec<String> = Vec::new();
    let mut event_index: HashMap<String, usize> = HashMap::new();
    let mut outcomes: Vec<u8> = Vec::new();
    let mut expert_ids: Vec<String> = Vec::new();
    let mut expert_index: HashMap<String, usize> = HashMap::new();
    let mut reports: Vec<HashMap<usize, f64>> = Vec::new();
    for row in rows {
        let &mut t = event_index.entry(row.event.clone()).or_insert_with(|| {
            event_ids.push(row.event.clone());
            outcomes.push(row.outcome);
            event_ids.len() - 1
        });
        if outcomes[t] != row.outcome {
            return Err(HarnessError::integrity(
                path,
                format!(
                    "event {:?} has conflicting outcomes {} and {} (line {})",
                    row.event, outcomes[t], row.outcome, row.line
                ),
            ));
        }
        let &mut i = expert_index.entry(row.expert.clone()).or_insert_with(|| {
            expert_ids.push(row.expert.clone());
            reports.push(HashMap::new());
            expert_ids.len() - 1
        });
        if reports[i].insert(t, row.report).is_some() {
            return Err(HarnessError::integrity(
                path,
                format!(
                    "expert {:?} reports twice on event {:?} (line {})",
                    row.expert, row.event, row.line
                ),
            ));
        }
    }
    if event_ids.is_empty() {
        return Err(HarnessError::integrity(path, "no data rows"));
    }
    let t_max = event_ids.len();
    let mut kept: Vec<usize> = Vec::new();
    let mut dropped: Vec<String> = Vec::new();
    for (i, id) in expert_ids.iter().enumerate() {
        if reports[i].len() == t_max {
            kept.push(i);
        } else {
            dropped.push(id.clone());
        }
    }
    if kept.is_empty() {
        return Err(HarnessError::integrity(
            path,
            "no expert reports on every event",
        ));
    }
    let prob_rows = (0..t_max)
        .map(|t| {
            let row: Vec<f64> = kept.iter().map(|&i| reports[i][&t]).collect();
            probabilities(&row)
        })
        .collect::<wagerlearn_core::Result<Vec<_>>>()?;
    let outcomes = outcomes
        .iter()
        .map(|&o| Outcome::from_u8(o))
        .collect::<wagerlearn_core::Result<Vec<_>>>()?;
    let ids: Vec<String> = kept.iter().map(|&i| expert_ids[i].clone()).collect();
    let panel = ForecastPanel::new(ids, prob_rows, outcomes)?;
    Ok((
        panel,
        IngestReport {
            event_ids,
            experts_kept: kept.len(),
            dropped_experts: dropped,
        },
    ))
}

/// Loads a normalized panel CSV.
pub fn ingest_panel(path: impl AsRef<Path>) -> Result<(ForecastPanel, IngestReport)> {
    let path = path.as_ref();
    let rows = read_rows(path, &ColumnMap::default())?;
    assemble(path, rows)
}

/// Loads a raw CSV under the given column names.
pub fn import_raw(
    path: impl AsRef<Path>,
    map: &ColumnMap,
) -> Result<(ForecastPanel, IngestReport)> {
    let path = path.as_ref();
    let rows = read_rows(path, map)?;
    assemble(path, rows)
}

/// Writes a panel in the normalized schema, event-major.
pub fn write_normalized(
    panel: &ForecastPanel,
    event_ids: &[String],
    path: impl AsRef<Path>,
) -> Result<()> {
    let path: PathBuf = path.as_ref().into();
    if event_ids.len() != panel.horizon() {
        return Err(HarnessError::validation(format!(
            "{} event ids for horizon {}",
            event_ids.len(),
            panel.horizon()
        )));
    }
    let mut writer = csv::Writer::from_path(&path).map_err(|e| csv_error(&path, e))?;
    writer
        .write_record(NORMALIZED_HEADER)
        .map_err(|e| csv_error(&path, e))?;
    for (t, event_id) in event_ids.iter().enumerate() {
        for (i, id) in panel.expert_ids().iter().enumerate() {
            writer
                .write_record([
                    event_id.as_str(),
                    id.as_str(),
                    &panel.report(t, i).value().to_string(),
                    if panel.outcome(t).as_u8() == 1 { "1" } else { "0" },
                ])
                .map_err(|e| csv_error(&path, e))?;
        }
    }
    writer.flush().map_err(|e| HarnessError::io(&path, e))?;
    Ok(())
}

/// Generated event labels for panels that were simulated rather than read.
pub fn generated_event_ids(horizon: usize) -> Vec<String> {
    (1..=horizon).map(|t| format!("event-{t}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn complete_panel_round_trips() {
        let f = write_temp(
            "event_id,expert_id,report,outcome\n\
             g1,a,0.7,1\n\
             g1,b,0.4,1\n\
             g2,a,0.2,0\n\
             g2,b,0.5,0\n",
        );
        let (panel, report) = ingest_panel(f.path()).unwrap();
        assert_eq!(panel.num_experts(), 2);
        assert_eq!(panel.horizon(), 2);
        assert_eq!(report.event_ids, vec!["g1", "g2"]);
        assert!(report.dropped_experts.is_empty());
        assert_eq!(panel.report(0, 0).value(), 0.7);
        assert_eq!(panel.outcome(1).as_u8(), 0);
    }

    #[test]
    fn incomplete_experts_are_dropped_and_counted() {
        let f = write_temp(
            "event_id,expert_id,report,outcome\n\
             g1,a,0.7,1\n\
             g1,b,0.4,1\n\
             g1,c,0.9,1\n\
             g2,a,0.2,0\n\
             g2,b,0.5,0\n",
        );
        let (panel, report) = ingest_panel(f.path()).unwrap();
        assert_eq!(panel.num_experts(), 2);
        assert_eq!(report.dropped_experts, vec!["c"]);
        assert_eq!(panel.expert_ids(), ["a", "b"]);
    }

    #[test]
    fn conflicting_outcomes_are_an_integrity_error() {
        let f = write_temp(
            "event_id,expert_id,report,outcome\n\
             g1,a,0.7,1\n\
             g1,b,0.4,0\n",
        );
        let err = ingest_panel(f.path()).unwrap_err();
        assert!(matches!(err, HarnessError::Integrity { .. }), "{err}");
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn bad_numbers_are_parse_errors_with_line_numbers() {
        let f = write_temp(
            "event_id,expert_id,report,outcome\n\
             g1,a,0.7,1\n\
             g1,b,huh,1\n",
        );
        match ingest_panel(f.path()).unwrap_err() {
            HarnessError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other}"),
        }
        let f = write_temp("event_id,expert_id,report,outcome\ng1,a,1.5,1\n");
        assert!(matches!(
            ingest_panel(f.path()).unwrap_err(),
            HarnessError::Parse { .. }
        ));
        let f = write_temp("event_id,expert_id,report,outcome\ng1,a,0.5,2\n");
        assert!(matches!(
            ingest_panel(f.path()).unwrap_err(),
            HarnessError::Parse { .. }
        ));
    }

    #[test]
    fn duplicate_reports_are_an_integrity_error() {
        let f = write_temp(
            "event_id,expert_id,report,outcome\n\
             g1,a,0.7,1\n\
             g1,a,0.6,1\n",
        );
        assert!(matches!(
            ingest_panel(f.path()).unwrap_err(),
            HarnessError::Integrity { .. }
        ));
    }

    #[test]
    fn empty_file_and_fully_incomplete_files_error() {
        let f = write_temp("event_id,expert_id,report,outcome\n");
        assert!(matches!(
            ingest_panel(f.path()).unwrap_err(),
            HarnessError::Integrity { .. }
        ));
        let f = write_temp(
            "event_id,expert_id,report,outcome\n\
             g1,a,0.7,1\n\
             g2,b,0.5,0\n",
        );
        assert!(matches!(
            ingest_panel(f.path()).unwrap_err(),
            HarnessError::Integrity { .. }
        ));
    }

    #[test]
    fn missing_column_is_reported_by_name() {
        let f = write_temp("event_id,expert_id,prob,outcome\ng1,a,0.5,1\n");
        let err = ingest_panel(f.path()).unwrap_err();
        assert!(err.to_string().contains("report"), "{err}");
    }

    #[test]
    fn raw_import_maps_column_names() {
        let f = write_temp(
            "game,forecaster,prob,result,extra\n\
             g1,a,0.7,1,x\n\
             g1,b,0.4,1,y\n",
        );
        let map = ColumnMap {
            event: "game".into(),
            expert: "forecaster".into(),
            report: "prob".into(),
            outcome: "result".into(),
        };
        let (panel, _) = import_raw(f.path(), &map).unwrap();
        assert_eq!(panel.num_experts(), 2);
        assert_eq!(panel.report(0, 1).value(), 0.4);
    }

    #[test]
    fn normalized_write_round_trips() {
        let f = write_temp(
            "event_id,expert_id,report,outcome\n\
             g1,a,0.7,1\n\
             g1,b,0.4,1\n\
             g2,a,0.25,0\n\
             g2,b,0.075,0\n",
        );
        let (panel, report) = ingest_panel(f.path()).unwrap();
        let out = tempfile::NamedTempFile::new().unwrap();
        write_normalized(&panel, &report.event_ids, out.path()).unwrap();
        let (again, report2) = ingest_panel(out.path()).unwrap();
        assert_eq!(report.event_ids, report2.event_ids);
        assert_eq!(panel.expert_ids(), again.expert_ids());
        for t in 0..panel.horizon() {
            for i in 0..panel.num_experts() {
                assert_eq!(panel.report(t, i), again.report(t, i));
            }
        }
    }
}
