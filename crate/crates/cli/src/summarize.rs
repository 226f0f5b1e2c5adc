//! The `report` command: re-read a check/sweep artifact (CSV or JSON) and
//! summarize violations per relation.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::CliError;

#[derive(Clone, Debug, Default)]
pub struct RelationStats {
    pub rows: u64,
    pub violations: u64,
    pub min_residual: f64,
}

#[derive(Debug, Default)]
pub struct ArtifactSummary {
    pub per_relation: BTreeMap<String, RelationStats>,
}

impl ArtifactSummary {
    pub fn violations(&self) -> u64 {
        self.per_relation.values().map(|s| s.violations).sum()
    }

    pub fn lines(&self) -> Vec<String> {
        self.per_relation
            .iter()
            .map(|(rel, s)| {
                format!(
                    "report relation={rel} rows={} violations={} min_residual={:e}",
                    s.rows, s.violations, s.min_residual
                )
            })
            .collect()
    }

    fn record(&mut self, relation: &str, residual: f64, satisfied: bool) {
        let entry = self
            .per_relation
            .entry(relation.to_string())
            .or_insert_with(|| RelationStats {
                rows: 0,
                violations: 0,
                min_residual: f64::INFINITY,
            });
        entry.rows += 1;
        if !satisfied {
            entry.violations += 1;
        }
        entry.min_residual = entry.min_residual.min(residual);
    }
}

pub fn summarize_file(path: &Path) -> Result<ArtifactSummary, CliError> {
    let content = fs::read_to_string(path)?;
    let trimmed = content.trim_start();
    if trimmed.starts_with('{') {
        summarize_json(&content)
    } else {
        summarize_csv(&content)
    }
}

fn summarize_json(content: &str) -> Result<ArtifactSummary, CliError> {
    let doc: serde_json::Value =
        serde_json::from_str(content).map_err(|e| CliError::usage(format!("invalid json: {e}")))?;
    let rows = doc["rows"]
        .as_array()
        .ok_or_else(|| CliError::usage("json artifact has no rows array"))?;
    let mut summary = ArtifactSummary::default();
    let missing = |field: &str| {
        CliError::usage(format!(
            "row without '{field}'; report reads check/sweep artifacts (example tables have no relation verdicts)"
        ))
    };
    for row in rows {
        let relation = row["relation"]
            .as_str()
            .ok_or_else(|| missing("relation"))?;
        let residual = row["residual"]
            .as_f64()
            .ok_or_else(|| missing("residual"))?;
        let satisfied = row["satisfied"]
            .as_bool()
            .ok_or_else(|| missing("satisfied"))?;
        summary.record(relation, residual, satisfied);
    }
    Ok(summary)
}

fn summarize_csv(content: &str) -> Result<ArtifactSummary, CliError> {
    let mut lines = content.lines().filter(|l| !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| CliError::usage("empty artifact"))?;
    let columns: Vec<&str> = header.split(',').collect();
    let col = |name: &str| -> Result<usize, CliError> {
        columns.iter().position(|c| *c == name).ok_or_else(|| {
            CliError::usage(format!(
                "artifact has no '{name}' column; report reads check/sweep artifacts (example tables have no relation verdicts)"
            ))
        })
    };
    let rel_idx = col("relation")?;
    let res_idx = col("residual")?;
    let sat_idx = col("satisfied")?;
    let mut summary = ArtifactSummary::default();
    for (line_no, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != columns.len() {
            return Err(CliError::usage(format!(
                "row {} has {} fields, header has {}",
                line_no + 2,
                fields.len(),
                columns.len()
            )));
        }
        let residual: f64 = fields[res_idx]
            .parse()
            .map_err(|_| CliError::usage(format!("bad residual on row {}", line_no + 2)))?;
        let satisfied = fields[sat_idx] == "true";
        summary.record(fields[rel_idx], residual, satisfied);
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_summary() {
        let csv = "\
# duality-lab v0.1.0 schema=1
relation,trial,residual,satisfied
th1,0,1.0e-3,true
th1,1,-2.0e-8,false
cor1,0,1.0e-12,true
";
        let s = summarize_csv(csv).unwrap();
        assert_eq!(s.violations(), 1);
        assert_eq!(s.per_relation["th1"].rows, 2);
        assert!((s.per_relation["th1"].min_residual + 2.0e-8).abs() < 1e-20);
        assert_eq!(s.per_relation["cor1"].violations, 0);
    }

    #[test]
    fn json_summary() {
        let json = r#"{"rows":[
            {"relation":"th2","residual":0.5,"satisfied":true},
            {"relation":"th2","residual":-0.1,"satisfied":false}
        ]}"#;
        let s = summarize_json(json).unwrap();
        assert_eq!(s.violations(), 1);
        assert_eq!(s.per_relation["th2"].rows, 2);
    }

    #[test]
    fn malformed_artifacts_rejected() {
        assert!(summarize_csv("").is_err());
        assert!(summarize_csv("a,b\n1").is_err());
        assert!(summarize_json("{}").is_err());
    }
}
