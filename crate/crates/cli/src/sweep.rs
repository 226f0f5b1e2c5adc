//! The `sweep` command: evaluate one family's relation over a parameter grid
//! and emit a plot-ready row of report components per grid point.

use duality_core::interferometer::DetectorConfig;
use duality_core::relations::{eval_th1, eval_th3, ComplementarityReport, InputState, PdMode};
use duality_core::states::{example1_state, threepath_example_state, werner};

use crate::error::CliError;
use crate::example::{threepath_detectors, ExampleName};
use crate::output::{Cell, Table};

#[derive(Clone, Debug)]
pub struct GridSpec {
    pub param: String,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl GridSpec {
    /// Parses `param=start:stop:steps`.
    pub fn parse(s: &str) -> Result<GridSpec, CliError> {
        let bad = || CliError::usage(format!("bad --grid '{s}'; expected param=start:stop:steps"));
        let (param, rest) = s.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let start: f64 = parts[0].parse().map_err(|_| bad())?;
        let stop: f64 = parts[1].parse().map_err(|_| bad())?;
        let steps: usize = parts[2].parse().map_err(|_| bad())?;
        if steps == 0 || !start.is_finite() || !stop.is_finite() {
            return Err(bad());
        }
        Ok(GridSpec {
            param: param.trim().to_string(),
            start,
            stop,
            steps,
        })
    }

    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        (0..self.steps)
            .map(|i| self.start + (self.stop - self.start) * i as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

/// Parses `param=value`.
pub fn parse_fix(s: &str) -> Result<(String, f64), CliError> {
    let bad = || CliError::usage(format!("bad --fix '{s}'; expected param=value"));
    let (param, value) = s.split_once('=').ok_or_else(bad)?;
    let value: f64 = value.parse().map_err(|_| bad())?;
    if !value.is_finite() {
        return Err(bad());
    }
    Ok((param.trim().to_string(), value))
}

fn family_params(family: ExampleName) -> &'static [&'static str] {
    match family {
        ExampleName::Example1 => &["p", "c_u", "c_d"],
        ExampleName::Werner => &["p", "x"],
        ExampleName::Threepath => &["p", "q"],
    }
}

fn evaluate(
    family: ExampleName,
    values: &[(String, f64)],
) -> Result<ComplementarityReport, CliError> {
    let get = |name: &str| -> f64 {
        values
            .iter()
            .find(|(p, _)| p == name)
            .map(|(_, v)| *v)
            .expect("parameter resolved during validation")
    };
    let report = match family {
        ExampleName::Example1 => {
            let psi = example1_state(get("p"), get("c_u"), 0.0)?;
            let det = DetectorConfig::uniform_overlap(2, get("c_d"))?;
            eval_th3(&InputState::pure(psi), &det, PdMode::UpperBound)?
        }
        ExampleName::Werner => {
            let rho = werner(get("p"))?;
            let x = get("x");
            let det = DetectorConfig::uniform_overlap(2, x * x)?;
            eval_th3(&InputState::mixed(rho), &det, PdMode::UpperBound)?
        }
        ExampleName::Threepath => {
            let psi = threepath_example_state(get("p"), get("q"))?;
            eval_th1(
                &InputState::pure(psi),
                &threepath_detectors(),
                PdMode::UpperBound,
            )?
        }
    };
    Ok(report)
}

#[derive(Debug)]
pub struct SweepOutcome {
    pub table: Table,
    pub violations: u64,
}

pub fn run_sweep(
    family: ExampleName,
    grids: &[GridSpec],
    fixed: &[(String, f64)],
) -> Result<SweepOutcome, CliError> {
    let params = family_params(family);
    for spec in grids {
        if !params.contains(&spec.param.as_str()) {
            return Err(CliError::usage(format!(
                "unknown sweep parameter '{}'; this family has {}",
                spec.param,
                params.join(", ")
            )));
        }
    }
    for (name, _) in fixed {
        if !params.contains(&name.as_str()) {
            return Err(CliError::usage(format!(
                "unknown fixed parameter '{name}'; this family has {}",
                params.join(", ")
            )));
        }
    }
    let grids: Vec<GridSpec> = if grids.is_empty() {
        // default: sweep every unfixed parameter over [0, 1]
        params
            .iter()
            .filter(|p| !fixed.iter().any(|(n, _)| n == *p))
            .map(|p| GridSpec {
                param: p.to_string(),
                start: 0.0,
                stop: 1.0,
                steps: 21,
            })
            .collect()
    } else {
        grids.to_vec()
    };
    for spec in &grids {
        if fixed.iter().any(|(n, _)| n == &spec.param) {
            return Err(CliError::usage(format!(
                "parameter '{}' is both swept and fixed",
                spec.param
            )));
        }
    }

    // every family parameter must be either swept or pinned; default 0.5
    let mut resolved_fixed: Vec<(String, f64)> = fixed.to_vec();
    for p in params {
        let covered =
            grids.iter().any(|g| g.param == *p) || resolved_fixed.iter().any(|(n, _)| n == p);
        if !covered {
            resolved_fixed.push((p.to_string(), 0.5));
        }
    }

    let mut columns: Vec<String> = grids.iter().map(|g| g.param.clone()).collect();
    columns.extend(resolved_fixed.iter().map(|(n, _)| n.clone()));
    columns.extend(
        duality_core::relations::csv_columns()
            .iter()
            .map(|s| s.to_string()),
    );
    let mut table = Table::new(columns);
    let mut violations = 0u64;

    let axes: Vec<Vec<f64>> = grids.iter().map(|g| g.points()).collect();
    let total: usize = axes.iter().map(|a| a.len()).product();
    for flat in 0..total {
        let mut remainder = flat;
        let mut values: Vec<(String, f64)> = Vec::with_capacity(params.len());
        // last axis varies fastest
        let mut coords = vec![0usize; axes.len()];
        for ax in (0..axes.len()).rev() {
            coords[ax] = remainder % axes[ax].len();
            remainder /= axes[ax].len();
        }
        for (ax, grid) in grids.iter().enumerate() {
            values.push((grid.param.clone(), axes[ax][coords[ax]]));
        }
        values.extend(resolved_fixed.iter().cloned());

        let report = evaluate(family, &values)?;
        if !report.satisfied {
            violations += 1;
        }
        let mut row: Vec<Cell> = values.iter().map(|(_, v)| Cell::Float(*v)).collect();
        row.extend(
            duality_core::relations::csv_fields(&report)
                .into_iter()
                .map(|s| {
                    if s.is_empty() {
                        Cell::Empty
                    } else {
                        Cell::Str(s)
                    }
                }),
        );
        table.push(row);
    }
    Ok(SweepOutcome { table, violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spec_parsing() {
        let g = GridSpec::parse("p=0:1:11").unwrap();
        assert_eq!(g.param, "p");
        assert_eq!(g.points().len(), 11);
        assert!((g.points()[10] - 1.0).abs() < 1e-15);
        assert!(GridSpec::parse("p=0:1").is_err());
        assert!(GridSpec::parse("p=0:1:0").is_err());
    }

    #[test]
    fn werner_sweep_residual_monotone_in_p_for_fixed_x() {
        let grids = vec![GridSpec::parse("p=0.34:1:34").unwrap()];
        let fixed = vec![("x".to_string(), 0.5)];
        let out = run_sweep(ExampleName::Werner, &grids, &fixed).unwrap();
        assert_eq!(out.violations, 0);
        let residual_col = out
            .table
            .columns
            .iter()
            .position(|c| c == "residual")
            .unwrap();
        let mut last = f64::INFINITY;
        for row in &out.table.rows {
            let r: f64 = match &row[residual_col] {
                Cell::Str(s) => s.parse().unwrap(),
                Cell::Float(x) => *x,
                other => panic!("unexpected cell {other:?}"),
            };
            assert!(r <= last + 1e-12);
            last = r;
        }
    }

    #[test]
    fn example1_sweep_lhs_decreases_in_cu_and_peaks_at_half() {
        // fixed c_d = 1/2, sweep p and c_u
        let grids = vec![
            GridSpec::parse("p=0:1:21").unwrap(),
            GridSpec::parse("c_u=0:1:11").unwrap(),
        ];
        let fixed = vec![("c_d".to_string(), 0.5)];
        let out = run_sweep(ExampleName::Example1, &grids, &fixed).unwrap();
        assert_eq!(out.violations, 0);
        let lhs_col = out.table.columns.iter().position(|c| c == "lhs").unwrap();
        let lhs_at = |p_idx: usize, cu_idx: usize| -> f64 {
            match &out.table.rows[p_idx * 11 + cu_idx][lhs_col] {
                Cell::Str(s) => s.parse().unwrap(),
                Cell::Float(x) => *x,
                _ => panic!(),
            }
        };
        // decreasing in c_u at fixed p
        for p_idx in 0..21 {
            for cu_idx in 1..11 {
                assert!(lhs_at(p_idx, cu_idx) <= lhs_at(p_idx, cu_idx - 1) + 1e-12);
            }
        }
        // symmetric in p about 1/2 and maximal there (p grid is symmetric)
        for cu_idx in 0..11 {
            for p_idx in 0..21 {
                assert!(
                    (lhs_at(p_idx, cu_idx) - lhs_at(20 - p_idx, cu_idx)).abs() < 1e-12,
                    "symmetry at p index {p_idx}"
                );
                assert!(lhs_at(p_idx, cu_idx) <= lhs_at(10, cu_idx) + 1e-12);
            }
        }
    }

    #[test]
    fn unknown_parameters_rejected() {
        assert!(run_sweep(
            ExampleName::Werner,
            &[GridSpec::parse("q=0:1:5").unwrap()],
            &[]
        )
        .is_err());
        assert!(run_sweep(ExampleName::Werner, &[], &[("zz".into(), 1.0)]).is_err());
    }
}
