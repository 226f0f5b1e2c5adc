//! The `check` command: sample random (state, detector) pairs on independent
//! seed streams, evaluate the selected relations, and report violations.

use duality_core::relations::{
    eval_relation, ComplementarityReport, InputState, PdMode, RelationId,
};
use duality_core::sampling::{
    detectors_haar, detectors_two_fixed_overlap, pure_equal_branches, pure_orthonormal_branches,
};
use duality_core::states::{random_mixed_with, random_pure_with, rng_stream, StreamRng};
use duality_core::DetectorConfig;
use rand::Rng;

use crate::error::CliError;
use crate::output::{Cell, Table};
use crate::parallel::parallel_map;

#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub relations: Vec<RelationId>,
    pub n: usize,
    pub memory_dim: usize,
    pub trials: u64,
    pub seed: u64,
    pub pure: bool,
    pub oracle: bool,
    pub rank: Option<usize>,
    pub threads: usize,
}

#[derive(Clone, Debug)]
pub struct RelationSummary {
    pub relation: RelationId,
    pub trials: u64,
    pub violations: u64,
    pub min_residual: f64,
    pub max_abs_residual: f64,
}

impl RelationSummary {
    pub fn line(&self) -> String {
        format!(
            "check relation={} trials={} violations={} min_residual={:e} max_abs_residual={:e}",
            self.relation, self.trials, self.violations, self.min_residual, self.max_abs_residual
        )
    }
}

#[derive(Debug)]
pub struct CheckOutcome {
    pub table: Table,
    pub summaries: Vec<RelationSummary>,
}

impl CheckOutcome {
    pub fn violations(&self) -> u64 {
        self.summaries.iter().map(|s| s.violations).sum()
    }
}

pub fn check_columns() -> Vec<String> {
    [
        "relation",
        "trial",
        "n",
        "memory_dim",
        "pure",
        "rank",
        "lhs",
        "rhs",
        "residual",
        "satisfied",
        "is_identity",
        "ps",
        "pd2",
        "v2",
        "x2",
        "m_a",
        "e2",
        "purity_a",
        "purity_d",
        "purity_ab",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

fn report_cells(r: &ComplementarityReport) -> Vec<Cell> {
    let c = &r.components;
    vec![
        Cell::Float(r.lhs),
        Cell::Float(r.rhs),
        Cell::Float(r.residual),
        Cell::Bool(r.satisfied),
        Cell::Bool(r.is_identity),
        Cell::opt_float(c.ps),
        Cell::opt_float(c.pd2),
        Cell::opt_float(c.v2),
        Cell::opt_float(c.x2),
        Cell::opt_float(c.m_a),
        Cell::opt_float(c.e2),
        Cell::opt_float(c.purity_a),
        Cell::opt_float(c.purity_d),
        Cell::opt_float(c.purity_ab),
    ]
}

/// Whether the relation samples pure inputs under this configuration.
fn samples_pure(relation: RelationId, cfg: &CheckConfig) -> bool {
    cfg.pure
        || matches!(
            relation,
            RelationId::Eq13NoMemory | RelationId::LimitPdV | RelationId::LimitPdE
        )
}

/// Upfront validation of the configuration against each relation's domain.
pub fn validate(cfg: &CheckConfig) -> Result<(), CliError> {
    if cfg.n < 2 {
        return Err(CliError::usage("--n must be at least 2"));
    }
    if cfg.memory_dim < 1 {
        return Err(CliError::usage("--memory-dim must be at least 1"));
    }
    if cfg.trials < 1 {
        return Err(CliError::usage("--trials must be at least 1"));
    }
    if cfg.relations.is_empty() {
        return Err(CliError::usage("no relation selected"));
    }
    if let Some(rank) = cfg.rank {
        if rank < 1 || rank > cfg.n * cfg.memory_dim {
            return Err(CliError::usage(format!(
                "--rank must lie in 1..={}",
                cfg.n * cfg.memory_dim
            )));
        }
    }
    for &relation in &cfg.relations {
        match relation {
            RelationId::Cor1N2Identity | RelationId::Cor2N2Identity => {
                if cfg.n != 2 {
                    return Err(CliError::usage(format!("{relation} requires --n 2")));
                }
            }
            RelationId::Eq13NoMemory => {
                if cfg.memory_dim != 1 {
                    return Err(CliError::usage("eq13 requires --memory-dim 1"));
                }
            }
            RelationId::Th3Entanglement => {
                if !cfg.pure && !(cfg.n == 2 && cfg.memory_dim == 2) {
                    return Err(CliError::usage(
                        "th3 on mixed inputs is limited to --n 2 --memory-dim 2; pass --pure for other dimensions",
                    ));
                }
            }
            RelationId::LimitPdE if cfg.memory_dim < cfg.n => {
                return Err(CliError::usage(
                    "limit_pd_e needs --memory-dim >= --n (orthonormal branches)",
                ));
            }
            _ => {}
        }
    }
    Ok(())
}

fn sample_pair(
    relation: RelationId,
    cfg: &CheckConfig,
    rng: &mut StreamRng,
) -> Result<(InputState, DetectorConfig, Option<usize>), CliError> {
    let det = match relation {
        RelationId::Cor2N2Identity => detectors_two_fixed_overlap(0.5, rng)?,
        _ => detectors_haar(cfg.n, rng),
    };
    let (input, rank) = match relation {
        RelationId::Eq13NoMemory => (InputState::pure(random_pure_with(cfg.n, 1, rng)?), None),
        RelationId::LimitPdV => (
            InputState::pure(pure_equal_branches(cfg.n, cfg.memory_dim, rng)?),
            None,
        ),
        RelationId::LimitPdE => (
            InputState::pure(pure_orthonormal_branches(cfg.n, cfg.memory_dim, rng)?),
            None,
        ),
        _ if samples_pure(relation, cfg) => (
            InputState::pure(random_pure_with(cfg.n, cfg.memory_dim, rng)?),
            None,
        ),
        _ => {
            let rank = match cfg.rank {
                Some(rank) => rank,
                None => rng.gen_range(1..=cfg.n * cfg.memory_dim),
            };
            (
                InputState::mixed(random_mixed_with(cfg.n, cfg.memory_dim, rank, rng)?),
                Some(rank),
            )
        }
    };
    Ok((input, det, rank))
}

pub fn run_check(cfg: &CheckConfig) -> Result<CheckOutcome, CliError> {
    validate(cfg)?;
    let mode = if cfg.oracle {
        PdMode::Optimized
    } else {
        PdMode::UpperBound
    };
    let mut table = Table::new(check_columns());
    let mut summaries = Vec::new();

    for &relation in &cfg.relations {
        let trials = cfg.trials as usize;
        let results: Vec<Result<(ComplementarityReport, Option<usize>), CliError>> =
            parallel_map(trials, cfg.threads, |t| {
                let mut rng = rng_stream(cfg.seed, t as u64);
                let (input, det, rank) = sample_pair(relation, cfg, &mut rng)?;
                let report = eval_relation(relation, &input, &det, mode)?;
                Ok((report, rank))
            });

        let mut violations = 0u64;
        let mut min_residual = f64::INFINITY;
        let mut max_abs_residual: f64 = 0.0;
        let is_pure = samples_pure(relation, cfg);
        for (trial, result) in results.into_iter().enumerate() {
            let (report, rank) = result?;
            if !report.satisfied {
                violations += 1;
            }
            min_residual = min_residual.min(report.residual);
            max_abs_residual = max_abs_residual.max(report.residual.abs());
            let mut row = vec![
                Cell::Str(relation.to_string()),
                Cell::Int(trial as i64),
                Cell::Int(cfg.n as i64),
                Cell::Int(cfg.memory_dim as i64),
                Cell::Bool(is_pure),
                rank.map(|r| Cell::Int(r as i64)).unwrap_or(Cell::Empty),
            ];
            row.extend(report_cells(&report));
            table.push(row);
        }
        summaries.push(RelationSummary {
            relation,
            trials: cfg.trials,
            violations,
            min_residual,
            max_abs_residual,
        });
    }
    Ok(CheckOutcome { table, summaries })
}

pub fn parse_relations(spec: &str) -> Result<Vec<RelationId>, CliError> {
    if spec.trim().eq_ignore_ascii_case("all") {
        return Ok(RelationId::ALL.to_vec());
    }
    let mut out = Vec::new();
    for part in spec.split(',') {
        let relation = RelationId::parse(part).ok_or_else(|| {
            CliError::usage(format!(
                "unknown relation '{part}'; expected one of {} or 'all'",
                RelationId::ALL
                    .iter()
                    .map(|r| r.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            ))
        })?;
        if !out.contains(&relation) {
            out.push(relation);
        }
    }
    Ok(out)
}
