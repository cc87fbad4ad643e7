//! Case selection: built-in tables, scenario files, case filters, and
//! grid / precoder overrides shared by several subcommands.

use std::fs;
use std::path::PathBuf;

use clap::ValueEnum;
use mimo_lab_core::scenario::{self, ScenarioCase};

use crate::error::CliError;

/// Built-in scenario collections usable wherever a case is selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TablePreset {
    /// Contamination-free scaling schedules.
    Table1,
    /// Pilot-contaminated scaling schedules.
    Table2,
}

impl TablePreset {
    pub fn cases(self) -> Vec<ScenarioCase> {
        match self {
            TablePreset::Table1 => scenario::table1(),
            TablePreset::Table2 => scenario::table2(),
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct CaseSelect {
    /// Built-in scenario collection
    #[arg(long, value_enum, conflicts_with = "scenario")]
    pub preset: Option<TablePreset>,
    /// TOML scenario file
    #[arg(long, value_name = "FILE")]
    pub scenario: Option<PathBuf>,
    /// Case to use: 1-based number within the collection, or a full case id
    #[arg(long, value_name = "N|ID")]
    pub case: Option<String>,
    /// Switch the selected cases to zero-forcing precoding
    #[arg(long)]
    pub zf: bool,
    /// Override the antenna grid (comma-separated)
    #[arg(long, value_delimiter = ',', value_name = "M,M,...")]
    pub m_grid: Option<Vec<usize>>,
}

impl CaseSelect {
    /// Resolves the selection to a validated, non-empty list of cases.
    pub fn resolve(&self) -> Result<Vec<ScenarioCase>, CliError> {
        let mut cases = match (&self.preset, &self.scenario) {
            (Some(p), None) => p.cases(),
            (None, Some(path)) => scenario::parse_scenario(&fs::read_to_string(path)?)?,
            (None, None) => {
                return Err(CliError::Usage(
                    "select cases with --preset <table1|table2> or --scenario <FILE>".into(),
                ))
            }
            (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
        };
        if let Some(wanted) = &self.case {
            cases = vec![pick_case(cases, wanted)?];
        }
        if self.zf {
            cases = cases.iter().map(ScenarioCase::as_zero_forcing).collect();
        }
        if let Some(grid) = &self.m_grid {
            for case in &mut cases {
                case.m_grid = grid.clone();
                case.validate()?;
            }
        }
        Ok(cases)
    }

    /// Like [`resolve`](Self::resolve) but insists on a single case.
    pub fn resolve_one(&self) -> Result<ScenarioCase, CliError> {
        let cases = self.resolve()?;
        if cases.len() != 1 {
            return Err(CliError::Usage(format!(
                "this command needs exactly one case; the selection matched {} — narrow it with --case",
                cases.len()
            )));
        }
        Ok(cases.into_iter().next().expect("len checked"))
    }
}

fn pick_case(cases: Vec<ScenarioCase>, wanted: &str) -> Result<ScenarioCase, CliError> {
    if let Some(found) = cases.iter().find(|c| c.case_id == wanted) {
        return Ok(found.clone());
    }
    if let Ok(number) = wanted.parse::<usize>() {
        if (1..=cases.len()).contains(&number) {
            return Ok(cases[number - 1].clone());
        }
        return Err(CliError::Usage(format!(
            "case number {number} is out of range: the collection has {} cases",
            cases.len()
        )));
    }
    Err(CliError::Usage(format!(
        "no case named {wanted:?}; known ids: {}",
        cases
            .iter()
            .map(|c| c.case_id.as_str())
            .collect::<Vec<_>>()
            .join(", ")
    )))
}
