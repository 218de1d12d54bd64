//! `twistorlab dim-table` — run a catalog of quotient cases and tabulate
//! the invariant solution dimensions against their expected values.

use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use serde::Serialize;

use twistorlab::quotients::{builtin_catalog, run_catalog_case, CaseResult, CatalogCase};

use crate::report::{emit, Format};

#[derive(Args)]
pub struct DimTableArgs {
    /// JSON file with catalog cases; omit to run the built-in catalog
    #[arg(long)]
    pub catalog: Option<PathBuf>,

    /// Random seed for the sample points of the invariance conditions
    #[arg(long, default_value_t = 29)]
    pub seed: u64,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Also write the JSON report to this path
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct TableReport {
    seed: u64,
    cases: Vec<CaseResult>,
    passed: usize,
    failed: usize,
    pass: bool,
}

fn load_catalog(args: &DimTableArgs) -> anyhow::Result<Vec<CatalogCase>> {
    match &args.catalog {
        None => Ok(builtin_catalog()),
        Some(path) => {
            let body = std::fs::read_to_string(path)
                .with_context(|| format!("reading catalog {}", path.display()))?;
            let cases: Vec<CatalogCase> =
                serde_json::from_str(&body).context("parsing catalog JSON")?;
            if cases.is_empty() {
                anyhow::bail!("catalog {} contains no cases", path.display());
            }
            Ok(cases)
        }
    }
}

pub fn run(args: &DimTableArgs) -> anyhow::Result<bool> {
    let catalog = load_catalog(args)?;
    let results: Vec<CaseResult> =
        catalog.iter().map(|case| run_catalog_case(case, args.seed)).collect();
    let passed = results.iter().filter(|r| r.pass).count();
    let failed = results.len() - passed;
    let pass = failed == 0;

    let mut text = String::new();
    text.push_str(&format!(
        "{:<64} {:>2} {:>4} {:>4} {:>6} {:>9}  status\n",
        "case", "n", "dim", "inv", "q", "expected"
    ));
    text.push_str(&"-".repeat(102));
    text.push('\n');
    for r in &results {
        let inv = r.invariant_dim.map_or("-".to_string(), |d| d.to_string());
        let q = r.q.clone().unwrap_or_else(|| "-".to_string());
        text.push_str(&format!(
            "{:<64} {:>2} {:>4} {:>4} {:>6} {:>9}  {}\n",
            r.label,
            r.n,
            r.family_dim,
            inv,
            q,
            r.expected_q,
            if r.pass { "PASS" } else { "FAIL" }
        ));
        if !r.pass {
            text.push_str(&format!("    note: {}\n", r.note));
        }
    }
    text.push_str(&format!(
        "result: {} ({passed} passed, {failed} failed)",
        if pass { "PASS" } else { "FAIL" }
    ));

    let report = TableReport { seed: args.seed, cases: results, passed, failed, pass };
    emit(&text, &report, args.format, args.out.as_ref())?;
    Ok(pass)
}
