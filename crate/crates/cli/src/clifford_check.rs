//! `twistorlab clifford-check` — verify the generator relations of the
//! spinor representations over a range of dimensions and signatures.

use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::Args;
use num_complex::Complex;
use serde::Serialize;

use twistorlab::clifford::{CliffordModel, Signature, MAX_DIM};
use twistorlab::CMatrix;

use crate::report::{emit, CheckLine, Format};

#[derive(Args)]
pub struct CliffordArgs {
    /// Dimension, either a single value `4` or an inclusive range `3..10`
    #[arg(long, default_value = "2..8")]
    pub n: String,

    /// Timelike counts to test, comma separated (pairs with k > n are
    /// skipped)
    #[arg(long, default_value = "0,1")]
    pub k: String,

    /// Tolerance on the anticommutation relations
    #[arg(long, default_value_t = 1e-12)]
    pub tol_alg: f64,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Also write the JSON report to this path
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct PairResult {
    n: usize,
    k: usize,
    spinor_dim: usize,
    relation_defect: f64,
    pass: bool,
}

#[derive(Serialize)]
struct CliffordReport {
    pairs: Vec<PairResult>,
    base_matrix_defect: Option<f64>,
    pass: bool,
}

fn parse_n(s: &str) -> anyhow::Result<(usize, usize)> {
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo.trim().parse().context("invalid range start")?;
        let hi: usize = hi.trim().parse().context("invalid range end")?;
        if lo > hi {
            bail!("empty range {s}");
        }
        Ok((lo, hi))
    } else {
        let n: usize = s.trim().parse().with_context(|| format!("invalid dimension `{s}`"))?;
        Ok((n, n))
    }
}

fn parse_k(s: &str) -> anyhow::Result<Vec<usize>> {
    let mut out = Vec::new();
    for tok in s.split(',') {
        out.push(tok.trim().parse::<usize>().with_context(|| format!("invalid k `{tok}`"))?);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// The two 2x2 generators of the euclidean plane representation.
fn base_reference() -> (CMatrix, CMatrix) {
    let i = Complex::new(0.0, 1.0);
    let z = Complex::new(0.0, 0.0);
    let u = CMatrix::from_row_slice(2, 2, &[i, z, z, -i]);
    let v = CMatrix::from_row_slice(2, 2, &[z, i, i, z]);
    (u, v)
}

pub fn run(args: &CliffordArgs) -> anyhow::Result<bool> {
    let (lo, hi) = parse_n(&args.n)?;
    let ks = parse_k(&args.k)?;
    if lo == 0 {
        bail!("dimension must be at least 1");
    }
    if hi > MAX_DIM {
        bail!(
            "dimension {hi} exceeds the supported maximum {MAX_DIM} \
             (representations are dense matrices of size 2^(n/2))"
        );
    }

    let mut pairs = Vec::new();
    let mut text = String::new();
    let mut base_defect: Option<f64> = None;
    for n in lo..=hi {
        for &k in &ks {
            if k > n {
                continue;
            }
            let model = CliffordModel::build(Signature::new(n, k)?)?;
            let defect = model.relation_defect();
            let pass = defect <= args.tol_alg;
            text.push_str(&format!(
                "  n={n:<2} k={k}: spinor dim {:>4}, relation defect {:>10.3e}  {}\n",
                model.dim(),
                defect,
                if pass { "PASS" } else { "FAIL" }
            ));
            pairs.push(PairResult { n, k, spinor_dim: model.dim(), relation_defect: defect, pass });

            if n == 2 && k == 0 {
                let (u, v) = base_reference();
                let d = (model.generator(0) - &u).map(|z| z.norm()).max()
                    .max((model.generator(1) - &v).map(|z| z.norm()).max());
                base_defect = Some(d);
                text.push_str("  base generators (n=2, k=0):\n");
                for (name, g) in [("e1", model.generator(0)), ("e2", model.generator(1))] {
                    text.push_str(&format!("    {name} = [[{}, {}], [{}, {}]]\n",
                        g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]));
                }
                text.push_str(
                    &CheckLine::max("base-matrix-dump", d, args.tol_alg).render_text(),
                );
                text.push('\n');
            }
        }
    }
    if pairs.is_empty() {
        bail!("no valid (n, k) pairs selected");
    }

    let pass = pairs.iter().all(|p| p.pass) && base_defect.map_or(true, |d| d <= args.tol_alg);
    text.push_str(if pass { "result: PASS" } else { "result: FAIL" });
    let report = CliffordReport { pairs, base_matrix_defect: base_defect, pass };
    emit(&text, &report, args.format, args.out.as_ref())?;
    Ok(pass)
}
