//! Resolving the lattice named on the command line.

use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::Args;
use latcell::{catalog, GramLattice, Rat, RatMat};
use serde_json::Value;

/// Exactly one way of naming a lattice.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct LatticeInput {
    /// Catalog name (see `latcell catalog`).
    #[arg(long)]
    pub name: Option<String>,
    /// Gram matrix as JSON, entries integers, decimals or "p/q" strings.
    #[arg(long)]
    pub gram: Option<String>,
    /// Basis matrix as JSON (columns span the lattice); uses G = BᵀB.
    #[arg(long)]
    pub basis: Option<String>,
    /// JSON file {"n": .., "gram": [[..]]} or {"n": .., "basis": [[..]]}.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

impl LatticeInput {
    pub fn resolve(&self) -> anyhow::Result<(String, GramLattice)> {
        if let Some(name) = &self.name {
            let entry = catalog::get(name)?;
            return Ok((entry.name.clone(), entry.lattice()));
        }
        if let Some(text) = &self.gram {
            let v: Value = serde_json::from_str(text).context("--gram is not valid JSON")?;
            return Ok(("gram".into(), GramLattice::new(matrix(&v)?)?));
        }
        if let Some(text) = &self.basis {
            let v: Value = serde_json::from_str(text).context("--basis is not valid JSON")?;
            return Ok(("basis".into(), GramLattice::from_basis(&matrix(&v)?)?));
        }
        let path = self.file.as_ref().expect("clap enforces one input");
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let v: Value = serde_json::from_str(&text).with_context(|| format!("{} is not valid JSON", path.display()))?;
        let name = path.file_stem().map_or("file".into(), |s| s.to_string_lossy().into_owned());
        let lattice = match (v.get("gram"), v.get("basis")) {
            (Some(g), None) => GramLattice::new(matrix(g)?)?,
            (None, Some(b)) => GramLattice::from_basis(&matrix(b)?)?,
            _ => bail!("{}: expected exactly one of \"gram\" or \"basis\"", path.display()),
        };
        if let Some(n) = v.get("n") {
            if n.as_u64() != Some(lattice.dim() as u64) {
                let dim = lattice.dim();
                bail!("{}: \"n\" is {n} but the matrix is {dim}×{dim}", path.display());
            }
        }
        Ok((name, lattice))
    }
}

fn entry(v: &Value) -> anyhow::Result<Rat> {
    Ok(match v {
        Value::String(s) => s.parse()?,
        // JSON numbers are decimal text, so this parse is exact.
        Value::Number(n) => n.to_string().parse()?,
        other => bail!("matrix entry {other} is not a number or rational string"),
    })
}

pub fn matrix(v: &Value) -> anyhow::Result<RatMat> {
    let rows = v.as_array().context("matrix must be a JSON array of rows")?;
    let rows = rows
        .iter()
        .map(|r| r.as_array().context("matrix rows must be arrays")?.iter().map(entry).collect())
        .collect::<anyhow::Result<Vec<Vec<Rat>>>>()?;
    Ok(RatMat::from_rows(rows)?)
}
