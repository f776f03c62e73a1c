//! Fine-grid reference solutions for problems without an exact solution.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::snapshot::FieldSnapshot;
use crate::solver::SchemeConfig;

use super::ProblemSpec;

/// Reference resolution; `desk_cells` is used unless a run asks for more.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferencePolicy {
    pub paper_cells: usize,
    pub desk_cells: usize,
}

impl ReferencePolicy {
    pub const fn new(paper_cells: usize, desk_cells: usize) -> Self {
        Self {
            paper_cells,
            desk_cells,
        }
    }
}

fn cache_path(dir: &Path, spec: &ProblemSpec, scheme: &SchemeConfig, cells: usize) -> PathBuf {
    dir.join(format!(
        "{}_k{}_{}_n{}.txt",
        spec.id,
        scheme.order.k(),
        scheme.backend,
        cells
    ))
}

/// Runs `spec` on `cells` cells (the desk resolution when `None`) and returns
/// the final snapshot. With `cache_dir` the snapshot is read from or written
/// to a text file keyed by problem, order, backend and resolution.
pub fn reference_solution(
    spec: &ProblemSpec,
    scheme: SchemeConfig,
    cells: Option<usize>,
    cache_dir: Option<&Path>,
) -> Result<FieldSnapshot> {
    if spec.is_2d() {
        return Err(Error::Config(format!("no reference policy for 2D problem {}", spec.id)));
    }
    let policy = spec
        .reference
        .ok_or_else(|| Error::Config(format!("{} has no reference policy", spec.id)))?;
    let n = cells.unwrap_or(policy.desk_cells);
    let path = cache_dir.map(|d| cache_path(d, spec, &scheme, n));
    if let Some(p) = &path {
        if p.exists() {
            match FieldSnapshot::read_text(p) {
                Ok(s) if s.grid.nx == n && s.time == spec.t_end => return Ok(s),
                Ok(_) => log::warn!("ignoring stale reference {}", p.display()),
                Err(e) => log::warn!("ignoring unreadable reference {}: {e}", p.display()),
            }
        }
    }
    log::info!("computing {} reference on {n} cells", spec.id);
    let mut solver = spec.solver::<3>(scheme, n, 1, spec.time_control())?;
    solver.advance()?;
    let snap = FieldSnapshot::from_solver(&solver)?;
    if let Some(p) = &path {
        let meta = serde_json::json!({
            "problem": spec.id,
            "order": scheme.order.k(),
            "backend": scheme.backend,
            "reference": true,
        });
        snap.write_text(p, &meta)?;
    }
    Ok(snap)
}
