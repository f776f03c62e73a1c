//! Primitive-variable snapshots and their plain-text form.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::eos::{GasModel, PrimitiveState};
use crate::error::{Error, Result};
use crate::solver::{Grid, Solver};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSnapshot {
    pub grid: Grid,
    pub time: f64,
    pub gamma: f64,
    /// Cell states, x fastest.
    pub states: Vec<PrimitiveState>,
}

/// Header of the text format; serialized as JSON after `# `.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct Header {
    columns: Vec<String>,
    grid: Grid,
    time: f64,
    gamma: f64,
    #[serde(default)]
    meta: serde_json::Value,
}

impl FieldSnapshot {
    pub fn from_solver<const M: usize>(solver: &Solver<M>) -> Result<Self> {
        Ok(Self {
            grid: *solver.grid(),
            time: solver.time(),
            gamma: solver.gas().gamma(),
            states: solver.primitives()?,
        })
    }

    pub fn density(&self) -> Vec<f64> {
        self.states.iter().map(|w| w.rho).collect()
    }

    /// Cell centres `(x, y)` in storage order.
    pub fn centres(&self) -> Vec<(f64, f64)> {
        let g = &self.grid;
        (0..g.ny as isize)
            .flat_map(|j| (0..g.nx as isize).map(move |i| (g.x(i), g.y(j))))
            .collect()
    }

    /// Linear interpolation of the density of a 1D snapshot, clamped at the ends.
    pub fn density_at(&self, x: f64) -> f64 {
        let g = &self.grid;
        let s = (x - g.x_range.0) / g.dx() - 0.5;
        if s <= 0.0 {
            return self.states[0].rho;
        }
        let i = s.floor() as usize;
        if i + 1 >= g.nx {
            return self.states[g.nx - 1].rho;
        }
        let f = s - i as f64;
        (1.0 - f) * self.states[i].rho + f * self.states[i + 1].rho
    }

    /// Columns `x [y] rho u [v] p S` with a one-line JSON header carrying `meta`.
    pub fn to_text(&self, meta: &serde_json::Value) -> String {
        let two_d = self.grid.is_2d();
        let columns: Vec<String> = if two_d {
            vec!["x", "y", "rho", "u", "v", "p", "S"]
        } else {
            vec!["x", "rho", "u", "p", "S"]
        }
        .into_iter()
        .map(String::from)
        .collect();
        let header = Header {
            columns,
            grid: self.grid,
            time: self.time,
            gamma: self.gamma,
            meta: meta.clone(),
        };
        let gas = GasModel::new(self.gamma).unwrap_or_default();
        let mut out = String::new();
        let _ = writeln!(out, "# {}", serde_json::to_string(&header).expect("header serializes"));
        for ((x, y), w) in self.centres().into_iter().zip(&self.states) {
            let s = gas.entropy(w);
            if two_d {
                let _ = writeln!(out, "{x:.17e} {y:.17e} {:.17e} {:.17e} {:.17e} {:.17e} {s:.17e}", w.rho, w.u, w.v, w.p);
            } else {
                let _ = writeln!(out, "{x:.17e} {:.17e} {:.17e} {:.17e} {s:.17e}", w.rho, w.u, w.p);
            }
        }
        out
    }

    pub fn write_text(&self, path: &Path, meta: &serde_json::Value) -> Result<()> {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent).map_err(|source| Error::Io {
                    path: parent.to_path_buf(),
                    source,
                })?;
            }
        }
        std::fs::write(path, self.to_text(meta)).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Config(format!("malformed snapshot: {msg}"));
        let mut lines = text.lines();
        let first = lines.next().ok_or_else(|| bad("empty"))?;
        let json = first.strip_prefix("# ").ok_or_else(|| bad("missing header"))?;
        let header: Header = serde_json::from_str(json).map_err(|e| bad(&e.to_string()))?;
        let two_d = header.grid.is_2d();
        let mut states = Vec::with_capacity(header.grid.cells());
        for line in lines {
            let v: Vec<f64> = line
                .split_whitespace()
                .map(|t| t.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| bad(&e.to_string()))?;
            let w = match (two_d, v.len()) {
                (true, 7) => PrimitiveState::new(v[2], v[3], v[4], v[5]),
                (false, 5) => PrimitiveState::new_1d(v[1], v[2], v[3]),
                _ => return Err(bad("wrong column count")),
            };
            states.push(w);
        }
        if states.len() != header.grid.cells() {
            return Err(bad("row count does not match the grid"));
        }
        Ok(Self {
            grid: header.grid,
            time: header.time,
            gamma: header.gamma,
            states,
        })
    }

    pub fn read_text(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_text(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snap_1d(n: usize) -> FieldSnapshot {
        FieldSnapshot {
            grid: Grid::new_1d(0.0, 1.0, n, 3).unwrap(),
            time: 0.5,
            gamma: 1.4,
            states: (0..n).map(|i| PrimitiveState::new_1d(1.0 + i as f64, 0.1, 1.0)).collect(),
        }
    }

    #[test]
    fn one_header_line_per_snapshot() {
        let text = snap_1d(4).to_text(&serde_json::json!({"k": 5}));
        assert_eq!(text.lines().count(), 5);
        assert!(text.starts_with("# {"));
    }

    #[test]
    fn two_d_rows_are_x_fastest() {
        let grid = Grid::new_2d((0.0, 3.0), (0.0, 2.0), 3, 2, 3).unwrap();
        let snap = FieldSnapshot {
            grid,
            time: 0.0,
            gamma: 1.4,
            states: vec![PrimitiveState::new(1.0, 0.0, 0.0, 1.0); 6],
        };
        let text = snap.to_text(&serde_json::Value::Null);
        let rows: Vec<(f64, f64)> = text
            .lines()
            .skip(1)
            .map(|l| {
                let v: Vec<f64> = l.split_whitespace().map(|t| t.parse().unwrap()).collect();
                (v[0], v[1])
            })
            .collect();
        assert_eq!(rows, vec![(0.5, 0.5), (1.5, 0.5), (2.5, 0.5), (0.5, 1.5), (1.5, 1.5), (2.5, 1.5)]);
    }

    #[test]
    fn text_round_trip() {
        let s = snap_1d(6);
        let back = FieldSnapshot::from_text(&s.to_text(&serde_json::Value::Null)).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn density_interpolation() {
        let s = snap_1d(4);
        assert_eq!(s.density_at(0.125), 1.0);
        assert!((s.density_at(0.25) - 1.5).abs() < 1e-14);
        assert_eq!(s.density_at(2.0), 4.0);
    }
}
