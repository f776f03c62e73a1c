//! Test problems: initial data, boundaries, sources and exact or reference solutions.

mod exact;
mod reference;
mod riemann;

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use exact::{exact_accuracy1, exact_accuracy2, exact_accuracy_2d, solve_burgers_characteristic};
pub use reference::{reference_solution, ReferencePolicy};
pub use riemann::{exact_riemann, ExactRiemann};

use crate::eos::{GasModel, PrimitiveState};
use crate::error::{Error, Result};
use crate::solver::{
    BoundaryCondition, BoundarySpec, Grid, SchemeConfig, ShockTrace, Solver, SolverConfig, SourceSpec, TimeControl,
};

/// Halved-dt retries allowed per step in catalog runs.
pub const DEFAULT_RETRIES: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemId {
    #[serde(rename = "accuracy1_1d")]
    Accuracy1,
    #[serde(rename = "accuracy2_1d")]
    Accuracy2,
    Sod,
    Lax,
    Leblanc,
    DoubleRarefaction,
    BlastWaves,
    #[serde(rename = "sedov_1d")]
    Sedov,
    ShockDensity,
    #[serde(rename = "accuracy_2d")]
    Accuracy2d,
    Dmr,
    Rti,
    Khi,
}

impl ProblemId {
    pub const ALL: [ProblemId; 13] = [
        ProblemId::Accuracy1,
        ProblemId::Accuracy2,
        ProblemId::Sod,
        ProblemId::Lax,
        ProblemId::Leblanc,
        ProblemId::DoubleRarefaction,
        ProblemId::BlastWaves,
        ProblemId::Sedov,
        ProblemId::ShockDensity,
        ProblemId::Accuracy2d,
        ProblemId::Dmr,
        ProblemId::Rti,
        ProblemId::Khi,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProblemId::Accuracy1 => "accuracy1_1d",
            ProblemId::Accuracy2 => "accuracy2_1d",
            ProblemId::Sod => "sod",
            ProblemId::Lax => "lax",
            ProblemId::Leblanc => "leblanc",
            ProblemId::DoubleRarefaction => "double_rarefaction",
            ProblemId::BlastWaves => "blast_waves",
            ProblemId::Sedov => "sedov_1d",
            ProblemId::ShockDensity => "shock_density",
            ProblemId::Accuracy2d => "accuracy_2d",
            ProblemId::Dmr => "dmr",
            ProblemId::Rti => "rti",
            ProblemId::Khi => "khi",
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemId::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::UnknownProblem(s.to_string()))
    }
}

/// Everything needed to set up a run of one problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub id: ProblemId,
    pub x_range: (f64, f64),
    pub y_range: Option<(f64, f64)>,
    /// Default resolution `(nx, ny)`; `ny = 1` in 1D.
    pub cells: (usize, usize),
    /// Reduced resolution for desk-scale runs.
    pub desk_cells: (usize, usize),
    pub gamma: f64,
    pub t_end: f64,
    pub boundary: BoundarySpec,
    pub source: SourceSpec,
    pub has_exact: bool,
    pub reference: Option<ReferencePolicy>,
}

const SOD: (PrimitiveState, PrimitiveState) = (
    PrimitiveState::new_1d(1.0, 0.0, 1.0),
    PrimitiveState::new_1d(0.125, 0.0, 0.1),
);
const LAX: (PrimitiveState, PrimitiveState) = (
    PrimitiveState::new_1d(0.445, 0.698, 3.528),
    PrimitiveState::new_1d(0.5, 0.0, 0.571),
);
const LEBLANC: (PrimitiveState, PrimitiveState) = (
    PrimitiveState::new_1d(2.0, 0.0, 1e9),
    PrimitiveState::new_1d(1e-3, 0.0, 1.0),
);
const DOUBLE_RAREFACTION: (PrimitiveState, PrimitiveState) = (
    PrimitiveState::new_1d(7.0, -1.0, 0.2),
    PrimitiveState::new_1d(7.0, 1.0, 0.2),
);

/// Energy of the Sedov point blast.
pub const SEDOV_E0: f64 = 3.2e6;
/// Amplitude of the density wave in the shock-density problem.
pub const SHOCK_DENSITY_EPS: f64 = 0.2;
/// Start of the reflecting wall in the double Mach reflection.
pub const DMR_X0: f64 = 1.0 / 6.0;

/// Mach 10 shock of the double Mach reflection.
pub fn dmr_shock() -> ShockTrace {
    let theta = FRAC_PI_6;
    ShockTrace {
        x0: DMR_X0,
        incline: FRAC_PI_3,
        speed: 10.0,
        post: PrimitiveState::new(8.0, 8.25 * (-theta).cos(), 8.25 * (-theta).sin(), 116.5),
        pre: PrimitiveState::new(1.4, 0.0, 0.0, 1.0),
    }
}

fn spec_1d(id: ProblemId, range: (f64, f64), n: usize, t_end: f64, bc: BoundaryCondition) -> ProblemSpec {
    ProblemSpec {
        id,
        x_range: range,
        y_range: None,
        cells: (n, 1),
        desk_cells: (n, 1),
        gamma: 1.4,
        t_end,
        boundary: BoundarySpec::uniform(bc),
        source: SourceSpec::default(),
        has_exact: false,
        reference: None,
    }
}

impl ProblemSpec {
    pub fn get(id: ProblemId) -> ProblemSpec {
        use BoundaryCondition::*;
        match id {
            ProblemId::Accuracy1 => ProblemSpec {
                has_exact: true,
                ..spec_1d(id, (0.0, 2.0), 20, 2.0, Periodic)
            },
            ProblemId::Accuracy2 => ProblemSpec {
                has_exact: true,
                gamma: 3.0,
                ..spec_1d(id, (-1.0, 1.0), 20, 0.2, Periodic)
            },
            ProblemId::Sod => ProblemSpec {
                has_exact: true,
                ..spec_1d(id, (-5.0, 5.0), 200, 2.0, Outflow)
            },
            ProblemId::Lax => ProblemSpec {
                has_exact: true,
                ..spec_1d(id, (-5.0, 5.0), 200, 1.3, Outflow)
            },
            ProblemId::Leblanc => ProblemSpec {
                has_exact: true,
                ..spec_1d(id, (-5.0, 5.0), 2000, 5e-5, Outflow)
            },
            ProblemId::DoubleRarefaction => ProblemSpec {
                has_exact: true,
                ..spec_1d(id, (-5.0, 5.0), 200, 3.3, Outflow)
            },
            ProblemId::BlastWaves => ProblemSpec {
                reference: Some(ReferencePolicy::new(40000, 8000)),
                ..spec_1d(id, (0.0, 1.0), 800, 0.038, Reflective)
            },
            ProblemId::Sedov => ProblemSpec {
                reference: Some(ReferencePolicy::new(4001, 2001)),
                ..spec_1d(id, (-2.0, 2.0), 401, 0.001, Outflow)
            },
            ProblemId::ShockDensity => ProblemSpec {
                reference: Some(ReferencePolicy::new(40000, 8000)),
                ..spec_1d(id, (-5.0, 5.0), 400, 1.8, Outflow)
            },
            ProblemId::Accuracy2d => ProblemSpec {
                id,
                x_range: (0.0, 2.0),
                y_range: Some((0.0, 2.0)),
                cells: (20, 20),
                desk_cells: (20, 20),
                gamma: 1.4,
                t_end: 2.0,
                boundary: BoundarySpec::periodic(),
                source: SourceSpec::default(),
                has_exact: true,
                reference: None,
            },
            ProblemId::Dmr => {
                let trace = dmr_shock();
                ProblemSpec {
                    id,
                    x_range: (0.0, 4.0),
                    y_range: Some((0.0, 1.0)),
                    cells: (1920, 480),
                    desk_cells: (480, 120),
                    gamma: 1.4,
                    t_end: 0.2,
                    boundary: BoundarySpec {
                        left: Shock { trace },
                        right: Shock { trace },
                        bottom: WallFrom {
                            x0: DMR_X0,
                            inflow: trace.post,
                        },
                        top: Shock { trace },
                    },
                    source: SourceSpec::default(),
                    has_exact: false,
                    reference: None,
                }
            }
            ProblemId::Rti => ProblemSpec {
                id,
                x_range: (0.0, 0.25),
                y_range: Some((0.0, 1.0)),
                cells: (240, 960),
                desk_cells: (60, 240),
                gamma: 5.0 / 3.0,
                t_end: 1.95,
                boundary: BoundarySpec {
                    left: Reflective,
                    right: Reflective,
                    bottom: Fixed {
                        state: PrimitiveState::new(2.0, 0.0, 0.0, 1.0),
                    },
                    top: Fixed {
                        state: PrimitiveState::new(1.0, 0.0, 0.0, 2.5),
                    },
                },
                source: SourceSpec { gravity: (0.0, 1.0) },
                has_exact: false,
                reference: None,
            },
            ProblemId::Khi => ProblemSpec {
                id,
                x_range: (-0.5, 0.5),
                y_range: Some((-0.5, 0.5)),
                cells: (512, 512),
                desk_cells: (128, 128),
                gamma: 1.4,
                t_end: 1.0,
                boundary: BoundarySpec::periodic(),
                source: SourceSpec::default(),
                has_exact: false,
                reference: None,
            },
        }
    }

    pub fn by_name(name: &str) -> Result<ProblemSpec> {
        Ok(Self::get(name.parse()?))
    }

    pub fn is_2d(&self) -> bool {
        self.y_range.is_some()
    }

    pub fn gas(&self) -> GasModel {
        GasModel::new(self.gamma).expect("catalog gamma is valid")
    }

    pub fn grid(&self, nx: usize, ny: usize, ghost: usize) -> Result<Grid> {
        match self.y_range {
            Some(yr) => Grid::new_2d(self.x_range, yr, nx, ny, ghost),
            None => Grid::new_1d(self.x_range.0, self.x_range.1, nx, ghost),
        }
    }

    /// CFL number used when a run does not set one.
    pub fn default_cfl(&self) -> f64 {
        0.5
    }

    /// Coarsest mesh size of the refinement studies.
    pub fn accuracy_h0(&self) -> f64 {
        (self.x_range.1 - self.x_range.0) / self.cells.0 as f64
    }

    /// Time control with the default CFL, running to `t_end`.
    pub fn time_control(&self) -> TimeControl {
        TimeControl::new(self.default_cfl(), self.t_end)
    }

    /// Solver for this problem on an `nx` by `ny` grid (`ny = 1` in 1D).
    pub fn solver<const M: usize>(&self, scheme: SchemeConfig, nx: usize, ny: usize, time: TimeControl) -> Result<Solver<M>> {
        let grid = self.grid(nx, ny, scheme.order.r())?;
        let cfg = SolverConfig {
            scheme,
            boundary: self.boundary,
            source: self.source,
            time,
            max_retries: DEFAULT_RETRIES,
        };
        let values = self.initial_conserved::<M>(&grid)?;
        Solver::from_conserved(self.gas(), grid, cfg, &values)
    }

    /// Riemann data for the shock tubes.
    pub fn riemann_data(&self) -> Option<(PrimitiveState, PrimitiveState)> {
        match self.id {
            ProblemId::Sod => Some(SOD),
            ProblemId::Lax => Some(LAX),
            ProblemId::Leblanc => Some(LEBLANC),
            ProblemId::DoubleRarefaction => Some(DOUBLE_RAREFACTION),
            _ => None,
        }
    }

    /// Initial primitive state at `(x, y)`.
    pub fn initial_state(&self, x: f64, y: f64) -> PrimitiveState {
        let gamma = self.gamma;
        if let Some((l, r)) = self.riemann_data() {
            return if x < 0.0 { l } else { r };
        }
        match self.id {
            ProblemId::Accuracy1 => exact_accuracy1(x, 0.0),
            ProblemId::Accuracy2 => exact_accuracy2(x, 0.0).expect("t = 0 is always solvable"),
            ProblemId::Accuracy2d => exact_accuracy_2d(x, y, 0.0),
            ProblemId::BlastWaves => {
                let p = if x < 0.1 {
                    1000.0
                } else if x < 0.9 {
                    0.01
                } else {
                    100.0
                };
                PrimitiveState::new_1d(1.0, 0.0, p)
            }
            ProblemId::Sedov => PrimitiveState::new_1d(1.0, 0.0, 1e-12),
            ProblemId::ShockDensity => {
                if x < -4.0 {
                    PrimitiveState::new_1d(27.0 / 7.0, 4.0 / 9.0 * 35f64.sqrt(), 31.0 / 3.0)
                } else {
                    PrimitiveState::new_1d(1.0 + SHOCK_DENSITY_EPS * (5.0 * x).sin(), 0.0, 1.0)
                }
            }
            ProblemId::Dmr => dmr_shock().state_at(x, y, 0.0),
            ProblemId::Rti => {
                let (rho, p) = if y < 0.5 { (2.0, 2.0 * y + 1.0) } else { (1.0, y + 1.5) };
                let c = (gamma * p / rho).sqrt();
                PrimitiveState::new(rho, 0.0, -0.025 * c * (8.0 * PI * x).cos(), p)
            }
            ProblemId::Khi => {
                let v = 0.01 * (2.0 * PI * x).sin();
                if y.abs() <= 0.25 {
                    PrimitiveState::new(2.0, -0.5, v, 2.5)
                } else {
                    PrimitiveState::new(1.0, 0.5, v, 2.5)
                }
            }
            ProblemId::Sod | ProblemId::Lax | ProblemId::Leblanc | ProblemId::DoubleRarefaction => unreachable!(),
        }
    }

    /// Interior conserved values on `grid`, x fastest, including the Sedov
    /// energy deposit at the central node.
    pub fn initial_conserved<const M: usize>(&self, grid: &Grid) -> Result<Vec<[f64; M]>> {
        let gas = self.gas();
        let mut out = Vec::with_capacity(grid.cells());
        for j in 0..grid.ny as isize {
            for i in 0..grid.nx as isize {
                out.push(gas.prim_to_cons_array::<M>(&self.initial_state(grid.x(i), grid.y(j))));
            }
        }
        if self.id == ProblemId::Sedov {
            if grid.nx % 2 == 0 {
                return Err(Error::Config(format!(
                    "sedov_1d needs an odd number of cells, got {}",
                    grid.nx
                )));
            }
            out[grid.nx / 2][M - 1] += SEDOV_E0 / grid.dx();
        }
        Ok(out)
    }

    /// Exact solution at `(x, y, t)` when one is available.
    pub fn exact(&self, x: f64, y: f64, t: f64) -> Option<Result<PrimitiveState>> {
        match self.id {
            ProblemId::Accuracy1 => Some(Ok(exact_accuracy1(x, t))),
            ProblemId::Accuracy2 => Some(exact_accuracy2(x, t)),
            ProblemId::Accuracy2d => Some(Ok(exact_accuracy_2d(x, y, t))),
            _ => {
                let (l, r) = self.riemann_data()?;
                if t <= 0.0 {
                    return Some(Ok(self.initial_state(x, y)));
                }
                Some(ExactRiemann::new(l, r, &self.gas()).map(|rp| rp.sample(x / t)))
            }
        }
    }

    /// Exact densities at the cell centres of `grid`, x fastest.
    pub fn exact_density(&self, grid: &Grid, t: f64) -> Option<Result<Vec<f64>>> {
        if !self.has_exact {
            return None;
        }
        if let Some((l, r)) = self.riemann_data() {
            let rp = match ExactRiemann::new(l, r, &self.gas()) {
                Ok(rp) => rp,
                Err(e) => return Some(Err(e)),
            };
            return Some(Ok((0..grid.nx as isize)
                .map(|i| {
                    let x = grid.x(i);
                    if t > 0.0 {
                        rp.sample(x / t).rho
                    } else {
                        self.initial_state(x, 0.0).rho
                    }
                })
                .collect()));
        }
        let mut out = Vec::with_capacity(grid.cells());
        for j in 0..grid.ny as isize {
            for i in 0..grid.nx as isize {
                match self.exact(grid.x(i), grid.y(j), t)? {
                    Ok(w) => out.push(w.rho),
                    Err(e) => return Some(Err(e)),
                }
            }
        }
        Some(Ok(out))
    }
}

/// All problems, in catalog order.
pub fn catalog() -> Vec<ProblemSpec> {
    ProblemId::ALL.iter().map(|id| ProblemSpec::get(*id)).collect()
}
