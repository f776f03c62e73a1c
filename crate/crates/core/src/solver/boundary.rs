use serde::{Deserialize, Serialize};

use crate::eos::{GasModel, PrimitiveState};
use crate::error::{Error, Result};

use super::grid::{Field, Grid};

/// Straight oblique shock moving along its normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockTrace {
    /// Foot of the shock on `y = 0` at `t = 0`.
    pub x0: f64,
    /// Angle between the shock line and the x-axis.
    pub incline: f64,
    /// Normal speed of the shock front.
    pub speed: f64,
    /// State behind the shock (`x < x_s`).
    pub post: PrimitiveState,
    /// State ahead of the shock.
    pub pre: PrimitiveState,
}

impl ShockTrace {
    /// Abscissa of the shock at height `y` and time `t`.
    #[inline]
    pub fn position(&self, y: f64, t: f64) -> f64 {
        self.x0 + y / self.incline.tan() + self.speed * t / self.incline.sin()
    }

    pub fn state_at(&self, x: f64, y: f64, t: f64) -> PrimitiveState {
        if x < self.position(y, t) {
            self.post
        } else {
            self.pre
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum BoundaryCondition {
    Periodic,
    /// Mirror image with the wall-normal velocity negated.
    Reflective,
    /// Zero-gradient extrapolation.
    Outflow,
    Fixed { state: PrimitiveState },
    /// Exact pre/post-shock data split at a moving shock (y sides only).
    Shock { trace: ShockTrace },
    /// Fixed `inflow` for `x < x0`, reflective wall beyond (y sides only).
    WallFrom { x0: f64, inflow: PrimitiveState },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySpec {
    pub left: BoundaryCondition,
    pub right: BoundaryCondition,
    /// Ignored on 1D grids.
    pub bottom: BoundaryCondition,
    pub top: BoundaryCondition,
}

impl BoundarySpec {
    pub fn uniform(bc: BoundaryCondition) -> Self {
        Self {
            left: bc,
            right: bc,
            bottom: bc,
            top: bc,
        }
    }

    pub fn periodic() -> Self {
        Self::uniform(BoundaryCondition::Periodic)
    }

    pub fn validate(&self, grid: &Grid) -> Result<()> {
        use BoundaryCondition::*;
        let pair_ok = |a: &BoundaryCondition, b: &BoundaryCondition| matches!(a, Periodic) == matches!(b, Periodic);
        for (side, bc) in [("left", &self.left), ("right", &self.right)] {
            if matches!(bc, WallFrom { .. }) {
                return Err(Error::Config(format!("{side} boundary cannot be a partial wall")));
            }
        }
        if !pair_ok(&self.left, &self.right) {
            return Err(Error::Config("periodic boundaries must be paired".into()));
        }
        if grid.is_2d() && !pair_ok(&self.bottom, &self.top) {
            return Err(Error::Config("periodic boundaries must be paired".into()));
        }
        Ok(())
    }
}

#[inline]
fn cons<const M: usize>(gas: &GasModel, w: &PrimitiveState) -> [f64; M] {
    gas.prim_to_cons_array::<M>(w)
}

/// Fills ghost cells at time `t`. Corners are left untouched; the
/// dimension-by-dimension sweeps never read them.
pub fn fill_ghosts<const M: usize>(field: &mut Field<M>, grid: &Grid, spec: &BoundarySpec, gas: &GasModel, t: f64) {
    let g = field.ghost() as isize;
    let nx = field.nx() as isize;
    let ny = field.ny() as isize;
    for j in 0..ny {
        let y = grid.y(j);
        for k in 1..=g {
            let (ghost, mirror, wrap, edge) = (-k, k - 1, nx - k, 0);
            let v = side_value(field, gas, &spec.left, (mirror, j), (wrap, j), (edge, j), 1, (grid.x(ghost), y), t);
            *field.get_mut(ghost, j) = v;
            let (ghost, mirror, wrap, edge) = (nx - 1 + k, nx - k, k - 1, nx - 1);
            let v = side_value(field, gas, &spec.right, (mirror, j), (wrap, j), (edge, j), 1, (grid.x(ghost), y), t);
            *field.get_mut(ghost, j) = v;
        }
    }
    if !grid.is_2d() {
        return;
    }
    for i in 0..nx {
        let x = grid.x(i);
        for k in 1..=g {
            let (ghost, mirror, wrap, edge) = (-k, k - 1, ny - k, 0);
            let v = side_value(field, gas, &spec.bottom, (i, mirror), (i, wrap), (i, edge), 2, (x, grid.y(ghost)), t);
            *field.get_mut(i, ghost) = v;
            let (ghost, mirror, wrap, edge) = (ny - 1 + k, ny - k, k - 1, ny - 1);
            let v = side_value(field, gas, &spec.top, (i, mirror), (i, wrap), (i, edge), 2, (x, grid.y(ghost)), t);
            *field.get_mut(i, ghost) = v;
        }
    }
}

#[allow(clippy::too_many_arguments)]
#[inline]
fn side_value<const M: usize>(
    field: &Field<M>,
    gas: &GasModel,
    bc: &BoundaryCondition,
    mirror: (isize, isize),
    wrap: (isize, isize),
    edge: (isize, isize),
    normal: usize,
    at: (f64, f64),
    t: f64,
) -> [f64; M] {
    let reflect = || {
        let mut q = *field.get(mirror.0, mirror.1);
        q[normal] = -q[normal];
        q
    };
    match bc {
        BoundaryCondition::Periodic => *field.get(wrap.0, wrap.1),
        BoundaryCondition::Reflective => reflect(),
        BoundaryCondition::Outflow => *field.get(edge.0, edge.1),
        BoundaryCondition::Fixed { state } => cons(gas, state),
        BoundaryCondition::Shock { trace } => cons(gas, &trace.state_at(at.0, at.1, t)),
        BoundaryCondition::WallFrom { x0, inflow } => {
            if at.0 < *x0 {
                cons(gas, inflow)
            } else {
                reflect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn negate(mut q: [f64; 4], comp: usize) -> [f64; 4] {
        q[comp] = -q[comp];
        q
    }

    #[test]
    fn periodic_wraps() {
        let grid = Grid::new_1d(0.0, 4.0, 4, 2).unwrap();
        let mut f = Field::<3>::new(&grid);
        f.set_interior(&[[1.0; 3], [2.0; 3], [3.0; 3], [4.0; 3]]);
        fill_ghosts(&mut f, &grid, &BoundarySpec::periodic(), &GasModel::air(), 0.0);
        let row: Vec<f64> = f.row(0).iter().map(|q| q[0]).collect();
        assert_eq!(row, vec![3.0, 4.0, 1.0, 2.0, 3.0, 4.0, 1.0, 2.0]);
    }

    #[test]
    fn reflective_negates_normal_momentum() {
        let grid = Grid::new_2d((0.0, 1.0), (0.0, 1.0), 3, 3, 2).unwrap();
        let mut f = Field::<4>::new(&grid);
        let vals: Vec<[f64; 4]> = (0..9).map(|k| [1.0 + k as f64, 0.1 * k as f64, 0.2, 3.0]).collect();
        f.set_interior(&vals);
        fill_ghosts(&mut f, &grid, &BoundarySpec::uniform(BoundaryCondition::Reflective), &GasModel::air(), 0.0);
        assert_eq!(*f.get(-1, 1), negate(*f.get(0, 1), 1));
        assert_eq!(*f.get(-2, 1), negate(*f.get(1, 1), 1));
        assert_eq!(*f.get(1, 3), negate(*f.get(1, 2), 2));
        assert_eq!(*f.get(1, -2), negate(*f.get(1, 1), 2));
    }

    #[test]
    fn dmr_trace_geometry() {
        let trace = ShockTrace {
            x0: 1.0 / 6.0,
            incline: std::f64::consts::FRAC_PI_3,
            speed: 10.0,
            post: PrimitiveState::new(8.0, 0.0, 0.0, 116.5),
            pre: PrimitiveState::new(1.4, 0.0, 0.0, 1.0),
        };
        let t = 0.13;
        let expect = 1.0 / 6.0 + (1.0 + 20.0 * t) / 3f64.sqrt();
        assert!((trace.position(1.0, t) - expect).abs() < 1e-14);
        assert_eq!(trace.state_at(expect - 1e-6, 1.0, t).rho, 8.0);
        assert_eq!(trace.state_at(expect + 1e-6, 1.0, t).rho, 1.4);
    }

    #[test]
    fn wall_from_switches_at_x0() {
        let grid = Grid::new_2d((0.0, 1.0), (0.0, 1.0), 4, 2, 1).unwrap();
        let gas = GasModel::air();
        let mut f = Field::<4>::new(&grid);
        f.set_interior(&vec![[1.0, 0.3, 0.4, 3.0]; 8]);
        let inflow = PrimitiveState::new(2.0, 0.0, 0.0, 1.0);
        let spec = BoundarySpec {
            bottom: BoundaryCondition::WallFrom { x0: 0.5, inflow },
            ..BoundarySpec::uniform(BoundaryCondition::Outflow)
        };
        fill_ghosts(&mut f, &grid, &spec, &gas, 0.0);
        assert_eq!(f.get(0, -1)[0], 2.0);
        assert_eq!(*f.get(3, -1), [1.0, 0.3, -0.4, 3.0]);
        assert_eq!(*f.get(0, 2), [1.0, 0.3, 0.4, 3.0]);
    }

    #[test]
    fn partial_wall_rejected_on_x_sides() {
        let grid = Grid::new_1d(0.0, 1.0, 4, 2).unwrap();
        let spec = BoundarySpec {
            left: BoundaryCondition::WallFrom {
                x0: 0.0,
                inflow: PrimitiveState::new_1d(1.0, 0.0, 1.0),
            },
            ..BoundarySpec::periodic()
        };
        assert!(spec.validate(&grid).is_err());
        let spec = BoundarySpec {
            left: BoundaryCondition::Outflow,
            ..BoundarySpec::periodic()
        };
        assert!(spec.validate(&grid).is_err());
    }
}
