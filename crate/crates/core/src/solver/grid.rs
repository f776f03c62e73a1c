use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform cell-centred grid, 1D or 2D.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_range: (f64, f64),
    pub y_range: Option<(f64, f64)>,
    pub nx: usize,
    /// 1 for 1D grids.
    pub ny: usize,
    pub ghost: usize,
}

impl Grid {
    pub fn new_1d(a: f64, b: f64, n: usize, ghost: usize) -> Result<Self> {
        if !(b > a) || n == 0 {
            return Err(Error::Config(format!("bad 1D grid [{a}, {b}] with {n} cells")));
        }
        Ok(Self {
            x_range: (a, b),
            y_range: None,
            nx: n,
            ny: 1,
            ghost,
        })
    }

    pub fn new_2d(x_range: (f64, f64), y_range: (f64, f64), nx: usize, ny: usize, ghost: usize) -> Result<Self> {
        if !(x_range.1 > x_range.0) || !(y_range.1 > y_range.0) || nx == 0 || ny == 0 {
            return Err(Error::Config(format!(
                "bad 2D grid {x_range:?} x {y_range:?} with {nx} x {ny} cells"
            )));
        }
        Ok(Self {
            x_range,
            y_range: Some(y_range),
            nx,
            ny,
            ghost,
        })
    }

    #[inline]
    pub fn is_2d(&self) -> bool {
        self.y_range.is_some()
    }

    pub fn dim(&self) -> usize {
        if self.is_2d() {
            2
        } else {
            1
        }
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        (self.x_range.1 - self.x_range.0) / self.nx as f64
    }

    /// `dx` on 1D grids.
    #[inline]
    pub fn dy(&self) -> f64 {
        match self.y_range {
            Some((c, d)) => (d - c) / self.ny as f64,
            None => self.dx(),
        }
    }

    /// Cell volume.
    pub fn cell_volume(&self) -> f64 {
        if self.is_2d() {
            self.dx() * self.dy()
        } else {
            self.dx()
        }
    }

    /// Centre of cell `i` (0-based; negative and `>= nx` address ghosts).
    #[inline]
    pub fn x(&self, i: isize) -> f64 {
        self.x_range.0 + (i as f64 + 0.5) * self.dx()
    }

    #[inline]
    pub fn y(&self, j: isize) -> f64 {
        match self.y_range {
            Some((c, _)) => c + (j as f64 + 0.5) * self.dy(),
            None => 0.0,
        }
    }

    pub fn cells(&self) -> usize {
        self.nx * self.ny
    }
}

/// Cell data with ghost layers: `ghost` columns on each x side and, in 2D,
/// `ghost` rows on each y side. Rows are stored with x fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<const M: usize> {
    nx: usize,
    ny: usize,
    ghost: usize,
    ghost_y: usize,
    stride: usize,
    pub(crate) data: Vec<[f64; M]>,
}

impl<const M: usize> Field<M> {
    pub fn new(grid: &Grid) -> Self {
        let ghost_y = if grid.is_2d() { grid.ghost } else { 0 };
        let stride = grid.nx + 2 * grid.ghost;
        let rows = grid.ny + 2 * ghost_y;
        Self {
            nx: grid.nx,
            ny: grid.ny,
            ghost: grid.ghost,
            ghost_y,
            stride,
            data: vec![[0.0; M]; stride * rows],
        }
    }

    #[inline]
    pub fn index(&self, i: isize, j: isize) -> usize {
        let ii = (i + self.ghost as isize) as usize;
        let jj = (j + self.ghost_y as isize) as usize;
        jj * self.stride + ii
    }

    #[inline]
    pub fn get(&self, i: isize, j: isize) -> &[f64; M] {
        &self.data[self.index(i, j)]
    }

    #[inline]
    pub fn get_mut(&mut self, i: isize, j: isize) -> &mut [f64; M] {
        let k = self.index(i, j);
        &mut self.data[k]
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn ghost(&self) -> usize {
        self.ghost
    }

    /// Row `j` including its x ghosts.
    #[inline]
    pub fn row(&self, j: isize) -> &[[f64; M]] {
        let start = self.index(-(self.ghost as isize), j);
        &self.data[start..start + self.stride]
    }

    /// Interior values, x fastest.
    pub fn interior(&self) -> Vec<[f64; M]> {
        let mut out = Vec::with_capacity(self.nx * self.ny);
        for j in 0..self.ny as isize {
            let start = self.index(0, j);
            out.extend_from_slice(&self.data[start..start + self.nx]);
        }
        out
    }

    /// Overwrites interior values from an x-fastest slice.
    pub fn set_interior(&mut self, values: &[[f64; M]]) {
        assert_eq!(values.len(), self.nx * self.ny);
        for j in 0..self.ny {
            let start = self.index(0, j as isize);
            self.data[start..start + self.nx].copy_from_slice(&values[j * self.nx..(j + 1) * self.nx]);
        }
    }
}
