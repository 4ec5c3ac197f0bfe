//! Snapshot matrices, their time grids and column windows.

mod io;

pub use io::{
    load, load_with_sidecar, read_matrix, read_sidecar, save, save_with_sidecar, sidecar_path,
    write_matrix, RawMatrix,
};

use crate::error::{Error, Result};
use faer::{Mat, MatRef};
use serde::{Deserialize, Serialize};

/// Times attached to the stored columns: column `k` is at `t0 + k * dt_snap`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t0: f64,
    pub dt_snap: f64,
    pub count: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, dt_snap: f64, count: usize) -> Result<Self> {
        if !(dt_snap > 0.0) || !dt_snap.is_finite() || !t0.is_finite() {
            return Err(Error::Parameter(format!(
                "time grid needs finite t0 and dt_snap > 0, got t0 = {t0}, dt_snap = {dt_snap}"
            )));
        }
        if count < 2 {
            return Err(Error::Parameter(format!(
                "time grid needs at least 2 snapshots, got {count}"
            )));
        }
        Ok(Self { t0, dt_snap, count })
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt_snap
    }

    /// Grid of the columns selected by `window`.
    ///
    /// The count of a one-column window is reported as 1 even though a
    /// standalone grid requires two.
    pub fn restrict(&self, window: ColumnWindow) -> TimeGrid {
        TimeGrid {
            t0: self.time(window.start),
            dt_snap: self.dt_snap,
            count: window.len,
        }
    }
}

/// Row layout of a snapshot matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "n")]
pub enum Layout {
    /// One field with `n` rows.
    Single(usize),
    /// Two stacked fields `[u; v]`, each of `n` rows.
    Coupled(usize),
}

impl Layout {
    pub fn block(&self) -> usize {
        match *self {
            Layout::Single(n) | Layout::Coupled(n) => n,
        }
    }

    pub fn rows(&self) -> usize {
        match *self {
            Layout::Single(n) => n,
            Layout::Coupled(n) => 2 * n,
        }
    }
}

/// Field selector for coupled data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    U,
    V,
}

/// Contiguous range of columns `start..start + len`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnWindow {
    pub start: usize,
    pub len: usize,
}

impl ColumnWindow {
    pub fn end(&self) -> usize {
        self.start + self.len
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.start..self.end()
    }
}

/// Dataset `S` whose columns are the stored states.
#[derive(Clone, Debug)]
pub struct SnapshotMatrix {
    data: Mat<f64>,
    grid: TimeGrid,
    layout: Layout,
}

impl SnapshotMatrix {
    pub fn new(data: Mat<f64>, grid: TimeGrid, layout: Layout) -> Result<Self> {
        if data.ncols() != grid.count {
            return Err(Error::Dimension(format!(
                "{} columns but the time grid has {} snapshots",
                data.ncols(),
                grid.count
            )));
        }
        if data.nrows() != layout.rows() || layout.block() == 0 {
            return Err(Error::Dimension(format!(
                "{} rows do not match layout {layout:?}",
                data.nrows()
            )));
        }
        for j in 0..data.ncols() {
            if let Some(i) = data.col(j).iter().position(|x| !x.is_finite()) {
                return Err(Error::Nonfinite(format!("snapshot entry ({i}, {j})")));
            }
        }
        Ok(Self { data, grid, layout })
    }

    /// Single-field matrix with `t0 = 0` and unit spacing.
    pub fn from_columns(data: Mat<f64>) -> Result<Self> {
        let grid = TimeGrid::new(0.0, 1.0, data.ncols())?;
        let rows = data.nrows();
        Self::new(data, grid, Layout::Single(rows))
    }

    pub fn data(&self) -> MatRef<'_, f64> {
        self.data.as_ref()
    }

    pub fn into_data(self) -> Mat<f64> {
        self.data
    }

    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn nrows(&self) -> usize {
        self.data.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.data.ncols()
    }

    /// Rows of one field.
    pub fn field(&self, field: Field) -> Result<MatRef<'_, f64>> {
        match (self.layout, field) {
            (Layout::Single(_), Field::U) => Ok(self.data.as_ref()),
            (Layout::Single(_), Field::V) => Err(Error::Dimension(
                "single-field data has no v block".into(),
            )),
            (Layout::Coupled(n), Field::U) => Ok(self.data.subrows(0, n)),
            (Layout::Coupled(n), Field::V) => Ok(self.data.subrows(n, n)),
        }
    }

    pub fn full_window(&self) -> ColumnWindow {
        ColumnWindow {
            start: 0,
            len: self.ncols(),
        }
    }

    /// Borrowed view of the columns in `window`.
    pub fn view(&self, window: ColumnWindow) -> Result<WindowView<'_>> {
        if window.len == 0 || window.end() > self.ncols() {
            return Err(Error::Dimension(format!(
                "window {window:?} outside a matrix with {} columns",
                self.ncols()
            )));
        }
        Ok(WindowView {
            data: self.data.subcols(window.start, window.len),
            grid: self.grid.restrict(window),
            window,
        })
    }

    pub fn full_view(&self) -> WindowView<'_> {
        WindowView {
            data: self.data.as_ref(),
            grid: self.grid,
            window: self.full_window(),
        }
    }
}

/// Columns of a snapshot matrix together with their times and position.
#[derive(Clone, Copy, Debug)]
pub struct WindowView<'a> {
    pub data: MatRef<'a, f64>,
    pub grid: TimeGrid,
    pub window: ColumnWindow,
}

/// `x_k = [u_k; v_k]` for every column.
pub fn stack_coupled(u: MatRef<'_, f64>, v: MatRef<'_, f64>, grid: TimeGrid) -> Result<SnapshotMatrix> {
    if u.nrows() != v.nrows() || u.ncols() != v.ncols() {
        return Err(Error::Dimension(format!(
            "u is {}x{} but v is {}x{}",
            u.nrows(),
            u.ncols(),
            v.nrows(),
            v.ncols()
        )));
    }
    let n = u.nrows();
    let data = Mat::from_fn(2 * n, u.ncols(), |i, j| if i < n { u[(i, j)] } else { v[(i - n, j)] });
    SnapshotMatrix::new(data, grid, Layout::Coupled(n))
}

/// Split `columns` into `n_parts` contiguous windows.
///
/// With `nu = ceil(columns / n_parts)`, the first
/// `columns - n_parts * (nu - 1)` windows hold `nu` columns and the rest
/// hold `nu - 1`, so widths differ by at most one. Fails with
/// [`Error::PartitionTooFine`] when the narrowest window would have fewer
/// than `nu_star` columns or fewer than two.
pub fn partition_columns(columns: usize, n_parts: usize, nu_star: usize) -> Result<Vec<ColumnWindow>> {
    if n_parts == 0 {
        return Err(Error::Parameter("number of windows must be at least 1".into()));
    }
    let too_fine = Error::PartitionTooFine {
        columns,
        n_parts,
        nu_star,
    };
    if n_parts > columns {
        return Err(too_fine);
    }
    let narrow = columns / n_parts;
    let wide_count = columns % n_parts;
    if narrow < nu_star.max(2) {
        return Err(too_fine);
    }
    let mut windows = Vec::with_capacity(n_parts);
    let mut start = 0;
    for i in 0..n_parts {
        let len = if i < wide_count { narrow + 1 } else { narrow };
        windows.push(ColumnWindow { start, len });
        start += len;
    }
    Ok(windows)
}

/// [`partition_columns`] over the columns of `s`.
pub fn partition(s: &SnapshotMatrix, n_parts: usize, nu_star: usize) -> Result<Vec<ColumnWindow>> {
    partition_columns(s.ncols(), n_parts, nu_star)
}

/// Spatial average of one field at every stored time.
pub fn spatial_mean_series(s: &SnapshotMatrix, field: Field) -> Result<Vec<f64>> {
    let block = s.field(field)?;
    Ok(column_means(block))
}

pub(crate) fn column_means(block: MatRef<'_, f64>) -> Vec<f64> {
    let n = block.nrows() as f64;
    (0..block.ncols())
        .map(|j| block.col(j).iter().sum::<f64>() / n)
        .collect()
}
