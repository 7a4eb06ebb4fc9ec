//! Brute-force tileability oracle.
//!
//! A rational box and a list of brick types are discretized onto the
//! coarsest grid on which every extent is a whole number of cells. Each
//! (brick type, integer offset) that fits becomes a row of an exact-cover
//! matrix whose columns are the grid cells; a tiling is a set of rows that
//! covers every column exactly once. The search is Knuth's Algorithm X on
//! dancing links, run iteratively so deep searches cannot overflow the stack.
//!
//! Bricks are only translated, never rotated.

use std::io::{self, Write};

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::geometry::{check_dims, strides, BoxSpec, Brick, MultiIndex, Placement, Tiling};
use crate::rational::{rational_gcd, Rational};

pub const DEFAULT_GRID_CAP: u64 = 1_000_000;
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Largest admissible total cell count.
    pub grid_cap: u64,
    /// Largest number of search nodes before giving up with a timeout.
    pub node_budget: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { grid_cap: DEFAULT_GRID_CAP, node_budget: DEFAULT_NODE_BUDGET }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridModel {
    /// Per-axis cell size.
    pub unit: Vec<Rational>,
    /// Per-axis cell count.
    pub cells: Vec<usize>,
    /// Per brick type, per-axis extent in cells.
    pub footprints: Vec<Vec<usize>>,
}

impl GridModel {
    pub fn total_cells(&self) -> usize {
        self.cells.iter().product()
    }

    fn to_cells(value: &Rational, unit: &Rational) -> usize {
        (value / unit).to_u64().and_then(|c| usize::try_from(c).ok()).expect("extent is a whole number of grid cells")
    }
}

/// Coarsest grid on which the box and every brick have whole-cell extents.
pub fn build_grid(box_spec: &BoxSpec, bricks: &[Brick], grid_cap: u64) -> Result<GridModel> {
    if bricks.is_empty() {
        return Err(Error::InvalidInstance("at least one brick type is required".into()));
    }
    let d = box_spec.ndim();
    for b in bricks {
        check_dims(d, b.ndim(), "brick vs box")?;
    }

    let mut unit = Vec::with_capacity(d);
    for axis in 0..d {
        let mut g = box_spec.dim(axis).clone();
        for b in bricks {
            g = rational_gcd(&g, b.dim(axis))?;
        }
        unit.push(g);
    }

    let mut total = num_bigint::BigInt::from(1u32);
    for (axis, u) in unit.iter().enumerate() {
        total *= (box_spec.dim(axis) / u).numer();
    }
    if total.to_u64().is_none_or(|t| t > grid_cap) {
        return Err(Error::GridTooLarge { cells: total.to_string(), cap: grid_cap });
    }

    let cells = (0..d).map(|axis| GridModel::to_cells(box_spec.dim(axis), &unit[axis])).collect();
    let footprints =
        bricks.iter().map(|b| (0..d).map(|axis| GridModel::to_cells(b.dim(axis), &unit[axis])).collect()).collect();
    Ok(GridModel { unit, cells, footprints })
}

/// What a cover-matrix row stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowLabel {
    pub brick: usize,
    /// Lowest corner in grid cells.
    pub origin: Vec<usize>,
}

/// A 0/1 exact-cover matrix in sparse form: each row lists the columns it covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverProblem {
    pub columns: usize,
    pub rows: Vec<Vec<usize>>,
}

impl CoverProblem {
    pub fn new(columns: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        for (r, row) in rows.iter().enumerate() {
            if let Some(&c) = row.iter().find(|&&c| c >= columns) {
                return Err(Error::InvalidInstance(format!("row {r} covers column {c} >= {columns}")));
            }
            let mut sorted = row.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidInstance(format!("row {r} repeats a column")));
            }
        }
        Ok(CoverProblem { columns, rows })
    }

    /// Rows for every brick type at every integer offset where it fits,
    /// brick types in order, offsets in cell-index order.
    pub fn from_grid(grid: &GridModel) -> (CoverProblem, Vec<RowLabel>) {
        let strides = strides(&grid.cells);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (brick, fp) in grid.footprints.iter().enumerate() {
            if fp.iter().zip(&grid.cells).any(|(f, c)| f > c) {
                continue;
            }
            let slack: Vec<usize> = fp.iter().zip(&grid.cells).map(|(f, c)| c - f + 1).collect();
            for origin in MultiIndex::new(&slack) {
                let row = MultiIndex::new(fp)
                    .map(|rel| rel.iter().zip(&origin).zip(&strides).map(|((r, o), s)| (r + o) * s).sum())
                    .collect();
                rows.push(row);
                labels.push(RowLabel { brick, origin });
            }
        }
        (CoverProblem { columns: grid.total_cells(), rows }, labels)
    }

    /// Debug dump, one row per line: `row_id: col col col ...`.
    pub fn write_sparse<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# columns {} rows {}", self.columns, self.rows.len())?;
        for (id, row) in self.rows.iter().enumerate() {
            write!(w, "{id}:")?;
            for c in row {
                write!(w, " {c}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverOutcome {
    Unsat,
    /// Row-index sets, each sorted ascending, in discovery order.
    Solutions(Vec<Vec<usize>>),
    /// The node budget ran out before the search finished. Never a verdict.
    Timeout {
        nodes: u64,
        solutions_found: usize,
    },
}

/// Dancing-links matrix. Node 0 is the root, nodes `1..=columns` are column
/// headers, the rest are row entries.
struct Links {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    col: Vec<usize>,
    row: Vec<usize>,
    size: Vec<usize>,
}

impl Links {
    fn new(p: &CoverProblem) -> Links {
        let n_cols = p.columns;
        let n_nodes = 1 + n_cols + p.rows.iter().map(Vec::len).sum::<usize>();
        let mut l = Links {
            left: Vec::with_capacity(n_nodes),
            right: Vec::with_capacity(n_nodes),
            up: Vec::with_capacity(n_nodes),
            down: Vec::with_capacity(n_nodes),
            col: Vec::with_capacity(n_nodes),
            row: Vec::with_capacity(n_nodes),
            size: vec![0; n_cols + 1],
        };
        for i in 0..=n_cols {
            l.left.push(if i == 0 { n_cols } else { i - 1 });
            l.right.push(if i == n_cols { 0 } else { i + 1 });
            l.up.push(i);
            l.down.push(i);
            l.col.push(i);
            l.row.push(usize::MAX);
        }
        for (r, cols) in p.rows.iter().enumerate() {
            let first = l.col.len();
            for (k, &c) in cols.iter().enumerate() {
                let header = c + 1;
                let node = l.col.len();
                let last = l.up[header];
                l.up.push(last);
                l.down.push(header);
                l.down[last] = node;
                l.up[header] = node;
                l.col.push(header);
                l.row.push(r);
                l.size[header] += 1;
                l.left.push(if k == 0 { node } else { node - 1 });
                l.right.push(first);
                if k > 0 {
                    l.right[node - 1] = node;
                    l.left[first] = node;
                }
            }
        }
        l
    }

    fn cover(&mut self, c: usize) {
        let (lc, rc) = (self.left[c], self.right[c]);
        self.right[lc] = rc;
        self.left[rc] = lc;
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.size[self.col[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                self.size[self.col[j]] += 1;
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (lc, rc) = (self.left[c], self.right[c]);
        self.right[lc] = c;
        self.left[rc] = c;
    }

    /// Active column with the fewest remaining rows; ties go to the lowest index.
    fn choose_column(&self) -> usize {
        let mut best = self.right[0];
        let mut c = self.right[best];
        while c != 0 {
            if self.size[c] < self.size[best] {
                best = c;
                if self.size[best] == 0 {
                    break;
                }
            }
            c = self.right[c];
        }
        best
    }

    fn cover_row_others(&mut self, x: usize) {
        let mut j = self.right[x];
        while j != x {
            self.cover(self.col[j]);
            j = self.right[j];
        }
    }

    fn uncover_row_others(&mut self, x: usize) {
        let mut j = self.left[x];
        while j != x {
            self.uncover(self.col[j]);
            j = self.left[j];
        }
    }
}

/// Algorithm X with minimum-remaining-rows column choice.
///
/// `limit` bounds the number of solutions collected (`None` = all). Each
/// entered search node counts against `node_budget`; exhausting it yields
/// [`CoverOutcome::Timeout`], never `Unsat`.
pub fn solve_exact_cover(p: &CoverProblem, limit: Option<usize>, node_budget: u64) -> CoverOutcome {
    if p.columns == 0 {
        return CoverOutcome::Solutions(vec![vec![]]);
    }
    let mut links = Links::new(p);
    let mut solutions: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut nodes: u64 = 0;

    enum Step {
        Descend,
        Try(usize),
        Backtrack,
    }
    let mut step = Step::Descend;

    loop {
        step = match step {
            Step::Descend => {
                if links.right[0] == 0 {
                    let mut rows: Vec<usize> = stack.iter().map(|&x| links.row[x]).collect();
                    rows.sort_unstable();
                    solutions.push(rows);
                    if limit.is_some_and(|lim| solutions.len() >= lim) {
                        break;
                    }
                    Step::Backtrack
                } else {
                    nodes += 1;
                    if nodes > node_budget {
                        return CoverOutcome::Timeout { nodes: nodes - 1, solutions_found: solutions.len() };
                    }
                    let c = links.choose_column();
                    links.cover(c);
                    Step::Try(links.down[c])
                }
            }
            Step::Try(x) => {
                let c = links.col[x];
                if x == c {
                    links.uncover(c);
                    Step::Backtrack
                } else {
                    stack.push(x);
                    links.cover_row_others(x);
                    Step::Descend
                }
            }
            Step::Backtrack => match stack.pop() {
                None => break,
                Some(x) => {
                    links.uncover_row_others(x);
                    Step::Try(links.down[x])
                }
            },
        };
    }

    if solutions.is_empty() {
        CoverOutcome::Unsat
    } else {
        CoverOutcome::Solutions(solutions)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TileOutcome {
    Unsat,
    Tiling(Tiling),
    Timeout { nodes: u64 },
}

impl TileOutcome {
    pub fn is_unsat(&self) -> bool {
        matches!(self, TileOutcome::Unsat)
    }

    pub fn is_timeout(&self) -> bool {
        matches!(self, TileOutcome::Timeout { .. })
    }

    pub fn tiling(&self) -> Option<&Tiling> {
        match self {
            TileOutcome::Tiling(t) => Some(t),
            _ => None,
        }
    }
}

/// Decides by exhaustive search whether the box can be tiled by translates
/// of the given bricks, returning the first tiling found.
pub fn exact_cover_tileable(box_spec: &BoxSpec, bricks: &[Brick], config: &SolverConfig) -> Result<TileOutcome> {
    let grid = build_grid(box_spec, bricks, config.grid_cap)?;

    // A grid whose cell count is not a nonnegative combination of the brick
    // areas cannot be partitioned; skip the search.
    let areas: Vec<usize> = grid.footprints.iter().map(|f| f.iter().product()).collect();
    if !representable(grid.total_cells(), &areas) {
        return Ok(TileOutcome::Unsat);
    }

    let (problem, labels) = CoverProblem::from_grid(&grid);
    match solve_exact_cover(&problem, Some(1), config.node_budget) {
        CoverOutcome::Unsat => Ok(TileOutcome::Unsat),
        CoverOutcome::Timeout { nodes, .. } => Ok(TileOutcome::Timeout { nodes }),
        CoverOutcome::Solutions(sols) => {
            let placements = sols[0]
                .iter()
                .map(|&r| {
                    let label = &labels[r];
                    let offset =
                        label.origin.iter().zip(&grid.unit).map(|(&o, u)| Rational::from(o as u64) * u).collect();
                    Placement::new(label.brick, offset)
                })
                .collect();
            Ok(TileOutcome::Tiling(Tiling::new(box_spec.clone(), bricks.to_vec(), placements)?))
        }
    }
}

/// Whether `total` is a sum of nonnegative multiples of `parts`.
fn representable(total: usize, parts: &[usize]) -> bool {
    let mut reach = vec![false; total + 1];
    reach[0] = true;
    for &p in parts.iter().filter(|&&p| p > 0 && p <= total) {
        for s in p..=total {
            if reach[s - p] {
                reach[s] = true;
            }
        }
    }
    reach[total]
}
