//! Bricks, boxes, placements and the geometric tiling check.
//!
//! Coordinates are origin-anchored: a box with extents `L` occupies
//! `[0, L_1] x ... x [0, L_d]`, and a placement records the lowest corner of
//! the placed brick.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub fn volume(dims: &[Rational]) -> Rational {
    dims.iter().product()
}

fn validate_extents(dims: &[Rational], what: &str) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::InvalidInstance(format!("{what} has no dimensions")));
    }
    if let Some(bad) = dims.iter().find(|x| !x.is_positive()) {
        return Err(Error::NonPositive(format!("{what} extent {bad}")));
    }
    Ok(())
}

macro_rules! extents_type {
    ($(#[$meta:meta])* $name:ident, $what:literal) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
        #[serde(try_from = "Vec<Rational>", into = "Vec<Rational>")]
        pub struct $name {
            dims: Vec<Rational>,
        }

        impl $name {
            pub fn new(dims: Vec<Rational>) -> Result<Self> {
                validate_extents(&dims, $what)?;
                Ok(Self { dims })
            }

            /// Parses a comma-separated extent list such as `"1/4,1/2"`.
            pub fn parse(s: &str) -> Result<Self> {
                Self::new(crate::rational::parse_dims(s)?)
            }

            pub fn dims(&self) -> &[Rational] {
                &self.dims
            }

            pub fn dim(&self, axis: usize) -> &Rational {
                &self.dims[axis]
            }

            pub fn ndim(&self) -> usize {
                self.dims.len()
            }

            pub fn volume(&self) -> Rational {
                volume(&self.dims)
            }
        }

        impl TryFrom<Vec<Rational>> for $name {
            type Error = Error;
            fn try_from(dims: Vec<Rational>) -> Result<Self> {
                Self::new(dims)
            }
        }

        impl From<$name> for Vec<Rational> {
            fn from(v: $name) -> Vec<Rational> {
                v.dims
            }
        }
    };
}

extents_type!(
    /// A brick type, used only under translation.
    Brick,
    "brick"
);
extents_type!(
    /// The box to be tiled.
    BoxSpec,
    "box"
);

impl BoxSpec {
    pub fn unit(d: usize) -> Self {
        BoxSpec { dims: vec![Rational::one(); d] }
    }
}

pub(crate) fn check_dims(expected: usize, found: usize, context: &str) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found, context: context.to_string() });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Placement {
    pub brick: usize,
    pub offset: Vec<Rational>,
}

impl Placement {
    pub fn new(brick: usize, offset: Vec<Rational>) -> Self {
        Placement { brick, offset }
    }
}

/// True iff the open boxes of the two placements do not intersect.
pub fn interiors_disjoint(p: &Placement, q: &Placement, bricks: &[Brick]) -> bool {
    let (bp, bq) = (&bricks[p.brick], &bricks[q.brick]);
    p.offset.iter().zip(&q.offset).enumerate().any(|(axis, (op, oq))| {
        let hi_p = op + bp.dim(axis);
        let hi_q = oq + bq.dim(axis);
        let lo = op.max(oq);
        let hi = if hi_p < hi_q { hi_p } else { hi_q };
        lo >= &hi
    })
}

/// A set of placed bricks inside a box.
///
/// Construction checks only structure (dimensions agree, indices are in
/// range, every placement lies inside the box). Whether the placements
/// actually tile the box is decided by [`verify_tiling_geometric`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTiling")]
pub struct Tiling {
    #[serde(rename = "box")]
    box_spec: BoxSpec,
    bricks: Vec<Brick>,
    placements: Vec<Placement>,
}

#[derive(Deserialize)]
struct RawTiling {
    #[serde(rename = "box")]
    box_spec: BoxSpec,
    bricks: Vec<Brick>,
    placements: Vec<Placement>,
}

impl TryFrom<RawTiling> for Tiling {
    type Error = Error;
    fn try_from(raw: RawTiling) -> Result<Self> {
        Tiling::new(raw.box_spec, raw.bricks, raw.placements)
    }
}

impl Tiling {
    pub fn new(box_spec: BoxSpec, bricks: Vec<Brick>, placements: Vec<Placement>) -> Result<Self> {
        let d = box_spec.ndim();
        for b in &bricks {
            check_dims(d, b.ndim(), "brick vs box")?;
        }
        for (idx, p) in placements.iter().enumerate() {
            let brick = bricks.get(p.brick).ok_or_else(|| {
                Error::InvalidInstance(format!(
                    "placement {idx} refers to brick {} but only {} types exist",
                    p.brick,
                    bricks.len()
                ))
            })?;
            check_dims(d, p.offset.len(), "placement offset vs box")?;
            for (axis, o) in p.offset.iter().enumerate() {
                if o < &Rational::zero() || &(o + brick.dim(axis)) > box_spec.dim(axis) {
                    return Err(Error::InvalidInstance(format!("placement {idx} leaves the box along axis {axis}")));
                }
            }
        }
        Ok(Tiling { box_spec, bricks, placements })
    }

    pub fn box_spec(&self) -> &BoxSpec {
        &self.box_spec
    }

    pub fn bricks(&self) -> &[Brick] {
        &self.bricks
    }

    pub fn placements(&self) -> &[Placement] {
        &self.placements
    }

    pub fn ndim(&self) -> usize {
        self.box_spec.ndim()
    }

    pub fn placed_volume(&self) -> Rational {
        self.placements.iter().map(|p| self.bricks[p.brick].volume()).sum()
    }

    /// Copy of this tiling with the placement at `index` removed.
    pub fn without_placement(&self, index: usize) -> Tiling {
        let mut t = self.clone();
        t.placements.remove(index);
        t
    }

    pub fn into_parts(self) -> (BoxSpec, Vec<Brick>, Vec<Placement>) {
        (self.box_spec, self.bricks, self.placements)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum VerifyOutcome {
    Ok,
    /// Indices of the first pair of placements whose interiors meet.
    Overlap {
        pair: (usize, usize),
    },
    VolumeMismatch {
        placed: Rational,
        expected: Rational,
    },
    /// Lowest corner of an uncovered cell of the refinement grid.
    CoverageGap {
        cell: Vec<Rational>,
    },
}

impl VerifyOutcome {
    pub fn is_ok(&self) -> bool {
        matches!(self, VerifyOutcome::Ok)
    }
}

/// Exact check that the placements tile the box: pairwise disjoint
/// interiors, matching volume, and full coverage. Returns the first
/// violated condition in that order.
pub fn verify_tiling_geometric(t: &Tiling) -> VerifyOutcome {
    let ps = t.placements();
    for i in 0..ps.len() {
        for j in i + 1..ps.len() {
            if !interiors_disjoint(&ps[i], &ps[j], t.bricks()) {
                return VerifyOutcome::Overlap { pair: (i, j) };
            }
        }
    }

    let placed = t.placed_volume();
    let expected = t.box_spec().volume();
    if placed != expected {
        return VerifyOutcome::VolumeMismatch { placed, expected };
    }

    match first_uncovered_cell(t) {
        Some(cell) => VerifyOutcome::CoverageGap { cell },
        None => VerifyOutcome::Ok,
    }
}

/// Coverage on the grid induced by all brick faces and the box faces.
fn first_uncovered_cell(t: &Tiling) -> Option<Vec<Rational>> {
    let d = t.ndim();
    let breaks: Vec<Vec<Rational>> = (0..d)
        .map(|axis| {
            let mut v = vec![Rational::zero(), t.box_spec().dim(axis).clone()];
            for p in t.placements() {
                v.push(p.offset[axis].clone());
                v.push(&p.offset[axis] + t.bricks()[p.brick].dim(axis));
            }
            v.sort();
            v.dedup();
            v
        })
        .collect();
    let counts: Vec<usize> = breaks.iter().map(|b| b.len() - 1).collect();
    let strides = strides(&counts);
    let mut covered = vec![false; counts.iter().product()];

    for p in t.placements() {
        let brick = &t.bricks()[p.brick];
        let ranges: Vec<(usize, usize)> = (0..d)
            .map(|axis| {
                let lo = breaks[axis].binary_search(&p.offset[axis]).unwrap();
                let hi = breaks[axis].binary_search(&(&p.offset[axis] + brick.dim(axis))).unwrap();
                (lo, hi)
            })
            .collect();
        let extents: Vec<usize> = ranges.iter().map(|(lo, hi)| hi - lo).collect();
        for idx in MultiIndex::new(&extents) {
            let flat: usize = idx.iter().zip(&ranges).zip(&strides).map(|((i, (lo, _)), s)| (i + lo) * s).sum();
            covered[flat] = true;
        }
    }

    let gap = covered.iter().position(|c| !c)?;
    let mut rest = gap;
    Some(
        (0..d)
            .map(|axis| {
                let i = rest % counts[axis];
                rest /= counts[axis];
                breaks[axis][i].clone()
            })
            .collect(),
    )
}

/// Row-major strides with axis 0 varying fastest.
pub(crate) fn strides(counts: &[usize]) -> Vec<usize> {
    let mut s = Vec::with_capacity(counts.len());
    let mut acc = 1;
    for &c in counts {
        s.push(acc);
        acc *= c;
    }
    s
}

/// Iterates all integer points of `[0, c_1) x ... x [0, c_d)`, axis 0 fastest.
pub(crate) struct MultiIndex {
    counts: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl MultiIndex {
    pub(crate) fn new(counts: &[usize]) -> Self {
        let next = if counts.contains(&0) { None } else { Some(vec![0; counts.len()]) };
        MultiIndex { counts: counts.to_vec(), next }
    }
}

impl Iterator for MultiIndex {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for axis in 0..succ.len() {
            succ[axis] += 1;
            if succ[axis] < self.counts[axis] {
                self.next = Some(succ);
                return Some(current);
            }
            succ[axis] = 0;
        }
        Some(current)
    }
}
