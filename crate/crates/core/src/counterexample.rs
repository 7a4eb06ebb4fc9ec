//! The three-brick family `1 x R`, `R x 1`, `(R-1) x (R-1)` tiling an
//! `(R+1) x (R+1)` box as a pinwheel, and the exhaustive check that no
//! hyperplane cut splits that box into two parts each tileable by a proper
//! subset of the three types.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_cover::{build_grid, exact_cover_tileable, SolverConfig, TileOutcome};
use crate::geometry::{BoxSpec, Brick, Placement, Tiling};
use crate::rational::Rational;

/// Smallest `R` for which the family is a genuine counterexample: for
/// `R = 3` the 4 x 4 box splits into two 2 x 4 halves tiled by the 2 x 2
/// square alone, and `R = 2` degenerates similarly.
pub const MIN_R: u64 = 4;

/// Why integer cut positions suffice (and, for rational instances, multiples
/// of the per-axis grid unit): a sub-box of width `alpha` tiled on its own
/// is crossed by a generic line along the cut axis in a chain of brick
/// widths, so `alpha` is a nonnegative integer combination of the widths and
/// therefore a multiple of their gcd.
pub const CUT_LEMMA: &str = "admissible cuts are multiples of the per-axis grid unit: a tiled sub-box \
of width alpha is crossed by a generic axis-parallel line in a chain of brick widths, so alpha is a \
nonnegative integer combination of those widths";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeBrickInstance {
    #[serde(rename = "R")]
    pub r: u64,
    #[serde(rename = "box")]
    pub box_spec: BoxSpec,
    pub bricks: Vec<Brick>,
}

impl ThreeBrickInstance {
    /// `(R+1)^2 = 2R + 2R + (R-1)^2`, checked exactly.
    pub fn area_identity_holds(&self) -> bool {
        let strips: Rational = self.bricks[..2].iter().map(|b| b.volume() * Rational::from(2u64)).sum();
        self.box_spec.volume() == strips + self.bricks[2].volume()
    }
}

pub fn make_instance(r: u64) -> Result<ThreeBrickInstance> {
    if r < MIN_R {
        return Err(Error::InvalidFamilyParameter(r));
    }
    Ok(unchecked_instance(r))
}

/// Family member without the `R >= 4` gate, for demonstrating why the gate exists.
pub fn unchecked_instance(r: u64) -> ThreeBrickInstance {
    let int = |v: u64| Rational::from(v);
    let brick = |x: u64, y: u64| Brick::new(vec![int(x), int(y)]).expect("positive extents");
    ThreeBrickInstance {
        r,
        box_spec: BoxSpec::new(vec![int(r + 1), int(r + 1)]).expect("positive extents"),
        bricks: vec![brick(1, r), brick(r, 1), brick(r - 1, r - 1)],
    }
}

/// Four strips wound around the central square.
pub fn pinwheel_tiling(inst: &ThreeBrickInstance) -> Tiling {
    let r = inst.r;
    let at = |b: usize, x: u64, y: u64| Placement::new(b, vec![Rational::from(x), Rational::from(y)]);
    let placements = vec![at(2, 1, 1), at(1, 0, 0), at(0, r, 0), at(1, 1, r), at(0, 0, 1)];
    Tiling::new(inst.box_spec.clone(), inst.bricks.clone(), placements).expect("pinwheel placements lie inside the box")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SideOutcome {
    #[serde(rename = "SAT")]
    Sat,
    #[serde(rename = "UNSAT")]
    Unsat,
    #[serde(rename = "TIMEOUT")]
    Timeout,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitEntry {
    #[serde(with = "crate::one_based")]
    pub axis: usize,
    pub alpha: Rational,
    pub left_subset: Vec<usize>,
    pub right_subset: Vec<usize>,
    pub left: SideOutcome,
    pub right: SideOutcome,
}

impl SplitEntry {
    pub fn is_split(&self) -> bool {
        self.left == SideOutcome::Sat && self.right == SideOutcome::Sat
    }

    pub fn has_timeout(&self) -> bool {
        self.left == SideOutcome::Timeout || self.right == SideOutcome::Timeout
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Every entry has an UNSAT side.
    NoSplit,
    /// Index of the first entry with both sides SAT.
    SplitFound(usize),
    /// No split among the decided entries, but some sides timed out.
    Undecided { timeouts: usize },
}

/// One entry per (axis, cut, left subset, right subset), in that nesting order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NoSplitReport {
    pub entries: Vec<SplitEntry>,
}

impl NoSplitReport {
    pub fn verdict(&self) -> Verdict {
        if let Some(i) = self.entries.iter().position(SplitEntry::is_split) {
            return Verdict::SplitFound(i);
        }
        match self.timeouts() {
            0 => Verdict::NoSplit,
            timeouts => Verdict::Undecided { timeouts },
        }
    }

    pub fn first_split(&self) -> Option<&SplitEntry> {
        self.entries.iter().find(|e| e.is_split())
    }

    pub fn timeouts(&self) -> usize {
        self.entries.iter().filter(|e| e.has_timeout()).count()
    }

    pub fn cut_lemma(&self) -> &'static str {
        CUT_LEMMA
    }
}

/// All ordered pairs of nonempty proper subsets of `{0, .., k-1}`, each
/// subset listed by increasing bitmask.
pub fn proper_subset_pairs(k: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let full = (1usize << k) - 1;
    let subsets: Vec<Vec<usize>> = (1..full).map(|mask| (0..k).filter(|i| mask >> i & 1 == 1).collect()).collect();
    subsets.iter().flat_map(|l| subsets.iter().map(move |r| (l.clone(), r.clone()))).collect()
}

/// Tries every cut on every axis at multiples of the grid unit strictly
/// inside the box, deciding each side with the exact-cover tiler restricted
/// to the given brick subsets.
pub fn split_search(
    box_spec: &BoxSpec,
    bricks: &[Brick],
    subset_pairs: &[(Vec<usize>, Vec<usize>)],
    config: &SolverConfig,
) -> Result<NoSplitReport> {
    for (l, r) in subset_pairs {
        if let Some(&bad) = l.iter().chain(r).find(|&&i| i >= bricks.len()) {
            return Err(Error::InvalidInstance(format!("subset refers to brick {bad}")));
        }
    }
    let grid = build_grid(box_spec, bricks, config.grid_cap)?;
    let mut memo: HashMap<(Vec<Rational>, Vec<usize>), SideOutcome> = HashMap::new();
    let mut decide = |dims: Vec<Rational>, subset: &[usize]| -> Result<SideOutcome> {
        let key = (dims, subset.to_vec());
        if let Some(&hit) = memo.get(&key) {
            return Ok(hit);
        }
        let sub_box = BoxSpec::new(key.0.clone())?;
        let chosen: Vec<Brick> = subset.iter().map(|&i| bricks[i].clone()).collect();
        let outcome = match exact_cover_tileable(&sub_box, &chosen, config)? {
            TileOutcome::Tiling(_) => SideOutcome::Sat,
            TileOutcome::Unsat => SideOutcome::Unsat,
            TileOutcome::Timeout { .. } => SideOutcome::Timeout,
        };
        memo.insert(key, outcome);
        Ok(outcome)
    };

    let mut entries = Vec::new();
    for axis in 0..box_spec.ndim() {
        let unit = &grid.unit[axis];
        for step in 1..grid.cells[axis] {
            let alpha = Rational::from(step as u64) * unit;
            let mut left_dims = box_spec.dims().to_vec();
            let mut right_dims = box_spec.dims().to_vec();
            left_dims[axis] = alpha.clone();
            right_dims[axis] = box_spec.dim(axis) - &alpha;
            for (ls, rs) in subset_pairs {
                let left = decide(left_dims.clone(), ls)?;
                let right = decide(right_dims.clone(), rs)?;
                entries.push(SplitEntry {
                    axis,
                    alpha: alpha.clone(),
                    left_subset: ls.clone(),
                    right_subset: rs.clone(),
                    left,
                    right,
                });
            }
        }
    }
    Ok(NoSplitReport { entries })
}

pub fn verify_no_proper_split(inst: &ThreeBrickInstance, config: &SolverConfig) -> Result<NoSplitReport> {
    split_search(&inst.box_spec, &inst.bricks, &proper_subset_pairs(inst.bricks.len()), config)
}

/// Appends `d - 2` unit extents to the box and every brick, and zero offsets
/// to every placement.
pub fn lift_to_dimension(t: &Tiling, d: usize) -> Result<Tiling> {
    if t.ndim() != 2 {
        return Err(Error::InvalidLift(format!("expected a planar tiling, got dimension {}", t.ndim())));
    }
    if d <= 2 {
        return Err(Error::InvalidLift(format!("target dimension {d} must exceed 2")));
    }
    let pad = |dims: &[Rational]| -> Vec<Rational> {
        dims.iter().cloned().chain(std::iter::repeat_n(Rational::one(), d - 2)).collect()
    };
    let box_spec = BoxSpec::new(pad(t.box_spec().dims()))?;
    let bricks = t.bricks().iter().map(|b| Brick::new(pad(b.dims()))).collect::<Result<Vec<_>>>()?;
    let placements = t
        .placements()
        .iter()
        .map(|p| {
            let offset = p.offset.iter().cloned().chain(std::iter::repeat_n(Rational::zero(), d - 2)).collect();
            Placement::new(p.brick, offset)
        })
        .collect();
    Tiling::new(box_spec, bricks, placements)
}

/// Inverse of [`lift_to_dimension`]: drops trailing unit axes.
pub fn project_to_plane(t: &Tiling) -> Result<Tiling> {
    if t.ndim() < 2 {
        return Err(Error::InvalidLift("tiling has fewer than two axes".into()));
    }
    let is_unit_tail = |dims: &[Rational]| dims[2..].iter().all(|x| *x == 1);
    if !is_unit_tail(t.box_spec().dims()) || !t.bricks().iter().all(|b| is_unit_tail(b.dims())) {
        return Err(Error::InvalidLift("trailing extents are not all 1".into()));
    }
    if !t.placements().iter().all(|p| p.offset[2..].iter().all(Rational::is_zero)) {
        return Err(Error::InvalidLift("trailing offsets are not all 0".into()));
    }
    let box_spec = BoxSpec::new(t.box_spec().dims()[..2].to_vec())?;
    let bricks = t.bricks().iter().map(|b| Brick::new(b.dims()[..2].to_vec())).collect::<Result<Vec<_>>>()?;
    let placements = t.placements().iter().map(|p| Placement::new(p.brick, p.offset[..2].to_vec())).collect();
    Tiling::new(box_spec, bricks, placements)
}
