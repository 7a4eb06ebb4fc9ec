//! Tiling boxes by translates of rectangular bricks.
//!
//! * [`geometry`]: exact bricks, boxes, placements and the geometric tiling check.
//! * [`theorem`]: two-brick decisions with hyperplane split certificates.
//! * [`exact_cover`]: an independent brute-force tiler (Algorithm X).
//! * [`spectral`]: Fourier-side verification of tilings and obstructions.
//! * [`counterexample`]: the three-brick pinwheel family that admits no split.
//! * [`svg`]: deterministic SVG rendering of planar tilings.

pub mod counterexample;
pub mod error;
pub mod exact_cover;
pub mod geometry;
pub mod rational;
pub mod spectral;
pub mod svg;
pub mod theorem;

pub use error::{Error, Result};
pub use exact_cover::{exact_cover_tileable, SolverConfig, TileOutcome};
pub use geometry::{verify_tiling_geometric, BoxSpec, Brick, Placement, Tiling, VerifyOutcome};
pub use rational::Rational;
pub use theorem::{decide_two_brick, find_split, DecisionOutcome, SplitCertificate};

/// Axis indices are 0-based in Rust and 1-based in JSON.
pub(crate) mod one_based {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(axis: &usize, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(*axis as u64 + 1)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<usize, D::Error> {
        let v = usize::deserialize(d)?;
        v.checked_sub(1).ok_or_else(|| D::Error::custom("axis indices are 1-based"))
    }
}

pub(crate) mod one_based_pair {
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(pair: &(usize, usize), s: S) -> Result<S::Ok, S::Error> {
        (pair.0 + 1, pair.1 + 1).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(usize, usize), D::Error> {
        let (i, j) = <(usize, usize)>::deserialize(d)?;
        match (i.checked_sub(1), j.checked_sub(1)) {
            (Some(i), Some(j)) => Ok((i, j)),
            _ => Err(D::Error::custom("axis indices are 1-based")),
        }
    }
}
