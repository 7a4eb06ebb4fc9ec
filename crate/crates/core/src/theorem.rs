//! Two-brick tileability via hyperplane splits.
//!
//! If a box is tiled by translates of two bricks `a` and `b`, it can be cut
//! by a single hyperplane `x_j = m * a_j` into a slab tiled by `a` alone and
//! a slab tiled by `b` alone. So a box is two-brick tileable exactly when
//! some axis `j` admits nonnegative `m, n` with `m a_j + n b_j = L_j` and
//! both bricks' cross-sections tile the face orthogonal to `j` (only the
//! used brick matters when `m` or `n` is zero).
//!
//! A necessary condition, checked separately for diagnostics: for every
//! ordered pair of distinct axes `(i, j)`, `L_i / a_i` or `L_j / b_j` is an
//! integer.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{check_dims, BoxSpec, Brick, MultiIndex, Placement, Tiling};
use crate::rational::{common_denominator, Rational};
use crate::spectral::{key_observation_witness, KeyObservationWitness};

/// A hyperplane cut `x_axis = cut` with `m` layers of the left brick below
/// it and `n` layers of the right brick above it.
///
/// `axis` is 0-based in Rust and 1-based in JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCertificate {
    #[serde(with = "crate::one_based")]
    pub axis: usize,
    pub m: u64,
    pub n: u64,
    pub cut: Rational,
    pub left_brick: usize,
    pub right_brick: usize,
}

impl SplitCertificate {
    pub fn is_degenerate(&self) -> bool {
        self.m == 0 || self.n == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum KeyObservation {
    Holds,
    /// Neither `L_i / a_i` nor `L_j / b_j` is an integer (0-based axes, 1-based in JSON).
    Violation {
        #[serde(with = "crate::one_based")]
        i: usize,
        #[serde(with = "crate::one_based")]
        j: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionOutcome {
    pub tileable: bool,
    pub certificate: Option<SplitCertificate>,
    pub obstruction: Option<KeyObservationWitness>,
    pub reason: Option<String>,
}

fn ratio_is_positive_integer(l: &Rational, c: &Rational) -> bool {
    (l / c).is_integer()
}

fn check_pair(box_spec: &BoxSpec, a: &Brick, b: &Brick) -> Result<()> {
    check_dims(box_spec.ndim(), a.ndim(), "brick a vs box")?;
    check_dims(box_spec.ndim(), b.ndim(), "brick b vs box")
}

/// Whether `brick` alone tiles the box, i.e. `L_j / a_j` is an integer on every axis.
pub fn one_brick_tileable(box_spec: &BoxSpec, brick: &Brick) -> Result<bool> {
    check_dims(box_spec.ndim(), brick.ndim(), "brick vs box")?;
    Ok(box_spec.dims().iter().zip(brick.dims()).all(|(l, a)| ratio_is_positive_integer(l, a)))
}

/// Checks the integrality condition on every ordered pair of distinct axes
/// and reports the lexicographically smallest violating pair. Vacuous for
/// `d < 2`.
pub fn key_observation_holds(box_spec: &BoxSpec, a: &Brick, b: &Brick) -> Result<KeyObservation> {
    check_pair(box_spec, a, b)?;
    let d = box_spec.ndim();
    let a_int: Vec<bool> = (0..d).map(|i| ratio_is_positive_integer(box_spec.dim(i), a.dim(i))).collect();
    let b_int: Vec<bool> = (0..d).map(|j| ratio_is_positive_integer(box_spec.dim(j), b.dim(j))).collect();
    for (i, &ai) in a_int.iter().enumerate() {
        for (j, &bj) in b_int.iter().enumerate() {
            if i != j && !ai && !bj {
                return Ok(KeyObservation::Violation { i, j });
            }
        }
    }
    Ok(KeyObservation::Holds)
}

/// All nonnegative `(m, n)` with `m a + n b = length`, by increasing `m`.
///
/// Scales to integers `m A + n B = C` and walks the solution class of `m`
/// modulo `B / gcd(A, B)`. Pairs whose entries do not fit in `u64` are not
/// reported.
pub fn solve_axis_combination(length: &Rational, a: &Rational, b: &Rational) -> Vec<(u64, u64)> {
    if !(length.is_positive() && a.is_positive() && b.is_positive()) {
        return Vec::new();
    }
    let scale = Rational::from(common_denominator([length, a, b]));
    let int = |x: &Rational| -> BigInt { (x * &scale).numer().clone() };
    let (big_a, big_b, big_c) = (int(a), int(b), int(length));

    let g = big_a.gcd(&big_b);
    if !(&big_c % &g).is_zero() {
        return Vec::new();
    }
    let (a1, b1, c1) = (&big_a / &g, &big_b / &g, &big_c / &g);
    // a1 * x ≡ 1 (mod b1)
    let x = a1.extended_gcd(&b1).x;
    let mut m = (&c1 * x).mod_floor(&b1);

    let mut out = Vec::new();
    while &m * &a1 <= c1 {
        let n = (&c1 - &m * &a1) / &b1;
        match (m.to_u64(), n.to_u64()) {
            (Some(mu), Some(nu)) => out.push((mu, nu)),
            _ => break,
        }
        m += &b1;
    }
    out
}

fn cross_faces_tile(box_spec: &BoxSpec, brick: &Brick, skip_axis: usize) -> bool {
    (0..box_spec.ndim()).filter(|&i| i != skip_axis).all(|i| ratio_is_positive_integer(box_spec.dim(i), brick.dim(i)))
}

/// A split certificate, if one exists.
///
/// Axes are searched in increasing order, taking the smallest `m` with both
/// `m` and `n` positive. When no such split exists, the single-brick
/// certificate is returned (brick `a` first, then `b`), cutting along the
/// first axis.
pub fn find_split(box_spec: &BoxSpec, a: &Brick, b: &Brick) -> Result<Option<SplitCertificate>> {
    check_pair(box_spec, a, b)?;
    for axis in 0..box_spec.ndim() {
        if !(cross_faces_tile(box_spec, a, axis) && cross_faces_tile(box_spec, b, axis)) {
            continue;
        }
        let pairs = solve_axis_combination(box_spec.dim(axis), a.dim(axis), b.dim(axis));
        if let Some(&(m, n)) = pairs.iter().find(|(m, n)| *m > 0 && *n > 0) {
            return Ok(Some(SplitCertificate {
                axis,
                m,
                n,
                cut: Rational::from(m) * a.dim(axis),
                left_brick: 0,
                right_brick: 1,
            }));
        }
    }

    let layers = |brick: &Brick| (box_spec.dim(0) / brick.dim(0)).to_u64();
    if one_brick_tileable(box_spec, a)? {
        if let Some(m) = layers(a) {
            return Ok(Some(SplitCertificate {
                axis: 0,
                m,
                n: 0,
                cut: box_spec.dim(0).clone(),
                left_brick: 0,
                right_brick: 1,
            }));
        }
    }
    if one_brick_tileable(box_spec, b)? {
        if let Some(n) = layers(b) {
            return Ok(Some(SplitCertificate {
                axis: 0,
                m: 0,
                n,
                cut: Rational::zero(),
                left_brick: 0,
                right_brick: 1,
            }));
        }
    }
    Ok(None)
}

/// Decides two-brick tileability, attaching a split certificate or, when
/// the pairwise integrality condition fails, the frequency-space witness
/// of that failure.
pub fn decide_two_brick(box_spec: &BoxSpec, a: &Brick, b: &Brick) -> Result<DecisionOutcome> {
    if let Some(cert) = find_split(box_spec, a, b)? {
        return Ok(DecisionOutcome { tileable: true, certificate: Some(cert), obstruction: None, reason: None });
    }
    match key_observation_holds(box_spec, a, b)? {
        KeyObservation::Violation { i, j } => {
            let witness = key_observation_witness(box_spec, a, b, i, j)?;
            Ok(DecisionOutcome {
                tileable: false,
                certificate: None,
                reason: Some(format!("axes ({}, {}): neither L_i/a_i nor L_j/b_j is an integer", i + 1, j + 1)),
                obstruction: Some(witness),
            })
        }
        KeyObservation::Holds => Ok(DecisionOutcome {
            tileable: false,
            certificate: None,
            obstruction: None,
            reason: Some("no axis admits a hyperplane split into single-brick slabs".into()),
        }),
    }
}

fn layer_count(length: &Rational, dim: &Rational, what: &str) -> Result<usize> {
    (length / dim)
        .to_positive_u64()
        .and_then(|c| usize::try_from(c).ok())
        .ok_or_else(|| Error::InvalidCertificate(format!("{what}: {length} is not a multiple of {dim}")))
}

fn fill_slab(
    out: &mut Vec<Placement>,
    box_spec: &BoxSpec,
    brick: &Brick,
    brick_index: usize,
    axis: usize,
    layers: u64,
    start: &Rational,
) -> Result<()> {
    if layers == 0 {
        return Ok(());
    }
    let d = box_spec.ndim();
    let mut counts = Vec::with_capacity(d);
    for i in 0..d {
        if i == axis {
            counts.push(usize::try_from(layers).map_err(|_| Error::InvalidCertificate("too many layers".into()))?);
        } else {
            counts.push(layer_count(box_spec.dim(i), brick.dim(i), "cross-section")?);
        }
    }
    for idx in MultiIndex::new(&counts) {
        let offset = idx
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let pos = Rational::from(k as u64) * brick.dim(i);
                if i == axis {
                    pos + start
                } else {
                    pos
                }
            })
            .collect();
        out.push(Placement::new(brick_index, offset));
    }
    Ok(())
}

/// Builds the explicit tiling described by a certificate: the slab below the
/// cut filled with a grid of the left brick, the slab above with the right
/// brick. The tiling's brick list is `[a, b]`.
pub fn certificate_to_tiling(cert: &SplitCertificate, box_spec: &BoxSpec, a: &Brick, b: &Brick) -> Result<Tiling> {
    check_pair(box_spec, a, b)?;
    let d = box_spec.ndim();
    let bricks = [a, b];
    if cert.axis >= d {
        return Err(Error::InvalidCertificate(format!("axis {} out of range", cert.axis + 1)));
    }
    if cert.left_brick > 1 || cert.right_brick > 1 || cert.left_brick == cert.right_brick {
        return Err(Error::InvalidCertificate("brick indices must be 0 and 1 in some order".into()));
    }
    let (left, right) = (bricks[cert.left_brick], bricks[cert.right_brick]);
    let j = cert.axis;
    let left_len = Rational::from(cert.m) * left.dim(j);
    let right_len = Rational::from(cert.n) * right.dim(j);
    if cert.cut != left_len {
        return Err(Error::InvalidCertificate(format!("cut {} differs from m * a_j = {left_len}", cert.cut)));
    }
    if &(&left_len + &right_len) != box_spec.dim(j) {
        return Err(Error::InvalidCertificate(format!(
            "m * a_j + n * b_j = {} but L_j = {}",
            &left_len + &right_len,
            box_spec.dim(j)
        )));
    }

    let mut placements = Vec::new();
    fill_slab(&mut placements, box_spec, left, cert.left_brick, j, cert.m, &Rational::zero())?;
    fill_slab(&mut placements, box_spec, right, cert.right_brick, j, cert.n, &cert.cut)?;
    Tiling::new(box_spec.clone(), vec![a.clone(), b.clone()], placements)
}

/// The grid tiling of the box by one brick, if `brick` tiles it alone.
pub fn single_brick_tiling(box_spec: &BoxSpec, brick: &Brick) -> Result<Option<Tiling>> {
    if !one_brick_tileable(box_spec, brick)? {
        return Ok(None);
    }
    let mut placements = Vec::new();
    let layers = (box_spec.dim(0) / brick.dim(0)).to_u64().expect("integral layer count");
    fill_slab(&mut placements, box_spec, brick, 0, 0, layers, &Rational::zero())?;
    Ok(Some(Tiling::new(box_spec.clone(), vec![brick.clone()], placements)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::verify_tiling_geometric;
    use crate::rational::q;
    use proptest::prelude::*;

    fn bx(s: &str) -> BoxSpec {
        BoxSpec::parse(s).unwrap()
    }

    fn br(s: &str) -> Brick {
        Brick::parse(s).unwrap()
    }

    /// Independent enumeration: try every m in 0..=floor(L/a).
    fn naive_combinations(l: &Rational, a: &Rational, b: &Rational) -> Vec<(u64, u64)> {
        let top = (l / a).floor().to_u64().unwrap();
        (0..=top)
            .filter_map(|m| {
                let rest = l - &(Rational::from(m) * a);
                let n = &rest / b;
                n.to_u64().map(|n| (m, n))
            })
            .collect()
    }

    #[test]
    fn one_brick_examples() {
        assert!(one_brick_tileable(&bx("1,1"), &br("1/2,1/3")).unwrap());
        assert!(!one_brick_tileable(&bx("1,1"), &br("2/5,1/2")).unwrap());
        assert!(!one_brick_tileable(&bx("5,5"), &br("3,3")).unwrap());
        assert!(one_brick_tileable(&bx("1,1"), &br("1,1,1")).is_err());
    }

    #[test]
    fn key_observation_examples() {
        assert_eq!(
            key_observation_holds(&bx("1,1"), &br("2/5,1/2"), &br("1/2,2/5")).unwrap(),
            KeyObservation::Violation { i: 0, j: 1 }
        );
        assert_eq!(key_observation_holds(&bx("1,1"), &br("1/4,1/2"), &br("1/2,1/2")).unwrap(), KeyObservation::Holds);
        assert_eq!(
            key_observation_holds(&bx("5,5"), &br("1,4"), &br("4,1")).unwrap(),
            KeyObservation::Violation { i: 1, j: 0 }
        );
        // Vacuous in one dimension.
        assert_eq!(key_observation_holds(&bx("1"), &br("2/5"), &br("3/7")).unwrap(), KeyObservation::Holds);
    }

    #[test]
    fn axis_combination_examples() {
        assert_eq!(solve_axis_combination(&q("1"), &q("1/4"), &q("1/2")), vec![(0, 2), (2, 1), (4, 0)]);
        assert_eq!(solve_axis_combination(&q("7"), &q("3"), &q("5")), vec![]);
        assert_eq!(solve_axis_combination(&q("8"), &q("3"), &q("5")), vec![(1, 1)]);
        assert_eq!(solve_axis_combination(&q("1"), &q("2"), &q("3")), vec![]);
        assert_eq!(solve_axis_combination(&q("3/2"), &q("1/2"), &q("1/2")), vec![(0, 3), (1, 2), (2, 1), (3, 0)]);
    }

    #[test]
    fn find_split_examples() {
        let cert = find_split(&bx("1,1"), &br("1/4,1/2"), &br("1/2,1/2")).unwrap().unwrap();
        assert_eq!(cert, SplitCertificate { axis: 0, m: 2, n: 1, cut: q("1/2"), left_brick: 0, right_brick: 1 });
        assert_eq!(find_split(&bx("1,1"), &br("2/5,1/2"), &br("1/2,2/5")).unwrap(), None);
        let cert = find_split(&bx("1,1"), &br("1/2,1/3"), &br("7,7")).unwrap().unwrap();
        assert_eq!(cert, SplitCertificate { axis: 0, m: 2, n: 0, cut: q("1"), left_brick: 0, right_brick: 1 });
        let cert = find_split(&bx("1,1"), &br("7,7"), &br("1/2,1/3")).unwrap().unwrap();
        assert_eq!(cert, SplitCertificate { axis: 0, m: 0, n: 2, cut: q("0"), left_brick: 0, right_brick: 1 });
    }

    #[test]
    fn split_on_second_axis() {
        // Axis 1 fails: b's cross-section 2/3 does not divide 1. Axis 2 works.
        let cert = find_split(&bx("1,1"), &br("1,1/3"), &br("1/2,2/3")).unwrap().unwrap();
        assert_eq!(cert.axis, 1);
        assert_eq!((cert.m, cert.n), (1, 1));
        let t = certificate_to_tiling(&cert, &bx("1,1"), &br("1,1/3"), &br("1/2,2/3")).unwrap();
        assert!(verify_tiling_geometric(&t).is_ok());
    }

    #[test]
    fn decide_examples() {
        let out = decide_two_brick(&bx("1,1"), &br("1/4,1/2"), &br("1/2,1/2")).unwrap();
        assert!(out.tileable && out.certificate.is_some() && out.obstruction.is_none());

        let out = decide_two_brick(&bx("1,1"), &br("2/5,1/2"), &br("1/2,2/5")).unwrap();
        assert!(!out.tileable);
        let w = out.obstruction.unwrap();
        assert_eq!(w.pair, (0, 1));
        assert_eq!(w.point, vec![q("5/2"), q("5/2")]);

        let out = decide_two_brick(&bx("5,5"), &br("1,4"), &br("4,1")).unwrap();
        assert!(!out.tileable);
        assert_eq!(out.obstruction.unwrap().pair, (1, 0));
    }

    #[test]
    fn untileable_without_violation_has_a_reason() {
        // The pairwise condition holds, but 1 is not a multiple of 2/3 on axis 1.
        let out = decide_two_brick(&bx("1,1"), &br("2/3,1"), &br("2/3,1")).unwrap();
        assert!(!out.tileable);
        assert!(out.obstruction.is_none());
        assert!(out.reason.is_some());
    }

    #[test]
    fn certificate_tilings() {
        let (boxed, a, b) = (bx("1,1"), br("1/4,1/2"), br("1/2,1/2"));
        let cert = find_split(&boxed, &a, &b).unwrap().unwrap();
        let t = certificate_to_tiling(&cert, &boxed, &a, &b).unwrap();
        assert_eq!(t.placements().len(), 6);
        assert_eq!(t.placements().iter().filter(|p| p.brick == 0).count(), 4);
        assert!(verify_tiling_geometric(&t).is_ok());

        let degenerate = SplitCertificate { axis: 0, m: 0, n: 2, cut: q("0"), left_brick: 0, right_brick: 1 };
        let t = certificate_to_tiling(&degenerate, &boxed, &a, &b).unwrap();
        assert!(t.placements().iter().all(|p| p.brick == 1));
        assert!(verify_tiling_geometric(&t).is_ok());

        let (boxed, a, b) = (bx("1,1,1"), br("1/2,1,1"), br("1/4,1,1"));
        let cert = SplitCertificate { axis: 0, m: 1, n: 2, cut: q("1/2"), left_brick: 0, right_brick: 1 };
        assert_eq!(find_split(&boxed, &a, &b).unwrap().unwrap(), cert);
        let t = certificate_to_tiling(&cert, &boxed, &a, &b).unwrap();
        assert_eq!(t.placements().len(), 3);
        assert!(verify_tiling_geometric(&t).is_ok());
    }

    #[test]
    fn invalid_certificates_are_rejected() {
        let (boxed, a, b) = (bx("1,1"), br("1/4,1/2"), br("1/2,1/2"));
        let good = SplitCertificate { axis: 0, m: 2, n: 1, cut: q("1/2"), left_brick: 0, right_brick: 1 };
        let mut bad = good.clone();
        bad.n = 2;
        assert!(certificate_to_tiling(&bad, &boxed, &a, &b).is_err());
        let mut bad = good.clone();
        bad.cut = q("1/4");
        assert!(certificate_to_tiling(&bad, &boxed, &a, &b).is_err());
        let mut bad = good.clone();
        bad.axis = 2;
        assert!(certificate_to_tiling(&bad, &boxed, &a, &b).is_err());
        let mut bad = good;
        bad.right_brick = 0;
        assert!(certificate_to_tiling(&bad, &boxed, &a, &b).is_err());
        // Cross-section of b does not tile the face.
        let b = br("1/2,2/3");
        let cert = SplitCertificate { axis: 0, m: 2, n: 1, cut: q("1/2"), left_brick: 0, right_brick: 1 };
        assert!(matches!(certificate_to_tiling(&cert, &boxed, &a, &b), Err(Error::InvalidCertificate(_))));
    }

    #[test]
    fn certificate_json_uses_one_based_axis() {
        let cert = SplitCertificate { axis: 0, m: 2, n: 1, cut: q("1/2"), left_brick: 0, right_brick: 1 };
        let s = serde_json::to_string(&cert).unwrap();
        assert_eq!(s, r#"{"axis":1,"m":2,"n":1,"cut":"1/2","left_brick":0,"right_brick":1}"#);
        assert_eq!(serde_json::from_str::<SplitCertificate>(&s).unwrap(), cert);
        assert!(serde_json::from_str::<SplitCertificate>(&s.replace("\"axis\":1", "\"axis\":0")).is_err());
    }

    #[test]
    fn one_dimensional_instances() {
        let cert = find_split(&bx("8"), &br("3"), &br("5")).unwrap().unwrap();
        assert_eq!((cert.m, cert.n), (1, 1));
        assert_eq!(find_split(&bx("7"), &br("3"), &br("5")).unwrap(), None);
        assert!(decide_two_brick(&bx("7"), &br("3"), &br("5")).unwrap().reason.is_some());
    }

    fn small_rational(max_num: i64) -> impl Strategy<Value = Rational> {
        (1..=max_num, 1i64..=6).prop_map(|(p, q)| Rational::new(p, q).unwrap())
    }

    proptest! {
        #[test]
        fn combinations_match_enumeration(l in small_rational(40), a in small_rational(12), b in small_rational(12)) {
            prop_assert_eq!(solve_axis_combination(&l, &a, &b), naive_combinations(&l, &a, &b));
        }

        #[test]
        fn decision_is_order_invariant(
            dims in proptest::collection::vec((small_rational(6), small_rational(6), small_rational(6)), 1..4)
        ) {
            let boxed = BoxSpec::new(dims.iter().map(|t| t.0.clone()).collect()).unwrap();
            let a = Brick::new(dims.iter().map(|t| t.1.clone()).collect()).unwrap();
            let b = Brick::new(dims.iter().map(|t| t.2.clone()).collect()).unwrap();
            let ab = decide_two_brick(&boxed, &a, &b).unwrap();
            let ba = decide_two_brick(&boxed, &b, &a).unwrap();
            prop_assert_eq!(ab.tileable, ba.tileable);
            if let Some(cert) = &ab.certificate {
                let t = certificate_to_tiling(cert, &boxed, &a, &b).unwrap();
                prop_assert!(verify_tiling_geometric(&t).is_ok());
            }
            if let KeyObservation::Violation { .. } = key_observation_holds(&boxed, &a, &b).unwrap() {
                prop_assert!(!ab.tileable);
            }
        }
    }
}
