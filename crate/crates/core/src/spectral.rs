//! Fourier-side checks of a tiling.
//!
//! With the transform `f^(xi) = \int f(x) exp(-2 pi i xi.x) dx`, the indicator
//! of the centered box with extents `c` has transform
//! `prod_j sin(pi c_j xi_j) / (pi xi_j)`, which vanishes exactly on the
//! hyperplanes `xi_j = k / c_j`, `k != 0`. A tiling of a box `Q` by
//! translates `lambda + C_t` satisfies, for every `xi`,
//!
//! ```text
//! sum_t phi_t(xi) * boxFT(c_t, xi) = boxFT(L, xi),
//! phi_t(xi) = sum_{lambda in Lambda_t} exp(-2 pi i lambda.xi),
//! ```
//!
//! where the translation vectors `lambda` are brick centers measured from the
//! center of `Q`. The minus sign in `phi_t` follows from the transform
//! convention. Every box transform is real, so flipping the sign conjugates
//! both sides at once and leaves the residual magnitude unchanged.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{check_dims, BoxSpec, Brick, Tiling};
use crate::rational::Rational;

pub const RESIDUAL_TOLERANCE: f64 = 1e-9;
pub const ZERO_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_SAMPLE_RADIUS: f64 = 10.0;

/// A point in frequency space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Frequency(pub Vec<f64>);

impl Frequency {
    pub fn zero(d: usize) -> Self {
        Frequency(vec![0.0; d])
    }

    pub fn from_rationals(xi: &[Rational]) -> Self {
        Frequency(xi.iter().map(Rational::to_f64).collect())
    }

    pub fn ndim(&self) -> usize {
        self.0.len()
    }
}

/// Transform of the indicator of a centered box with the given extents.
/// The `xi_j = 0` factor is the removable-singularity value `c_j`.
pub fn box_transform(dims: &[Rational], xi: &Frequency) -> f64 {
    dims.iter()
        .zip(&xi.0)
        .map(|(c, &x)| {
            let c = c.to_f64();
            if x == 0.0 {
                c
            } else {
                (PI * c * x).sin() / (PI * x)
            }
        })
        .product()
}

/// `sum_lambda exp(-2 pi i lambda.xi)`.
pub fn translate_phase_sum(offsets: &[Vec<Rational>], xi: &Frequency) -> Complex64 {
    offsets
        .iter()
        .map(|lambda| {
            let dot: f64 = lambda.iter().zip(&xi.0).map(|(l, x)| l.to_f64() * x).sum();
            Complex64::from_polar(1.0, -2.0 * PI * dot)
        })
        .sum()
}

/// Brick centers per type, measured from the center of the box.
pub fn centered_translations(t: &Tiling) -> Vec<Vec<Vec<Rational>>> {
    let half = Rational::new(1, 2).unwrap();
    let box_dims = t.box_spec().dims();
    let mut per_type = vec![Vec::new(); t.bricks().len()];
    for p in t.placements() {
        let brick = &t.bricks()[p.brick];
        let center = p
            .offset
            .iter()
            .zip(brick.dims())
            .zip(box_dims)
            .map(|((o, c), l)| o + &(c * &half) - &(l * &half))
            .collect();
        per_type[p.brick].push(center);
    }
    per_type
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    /// Number of frequencies evaluated, including the zero-set probes.
    pub samples: usize,
    pub max_abs_residual: f64,
    pub seed: Option<u64>,
    /// Residuals at probes on the box's own zero set, where the right-hand side vanishes.
    #[serde(default)]
    pub residuals_at_zero_set: Vec<(Frequency, f64)>,
    #[serde(default)]
    pub witness: Option<Vec<Rational>>,
}

impl SpectralReport {
    pub fn passes(&self) -> bool {
        self.max_abs_residual < RESIDUAL_TOLERANCE
    }
}

/// `|sum_t phi_t(xi) boxFT(c_t, xi) - boxFT(L, xi)|` at a single frequency.
pub fn residual_at_point(t: &Tiling, xi: &Frequency) -> Result<f64> {
    check_dims(t.ndim(), xi.ndim(), "frequency vs tiling")?;
    Ok(residual_at(t, &centered_translations(t), xi))
}

fn residual_at(t: &Tiling, centers: &[Vec<Vec<Rational>>], xi: &Frequency) -> f64 {
    let lhs: Complex64 = t
        .bricks()
        .iter()
        .zip(centers)
        .map(|(b, lambdas)| translate_phase_sum(lambdas, xi) * box_transform(b.dims(), xi))
        .sum();
    (lhs - box_transform(t.box_spec().dims(), xi)).norm()
}

/// Largest residual of the transformed tiling identity over `points`, plus
/// probes at `xi = (k / L_j) e_j` for `k = 1, 2` on every axis.
pub fn residual_sample(t: &Tiling, points: &[Frequency]) -> Result<SpectralReport> {
    let d = t.ndim();
    for xi in points {
        check_dims(d, xi.ndim(), "frequency vs tiling")?;
    }
    let centers = centered_translations(t);
    let mut max = points.iter().map(|xi| residual_at(t, &centers, xi)).fold(0.0, f64::max);

    let mut at_zero_set = Vec::new();
    for axis in 0..d {
        for k in 1..=2u64 {
            let mut xi = Frequency::zero(d);
            xi.0[axis] = (Rational::from(k) / t.box_spec().dim(axis)).to_f64();
            let r = residual_at(t, &centers, &xi);
            max = max.max(r);
            at_zero_set.push((xi, r));
        }
    }
    Ok(SpectralReport {
        samples: points.len() + at_zero_set.len(),
        max_abs_residual: max,
        seed: None,
        residuals_at_zero_set: at_zero_set,
        witness: None,
    })
}

/// `count` frequencies uniform on `[-radius, radius]^d`, reproducible from `seed`.
pub fn random_frequencies(d: usize, count: usize, seed: u64, radius: f64) -> Vec<Frequency> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| Frequency((0..d).map(|_| rng.random_range(-radius..=radius)).collect())).collect()
}

/// [`residual_sample`] over seeded uniform samples on `[-10, 10]^d`.
pub fn spectral_check(t: &Tiling, samples: usize, seed: u64) -> Result<SpectralReport> {
    if samples == 0 {
        return Err(Error::InvalidInstance("at least one spectral sample is required".into()));
    }
    let points = random_frequencies(t.ndim(), samples, seed, DEFAULT_SAMPLE_RADIUS);
    let mut report = residual_sample(t, &points)?;
    report.seed = Some(seed);
    Ok(report)
}

/// Whether `xi` lies in the zero set of the box transform, i.e. some
/// coordinate is a nonzero integer multiple of `1 / L_j` (within 1e-12).
#[allow(non_snake_case)]
pub fn in_zero_set_Z(xi: &Frequency, box_spec: &BoxSpec) -> bool {
    xi.0.iter().zip(box_spec.dims()).any(|(&x, l)| {
        let k = x * l.to_f64();
        let nearest = k.round();
        nearest != 0.0 && (k - nearest).abs() <= ZERO_TOLERANCE
    })
}

/// Exact form of [`in_zero_set_Z`] for rational frequencies.
pub fn in_zero_set_exact(xi: &[Rational], box_spec: &BoxSpec) -> bool {
    xi.iter().zip(box_spec.dims()).any(|(x, l)| {
        let k = x * l;
        k.is_integer() && !k.is_zero()
    })
}

/// The frequency at which the two brick transforms vanish but the box
/// transform does not, for a pair of axes `(i, j)` where neither `L_i / a_i`
/// nor `L_j / b_j` is an integer.
///
/// Everything is expressed after scaling the box to the unit cube: the
/// point has `xi_i = L_i / a_i`, `xi_j = L_j / b_j` and zeros elsewhere, and
/// the transforms use the scaled extents `a / L`, `b / L` and `1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KeyObservationWitness {
    /// 0-based in Rust, 1-based in JSON.
    #[serde(with = "crate::one_based_pair")]
    pub pair: (usize, usize),
    pub point: Vec<Rational>,
    pub brick_a_transform: f64,
    pub brick_b_transform: f64,
    pub box_transform: f64,
    pub in_z: bool,
}

impl KeyObservationWitness {
    /// Both brick transforms vanish, the box transform does not, and the
    /// point lies outside the box's zero set.
    pub fn is_sound(&self) -> bool {
        self.brick_a_transform.abs() < ZERO_TOLERANCE
            && self.brick_b_transform.abs() < ZERO_TOLERANCE
            && !self.in_z
            && self.box_transform.abs() > 0.0
    }
}

pub fn key_observation_witness(
    box_spec: &BoxSpec,
    a: &Brick,
    b: &Brick,
    i: usize,
    j: usize,
) -> Result<KeyObservationWitness> {
    let d = box_spec.ndim();
    check_dims(d, a.ndim(), "brick a vs box")?;
    check_dims(d, b.ndim(), "brick b vs box")?;
    if i == j || i >= d || j >= d {
        return Err(Error::NotAViolation { i, j });
    }
    let ratio_a = box_spec.dim(i) / a.dim(i);
    let ratio_b = box_spec.dim(j) / b.dim(j);
    if ratio_a.is_integer() || ratio_b.is_integer() {
        return Err(Error::NotAViolation { i, j });
    }

    let mut point = vec![Rational::zero(); d];
    point[i] = ratio_a;
    point[j] = ratio_b;
    let xi = Frequency::from_rationals(&point);
    let scaled =
        |brick: &Brick| -> Vec<Rational> { brick.dims().iter().zip(box_spec.dims()).map(|(c, l)| c / l).collect() };
    let unit = BoxSpec::unit(d);
    Ok(KeyObservationWitness {
        pair: (i, j),
        brick_a_transform: box_transform(&scaled(a), &xi),
        brick_b_transform: box_transform(&scaled(b), &xi),
        box_transform: box_transform(unit.dims(), &xi),
        in_z: in_zero_set_exact(&point, &unit),
        point,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Placement;
    use crate::rational::{parse_dims, q};

    fn dims(s: &str) -> Vec<Rational> {
        parse_dims(s).unwrap()
    }

    /// Midpoint-rule quadrature of the defining integral for a centered
    /// 1-d interval of length `c`.
    fn quadrature_1d(c: f64, xi: f64) -> f64 {
        let n = 200_000;
        let h = c / n as f64;
        (0..n)
            .map(|k| {
                let x = -c / 2.0 + (k as f64 + 0.5) * h;
                (-2.0 * PI * xi * x).cos() * h
            })
            .sum()
    }

    #[test]
    fn box_transform_examples() {
        assert!((box_transform(&dims("1,1,1"), &Frequency::zero(3)) - 1.0).abs() < 1e-15);
        let v = box_transform(&dims("2"), &Frequency(vec![0.25]));
        assert!((v - 4.0 / PI).abs() < 1e-12);
        assert!((v - 1.2732).abs() < 1e-4);
        assert!((v - quadrature_1d(2.0, 0.25)).abs() < 1e-8);
        for k in [-3.0, -1.0, 1.0, 2.0, 7.0] {
            let xi = Frequency(vec![k / 0.4, 0.37]);
            assert!(box_transform(&dims("2/5,1/3"), &xi).abs() < ZERO_TOLERANCE);
        }
    }

    #[test]
    fn box_transform_matches_quadrature() {
        for (c, xi) in [(1.0, 0.3), (0.5, 1.7), (3.0, -0.45), (0.25, 6.1)] {
            let r = Rational::new((c * 4.0) as i64, 4).unwrap();
            let v = box_transform(&[r], &Frequency(vec![xi]));
            assert!((v - quadrature_1d(c, xi)).abs() < 1e-8, "c={c} xi={xi}");
        }
    }

    #[test]
    fn phase_sum_examples() {
        assert_eq!(translate_phase_sum(&[], &Frequency(vec![0.3])), Complex64::new(0.0, 0.0));
        let one = translate_phase_sum(&[dims("0")], &Frequency(vec![0.3]));
        assert!((one - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let cancel = translate_phase_sum(&[dims("0"), dims("1/2")], &Frequency(vec![1.0]));
        assert!(cancel.norm() < 1e-15);
    }

    fn two_columns() -> Tiling {
        Tiling::new(
            BoxSpec::unit(2),
            vec![Brick::parse("1/2,1").unwrap()],
            vec![Placement::new(0, dims("0,0")), Placement::new(0, dims("1/2,0"))],
        )
        .unwrap()
    }

    #[test]
    fn residual_of_valid_tiling_is_noise() {
        let points = random_frequencies(2, 100, 7, 5.0);
        let report = residual_sample(&two_columns(), &points).unwrap();
        assert!(report.max_abs_residual <= 1e-9, "{report:?}");
        assert_eq!(report.samples, 104);
    }

    #[test]
    fn removed_brick_shows_at_origin() {
        let t = two_columns().without_placement(1);
        let report = residual_sample(&t, &[Frequency::zero(2)]).unwrap();
        let at_origin = {
            let centers = centered_translations(&t);
            residual_at(&t, &centers, &Frequency::zero(2))
        };
        assert!((at_origin - 0.5).abs() < 1e-15);
        assert!(report.max_abs_residual >= 0.5 - 1e-15);
    }

    #[test]
    fn residual_does_not_depend_on_phase_sign() {
        let t = Tiling::new(
            BoxSpec::unit(2),
            vec![Brick::parse("1/4,1").unwrap(), Brick::parse("3/4,1").unwrap()],
            vec![Placement::new(0, dims("0,0")), Placement::new(1, dims("1/4,0"))],
        )
        .unwrap();
        let centers = centered_translations(&t);
        for xi in random_frequencies(2, 50, 3, 10.0) {
            let rhs = box_transform(t.box_spec().dims(), &xi);
            let terms: Vec<Complex64> = t
                .bricks()
                .iter()
                .zip(&centers)
                .map(|(b, lambdas)| translate_phase_sum(lambdas, &xi) * box_transform(b.dims(), &xi))
                .collect();
            let plus: Complex64 = terms.iter().map(|z| z.conj()).sum();
            let minus: Complex64 = terms.iter().sum();
            assert!((minus - rhs).norm() < 1e-12);
            assert!(((plus - rhs).norm() - (minus - rhs).norm()).abs() < 1e-12);
            // The individual phase sums do depend on the sign.
            assert!(terms[0].im.abs() > 0.0 || xi.0[0] == 0.0);
        }
    }

    #[test]
    fn zero_set_membership() {
        let unit = BoxSpec::unit(2);
        assert!(in_zero_set_Z(&Frequency(vec![1.0, 0.3]), &unit));
        assert!(!in_zero_set_Z(&Frequency(vec![0.0, 0.0]), &unit));
        assert!(!in_zero_set_Z(&Frequency(vec![2.5, 2.5]), &unit));
        assert!(in_zero_set_exact(&dims("1,3/10"), &unit));
        assert!(!in_zero_set_exact(&dims("0,0"), &unit));
        assert!(!in_zero_set_exact(&dims("5/2,5/2"), &unit));
        let wide = BoxSpec::parse("2,1").unwrap();
        assert!(in_zero_set_exact(&dims("1/2,0"), &wide));
        assert!(in_zero_set_Z(&Frequency(vec![-1.5, 0.0]), &wide));
    }

    #[test]
    fn witness_examples() {
        let unit = BoxSpec::unit(2);
        let a = Brick::parse("2/5,1/2").unwrap();
        let b = Brick::parse("1/2,2/5").unwrap();
        let w = key_observation_witness(&unit, &a, &b, 0, 1).unwrap();
        assert_eq!(w.point, vec![q("5/2"), q("5/2")]);
        assert!(!w.in_z);
        assert!(w.is_sound(), "{w:?}");

        let a = Brick::parse("2/3,1").unwrap();
        let b = Brick::parse("1,2/3").unwrap();
        let w = key_observation_witness(&unit, &a, &b, 0, 1).unwrap();
        assert_eq!(w.point, vec![q("3/2"), q("3/2")]);
        assert!(w.is_sound());

        let a = Brick::parse("1/2,1").unwrap();
        assert_eq!(key_observation_witness(&unit, &a, &b, 0, 1), Err(Error::NotAViolation { i: 0, j: 1 }));
        assert!(key_observation_witness(&unit, &a, &b, 1, 1).is_err());
    }

    #[test]
    fn witness_on_non_unit_box_uses_scaled_coordinates() {
        let boxed = BoxSpec::parse("5,5").unwrap();
        let a = Brick::parse("1,4").unwrap();
        let b = Brick::parse("4,1").unwrap();
        let w = key_observation_witness(&boxed, &a, &b, 1, 0).unwrap();
        assert_eq!(w.point, vec![q("5/4"), q("5/4")]);
        assert!(w.is_sound(), "{w:?}");
    }

    #[test]
    fn random_frequencies_are_reproducible_and_bounded() {
        let a = random_frequencies(3, 50, 11, 10.0);
        assert_eq!(a, random_frequencies(3, 50, 11, 10.0));
        assert_ne!(a, random_frequencies(3, 50, 12, 10.0));
        assert!(a.iter().flat_map(|f| &f.0).all(|x| x.abs() <= 10.0));
    }
}
