use brickbox::exact_cover::{build_grid, exact_cover_tileable, CoverOutcome, CoverProblem, SolverConfig, TileOutcome};
use brickbox::geometry::{verify_tiling_geometric, BoxSpec, Brick, Tiling};
use brickbox::rational::Rational;
use brickbox::spectral::{residual_at_point, residual_sample, spectral_check, Frequency};
use brickbox::theorem::{
    certificate_to_tiling, decide_two_brick, key_observation_holds, one_brick_tileable, KeyObservation,
};
use proptest::prelude::*;

/// Extents p/q with q <= 3 and value at most 2.
fn extent() -> impl Strategy<Value = Rational> {
    (1i64..=3).prop_flat_map(|q| (1..=2 * q).prop_map(move |p| Rational::new(p, q).unwrap()))
}

fn instance(max_d: usize) -> impl Strategy<Value = (BoxSpec, Brick, Brick)> {
    (1..=max_d).prop_flat_map(|d| proptest::collection::vec((extent(), extent(), extent()), d)).prop_filter_map(
        "bricks must fit",
        |axes| {
            let boxed = BoxSpec::new(axes.iter().map(|t| t.0.clone()).collect()).ok()?;
            let a = Brick::new(axes.iter().map(|t| t.1.clone()).collect()).ok()?;
            let b = Brick::new(axes.iter().map(|t| t.2.clone()).collect()).ok()?;
            Some((boxed, a, b))
        },
    )
}

fn small_config() -> SolverConfig {
    SolverConfig { grid_cap: 5_000, node_budget: 2_000_000 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn single_brick_oracle_agrees((boxed, a, _b) in instance(3)) {
        let oracle = exact_cover_tileable(&boxed, std::slice::from_ref(&a), &small_config()).unwrap();
        prop_assert!(!oracle.is_timeout());
        prop_assert_eq!(!oracle.is_unsat(), one_brick_tileable(&boxed, &a).unwrap());
    }

    #[test]
    fn two_brick_oracle_agrees((boxed, a, b) in instance(3)) {
        let decision = decide_two_brick(&boxed, &a, &b).unwrap();
        let oracle = exact_cover_tileable(&boxed, &[a.clone(), b.clone()], &small_config()).unwrap();
        prop_assert!(!oracle.is_timeout());
        prop_assert_eq!(decision.tileable, !oracle.is_unsat());
        if let KeyObservation::Violation { .. } = key_observation_holds(&boxed, &a, &b).unwrap() {
            prop_assert!(oracle.is_unsat());
        }
    }

    #[test]
    fn every_tiling_passes_both_verifiers((boxed, a, b) in instance(3)) {
        if let Some(cert) = decide_two_brick(&boxed, &a, &b).unwrap().certificate {
            let t = certificate_to_tiling(&cert, &boxed, &a, &b).unwrap();
            prop_assert!(verify_tiling_geometric(&t).is_ok());
            prop_assert!(spectral_check(&t, 200, 1).unwrap().passes());
        }
        if let TileOutcome::Tiling(t) = exact_cover_tileable(&boxed, &[a, b], &small_config()).unwrap() {
            prop_assert!(verify_tiling_geometric(&t).is_ok());
            prop_assert!(spectral_check(&t, 200, 1).unwrap().passes());
        }
    }

    #[test]
    fn removing_a_placement_shows_its_volume_at_the_origin((boxed, a, b) in instance(2), pick in any::<prop::sample::Index>()) {
        if let Some(cert) = decide_two_brick(&boxed, &a, &b).unwrap().certificate {
            let t = certificate_to_tiling(&cert, &boxed, &a, &b).unwrap();
            let idx = pick.index(t.placements().len());
            let removed = t.bricks()[t.placements()[idx].brick].volume().to_f64();
            let holed = t.without_placement(idx);
            let at_origin = residual_at_point(&holed, &Frequency::zero(holed.ndim())).unwrap();
            prop_assert!((at_origin - removed).abs() < 1e-12 * removed.max(1.0));
            let rep = residual_sample(&holed, &[Frequency::zero(holed.ndim())]).unwrap();
            prop_assert!(rep.max_abs_residual >= at_origin);
            prop_assert!(!verify_tiling_geometric(&holed).is_ok());
        }
    }

    #[test]
    fn tiling_json_round_trips((boxed, a, b) in instance(3)) {
        if let Some(cert) = decide_two_brick(&boxed, &a, &b).unwrap().certificate {
            let t = certificate_to_tiling(&cert, &boxed, &a, &b).unwrap();
            let back: Tiling = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
            prop_assert_eq!(back, t);
        }
        let decision = decide_two_brick(&boxed, &a, &b).unwrap();
        let back: brickbox::DecisionOutcome = serde_json::from_str(&serde_json::to_string(&decision).unwrap()).unwrap();
        prop_assert_eq!(back, decision);
    }
}

#[test]
fn all_solutions_of_small_grids_verify() {
    let boxed = BoxSpec::parse("2,3/2").unwrap();
    let bricks = vec![Brick::parse("1/2,1/2").unwrap(), Brick::parse("1,1/2").unwrap()];
    let grid = build_grid(&boxed, &bricks, 1_000).unwrap();
    let (problem, labels) = CoverProblem::from_grid(&grid);
    let CoverOutcome::Solutions(solutions) = brickbox::exact_cover::solve_exact_cover(&problem, None, 10_000_000)
    else {
        panic!("expected solutions");
    };
    assert!(solutions.len() > 1);
    for rows in &solutions {
        let placements = rows
            .iter()
            .map(|&r| {
                let l = &labels[r];
                let offset = l.origin.iter().zip(&grid.unit).map(|(&o, u)| Rational::from(o as u64) * u).collect();
                brickbox::Placement::new(l.brick, offset)
            })
            .collect();
        let t = Tiling::new(boxed.clone(), bricks.clone(), placements).unwrap();
        assert!(verify_tiling_geometric(&t).is_ok());
    }
}

#[test]
fn tiling_json_schema() {
    let json = r#"{"box":["1/1","1/1"],"bricks":[["1/2","1/1"]],"placements":[{"brick":0,"offset":["0/1","0/1"]},{"brick":0,"offset":["1/2","0/1"]}]}"#;
    let t: Tiling = serde_json::from_str(json).unwrap();
    assert!(verify_tiling_geometric(&t).is_ok());
    assert_eq!(serde_json::to_string(&t).unwrap(), json);
    // Structural violations are rejected at parse time.
    let outside = json.replace(r#"["1/2","0/1"]"#, r#"["3/4","0/1"]"#);
    assert!(serde_json::from_str::<Tiling>(&outside).is_err());
}

#[test]
fn timeouts_are_never_unsat() {
    // Seven pieces are needed, so three search nodes cannot finish.
    let boxed = BoxSpec::parse("7,6").unwrap();
    let bricks = vec![Brick::parse("2,3").unwrap(), Brick::parse("3,2").unwrap()];
    let out = exact_cover_tileable(&boxed, &bricks, &SolverConfig { grid_cap: 1_000, node_budget: 3 }).unwrap();
    assert!(out.is_timeout(), "{out:?}");
    let full = exact_cover_tileable(&boxed, &bricks, &SolverConfig::default()).unwrap();
    assert!(!full.is_timeout());
    assert_eq!(full.is_unsat(), !decide_two_brick(&boxed, &bricks[0], &bricks[1]).unwrap().tileable);
}
