mod common;

use common::{arb_matrix, universe};
use proptest::prelude::*;
use timestream_core::layout::{compute_layout, set_filter, LayoutConfig, Smoothing, Wave, WaveGeometry};
use timestream_core::ActivityId;

fn smoothing() -> impl Strategy<Value = Smoothing> {
    prop_oneof![Just(Smoothing::None), Just(Smoothing::ShapePreservingCubic)]
}

fn top(waves: &[Wave], n: usize) -> Vec<f64> {
    waves.last().map_or(vec![0.0; n], |w| w.points.iter().map(|p| p.upper).collect())
}

fn check_side(waves: &[Wave], logged: bool) -> Result<(), TestCaseError> {
    for w in waves {
        for p in &w.points {
            if logged {
                prop_assert!(0.0 <= p.lower && p.lower <= p.upper, "{:?}", p);
            } else {
                prop_assert!(p.upper <= p.lower && p.lower <= 0.0, "{:?}", p);
            }
        }
    }
    for pair in waves.windows(2) {
        for (inner, outer) in pair[0].points.iter().zip(&pair[1].points) {
            prop_assert_eq!(inner.x, outer.x);
            prop_assert_eq!(inner.upper, outer.lower);
        }
    }
    if let Some(first) = waves.first() {
        prop_assert!(first.points.iter().all(|p| p.lower == 0.0));
    }
    Ok(())
}

fn check(g: &WaveGeometry) -> Result<(), TestCaseError> {
    check_side(&g.logged, true)?;
    check_side(&g.planned, false)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn boundaries_nest(planned in arb_matrix(), logged in arb_matrix(), s in smoothing(), samples in 1u32..12) {
        let mut config = LayoutConfig::new(universe()).with_smoothing(s);
        config.samples_per_bin = samples;
        check(&compute_layout(&planned, &logged, &config).unwrap())?;
    }

    #[test]
    fn linear_thickness_is_exact_at_bin_centres(planned in arb_matrix(), logged in arb_matrix()) {
        let config = LayoutConfig::new(universe()).with_smoothing(Smoothing::None);
        let g = compute_layout(&planned, &logged, &config).unwrap();
        for (side, m, sign) in [(&g.logged, &logged, 1.0), (&g.planned, &planned, -1.0)] {
            for w in side {
                let row = m.row(&w.activity).unwrap();
                for (h, &cell) in row.iter().enumerate() {
                    let p = w.points.iter().find(|p| p.x == h as f64 + 0.5).unwrap();
                    prop_assert_eq!(sign * (p.upper - p.lower), f64::from(cell));
                }
            }
        }
    }

    #[test]
    fn cubic_passes_through_bin_centres(m in arb_matrix()) {
        let g = compute_layout(&m, &m, &LayoutConfig::new(universe())).unwrap();
        for w in &g.logged {
            let row = m.row(&w.activity).unwrap();
            for (h, &cell) in row.iter().enumerate() {
                let p = w.points.iter().find(|p| p.x == h as f64 + 0.5).unwrap();
                prop_assert!((p.thickness() - f64::from(cell)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn equal_sides_mirror_exactly(m in arb_matrix(), s in smoothing()) {
        let g = compute_layout(&m, &m, &LayoutConfig::new(universe()).with_smoothing(s)).unwrap();
        prop_assert_eq!(g.logged.len(), g.planned.len());
        for (l, p) in g.logged.iter().zip(&g.planned) {
            prop_assert_eq!(&l.activity, &p.activity);
            for (a, b) in l.points.iter().zip(&p.points) {
                prop_assert_eq!(a.upper, -b.upper);
                prop_assert_eq!(a.lower, -b.lower);
            }
        }
    }

    #[test]
    fn total_height_ignores_stack_order(
        planned in arb_matrix(),
        logged in arb_matrix(),
        s in smoothing(),
        order in Just(universe()).prop_shuffle(),
    ) {
        let a = compute_layout(&planned, &logged, &LayoutConfig::new(universe()).with_smoothing(s)).unwrap();
        let b = compute_layout(&planned, &logged, &LayoutConfig::new(order).with_smoothing(s)).unwrap();
        let n = a.logged.first().or(a.planned.first()).map_or(0, |w| w.points.len());
        for (x, y) in top(&a.logged, n).iter().zip(top(&b.logged, n)) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        for (x, y) in top(&a.planned, n).iter().zip(top(&b.planned, n)) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        prop_assert!((a.extent - b.extent).abs() < 1e-9);
    }

    #[test]
    fn hiding_a_layer_closes_the_gap(planned in arb_matrix(), logged in arb_matrix(), hide in 0usize..4) {
        let full = LayoutConfig::new(universe()).with_smoothing(Smoothing::None);
        let hidden: ActivityId = universe()[hide].clone();
        let visible = universe().into_iter().filter(|id| id != &hidden).collect();
        let filtered = set_filter(&full, visible).unwrap();
        let g = compute_layout(&planned, &logged, &filtered).unwrap();
        check(&g)?;
        prop_assert!(g.logged.iter().chain(&g.planned).all(|w| w.activity != hidden));
        let reduced_order: Vec<ActivityId> = universe().into_iter().filter(|id| id != &hidden).collect();
        let direct = compute_layout(&planned, &logged, &LayoutConfig::new(reduced_order).with_smoothing(Smoothing::None)).unwrap();
        prop_assert_eq!(g, direct);
    }
}
