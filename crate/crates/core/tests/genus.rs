mod common;

use common::c;
use ellgen::elliptic::{JacobiSine, Lattice};
use ellgen::genus::{
    default_grid, examples, genus_eval, genus_taylor, rigidity_check, special_points,
    FixedComponent, ManifoldFixedData, DEFAULT_GRID_COUNT, DEFAULT_RADIUS,
};
use ellgen::par::Execution;
use ellgen::{Complex64, Error};
use proptest::prelude::*;

fn lattices() -> Vec<Lattice> {
    vec![
        Lattice::square(),
        Lattice::new(c(1.0, 0.0), c(0.3, 1.1)).unwrap(),
    ]
}

fn u_strategy() -> impl Strategy<Value = Complex64> {
    (0.03f64..0.2, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn random_points() -> impl Strategy<Value = Vec<(Vec<i64>, i8)>> {
    let m = (1i64..=4).prop_flat_map(|m| prop_oneof![Just(m), Just(-m)]);
    prop::collection::vec(
        (
            prop::collection::vec(m, 2),
            prop_oneof![Just(1i8), Just(-1i8)],
        ),
        1..=4,
    )
}

fn data(points: &[(Vec<i64>, i8)]) -> ManifoldFixedData {
    let comps = points
        .iter()
        .enumerate()
        .map(|(i, (m, s))| FixedComponent::point(format!("p{i}"), m, *s).unwrap())
        .collect();
    ManifoldFixedData::new(comps, false, 4).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn additive_over_disjoint_union(a in random_points(), b in random_points(), u in u_strategy()) {
        let sine = JacobiSine::new(Lattice::square());
        let (da, db) = (data(&a), data(&b));
        let union = da.disjoint_union(&db).unwrap();
        let (ga, gb) = (genus_eval(&da, &sine, u).unwrap(), genus_eval(&db, &sine, u).unwrap());
        let g = genus_eval(&union, &sine, u).unwrap();
        prop_assert!((g - ga - gb).norm() <= 1e-12 * (ga.norm() + gb.norm()).max(1.0));
    }

    #[test]
    fn component_order_is_irrelevant(a in random_points(), u in u_strategy(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let sine = JacobiSine::new(Lattice::square());
        let d = data(&a);
        let mut shuffled = d.components.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let e = ManifoldFixedData::new(shuffled, false, 4).unwrap();
        prop_assert_eq!(genus_eval(&d, &sine, u).unwrap(), genus_eval(&e, &sine, u).unwrap());
    }

    #[test]
    fn reversing_one_point_negates_its_term(a in random_points(), j in 0usize..4, u in u_strategy()) {
        let sine = JacobiSine::new(Lattice::square());
        let d = data(&a);
        let j = j % d.components.len();
        let term = d.components[j].contribution(&sine, u).unwrap();
        let mut comps = d.components.clone();
        comps[j] = comps[j].reversed();
        let r = ManifoldFixedData::new(comps, false, 4).unwrap();
        let (g, gr) = (genus_eval(&d, &sine, u).unwrap(), genus_eval(&r, &sine, u).unwrap());
        prop_assert!((gr - (g - 2.0 * term)).norm() <= 1e-12 * term.norm().max(1.0));
    }
}

#[test]
fn taylor_matches_evaluation_and_has_no_poles() {
    for l in lattices() {
        let sine = JacobiSine::new(l);
        for (name, d) in examples::all() {
            let t = genus_taylor(&d, &sine, 8).unwrap();
            for (e, coeff) in &t.principal_part {
                assert!(coeff.norm() < 1e-9, "{name}: u^{e} coefficient {coeff}");
            }
            for k in 0..8 {
                let u = Complex64::from_polar(0.05 * l.omega1.norm(), 0.3 + k as f64);
                let direct = genus_eval(&d, &sine, u).unwrap();
                assert!((t.series.eval(u) - direct).norm() < 1e-6, "{name} at {u}");
            }
        }
    }
}

#[test]
fn spin_examples_are_rigid_and_vanish() {
    for l in lattices() {
        let sine = JacobiSine::new(l);
        let grid = default_grid(&l, DEFAULT_RADIUS, DEFAULT_GRID_COUNT);
        for d in [examples::s2(), examples::s2_times_s2()] {
            let r = rigidity_check(&d, &sine, &grid, 1e-8, 8, Execution::default()).unwrap();
            assert!(r.constant);
            assert!(r.reference_value.norm() < 1e-8);
            assert!(r.taylor.series.max_abs() < 1e-9);
        }
    }
}

#[test]
fn cp2_is_not_rigid() {
    for l in lattices() {
        let sine = JacobiSine::new(l);
        let grid = default_grid(&l, DEFAULT_RADIUS, DEFAULT_GRID_COUNT);
        for d in [examples::cp2(), examples::cp2_fixed_line()] {
            let r = rigidity_check(&d, &sine, &grid, 1e-6, 8, Execution::default()).unwrap();
            assert!(!r.constant);
            assert!(r.max_deviation > 1e-3);
        }
    }
}

#[test]
fn fixed_line_model_agrees_with_isolated_points() {
    // both circle actions on CP² share the u → 0 limit -3a₃
    let sine = JacobiSine::new(Lattice::square());
    let ta = genus_taylor(&examples::cp2(), &sine, 4).unwrap().series;
    let tb = genus_taylor(&examples::cp2_fixed_line(), &sine, 4)
        .unwrap()
        .series;
    assert!((ta.coeff(0) - tb.coeff(0)).norm() < 1e-9);
    let a3 = sine.taylor(3).unwrap().coeff(3);
    assert!((ta.coeff(0) + 3.0 * a3).norm() < 1e-9);
}

#[test]
fn special_points_are_excluded() {
    let l = Lattice::square();
    let sine = JacobiSine::new(l);
    let d = examples::s2();
    let special = special_points(&d, &l, 4);
    assert!(special.iter().any(|p| p.z.norm() < 1e-12));
    let grid: Vec<Complex64> = vec![c(0.0, 0.0), l.omega1 / 2.0];
    assert_eq!(
        rigidity_check(&d, &sine, &grid, 1e-6, 4, Execution::Sequential).unwrap_err(),
        Error::GridExhausted(2)
    );
    let mut grid = default_grid(&l, DEFAULT_RADIUS, 5);
    grid.push(c(0.0, 0.0));
    let r = rigidity_check(&d, &sine, &grid, 1e-6, 4, Execution::Sequential).unwrap();
    assert!(r.samples.last().unwrap().error.is_some());
    assert!(r.constant);
}

#[test]
fn execution_modes_agree() {
    let l = Lattice::square();
    let sine = JacobiSine::new(l);
    let grid = default_grid(&l, DEFAULT_RADIUS, DEFAULT_GRID_COUNT);
    let d = examples::cp2();
    let a = rigidity_check(&d, &sine, &grid, 1e-6, 6, Execution::Sequential).unwrap();
    let b = rigidity_check(&d, &sine, &grid, 1e-6, 6, Execution::Parallel).unwrap();
    assert_eq!(a.max_deviation, b.max_deviation);
    assert_eq!(a.reference_value, b.reference_value);
}
