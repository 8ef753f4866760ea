mod common;

use common::*;
use ellgen::elliptic::{JacobiSine, Lattice};
use ellgen::series::{
    algebra_evaluate_series, elementary_symmetric, elementary_symmetric_expansion, AlgebraElement,
    NilpotentAlgebra, Parity, TruncatedSeries,
};
use ellgen::Complex64;
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| c(a, b))
}

fn small_root(r: f64) -> impl Strategy<Value = Complex64> {
    (0.0..r, 0.0..std::f64::consts::TAU).prop_map(|(m, t)| Complex64::from_polar(m, t))
}

/// Invertible series: leading coefficient bounded away from zero.
fn invertible_series() -> impl Strategy<Value = TruncatedSeries> {
    (
        -3i32..4,
        (0.5f64..2.0, 0.0..std::f64::consts::TAU),
        prop::collection::vec(complex(), 0..10),
    )
        .prop_map(|(low, (m, t), rest)| {
            let mut coeffs = vec![Complex64::from_polar(m, t)];
            coeffs.extend(rest);
            coeffs.resize(10, Complex64::new(0.0, 0.0));
            TruncatedSeries::new(low, coeffs, low + 9).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inverse_is_two_sided(a in invertible_series()) {
        let inv = a.inverse().unwrap();
        let left = a.mul(&inv);
        let right = inv.mul(&a);
        let one = TruncatedSeries::one(left.order());
        prop_assert!(left.max_diff(&one) < 1e-9, "{:?}", left);
        prop_assert!(right.max_diff(&one) < 1e-9);
    }

    #[test]
    fn parity_split_round_trip(
        low in -4i32..4,
        coeffs in prop::collection::vec(complex(), 1..8),
        odd in any::<bool>(),
    ) {
        // spread the coefficients over every other exponent
        let r = i32::from(odd);
        let lowest = 2 * low + r;
        let mut full = vec![Complex64::new(0.0, 0.0); 2 * coeffs.len() - 1];
        for (i, c) in coeffs.iter().enumerate() {
            full[2 * i] = *c;
        }
        let q = TruncatedSeries::new(lowest, full, lowest + 2 * coeffs.len() as i32 - 2).unwrap();
        let split = q.even_odd_split();
        prop_assert_eq!(split.parity, if odd { Parity::Odd } else { Parity::Even });
        let back = split.reconstruct().unwrap();
        for e in lowest..=q.order() {
            prop_assert_eq!(back.coeff(e), q.coeff(e));
        }
    }

    #[test]
    fn symmetric_expansion_matches_graded_product(
        roots in prop::collection::vec(complex(), 1..=6),
        bound in 1usize..=12,
        which in 0usize..3,
    ) {
        let n = roots.len();
        let q = match which {
            0 => TruncatedSeries::from_real(0, &[1.0, 1.0], 12),
            1 => TruncatedSeries::from_real(0, &[1.0, 1.0], 12).inverse().unwrap(),
            _ => TruncatedSeries::from_real(0, &[0.0, 1.0, 0.5], 12).exp().unwrap(),
        };
        let p = elementary_symmetric_expansion(&q, n, bound).unwrap();
        let sigma = elementary_symmetric(&roots);
        let expected = graded_product(q.coefficients(), &roots, bound);
        let got = p.evaluate(&sigma);
        prop_assert!((got - expected).norm() < 1e-9 * expected.norm().max(1.0), "{} vs {}", got, expected);
    }

    #[test]
    fn symmetric_expansion_of_sine_quotient(roots in prop::collection::vec(small_root(0.1), 1..=5)) {
        let sine = JacobiSine::new(Lattice::square());
        let q = sine.taylor(17).unwrap().shift(-1).truncate(16);
        let p = elementary_symmetric_expansion(&q, roots.len(), 16).unwrap();
        let direct: Complex64 = roots
            .iter()
            .map(|x| if x.norm() == 0.0 { c(1.0, 0.0) } else { sine.eval(*x).unwrap() / x })
            .product();
        prop_assert!((p.evaluate(&elementary_symmetric(&roots)) - direct).norm() < 1e-9);
    }

    #[test]
    fn series_on_algebra_matches_substitution(
        bounds in prop::collection::vec(1usize..=3, 1..=2),
        w in prop::collection::vec(complex(), 2),
        m in -3i64..=3,
        q in prop::collection::vec(complex(), 16),
    ) {
        let alg = NilpotentAlgebra::truncated_tensor(&bounds).unwrap();
        prop_assume!(alg.basis_size() <= 6);
        // a general degree-2 element
        let mut coords = vec![Complex64::new(0.0, 0.0); alg.basis_size()];
        for (i, d) in alg.degrees().iter().enumerate() {
            if *d == 2 {
                coords[i] = w[i % 2];
            }
        }
        let x = alg.element(coords).unwrap();
        let q = TruncatedSeries::new(0, q, 15).unwrap();
        let order = 6;
        let scalar = TruncatedSeries::monomial(c(m as f64, 0.0), 1, order);
        let fast = algebra_evaluate_series(&alg, &q, &x, &scalar).unwrap();

        // brute force: Σ_k q_k (m u + x)^k with series coefficients
        let base = {
            let mut v: Vec<TruncatedSeries> =
                x.coeffs.iter().map(|c| TruncatedSeries::constant(*c, order)).collect();
            v[0] = scalar.clone();
            AlgebraElement::new(v)
        };
        let mut power = alg.scalar(TruncatedSeries::one(order));
        let mut sum = alg.zero_element(TruncatedSeries::zero(order));
        for k in 0..=15 {
            sum = sum.add(&power.map(|s| s.scale(q.coeff(k))));
            power = alg.mul(&power, &base);
        }
        for (a, b) in fast.coeffs.iter().zip(&sum.coeffs) {
            prop_assert!(a.truncate(order).max_diff(b) < 1e-9);
        }
    }
}

#[test]
fn exp_of_log() {
    let q = TruncatedSeries::from_real(0, &[1.0, -2.0, 0.5, 3.0], 10);
    assert!(q.ln().unwrap().exp().unwrap().max_diff(&q) < 1e-12);
}

#[test]
fn dense_table_helper_builds_dual_numbers() {
    let table = dense_table(2, |i, j| match i + j {
        0 => vec![c(1.0, 0.0), c(0.0, 0.0)],
        1 => vec![c(0.0, 0.0), c(1.0, 0.0)],
        _ => vec![c(0.0, 0.0), c(0.0, 0.0)],
    });
    let alg = NilpotentAlgebra::new(vec![0, 2], table, vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    assert_eq!(alg.basis_size(), 2);
}
