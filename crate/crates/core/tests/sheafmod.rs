use ellgen::elliptic::Lattice;
use ellgen::sheafmod::{
    assemble_sheaf_decomposition, divisor_degree, divisor_sum, fiber_product_coords,
    local_smith_exponents, local_smith_exponents_determinantal, product_from_coords,
    s2n_restriction_matrix, CuMatrix, Divisor, ExactComplex, Poly,
};
use ellgen::{Complex64, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Q = ExactComplex;

fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> Vec<i64> {
    (0..=rng.gen_range(0..=max_deg))
        .map(|_| rng.gen_range(-3..=3))
        .collect()
}

/// Random `k×k` polynomial matrix whose constant term has nonzero determinant.
fn random_local_unit(rng: &mut ChaCha8Rng, k: usize) -> CuMatrix<Q> {
    loop {
        let rows: Vec<Vec<Vec<i64>>> = (0..k)
            .map(|_| (0..k).map(|_| random_poly(rng, 2)).collect())
            .collect();
        let m = CuMatrix::<Q>::from_ints(&rows).unwrap();
        if m.determinant().unwrap().is_local_unit() {
            return m;
        }
    }
}

fn base_cases() -> Vec<CuMatrix<Q>> {
    let mut out: Vec<CuMatrix<Q>> = (1..=3)
        .map(|n| s2n_restriction_matrix(n).unwrap())
        .collect();
    out.push(
        CuMatrix::from_ints(&[vec![vec![0, 0, 1], vec![]], vec![vec![], vec![0, 1]]]).unwrap(),
    );
    out.push(
        CuMatrix::from_ints(&[
            vec![vec![1], vec![], vec![]],
            vec![vec![], vec![0, 1], vec![]],
            vec![vec![], vec![], vec![0, 0, 0, 1]],
            vec![vec![1], vec![1], vec![1]],
        ])
        .unwrap(),
    );
    out
}

#[test]
fn exponents_survive_local_unit_conjugation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for m in base_cases() {
        let expected = local_smith_exponents(&m).unwrap();
        for _ in 0..100 {
            let a = random_local_unit(&mut rng, m.rows());
            let b = random_local_unit(&mut rng, m.cols());
            let conj = a.mul(&m).unwrap().mul(&b).unwrap();
            assert_eq!(local_smith_exponents(&conj).unwrap(), expected);
            assert_eq!(
                local_smith_exponents_determinantal(&conj).unwrap(),
                expected
            );
        }
    }
}

#[test]
fn two_routes_agree_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let rows = rng.gen_range(1..=4);
        let cols = rng.gen_range(1..=rows);
        let spec: Vec<Vec<Vec<i64>>> = (0..rows)
            .map(|_| {
                (0..cols)
                    .map(|_| {
                        // bias toward entries divisible by u
                        let mut p = random_poly(&mut rng, 3);
                        if rng.gen_bool(0.6) {
                            p[0] = 0;
                        }
                        p
                    })
                    .collect()
            })
            .collect();
        let exact = CuMatrix::<Q>::from_ints(&spec).unwrap();
        let float = CuMatrix::<Complex64>::from_ints(&spec).unwrap();
        let a = local_smith_exponents(&exact);
        assert_eq!(a, local_smith_exponents_determinantal(&exact), "{spec:?}");
        assert_eq!(a, local_smith_exponents(&float), "{spec:?}");
        if let Err(e) = a {
            assert!(matches!(e, Error::NotInjective { .. }));
        }
    }
}

#[test]
fn basis_change_recovers_the_inclusion() {
    let m = s2n_restriction_matrix::<Q>(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let mut p = random_poly(&mut rng, 4);
        let mut q = random_poly(&mut rng, 4);
        p.resize(5, 0);
        q.resize(5, 0);
        q[0] = p[0];
        let (p, q) = (Poly::<Q>::from_ints(&p), Poly::<Q>::from_ints(&q));
        let (a, b) = fiber_product_coords(&p, &q).unwrap();
        let image = m.apply(&[a, b]).unwrap();
        assert_eq!(product_from_coords(&image[0], &image[1]), (p, q));
    }
    let bad = fiber_product_coords(&Poly::<Q>::from_ints(&[1]), &Poly::from_ints(&[2]));
    assert!(bad.is_err());
}

#[test]
fn sheaf_example() {
    for l in [
        Lattice::square(),
        Lattice::new(Complex64::new(1.0, 0.0), Complex64::new(0.3, 1.1)).unwrap(),
    ] {
        for n in 1..=3u32 {
            let s = assemble_sheaf_decomposition(n, &l).unwrap();
            assert_eq!(s.divisor.entries.len(), (n * n) as usize);
            assert!(s.local_exponents.iter().all(|e| e.exponents == vec![0, 1]));
            assert_eq!(divisor_degree(&s.divisor).unsigned_abs(), (n * n) as u64);
            assert_eq!(s.twist_degree_effective, -s.twist_degree_negative);
            assert!(l.contains(divisor_sum(&s.divisor).unwrap().z, 1e-9));
        }
    }
    assert!(assemble_sheaf_decomposition(0, &Lattice::square()).is_err());
}

#[test]
fn abel_sum_detects_non_principal_divisors() {
    let l = Lattice::square();
    let pts = l.torsion_points(2);
    // one half period alone does not sum to zero
    let d = Divisor::new(vec![(pts[1], 1)]);
    assert!(!l.contains(divisor_sum(&d).unwrap().z, 1e-9));
    assert!(divisor_sum(&Divisor::new(vec![])).is_none());
}
