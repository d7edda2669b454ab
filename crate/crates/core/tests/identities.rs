use flagdeg::localization::{
    flag_rhs, full_flag_rhs, grassmann_rhs, grassmann_schur_rhs, segre_rhs, symplectic_flag_rhs, verify_identity,
    verify_identity_with, Space,
};
use flagdeg::roots::{full_flag_degree_via_vandermonde, Weight};
use flagdeg::{Error, Exec, Field, FieldValue};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn distinct(rng: &mut ChaCha8Rng, n: usize) -> Vec<i64> {
    let mut out = Vec::new();
    while out.len() < n {
        let x = rng.random_range(-1000..=1000);
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn spaces() -> Vec<Space> {
    vec![
        Space::Segre { r: 2, s: 3 },
        Space::Grassmann { n: 5, k: 2 },
        Space::GrassmannSchur { n: 5, k: 2, partition: vec![1, 0] },
        Space::PartialFlag { lambda: Weight(vec![2, 1, 1, 0]) },
        Space::FullFlag { lambda: Weight(vec![3, 1, 0]) },
        Space::SymplecticFlag { lambda: Weight(vec![3, 1]) },
        Space::DerivativeIdentity { n: 4, k: 2 },
    ]
}

#[test]
fn every_space_agrees_over_q() {
    for space in spaces() {
        let r = verify_identity(&space, 10, Field::Rational, 17).unwrap();
        assert!(r.passed(), "{space}: {r:?}");
    }
}

#[test]
fn every_space_agrees_mod_13() {
    let f = Field::mod_p(13).unwrap();
    for space in spaces() {
        let r = verify_identity(&space, 10, f, 3).unwrap();
        assert!(r.passed(), "{space}: {r:?}");
    }
}

#[test]
fn reports_are_reproducible_and_mode_independent() {
    let space = Space::PartialFlag { lambda: Weight(vec![2, 0, 0]) };
    let a = verify_identity_with(Exec::Sequential, &space, 12, Field::Rational, 99).unwrap();
    let b = verify_identity_with(Exec::Parallel, &space, 12, Field::Rational, 99).unwrap();
    assert_eq!(a, b);
}

#[test]
fn m_independence_and_x_independence() {
    let f = Field::Rational;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let x = f.ints(&distinct(&mut rng, 5));
    let first = grassmann_rhs(f, &x, 2, &f.ints(&distinct(&mut rng, 6))).unwrap();
    for _ in 0..20 {
        let m: Vec<i64> = (0..6).map(|_| rng.random_range(-50..50)).collect();
        assert_eq!(grassmann_rhs(f, &x, 2, &f.ints(&m)).unwrap(), first);
    }
    let m = f.ints(&[1, 2, 3, 4, 5, 6]);
    for _ in 0..20 {
        let x = f.ints(&distinct(&mut rng, 5));
        assert_eq!(grassmann_rhs(f, &x, 2, &m).unwrap(), f.int(5));
    }
}

#[test]
fn flag_sum_equals_full_flag_degree_for_k_up_to_4() {
    let f = Field::Rational;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for k in 2..=4usize {
        let lambda: Vec<i64> = (0..k as i64).rev().map(|i| i * 2 + i * i).collect();
        let expected = full_flag_degree_via_vandermonde(&Weight(lambda.clone())).unwrap();
        let d = k * (k - 1) / 2;
        for _ in 0..20 {
            let x = f.ints(&distinct(&mut rng, k));
            let b = f.ints(&distinct(&mut rng, d));
            let v = flag_rhs(f, &x, &f.ints(&lambda), &vec![1; k], &b).unwrap();
            assert_eq!(v, f.big(&BigInt::from(expected.clone())));
            assert_eq!(full_flag_rhs(f, &x, &f.ints(&lambda), &b).unwrap(), v);
        }
    }
}

#[test]
fn engineered_collisions_raise_degenerate() {
    let f = Field::Rational;
    let degenerate = |r: flagdeg::Result<FieldValue>| matches!(r, Err(Error::Degenerate(_)));
    assert!(degenerate(segre_rhs(f, &f.ints(&[1, 1]), &f.ints(&[2, 3]), &f.ints(&[0, 0]))));
    assert!(degenerate(segre_rhs(f, &f.ints(&[1, 2]), &f.ints(&[3, 3]), &f.ints(&[0, 0]))));
    assert!(degenerate(grassmann_rhs(f, &f.ints(&[1, 2, 2, 5]), 2, &f.ints(&[0; 4]))));
    assert!(degenerate(grassmann_schur_rhs(f, &f.ints(&[1, 2, 2, 5]), 2, &[1], &f.ints(&[0; 3]))));
    assert!(degenerate(flag_rhs(f, &f.ints(&[4, 4, 1]), &f.ints(&[2, 1, 0]), &[1, 1, 1], &f.ints(&[0; 3]))));
    assert!(degenerate(symplectic_flag_rhs(f, &f.ints(&[2, 2]), &f.ints(&[2, 1]), &f.ints(&[0; 4]))));
    assert!(degenerate(symplectic_flag_rhs(f, &f.ints(&[2, -2]), &f.ints(&[2, 1]), &f.ints(&[0; 4]))));
    assert!(degenerate(symplectic_flag_rhs(f, &f.ints(&[0, 3]), &f.ints(&[2, 1]), &f.ints(&[0; 4]))));
    let p = Field::mod_p(7).unwrap();
    assert!(degenerate(grassmann_rhs(p, &p.ints(&[1, 8, 3, 4]), 2, &p.ints(&[0; 4]))));
}

fn reduce(v: &FieldValue, p: Field) -> FieldValue {
    let q = v.as_rational().unwrap();
    p.ratio(q).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn mod_p_agrees_with_rational_reduction(
        p in prop::sample::select(vec![5u64, 7, 11, 13]),
        x in prop::collection::vec(-40i64..40, 4),
        m in prop::collection::vec(-40i64..40, 4),
    ) {
        let q = Field::Rational;
        let fp = Field::mod_p(p).unwrap();
        let rational = grassmann_rhs(q, &q.ints(&x), 2, &q.ints(&m));
        let modular = grassmann_rhs(fp, &fp.ints(&x), 2, &fp.ints(&m));
        if let (Ok(r), Ok(v)) = (rational, modular) {
            prop_assert_eq!(reduce(&r, fp), v);
        }
    }

    #[test]
    fn symplectic_mod_p_agrees_with_rational_reduction(
        p in prop::sample::select(vec![7u64, 11, 13]),
        x in prop::collection::vec(1i64..60, 2),
        m in prop::collection::vec(-40i64..40, 4),
    ) {
        let q = Field::Rational;
        let fp = Field::mod_p(p).unwrap();
        let lambda = [2, 1];
        let rational = symplectic_flag_rhs(q, &q.ints(&x), &q.ints(&lambda), &q.ints(&m));
        let modular = symplectic_flag_rhs(fp, &fp.ints(&x), &fp.ints(&lambda), &fp.ints(&m));
        if let (Ok(r), Ok(v)) = (rational, modular) {
            prop_assert_eq!(reduce(&r, fp), v);
        }
    }
}

#[test]
fn euler_identity_for_the_vandermonde() {
    use flagdeg::SparsePoly;
    let f = Field::Rational;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in 2..=5usize {
        let mut v = SparsePoly::one(n);
        for i in 0..n {
            for j in i + 1..n {
                let mut c = vec![0i64; n];
                c[j] = 1;
                c[i] = -1;
                v = v.mul(&SparsePoly::linear(&c)).unwrap();
            }
        }
        let mut euler = SparsePoly::zero(n);
        for i in 0..n {
            let term = SparsePoly::var(n, i).unwrap().mul(&v.derivative(i, 1).unwrap()).unwrap();
            euler = euler.add(&term).unwrap();
        }
        let pairs = BigInt::from(n * (n - 1) / 2);
        assert_eq!(euler, v.scale(&pairs));
        for _ in 0..20 {
            let x = f.ints(&distinct(&mut rng, n));
            assert_eq!(euler.evaluate(&x).unwrap(), v.evaluate(&x).unwrap() * f.big(&pairs));
        }
    }
}
