use flagdeg::roots::{
    bh_degree, full_flag_degree_via_vandermonde, grassmannian_degree, partial_flag_degree, partition_to_indexset,
    schubert_degree, symplectic_flag_degree, RootSystem, Weight,
};
use num_bigint::BigUint;
use proptest::prelude::*;

#[test]
fn grassmannian_table() {
    let g = |n, k| grassmannian_degree(n, k).unwrap();
    assert_eq!(g(4, 2), BigUint::from(2u32));
    assert_eq!(g(5, 2), BigUint::from(5u32));
    assert_eq!(g(6, 3), BigUint::from(42u32));
}

#[test]
fn bh_matches_grassmannian_up_to_8() {
    for n in 2..=8usize {
        for k in 1..n {
            let d = bh_degree(RootSystem::type_a(n).unwrap(), &Weight::fundamental(n, k)).unwrap();
            assert_eq!(d.dim, (k * (n - k)) as u64);
            assert_eq!(d.degree, grassmannian_degree(n as u64, k as u64).unwrap(), "n={n} k={k}");
        }
    }
}

#[test]
fn full_square_schubert_is_the_grassmannian() {
    for n in 2..=7usize {
        for k in 1..n {
            let s = schubert_degree(&partition_to_indexset(&[], n, k).unwrap());
            assert_eq!(s.degree, grassmannian_degree(n as u64, k as u64).unwrap());
        }
    }
}

#[test]
fn bh_matches_symplectic_closed_form() {
    for k in 1..=4usize {
        let mut stack: Vec<Vec<i64>> = (1..=5).map(|x| vec![x]).collect();
        while let Some(lambda) = stack.pop() {
            if lambda.len() == k {
                let w = Weight(lambda);
                let bh = bh_degree(RootSystem::type_c(k).unwrap(), &w).unwrap();
                assert_eq!(bh, symplectic_flag_degree(&w).unwrap(), "lambda={w}");
                continue;
            }
            let last = *lambda.last().unwrap();
            for next in 1..last {
                let mut l = lambda.clone();
                l.push(next);
                stack.push(l);
            }
        }
    }
}

fn dominant(n: usize) -> impl Strategy<Value = Weight> {
    prop::collection::vec(0i64..6, n - 1).prop_map(|steps| {
        let mut w: Vec<i64> = steps
            .iter()
            .rev()
            .scan(0, |acc, s| {
                *acc += s;
                Some(*acc)
            })
            .collect();
        w.reverse();
        w.push(0);
        Weight(w)
    })
}

proptest! {
    #[test]
    fn bh_matches_partial_flag(w in (2usize..=6).prop_flat_map(dominant)) {
        prop_assume!(w.0[0] > 0);
        let bh = bh_degree(RootSystem::type_a(w.len()).unwrap(), &w).unwrap();
        prop_assert_eq!(bh, partial_flag_degree(&w).unwrap());
    }

    #[test]
    fn vandermonde_route_matches_partial_flag(steps in (2usize..=5).prop_flat_map(|n| prop::collection::vec(1i64..5, n - 1))) {
        let mut w: Vec<i64> = steps.iter().rev().scan(0, |acc, s| { *acc += s; Some(*acc) }).collect();
        w.reverse();
        w.push(0);
        let w = Weight(w);
        prop_assert_eq!(full_flag_degree_via_vandermonde(&w).unwrap(), partial_flag_degree(&w).unwrap().degree);
    }
}
