//! Symmetric-function evaluations and the coefficient calculus in the
//! `v`-variables (`lambda_i = v_i + ... + v_{k-1}`).
//!
//! Polynomials in this module use 0-based variable indices internally; `v_1`
//! in the docs is variable 0.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bruhat::Permutation;
use crate::error::{contract, Error, Result};
use crate::exact::{factorial, multinomial, Field, FieldValue, SparsePoly};

/// `V(x) = prod_{i<j} (x_j - x_i)`; zero iff two values coincide.
pub fn vandermonde_eval(field: Field, values: &[FieldValue]) -> FieldValue {
    let mut acc = field.one();
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            acc = &acc * &(&values[j] - &values[i]);
        }
    }
    acc
}

/// Complete homogeneous symmetric polynomials `h_0..=h_max` at `values`.
pub fn complete_homogeneous(field: Field, values: &[FieldValue], max: usize) -> Vec<FieldValue> {
    // h_m(x_1..x_r) = h_m(x_1..x_{r-1}) + x_r h_{m-1}(x_1..x_r)
    let mut h = vec![field.zero(); max + 1];
    h[0] = field.one();
    for x in values {
        for m in 1..=max {
            h[m] = &h[m] + &(x * &h[m - 1]);
        }
    }
    h
}

/// Determinant by Gaussian elimination over the field.
pub fn determinant(field: Field, mut rows: Vec<Vec<FieldValue>>) -> FieldValue {
    let n = rows.len();
    let mut det = field.one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !rows[r][col].is_zero()) else {
            return field.zero();
        };
        if pivot != col {
            rows.swap(pivot, col);
            det = -det;
        }
        let inv = rows[col][col].inverse().expect("pivot is nonzero");
        det = &det * &rows[col][col];
        for r in col + 1..n {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] * &inv;
            let (top, bottom) = rows.split_at_mut(r);
            for (x, p) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x = &*x - &(&factor * p);
            }
        }
    }
    det
}

/// `s_lambda(values)` via Jacobi–Trudi, `det(h_{lambda_i - i + j})`.
///
/// No division by the Vandermonde, so coincident values are fine.
pub fn schur_eval(field: Field, partition: &[u64], values: &[FieldValue]) -> Result<FieldValue> {
    contract!(partition.windows(2).all(|w| w[0] >= w[1]), "partition {partition:?} is not weakly decreasing");
    let parts: Vec<usize> = partition.iter().map(|&p| p as usize).collect();
    let len = parts.len();
    if len == 0 {
        return Ok(field.one());
    }
    let max = parts[0] + len;
    let h = complete_homogeneous(field, values, max);
    let entry = |i: usize, j: usize| -> FieldValue {
        // index lambda_i - i + j with 0-based i, j
        let idx = parts[i] as isize - i as isize + j as isize;
        if idx < 0 {
            field.zero()
        } else {
            h[idx as usize].clone()
        }
    };
    let rows = (0..len).map(|i| (0..len).map(|j| entry(i, j)).collect()).collect();
    Ok(determinant(field, rows))
}

/// `lambda_i = v_i + ... + v_{k-1}` (with `v_k = 0`), as a polynomial in
/// `k - 1` variables. Index `i` is 1-based.
fn lambda_in_v(k: usize, i: usize) -> SparsePoly {
    SparsePoly::range_sum(k - 1, (i - 1)..(k - 1)).expect("range inside variables")
}

/// `lambda_i - lambda_j = v_i + ... + v_{j-1}` for `i < j`.
fn root_in_v(nvars: usize, i: usize, j: usize) -> SparsePoly {
    SparsePoly::range_sum(nvars, (i - 1)..(j - 1)).expect("range inside variables")
}

/// `V(lambda_1, ..., lambda_k)` expanded in `v_1..v_{k-1}`.
pub fn vandermonde_in_v(k: usize) -> Result<SparsePoly> {
    contract!(k >= 2, "need k >= 2, got {k}");
    let nvars = k - 1;
    let mut acc = SparsePoly::one(nvars);
    for i in 1..=k {
        for j in i + 1..=k {
            // lambda_j - lambda_i = -(v_i + ... + v_{j-1})
            let factor = root_in_v(nvars, i, j).scale(&BigInt::from(-1));
            acc = acc.mul(&factor)?;
        }
    }
    debug_assert_eq!(acc, {
        let l: Vec<SparsePoly> = (1..=k).map(|i| lambda_in_v(k, i)).collect();
        let mut v = SparsePoly::one(nvars);
        for i in 0..k {
            for j in i + 1..k {
                v = v.mul(&l[j].add(&l[i].scale(&BigInt::from(-1))).unwrap()).unwrap();
            }
        }
        v
    });
    Ok(acc)
}

fn check_budget(k: usize, b: &[u64]) -> Result<()> {
    contract!(k >= 2, "need k >= 2, got {k}");
    contract!(b.len() == k - 1, "budget {b:?} must have {} entries", k - 1);
    Ok(())
}

fn exponent(b: &[u64]) -> Vec<u32> {
    b.iter().map(|&x| x as u32).collect()
}

/// `mu(b) = (-1)^{C(k,2)} coef(V(lambda), v^b)`. Always non-negative.
pub fn mu_b(k: usize, b: &[u64]) -> Result<BigUint> {
    check_budget(k, b)?;
    mu_b_in(&vandermonde_in_v(k)?, k, b)
}

fn mu_b_in(vandermonde: &SparsePoly, k: usize, b: &[u64]) -> Result<BigUint> {
    let mut c = vandermonde.coef(&exponent(b))?;
    if (k * (k - 1) / 2) % 2 == 1 {
        c = -c;
    }
    c.to_biguint().ok_or_else(|| Error::Internal(format!("mu({b:?}) for k={k} is negative")))
}

/// `K_b = multinomial(d; 0,1,..,k-1) * mu(b) / multinomial(d; b)`, `d = C(k,2)`.
pub fn k_b(k: usize, b: &[u64]) -> Result<BigUint> {
    check_budget(k, b)?;
    k_b_in(&vandermonde_in_v(k)?, k, b)
}

/// Both `mu(b)` and `K_b` for every `b` with `|b| = C(k,2)`, sharing one
/// expansion of the Vandermonde.
pub fn k_b_table(k: usize) -> Result<Vec<(Vec<u64>, BigUint, BigUint)>> {
    let v = vandermonde_in_v(k)?;
    let d = (k * (k - 1) / 2) as u64;
    compositions(d, k - 1)
        .into_iter()
        .map(|b| {
            let mu = mu_b_in(&v, k, &b)?;
            let kb = k_b_in(&v, k, &b)?;
            Ok((b, mu, kb))
        })
        .collect()
}

fn k_b_in(vandermonde: &SparsePoly, k: usize, b: &[u64]) -> Result<BigUint> {
    let d = (k * (k - 1) / 2) as u64;
    contract!(b.iter().sum::<u64>() == d, "|b| = {} but C({k},2) = {d}", b.iter().sum::<u64>());
    let delta: Vec<u64> = (0..k as u64).collect();
    let num = multinomial(d, &delta)? * mu_b_in(vandermonde, k, b)?;
    let den = multinomial(d, b)?;
    if (&num % &den) != BigUint::zero() {
        return Err(Error::Internal(format!("K_b for b={b:?} is not integral: {num}/{den}")));
    }
    Ok(num / den)
}

/// All sequences of `parts` non-negative integers summing to `total`, in
/// lexicographically decreasing order.
pub fn compositions(total: u64, parts: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    fn rec(remaining: u64, parts: usize, current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if parts == 1 {
            current.push(remaining);
            out.push(current.clone());
            current.pop();
            return;
        }
        for x in (0..=remaining).rev() {
            current.push(x);
            rec(remaining - x, parts - 1, current, out);
            current.pop();
        }
    }
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, parts, &mut Vec::new(), &mut out);
    out
}

/// `L_w = prod_{(i,j) inversion} (v_i + ... + v_{j-1})`.
pub fn l_w_poly(w: &Permutation) -> Result<SparsePoly> {
    let k = w.size();
    contract!(k >= 2, "need a permutation of at least 2 letters");
    let nvars = k - 1;
    let mut acc = SparsePoly::one(nvars);
    for (i, j) in w.inversions() {
        acc = acc.mul(&root_in_v(nvars, i, j))?;
    }
    Ok(acc)
}

/// `R_w = sum over maximal Bruhat chains of prod of cover labels`, where a
/// cover swapping positions `n < m` contributes `v_n + ... + v_{m-1}`.
pub fn r_w_poly(w: &Permutation) -> Result<SparsePoly> {
    let k = w.size();
    contract!(k >= 2, "need a permutation of at least 2 letters");
    let nvars = k - 1;
    fn rec(w: &Permutation, nvars: usize, memo: &mut HashMap<Permutation, SparsePoly>) -> SparsePoly {
        if w.length() == 0 {
            return SparsePoly::one(nvars);
        }
        if let Some(p) = memo.get(w) {
            return p.clone();
        }
        let mut acc = SparsePoly::zero(nvars);
        for (u, (n, m)) in w.lower_covers_with_positions() {
            let below = rec(&u, nvars, memo);
            let term = below.mul(&root_in_v(nvars, n, m)).expect("same variables");
            acc = acc.add(&term).expect("same variables");
        }
        memo.insert(w.clone(), acc.clone());
        acc
    }
    Ok(rec(w, nvars, &mut HashMap::new()))
}

/// `Q(v) = prod_{i<=j} (v_i + ... + v_k) * prod_{i<j} (v_i + ... + v_{j-1})`
/// in `k` variables.
pub fn q_poly(k: usize) -> Result<SparsePoly> {
    contract!(k >= 1, "need k >= 1");
    let mut acc = SparsePoly::one(k);
    for i in 1..=k {
        let tail = SparsePoly::range_sum(k, (i - 1)..k)?;
        for _j in i..=k {
            acc = acc.mul(&tail)?;
        }
        for j in i + 1..=k {
            acc = acc.mul(&SparsePoly::range_sum(k, (i - 1)..(j - 1))?)?;
        }
    }
    Ok(acc)
}

/// The symplectic flag degree as a polynomial in `v_1..v_k`
/// (`lambda_i = v_i + ... + v_k`): returns `(c, p)` with degree `= c * p`,
/// `p = prod lambda_i * prod_{i<j} (lambda_i - lambda_j)(lambda_i + lambda_j)`.
pub fn symplectic_degree_in_v(k: usize) -> Result<(BigRational, SparsePoly)> {
    contract!(k >= 1, "need k >= 1");
    let lambda: Vec<SparsePoly> = (1..=k).map(|i| SparsePoly::range_sum(k, (i - 1)..k)).collect::<Result<_>>()?;
    let mut p = SparsePoly::one(k);
    let mut den = BigInt::one();
    for i in 0..k {
        p = p.mul(&lambda[i])?;
        for j in i + 1..k {
            p = p.mul(&SparsePoly::range_sum(k, i..j)?)?;
            p = p.mul(&lambda[i].add(&lambda[j])?)?;
            let (a, b) = ((i + 1) as i64, (j + 1) as i64);
            den *= b * b - a * a;
        }
    }
    let d = (k * k) as u64;
    let c = BigRational::new(factorial(d).into(), BigInt::from(factorial(k as u64)) * den);
    Ok((c, p))
}

/// The signed analogue of `K_b`: `coef(P, v^b) / multinomial(k^2; b)` where
/// `P` is the symplectic flag degree in the `v`-variables.
pub fn symplectic_k_b(k: usize, b: &[u64]) -> Result<BigUint> {
    contract!(b.len() == k, "budget {b:?} must have {k} entries");
    let d = (k * k) as u64;
    contract!(b.iter().sum::<u64>() == d, "|b| must be {d}");
    let (c, p) = symplectic_degree_in_v(k)?;
    let coef = BigRational::from_integer(p.coef(&exponent(b))?) * c;
    let value = coef / BigRational::from_integer(multinomial(d, b)?.into());
    if !value.is_integer() || value.is_negative() {
        return Err(Error::Internal(format!("signed K_b for {b:?} is {value}")));
    }
    Ok(value.to_integer().to_biguint().expect("non-negative"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bruhat::Permutation;
    use proptest::prelude::*;

    fn q() -> Field {
        Field::Rational
    }

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    fn term(e: &[u32], c: i64) -> (Vec<u32>, BigInt) {
        (e.to_vec(), BigInt::from(c))
    }

    /// Independent oracle: `det(x_j^{lambda_i + k - i}) / V(x)`, valid at
    /// pairwise distinct points. Uses the ordinary sign convention, where
    /// the denominator is `det(x_j^{k-i}) = prod_{i<j} (x_i - x_j)`.
    fn bialternant(partition: &[u64], values: &[FieldValue]) -> FieldValue {
        let k = values.len();
        let f = q();
        let mut parts = partition.to_vec();
        parts.resize(k, 0);
        let num_rows =
            (0..k).map(|i| (0..k).map(|j| values[j].pow(parts[i] as u32 + (k - 1 - i) as u32)).collect()).collect();
        let den_rows = (0..k).map(|i| (0..k).map(|j| values[j].pow((k - 1 - i) as u32)).collect()).collect();
        determinant(f, num_rows).checked_div(&determinant(f, den_rows)).unwrap()
    }

    #[test]
    fn vandermonde_examples() {
        let f = q();
        assert_eq!(vandermonde_eval(f, &f.ints(&[1, 2, 4])), f.int(6));
        assert_eq!(vandermonde_eval(f, &f.ints(&[7])), f.int(1));
        assert_eq!(vandermonde_eval(f, &f.ints(&[1, 1, 3])), f.int(0));
    }

    #[test]
    fn schur_examples() {
        let f = q();
        assert_eq!(schur_eval(f, &[1], &f.ints(&[2, 3])).unwrap(), f.int(5));
        assert_eq!(schur_eval(f, &[1, 0], &f.ints(&[4, 9])).unwrap(), f.int(13));
        assert_eq!(schur_eval(f, &[2, 1, 0], &f.ints(&[1, 2, 3])).unwrap(), f.int(60));
        // defined at repeated values: s_(1,1)(x,x) = x^2
        assert_eq!(schur_eval(f, &[1, 1], &f.ints(&[3, 3])).unwrap(), f.int(9));
        // more parts than variables
        assert_eq!(schur_eval(f, &[1, 1, 1], &f.ints(&[3, 5])).unwrap(), f.int(0));
        assert_eq!(schur_eval(f, &[], &f.ints(&[3, 5])).unwrap(), f.int(1));
    }

    #[test]
    fn schur_mod_p() {
        let f = Field::mod_p(7).unwrap();
        // 60 = 4 mod 7
        assert_eq!(schur_eval(f, &[2, 1, 0], &f.ints(&[1, 2, 3])).unwrap(), f.int(4));
    }

    #[test]
    fn vandermonde_in_v_examples() {
        let v2 = vandermonde_in_v(2).unwrap();
        assert_eq!(v2, SparsePoly::from_terms(1, [term(&[1], -1)]).unwrap());
        let v3 = vandermonde_in_v(3).unwrap();
        assert_eq!(v3, SparsePoly::from_terms(2, [term(&[2, 1], -1), term(&[1, 2], -1)]).unwrap());
        assert!(v3.coef(&[3, 0]).unwrap().is_zero());
        assert!(vandermonde_in_v(1).is_err());
    }

    #[test]
    fn mu_and_k_examples() {
        assert_eq!(mu_b(3, &[2, 1]).unwrap(), BigUint::from(1u32));
        assert_eq!(k_b(3, &[2, 1]).unwrap(), BigUint::from(1u32));
        assert_eq!(mu_b(3, &[3, 0]).unwrap(), BigUint::zero());
        assert_eq!(k_b(3, &[3, 0]).unwrap(), BigUint::zero());
        assert_eq!(mu_b(2, &[1]).unwrap(), BigUint::from(1u32));
        assert_eq!(k_b(2, &[1]).unwrap(), BigUint::from(1u32));
        assert!(k_b(3, &[1, 1]).is_err());
        assert!(mu_b(3, &[1]).is_err());
    }

    #[test]
    fn k_b_sums_reproduce_the_flag_degree() {
        // deg = multinomial(d; Delta) * sum_b mu(b) * (substitution v = 1)
        // gives P(1,..,1) = sum_b multinomial(d;b) K_b = deg of lambda=(k-1,..,0) = d!
        for k in 2..=5 {
            let d = (k * (k - 1) / 2) as u64;
            let total: BigUint =
                k_b_table(k).unwrap().into_iter().map(|(b, _, kb)| multinomial(d, &b).unwrap() * kb).sum();
            assert_eq!(total, factorial(d));
        }
    }

    #[test]
    fn mu_nonnegative_and_k_integral_up_to_5() {
        for k in 2..=5 {
            for (b, mu, kb) in k_b_table(k).unwrap() {
                assert_eq!(mu.is_zero(), kb.is_zero(), "b={b:?}");
            }
        }
    }

    #[test]
    fn l_w_examples() {
        let s1 = p(&[2, 1, 3]);
        assert_eq!(l_w_poly(&s1).unwrap(), SparsePoly::var(2, 0).unwrap());
        let w0 = Permutation::longest(3);
        // v1 (v1 + v2) v2
        assert_eq!(l_w_poly(&w0).unwrap(), SparsePoly::from_terms(2, [term(&[2, 1], 1), term(&[1, 2], 1)]).unwrap());
        let w = p(&[2, 3, 1]);
        assert_eq!(l_w_poly(&w).unwrap(), SparsePoly::from_terms(2, [term(&[1, 1], 1), term(&[0, 2], 1)]).unwrap());
    }

    #[test]
    fn r_w_examples() {
        let s1 = p(&[2, 1, 3]);
        assert_eq!(r_w_poly(&s1).unwrap(), SparsePoly::var(2, 0).unwrap());
        let w = p(&[2, 3, 1]);
        let r = r_w_poly(&w).unwrap();
        assert_eq!(r.support(), l_w_poly(&w).unwrap().support());
        assert!(r.all_coefficients_nonnegative());
        assert_eq!(r_w_poly(&Permutation::identity(3)).unwrap(), SparsePoly::one(2));
    }

    #[test]
    fn r_w_is_homogeneous_of_length_degree() {
        for k in 2..=4 {
            for w in Permutation::all(k) {
                let r = r_w_poly(&w).unwrap();
                assert!(r.is_homogeneous());
                assert_eq!(r.degree(), Some(w.length() as u32));
                assert!(r.all_coefficients_nonnegative());
            }
        }
    }

    #[test]
    fn r_w_support_matches_l_w_on_s4() {
        for w in Permutation::all(4) {
            assert_eq!(r_w_poly(&w).unwrap().support(), l_w_poly(&w).unwrap().support(), "w = {w}");
        }
    }

    #[test]
    fn longest_element_support_matches_mu() {
        for k in 2..=5 {
            let r = r_w_poly(&Permutation::longest(k)).unwrap();
            for (b, mu, _) in k_b_table(k).unwrap() {
                let c = r.coef(&exponent(&b)).unwrap();
                assert_eq!(c.is_zero(), mu.is_zero(), "k={k} b={b:?}");
            }
        }
    }

    #[test]
    fn q_examples() {
        assert_eq!(q_poly(1).unwrap(), SparsePoly::var(1, 0).unwrap());
        let q2 = q_poly(2).unwrap();
        assert_eq!(q2, SparsePoly::from_terms(2, [term(&[3, 1], 1), term(&[2, 2], 2), term(&[1, 3], 1)]).unwrap());
        assert!(q2.coef(&[4, 0]).unwrap().is_zero());
        for k in 1..=4 {
            let q = q_poly(k).unwrap();
            assert!(q.all_coefficients_nonnegative());
            assert!(q.is_homogeneous());
            assert_eq!(q.degree(), Some((k * k) as u32));
        }
    }

    #[test]
    fn symplectic_polynomial_matches_degree_formula_and_q_support() {
        use crate::roots::{symplectic_flag_degree, Weight};
        let f = q();
        for k in 1..=3 {
            let (c, poly) = symplectic_degree_in_v(k).unwrap();
            // v = (1,..,1) gives lambda = (k, .., 1)
            let ones = vec![f.int(1); k];
            let value = poly.evaluate(&ones).unwrap();
            let deg = symplectic_flag_degree(&Weight((1..=k as i64).rev().collect())).unwrap();
            let expected = BigRational::from_integer(BigInt::from(deg.degree));
            assert_eq!(value.as_rational().unwrap() * &c, expected);
            assert_eq!(poly.support(), q_poly(k).unwrap().support());
        }
    }

    proptest! {
        #[test]
        fn jacobi_trudi_matches_bialternant(
            (parts, values) in (1usize..=5).prop_flat_map(|k| (
                prop::collection::vec(0u64..4, k),
                prop::collection::btree_set(-30i64..30, k),
            ))
        ) {
            let mut parts = parts;
            parts.sort_unstable_by(|a, b| b.cmp(a));
            let values: Vec<FieldValue> = values.into_iter().map(|x| q().int(x)).collect();
            prop_assume!(values.len() == parts.len());
            prop_assert_eq!(schur_eval(q(), &parts, &values).unwrap(), bialternant(&parts, &values));
        }

        #[test]
        fn staircase_schur_is_product_of_sums(values in (1usize..=5).prop_flat_map(|k| prop::collection::vec(-50i64..50, k))) {
            let k = values.len();
            let staircase: Vec<u64> = (0..k as u64).rev().collect();
            let f = q();
            let xs = f.ints(&values);
            let mut expected = f.one();
            for i in 0..k {
                for j in i + 1..k {
                    expected = &expected * &(&xs[i] + &xs[j]);
                }
            }
            prop_assert_eq!(schur_eval(f, &staircase, &xs).unwrap(), expected);
        }
    }
}
