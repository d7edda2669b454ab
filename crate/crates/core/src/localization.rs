//! Fixed-point sums for the torus actions on Segre varieties, Grassmannians,
//! partial and full flag manifolds and symplectic flag manifolds, evaluated
//! exactly at concrete substitutions, and verifiers that compare them with
//! the closed-form degrees.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bruhat::Permutation;
use crate::error::{contract, Error, Result};
use crate::exact::{binomial, factorial, Field, FieldValue};
use crate::par::Exec;
use crate::roots::{
    full_flag_degree_via_vandermonde, grassmannian_degree, partial_flag_degree, partition_to_indexset, schubert_degree,
    symplectic_flag_degree, Weight,
};
use crate::symfun::{schur_eval, vandermonde_eval};

/// Upper end of the integer range for rational substitutions.
pub const RATIONAL_DRAW_MAX: i64 = 1_000_000;

/// Redraws allowed per requested trial before giving up on it.
pub const MAX_ATTEMPTS_PER_TRIAL: usize = 1000;

fn require_distinct(name: &str, xs: &[FieldValue]) -> Result<()> {
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if xs[i] == xs[j] {
                return Err(Error::Degenerate(format!("{name}_{} = {name}_{} = {}", i + 1, j + 1, xs[i])));
            }
        }
    }
    Ok(())
}

fn require_field(field: Field, groups: &[&[FieldValue]]) -> Result<()> {
    for v in groups.iter().flat_map(|g| g.iter()) {
        if v.field() != field {
            return Err(Error::FieldMismatch { left: field.to_string(), right: v.field().to_string() });
        }
    }
    Ok(())
}

fn divide(num: &FieldValue, den: &FieldValue, what: &str) -> Result<FieldValue> {
    if den.is_zero() {
        return Err(Error::Degenerate(format!("Euler class of {what} vanishes")));
    }
    num.checked_div(den)
}

fn dehomogenized(field: Field, value: &FieldValue, m: &[FieldValue]) -> FieldValue {
    m.iter().fold(field.one(), |acc, c| &acc * &(value - c))
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            if n - i < k - current.len() {
                break;
            }
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// Ordered set partitions of `0..n` into blocks of the given sizes.
fn ordered_set_partitions(n: usize, sizes: &[usize]) -> Vec<Vec<Vec<usize>>> {
    fn rec(remaining: &[usize], sizes: &[usize], acc: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        let Some((&size, rest)) = sizes.split_first() else {
            out.push(acc.clone());
            return;
        };
        for pick in subsets(remaining.len(), size) {
            let block: Vec<usize> = pick.iter().map(|&i| remaining[i]).collect();
            let left: Vec<usize> = remaining.iter().copied().filter(|x| !block.contains(x)).collect();
            acc.push(block);
            rec(&left, rest, acc, out);
            acc.pop();
        }
    }
    let all: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    rec(&all, sizes, &mut Vec::new(), &mut out);
    out
}

/// `sum_{i,j} prod_m (x_i + y_j - m) / [prod_{k != i} (x_i - x_k) prod_{l != j} (y_j - y_l)]`.
pub fn segre_rhs(field: Field, x: &[FieldValue], y: &[FieldValue], m: &[FieldValue]) -> Result<FieldValue> {
    contract!(!x.is_empty() && !y.is_empty(), "Segre needs r, s >= 1");
    contract!(m.len() == x.len() + y.len() - 2, "|M| = {} but r + s - 2 = {}", m.len(), x.len() + y.len() - 2);
    require_field(field, &[x, y, m])?;
    require_distinct("x", x)?;
    require_distinct("y", y)?;
    let mut total = field.zero();
    for (i, xi) in x.iter().enumerate() {
        let dx = x.iter().enumerate().filter(|&(k, _)| k != i).fold(field.one(), |a, (_, xk)| &a * &(xi - xk));
        for (j, yj) in y.iter().enumerate() {
            let dy = y.iter().enumerate().filter(|&(l, _)| l != j).fold(field.one(), |a, (_, yl)| &a * &(yj - yl));
            let num = dehomogenized(field, &(xi + yj), m);
            total = &total + &divide(&num, &(&dx * &dy), "a Segre fixed point")?;
        }
    }
    Ok(total)
}

fn grassmann_sum(
    field: Field,
    x: &[FieldValue],
    k: usize,
    m: &[FieldValue],
    weight: impl Fn(&[FieldValue]) -> Result<FieldValue>,
) -> Result<FieldValue> {
    let n = x.len();
    contract!(1 <= k && k <= n, "need 1 <= k <= n, got n={n}, k={k}");
    require_field(field, &[x, m])?;
    require_distinct("x", x)?;
    let mut total = field.zero();
    for j in subsets(n, k) {
        let inside: Vec<FieldValue> = j.iter().map(|&i| x[i].clone()).collect();
        let x_j = inside.iter().fold(field.zero(), |a, v| &a + v);
        let mut den = field.one();
        for &i in &j {
            for (l, xl) in x.iter().enumerate() {
                if !j.contains(&l) {
                    den = &den * &(&x[i] - xl);
                }
            }
        }
        let num = &dehomogenized(field, &x_j, m) * &weight(&inside)?;
        total = &total + &divide(&num, &den, "a Grassmannian fixed point")?;
    }
    Ok(total)
}

/// `sum_J prod_m (x_J - m) / prod_{i in J, j not in J} (x_i - x_j)`.
pub fn grassmann_rhs(field: Field, x: &[FieldValue], k: usize, m: &[FieldValue]) -> Result<FieldValue> {
    let n = x.len();
    contract!(1 <= k && k <= n, "need 1 <= k <= n, got n={n}, k={k}");
    contract!(m.len() == k * (n - k), "|M| = {} but k(n-k) = {}", m.len(), k * (n - k));
    grassmann_sum(field, x, k, m, |_| Ok(field.one()))
}

/// The Grassmannian sum with every term weighted by `s_lambda(x|_J)`;
/// `|M|` must be `k(n-k) - |lambda|`.
pub fn grassmann_schur_rhs(
    field: Field,
    x: &[FieldValue],
    k: usize,
    partition: &[u64],
    m: &[FieldValue],
) -> Result<FieldValue> {
    let n = x.len();
    contract!(1 <= k && k <= n, "need 1 <= k <= n, got n={n}, k={k}");
    let size: u64 = partition.iter().sum();
    let box_size = (k * (n - k)) as u64;
    contract!(size <= box_size, "partition {partition:?} does not fit");
    contract!(m.len() as u64 == box_size - size, "|M| = {} but dim = {}", m.len(), box_size - size);
    grassmann_sum(field, x, k, m, |restricted| schur_eval(field, partition, restricted))
}

/// The partial-flag sum over ordered set partitions `(I_1, .., I_{t+1})`
/// with `|I_j| = n_j`, numerator `prod_q (sum_j mu_j x_{I_j} - b_q)` and
/// denominator `prod_{k<l} prod_{i in I_k, j in I_l} (x_i - x_j)`.
pub fn flag_rhs(
    field: Field,
    x: &[FieldValue],
    mu: &[FieldValue],
    multiplicities: &[usize],
    b: &[FieldValue],
) -> Result<FieldValue> {
    contract!(mu.len() == multiplicities.len(), "{} levels but {} multiplicities", mu.len(), multiplicities.len());
    contract!(
        multiplicities.iter().sum::<usize>() == x.len(),
        "multiplicities {multiplicities:?} do not sum to |A| = {}",
        x.len()
    );
    let total: usize = x.len();
    let d = (total * total - multiplicities.iter().map(|n| n * n).sum::<usize>()) / 2;
    contract!(b.len() == d, "{} b-values but d = {d}", b.len());
    require_field(field, &[x, mu, b])?;
    require_distinct("x", x)?;
    let mut acc = field.zero();
    for blocks in ordered_set_partitions(total, multiplicities) {
        let mut restriction = field.zero();
        for (level, block) in mu.iter().zip(&blocks) {
            for &i in block {
                restriction = &restriction + &(level * &x[i]);
            }
        }
        let mut den = field.one();
        for (k, lower) in blocks.iter().enumerate() {
            for upper in &blocks[k + 1..] {
                for &i in lower {
                    for &j in upper {
                        den = &den * &(&x[i] - &x[j]);
                    }
                }
            }
        }
        let num = dehomogenized(field, &restriction, b);
        acc = &acc + &divide(&num, &den, "a flag fixed point")?;
    }
    Ok(acc)
}

fn signed_vandermonde(field: Field, permuted: &[FieldValue]) -> FieldValue {
    let k = permuted.len();
    let v = vandermonde_eval(field, permuted);
    if (k * (k.saturating_sub(1)) / 2) % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Full-flag sum over `S_k` with Euler class `(-1)^{C(k,2)} V(x_pi)`.
pub fn full_flag_rhs(field: Field, x: &[FieldValue], lambda: &[FieldValue], m: &[FieldValue]) -> Result<FieldValue> {
    let k = x.len();
    contract!(lambda.len() == k, "need {k} weight entries");
    contract!(m.len() == k * (k - 1) / 2, "|M| = {} but C(k,2) = {}", m.len(), k * (k - 1) / 2);
    require_field(field, &[x, lambda, m])?;
    require_distinct("x", x)?;
    let mut acc = field.zero();
    for pi in Permutation::all(k) {
        let permuted: Vec<FieldValue> = (1..=k).map(|i| x[pi.at(i) - 1].clone()).collect();
        let restriction = lambda.iter().zip(&permuted).fold(field.zero(), |a, (l, xv)| &a + &(l * xv));
        let num = dehomogenized(field, &restriction, m);
        acc = &acc + &divide(&num, &signed_vandermonde(field, &permuted), "a full flag fixed point")?;
    }
    Ok(acc)
}

/// `sum_pi [sum_i (lambda_i x_{pi(i)})^k] prod_{b in B} (sum_i lambda_i x_{pi(i)} - b) / V(x_pi)`
/// with `|B| = C(n,2) - k`.
pub fn derivative_identity_rhs(
    field: Field,
    x: &[FieldValue],
    lambda: &[FieldValue],
    b: &[FieldValue],
    k: usize,
) -> Result<FieldValue> {
    let n = x.len();
    contract!(lambda.len() == n, "need {n} weight entries");
    contract!(1 <= k && k < n, "need 1 <= k <= n-1, got n={n}, k={k}");
    contract!(b.len() == n * (n - 1) / 2 - k, "|B| = {} but C(n,2) - k = {}", b.len(), n * (n - 1) / 2 - k);
    require_field(field, &[x, lambda, b])?;
    require_distinct("x", x)?;
    let mut acc = field.zero();
    for pi in Permutation::all(n) {
        let permuted: Vec<FieldValue> = (1..=n).map(|i| x[pi.at(i) - 1].clone()).collect();
        let terms: Vec<FieldValue> = lambda.iter().zip(&permuted).map(|(l, xv)| l * xv).collect();
        let power_sum = terms.iter().fold(field.zero(), |a, t| &a + &t.pow(k as u32));
        let linear = terms.iter().fold(field.zero(), |a, t| &a + t);
        let num = &power_sum * &dehomogenized(field, &linear, b);
        acc = &acc + &divide(&num, &vandermonde_eval(field, &permuted), "a full flag fixed point")?;
    }
    Ok(acc)
}

/// `V(lambda) C(n,k+1) k! (C(n,2)-k)! / V(1..n)`.
pub fn derivative_identity_lhs(field: Field, lambda: &[FieldValue], k: usize) -> Result<FieldValue> {
    let n = lambda.len();
    contract!(1 <= k && k < n, "need 1 <= k <= n-1, got n={n}, k={k}");
    let constant = binomial(n as u64, k as u64 + 1) * factorial(k as u64) * factorial((n * (n - 1) / 2 - k) as u64);
    let ranks: Vec<FieldValue> = (1..=n as i64).map(|i| field.int(i)).collect();
    let num = &vandermonde_eval(field, lambda) * &field.big(&constant.into());
    num.checked_div(&vandermonde_eval(field, &ranks))
}

/// The `2^k k!` torus-fixed points of the symplectic flag manifold, as a
/// permutation and a sign vector, in a fixed order.
pub fn symplectic_fixed_points(k: usize) -> Vec<(Permutation, Vec<i8>)> {
    let mut out = Vec::new();
    for pi in Permutation::all(k) {
        for mask in 0..(1u64 << k) {
            let signs = (0..k).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            out.push((pi.clone(), signs));
        }
    }
    out
}

/// The symplectic fixed-point sum; `|M|` must be `k^2`.
pub fn symplectic_flag_rhs(
    field: Field,
    x: &[FieldValue],
    lambda: &[FieldValue],
    m: &[FieldValue],
) -> Result<FieldValue> {
    let k = x.len();
    contract!(k >= 1, "need k >= 1");
    contract!(lambda.len() == k, "need {k} weight entries");
    contract!(m.len() == k * k, "|M| = {} but k^2 = {}", m.len(), k * k);
    require_field(field, &[x, lambda, m])?;
    if field.int(2).is_zero() {
        return Err(Error::Degenerate("characteristic 2: factor 2x vanishes".into()));
    }
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            return Err(Error::Degenerate(format!("x_{} = 0", i + 1)));
        }
        for (j, xj) in x.iter().enumerate().skip(i + 1) {
            if xi == xj {
                return Err(Error::Degenerate(format!("x_{} = x_{} = {xi}", i + 1, j + 1)));
            }
            if (xi + xj).is_zero() {
                return Err(Error::Degenerate(format!("x_{} = -x_{}", i + 1, j + 1)));
            }
        }
    }
    let mut acc = field.zero();
    for (pi, signs) in symplectic_fixed_points(k) {
        let y: Vec<FieldValue> = (0..k)
            .map(|i| {
                let v = x[pi.at(i + 1) - 1].clone();
                if signs[i] < 0 {
                    -v
                } else {
                    v
                }
            })
            .collect();
        let restriction = lambda.iter().zip(&y).fold(field.zero(), |a, (l, yv)| &a + &(l * yv));
        let mut euler = field.one();
        for i in 0..k {
            for j in i..k {
                euler = &euler * &(&y[i] + &y[j]);
                if i < j {
                    euler = &euler * &(&y[i] - &y[j]);
                }
            }
        }
        let num = dehomogenized(field, &restriction, m);
        acc = &acc + &divide(&num, &euler, "a symplectic fixed point")?;
    }
    Ok(acc)
}

/// Coefficient of `prod x_i^{d_i}` in `f` (of total degree at most
/// `sum d_i`) from its values on the grid `C_1 x .. x C_n`, `|C_i| = d_i + 1`.
pub fn coefficient_formula(
    field: Field,
    f: &dyn Fn(&[FieldValue]) -> Result<FieldValue>,
    sets: &[Vec<FieldValue>],
    degrees: &[usize],
) -> Result<FieldValue> {
    contract!(sets.len() == degrees.len(), "{} sets but {} degrees", sets.len(), degrees.len());
    for (i, (c, &d)) in sets.iter().zip(degrees).enumerate() {
        contract!(c.len() == d + 1, "|C_{}| = {} but d_{} + 1 = {}", i + 1, c.len(), i + 1, d + 1);
        require_field(field, &[c])?;
    }
    // phi_i'(c) = prod_{c' in C_i, c' != c} (c - c')
    let mut weights: Vec<Vec<FieldValue>> = Vec::with_capacity(sets.len());
    for (i, c) in sets.iter().enumerate() {
        let mut w = Vec::with_capacity(c.len());
        for (a, ca) in c.iter().enumerate() {
            let mut prod = field.one();
            for (b, cb) in c.iter().enumerate() {
                if a != b {
                    let diff = ca - cb;
                    if diff.is_zero() {
                        return Err(Error::DivisionByZero(format!("C_{} repeats {ca}", i + 1)));
                    }
                    prod = &prod * &diff;
                }
            }
            w.push(prod);
        }
        weights.push(w);
    }
    let mut acc = field.zero();
    let mut index = vec![0usize; sets.len()];
    loop {
        let point: Vec<FieldValue> = index.iter().enumerate().map(|(i, &a)| sets[i][a].clone()).collect();
        let den = index.iter().enumerate().fold(field.one(), |p, (i, &a)| &p * &weights[i][a]);
        acc = &acc + &f(&point)?.checked_div(&den)?;
        let mut pos = 0;
        loop {
            if pos == index.len() {
                return Ok(acc);
            }
            index[pos] += 1;
            if index[pos] < sets[pos].len() {
                break;
            }
            index[pos] = 0;
            pos += 1;
        }
    }
}

/// A fixed-point identity to verify.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Space {
    Segre {
        r: usize,
        s: usize,
    },
    Grassmann {
        n: usize,
        k: usize,
    },
    GrassmannSchur {
        n: usize,
        k: usize,
        partition: Vec<u64>,
    },
    /// Weakly decreasing weight ending in 0; levels and multiplicities are read off it.
    PartialFlag {
        lambda: Weight,
    },
    /// Strictly decreasing weight ending in 0.
    FullFlag {
        lambda: Weight,
    },
    /// Strictly decreasing positive weight.
    SymplecticFlag {
        lambda: Weight,
    },
    /// `V(lambda)`-identity for the power sums; `lambda` is drawn per trial.
    DerivativeIdentity {
        n: usize,
        k: usize,
    },
}

impl Space {
    pub fn tag(&self) -> &'static str {
        match self {
            Space::Segre { .. } => "segre",
            Space::Grassmann { .. } => "grassmann",
            Space::GrassmannSchur { .. } => "grassmann-schur",
            Space::PartialFlag { .. } => "partial-flag",
            Space::FullFlag { .. } => "full-flag",
            Space::SymplecticFlag { .. } => "symplectic-flag",
            Space::DerivativeIdentity { .. } => "derivative",
        }
    }

    /// Closed-form value of the sum, or `None` when it depends on the trial.
    pub fn closed_form(&self) -> Result<Option<BigUint>> {
        Ok(Some(match self {
            Space::Segre { r, s } => {
                contract!(*r >= 1 && *s >= 1, "Segre needs r, s >= 1");
                binomial((r + s - 2) as u64, (r - 1) as u64)
            }
            Space::Grassmann { n, k } => grassmannian_degree(*n as u64, *k as u64)?,
            Space::GrassmannSchur { n, k, partition } => {
                schubert_degree(&partition_to_indexset(partition, *n, *k)?).degree
            }
            Space::PartialFlag { lambda } => partial_flag_degree(lambda)?.degree,
            Space::FullFlag { lambda } => full_flag_degree_via_vandermonde(lambda)?,
            Space::SymplecticFlag { lambda } => symplectic_flag_degree(lambda)?.degree,
            Space::DerivativeIdentity { n, k } => {
                contract!(1 <= *k && k < n, "need 1 <= k <= n-1, got n={n}, k={k}");
                return Ok(None);
            }
        }))
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Segre { r, s } => write!(f, "segre(r={r},s={s})"),
            Space::Grassmann { n, k } => write!(f, "grassmann(n={n},k={k})"),
            Space::GrassmannSchur { n, k, partition } => {
                let parts: Vec<String> = partition.iter().map(u64::to_string).collect();
                write!(f, "grassmann-schur(n={n},k={k},lambda=({}))", parts.join(","))
            }
            Space::PartialFlag { lambda } => write!(f, "partial-flag(lambda={lambda})"),
            Space::FullFlag { lambda } => write!(f, "full-flag(lambda={lambda})"),
            Space::SymplecticFlag { lambda } => write!(f, "symplectic-flag(lambda={lambda})"),
            Space::DerivativeIdentity { n, k } => write!(f, "derivative(n={n},k={k})"),
        }
    }
}

/// A trial where the sum disagreed with its closed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub trial: usize,
    pub expected: FieldValue,
    pub got: FieldValue,
    pub substitution: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub space: Space,
    pub field: Field,
    pub seed: u64,
    pub requested: usize,
    /// Trials that produced a value.
    pub evaluated: usize,
    pub agreements: usize,
    /// Degenerate draws that were discarded and redrawn.
    pub degenerate: usize,
    /// Closed-form value in the field, when it does not vary by trial.
    pub expected: Option<FieldValue>,
    pub first_mismatch: Option<Mismatch>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.evaluated == self.requested && self.agreements == self.requested
    }
}

struct Draw {
    values: Vec<Vec<FieldValue>>,
}

impl Draw {
    fn describe(&self, names: &[&str]) -> String {
        names
            .iter()
            .zip(&self.values)
            .map(|(name, vs)| {
                let vs: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
                format!("{name}=[{}]", vs.join(","))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn draw(field: Field, rng: &mut ChaCha8Rng, count: usize) -> Vec<FieldValue> {
    (0..count)
        .map(|_| match field {
            Field::Rational => field.int(rng.random_range(1..=RATIONAL_DRAW_MAX)),
            Field::ModP(p) => field.big(&BigInt::from(rng.random_range(0..p.get()))),
        })
        .collect()
}

fn levels(lambda: &Weight) -> (Vec<i64>, Vec<usize>) {
    let mut mu: Vec<i64> = Vec::new();
    let mut mult: Vec<usize> = Vec::new();
    for &l in &lambda.0 {
        if mu.last() == Some(&l) {
            *mult.last_mut().expect("nonempty") += 1;
        } else {
            mu.push(l);
            mult.push(1);
        }
    }
    (mu, mult)
}

/// One evaluation: `(names, draw, rhs, per-trial expected)`.
type Evaluation = (Vec<&'static str>, Draw, Result<FieldValue>, Option<Result<FieldValue>>);

fn evaluate_once(space: &Space, field: Field, rng: &mut ChaCha8Rng) -> Evaluation {
    match space {
        Space::Segre { r, s } => {
            let d = Draw { values: vec![draw(field, rng, *r), draw(field, rng, *s), draw(field, rng, r + s - 2)] };
            let v = segre_rhs(field, &d.values[0], &d.values[1], &d.values[2]);
            (vec!["x", "y", "M"], d, v, None)
        }
        Space::Grassmann { n, k } => {
            let d = Draw { values: vec![draw(field, rng, *n), draw(field, rng, k * (n - k))] };
            let v = grassmann_rhs(field, &d.values[0], *k, &d.values[1]);
            (vec!["x", "M"], d, v, None)
        }
        Space::GrassmannSchur { n, k, partition } => {
            let dim = k * (n - k) - partition.iter().sum::<u64>() as usize;
            let d = Draw { values: vec![draw(field, rng, *n), draw(field, rng, dim)] };
            let v = grassmann_schur_rhs(field, &d.values[0], *k, partition, &d.values[1]);
            (vec!["x", "M"], d, v, None)
        }
        Space::PartialFlag { lambda } => {
            let (mu, mult) = levels(lambda);
            let n = lambda.len();
            let dim = (n * n - mult.iter().map(|m| m * m).sum::<usize>()) / 2;
            let d = Draw { values: vec![draw(field, rng, n), draw(field, rng, dim)] };
            let v = flag_rhs(field, &d.values[0], &field.ints(&mu), &mult, &d.values[1]);
            (vec!["x", "b"], d, v, None)
        }
        Space::FullFlag { lambda } => {
            let k = lambda.len();
            let d = Draw { values: vec![draw(field, rng, k), draw(field, rng, k * (k - 1) / 2)] };
            let v = full_flag_rhs(field, &d.values[0], &field.ints(&lambda.0), &d.values[1]);
            (vec!["x", "M"], d, v, None)
        }
        Space::SymplecticFlag { lambda } => {
            let k = lambda.len();
            let d = Draw { values: vec![draw(field, rng, k), draw(field, rng, k * k)] };
            let v = symplectic_flag_rhs(field, &d.values[0], &field.ints(&lambda.0), &d.values[1]);
            (vec!["x", "M"], d, v, None)
        }
        Space::DerivativeIdentity { n, k } => {
            let d = Draw {
                values: vec![draw(field, rng, *n), draw(field, rng, *n), draw(field, rng, n * (n - 1) / 2 - k)],
            };
            let v = derivative_identity_rhs(field, &d.values[0], &d.values[1], &d.values[2], *k);
            let lhs = derivative_identity_lhs(field, &d.values[1], *k);
            (vec!["x", "lambda", "B"], d, v, Some(lhs))
        }
    }
}

enum TrialOutcome {
    Agreed { degenerate: usize },
    Mismatched { degenerate: usize, mismatch: Mismatch },
    Exhausted { degenerate: usize },
}

fn run_trial(
    space: &Space,
    field: Field,
    seed: u64,
    trial: usize,
    expected: &Option<FieldValue>,
) -> Result<TrialOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let mut degenerate = 0;
    for _ in 0..MAX_ATTEMPTS_PER_TRIAL {
        let (names, d, rhs, per_trial) = evaluate_once(space, field, &mut rng);
        let got = match rhs {
            Ok(v) => v,
            Err(Error::Degenerate(_)) => {
                degenerate += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let want = match (per_trial, expected) {
            (Some(lhs), _) => match lhs {
                Ok(v) => v,
                Err(Error::DivisionByZero(_)) | Err(Error::Degenerate(_)) => {
                    degenerate += 1;
                    continue;
                }
                Err(e) => return Err(e),
            },
            (None, Some(v)) => v.clone(),
            (None, None) => return Err(Error::Internal("no closed form to compare against".into())),
        };
        if got == want {
            return Ok(TrialOutcome::Agreed { degenerate });
        }
        let mismatch = Mismatch { trial, expected: want, got, substitution: d.describe(&names) };
        return Ok(TrialOutcome::Mismatched { degenerate, mismatch });
    }
    Ok(TrialOutcome::Exhausted { degenerate })
}

/// Evaluates the fixed-point sum of `space` at `trials` random non-degenerate
/// substitutions and compares each value with the closed form. Trial `i`
/// draws from its own stream of a generator seeded with `seed`, so reports
/// do not depend on the execution mode.
pub fn verify_identity(space: &Space, trials: usize, field: Field, seed: u64) -> Result<IdentityReport> {
    verify_identity_with(Exec::default(), space, trials, field, seed)
}

pub fn verify_identity_with(
    exec: Exec,
    space: &Space,
    trials: usize,
    field: Field,
    seed: u64,
) -> Result<IdentityReport> {
    let expected = space.closed_form()?.map(|v| field.big(&v.into()));
    validate(space)?;
    let outcomes = exec.map_range(0..trials, |t| run_trial(space, field, seed, t, &expected));
    let mut report = IdentityReport {
        space: space.clone(),
        field,
        seed,
        requested: trials,
        evaluated: 0,
        agreements: 0,
        degenerate: 0,
        expected,
        first_mismatch: None,
    };
    for outcome in outcomes {
        match outcome? {
            TrialOutcome::Agreed { degenerate } => {
                report.evaluated += 1;
                report.agreements += 1;
                report.degenerate += degenerate;
            }
            TrialOutcome::Mismatched { degenerate, mismatch } => {
                report.evaluated += 1;
                report.degenerate += degenerate;
                report.first_mismatch.get_or_insert(mismatch);
            }
            TrialOutcome::Exhausted { degenerate } => report.degenerate += degenerate,
        }
    }
    Ok(report)
}

fn validate(space: &Space) -> Result<()> {
    match space {
        Space::FullFlag { lambda } => {
            contract!(lambda.len() >= 2, "full flag needs at least two entries");
            contract!(lambda.is_strictly_decreasing(), "weight {lambda} is not strictly decreasing");
        }
        Space::Grassmann { n, k } | Space::GrassmannSchur { n, k, .. } => {
            contract!(1 <= *k && k <= n, "need 1 <= k <= n, got n={n}, k={k}");
        }
        _ => {}
    }
    Ok(())
}
