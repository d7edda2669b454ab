//! Root data for `GL(n)` / `SL(n)` and `Sp(2n)`, and the projective degree
//! formulas for their minimal orbits.
//!
//! [`bh_degree`] is the general route: `d! * prod <lambda, a^v> / <rho, a^v>`
//! over the positive roots not orthogonal to `lambda`. The remaining
//! functions are closed forms for particular families, each of which must
//! agree with it.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::exact::{factorial, multinomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `GL(n)`, weights on `L_1..L_n`.
    A,
    /// `Sp(2n)`.
    C,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootSystem {
    pub family: Family,
    pub rank: usize,
}

impl RootSystem {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        contract!(rank >= 1, "rank must be at least 1");
        Ok(RootSystem { family, rank })
    }

    pub fn type_a(rank: usize) -> Result<Self> {
        Self::new(Family::A, rank)
    }

    pub fn type_c(rank: usize) -> Result<Self> {
        Self::new(Family::C, rank)
    }
}

/// A positive root, with 1-based indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Root {
    /// `L_i - L_j`, `i < j`.
    Diff(usize, usize),
    /// `L_i + L_j`, `i <= j`; `Sum(i, i)` is the long root `2 L_i`.
    Sum(usize, usize),
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Root::Diff(i, j) => write!(f, "L{i}-L{j}"),
            Root::Sum(i, j) if i == j => write!(f, "2L{i}"),
            Root::Sum(i, j) => write!(f, "L{i}+L{j}"),
        }
    }
}

/// Integer coefficients on the basis functionals `L_1..L_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_weakly_decreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] > w[1])
    }

    /// `(1,..,1,0,..,0)` with `k` ones, the Grassmannian weight.
    pub fn fundamental(n: usize, k: usize) -> Self {
        Weight((0..n).map(|i| i64::from(i < k)).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootData {
    pub system: RootSystem,
    pub positive_roots: Vec<Root>,
    pub rho: Weight,
}

impl RootData {
    /// `<lambda, alpha^v>`. Only differences and sums of coordinates appear,
    /// so un-normalized `GL(n)` weights pair correctly.
    pub fn pairing(&self, lambda: &Weight, root: &Root) -> i64 {
        let l = &lambda.0;
        match *root {
            Root::Diff(i, j) => l[i - 1] - l[j - 1],
            Root::Sum(i, j) if i == j => l[i - 1],
            Root::Sum(i, j) => l[i - 1] + l[j - 1],
        }
    }
}

pub fn root_data(system: RootSystem) -> RootData {
    let n = system.rank;
    let mut roots = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            roots.push(Root::Diff(i, j));
        }
    }
    let rho = match system.family {
        Family::A => Weight((1..=n).map(|i| (n - i) as i64).collect()),
        Family::C => {
            for i in 1..=n {
                for j in i..=n {
                    roots.push(Root::Sum(i, j));
                }
            }
            Weight((1..=n).map(|i| (n - i + 1) as i64).collect())
        }
    };
    RootData { system, positive_roots: roots, rho }
}

/// Dimension and projective degree of an embedded homogeneous space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Degree {
    pub dim: u64,
    pub degree: BigUint,
}

impl Degree {
    fn new(dim: u64, degree: BigUint) -> Self {
        Degree { dim, degree }
    }
}

fn into_natural(q: BigRational, what: &str) -> Result<BigUint> {
    if !q.is_integer() || q.is_negative() {
        return Err(Error::Internal(format!("{what} evaluated to {q}, not a natural number")));
    }
    Ok(q.to_integer().to_biguint().expect("checked non-negative"))
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Degree of the minimal orbit in `P(Gamma_lambda)`.
pub fn bh_degree(system: RootSystem, lambda: &Weight) -> Result<Degree> {
    contract!(lambda.len() == system.rank, "weight {lambda} has {} coordinates, rank is {}", lambda.len(), system.rank);
    contract!(lambda.is_weakly_decreasing(), "weight {lambda} is not dominant");
    if system.family == Family::C {
        contract!(lambda.0.last().is_some_and(|&x| x >= 0), "type C weight {lambda} has a negative last entry");
    }
    let data = root_data(system);
    let mut d = 0u64;
    let mut acc = BigRational::one();
    for root in &data.positive_roots {
        let num = data.pairing(lambda, root);
        if num == 0 {
            continue;
        }
        d += 1;
        acc *= ratio(num, data.pairing(&data.rho, root));
    }
    contract!(d > 0, "weight {lambda} pairs to zero with every positive root");
    acc *= BigRational::from_integer(factorial(d).into());
    Ok(Degree::new(d, into_natural(acc, "Borel-Hirzebruch product")?))
}

/// Plücker degree of `Gr_k(C^n)`.
pub fn grassmannian_degree(n: u64, k: u64) -> Result<BigUint> {
    contract!(1 <= k && k <= n, "grassmannian needs 1 <= k <= n, got n={n}, k={k}");
    let mut num = factorial(k * (n - k));
    let mut den = BigUint::one();
    for i in 1..=k {
        num *= factorial(i - 1);
        den *= factorial(n - i);
    }
    let q = BigRational::new(num.into(), den.into());
    into_natural(q, "grassmannian degree")
}

/// Strictly increasing subset `I_1 < ... < I_k` of `{1..n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        contract!(!indices.is_empty(), "index set must be non-empty");
        contract!(indices.windows(2).all(|w| w[0] < w[1]), "index set {indices:?} is not strictly increasing");
        contract!(indices[0] >= 1 && *indices.last().unwrap() <= n, "index set {indices:?} leaves [1, {n}]");
        Ok(IndexSet(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }
}

/// Dimension and Plücker degree of the Schubert variety `sigma_I`.
pub fn schubert_degree(set: &IndexSet) -> Degree {
    let idx = set.indices();
    let k = idx.len() as u64;
    let dim = idx.iter().map(|&i| i as u64).sum::<u64>() - k * (k + 1) / 2;
    let mut num = factorial(dim);
    let mut den = BigUint::one();
    for (a, &i) in idx.iter().enumerate() {
        den *= factorial(i as u64 - 1);
        for &j in &idx[a + 1..] {
            num *= (j - i) as u64;
        }
    }
    let q = BigRational::new(num.into(), den.into());
    let degree = into_natural(q, "schubert degree").expect("Schubert's formula is integral");
    Degree::new(dim, degree)
}

/// `I_j = n - k + j - lambda_j` for a partition inside the `k x (n-k)` box.
/// Shorter partitions are padded with zeros.
pub fn partition_to_indexset(partition: &[u64], n: usize, k: usize) -> Result<IndexSet> {
    contract!(1 <= k && k <= n, "need 1 <= k <= n");
    contract!(partition.len() <= k, "partition {partition:?} has more than {k} parts");
    contract!(partition.windows(2).all(|w| w[0] >= w[1]), "partition {partition:?} is not weakly decreasing");
    contract!(
        partition.first().is_none_or(|&p| p as usize <= n - k),
        "partition {partition:?} does not fit in a {k}x{} box",
        n - k
    );
    let indices = (1..=k)
        .map(|j| {
            let part = partition.get(j - 1).copied().unwrap_or(0) as usize;
            n - k + j - part
        })
        .collect();
    IndexSet::new(indices, n)
}

fn require_flag_weight(lambda: &Weight) -> Result<()> {
    contract!(!lambda.is_empty(), "empty weight");
    contract!(lambda.is_weakly_decreasing(), "weight {lambda} is not weakly decreasing");
    contract!(lambda.0.last() == Some(&0), "weight {lambda} must end in 0");
    Ok(())
}

/// `d! * prod_{lambda_i > lambda_j} (lambda_i - lambda_j) / (j - i)`, with
/// `d` the number of strict pairs.
pub fn partial_flag_degree(lambda: &Weight) -> Result<Degree> {
    require_flag_weight(lambda)?;
    let l = &lambda.0;
    let mut d = 0u64;
    let mut acc = BigRational::one();
    for i in 0..l.len() {
        for j in i + 1..l.len() {
            if l[i] > l[j] {
                d += 1;
                acc *= ratio(l[i] - l[j], (j - i) as i64);
            }
        }
    }
    contract!(d > 0, "constant weight {lambda} has a point as minimal orbit");
    acc *= BigRational::from_integer(factorial(d).into());
    Ok(Degree::new(d, into_natural(acc, "partial flag degree")?))
}

/// Full-flag degree as `(-1)^{C(k,2)} * multinomial(d; 0,1,..,k-1) * V(lambda)`
/// with `V(lambda) = prod_{i<j} (lambda_j - lambda_i)`.
pub fn full_flag_degree_via_vandermonde(lambda: &Weight) -> Result<BigUint> {
    require_flag_weight(lambda)?;
    contract!(lambda.is_strictly_decreasing(), "weight {lambda} is not strictly decreasing");
    let l = &lambda.0;
    let k = l.len() as u64;
    let d = k * (k - 1) / 2;
    let delta: Vec<u64> = (0..k).collect();
    let mut v = BigInt::one();
    for i in 0..l.len() {
        for j in i + 1..l.len() {
            v *= l[j] - l[i];
        }
    }
    let mut value = BigInt::from(multinomial(d, &delta)?) * v;
    if d % 2 == 1 {
        value = -value;
    }
    value.to_biguint().ok_or_else(|| Error::Internal(format!("negative full flag degree for {lambda}")))
}

/// Degree of the symplectic flag variety for `lambda_1 > ... > lambda_k > 0`:
/// `(k^2)!/k! * prod lambda_i * prod_{i<j} (lambda_i^2 - lambda_j^2)/(j^2 - i^2)`.
pub fn symplectic_flag_degree(lambda: &Weight) -> Result<Degree> {
    contract!(!lambda.is_empty(), "empty weight");
    contract!(lambda.is_strictly_decreasing(), "weight {lambda} is not strictly decreasing");
    contract!(lambda.0.last().is_some_and(|&x| x > 0), "weight {lambda} is not positive");
    let l = &lambda.0;
    let k = l.len() as u64;
    let d = k * k;
    let mut acc = BigRational::new(factorial(d).into(), factorial(k).into());
    for (i, &li) in l.iter().enumerate() {
        acc *= BigRational::from_integer(li.into());
        for (j, &lj) in l.iter().enumerate().skip(i + 1) {
            let (a, b) = ((i + 1) as i64, (j + 1) as i64);
            acc *= ratio(li * li - lj * lj, b * b - a * a);
        }
    }
    Ok(Degree::new(d, into_natural(acc, "symplectic flag degree")?))
}
