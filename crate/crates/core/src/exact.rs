//! Exact scalars and sparse integer polynomials.
//!
//! Every evaluation in the crate happens either over the rationals (pairs of
//! arbitrary-precision integers kept in lowest terms) or over a prime field.
//! There is no floating point anywhere.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};

/// A prime modulus. Primality is checked once, at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Modulus(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn reduce(self, a: &BigInt) -> u64 {
        let p = BigInt::from(self.0);
        a.mod_floor(&p).to_u64().expect("residue below a u64 modulus")
    }

    pub fn reduce_i64(self, a: i64) -> u64 {
        (a as i128).rem_euclid(self.0 as i128) as u64
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Deterministic trial division; moduli in this crate are small.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Returns `b` with `a * b = 1 (mod p)`.
pub fn mod_inverse(a: &BigInt, p: Modulus) -> Result<u64> {
    let r = p.reduce(a);
    if r == 0 {
        return Err(Error::DivisionByZero(format!("{a} (mod {p})")));
    }
    // Extended Euclid on (r, p).
    let (mut old_r, mut cur_r) = (r as i128, p.get() as i128);
    let (mut old_s, mut cur_s) = (1i128, 0i128);
    while cur_r != 0 {
        let q = old_r / cur_r;
        (old_r, cur_r) = (cur_r, old_r - q * cur_r);
        (old_s, cur_s) = (cur_s, old_s - q * cur_s);
    }
    debug_assert_eq!(old_r, 1);
    Ok(old_s.rem_euclid(p.get() as i128) as u64)
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `d! / prod parts_i!`.
pub fn multinomial(d: u64, parts: &[u64]) -> Result<BigUint> {
    let sum: u64 = parts.iter().sum();
    contract!(sum == d, "multinomial parts sum to {sum}, expected {d}");
    // Product of binomials avoids the full factorial quotient.
    let mut acc = BigUint::one();
    let mut used = 0u64;
    for &part in parts {
        used += part;
        acc *= binomial(used, part);
    }
    Ok(acc)
}

/// Trial-division factorization with divisors below `limit`. Returns the
/// prime powers found and the unfactored cofactor (1 when complete).
pub fn factorize(n: &BigUint, limit: u64) -> (Vec<(BigUint, u32)>, BigUint) {
    let mut rest = n.clone();
    let mut out = Vec::new();
    if rest.is_zero() {
        return (out, rest);
    }
    let mut d = 2u64;
    while d < limit && BigUint::from(d) * BigUint::from(d) <= rest {
        let mut e = 0;
        while (&rest % d).is_zero() {
            rest /= d;
            e += 1;
        }
        if e > 0 {
            out.push((BigUint::from(d), e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > BigUint::one() && BigUint::from(d) * BigUint::from(d) > rest {
        out.push((rest, 1));
        rest = BigUint::one();
    }
    (out, rest)
}

/// The scalar domain an evaluation runs in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    ModP(Modulus),
}

impl Field {
    pub fn mod_p(p: u64) -> Result<Self> {
        Ok(Field::ModP(Modulus::new(p)?))
    }

    pub fn zero(self) -> FieldValue {
        self.int(0)
    }

    pub fn one(self) -> FieldValue {
        self.int(1)
    }

    pub fn int(self, a: i64) -> FieldValue {
        match self {
            Field::Rational => FieldValue::Rational(BigRational::from_integer(a.into())),
            Field::ModP(p) => FieldValue::ModP { residue: p.reduce_i64(a), modulus: p },
        }
    }

    pub fn big(self, a: &BigInt) -> FieldValue {
        match self {
            Field::Rational => FieldValue::Rational(BigRational::from_integer(a.clone())),
            Field::ModP(p) => FieldValue::ModP { residue: p.reduce(a), modulus: p },
        }
    }

    pub fn ratio(self, q: &BigRational) -> Result<FieldValue> {
        match self {
            Field::Rational => Ok(FieldValue::Rational(q.clone())),
            Field::ModP(_) => self.big(q.numer()).checked_div(&self.big(q.denom())),
        }
    }

    pub fn ints(self, values: &[i64]) -> Vec<FieldValue> {
        values.iter().map(|&a| self.int(a)).collect()
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::ModP(p) => write!(f, "F_{p}"),
        }
    }
}

/// An exact rational in lowest terms, or a residue modulo a prime.
///
/// The `std::ops` impls panic when the operands live in different fields;
/// use the `checked_*` methods where that can happen.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldValue {
    Rational(BigRational),
    ModP { residue: u64, modulus: Modulus },
}

impl FieldValue {
    pub fn field(&self) -> Field {
        match self {
            FieldValue::Rational(_) => Field::Rational,
            FieldValue::ModP { modulus, .. } => Field::ModP(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldValue::Rational(q) => q.is_zero(),
            FieldValue::ModP { residue, .. } => *residue == 0,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldValue::Rational(q) => Some(q),
            FieldValue::ModP { .. } => None,
        }
    }

    /// The value as an integer, if it is a rational with denominator one.
    pub fn to_integer(&self) -> Option<BigInt> {
        match self {
            FieldValue::Rational(q) if q.is_integer() => Some(q.to_integer()),
            FieldValue::Rational(_) => None,
            FieldValue::ModP { residue, .. } => Some(BigInt::from(*residue)),
        }
    }

    fn mismatch(&self, other: &FieldValue) -> Error {
        Error::FieldMismatch { left: self.field().to_string(), right: other.field().to_string() }
    }

    pub fn checked_add(&self, other: &FieldValue) -> Result<FieldValue> {
        match (self, other) {
            (FieldValue::Rational(a), FieldValue::Rational(b)) => Ok(FieldValue::Rational(a + b)),
            (FieldValue::ModP { residue: a, modulus: p }, FieldValue::ModP { residue: b, modulus: q }) if p == q => {
                Ok(FieldValue::ModP { residue: ((*a as u128 + *b as u128) % p.get() as u128) as u64, modulus: *p })
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn checked_sub(&self, other: &FieldValue) -> Result<FieldValue> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &FieldValue) -> Result<FieldValue> {
        match (self, other) {
            (FieldValue::Rational(a), FieldValue::Rational(b)) => Ok(FieldValue::Rational(a * b)),
            (FieldValue::ModP { residue: a, modulus: p }, FieldValue::ModP { residue: b, modulus: q }) if p == q => {
                Ok(FieldValue::ModP { residue: ((*a as u128 * *b as u128) % p.get() as u128) as u64, modulus: *p })
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn checked_div(&self, other: &FieldValue) -> Result<FieldValue> {
        self.checked_mul(&other.inverse()?)
    }

    pub fn inverse(&self) -> Result<FieldValue> {
        match self {
            FieldValue::Rational(q) => {
                if q.is_zero() {
                    Err(Error::DivisionByZero("0".into()))
                } else {
                    Ok(FieldValue::Rational(q.recip()))
                }
            }
            FieldValue::ModP { residue, modulus } => {
                Ok(FieldValue::ModP { residue: mod_inverse(&BigInt::from(*residue), *modulus)?, modulus: *modulus })
            }
        }
    }

    fn neg_ref(&self) -> FieldValue {
        match self {
            FieldValue::Rational(q) => FieldValue::Rational(-q),
            FieldValue::ModP { residue, modulus } => {
                FieldValue::ModP { residue: (modulus.get() - residue) % modulus.get(), modulus: *modulus }
            }
        }
    }

    pub fn pow(&self, e: u32) -> FieldValue {
        let mut acc = self.field().one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for FieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldValue::Rational(q) => write!(f, "{q}"),
            FieldValue::ModP { residue, modulus } => write!(f, "{residue} (mod {modulus})"),
        }
    }
}

macro_rules! forward_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&FieldValue> for &FieldValue {
            type Output = FieldValue;
            fn $method(self, rhs: &FieldValue) -> FieldValue {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait for FieldValue {
            type Output = FieldValue;
            fn $method(self, rhs: FieldValue) -> FieldValue {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);

impl Neg for &FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        self.neg_ref()
    }
}

impl Neg for FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        self.neg_ref()
    }
}

/// Multiplies `values` together; the empty product is `field.one()`.
pub fn product<'a>(field: Field, values: impl IntoIterator<Item = &'a FieldValue>) -> FieldValue {
    values.into_iter().fold(field.one(), |acc, v| &acc * v)
}

pub fn sum<'a>(field: Field, values: impl IntoIterator<Item = &'a FieldValue>) -> FieldValue {
    values.into_iter().fold(field.zero(), |acc, v| &acc + v)
}

/// Exponent sequence of one monomial, dense over the variables.
pub type Exponent = Vec<u32>;

/// Sparse multivariate polynomial with arbitrary-precision integer
/// coefficients. Terms with zero coefficient are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Exponent, BigInt>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    /// The single variable `v_{index}` (0-based).
    pub fn var(nvars: usize, index: usize) -> Result<Self> {
        contract!(index < nvars, "variable {index} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[index] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, BigInt::one());
        Ok(p)
    }

    /// `sum_i coeffs[i] * v_i`.
    pub fn linear(coeffs: &[i64]) -> Self {
        let nvars = coeffs.len();
        let mut p = Self::zero(nvars);
        for (i, &c) in coeffs.iter().enumerate() {
            let mut e = vec![0; nvars];
            e[i] = 1;
            p.add_term(e, BigInt::from(c));
        }
        p
    }

    /// `v_start + ... + v_end` over a half-open range of 0-based variables.
    pub fn range_sum(nvars: usize, range: std::ops::Range<usize>) -> Result<Self> {
        contract!(range.end <= nvars, "range {range:?} exceeds {nvars} variables");
        let coeffs: Vec<i64> = (0..nvars).map(|i| i64::from(range.contains(&i))).collect();
        Ok(Self::linear(&coeffs))
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, BigInt)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            contract!(e.len() == nvars, "exponent {e:?} has length {}, expected {nvars}", e.len());
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponent, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, BigInt> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_same(&self, other: &SparsePoly) -> Result<()> {
        contract!(self.nvars == other.nvars, "variable count mismatch: {} vs {}", self.nvars, other.nvars);
        Ok(())
    }

    pub fn add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_same(other)?;
        let mut out = SparsePoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> SparsePoly {
        let mut acc = SparsePoly::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self).expect("same variable count");
        }
        acc
    }

    pub fn scale(&self, c: &BigInt) -> SparsePoly {
        let mut out = SparsePoly::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    /// Coefficient of the monomial `e`; zero when absent.
    pub fn coef(&self, e: &[u32]) -> Result<BigInt> {
        contract!(e.len() == self.nvars, "exponent length {} != {}", e.len(), self.nvars);
        Ok(self.terms.get(e).cloned().unwrap_or_default())
    }

    pub fn support(&self) -> BTreeSet<Exponent> {
        self.terms.keys().cloned().collect()
    }

    /// Total degree of the highest term, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|x| x == d),
        }
    }

    pub fn all_coefficients_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// `times`-fold partial derivative in variable `var`.
    pub fn derivative(&self, var: usize, times: u32) -> Result<SparsePoly> {
        contract!(var < self.nvars, "variable {var} out of range");
        let mut out = SparsePoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] < times {
                continue;
            }
            let falling: BigInt = (0..times).map(|i| BigInt::from(e[var] - i)).product();
            let mut e2 = e.clone();
            e2[var] -= times;
            out.add_term(e2, c * falling);
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[FieldValue]) -> Result<FieldValue> {
        contract!(point.len() == self.nvars, "point has {} coordinates, expected {}", point.len(), self.nvars);
        let field = match point.first() {
            Some(v) => v.field(),
            None => Field::Rational,
        };
        let mut acc = field.zero();
        for (e, c) in &self.terms {
            let mut term = field.big(c);
            for (v, &k) in point.iter().zip(e) {
                term = term.checked_mul(&v.pow(k))?;
            }
            acc = acc.checked_add(&term)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // Highest graded-lex first reads more naturally.
        for (e, c) in self.terms.iter().rev() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let is_const = e.iter().all(|&x| x == 0);
            if !mag.is_one() || is_const {
                write!(f, "{mag}")?;
            }
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "v{}", i + 1)?,
                    _ => write!(f, "v{}^{}", i + 1, k)?,
                }
            }
        }
        Ok(())
    }
}
