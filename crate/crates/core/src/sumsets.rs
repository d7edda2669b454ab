//! Restricted sumsets in `F_p`, per-instance theorem checkers, and
//! exhaustive scanners built on them.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{contract, Result};
use crate::exact::Modulus;
use crate::par::Exec;

/// Default cap on checker evaluations per scan.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Findings kept verbatim in a scan report; the rest are only counted.
pub const FINDINGS_CAP: usize = 64;

/// A subset of `F_p` stored as a bitset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResidueSet {
    p: u64,
    words: Vec<u64>,
}

impl ResidueSet {
    pub fn empty(p: u64) -> Self {
        ResidueSet { p, words: vec![0; (p as usize).div_ceil(64)] }
    }

    pub fn singleton(p: u64, x: u64) -> Self {
        let mut s = Self::empty(p);
        s.insert(x);
        s
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn insert(&mut self, x: u64) {
        let x = x % self.p;
        self.words[(x / 64) as usize] |= 1 << (x % 64);
    }

    pub fn contains(&self, x: u64) -> bool {
        let x = x % self.p;
        self.words[(x / 64) as usize] >> (x % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.p).filter(|&x| self.contains(x))
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    pub fn union_with(&mut self, other: &ResidueSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// `{x + shift : x in self}`.
    pub fn translated(&self, shift: u64) -> ResidueSet {
        let mut out = Self::empty(self.p);
        for x in self.iter() {
            out.insert(x + shift % self.p);
        }
        out
    }

    /// `{-x : x in self}`.
    pub fn negated(&self) -> ResidueSet {
        let mut out = Self::empty(self.p);
        for x in self.iter() {
            out.insert(self.p - x);
        }
        out
    }
}

impl fmt::Display for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

fn validate_set(p: u64, set: &[u64], name: &str) -> Result<Modulus> {
    let m = Modulus::new(p)?;
    let mut seen = ResidueSet::empty(p);
    for &x in set {
        contract!(x < p, "{name} element {x} is not a residue mod {p}");
        contract!(!seen.contains(x), "{name} repeats {x}");
        seen.insert(x);
    }
    Ok(m)
}

fn neg(p: u64, x: u64) -> u64 {
    (p - x % p) % p
}

fn mul(p: u64, a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// `A + B`.
pub fn sumset(a: &[u64], b: &[u64], p: u64) -> Result<ResidueSet> {
    validate_set(p, a, "A")?;
    validate_set(p, b, "B")?;
    let mut out = ResidueSet::empty(p);
    for &x in a {
        for &y in b {
            out.insert(x + y);
        }
    }
    Ok(out)
}

/// Sums of `k` distinct elements of `A`.
pub fn restricted_sumset(a: &[u64], k: usize, p: u64) -> Result<ResidueSet> {
    validate_set(p, a, "A")?;
    contract!(k <= a.len(), "k = {k} exceeds |A| = {}", a.len());
    // reach[c] = sums of c distinct elements among those processed so far
    let mut reach = vec![ResidueSet::empty(p); k + 1];
    reach[0].insert(0);
    for &x in a {
        for c in (1..=k).rev() {
            let step = reach[c - 1].translated(x);
            reach[c].union_with(&step);
        }
    }
    Ok(reach.swap_remove(k))
}

/// Checks the signed-sum preconditions, naming the offending element or pair.
pub fn signed_precondition(a: &[u64], p: u64) -> Result<std::result::Result<(), String>> {
    validate_set(p, a, "A")?;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            return Ok(Err(format!("a_{} = 0", i + 1)));
        }
        for (j, &y) in a.iter().enumerate().skip(i + 1) {
            if (x + y) % p == 0 {
                return Ok(Err(format!("a_{} + a_{} = 0", i + 1, j + 1)));
            }
        }
    }
    Ok(Ok(()))
}

/// `{sum_{i in I} +-a_i : |I| = k}`.
pub fn signed_restricted_sumset(a: &[u64], k: usize, p: u64) -> Result<ResidueSet> {
    if let Err(reason) = signed_precondition(a, p)? {
        return Err(crate::Error::Contract(reason));
    }
    contract!(k <= a.len(), "k = {k} exceeds |A| = {}", a.len());
    Ok(signed_sums_unchecked(a, k, p))
}

fn signed_sums_unchecked(a: &[u64], k: usize, p: u64) -> ResidueSet {
    let mut reach = vec![ResidueSet::empty(p); k + 1];
    reach[0].insert(0);
    for &x in a {
        for c in (1..=k).rev() {
            let mut step = reach[c - 1].translated(x);
            step.union_with(&reach[c - 1].translated(neg(p, x)));
            reach[c].union_with(&step);
        }
    }
    reach.swap_remove(k)
}

/// `{sum a_i x_i : x_i in A pairwise distinct}`.
pub fn linear_restricted_sumset(coeffs: &[u64], a: &[u64], p: u64) -> Result<ResidueSet> {
    validate_set(p, a, "A")?;
    let n = coeffs.len();
    contract!(n <= a.len(), "{n} coefficients but |A| = {}", a.len());
    contract!(n <= 20, "too many coefficients ({n})");
    for (i, &c) in coeffs.iter().enumerate() {
        contract!(c % p != 0, "a_{} = 0 mod {p}", i + 1);
    }
    // reach[mask] = sums where the coefficient slots in `mask` are filled
    let full = (1usize << n) - 1;
    let mut reach = vec![ResidueSet::empty(p); full + 1];
    reach[0].insert(0);
    for &x in a {
        for mask in (1..=full).rev() {
            for (i, &c) in coeffs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    let step = reach[mask ^ (1 << i)].translated(mul(p, c % p, x));
                    reach[mask].union_with(&step);
                }
            }
        }
    }
    Ok(reach.swap_remove(full))
}

/// Multiplicities of the distinct values among `coeffs`, in first-seen order.
pub fn multiplicities(coeffs: &[u64]) -> Vec<usize> {
    let mut counts: Vec<(u64, usize)> = Vec::new();
    for &c in coeffs {
        match counts.iter_mut().find(|(v, _)| *v == c) {
            Some((_, n)) => *n += 1,
            None => counts.push((c, 1)),
        }
    }
    counts.into_iter().map(|(_, n)| n).collect()
}

/// `d = n(|A| - n) + sum_{i<j} n_i n_j`.
pub fn sun_d(multiplicities: &[usize], set_size: usize) -> Result<u64> {
    let n: usize = multiplicities.iter().sum();
    contract!(n <= set_size, "n = {n} exceeds |A| = {set_size}");
    let mut d = (n * (set_size - n)) as u64;
    for i in 0..multiplicities.len() {
        for j in i + 1..multiplicities.len() {
            d += (multiplicities[i] * multiplicities[j]) as u64;
        }
    }
    Ok(d)
}

/// `d = 2k(n-k) + C(k+1, 2)`.
pub fn signed_d(n: usize, k: usize) -> u64 {
    (2 * k * (n - k) + k * (k + 1) / 2) as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Theorem {
    /// `|A_k| >= min{k(n-k)+1, p}`.
    Ddsh,
    /// `|A+B| >= min{|A|+|B|-1, p}`.
    CauchyDavenport,
    /// `|{sum a_i x_i}| >= d+1` when `p > d`.
    Sun,
    /// Signed sums exceed `d` when `p > d`.
    SignedEh,
    /// All of `F_p` is reached by `sum a_i x_pi(i)` when `n > 3`, `p <= C(n,2)`.
    SmallPrimeFull,
    /// All of `F_p` (even `k`) or all nonzero classes (odd `k`) when `p <= d`.
    SignedSmallP,
}

impl Theorem {
    pub const ALL: [Theorem; 6] = [
        Theorem::Ddsh,
        Theorem::CauchyDavenport,
        Theorem::Sun,
        Theorem::SignedEh,
        Theorem::SmallPrimeFull,
        Theorem::SignedSmallP,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Theorem::Ddsh => "ddsh",
            Theorem::CauchyDavenport => "cauchy-davenport",
            Theorem::Sun => "sun",
            Theorem::SignedEh => "signed-eh",
            Theorem::SmallPrimeFull => "small-prime-full",
            Theorem::SignedSmallP => "signed-smallp",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Outcome {
    Pass,
    Fail,
    /// The oracle contradicts the stated claim on an instance the claim covers.
    Flag(String),
    /// Outside the theorem's hypotheses.
    Skip(String),
}

impl Outcome {
    pub fn tag(&self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Flag(_) => "flag",
            Outcome::Skip(_) => "skip",
        }
    }
}

/// One checker evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Verdict {
    pub theorem: Theorem,
    pub p: u64,
    pub set: Vec<u64>,
    /// `B` for Cauchy–Davenport, the coefficients for the linear variants.
    pub other: Option<Vec<u64>>,
    pub k: Option<usize>,
    pub cardinality: usize,
    /// The cardinality the theorem promises.
    pub bound: u64,
    pub outcome: Outcome,
    pub zero_attained: Option<bool>,
    /// `n = 2` and `a_1 + a_2 = 0`.
    pub delta_exception: bool,
}

impl Verdict {
    fn new(theorem: Theorem, p: u64, set: &[u64]) -> Self {
        Verdict {
            theorem,
            p,
            set: set.to_vec(),
            other: None,
            k: None,
            cardinality: 0,
            bound: 0,
            outcome: Outcome::Pass,
            zero_attained: None,
            delta_exception: false,
        }
    }

    fn judge(mut self, cardinality: usize, bound: u64) -> Self {
        self.cardinality = cardinality;
        self.bound = bound;
        self.outcome = if cardinality as u64 >= bound { Outcome::Pass } else { Outcome::Fail };
        self
    }
}

pub fn check_ddsh(p: u64, a: &[u64], k: usize) -> Result<Verdict> {
    let s = restricted_sumset(a, k, p)?;
    let n = a.len();
    let bound = ((n - k) * k + 1).min(p as usize) as u64;
    let mut v = Verdict::new(Theorem::Ddsh, p, a).judge(s.len(), bound);
    v.k = Some(k);
    Ok(v)
}

pub fn check_cauchy_davenport(p: u64, a: &[u64], b: &[u64]) -> Result<Verdict> {
    contract!(!a.is_empty() && !b.is_empty(), "A and B must be nonempty");
    let s = sumset(a, b, p)?;
    let bound = (a.len() + b.len() - 1).min(p as usize) as u64;
    let mut v = Verdict::new(Theorem::CauchyDavenport, p, a).judge(s.len(), bound);
    v.other = Some(b.to_vec());
    Ok(v)
}

pub fn check_sun(p: u64, a: &[u64], coeffs: &[u64]) -> Result<Verdict> {
    let s = linear_restricted_sumset(coeffs, a, p)?;
    let d = sun_d(&multiplicities(coeffs), a.len())?;
    let mut v = Verdict::new(Theorem::Sun, p, a);
    v.other = Some(coeffs.to_vec());
    v.delta_exception = coeffs.len() == 2 && (coeffs[0] + coeffs[1]).is_multiple_of(p);
    if p <= d {
        v.cardinality = s.len();
        v.bound = d + 1;
        v.outcome = Outcome::Skip(format!("p = {p} <= d = {d}"));
        return Ok(v);
    }
    let mut v = v.judge(s.len(), d + 1);
    v.zero_attained = Some(s.contains(0));
    Ok(v)
}

pub fn check_small_prime_full(p: u64, a: &[u64], coeffs: &[u64]) -> Result<Verdict> {
    let n = a.len();
    contract!(coeffs.len() == n, "need |a| = |A| = {n}, got {}", coeffs.len());
    validate_set(p, coeffs, "a")?;
    let mut v = Verdict::new(Theorem::SmallPrimeFull, p, a);
    v.other = Some(coeffs.to_vec());
    v.bound = p;
    let d = (n * (n - 1) / 2) as u64;
    if n <= 3 || p > d {
        v.outcome = Outcome::Skip(format!("needs n > 3 and p <= C(n,2) = {d}"));
        return Ok(v);
    }
    let s = full_permutation_sums(p, a, coeffs)?;
    Ok(v.judge(s.len(), p))
}

fn full_permutation_sums(p: u64, a: &[u64], coeffs: &[u64]) -> Result<ResidueSet> {
    // with |A| = n a zero coefficient just absorbs the one unused element
    let nonzero: Vec<u64> = coeffs.iter().copied().filter(|&c| c != 0).collect();
    if nonzero.len() == coeffs.len() {
        return linear_restricted_sumset(coeffs, a, p);
    }
    linear_restricted_sumset(&nonzero, a, p)
}

pub fn check_signed_eh(p: u64, a: &[u64], k: usize) -> Result<Verdict> {
    let mut v = Verdict::new(Theorem::SignedEh, p, a);
    v.k = Some(k);
    contract!(1 <= k && k <= a.len(), "need 1 <= k <= |A|");
    let d = signed_d(a.len(), k);
    v.bound = d + 1;
    if let Err(reason) = signed_precondition(a, p)? {
        v.outcome = Outcome::Skip(reason);
        return Ok(v);
    }
    let s = signed_sums_unchecked(a, k, p);
    v.zero_attained = Some(s.contains(0));
    if p <= d {
        v.cardinality = s.len();
        v.outcome = Outcome::Skip(format!("p = {p} <= d = {d}"));
        return Ok(v);
    }
    Ok(v.judge(s.len(), d + 1))
}

/// For even `k` the claim is that every class is reached; for odd `k`
/// every nonzero class. A missing zero for even `k` is a finding.
pub fn check_signed_smallp(p: u64, a: &[u64], k: usize) -> Result<Verdict> {
    let mut v = Verdict::new(Theorem::SignedSmallP, p, a);
    v.k = Some(k);
    contract!(1 <= k && k <= a.len(), "need 1 <= k <= |A|");
    let d = signed_d(a.len(), k);
    if let Err(reason) = signed_precondition(a, p)? {
        v.outcome = Outcome::Skip(reason);
        return Ok(v);
    }
    let s = signed_sums_unchecked(a, k, p);
    let zero = s.contains(0);
    v.zero_attained = Some(zero);
    v.cardinality = s.len();
    if p > d {
        v.bound = p;
        v.outcome = Outcome::Skip(format!("p = {p} > d = {d}"));
        return Ok(v);
    }
    let nonzero = s.len() - usize::from(zero);
    v.bound = if k.is_multiple_of(2) { p } else { p - 1 };
    v.outcome = if nonzero < (p - 1) as usize {
        Outcome::Fail
    } else if k.is_multiple_of(2) && !zero {
        Outcome::Flag(format!("k = {k} even, p = {p} <= d = {d}, zero class missing"))
    } else {
        Outcome::Pass
    };
    Ok(v)
}

/// Scan parameters. `None` size limits fall back to per-theorem defaults.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanConfig {
    pub primes: Vec<u64>,
    pub max_set_size: Option<usize>,
    pub max_n: Option<usize>,
    pub max_k: Option<usize>,
    pub budget: u64,
}

impl ScanConfig {
    pub fn new(primes: Vec<u64>) -> Self {
        ScanConfig { primes, max_set_size: None, max_n: None, max_k: None, budget: DEFAULT_BUDGET }
    }
}

/// Aggregate of a scan. Merging is associative, so units can be evaluated
/// in any order and folded in canonical order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    pub evaluations: u64,
    pub pass: u64,
    pub fail: u64,
    pub flag: u64,
    pub skip: u64,
    pub skip_reasons: BTreeMap<String, u64>,
    pub delta_exceptions: u64,
    /// Instances (odd `k` signed small-`p`, or Sun) where 0 was not reached.
    pub zero_missing: u64,
    /// Failures and flags in canonical order, at most [`FINDINGS_CAP`].
    pub findings: Vec<Verdict>,
}

impl Tally {
    fn record(&mut self, v: Verdict) {
        self.evaluations += 1;
        if v.delta_exception {
            self.delta_exceptions += 1;
        }
        if v.zero_attained == Some(false) && v.theorem == Theorem::SignedSmallP {
            self.zero_missing += 1;
        }
        match &v.outcome {
            Outcome::Pass => self.pass += 1,
            Outcome::Fail => self.fail += 1,
            Outcome::Flag(_) => self.flag += 1,
            Outcome::Skip(reason) => {
                self.skip += 1;
                *self.skip_reasons.entry(skip_class(reason)).or_default() += 1;
            }
        }
        if matches!(v.outcome, Outcome::Fail | Outcome::Flag(_)) && self.findings.len() < FINDINGS_CAP {
            self.findings.push(v);
        }
    }

    fn merge(&mut self, other: Tally) {
        self.evaluations += other.evaluations;
        self.pass += other.pass;
        self.fail += other.fail;
        self.flag += other.flag;
        self.skip += other.skip;
        for (k, v) in other.skip_reasons {
            *self.skip_reasons.entry(k).or_default() += v;
        }
        self.delta_exceptions += other.delta_exceptions;
        self.zero_missing += other.zero_missing;
        let room = FINDINGS_CAP - self.findings.len();
        self.findings.extend(other.findings.into_iter().take(room));
    }
}

fn skip_class(reason: &str) -> String {
    if reason.contains("<= d") {
        "p <= d".into()
    } else if reason.contains("> d") {
        "p > d".into()
    } else if reason.contains("= 0") {
        "signed precondition".into()
    } else {
        reason.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport {
    pub theorem: Theorem,
    pub config: ScanConfig,
    pub tally: Tally,
    /// False when the budget stopped the scan early.
    pub complete: bool,
    pub units_total: usize,
    pub units_done: usize,
}

impl ScanReport {
    pub fn first_failure(&self) -> Option<&Verdict> {
        self.tally.findings.iter().find(|v| v.outcome == Outcome::Fail)
    }
}

/// All `size`-subsets of `0..p` in lexicographic order.
pub fn subsets_of_size(p: u64, size: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn rec(start: u64, p: u64, size: usize, current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for x in start..p {
            if (p - x) < (size - current.len()) as u64 {
                break;
            }
            current.push(x);
            rec(x + 1, p, size, current, out);
            current.pop();
        }
    }
    rec(0, p, size, &mut current, &mut out);
    out
}

/// Non-decreasing `n`-tuples with entries in `1..p`.
fn coefficient_multisets(p: u64, n: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    fn rec(start: u64, p: u64, n: usize, current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for x in start..p {
            current.push(x);
            rec(x, p, n, current, out);
            current.pop();
        }
    }
    rec(1, p, n, &mut Vec::new(), &mut out);
    out
}

/// A scan work unit: one prime and one base set, with the list of
/// secondary parameters to check against it.
#[derive(Debug, Clone)]
struct Unit {
    p: u64,
    set: Vec<u64>,
    cost: u64,
}

fn units(theorem: Theorem, config: &ScanConfig) -> Result<Vec<Unit>> {
    let mut out = Vec::new();
    for &p in &config.primes {
        Modulus::new(p)?;
        let max_size = match theorem {
            Theorem::Ddsh | Theorem::CauchyDavenport => config.max_set_size.unwrap_or(p as usize),
            Theorem::Sun => config.max_set_size.unwrap_or(5),
            Theorem::SignedEh | Theorem::SignedSmallP => config.max_n.unwrap_or(4),
            Theorem::SmallPrimeFull => config.max_n.unwrap_or(5),
        }
        .min(p as usize);
        let min_size = if theorem == Theorem::SmallPrimeFull { small_prime_min_n(p) } else { 1 };
        for size in min_size..=max_size {
            for set in subsets_of_size(p, size) {
                let cost = unit_cost(theorem, config, p, size);
                out.push(Unit { p, set, cost });
            }
        }
    }
    Ok(out)
}

/// The least `n > 3` with `p <= C(n,2)`.
fn small_prime_min_n(p: u64) -> usize {
    (4..).find(|&n: &usize| p <= (n * (n - 1) / 2) as u64).expect("unbounded range")
}

fn max_k(config: &ScanConfig, n: usize, default: usize) -> usize {
    config.max_k.unwrap_or(default).min(n)
}

fn sun_tuples(config: &ScanConfig, p: u64, size: usize) -> Vec<Vec<u64>> {
    let max_n = config.max_n.unwrap_or(3).min(size);
    (1..=max_n).flat_map(|n| coefficient_multisets(p, n)).collect()
}

fn unit_cost(theorem: Theorem, config: &ScanConfig, p: u64, size: usize) -> u64 {
    let b_sets = |p: u64| -> u64 {
        let max_b = config.max_set_size.unwrap_or(p as usize).min(p as usize);
        (1..=max_b).map(|s| subsets_of_size_count(p, s)).sum()
    };
    match theorem {
        Theorem::Ddsh => max_k(config, size, size) as u64,
        Theorem::CauchyDavenport => b_sets(p),
        Theorem::Sun => sun_tuples(config, p, size).len() as u64,
        Theorem::SignedEh | Theorem::SignedSmallP => {
            max_k(config, size, if theorem == Theorem::SignedEh { 3 } else { size }) as u64
        }
        Theorem::SmallPrimeFull => subsets_of_size_count(p, size),
    }
}

fn subsets_of_size_count(p: u64, size: usize) -> u64 {
    let mut c: u64 = 1;
    for i in 0..size as u64 {
        c = c * (p - i) / (i + 1);
    }
    c
}

fn run_unit(theorem: Theorem, config: &ScanConfig, unit: &Unit) -> Result<Tally> {
    let mut tally = Tally::default();
    let (p, a) = (unit.p, unit.set.as_slice());
    match theorem {
        Theorem::Ddsh => {
            for k in 1..=max_k(config, a.len(), a.len()) {
                tally.record(check_ddsh(p, a, k)?);
            }
        }
        Theorem::CauchyDavenport => {
            let max_b = config.max_set_size.unwrap_or(p as usize).min(p as usize);
            for size in 1..=max_b {
                for b in subsets_of_size(p, size) {
                    tally.record(check_cauchy_davenport(p, a, &b)?);
                }
            }
        }
        Theorem::Sun => {
            for coeffs in sun_tuples(config, p, a.len()) {
                tally.record(check_sun(p, a, &coeffs)?);
            }
        }
        Theorem::SignedEh => {
            for k in 1..=max_k(config, a.len(), 3) {
                tally.record(check_signed_eh(p, a, k)?);
            }
        }
        Theorem::SignedSmallP => {
            for k in 1..=max_k(config, a.len(), a.len()) {
                tally.record(check_signed_smallp(p, a, k)?);
            }
        }
        Theorem::SmallPrimeFull => {
            for coeffs in subsets_of_size(p, a.len()) {
                tally.record(check_small_prime_full(p, a, &coeffs)?);
            }
        }
    }
    Ok(tally)
}

/// Runs `theorem`'s checker over every instance in canonical order, stopping
/// before the first unit that would exceed the evaluation budget.
pub fn exhaustive_scan(theorem: Theorem, config: &ScanConfig) -> Result<ScanReport> {
    exhaustive_scan_with(Exec::default(), theorem, config)
}

pub fn exhaustive_scan_with(exec: Exec, theorem: Theorem, config: &ScanConfig) -> Result<ScanReport> {
    contract!(!config.primes.is_empty(), "no primes to scan");
    let all = units(theorem, config)?;
    let mut spent = 0u64;
    let mut take = 0;
    for unit in &all {
        if spent + unit.cost > config.budget {
            break;
        }
        spent += unit.cost;
        take += 1;
    }
    let tallies = exec.map(&all[..take], |u| run_unit(theorem, config, u));
    let mut tally = Tally::default();
    for t in tallies {
        tally.merge(t?);
    }
    Ok(ScanReport {
        theorem,
        config: config.clone(),
        tally,
        complete: take == all.len(),
        units_total: all.len(),
        units_done: take,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Minimizer {
    pub set: Vec<u64>,
    /// `Some(a)` when the set is `{a, 3a, .., (2n-1)a}`.
    pub progression: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalReport {
    pub p: u64,
    pub n: usize,
    pub k: usize,
    pub sets_checked: usize,
    pub minimum: usize,
    /// `k(2n-k) + delta(k)`, the conjectured extremal count.
    pub conjectured: u64,
    pub minimizers: Vec<Minimizer>,
}

impl ExtremalReport {
    pub fn progression_minimizers(&self) -> usize {
        self.minimizers.iter().filter(|m| m.progression.is_some()).count()
    }
}

/// The smallest `a` with `set = {a, 3a, .., (2n-1)a}`, if any.
pub fn odd_progression_step(p: u64, set: &[u64]) -> Option<u64> {
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    (1..p).find(|&a| {
        let mut prog: Vec<u64> = (0..set.len() as u64).map(|i| mul(p, 2 * i + 1, a)).collect();
        prog.sort_unstable();
        prog == sorted
    })
}

/// All valid `n`-subsets of `F_p` minimizing the number of signed `k`-sums.
pub fn extremal_scan(p: u64, n: usize, k: usize) -> Result<ExtremalReport> {
    extremal_scan_with(Exec::default(), p, n, k)
}

pub fn extremal_scan_with(exec: Exec, p: u64, n: usize, k: usize) -> Result<ExtremalReport> {
    Modulus::new(p)?;
    contract!(1 <= k && k <= n, "need 1 <= k <= n");
    let candidates: Vec<Vec<u64>> =
        subsets_of_size(p, n).into_iter().filter(|a| matches!(signed_precondition(a, p), Ok(Ok(())))).collect();
    contract!(!candidates.is_empty(), "no valid {n}-subsets of F_{p}");
    let sizes = exec.map(&candidates, |a| signed_sums_unchecked(a, k, p).len());
    let minimum = *sizes.iter().min().expect("nonempty");
    let minimizers = candidates
        .iter()
        .zip(&sizes)
        .filter(|(_, &s)| s == minimum)
        .map(|(a, _)| Minimizer { set: a.clone(), progression: odd_progression_step(p, a) })
        .collect();
    let delta = u64::from(k != 2);
    Ok(ExtremalReport {
        p,
        n,
        k,
        sets_checked: candidates.len(),
        minimum,
        conjectured: (k * (2 * n - k)) as u64 + delta,
        minimizers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn brute_restricted(a: &[u64], k: usize, p: u64) -> Vec<u64> {
        let mut v: Vec<u64> = a.iter().combinations(k).map(|c| c.into_iter().sum::<u64>() % p).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn brute_signed(a: &[u64], k: usize, p: u64) -> Vec<u64> {
        let mut v = Vec::new();
        for c in a.iter().combinations(k) {
            for mask in 0..1u32 << k {
                let s: u64 = c.iter().enumerate().map(|(i, &&x)| if mask >> i & 1 == 1 { neg(p, x) } else { x }).sum();
                v.push(s % p);
            }
        }
        v.sort_unstable();
        v.dedup();
        v
    }

    fn brute_linear(coeffs: &[u64], a: &[u64], p: u64) -> Vec<u64> {
        let mut v: Vec<u64> = a
            .iter()
            .permutations(coeffs.len())
            .map(|xs| xs.iter().zip(coeffs).map(|(&&x, &c)| mul(p, x, c)).sum::<u64>() % p)
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    #[test]
    fn sumset_examples() {
        assert_eq!(sumset(&[0], &[2, 4], 7).unwrap().to_vec(), vec![2, 4]);
        let s = sumset(&[0, 1], &[0, 1], 5).unwrap();
        assert_eq!(s.to_vec(), vec![0, 1, 2]);
        let all: Vec<u64> = (0..5).collect();
        assert_eq!(sumset(&all, &all, 5).unwrap().len(), 5);
        assert!(sumset(&[1, 1], &[0], 5).is_err());
        assert!(sumset(&[7], &[0], 5).is_err());
    }

    #[test]
    fn restricted_examples() {
        assert_eq!(restricted_sumset(&[1, 2, 3, 4], 2, 11).unwrap().to_vec(), vec![3, 4, 5, 6, 7]);
        assert_eq!(restricted_sumset(&[1, 2, 3, 4], 4, 11).unwrap().to_vec(), vec![10]);
        assert_eq!(restricted_sumset(&[1, 5, 9], 1, 11).unwrap().to_vec(), vec![1, 5, 9]);
        assert!(restricted_sumset(&[1, 2], 3, 11).is_err());
    }

    #[test]
    fn signed_examples() {
        let s = signed_restricted_sumset(&[1, 3, 5], 2, 17).unwrap();
        assert_eq!(s.to_vec(), vec![2, 4, 6, 8, 9, 11, 13, 15]);
        assert_eq!(signed_restricted_sumset(&[2, 5], 1, 17).unwrap().to_vec(), vec![2, 5, 12, 15]);
        let s = signed_restricted_sumset(&[1, 2, 3], 2, 7).unwrap();
        assert_eq!(s.to_vec(), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(
            signed_restricted_sumset(&[1, 6], 1, 7).unwrap_err(),
            crate::Error::Contract("a_1 + a_2 = 0".into())
        );
        assert!(signed_restricted_sumset(&[0, 1], 1, 7).is_err());
    }

    #[test]
    fn linear_examples() {
        assert_eq!(
            linear_restricted_sumset(&[1, 2], &[0, 1, 2, 3], 101).unwrap().to_vec(),
            (1..=8).collect::<Vec<_>>()
        );
        assert_eq!(linear_restricted_sumset(&[1, 1], &[0, 1, 2], 101).unwrap().to_vec(), vec![1, 2, 3]);
        assert!(linear_restricted_sumset(&[1, 1, 1], &[0, 1], 101).is_err());
        assert!(linear_restricted_sumset(&[0, 1], &[0, 1], 101).is_err());
    }

    #[test]
    fn sun_d_examples() {
        assert_eq!(sun_d(&[3], 7).unwrap(), 12);
        assert_eq!(sun_d(&[2, 1], 5).unwrap(), 8);
        assert_eq!(sun_d(&[1, 1], 4).unwrap(), 5);
        assert!(sun_d(&[4], 3).is_err());
    }

    #[test]
    fn checker_examples() {
        let v = check_ddsh(11, &[1, 2, 3, 4], 2).unwrap();
        assert_eq!((v.cardinality, v.bound, v.outcome), (5, 5, Outcome::Pass));
        let v = check_sun(101, &[0, 1, 2, 3], &[1, 2]).unwrap();
        assert_eq!((v.cardinality, v.bound, v.outcome), (8, 6, Outcome::Pass));
        let v = check_signed_smallp(7, &[1, 2, 3], 2).unwrap();
        assert_eq!(v.cardinality, 6);
        assert_eq!(v.zero_attained, Some(false));
        assert!(matches!(v.outcome, Outcome::Flag(_)));
        let v = check_signed_eh(7, &[1, 6], 1).unwrap();
        assert!(matches!(v.outcome, Outcome::Skip(_)));
    }

    #[test]
    fn sun_delta_exception_is_tagged() {
        let v = check_sun(101, &[0, 1, 2, 3], &[1, 100]).unwrap();
        assert!(v.delta_exception);
        let v = check_sun(101, &[0, 1, 2, 3], &[1, 2]).unwrap();
        assert!(!v.delta_exception);
    }

    #[test]
    fn dp_matches_brute_force_on_f11() {
        let p = 11;
        for size in 1..=6 {
            for a in subsets_of_size(p, size).into_iter().step_by(7) {
                for k in 1..=size {
                    assert_eq!(restricted_sumset(&a, k, p).unwrap().to_vec(), brute_restricted(&a, k, p));
                    let ones = vec![1; k];
                    assert_eq!(linear_restricted_sumset(&ones, &a, p).unwrap().to_vec(), brute_restricted(&a, k, p));
                    if signed_precondition(&a, p).unwrap().is_ok() {
                        assert_eq!(signed_sums_unchecked(&a, k, p).to_vec(), brute_signed(&a, k, p));
                    }
                }
                if size >= 2 {
                    assert_eq!(
                        linear_restricted_sumset(&[3, 7], &a, p).unwrap().to_vec(),
                        brute_linear(&[3, 7], &a, p)
                    );
                }
            }
        }
    }

    #[test]
    fn all_ones_linear_equals_restricted_on_f11() {
        let p = 11;
        for size in 1..=p as usize {
            for a in subsets_of_size(p, size) {
                for k in 1..=size.min(4) {
                    assert_eq!(
                        linear_restricted_sumset(&vec![1; k], &a, p).unwrap(),
                        restricted_sumset(&a, k, p).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn small_scans() {
        let r = exhaustive_scan(Theorem::Ddsh, &ScanConfig::new(vec![3, 5, 7])).unwrap();
        assert!(r.complete);
        assert_eq!(r.tally.fail, 0);
        assert_eq!(r.tally.evaluations, 3 * 4 + 5 * 16 + 7 * 64);
        let r = exhaustive_scan(Theorem::CauchyDavenport, &ScanConfig::new(vec![5])).unwrap();
        assert_eq!(r.tally.evaluations, 31 * 31);
        assert_eq!(r.tally.fail, 0);
    }

    #[test]
    fn budget_truncates_deterministically() {
        let mut config = ScanConfig::new(vec![7]);
        config.budget = 100;
        let a = exhaustive_scan_with(Exec::Sequential, Theorem::Ddsh, &config).unwrap();
        let b = exhaustive_scan_with(Exec::Parallel, Theorem::Ddsh, &config).unwrap();
        assert_eq!(a, b);
        assert!(!a.complete);
        assert!(a.tally.evaluations <= 100);
    }

    #[test]
    fn extremal_small() {
        let r = extremal_scan(17, 3, 2).unwrap();
        assert_eq!(r.minimum, 8);
        assert_eq!(r.conjectured, 8);
        assert!(r.progression_minimizers() > 0);
        assert!(r.minimizers.iter().any(|m| m.set == vec![1, 3, 5]));
    }

    #[test]
    fn progression_step_detection() {
        assert_eq!(odd_progression_step(17, &[1, 3, 5]), Some(1));
        assert_eq!(odd_progression_step(17, &[2, 6, 10]), Some(2));
        assert_eq!(odd_progression_step(17, &[1, 2, 3]), None);
    }
}
