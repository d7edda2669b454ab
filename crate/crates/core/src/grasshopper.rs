//! Budget sequences for the grasshopper: matchings in the budget graph,
//! the two families of Hall inequalities, exhaustive path search, the
//! adversarial instances that defeat non-matching budgets, and the Bruhat
//! restricted and signed variants.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bruhat::{lower_interval, Permutation};
use crate::error::{contract, Result};
use crate::par::Exec;

fn triangle(n: usize) -> u64 {
    (n * (n + 1) / 2) as u64
}

fn check_budget_len(k: usize, b: &[u64]) -> Result<()> {
    contract!(k >= 2, "need k >= 2, got {k}");
    contract!(b.len() == k - 1, "budget {b:?} must have {} entries for k = {k}", k - 1);
    Ok(())
}

/// The bipartite graph of a budget sequence. Upper vertices are pairs
/// `(j, l)` with `1 <= j <= l <= k-1`; lower vertices are `(i, t)` with
/// `1 <= t <= b_i`; `(j, l) ~ (i, t)` iff `j <= i <= l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetGraph {
    k: usize,
    b: Vec<u64>,
}

impl BudgetGraph {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn budget(&self) -> &[u64] {
        &self.b
    }

    pub fn upper_class(&self) -> Vec<(usize, usize)> {
        let m = self.k - 1;
        (1..=m).flat_map(|j| (j..=m).map(move |l| (j, l))).collect()
    }

    pub fn lower_class(&self) -> Vec<(usize, u64)> {
        self.b.iter().enumerate().flat_map(|(i, &bi)| (1..=bi).map(move |t| (i + 1, t))).collect()
    }

    pub fn adjacent(upper: (usize, usize), lower: (usize, u64)) -> bool {
        upper.0 <= lower.0 && lower.0 <= upper.1
    }

    pub fn edges(&self) -> Vec<((usize, usize), (usize, u64))> {
        let lower = self.lower_class();
        self.upper_class()
            .into_iter()
            .flat_map(|u| lower.iter().filter(move |&&d| Self::adjacent(u, d)).map(move |&d| (u, d)))
            .collect()
    }

    /// Size of a maximum matching, by augmenting paths on the graph with
    /// all `(i, t)` merged into one vertex of capacity `b_i`.
    pub fn max_matching(&self) -> u64 {
        let m = self.k - 1;
        let upper = self.upper_class();
        // owner[u] = lower class index matched to upper vertex u
        let mut owner: Vec<Option<usize>> = vec![None; upper.len()];
        let mut matched = 0u64;
        for i in 1..=m {
            for _ in 0..self.b[i - 1] {
                let mut seen = vec![false; upper.len()];
                if augment(i, &upper, &mut owner, &mut seen) {
                    matched += 1;
                } else {
                    break;
                }
            }
        }
        matched
    }
}

fn augment(i: usize, upper: &[(usize, usize)], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for (u, &(j, l)) in upper.iter().enumerate() {
        if j <= i && i <= l && !seen[u] {
            seen[u] = true;
            let free = match owner[u] {
                None => true,
                Some(other) => augment(other, upper, owner, seen),
            };
            if free {
                owner[u] = Some(i);
                return true;
            }
        }
    }
    false
}

pub fn build_graph(k: usize, b: &[u64]) -> Result<BudgetGraph> {
    check_budget_len(k, b)?;
    Ok(BudgetGraph { k, b: b.to_vec() })
}

/// A matching covers the lower class.
pub fn is_matching_sequence(k: usize, b: &[u64]) -> Result<bool> {
    let g = build_graph(k, b)?;
    Ok(g.max_matching() == b.iter().sum::<u64>())
}

/// `K(P)`: pairs `(j, l)`, `1 <= j <= l <= k-1`, whose interval meets `P`.
pub fn k_of(k: usize, p: &[usize]) -> u64 {
    let m = k - 1;
    let mut count = 0;
    for j in 1..=m {
        for l in j..=m {
            if p.iter().any(|&x| j <= x && x <= l) {
                count += 1;
            }
        }
    }
    count
}

fn subsets_of(m: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u64..(1 << m)).map(move |mask| (1..=m).filter(|&i| mask >> (i - 1) & 1 == 1).collect())
}

/// The first subset `P` (in bitmask order) with `b_P > K(P)`.
pub fn violated_hall_set(k: usize, b: &[u64]) -> Result<Option<Vec<usize>>> {
    check_budget_len(k, b)?;
    contract!(k <= 30, "k = {k} too large for subset enumeration");
    Ok(subsets_of(k - 1).find(|p| p.iter().map(|&i| b[i - 1]).sum::<u64>() > k_of(k, p)))
}

/// `b_P <= K(P)` for every nonempty `P`.
pub fn hall_check(k: usize, b: &[u64]) -> Result<bool> {
    Ok(violated_hall_set(k, b)?.is_none())
}

/// `sum_{j=s}^t b_j >= C(t-s+2, 2)` for all `s <= t`; needs `|b| = C(k,2)`.
pub fn perfect_hall_check(k: usize, b: &[u64]) -> Result<bool> {
    check_budget_len(k, b)?;
    let d = (k * (k - 1) / 2) as u64;
    contract!(b.iter().sum::<u64>() == d, "|b| = {} but C({k},2) = {d}", b.iter().sum::<u64>());
    for s in 1..k {
        for t in s..k {
            if b[s - 1..t].iter().sum::<u64>() < triangle(t - s + 1) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A perfect matching sequence dominating `b`, found by incrementing the
/// leftmost entry that keeps every Hall inequality satisfied.
pub fn dominating_perfect(k: usize, b: &[u64]) -> Result<Option<Vec<u64>>> {
    if !hall_check(k, b)? {
        return Ok(None);
    }
    let d = (k * (k - 1) / 2) as u64;
    let mut cur = b.to_vec();
    while cur.iter().sum::<u64>() < d {
        let mut advanced = false;
        for i in 0..cur.len() {
            cur[i] += 1;
            if hall_check(k, &cur)? {
                advanced = true;
                break;
            }
            cur[i] -= 1;
        }
        if !advanced {
            return Err(crate::Error::Internal(format!("no Hall-feasible increment of {cur:?}")));
        }
    }
    Ok(Some(cur))
}

/// `(1, 2, .., v-1, v(k-v), k-v-1, .., 2, 1)`.
pub fn eh_budget(k: usize, v: usize) -> Result<Vec<u64>> {
    contract!(k >= 2 && 1 <= v && v < k, "need 1 <= v <= k-1, got k={k}, v={v}");
    let mut b: Vec<u64> = (1..v as u64).collect();
    b.push((v * (k - v)) as u64);
    b.extend((1..(k - v) as u64).rev());
    Ok(b)
}

/// All budgets of length `k-1` with `|b| = total`, lexicographically decreasing.
pub fn budgets_with_sum(k: usize, total: u64) -> Vec<Vec<u64>> {
    crate::symfun::compositions(total, k - 1)
}

/// Jumps, forbidden landing sets and an optional Bruhat ceiling.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrasshopperInstance {
    pub jumps: Vec<i64>,
    /// `M_1..M_{k-1}` (unsigned) or `M_1..M_k` (signed).
    pub forbidden: Vec<BTreeSet<i64>>,
    pub ceiling: Option<Permutation>,
}

impl GrasshopperInstance {
    pub fn new(jumps: Vec<i64>, forbidden: Vec<BTreeSet<i64>>) -> Self {
        GrasshopperInstance { jumps, forbidden, ceiling: None }
    }

    pub fn with_ceiling(mut self, w: Permutation) -> Self {
        self.ceiling = Some(w);
        self
    }

    pub fn k(&self) -> usize {
        self.jumps.len()
    }

    /// `(|M_1|, |M_2|, ..)`.
    pub fn budget(&self) -> Vec<u64> {
        self.forbidden.iter().map(|m| m.len() as u64).collect()
    }

    fn check_jumps(&self) -> Result<()> {
        let k = self.k();
        contract!(k >= 1, "no jumps");
        let distinct: BTreeSet<i64> = self.jumps.iter().copied().collect();
        contract!(distinct.len() == k, "jumps {:?} are not distinct", self.jumps);
        if let Some(w) = &self.ceiling {
            contract!(w.size() == k, "ceiling {w} is not in S_{k}");
        }
        Ok(())
    }

    /// Validates an unsigned instance; returns warnings for forbidden sets
    /// containing 0 or the total.
    pub fn validate(&self) -> Result<Vec<String>> {
        self.check_jumps()?;
        let k = self.k();
        contract!(k >= 2, "need at least two jumps");
        contract!(self.forbidden.len() == k - 1, "need {} forbidden sets, got {}", k - 1, self.forbidden.len());
        Ok(self.warnings())
    }

    /// Validates a signed instance: `k` forbidden sets and positive jumps.
    pub fn validate_signed(&self) -> Result<Vec<String>> {
        self.check_jumps()?;
        let k = self.k();
        contract!(self.forbidden.len() == k, "need {k} forbidden sets, got {}", self.forbidden.len());
        for (i, &a) in self.jumps.iter().enumerate() {
            contract!(a > 0, "signed jumps must be positive, a_{} = {a}", i + 1);
        }
        Ok(self.warnings())
    }

    fn warnings(&self) -> Vec<String> {
        let s: i64 = self.jumps.iter().sum();
        let mut out = Vec::new();
        for (i, m) in self.forbidden.iter().enumerate() {
            if m.contains(&0) {
                out.push(format!("M_{} contains 0", i + 1));
            }
            if m.contains(&s) {
                out.push(format!("M_{} contains the total {s}", i + 1));
            }
        }
        out
    }
}

impl fmt::Display for GrasshopperInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "jumps={:?}", self.jumps)?;
        for (i, m) in self.forbidden.iter().enumerate() {
            write!(f, " M{}={:?}", i + 1, m)?;
        }
        if let Some(w) = &self.ceiling {
            write!(f, " ceiling={w}")?;
        }
        Ok(())
    }
}

fn prefixes(w: &Permutation) -> HashSet<Vec<usize>> {
    let mut out = HashSet::new();
    for u in lower_interval(w) {
        let line = u.one_line();
        for len in 0..=line.len() {
            out.insert(line[..len].to_vec());
        }
    }
    out
}

/// A jump order `pi` (the `j`-th jump uses `a_{pi(j)}`) whose first `k-1`
/// partial sums avoid `M_1..M_{k-1}`, restricted to `pi <= w` when the
/// instance has a ceiling. Depth-first over prefixes in index order.
pub fn grasshopper_search(instance: &GrasshopperInstance) -> Result<Option<Permutation>> {
    instance.validate()?;
    let allowed = instance.ceiling.as_ref().map(prefixes);
    let k = instance.k();
    let mut order = Vec::with_capacity(k);
    let mut used = vec![false; k];
    let found = dfs(instance, allowed.as_ref(), &mut order, &mut used, 0);
    Ok(found.then(|| Permutation::new(order).expect("search builds permutations")))
}

fn dfs(
    inst: &GrasshopperInstance,
    allowed: Option<&HashSet<Vec<usize>>>,
    order: &mut Vec<usize>,
    used: &mut [bool],
    position: i64,
) -> bool {
    let k = inst.k();
    if order.len() == k {
        return true;
    }
    for idx in 0..k {
        if used[idx] {
            continue;
        }
        let next = position + inst.jumps[idx];
        let step = order.len();
        if step < k - 1 && inst.forbidden[step].contains(&next) {
            continue;
        }
        order.push(idx + 1);
        if allowed.is_some_and(|a| !a.contains(order.as_slice())) {
            order.pop();
            continue;
        }
        used[idx] = true;
        if dfs(inst, allowed, order, used, next) {
            return true;
        }
        used[idx] = false;
        order.pop();
    }
    false
}

/// The instance from the converse proof: `a_i = i`, and for `P = {p_1 < ..}`
/// the interval `M_{p_i} = [x_i, x_i + b_{p_i} - 1]` with
/// `x_i = sum_{j<i} C(n_j + 1, 2) + sum_{j<i} b_{p_j}`, `n_0 = p_1`,
/// `n_j = p_{j+1} - p_j`. Other forbidden sets are empty.
pub fn adversarial_instance(k: usize, p: &[usize], b: &[u64]) -> Result<GrasshopperInstance> {
    check_budget_len(k, b)?;
    let set: BTreeSet<usize> = p.iter().copied().collect();
    contract!(!set.is_empty(), "P must be nonempty");
    contract!(set.iter().all(|&x| 1 <= x && x < k), "P = {p:?} must lie in 1..={}", k - 1);
    let ps: Vec<usize> = set.into_iter().collect();
    let b_p: u64 = ps.iter().map(|&i| b[i - 1]).sum();
    let kp = k_of(k, &ps);
    contract!(b_p > kp, "b_P = {b_p} <= K(P) = {kp}: the construction needs a violated inequality");
    let mut forbidden = vec![BTreeSet::new(); k - 1];
    let mut x = 0i64;
    let mut prev = 0usize;
    for &pi in &ps {
        let gap = pi - prev;
        x += triangle(gap) as i64;
        let len = b[pi - 1] as i64;
        forbidden[pi - 1] = (x..x + len).collect();
        x += len;
        prev = pi;
    }
    Ok(GrasshopperInstance::new((1..=k as i64).collect(), forbidden))
}

/// `sum_{i=s}^t b_i >= K_{s,t}(w)` for all `1 <= s <= t <= k-1`; needs `|b| = l(w)`.
pub fn bruhat_condition(w: &Permutation, b: &[u64]) -> Result<bool> {
    let k = w.size();
    check_budget_len(k, b)?;
    contract!(
        b.iter().sum::<u64>() == w.length() as u64,
        "|b| = {} but l({w}) = {}",
        b.iter().sum::<u64>(),
        w.length()
    );
    for s in 1..k {
        for t in s..k {
            if b[s - 1..t].iter().sum::<u64>() < w.k_st(s, t)? as u64 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// [`grasshopper_search`] restricted to `pi <= w`; needs a ceiling with
/// `l(w) = |b|`.
pub fn bruhat_search(instance: &GrasshopperInstance) -> Result<Option<Permutation>> {
    let Some(w) = &instance.ceiling else {
        return Err(crate::Error::Contract("bruhat search needs a ceiling permutation".into()));
    };
    let total: u64 = instance.budget().iter().sum();
    contract!(total == w.length() as u64, "|b| = {total} but l({w}) = {}", w.length());
    grasshopper_search(instance)
}

/// Conditions (1) interval sums over `1..k-1` and (2) tail sums against
/// `(k-i+1)^2`; needs `|b| = k^2`.
pub fn signed_condition(k: usize, b: &[u64]) -> Result<bool> {
    contract!(k >= 1, "need k >= 1");
    contract!(b.len() == k, "budget {b:?} must have {k} entries");
    let d = (k * k) as u64;
    contract!(b.iter().sum::<u64>() == d, "|b| = {} but k^2 = {d}", b.iter().sum::<u64>());
    for i in 1..k {
        for j in i..k {
            if b[i - 1..j].iter().sum::<u64>() < triangle(j - i + 1) {
                return Ok(false);
            }
        }
    }
    for i in 1..=k {
        let tail: u64 = b[i - 1..].iter().sum();
        if tail < ((k - i + 1) * (k - i + 1)) as u64 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A signed jump sequence: order and signs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedPath {
    pub order: Permutation,
    /// `signs[j]` is the direction of the `j+1`-th jump.
    pub signs: Vec<i8>,
}

impl SignedPath {
    pub fn landings(&self, jumps: &[i64]) -> Vec<i64> {
        let mut pos = 0;
        (0..jumps.len())
            .map(|j| {
                pos += self.signs[j] as i64 * jumps[self.order.at(j + 1) - 1];
                pos
            })
            .collect()
    }
}

/// An order and signs with all `k` partial sums avoiding `M_1..M_k`.
/// Tries `+` before `-` at every step.
pub fn signed_search(instance: &GrasshopperInstance) -> Result<Option<SignedPath>> {
    instance.validate_signed()?;
    let k = instance.k();
    let mut order = Vec::with_capacity(k);
    let mut signs = Vec::with_capacity(k);
    let mut used = vec![false; k];
    let found = signed_dfs(instance, &mut order, &mut signs, &mut used, 0);
    Ok(found.then(|| SignedPath { order: Permutation::new(order).expect("search builds permutations"), signs }))
}

fn signed_dfs(
    inst: &GrasshopperInstance,
    order: &mut Vec<usize>,
    signs: &mut Vec<i8>,
    used: &mut [bool],
    position: i64,
) -> bool {
    let k = inst.k();
    if order.len() == k {
        return true;
    }
    for idx in 0..k {
        if used[idx] {
            continue;
        }
        for sign in [1i8, -1] {
            let next = position + sign as i64 * inst.jumps[idx];
            if inst.forbidden[order.len()].contains(&next) {
                continue;
            }
            used[idx] = true;
            order.push(idx + 1);
            signs.push(sign);
            if signed_dfs(inst, order, signs, used, next) {
                return true;
            }
            signs.pop();
            order.pop();
            used[idx] = false;
        }
    }
    false
}

/// Range for random jump lengths.
pub const JUMP_RANGE: i64 = 20;

fn distinct_jumps<R: Rng + ?Sized>(rng: &mut R, k: usize, positive: bool) -> Vec<i64> {
    let pool: Vec<i64> =
        if positive { (1..=JUMP_RANGE).collect() } else { (-JUMP_RANGE..=JUMP_RANGE).filter(|&x| x != 0).collect() };
    pool.choose_multiple(rng, k).copied().collect()
}

/// `b` values picked from `reachable` (shuffled), topped up with other
/// integers near the reachable range when there are too few.
fn pick_forbidden<R: Rng + ?Sized>(rng: &mut R, reachable: &BTreeSet<i64>, size: u64) -> BTreeSet<i64> {
    let mut pool: Vec<i64> = reachable.iter().copied().collect();
    pool.shuffle(rng);
    let mut out: BTreeSet<i64> = pool.into_iter().take(size as usize).collect();
    let lo = reachable.first().copied().unwrap_or(0) - 5;
    let hi = reachable.last().copied().unwrap_or(0) + 5;
    while (out.len() as u64) < size {
        out.insert(rng.random_range(lo - size as i64..=hi + size as i64));
    }
    out
}

/// Partial sums after `i` jumps: sums of `i`-subsets of `jumps`.
fn reachable_unsigned(jumps: &[i64], i: usize) -> BTreeSet<i64> {
    let k = jumps.len();
    (0u64..1 << k)
        .filter(|m| m.count_ones() as usize == i)
        .map(|m| (0..k).filter(|&j| m >> j & 1 == 1).map(|j| jumps[j]).sum())
        .collect()
}

fn reachable_signed(jumps: &[i64], i: usize) -> BTreeSet<i64> {
    let k = jumps.len();
    let mut out = BTreeSet::new();
    for m in (0u64..1 << k).filter(|m| m.count_ones() as usize == i) {
        let chosen: Vec<i64> = (0..k).filter(|&j| m >> j & 1 == 1).map(|j| jumps[j]).collect();
        for s in 0u64..1 << i {
            out.insert(chosen.iter().enumerate().map(|(t, &a)| if s >> t & 1 == 1 { -a } else { a }).sum());
        }
    }
    out
}

/// Distinct nonzero jumps in `[-20, 20]`, and `M_i` of size `b_i` drawn
/// from positions actually reachable after `i` jumps.
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R, k: usize, b: &[u64]) -> Result<GrasshopperInstance> {
    check_budget_len(k, b)?;
    let jumps = distinct_jumps(rng, k, false);
    let forbidden = (1..k).map(|i| pick_forbidden(rng, &reachable_unsigned(&jumps, i), b[i - 1])).collect();
    Ok(GrasshopperInstance::new(jumps, forbidden))
}

/// Distinct positive jumps in `[1, 20]`, `M_i` drawn from reachable signed sums.
pub fn random_signed_instance<R: Rng + ?Sized>(rng: &mut R, k: usize, b: &[u64]) -> Result<GrasshopperInstance> {
    contract!(b.len() == k, "budget {b:?} must have {k} entries");
    let jumps = distinct_jumps(rng, k, true);
    let forbidden = (1..=k).map(|i| pick_forbidden(rng, &reachable_signed(&jumps, i), b[i - 1])).collect();
    Ok(GrasshopperInstance::new(jumps, forbidden))
}

/// Outcome of a batch of randomized searches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialSummary {
    pub trials: usize,
    pub successes: usize,
    pub first_failure: Option<GrasshopperInstance>,
}

impl TrialSummary {
    pub fn all_passed(&self) -> bool {
        self.successes == self.trials
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn summarize(results: Vec<Result<(bool, GrasshopperInstance)>>) -> Result<TrialSummary> {
    let mut s = TrialSummary { trials: results.len(), successes: 0, first_failure: None };
    for r in results {
        let (ok, inst) = r?;
        if ok {
            s.successes += 1;
        } else {
            s.first_failure.get_or_insert(inst);
        }
    }
    Ok(s)
}

/// Searches `trials` random instances with budget `b` (optionally under a
/// Bruhat ceiling). Trial `i` uses stream `i` of a generator seeded by `seed`.
pub fn randomized_search_trials(
    exec: Exec,
    k: usize,
    b: &[u64],
    ceiling: Option<&Permutation>,
    trials: usize,
    seed: u64,
) -> Result<TrialSummary> {
    check_budget_len(k, b)?;
    let results = exec.map_range(0..trials, |t| {
        let mut rng = trial_rng(seed, t);
        let mut inst = random_instance(&mut rng, k, b)?;
        if let Some(w) = ceiling {
            inst = inst.with_ceiling(w.clone());
        }
        Ok((grasshopper_search(&inst)?.is_some(), inst))
    });
    summarize(results)
}

pub fn randomized_signed_trials(exec: Exec, k: usize, b: &[u64], trials: usize, seed: u64) -> Result<TrialSummary> {
    contract!(b.len() == k, "budget {b:?} must have {k} entries");
    let results = exec.map_range(0..trials, |t| {
        let mut rng = trial_rng(seed, t);
        let inst = random_signed_instance(&mut rng, k, b)?;
        Ok((signed_search(&inst)?.is_some(), inst))
    });
    summarize(results)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[i64]) -> BTreeSet<i64> {
        xs.iter().copied().collect()
    }

    fn perm(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn graph_examples() {
        let g = build_graph(3, &[2, 0]).unwrap();
        assert_eq!(g.upper_class().len(), 3);
        assert_eq!(g.lower_class(), vec![(1, 1), (1, 2)]);
        let nbrs: Vec<_> = g.edges().into_iter().filter(|e| e.1 == (1, 1)).map(|e| e.0).collect();
        assert_eq!(nbrs, vec![(1, 1), (1, 2)]);
        assert_eq!(build_graph(2, &[1]).unwrap().edges().len(), 1);
        assert!(build_graph(3, &[0, 0]).unwrap().lower_class().is_empty());
        assert!(build_graph(3, &[1]).is_err());
    }

    #[test]
    fn three_checks_examples() {
        assert!(is_matching_sequence(3, &[2, 1]).unwrap());
        assert!(hall_check(3, &[2, 1]).unwrap());
        assert!(perfect_hall_check(3, &[2, 1]).unwrap());
        assert!(!is_matching_sequence(3, &[3, 0]).unwrap());
        assert!(!hall_check(3, &[3, 0]).unwrap());
        assert!(!perfect_hall_check(3, &[3, 0]).unwrap());
        assert!(is_matching_sequence(2, &[1]).unwrap());
        assert!(perfect_hall_check(3, &[1, 1]).is_err());
        assert_eq!(k_of(3, &[1]), 2);
        assert_eq!(k_of(3, &[2]), 2);
        assert_eq!(k_of(3, &[1, 2]), 3);
    }

    #[test]
    fn dominating_examples() {
        let d = dominating_perfect(3, &[1, 1]).unwrap().unwrap();
        assert!(d == vec![2, 1] || d == vec![1, 2]);
        assert_eq!(dominating_perfect(3, &[2, 1]).unwrap(), Some(vec![2, 1]));
        assert_eq!(dominating_perfect(3, &[3, 0]).unwrap(), None);
    }

    #[test]
    fn search_examples() {
        let inst = GrasshopperInstance::new(vec![1, 2], vec![set(&[1])]);
        assert_eq!(grasshopper_search(&inst).unwrap(), Some(perm(&[2, 1])));
        let inst = GrasshopperInstance::new(vec![5, -3, 8], vec![BTreeSet::new(), BTreeSet::new()]);
        assert_eq!(grasshopper_search(&inst).unwrap(), Some(Permutation::identity(3)));
        let inst = GrasshopperInstance::new(vec![1, 2, 3], vec![set(&[1, 2, 3]), BTreeSet::new()]);
        assert_eq!(grasshopper_search(&inst).unwrap(), None);
    }

    #[test]
    fn adversary_examples() {
        let inst = adversarial_instance(3, &[1], &[3, 0]).unwrap();
        assert_eq!(inst.jumps, vec![1, 2, 3]);
        assert_eq!(inst.forbidden, vec![set(&[1, 2, 3]), BTreeSet::new()]);
        assert_eq!(grasshopper_search(&inst).unwrap(), None);
        let inst = adversarial_instance(3, &[2], &[0, 3]).unwrap();
        assert_eq!(inst.forbidden[1], set(&[3, 4, 5]));
        assert_eq!(grasshopper_search(&inst).unwrap(), None);
        let inst = adversarial_instance(2, &[1], &[2]).unwrap();
        assert_eq!(inst.forbidden[0], set(&[1, 2]));
        assert_eq!(grasshopper_search(&inst).unwrap(), None);
        assert!(adversarial_instance(3, &[1], &[2, 1]).is_err());
    }

    #[test]
    fn eh_budget_examples() {
        assert_eq!(eh_budget(4, 2).unwrap(), vec![1, 4, 1]);
        assert_eq!(eh_budget(2, 1).unwrap(), vec![1]);
        assert_eq!(eh_budget(5, 2).unwrap(), vec![1, 6, 2, 1]);
        assert!(eh_budget(4, 4).is_err());
        for k in 2..=7 {
            for v in 1..k {
                let b = eh_budget(k, v).unwrap();
                assert!(perfect_hall_check(k, &b).unwrap());
                assert_eq!(b[v - 1], (v * (k - v)) as u64);
            }
        }
    }

    #[test]
    fn bruhat_examples() {
        let w = perm(&[2, 3, 1]);
        assert!(bruhat_condition(&w, &[1, 1]).unwrap());
        assert!(!bruhat_condition(&w, &[2, 0]).unwrap());
        assert!(bruhat_condition(&w, &[1, 0]).is_err());
        let w0 = Permutation::longest(3);
        for b in budgets_with_sum(3, 3) {
            assert_eq!(bruhat_condition(&w0, &b).unwrap(), perfect_hall_check(3, &b).unwrap());
        }
    }

    #[test]
    fn bruhat_search_respects_ceiling() {
        let w = perm(&[2, 1, 3]);
        let inst = GrasshopperInstance::new(vec![1, 2, 3], vec![set(&[2]), BTreeSet::new()]).with_ceiling(w.clone());
        let pi = bruhat_search(&inst).unwrap().unwrap();
        assert!(crate::bruhat::bruhat_leq(&pi, &w).unwrap());
        assert_eq!(pi, Permutation::identity(3));
        let blocked = GrasshopperInstance::new(vec![1, 2, 3], vec![set(&[1, 2]), BTreeSet::new()]);
        assert!(bruhat_search(&blocked.clone().with_ceiling(perm(&[2, 1, 3]))).is_err());
        let inst = GrasshopperInstance::new(vec![1, 2, 3], vec![set(&[1]), BTreeSet::new()]).with_ceiling(w);
        assert_eq!(bruhat_search(&inst).unwrap(), Some(perm(&[2, 1, 3])));
    }

    #[test]
    fn signed_examples() {
        assert!(signed_condition(2, &[2, 2]).unwrap());
        assert!(!signed_condition(2, &[4, 0]).unwrap());
        assert!(signed_condition(2, &[1, 1]).is_err());
        let inst = GrasshopperInstance::new(vec![5], vec![set(&[5])]);
        let path = signed_search(&inst).unwrap().unwrap();
        assert_eq!(path.order, Permutation::identity(1));
        assert_eq!(path.signs, vec![-1]);
        assert_eq!(path.landings(&inst.jumps), vec![-5]);
        let zero = GrasshopperInstance::new(vec![0, 3], vec![BTreeSet::new(), BTreeSet::new()]);
        assert!(signed_search(&zero).is_err());
    }

    #[test]
    fn warnings_for_zero_and_total() {
        let inst = GrasshopperInstance::new(vec![1, 2], vec![set(&[0, 3])]);
        assert_eq!(inst.validate().unwrap().len(), 2);
    }

    #[test]
    fn randomized_trials_are_mode_independent() {
        let a = randomized_search_trials(Exec::Sequential, 3, &[2, 1], None, 40, 5).unwrap();
        let b = randomized_search_trials(Exec::Parallel, 3, &[2, 1], None, 40, 5).unwrap();
        assert_eq!(a, b);
        assert!(a.all_passed());
    }
}
